#include "choilab/tensor_distill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "choilab/eig.hpp"
#include "choilab/kernels.hpp"

namespace choilab {

namespace {

constexpr double kNormalizationTol = 1e-9;
// Boundary slack matching the exact k-positivity test.
constexpr double kBoundarySlack = 1e-12;

void check_normalized(const CMatrix &v) {
  if (std::abs(fro_norm(v) - 1.0) > kNormalizationTol)
    throw NotNormalized("Kraus operator must have unit Hilbert-Schmidt norm");
}

std::vector<std::size_t> regroup_permutation(std::size_t m, std::size_t n) {
  const std::size_t dim = m * n * m * n;
  std::vector<std::size_t> perm(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t r2 = r % n;
    const std::size_t i2 = (r / n) % m;
    const std::size_t r1 = (r / (n * m)) % n;
    const std::size_t i1 = r / (n * m * n);
    perm[r] = ((i1 * m + i2) * n + r1) * n + r2;
  }
  return perm;
}

// Product of bipartite vectors, already written in the regrouped index
// order (K1 K2) (x) (H1 H2).
std::vector<cplx> regrouped_product(std::span<const cplx> a, std::size_t m1,
                                    std::size_t n1, std::span<const cplx> b,
                                    std::size_t m2, std::size_t n2) {
  if (a.size() != m1 * n1 || b.size() != m2 * n2)
    throw ShapeMismatch("factor length must match its declared dims");
  std::vector<cplx> out(m1 * n1 * m2 * n2);
  for (std::size_t i1 = 0; i1 < m1; ++i1)
    for (std::size_t r1 = 0; r1 < n1; ++r1) {
      const cplx av = a[i1 * n1 + r1];
      for (std::size_t i2 = 0; i2 < m2; ++i2)
        for (std::size_t r2 = 0; r2 < n2; ++r2)
          out[((i1 * m2 + i2) * n1 + r1) * n2 + r2] =
              av * b[i2 * n2 + r2];
    }
  return out;
}

} // namespace

CMatrix regroup_khkh_to_kkhh(const CMatrix &a, std::size_t m, std::size_t n) {
  const std::size_t dim = m * n * m * n;
  if (a.rows() != dim || a.cols() != dim)
    throw ShapeMismatch("regroup input must be (m n)^2 square");
  const std::vector<std::size_t> perm = regroup_permutation(m, n);
  CMatrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      out(perm[r], perm[c]) = a(r, c);
  return out;
}

LinearMap tensor_power_map(const LinearMap &phi, int copies,
                           std::size_t dim_cap) {
  const std::size_t d = phi.choi_dim();
  if (phi.choi.rows() != d || phi.choi.cols() != d)
    throw ShapeMismatch("Choi matrix shape does not match m*n");
  if (copies == 1)
    return phi;
  if (copies != 2)
    throw DimensionOverflow("tensor powers are limited to one or two copies");
  const CMatrix doubled = kron(phi.choi, phi.choi, dim_cap);
  return {phi.in_dim * phi.in_dim, phi.out_dim * phi.out_dim,
          regroup_khkh_to_kkhh(doubled, phi.in_dim, phi.out_dim)};
}

SchmidtInfo product_vector_singular_values(std::span<const cplx> phivec,
                                           std::size_t m1, std::size_t n1,
                                           std::span<const cplx> psivec,
                                           std::size_t m2, std::size_t n2) {
  const std::vector<cplx> reg =
      regrouped_product(phivec, m1, n1, psivec, m2, n2);
  const SchmidtInfo info = schmidt_info(reg, m1 * m2, n1 * n2);

  const SchmidtInfo fa = schmidt_info(phivec, m1, n1);
  const SchmidtInfo fb = schmidt_info(psivec, m2, n2);
  std::vector<double> products;
  products.reserve(fa.singular_values.size() * fb.singular_values.size());
  for (double sa : fa.singular_values)
    for (double sb : fb.singular_values)
      products.push_back(sa * sb);
  std::sort(products.begin(), products.end(), std::greater<>());

  const double tol =
      1e-10 * std::max(1.0, vec_norm(phivec) * vec_norm(psivec));
  for (std::size_t i = 0; i < info.singular_values.size(); ++i) {
    const double expected = i < products.size() ? products[i] : 0.0;
    if (std::abs(info.singular_values[i] - expected) > tol)
      throw NumericalFailure(
          "regrouped singular values deviate from pairwise products");
  }
  return info;
}

NormResult two_copy_pair_norm(const CMatrix &v, const RunConfig &cfg) {
  check_normalized(v);
  cfg.validate();
  const LinearMap ad = ad_v_choi(v);
  const std::size_t m = ad.in_dim, n = ad.out_dim;
  const CMatrix eye = CMatrix::identity(m * n);
  CMatrix a = kron(eye, ad.choi);
  a += kron(ad.choi, eye);
  const CMatrix reg = regroup_khkh_to_kkhh(a, m, n);
  return schmidt_op_norm(reg, m * m, n * n, 2, cfg);
}

CriterionRecord pair_bound_check(const CMatrix &v, double lambda,
                            const RunConfig &cfg) {
  if (lambda < 0.0)
    throw NegativeLambda("criterion needs lambda >= 0");
  const NormResult norm = two_copy_pair_norm(v, cfg);

  CriterionRecord rec;
  rec.name = "two-copy-pair-norm";
  rec.threshold = lambda > 0.0 ? 1.0 / lambda
                               : std::numeric_limits<double>::infinity();
  rec.value = norm.value;
  rec.norm_certainty = norm.certified;
  rec.fired = rec.threshold >= rec.value;
  if (!rec.fired) {
    rec.certified = false;
  } else if (norm.certified == Certainty::exact) {
    rec.certified = true;
  } else {
    // A lower bound may not certify an upper-bound condition on its own.
    rec.certified = rec.threshold >= rec.value + cfg.safety_margin;
  }
  return rec;
}

CriterionRecord s1_bound_check(const CMatrix &v, double lambda) {
  check_normalized(v);
  if (lambda < 0.0)
    throw NegativeLambda("criterion needs lambda >= 0");
  const double kf1 = ky_fan_sq(v, 1).value;

  CriterionRecord rec;
  rec.name = "four-times-s1";
  rec.threshold = lambda > 0.0 ? 1.0 / lambda
                               : std::numeric_limits<double>::infinity();
  rec.value = 4.0 * kf1;
  // Same arithmetic as the k=1 test of Tr - (4 lambda) Ad_V, so the two
  // criteria can never disagree.
  const double lam4 = 4.0 * lambda;
  rec.fired = lam4 * kf1 <= 1.0 + kBoundarySlack;
  rec.certified = rec.fired;
  rec.norm_certainty = Certainty::exact;
  return rec;
}

CriterionRecord one_positive_check(const CMatrix &v, double lambda) {
  check_normalized(v);
  if (lambda < 0.0)
    throw NegativeLambda("criterion needs lambda >= 0");
  const PositivityCertificate cert =
      is_k_positive_phi_lambda(v, 4.0 * lambda, 1);

  CriterionRecord rec;
  rec.name = "one-positive-at-4lambda";
  rec.threshold = lambda > 0.0 ? 1.0 / lambda
                               : std::numeric_limits<double>::infinity();
  rec.value = 4.0 * ky_fan_sq(v, 1).value;
  rec.fired = cert.verdict == Verdict::certified_yes;
  rec.certified = rec.fired;
  rec.norm_certainty = Certainty::exact;
  return rec;
}

std::string distill_overall_name(DistillOverall o) {
  switch (o) {
  case DistillOverall::two_positive_certified:
    return "2-positive-certified";
  case DistillOverall::two_positive_heuristic:
    return "2-positive-heuristic";
  case DistillOverall::not_two_positive:
    return "not-2-positive";
  case DistillOverall::inconclusive:
    return "inconclusive";
  }
  return "?";
}

DistillReport distill_report(const CMatrix &v, double lambda, int n_copies,
                             const RunConfig &cfg) {
  check_normalized(v);
  if (lambda < 0.0)
    throw NegativeLambda("distillability family needs lambda >= 0");
  if (n_copies != 1 && n_copies != 2)
    throw DimensionOverflow("copy count must be 1 or 2");
  cfg.validate();

  const std::size_t m = v.cols(), n = v.rows();
  if (std::min(m, n) < 2)
    throw BadK("2-positivity needs min dimension >= 2");
  if (n_copies == 2 && std::max(m, n) > cfg.max_d)
    throw DimensionOverflow("dimension exceeds cfg.max_d for two copies");

  DistillReport report;
  report.v = v;
  report.lambda = lambda;
  report.n_copies = n_copies;

  if (n_copies == 1) {
    const PositivityCertificate cert = is_k_positive_phi_lambda(v, lambda, 2);
    CriterionRecord rec;
    rec.name = "one-copy-kyfan-k2";
    rec.threshold = lambda > 0.0 ? 1.0 / lambda
                                 : std::numeric_limits<double>::infinity();
    rec.value = ky_fan_sq(v, 2).value;
    rec.fired = cert.verdict == Verdict::certified_yes;
    rec.certified = true;
    rec.norm_certainty = Certainty::exact;
    report.criteria.push_back(rec);
    report.blockpos = cert;
    report.overall = rec.fired ? DistillOverall::two_positive_certified
                               : DistillOverall::not_two_positive;
    return report;
  }

  report.criteria.push_back(pair_bound_check(v, lambda, cfg));
  report.criteria.push_back(s1_bound_check(v, lambda));
  report.criteria.push_back(one_positive_check(v, lambda));

  const LinearMap single = phi_lambda_ad_v(v, lambda);
  const LinearMap doubled = tensor_power_map(single, 2);

  // Deterministic descent seeds: a single-copy rank-2 witness (when the
  // one-copy test already fails) times a benign product vector, both orders.
  std::vector<std::vector<cplx>> seeds;
  const PositivityCertificate one_copy = is_k_positive_phi_lambda(v, lambda, 2);
  if (one_copy.witness) {
    std::vector<cplx> prod(m * n, cplx(0.0));
    prod[0] = 1.0; // e_0 (x) e_0
    seeds.push_back(
        regrouped_product(*one_copy.witness, m, n, prod, m, n));
    seeds.push_back(
        regrouped_product(prod, m, n, *one_copy.witness, m, n));
  }

  const PositivityCertificate block =
      is_k_block_positive(doubled.choi, m * m, n * n, 2, cfg, 1e-9, seeds);
  report.blockpos = block;

  bool any_fired = false, any_certified = false;
  for (const CriterionRecord &r : report.criteria) {
    any_fired |= r.fired;
    any_certified |= r.fired && r.certified;
  }

  if (any_fired && block.verdict == Verdict::certified_no)
    throw NumericalFailure(
        "sufficient criterion fired but a rank-2 witness was verified; "
        "inconsistent run");

  if (any_certified)
    report.overall = DistillOverall::two_positive_certified;
  else if (any_fired)
    report.overall = DistillOverall::two_positive_heuristic;
  else if (block.verdict == Verdict::certified_no)
    report.overall = DistillOverall::not_two_positive;
  else if (block.verdict == Verdict::certified_yes)
    report.overall = DistillOverall::two_positive_certified;
  else
    report.overall = DistillOverall::two_positive_heuristic;
  return report;
}

} // namespace choilab
