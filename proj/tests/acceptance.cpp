// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Every tolerance is pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "choilab/entanglement.hpp"
#include "choilab/json_io.hpp"
#include "choilab/kernels.hpp"
#include "choilab/rng.hpp"
#include "choilab/tensor_distill.hpp"

using namespace choilab;

namespace {

constexpr std::uint64_t kSuiteSeed = 20100603;

struct Criterion {
  std::string name;
  std::function<bool(std::string &)> body;
};

CMatrix isotropic_v(std::size_t d) {
  CMatrix v = CMatrix::identity(d);
  v *= cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0);
  return v;
}

std::vector<cplx> singlet_vector() {
  std::vector<cplx> s(4, cplx(0.0));
  s[1] = 1.0 / std::sqrt(2.0);
  s[2] = -1.0 / std::sqrt(2.0);
  return s;
}

// ---- 1: dyad Choi matrices: norm, trace, pairing -------------------------

bool criterion_dyads(std::string &detail) {
  RandomStream rng(derive_seed(kSuiteSeed, 1));
  double worst_norm = 0.0, worst_pair = 0.0;
  for (std::size_t d = 2; d <= 6; ++d) {
    CMatrix prev;
    for (int rep = 0; rep < 40; ++rep) {
      const CMatrix v = rng.gaussian_matrix(d, d);
      const CMatrix c = ad_v_choi(v).choi;
      const double hs2 = fro_norm(v) * fro_norm(v);
      worst_norm = std::max(worst_norm, std::abs(fro_norm(c) - hs2) / hs2);
      worst_norm =
          std::max(worst_norm, std::abs(trace(c).real() - hs2) / hs2);
      if (rep > 0) {
        const double pairing = hs_inner(c, ad_v_choi(prev).choi).real();
        const double overlap = std::norm(hs_inner(v, prev));
        worst_pair = std::max(worst_pair, std::abs(pairing - overlap));
      }
      prev = v;
    }
  }
  detail = "max relative norm/trace error " + std::to_string(worst_norm) +
           ", max pairing error " + std::to_string(worst_pair);
  return worst_norm <= 1e-10 && worst_pair <= 1e-9;
}

// ---- 2: Schmidt operator norm of dyads equals Ky Fan values --------------

bool criterion_dyad_schmidt_norm(std::string &detail) {
  RunConfig cfg;
  cfg.seed = derive_seed(kSuiteSeed, 2);
  cfg.restarts = 16;
  double worst_low = 0.0, worst_high = 0.0;
  for (std::size_t d = 2; d <= 5; ++d) {
    RandomStream rng(derive_seed(cfg.seed, d));
    for (int rep = 0; rep < 50; ++rep) {
      const CMatrix v = rng.gaussian_matrix(d, d);
      const CMatrix c = ad_v_choi(v).choi;
      for (int k = 1; k <= static_cast<int>(d); ++k) {
        const double kf = ky_fan_sq(v, k).value;
        const double got = schmidt_op_norm(c, d, d, k, cfg).value;
        worst_low = std::max(worst_low, kf - got);
        worst_high = std::max(worst_high, got - kf);
        if (kf - got > 1e-6 || got - kf > 1e-9) {
          detail = "failure at d=" + std::to_string(d) +
                   " k=" + std::to_string(k) + ": got " + std::to_string(got) +
                   " expected " + std::to_string(kf);
          return false;
        }
      }
    }
  }
  detail = "max undershoot " + std::to_string(worst_low) + ", max overshoot " +
           std::to_string(worst_high);
  return true;
}

// ---- 3: block-positivity transition matches 1 / ||V||^2_(k) --------------

bool criterion_blockpos_bisection(std::string &detail) {
  RunConfig cfg;
  cfg.seed = derive_seed(kSuiteSeed, 3);
  cfg.restarts = 12;
  RandomStream rng(cfg.seed);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const CMatrix v = rng.gaussian_matrix(3, 3);
    for (int k = 1; k <= 3; ++k) {
      const double kf = ky_fan_sq(v, k).value;
      const auto positive = [&](double lambda) {
        const LinearMap phi = phi_lambda_ad_v(v, lambda);
        return is_k_block_positive(phi.choi, 3, 3, k, cfg).verdict !=
               Verdict::certified_no;
      };
      double lo = 0.0, hi = 1.2 / kf;
      if (positive(hi)) {
        detail = "upper bracket unexpectedly positive";
        return false;
      }
      while (hi - lo > 1e-5)
        (positive(0.5 * (lo + hi)) ? lo : hi) = 0.5 * (lo + hi);
      worst = std::max(worst, std::abs(0.5 * (lo + hi) - 1.0 / kf));
    }
  }
  detail = "max transition deviation " + std::to_string(worst);
  return worst <= 1e-3;
}

// ---- 4: complete positivity equals d-block positivity --------------------

bool criterion_cp_equals_full_block(std::string &detail) {
  RunConfig cfg;
  cfg.seed = derive_seed(kSuiteSeed, 4);
  RandomStream rng(cfg.seed);
  int disagreements = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t d = 2 + rep % 2;
    const CMatrix v = rng.gaussian_matrix(d, d);
    const double hs2 = fro_norm(v) * fro_norm(v);
    const double lambda = 1.5 * rng.uniform01() / hs2;
    const LinearMap phi = phi_lambda_ad_v(v, lambda);
    const Verdict a = is_cp(phi).verdict;
    const Verdict b =
        is_k_block_positive(phi.choi, d, d, static_cast<int>(d), cfg).verdict;
    disagreements += a != b;
  }
  detail = std::to_string(disagreements) + " disagreements in 100 samples";
  return disagreements == 0;
}

// ---- 5: positive part dominates in the Schmidt norm ----------------------

bool criterion_positive_part_dominates(std::string &detail) {
  RunConfig cfg;
  cfg.seed = derive_seed(kSuiteSeed, 5);
  cfg.restarts = 12;
  RandomStream rng(cfg.seed);
  int violations = 0, tested = 0;
  double worst_gap = 0.0;
  while (tested < 100) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng.next_u64() % 3);
    const CMatrix v = rng.gaussian_matrix(d, d);
    const int k = 1 + static_cast<int>(rng.next_u64() % d);
    const double kf = ky_fan_sq(v, k).value;
    const double lambda = rng.uniform01() / kf;
    if (is_k_positive_phi_lambda(v, lambda, k).verdict !=
        Verdict::certified_yes)
      continue;
    ++tested;
    const ChoiSplit split = split_choi(phi_lambda_ad_v(v, lambda));
    const double plus = schmidt_op_norm(split.positive_part, d, d, k, cfg).value;
    const double minus =
        schmidt_op_norm(split.negative_part, d, d, k, cfg).value;
    worst_gap = std::max(worst_gap, minus - plus);
    violations += minus - plus > 1e-7;
  }
  detail = std::to_string(violations) + " violations, worst gap " +
           std::to_string(worst_gap);
  return violations == 0;
}

// ---- 6: singlet witness suite --------------------------------------------

bool criterion_singlet_witness(std::string &detail) {
  RunConfig cfg;
  cfg.seed = derive_seed(kSuiteSeed, 6);
  const std::vector<cplx> s = singlet_vector();
  const CMatrix e = CMatrix::dyad(s, s);
  const WitnessReport report = build_witness(e, 2, 2, ConeTag::P(), cfg, 500);

  bool ok = std::abs(report.mu - 0.5) <= 1e-7;
  ok = ok && std::abs(report.lambda - 2.0) <= 1e-6;

  CMatrix expected = CMatrix::identity(4);
  expected -= 2.0 * e;
  ok = ok && max_abs_diff(report.witness_choi, expected) <= 1e-6;

  double worst = 0.0;
  for (const ViolationRecord &r : report.certificates)
    worst = std::max(worst, std::abs(r.expectation - (1.0 - report.lambda)));
  ok = ok && report.certificates.size() == 500 && worst <= 1e-10;

  const ChoiSplit split = split_choi({2, 2, report.witness_choi});
  ok = ok && split.rank_neg == 1 && fro_norm(split.support_neg - e) <= 1e-8;

  detail = "mu " + std::to_string(report.mu) + ", lambda " +
           std::to_string(report.lambda) + ", worst violation deviation " +
           std::to_string(worst) + ", support rank " +
           std::to_string(split.rank_neg);
  return ok;
}

// ---- 7: negative support dimension bound at d = 4 ------------------------

bool criterion_support_bound(std::string &detail) {
  RandomStream rng(derive_seed(kSuiteSeed, 7));
  int tested = 0, failures = 0;
  while (tested < 200) {
    const CMatrix v = rng.gaussian_matrix(4, 4);
    const int k = 1 + static_cast<int>(rng.next_u64() % 3);
    const double kf = ky_fan_sq(v, k).value;
    const double lambda = rng.uniform01() / kf;
    if (is_k_positive_phi_lambda(v, lambda, k).verdict !=
        Verdict::certified_yes)
      continue;
    ++tested;
    const SupportBoundReport r =
        check_support_bound(phi_lambda_ad_v(v, lambda), k);
    failures += !r.ok;
  }
  detail = std::to_string(failures) + " bound violations in 200 samples";
  return failures == 0;
}

// ---- 8: regrouped singular values are pairwise products ------------------

bool criterion_product_singular_values(std::string &detail) {
  RandomStream rng(derive_seed(kSuiteSeed, 8));
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::vector<cplx> a = rng.unit_vector(9);
    const std::vector<cplx> b = rng.unit_vector(9);
    SchmidtInfo info;
    try {
      info = product_vector_singular_values(a, 3, 3, b, 3, 3);
    } catch (const NumericalFailure &) {
      detail = "pairwise product rule violated beyond 1e-10";
      return false;
    }
    const SchmidtInfo fa = schmidt_info(a, 3, 3);
    const SchmidtInfo fb = schmidt_info(b, 3, 3);
    std::vector<double> products;
    for (double sa : fa.singular_values)
      for (double sb : fb.singular_values)
        products.push_back(sa * sb);
    std::sort(products.begin(), products.end(), std::greater<>());
    for (std::size_t i = 0; i < info.singular_values.size(); ++i)
      worst = std::max(worst, std::abs(info.singular_values[i] - products[i]));
  }
  detail = "max deviation " + std::to_string(worst);
  return worst <= 1e-10;
}

// ---- 9: two-copy sufficient criteria at d = 5 ----------------------------

bool criterion_two_copy_criteria(std::string &detail) {
  RunConfig cfg;
  cfg.seed = derive_seed(kSuiteSeed, 9);
  const CMatrix v5 = isotropic_v(5);

  const CriterionRecord s1_at = s1_bound_check(v5, 1.25);
  const CriterionRecord onep_at = one_positive_check(v5, 1.25);
  const CriterionRecord s1_above = s1_bound_check(v5, 1.26);
  const CriterionRecord onep_above = one_positive_check(v5, 1.26);
  bool ok = s1_at.fired && onep_at.fired && !s1_above.fired && !onep_above.fired;

  // see-saw over Schmidt rank 2 on the regrouped two-copy Choi matrix
  RunConfig heavy = cfg;
  heavy.restarts = 64;
  const LinearMap doubled =
      tensor_power_map(phi_lambda_ad_v(v5, 1.25), 2);
  const PositivityCertificate block =
      is_k_block_positive(doubled.choi, 25, 25, 2, heavy);
  ok = ok && block.verdict != Verdict::certified_no && block.margin >= -1e-7;

  RandomStream rng(derive_seed(cfg.seed, 99));
  int disagreements = 0;
  for (int rep = 0; rep < 200; ++rep) {
    CMatrix v = rng.gaussian_matrix(3, 3);
    v *= cplx(1.0 / fro_norm(v), 0.0);
    const double kf1 = ky_fan_sq(v, 1).value;
    const double lambda = (0.2 + 1.6 * rng.uniform01()) / (4.0 * kf1);
    disagreements += s1_bound_check(v, lambda).fired != one_positive_check(v, lambda).fired;
  }
  ok = ok && disagreements == 0;

  detail = "fires at 1.25: " + std::string(s1_at.fired && onep_at.fired ? "yes" : "no") +
           ", fires at 1.26: " +
           std::string(s1_above.fired || onep_above.fired ? "yes" : "no") +
           ", two-copy margin " + std::to_string(block.margin) + ", " +
           std::to_string(disagreements) + " criterion disagreements";
  return ok;
}

// ---- 10: one-copy transition at lambda = d/2 ------------------------------

bool criterion_one_copy_transition(std::string &detail) {
  double worst = 0.0;
  for (std::size_t d = 2; d <= 6; ++d) {
    const CMatrix v = isotropic_v(d);
    const auto positive = [&](double lambda) {
      return is_k_positive_phi_lambda(v, lambda, 2).verdict ==
             Verdict::certified_yes;
    };
    double lo = 0.0, hi = static_cast<double>(d);
    if (positive(hi))
      return false;
    while (hi - lo > 1e-7)
      (positive(0.5 * (lo + hi)) ? lo : hi) = 0.5 * (lo + hi);
    worst = std::max(worst, std::abs(0.5 * (lo + hi) - 0.5 * d));
  }
  detail = "max transition deviation " + std::to_string(worst);
  return worst <= 1e-6;
}

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1 dyad Choi norms and pairing (d=2..6, 200 samples)", criterion_dyads},
      {"2 Schmidt norm of dyads vs Ky Fan (d=2..5, 50 each)",
       criterion_dyad_schmidt_norm},
      {"3 block-positivity transition vs exact boundary (d=3)",
       criterion_blockpos_bisection},
      {"4 complete positivity == d-block positivity (100 maps)",
       criterion_cp_equals_full_block},
      {"5 positive part dominates negative part (100 maps)",
       criterion_positive_part_dominates},
      {"6 singlet witness suite (500 sampled states)",
       criterion_singlet_witness},
      {"7 negative support bound at d=4 (200 maps)", criterion_support_bound},
      {"8 regrouped singular values multiply (100 pairs)",
       criterion_product_singular_values},
      {"9 two-copy sufficient criteria at d=5", criterion_two_copy_criteria},
      {"10 one-copy transition at d/2 (d=2..6)",
       criterion_one_copy_transition},
  };

  int failures = 0;
  for (const Criterion &c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.body(detail);
    } catch (const std::exception &e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] %-55s (%6.2f s) %s\n", ok ? "PASS" : "FAIL",
                c.name.c_str(), secs, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
  }
  if (failures > 0)
    std::printf("%d criterion(s) failed\n", failures);
  else
    std::printf("all criteria passed\n");
  return failures;
}
