#include <doctest.h>

#include "choilab/entanglement.hpp"
#include "helpers.hpp"

using namespace choilab;
using namespace testutil;

namespace {

std::vector<cplx> singlet() {
  std::vector<cplx> v(4, cplx(0.0));
  v[1] = 1.0 / std::sqrt(2.0);
  v[2] = -1.0 / std::sqrt(2.0);
  return v;
}

CMatrix projection_onto(const std::vector<std::vector<cplx>> &raw_basis,
                        std::size_t dim) {
  CMatrix frame(dim, raw_basis.size());
  for (std::size_t c = 0; c < raw_basis.size(); ++c)
    for (std::size_t r = 0; r < dim; ++r)
      frame(r, c) = raw_basis[c][r];
  orthonormalize_columns(frame);
  CMatrix proj(dim, dim);
  for (std::size_t c = 0; c < raw_basis.size(); ++c)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        proj(i, j) += frame(i, c) * std::conj(frame(j, c));
  return proj;
}

// Orthocomplement of five product vectors (1,t,t^2) (x) (1,t,t^2) in 3 (x) 3:
// a four-dimensional subspace with no product vector.
CMatrix entangled_four_dim_projection() {
  const double ts[5] = {0.0, 1.0, -1.0, 2.0, -2.0};
  CMatrix frame(9, 5);
  for (std::size_t c = 0; c < 5; ++c) {
    const double t = ts[c];
    const double u[3] = {1.0, t, t * t};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        frame(i * 3 + j, c) = u[i] * u[j];
  }
  orthonormalize_columns(frame);
  CMatrix proj = CMatrix::identity(9);
  for (std::size_t c = 0; c < 5; ++c)
    for (std::size_t i = 0; i < 9; ++i)
      for (std::size_t j = 0; j < 9; ++j)
        proj(i, j) -= frame(i, c) * std::conj(frame(j, c));
  return proj;
}

} // namespace

TEST_CASE("mu of the full projection is one") {
  const NormResult mu =
      mu_of_projection(CMatrix::identity(4), 2, 2, ConeTag::P());
  CHECK(mu.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(build_witness(CMatrix::identity(4), 2, 2, ConeTag::P()),
                  Degenerate);
}

TEST_CASE("mu of the singlet projection is one half") {
  const std::vector<cplx> s = singlet();
  const CMatrix e = CMatrix::dyad(s, s);
  const NormResult mu = mu_of_projection(e, 2, 2, ConeTag::P());
  CHECK(mu.value == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(mu.certified == Certainty::exact);
  // the maximizer is the best separable approximation found
  REQUIRE(!mu.maximizer.empty());
  CHECK(schmidt_info(mu.maximizer, 2, 2).schmidt_rank == 1);
}

TEST_CASE("mu of the maximally entangled projection is k/d") {
  const CMatrix e = max_entangled_projection(3);
  CHECK(mu_of_projection(e, 3, 3, ConeTag::P()).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-7));
  CHECK(mu_of_projection(e, 3, 3, ConeTag::Pk(2)).value ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-7));
}

TEST_CASE("mu is monotone in the cone order") {
  RandomStream rng(91);
  const CMatrix e = haar_projection(12, 5, rng); // random projection on 3 (x) 4
  const double mu1 = mu_of_projection(e, 3, 4, ConeTag::P()).value;
  const double mu2 = mu_of_projection(e, 3, 4, ConeTag::Pk(2)).value;
  CHECK(mu2 >= mu1 - 1e-8);
}

TEST_CASE("mu validates its inputs") {
  RandomStream rng(92);
  CHECK_THROWS_AS(mu_of_projection(rng.gaussian_matrix(4, 4), 2, 2, ConeTag::P()),
                  NotProjection);
  const CMatrix e = max_entangled_projection(2);
  CHECK_THROWS_AS(mu_of_projection(e, 2, 2, ConeTag::Pk(2)), ConeContainsCP);
  CHECK_THROWS_AS(mu_of_projection(e, 2, 2, ConeTag::CP()), ConeContainsCP);
  CHECK_THROWS_AS(mu_of_projection(e, 2, 2, ConeTag::SP()), UnsupportedCone);
}

TEST_CASE("witness from the singlet projection") {
  const std::vector<cplx> s = singlet();
  const CMatrix e = CMatrix::dyad(s, s);
  const WitnessReport report = build_witness(e, 2, 2, ConeTag::P(), {}, 100);

  CHECK(report.mu == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(report.lambda == doctest::Approx(2.0).epsilon(1e-7));
  CMatrix expected = CMatrix::identity(4);
  expected -= 2.0 * e;
  CHECK(matrices_close(report.witness_choi, expected, 1e-7));
  CHECK(report.rank_e == 1);
  CHECK(report.bound_ok); // 1 <= (2-1)(2-1)

  REQUIRE(report.certificates.size() == 100);
  for (const ViolationRecord &r : report.certificates)
    CHECK(r.expectation ==
          doctest::Approx(1.0 - report.lambda).epsilon(1e-10));
  CHECK(!report.blockpos_disagrees);
}

TEST_CASE("witness construction is refused when a product vector is inside") {
  std::vector<cplx> prod(4, cplx(0.0));
  prod[0] = 1.0; // e_0 (x) e_0
  const CMatrix e = CMatrix::dyad(prod, prod);
  CHECK_THROWS_AS(build_witness(e, 2, 2, ConeTag::P()), Degenerate);
}

TEST_CASE("witness from a four-dimensional completely entangled subspace") {
  const CMatrix e = entangled_four_dim_projection();
  RunConfig cfg;
  cfg.restarts = 24;
  const WitnessReport report = build_witness(e, 3, 3, ConeTag::P(), cfg, 500);

  CHECK(report.mu < 1.0 - 1e-7);
  CHECK(report.rank_e == 4);
  CHECK(report.bound_ok); // 4 <= (3-1)(3-1)
  for (const ViolationRecord &r : report.certificates)
    CHECK(r.expectation ==
          doctest::Approx(1.0 - report.lambda).epsilon(1e-9));

  // support of the negative part comes back as e itself
  const ChoiSplit split = split_choi({3, 3, report.witness_choi});
  CHECK(split.rank_neg == 4);
  CHECK(fro_norm(split.support_neg - e) <= 1e-8);
}

TEST_CASE("complete entanglement detection") {
  std::vector<cplx> prod(4, cplx(0.0));
  prod[0] = 1.0;
  const CMatrix trivial = CMatrix::dyad(prod, prod);
  const EntanglementEvidence no = is_completely_entangled(trivial, 2, 2);
  CHECK(!no.completely_entangled);
  CHECK(no.best_overlap >= 1.0 - 1e-7);
  CHECK(no.certified);

  const std::vector<cplx> s = singlet();
  const EntanglementEvidence yes =
      is_completely_entangled(CMatrix::dyad(s, s), 2, 2);
  CHECK(yes.completely_entangled);
  CHECK(yes.best_overlap == doctest::Approx(0.5).epsilon(1e-7));
  REQUIRE(!yes.best_product_vector.empty());
  CHECK(schmidt_info(yes.best_product_vector, 2, 2).schmidt_rank == 1);
}

TEST_CASE("antisymmetric two-dimensional subspace in 3 (x) 3 is entangled") {
  std::vector<cplx> a(9, cplx(0.0)), b(9, cplx(0.0));
  const double r2 = 1.0 / std::sqrt(2.0);
  a[0 * 3 + 1] = r2; // e1 (x) e2 - e2 (x) e1
  a[1 * 3 + 0] = -r2;
  b[0 * 3 + 2] = r2; // e1 (x) e3 - e3 (x) e1
  b[2 * 3 + 0] = -r2;
  const CMatrix e = projection_onto({a, b}, 9);
  const EntanglementEvidence ev = is_completely_entangled(e, 3, 3);
  CHECK(ev.completely_entangled);
  CHECK(ev.best_overlap < 1.0 - 1e-7);
}

TEST_CASE("projections above the dimension bound always contain products") {
  RandomStream rng(93);
  // rank 5 > (3-1)(3-1) = 4
  const CMatrix e = haar_projection(9, 5, rng);
  const EntanglementEvidence ev = is_completely_entangled(e, 3, 3);
  CHECK(!ev.completely_entangled);
  CHECK(ev.certified);
  CHECK(ev.rank_e == 5);
  CHECK(ev.rank_bound == 4);
}

TEST_CASE("support bound on CP maps and the lambda family") {
  RandomStream rng(94);
  const SupportBoundReport cp =
      check_support_bound(random_kraus_map(3, 3, 2, rng), 1);
  CHECK(cp.ok);
  CHECK(cp.rank_neg == 0);

  const SupportBoundReport fam =
      check_support_bound(phi_lambda_ad_v(normalized_identity(3), 3.0), 1);
  CHECK(fam.ok);
  CHECK(fam.rank_neg == 1);
  CHECK(fam.bound == 4);

  CHECK_THROWS_AS(check_support_bound(trace_map(2, 2), 3), BadK);
}

TEST_CASE("support bound sweep over certified k-positive maps at d = 4") {
  RandomStream rng(95);
  int tested = 0;
  for (int rep = 0; rep < 30; ++rep) {
    const CMatrix v = rng.gaussian_matrix(4, 4);
    const int k = 1 + static_cast<int>(rng.next_u64() % 3);
    const double kf = ky_fan_sq(v, k).value;
    const double lambda = rng.uniform01() / kf;
    if (is_k_positive_phi_lambda(v, lambda, k).verdict != Verdict::certified_yes)
      continue;
    const SupportBoundReport r =
        check_support_bound(phi_lambda_ad_v(v, lambda), k);
    CHECK(r.ok);
    CHECK(r.bound == static_cast<std::size_t>((4 - k) * (4 - k)));
    ++tested;
  }
  CHECK(tested >= 25);
}
