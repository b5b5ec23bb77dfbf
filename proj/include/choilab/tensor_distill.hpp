#ifndef CHOILAB_TENSOR_DISTILL_HPP
#define CHOILAB_TENSOR_DISTILL_HPP

#include <string>
#include <vector>

#include "choilab/choi.hpp"
#include "choilab/config.hpp"
#include "choilab/kernels.hpp"
#include "choilab/norms.hpp"
#include "choilab/positivity.hpp"

namespace choilab {

// Reorders a matrix on (K x H) (x) (K x H) into (K x K) (x) (H x H): the
// index permutation that turns kron(C_phi, C_psi) into the Choi matrix of
// phi (x) psi. dims are per copy.
CMatrix regroup_khkh_to_kkhh(const CMatrix &a, std::size_t m, std::size_t n);

// Choi matrix of phi^(x)copies, with the regrouping applied so Schmidt-rank
// tests see the (K...K) | (H...H) bipartition. copies must be 1 or 2 and the
// resulting dimension must stay within dim_cap.
LinearMap tensor_power_map(const LinearMap &phi, int copies,
                           std::size_t dim_cap = kDefaultKronCap);

// Singular values of phi (x) psi with respect to the regrouped bipartition.
// They must equal the pairwise products of the factors' singular values;
// a mismatch beyond 1e-10 raises NumericalFailure.
SchmidtInfo product_vector_singular_values(std::span<const cplx> phivec,
                                           std::size_t m1, std::size_t n1,
                                           std::span<const cplx> psivec,
                                           std::size_t m2, std::size_t n2);

/// One sufficient 2-positivity test for (Tr - lambda Ad_V)^(x)2.
/// `fired` means the test's inequality held; `certified` means it held with
/// exact arithmetic or with the safety margin on top of a heuristic norm.
struct CriterionRecord {
  std::string name;
  double threshold = 0.0; // 1/lambda
  double value = 0.0;     // the norm side of the inequality
  bool fired = false;
  bool certified = false;
  Certainty norm_certainty = Certainty::exact;
};

// The lambda-independent norm ||1 (x) p + p (x) 1||_S(2) on the regrouped
// two-copy space, p = C_{Ad_V}. Useful on its own for sweeps.
NormResult two_copy_pair_norm(const CMatrix &v, const RunConfig &cfg = {});

// 1/lambda >= ||1 (x) p + p (x) 1||_S(2) on the regrouped two-copy space,
// p = C_{Ad_V}. The norm is a see-saw lower bound, so certification demands
// cfg.safety_margin of slack unless the norm itself is exact.
CriterionRecord pair_bound_check(const CMatrix &v, double lambda,
                            const RunConfig &cfg = {});

// 1/lambda >= 4 ||V||^2_(1). Fully certified; no heuristic norm involved.
CriterionRecord s1_bound_check(const CMatrix &v, double lambda);

// Tr - 4 lambda Ad_V is 1-positive. Same arithmetic as s1_bound_check, so the
// two verdicts always coincide.
CriterionRecord one_positive_check(const CMatrix &v, double lambda);

enum class DistillOverall {
  two_positive_certified,
  two_positive_heuristic,
  not_two_positive,
  inconclusive
};

std::string distill_overall_name(DistillOverall o);

/// n-copy undistillability report for the state family 1 - lambda p,
/// p = C_{Ad_V} with ||V||_HS = 1.
struct DistillReport {
  CMatrix v;
  double lambda = 0.0;
  int n_copies = 1;
  std::vector<CriterionRecord> criteria;
  std::optional<PositivityCertificate> blockpos;
  DistillOverall overall = DistillOverall::inconclusive;
};

// n = 1: exact verdict at k = 2. n = 2: the sufficient criteria above plus a
// Schmidt-rank-2 see-saw search on the regrouped two-copy Choi matrix. A
// fired criterion together with a verified rank-2 witness is an error state
// (NumericalFailure). Dimensions above cfg.max_d overflow at n = 2.
DistillReport distill_report(const CMatrix &v, double lambda, int n_copies,
                             const RunConfig &cfg = {});

} // namespace choilab

#endif
