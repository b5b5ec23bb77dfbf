#ifndef CHOILAB_POSITIVITY_HPP
#define CHOILAB_POSITIVITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "choilab/choi.hpp"
#include "choilab/config.hpp"
#include "choilab/norms.hpp"

namespace choilab {

enum class Verdict { certified_yes, certified_no, heuristic_yes };

std::string verdict_name(Verdict v);

/// Outcome of a positivity test. `margin` is the minimum eigenvalue for
/// spectral tests, or the smallest quadratic form found over the tested
/// Schmidt class. A certified_no always carries a witness vector that has
/// been re-verified independently (Schmidt rank and sign).
struct PositivityCertificate {
  Verdict verdict = Verdict::certified_yes;
  double margin = 0.0;
  std::optional<std::vector<cplx>> witness;
  int k = 0;
  double tol = 0.0;
};

// Complete positivity: Choi matrix PSD. Certified both ways.
PositivityCertificate is_cp(const LinearMap &phi, double tol = 1e-9);

// Exact k-positivity of Tr - lambda Ad_V via Ky Fan norms: yes iff
// lambda * ||V||^2_(k) <= 1. A failing case carries the closed-form witness
// from the top-k singular subspace of V.
PositivityCertificate is_k_positive_phi_lambda(const CMatrix &v, double lambda,
                                               int k);

// k-block positivity of a Hermitian C on C^m (x) C^n: minimizes the
// quadratic form over Schmidt rank <= k by see-saw descent. A negative
// minimum below -tol*scale certifies "no"; otherwise heuristic-yes, upgraded
// to certified when C is PSD, k = min(m,n), or the small-dimension sampling
// oracle agrees. Extra deterministic descent seeds may be supplied.
PositivityCertificate
is_k_block_positive(const CMatrix &c, std::size_t m, std::size_t n, int k,
                    const RunConfig &cfg = {}, double tol = 1e-9,
                    std::span<const std::vector<cplx>> seed_vectors = {});

/// Compression sampling report: CP checks of Ad_F o phi, phi o Ad_F and
/// Ad_F o phi o Ad_E over Haar-random k-dimensional projections, plus one
/// deterministic candidate built from the most negative eigenvector of the
/// Choi matrix. Any CP failure certifies that phi is not k-positive.
struct CompressionReport {
  int k = 0;
  int samples = 0;
  int failures_left = 0;   // Ad_F o phi not CP
  int failures_right = 0;  // phi o Ad_F not CP
  int failures_both = 0;   // Ad_F o phi o Ad_E not CP
  bool deterministic_candidate_failed = false;
  std::optional<int> first_failing_sample;
  Verdict blockpos_verdict = Verdict::heuristic_yes;
  bool agreement = true; // sampling outcome consistent with blockpos verdict
  bool any_failure() const {
    return failures_left + failures_right + failures_both > 0 ||
           deterministic_candidate_failed;
  }
};

CompressionReport compression_check(const LinearMap &phi, int k, int samples,
                              const RunConfig &cfg = {});

} // namespace choilab

#endif
