#ifndef CHOILAB_NORMS_HPP
#define CHOILAB_NORMS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "choilab/choi.hpp"
#include "choilab/cmatrix.hpp"
#include "choilab/config.hpp"

namespace choilab {

/// Schmidt data of a bipartite vector psi in C^m (x) C^n: the singular
/// values of its m x n coordinate matrix, descending, and the count above
/// rank_tol (the Schmidt rank).
struct SchmidtInfo {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> singular_values;
  std::size_t schmidt_rank = 0;
};

SchmidtInfo schmidt_info(std::span<const cplx> psi, std::size_t m,
                         std::size_t n, double rank_tol = 1e-9);

// Row-major reshape of psi into its m x n coordinate matrix.
CMatrix coordinate_matrix(std::span<const cplx> psi, std::size_t m,
                          std::size_t n);

enum class Certainty { exact, heuristic_lower_bound };

struct NormResult {
  double value = 0.0;
  // sup <psi|A|psi> without the absolute value (schmidt_op_norm only;
  // equals value elsewhere).
  double signed_sup = 0.0;
  Certainty certified = Certainty::exact;
  int restarts_used = 0;
  std::vector<cplx> maximizer;          // attaining vector, when one exists
  std::optional<CMatrix> maximizer_projection; // ky_fan_proj only
};

/// The concrete mapping-cone family this library works with.
struct ConeTag {
  enum class Kind { P, Pk, CP, SPk, SP };
  Kind kind = Kind::P;
  int k = 0; // Pk / SPk parameter

  static ConeTag P() { return {Kind::P, 0}; }
  static ConeTag Pk(int k) { return {Kind::Pk, k}; }
  static ConeTag CP() { return {Kind::CP, 0}; }
  static ConeTag SPk(int k) { return {Kind::SPk, k}; }
  static ConeTag SP() { return {Kind::SP, 0}; }

  std::string name() const;
};

// Sum of the k largest eigenvalues of V V^* (squares of singular values).
NormResult ky_fan_sq(const CMatrix &v, int k);

// Same value through the projection formulation: sup over rank-k projections
// F of Tr(F V V^*); the maximizer projection is returned. V must be square.
NormResult ky_fan_proj(const CMatrix &v, int k);

// value^2 = sum of the k largest squared singular values of psi's
// coordinate matrix.
NormResult schmidt_vector_norm(std::span<const cplx> psi, std::size_t m,
                               std::size_t n, int k);

// sup over unit vectors of Schmidt rank <= k of |<psi|A|psi>| for Hermitian
// A on C^m (x) C^n. Exact for k = min(m,n) (spectral radius); otherwise a
// see-saw lower bound, upgraded to exact when the independent sampling
// oracle agrees (m n <= cfg.oracle_cap).
NormResult schmidt_op_norm(const CMatrix &a, std::size_t m, std::size_t n,
                           int k, const RunConfig &cfg = {});

// Cone norm of a map through its Choi matrix: P -> k=1 Schmidt norm,
// Pk(k) -> Schmidt norm at k, CP -> spectral radius. SP/SPk are not norm
// targets here and raise UnsupportedCone.
NormResult map_cone_norm(const LinearMap &phi, ConeTag cone,
                         const RunConfig &cfg = {});

//=========================================================================
// Extremization engines (shared with the positivity module)
//=========================================================================

struct SeesawOutcome {
  double value = 0.0;
  std::vector<cplx> vector;
  int restarts_used = 0;
};

// Alternating exact maximization (or minimization) of <psi|A|psi> over unit
// vectors psi = vec(X Z^T) with X m x k, Z n x k. Each half-step solves a
// compressed Hermitian eigenproblem, so the iteration is monotone. Restarts
// run on the worker pool; the merge is by (value, restart index) and the
// result is independent of scheduling. Entries of `seed_vectors` are
// truncated to Schmidt rank k and prepended as deterministic restarts.
// When `trace` is non-null the per-half-step values of restart 0 are
// appended to it.
SeesawOutcome seesaw_extremum(const CMatrix &a, std::size_t m, std::size_t n,
                              int k, bool maximize, const RunConfig &cfg,
                              std::span<const std::vector<cplx>> seed_vectors = {},
                              std::vector<double> *trace = nullptr);

// Independent check: seeded random Schmidt-rank-k states plus a truncated
// projected power iteration polish. Shares no code path with the see-saw.
SeesawOutcome sampled_extremum(const CMatrix &a, std::size_t m, std::size_t n,
                               int k, bool maximize, const RunConfig &cfg);

// Truncates psi to Schmidt rank <= k and renormalizes.
std::vector<cplx> truncate_schmidt_rank(std::span<const cplx> psi,
                                        std::size_t m, std::size_t n, int k);

} // namespace choilab

#endif
