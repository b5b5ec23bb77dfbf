#include "choilab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "choilab/eig.hpp"
#include "choilab/kernels.hpp"
#include "choilab/rng.hpp"

namespace choilab {

namespace {

constexpr double kHermTol = 1e-9;

void check_bipartite_operator(const CMatrix &a, std::size_t m, std::size_t n) {
  if (a.rows() != m * n || a.cols() != m * n)
    throw ShapeMismatch("operator must be (m n) x (m n)");
}

void check_k(int k, std::size_t m, std::size_t n) {
  if (k < 1 || static_cast<std::size_t>(k) > std::min(m, n))
    throw BadK("k must lie in [1, min(m,n)]");
}

CMatrix symmetrized(const CMatrix &a) {
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return out;
}

// psi[i*n+j] = sum_a X(i,a) Z(j,a)
std::vector<cplx> expand_factors(const CMatrix &x, const CMatrix &z) {
  const std::size_t m = x.rows(), n = z.rows(), k = x.cols();
  std::vector<cplx> psi(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t a = 0; a < k; ++a)
        s += x(i, a) * z(j, a);
      psi[i * n + j] = s;
    }
  return psi;
}

struct FactorPair {
  CMatrix x; // m x k
  CMatrix z; // n x k
};

// Rank-k factors of psi's coordinate matrix: X holds the scaled left
// singular vectors, Z the (conjugated) right ones, so expand_factors
// reproduces the truncation.
FactorPair factors_from_vector(std::span<const cplx> psi, std::size_t m,
                               std::size_t n, int k) {
  const CMatrix coord = coordinate_matrix(psi, m, n);
  const SVDResult dec = svd(coord);
  FactorPair f{CMatrix(m, k), CMatrix(n, k)};
  for (int a = 0; a < k; ++a) {
    const double s =
        static_cast<std::size_t>(a) < dec.singular_values.size()
            ? dec.singular_values[a]
            : 0.0;
    for (std::size_t i = 0; i < m; ++i)
      f.x(i, a) = dec.u(i, a) * s;
    for (std::size_t j = 0; j < n; ++j)
      f.z(j, a) = std::conj(dec.v(j, a));
  }
  return f;
}

struct RestartResult {
  double value = 0.0;
  std::vector<cplx> vector;
};

RestartResult run_one_restart(const CMatrix &a, std::size_t m, std::size_t n,
                              int k, bool maximize, const RunConfig &cfg,
                              FactorPair init, std::vector<double> *trace) {
  const std::size_t kk = static_cast<std::size_t>(k);
  CMatrix x = std::move(init.x);
  CMatrix z = std::move(init.z);
  orthonormalize_columns(z);

  double val_prev = maximize ? -std::numeric_limits<double>::infinity()
                             : std::numeric_limits<double>::infinity();
  std::vector<cplx> psi;
  int stalled = 0;

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    // X half-step: exact extremization with Z's column space fixed.
    {
      const CMatrix b = compressed_for_left(a, z, m, n, kk);
      const HermEig eig = herm_eig(symmetrized(b));
      const std::size_t pick = maximize ? 0 : b.rows() - 1;
      if (trace)
        trace->push_back(eig.eigenvalues[pick]);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < kk; ++c)
          x(i, c) = eig.eigenvectors(i * kk + c, pick);
      orthonormalize_columns(x);
    }
    // Z half-step, mirror image.
    double val = 0.0;
    {
      const CMatrix b = compressed_for_right(a, x, m, n, kk);
      const HermEig eig = herm_eig(symmetrized(b));
      const std::size_t pick = maximize ? 0 : b.rows() - 1;
      val = eig.eigenvalues[pick];
      if (trace)
        trace->push_back(val);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t c = 0; c < kk; ++c)
          z(j, c) = eig.eigenvectors(j * kk + c, pick);
    }
    psi = expand_factors(x, z); // unit: X orthonormal, vec(Z) unit
    const double improvement = maximize ? val - val_prev : val_prev - val;
    val_prev = val;
    if (improvement < cfg.improve_tol) {
      if (++stalled >= 3)
        break;
    } else {
      stalled = 0;
    }
    orthonormalize_columns(z);
  }

  if (psi.empty())
    psi = expand_factors(x, z);
  normalize(psi);
  return {quadratic_form(a, psi), std::move(psi)};
}

} // namespace

//=========================================================================
// Schmidt data
//=========================================================================

CMatrix coordinate_matrix(std::span<const cplx> psi, std::size_t m,
                          std::size_t n) {
  if (psi.size() != m * n)
    throw ShapeMismatch("vector length must be m*n");
  CMatrix coord(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      coord(i, j) = psi[i * n + j];
  return coord;
}

SchmidtInfo schmidt_info(std::span<const cplx> psi, std::size_t m,
                         std::size_t n, double rank_tol) {
  const SVDResult dec = svd(coordinate_matrix(psi, m, n));
  SchmidtInfo out;
  out.m = m;
  out.n = n;
  out.singular_values = dec.singular_values;
  out.schmidt_rank = 0;
  for (double s : out.singular_values)
    if (s > rank_tol)
      ++out.schmidt_rank;
  return out;
}

std::vector<cplx> truncate_schmidt_rank(std::span<const cplx> psi,
                                        std::size_t m, std::size_t n, int k) {
  check_k(k, m, n);
  FactorPair f = factors_from_vector(psi, m, n, k);
  std::vector<cplx> out = expand_factors(f.x, f.z);
  const double nrm = vec_norm(out);
  if (nrm < 1e-300) {
    out.assign(m * n, cplx(0.0));
    out[0] = 1.0;
    return out;
  }
  normalize(out);
  return out;
}

//=========================================================================
// Ky Fan and Schmidt vector norms
//=========================================================================

NormResult ky_fan_sq(const CMatrix &v, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > std::min(v.rows(), v.cols()))
    throw BadK("Ky Fan order out of range");
  const SVDResult dec = svd(v);
  double sum = 0.0;
  for (int i = 0; i < k; ++i)
    sum += dec.singular_values[i] * dec.singular_values[i];
  NormResult out;
  out.value = sum;
  out.signed_sup = sum;
  out.certified = Certainty::exact;
  return out;
}

NormResult ky_fan_proj(const CMatrix &v, int k) {
  if (v.rows() != v.cols())
    throw ShapeMismatch("projection formulation needs a square matrix");
  if (k < 1 || static_cast<std::size_t>(k) > v.rows())
    throw BadK("Ky Fan order out of range");
  const CMatrix gram = matmul(v, adjoint(v));
  const HermEig eig = herm_eig(symmetrized(gram), 1e-7);
  const std::size_t d = v.rows();
  CMatrix proj(d, d);
  for (int t = 0; t < k; ++t)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        proj(i, j) +=
            eig.eigenvectors(i, t) * std::conj(eig.eigenvectors(j, t));
  NormResult out;
  out.value = hs_inner(proj, gram).real();
  out.signed_sup = out.value;
  out.certified = Certainty::exact;
  out.maximizer_projection = proj;
  return out;
}

NormResult schmidt_vector_norm(std::span<const cplx> psi, std::size_t m,
                               std::size_t n, int k) {
  check_k(k, m, n);
  const SchmidtInfo info = schmidt_info(psi, m, n);
  double sum = 0.0;
  for (int i = 0; i < k; ++i)
    sum += info.singular_values[i] * info.singular_values[i];
  NormResult out;
  out.value = std::sqrt(sum);
  out.signed_sup = out.value;
  out.certified = Certainty::exact;
  return out;
}

//=========================================================================
// See-saw extremization
//=========================================================================

SeesawOutcome seesaw_extremum(const CMatrix &a, std::size_t m, std::size_t n,
                              int k, bool maximize, const RunConfig &cfg,
                              std::span<const std::vector<cplx>> seed_vectors,
                              std::vector<double> *trace) {
  check_bipartite_operator(a, m, n);
  check_k(k, m, n);
  cfg.validate();

  const CMatrix sym = symmetrized(a);
  const std::size_t kk = static_cast<std::size_t>(k);
  const std::size_t total = seed_vectors.size() + static_cast<std::size_t>(cfg.restarts);

  std::vector<RestartResult> slots(total);
  parallel_for(total, [&](std::size_t r) {
    FactorPair init;
    if (r < seed_vectors.size()) {
      init = factors_from_vector(seed_vectors[r], m, n, k);
    } else {
      RandomStream rng(derive_seed(cfg.seed, r - seed_vectors.size()));
      init.x = rng.gaussian_matrix(m, kk);
      init.z = rng.gaussian_matrix(n, kk);
    }
    slots[r] = run_one_restart(sym, m, n, k, maximize, cfg, std::move(init),
                               r == 0 ? trace : nullptr);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < total; ++r) {
    const bool better = maximize ? slots[r].value > slots[best].value
                                 : slots[r].value < slots[best].value;
    if (better)
      best = r;
  }
  return {slots[best].value, std::move(slots[best].vector),
          static_cast<int>(total)};
}

SeesawOutcome sampled_extremum(const CMatrix &a, std::size_t m, std::size_t n,
                               int k, bool maximize, const RunConfig &cfg) {
  check_bipartite_operator(a, m, n);
  check_k(k, m, n);

  const CMatrix sym = symmetrized(a);
  const std::size_t dim = m * n;
  // Shifted power matrix: iterating it climbs (or descends) the form.
  const double shift = fro_norm(sym) + 1.0;
  CMatrix power(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const cplx v = sym(i, j);
      power(i, j) = maximize ? v : -v;
      if (i == j)
        power(i, j) += shift;
    }

  constexpr int kSamples = 128;
  constexpr int kPolishIters = 200;

  std::vector<RestartResult> slots(kSamples);
  parallel_for(kSamples, [&](std::size_t s) {
    RandomStream rng(derive_seed(cfg.seed ^ 0xA11CEull, s));
    CMatrix x = rng.gaussian_matrix(m, static_cast<std::size_t>(k));
    CMatrix z = rng.gaussian_matrix(n, static_cast<std::size_t>(k));
    std::vector<cplx> psi = expand_factors(x, z);
    normalize(psi);

    double best_val = quadratic_form(sym, psi);
    std::vector<cplx> best_psi = psi;
    std::vector<cplx> work(dim);
    for (int it = 0; it < kPolishIters; ++it) {
      for (std::size_t i = 0; i < dim; ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j)
          acc += power(i, j) * psi[j];
        work[i] = acc;
      }
      psi = truncate_schmidt_rank(work, m, n, k);
      const double val = quadratic_form(sym, psi);
      const bool better = maximize ? val > best_val : val < best_val;
      if (better) {
        best_val = val;
        best_psi = psi;
      }
    }
    slots[s] = {best_val, std::move(best_psi)};
  });

  std::size_t best = 0;
  for (std::size_t s = 1; s < kSamples; ++s) {
    const bool better = maximize ? slots[s].value > slots[best].value
                                 : slots[s].value < slots[best].value;
    if (better)
      best = s;
  }
  return {slots[best].value, std::move(slots[best].vector), kSamples};
}

//=========================================================================
// Schmidt operator norm and cone norms
//=========================================================================

NormResult schmidt_op_norm(const CMatrix &a, std::size_t m, std::size_t n,
                           int k, const RunConfig &cfg) {
  check_bipartite_operator(a, m, n);
  check_k(k, m, n);
  cfg.validate();
  const double defect = hermiticity_defect(a);
  if (defect > kHermTol)
    throw NotHermitian("Schmidt operator norm needs a Hermitian input");

  const HermEig eig = herm_eig(symmetrized(a), 1e-6);
  const double radius = eig.spectral_radius();
  const double lam_max = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
  const double lam_min = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();

  NormResult out;
  if (static_cast<std::size_t>(k) == std::min(m, n)) {
    // Unconstrained Rayleigh quotient: the class exhausts the unit sphere.
    out.signed_sup = lam_max;
    out.value = radius;
    out.certified = Certainty::exact;
    out.maximizer = std::abs(lam_min) > std::abs(lam_max)
                        ? eig.eigenvector(eig.eigenvalues.size() - 1)
                        : eig.eigenvector(0);
    return out;
  }

  const bool psd = lam_min >= -1e-12 * std::max(1.0, radius);
  const bool nsd = lam_max <= 1e-12 * std::max(1.0, radius);

  const std::vector<cplx> top_seed =
      truncate_schmidt_rank(eig.eigenvector(0), m, n, k);
  const std::vector<cplx> bottom_seed = truncate_schmidt_rank(
      eig.eigenvector(eig.eigenvalues.size() - 1), m, n, k);

  const std::vector<std::vector<cplx>> up_seeds{top_seed};
  SeesawOutcome up = seesaw_extremum(a, m, n, k, true, cfg, up_seeds);
  out.restarts_used = up.restarts_used;

  SeesawOutcome down;
  bool have_down = false;
  if (!psd) {
    const std::vector<std::vector<cplx>> down_seeds{bottom_seed};
    down = seesaw_extremum(a, m, n, k, false, cfg, down_seeds);
    out.restarts_used += down.restarts_used;
    have_down = true;
  }

  bool oracle_agrees = true;
  if (m * n <= cfg.oracle_cap) {
    if (!nsd) {
      const SeesawOutcome probe = sampled_extremum(a, m, n, k, true, cfg);
      if (probe.value > up.value)
        up = probe; // both are lower bounds; keep the better one
      if (std::abs(probe.value - up.value) > cfg.oracle_tol)
        oracle_agrees = false;
    }
    if (have_down) {
      const SeesawOutcome probe = sampled_extremum(a, m, n, k, false, cfg);
      if (probe.value < down.value)
        down = probe;
      if (std::abs(probe.value - down.value) > cfg.oracle_tol)
        oracle_agrees = false;
    }
    out.certified =
        oracle_agrees ? Certainty::exact : Certainty::heuristic_lower_bound;
  } else {
    out.certified = Certainty::heuristic_lower_bound;
  }

  out.signed_sup = up.value;
  if (have_down && std::abs(down.value) > std::abs(up.value)) {
    out.value = std::abs(down.value);
    out.maximizer = std::move(down.vector);
  } else {
    out.value = std::abs(up.value);
    out.maximizer = std::move(up.vector);
  }
  return out;
}

std::string ConeTag::name() const {
  switch (kind) {
  case Kind::P:
    return "P";
  case Kind::Pk:
    return "Pk(" + std::to_string(k) + ")";
  case Kind::CP:
    return "CP";
  case Kind::SPk:
    return "SPk(" + std::to_string(k) + ")";
  case Kind::SP:
    return "SP";
  }
  return "?";
}

NormResult map_cone_norm(const LinearMap &phi, ConeTag cone,
                         const RunConfig &cfg) {
  const std::size_t m = phi.in_dim, n = phi.out_dim;
  check_bipartite_operator(phi.choi, m, n);
  switch (cone.kind) {
  case ConeTag::Kind::P:
    return schmidt_op_norm(phi.choi, m, n, 1, cfg);
  case ConeTag::Kind::Pk:
    return schmidt_op_norm(phi.choi, m, n, cone.k, cfg);
  case ConeTag::Kind::CP: {
    if (hermiticity_defect(phi.choi) > kHermTol)
      throw NotHermitian("cone norm needs a Hermitian Choi matrix");
    const HermEig eig = herm_eig(symmetrized(phi.choi), 1e-6);
    NormResult out;
    out.value = eig.spectral_radius();
    out.signed_sup = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    out.certified = Certainty::exact;
    const bool bottom =
        !eig.eigenvalues.empty() &&
        std::abs(eig.eigenvalues.back()) > std::abs(eig.eigenvalues.front());
    if (!eig.eigenvalues.empty())
      out.maximizer =
          eig.eigenvector(bottom ? eig.eigenvalues.size() - 1 : 0);
    return out;
  }
  case ConeTag::Kind::SPk:
  case ConeTag::Kind::SP:
    throw UnsupportedCone("no norm evaluation for cone " + cone.name());
  }
  throw UnsupportedCone("unknown cone tag");
}

} // namespace choilab
