#ifndef CHOILAB_RNG_HPP
#define CHOILAB_RNG_HPP

#include <cstdint>
#include <vector>

#include "choilab/cmatrix.hpp"

namespace choilab {

// Deterministic splitmix64 stream. Hand-rolled so results do not depend on
// the standard library's distribution implementations.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform01(); // [0, 1)
  double gaussian();  // standard normal, Box-Muller
  cplx cgaussian();   // complex standard normal (unit variance per component)

  CMatrix gaussian_matrix(std::size_t rows, std::size_t cols);
  std::vector<cplx> gaussian_vector(std::size_t n);
  std::vector<cplx> unit_vector(std::size_t n);

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable per-task seed derivation; mixing keeps nearby indices uncorrelated.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Orthonormalizes the columns of a in place (modified Gram-Schmidt).
// Columns that collapse numerically are replaced by deterministic basis
// vectors re-orthogonalized against the rest, so the output always has
// full column rank.
void orthonormalize_columns(CMatrix &a);

// Haar-distributed projection of rank k on C^d (QR of a Gaussian matrix).
CMatrix haar_projection(std::size_t d, std::size_t k, RandomStream &rng);

// Random density matrix supported on the column span of the orthonormal
// frame `basis` (d x r).
CMatrix random_density_on_span(const CMatrix &basis, RandomStream &rng);

} // namespace choilab

#endif
