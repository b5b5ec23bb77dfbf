#ifndef CHOILAB_CONFIG_HPP
#define CHOILAB_CONFIG_HPP

#include <cstddef>
#include <cstdint>

#include "choilab/errors.hpp"

namespace choilab {

/// Knobs shared by the iterative solvers and samplers. Every randomized
/// routine derives its streams from `seed`, so a fixed config gives
/// byte-identical results regardless of thread count.
struct RunConfig {
  std::uint64_t seed = 1;
  int restarts = 32;        // random see-saw restarts per extremization
  int max_sweeps = 500;     // hard cap on see-saw sweeps
  double improve_tol = 1e-10;   // sweep-to-sweep improvement considered "stalled"
  std::size_t oracle_cap = 16;  // run the sampling oracle when m*n <= cap
  double oracle_tol = 1e-6;     // see-saw vs oracle agreement for "exact"
  double degeneracy_tol = 1e-7; // mu within this of 1 counts as degenerate
  double safety_margin = 1e-4;  // slack before a heuristic norm certifies
  std::size_t max_d = 6;        // single-copy dimension cap for tensor work

  void validate() const {
    if (restarts < 1 || max_sweeps < 1)
      throw Error("config: restarts and max_sweeps must be at least 1");
    if (improve_tol <= 0 || oracle_tol <= 0 || degeneracy_tol <= 0 ||
        safety_margin <= 0)
      throw Error("config: tolerances must be positive");
    if (oracle_cap == 0 || max_d == 0)
      throw Error("config: caps must be positive");
  }
};

} // namespace choilab

#endif
