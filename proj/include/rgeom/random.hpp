#pragma once

// Seeded generators for random test instances. Uniform and normal variates
// are produced from raw mt19937_64 output so that instances are identical
// across standard library implementations.

#include <cstdint>
#include <random>

#include "rgeom/graph.hpp"
#include "rgeom/types.hpp"

namespace rgeom {

class InstanceRng {
 public:
  explicit InstanceRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with an attempt index into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Strongly connected digraph: a random Hamiltonian cycle plus extra edges
/// with probability `density`; weights uniform in [0.5, 2].
DirectedLaplacian random_sc_laplacian(int n, InstanceRng& rng, double density = 0.3);

/// Strongly connected weight-balanced digraph built as a weighted sum of
/// directed cycles (the Hamiltonian one included), which is balanced by
/// construction. Some instances are undirected.
DirectedLaplacian random_scwb_laplacian(int n, InstanceRng& rng);

/// Connected unsigned undirected Laplacian: random spanning tree plus
/// extra edges.
DirectedLaplacian random_undirected_laplacian(int n, InstanceRng& rng, double density = 0.4);

/// Class-Q matrix with at least one positive off-diagonal entry: the
/// pseudoinverse of a centered random Gram matrix J H^T H J, followed by
/// sign-mixed edge perturbations that are kept only if validation passes.
/// Instances with eigenvalue spread above 1e3 are rejected. Requires n >= 3.
SignedLaplacianQ random_class_q(int n, InstanceRng& rng);

/// Uniformly random subset with size in [min_size, n].
NodeSet random_subset(int n, InstanceRng& rng, int min_size = 2);

/// Random subset that is reachable in L (any subset works for SC graphs).
NodeSet random_reachable_keep(const DirectedLaplacian& L, InstanceRng& rng);

}  // namespace rgeom
