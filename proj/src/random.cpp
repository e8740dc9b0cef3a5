#include "rgeom/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <variant>
#include <vector>

#include "rgeom/errors.hpp"
#include "rgeom/linalg.hpp"

namespace rgeom {
namespace {

std::vector<int> permutation(int n, InstanceRng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(rng.integer(0, i))]);
  }
  return perm;
}

void add_cycle(Matrix& adjacency, const std::vector<int>& nodes, double weight) {
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const int from = nodes[k];
    const int to = nodes[(k + 1) % nodes.size()];
    adjacency(from, to) += weight;
  }
}

}  // namespace

int InstanceRng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

double InstanceRng::normal() {
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DirectedLaplacian random_sc_laplacian(int n, InstanceRng& rng, double density) {
  Matrix a = Matrix::Zero(n, n);
  if (n >= 2) {
    const std::vector<int> perm = permutation(n, rng);
    for (int k = 0; k < n; ++k) {
      a(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>((k + 1) % n)]) =
          rng.uniform(0.5, 2.0);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && a(i, j) == 0.0 && rng.bernoulli(density)) a(i, j) = rng.uniform(0.5, 2.0);
    }
  }
  return DirectedLaplacian::from_adjacency(a);
}

DirectedLaplacian random_scwb_laplacian(int n, InstanceRng& rng) {
  Matrix a = Matrix::Zero(n, n);
  if (n >= 2) {
    add_cycle(a, permutation(n, rng), rng.uniform(0.5, 2.0));
    const int extra = rng.integer(0, n);
    for (int c = 0; c < extra; ++c) {
      std::vector<int> perm = permutation(n, rng);
      perm.resize(static_cast<std::size_t>(rng.integer(2, n)));
      add_cycle(a, perm, rng.uniform(0.5, 2.0));
    }
    if (rng.bernoulli(0.15)) a = 0.5 * (a + a.transpose()).eval();
  }
  return DirectedLaplacian::from_adjacency(a);
}

DirectedLaplacian random_undirected_laplacian(int n, InstanceRng& rng, double density) {
  Matrix a = Matrix::Zero(n, n);
  const std::vector<int> perm = permutation(n, rng);
  for (int k = 1; k < n; ++k) {
    const int parent = perm[static_cast<std::size_t>(rng.integer(0, k - 1))];
    const int child = perm[static_cast<std::size_t>(k)];
    const double w = rng.uniform(0.5, 2.0);
    a(parent, child) = w;
    a(child, parent) = w;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a(i, j) == 0.0 && rng.bernoulli(density)) {
        const double w = rng.uniform(0.5, 2.0);
        a(i, j) = w;
        a(j, i) = w;
      }
    }
  }
  return DirectedLaplacian::from_adjacency(a);
}

SignedLaplacianQ random_class_q(int n, InstanceRng& rng) {
  // Largest over smallest nonzero eigenvalue; keeps residual checks at
  // absolute tolerances meaningful.
  constexpr double kMaxSpread = 1e3;
  // A two-node class-Q matrix is a positive multiple of [[1,-1],[-1,1]].
  if (n < 3) throw ContractViolation("random_class_q: need n >= 3");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix h(n, n);
    for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = rng.normal();
    const Matrix J = centering_projector(n);
    const Matrix gram = J * h.transpose() * h * J;
    Matrix q = pseudoinverse_with_rank(gram, n - 1);
    q = 0.5 * (q + q.transpose()).eval();
    q /= q.diagonal().mean();

    // Sign-mixed single-edge perturbations; each survives only if the
    // matrix stays in class Q.
    const int bumps = rng.integer(0, n);
    for (int b = 0; b < bumps; ++b) {
      const int i = rng.integer(0, n - 1);
      int j = rng.integer(0, n - 2);
      if (j >= i) ++j;
      const double w = rng.uniform(-0.5, 0.5);
      Matrix trial = q;
      trial(i, j) -= w;
      trial(j, i) -= w;
      trial(i, i) += w;
      trial(j, j) += w;
      if (std::holds_alternative<SignedLaplacianQ>(validate_class_q(trial))) q = trial;
    }
    auto result = validate_class_q(q);
    if (auto* valid = std::get_if<SignedLaplacianQ>(&result)) {
      const Vector lambda = sym_eig(valid->matrix()).eigenvalues;
      const bool conditioned = lambda(0) <= kMaxSpread * lambda(n - 2);
      if (conditioned && valid->has_negative_edge()) return std::move(*valid);
    }
  }
  throw NumericFailure("random_class_q: could not generate a signed class-Q instance");
}

NodeSet random_subset(int n, InstanceRng& rng, int min_size) {
  const int lo = std::min(std::max(min_size, 1), n);
  const int size = rng.integer(lo, n);
  std::vector<int> perm = permutation(n, rng);
  perm.resize(static_cast<std::size_t>(size));
  return NodeSet::from_zero_based(std::move(perm), n);
}

NodeSet random_reachable_keep(const DirectedLaplacian& L, InstanceRng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    NodeSet keep = random_subset(L.n(), rng, 2);
    if (is_reachable_subset(L, keep)) return keep;
  }
  return NodeSet::all(L.n());
}

}  // namespace rgeom
