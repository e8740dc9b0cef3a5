#pragma once

// Maximum graph-variance over the probability simplex for generalized
// resistance metrics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rgeom/fbi.hpp"
#include "rgeom/graph.hpp"
#include "rgeom/resistance.hpp"
#include "rgeom/types.hpp"

namespace rgeom {

/// A point of the probability simplex: f >= 0, 1^T f = 1.
class Distribution {
 public:
  /// Throws ContractViolation if f has a negative entry or does not sum to 1
  /// within 1e-12.
  explicit Distribution(Vector f);

  static Distribution point_mass(int n, int node);
  static Distribution uniform(int n);

  const Vector& f() const noexcept { return f_; }
  int n() const noexcept { return static_cast<int>(f_.size()); }

 private:
  Vector f_;
};

enum class MaxVarMethod { kEnumeration, kIterative };

struct MaxVarSolution {
  Distribution f_star;
  NodeSet support;  // {i : f*_i > support_tol}
  double value = 0.0;
  double kkt_residual = 0.0;
  MaxVarMethod method = MaxVarMethod::kEnumeration;
  int iterations = 0;
};

struct MaxVarOptions {
  double tol = 1e-10;           // KKT certification, relative to max |Omega f|
  double support_tol = 1e-10;
  int max_iterations = 200000;
  int resolve_every = 25;       // iterations between active-set resolve attempts
  std::optional<Vector> initial;
};

struct KktCheck {
  bool ok = false;
  double residual = 0.0;
};

struct CharacterizationReport {
  Vector p_support;         // p(V*)
  double sigma2_support = 0.0;  // sigma2(V*)
  double curvature_residual = 0.0;  // || f*[V*] - p(V*) ||_max
  double radius_residual = 0.0;     // | var* - sigma2(V*) |
  bool passed = false;
};

struct NegativeCurvatureInstance {
  SignedLaplacianQ q;
  MaxVarSolution solution;
  int node = -1;          // 0-based support node with p_i([n]) < 0
  double p_value = 0.0;
  int attempt = -1;
};

inline constexpr int kMaxEnumerationNodes = 15;
inline constexpr double kCharacterizationTol = 1e-8;

/// f^T D f / 2.
double variance(const Matrix& D, const Distribution& f);

/// max over i in supp(f), j of ((D f)_j - (D f)_i)_+.
KktCheck verify_kkt(const Matrix& omega, const Distribution& f, double tol);

/// Exhaustive search over supports, largest first.
MaxVarSolution solve_maxvar_exact(const ResistanceMatrix& omega);
MaxVarSolution solve_maxvar_exact(const Matrix& omega);

/// Projected gradient ascent, then an exact resolve on the detected support.
MaxVarSolution solve_maxvar(const ResistanceMatrix& omega, const MaxVarOptions& opts = {});
MaxVarSolution solve_maxvar(const Matrix& omega, const MaxVarOptions& opts = {});

/// Checks f*[V*] = p(V*) and var* = sigma2(V*).
CharacterizationReport characterize(const MaxVarSolution& solution, const SignedLaplacianQ& Q);
CharacterizationReport characterize(const MaxVarSolution& solution, const DirectedLaplacian& L);

/// Support nodes whose full-graph curvature p_i([n]) is below -threshold.
std::vector<int> negative_curvature_support_nodes(const SignedLaplacianQ& Q,
                                                  const MaxVarSolution& solution,
                                                  double threshold = 1e-10);

/// Random search over signed class-Q graphs for a maximum-variance support
/// containing a node of negative curvature. Deterministic in (n, seed).
std::optional<NegativeCurvatureInstance> find_negative_curvature_support_instance(
    int n, std::uint64_t seed, int attempts);

}  // namespace rgeom
