#pragma once

// Effective resistance for strongly connected digraphs and class-Q
// Laplacians, and the negative-type classification of distance matrices.

#include <optional>

#include "rgeom/graph.hpp"
#include "rgeom/types.hpp"

namespace rgeom {

enum class ResistanceKind { kDirectedSc, kScwb, kClassQ };

std::string to_string(ResistanceKind kind);

/// Omega(a, b) = R(a -> b); symmetric unless kind == kDirectedSc.
struct ResistanceMatrix {
  Matrix omega;
  ResistanceKind kind = ResistanceKind::kScwb;

  int n() const noexcept { return static_cast<int>(omega.rows()); }
  bool symmetric() const noexcept { return kind != ResistanceKind::kDirectedSc; }
};

enum class MetricLabel { kNotNegativeType, kNegativeType, kStrictNegativeType, kResistanceMetric };

std::string to_string(MetricLabel label);

struct MetricClass {
  MetricLabel label = MetricLabel::kNotNegativeType;
  /// For non-strict labels: an eigenvector of the centered Gram matrix that
  /// witnesses f^T D f >= 0 with f orthogonal to 1.
  std::optional<Vector> witness;

  /// Nested hierarchy: resistance metric < strict negative < negative type.
  bool at_least(MetricLabel other) const noexcept {
    return static_cast<int>(label) >= static_cast<int>(other);
  }
};

/// 1 / (L / {a,b}^c)(pos_a, pos_a) with a, b 0-based.
double effective_resistance_directed(const DirectedLaplacian& L, int a, int b);

/// 1 zeta^T + zeta 1^T - 2 P where zeta = diag(P). Shared by every
/// pseudoinverse-based resistance formula.
Matrix resistance_from_gram(const Matrix& P);

ResistanceMatrix resistance_matrix_scwb(const DirectedLaplacian& L);
ResistanceMatrix resistance_matrix_sc(const DirectedLaplacian& L);
ResistanceMatrix resistance_matrix_q(const SignedLaplacianQ& Q);

/// G = -1/2 J D J.
Matrix centered_gram(const Matrix& D);

MetricClass classify_metric(const Matrix& D, double tol = kStructuralTol);

/// Q = (-1/2 J D J)^dagger for a strict negative type D.
SignedLaplacianQ q_from_distance(const Matrix& D, double tol = kStructuralTol);

}  // namespace rgeom
