#pragma once

// Fiedler-Bapat identity for strongly connected weight-balanced digraphs,
// resistance curvature and resistance radius, and how both transform under
// weight balancing and Kron reduction.

#include "rgeom/graph.hpp"
#include "rgeom/resistance.hpp"
#include "rgeom/types.hpp"

namespace rgeom {

/// Resistance curvature p (1^T p = 1), resistance radius sigma2 > 0 with
/// Omega p = 2 sigma2 1. `zeta` is diag(L^dagger_s) or diag(Q^dagger) where
/// that matrix exists for the producing graph, and empty otherwise.
struct CurvatureRadius {
  Vector p;
  double sigma2 = 0.0;
  Vector zeta;
};

/// Both sides of the block identity and the residual
/// || [[0, 1^T], [1, Omega]] [[4 sigma2, -2 p^T], [-2 p, X]] + 2 I ||_max.
struct FbiBlocks {
  Matrix lhs;  // [[0, 1^T], [1, Omega]]
  Matrix rhs;  // -1/2 [[4 sigma2, -2 p^T], [-2 p, X]]
  double residual = 0.0;
  bool passed = false;
};

struct CommutativityReport {
  Matrix lhs;  // (L^dagger_s)^dagger / keep^c
  Matrix rhs;  // ((L / keep^c)^dagger_s)^dagger
  double residual = 0.0;
  bool passed = false;
};

struct NonCommutativity {
  Matrix lhs;  // L^dagger_s / keep^c
  Matrix rhs;  // (L / keep^c)^dagger_s
  Matrix difference;
};

/// Residuals (max-abs) of the identities tying Omega, X, p and sigma2 for a
/// strongly connected weight-balanced graph.
struct RelationResiduals {
  double sum_p = 0.0;          // 1^T p - 1
  double omega_p = 0.0;        // Omega p - 2 sigma2 1
  double omega_x = 0.0;        // Omega X + 2 I - 2 1 p^T
  double omega_inverse = 0.0;  // Omega^{-1} + X / 2 - p p^T / (2 sigma2)
  double p_formula = 0.0;      // p - Omega^{-1} 1 / (1^T Omega^{-1} 1)
  double sigma2_formula = 0.0; // sigma2 - p^T Omega p / 2

  double max() const noexcept;
};

inline constexpr double kFbiTol = 1e-8;

/// L -> (L^dagger_s)^dagger for strongly connected weight-balanced L.
SignedLaplacianQ undirect(const DirectedLaplacian& L);

/// Closed forms p = X zeta / 2 + 1/n, sigma2 = zeta^T X zeta / 4 + 1^T zeta / n
/// with X = (L^dagger_s)^dagger and zeta = diag(L^dagger_s).
CurvatureRadius curvature_radius_scwb(const DirectedLaplacian& L);

FbiBlocks verify_fbi(const DirectedLaplacian& L);

RelationResiduals verify_relations(const DirectedLaplacian& L);

/// The same block identity with Q in place of (L^dagger_s)^dagger.
FbiBlocks verify_fbi_q(const SignedLaplacianQ& Q);

/// p = Omega^{-1} 1 / (1^T Omega^{-1} 1), sigma2 = 1 / (2 1^T Omega^{-1} 1)
/// for any invertible (possibly asymmetric) resistance matrix. Refuses
/// condition estimates above kConditionLimit.
CurvatureRadius curvature_radius_from_omega(const Matrix& omega);

/// Curvature and radius of a strongly connected (not necessarily balanced)
/// digraph from its own resistance matrix.
CurvatureRadius curvature_radius_sc(const DirectedLaplacian& L);

/// Curvature/radius of the balanced graph diag(m) L given those of L, or the
/// reverse direction when called with 1/m.
CurvatureRadius wb_transform(const Vector& p, double sigma2, const Vector& m,
                             const ResistanceMatrix& omega);

CommutativityReport check_commutativity(const DirectedLaplacian& L, const NodeSet& keep);
NonCommutativity check_noncommutativity(const DirectedLaplacian& L, const NodeSet& keep);

/// Curvature/radius of L / keep^c from those of L, without reducing L.
CurvatureRadius reduce_curvature_radius(const DirectedLaplacian& L, const NodeSet& keep);

/// 1 / (2 1^T Omega[V, V]^{-1} 1); zero for |V| <= 1.
double sigma2_subset(const DirectedLaplacian& L, const std::vector<int>& nodes);
double sigma2_subset(const Matrix& omega, const std::vector<int>& nodes);

/// Curvature/radius of Q restricted to V (|V| >= 2).
CurvatureRadius curvature_radius_q(const SignedLaplacianQ& Q, const NodeSet& nodes);

}  // namespace rgeom
