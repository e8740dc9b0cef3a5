#pragma once

// Laplacian value types and structural predicates.

#include <string>
#include <variant>
#include <vector>

#include "rgeom/types.hpp"

namespace rgeom {

/// Weighted directed edge with 1-based endpoints.
struct Edge {
  int src = 0;
  int dst = 0;
  double weight = 0.0;
};

/// Laplacian D - A of a directed graph with nonnegative weights: off-diagonal
/// entries <= 0 and every row summing to zero. The diagonal is always derived
/// from the off-diagonal entries, so L 1 = 0 holds to rounding.
class DirectedLaplacian {
 public:
  /// Reads the off-diagonal part of `m`; its diagonal is ignored.
  /// Throws ValidationError for non-square, non-finite or positive
  /// off-diagonal input.
  static DirectedLaplacian from_matrix(const Matrix& m);

  /// Builds D - A from a nonnegative adjacency matrix (diagonal ignored).
  static DirectedLaplacian from_adjacency(const Matrix& adjacency);

  int n() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }

  /// Cached at construction.
  bool strongly_connected() const noexcept { return strongly_connected_; }
  bool weight_balanced() const noexcept { return weight_balanced_; }
  bool scwb() const noexcept { return strongly_connected_ && weight_balanced_; }

  /// Edge i -> j exists iff L(i, j) != 0 exactly.
  bool has_edge(int i, int j) const { return i != j && matrix_(i, j) != 0.0; }

 private:
  explicit DirectedLaplacian(Matrix m);

  Matrix matrix_;
  bool strongly_connected_ = false;
  bool weight_balanced_ = false;
};

/// Why a matrix failed class-Q membership.
enum class ClassFailure {
  kNotSquare,
  kNonFinite,
  kAsymmetric,
  kNonzeroRowSum,
  kNotPsd,
  kOversizedKernel,
  kKernelNotOnes,
  kNonpositiveDiagonal,
};

std::string to_string(ClassFailure f);

/// Diagnostics from validate_class_q.
struct ClassReport {
  std::vector<ClassFailure> failures;
  double asymmetry = 0.0;
  double max_row_sum = 0.0;
  double min_eigenvalue = 0.0;
  double second_eigenvalue = 0.0;  // second-smallest
  double kernel_residual = 0.0;    // || v_min - 1/sqrt(n) || after sign fix
  double min_diagonal = 0.0;

  bool ok() const noexcept { return failures.empty(); }
  std::string message() const;
};

/// Symmetric PSD matrix with kernel exactly span(1): a signed undirected
/// Laplacian whose effective resistance is a metric. Only obtainable through
/// validation.
class SignedLaplacianQ {
 public:
  /// Throws ValidationError carrying the report message when `m` is not in
  /// the class.
  static SignedLaplacianQ from_matrix(const Matrix& m, double tol = kStructuralTol);

  int n() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }

  /// True when some off-diagonal entry is strictly positive (a negative edge).
  bool has_negative_edge(double tol = kClampTol) const;

 private:
  friend std::variant<SignedLaplacianQ, ClassReport> validate_class_q(const Matrix&, double);
  explicit SignedLaplacianQ(Matrix m) : matrix_(std::move(m)) {}

  Matrix matrix_;
};

/// Positive left null vector m of L (1^T m = n) and the balanced Laplacian
/// diag(m) L.
struct WeightBalancing {
  Vector m;
  DirectedLaplacian balanced;
};

DirectedLaplacian laplacian_from_edges(int n, const std::vector<Edge>& edges);

bool is_strongly_connected(const DirectedLaplacian& L);
bool is_weight_balanced(const DirectedLaplacian& L, double tol = kStructuralTol);

/// Works on any square matrix's off-diagonal sparsity pattern.
bool is_strongly_connected(const Matrix& m);

WeightBalancing weight_balance(const DirectedLaplacian& L, double tol = kStructuralTol);

/// Nodes outside `alpha` with no directed path into `alpha` (0-based).
std::vector<int> unreachable_nodes(const DirectedLaplacian& L, const NodeSet& alpha);
bool is_reachable_subset(const DirectedLaplacian& L, const NodeSet& alpha);

/// (L + L^T) / 2.
Matrix symmetrized(const DirectedLaplacian& L);

/// L^dagger of a strongly connected Laplacian (rank n-1).
Matrix laplacian_pinv(const DirectedLaplacian& L);

/// (L^dagger + L^dagger^T) / 2.
Matrix sym_pinv(const DirectedLaplacian& L);

/// (L + (gamma/n) 11^T)^{-1} - (1/(n gamma)) 11^T, which equals L^dagger for
/// strongly connected weight-balanced L and any gamma != 0.
Matrix pinv_via_shift(const DirectedLaplacian& L, double gamma);

std::variant<SignedLaplacianQ, ClassReport> validate_class_q(const Matrix& m,
                                                             double tol = kStructuralTol);

}  // namespace rgeom
