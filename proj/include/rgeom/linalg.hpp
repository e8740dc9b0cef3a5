#pragma once

// Dense linear algebra kernels: symmetric eigendecomposition, SVD,
// Moore-Penrose pseudoinverse, Schur complements, inertia and the
// centering projector. Everything here is a pure function template over the
// scalar type; callers above this layer instantiate it with double.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rgeom/errors.hpp"
#include "rgeom/types.hpp"

namespace rgeom {

template <typename Scalar>
struct SymEig {
  VectorX<Scalar> eigenvalues;   // descending
  MatrixX<Scalar> eigenvectors;  // orthonormal columns
};

template <typename Scalar>
struct Svd {
  MatrixX<Scalar> U;
  VectorX<Scalar> singular_values;  // descending, nonnegative
  MatrixX<Scalar> V;
};

struct Inertia {
  int n_pos = 0;
  int n_neg = 0;
  int n_zero = 0;

  friend bool operator==(const Inertia&, const Inertia&) = default;
};

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* where) {
  if (!a.allFinite()) {
    throw ContractViolation(std::string(where) + ": matrix has non-finite entries");
  }
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* where) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw ContractViolation(std::string(where) + ": expected a nonempty square matrix, got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

/// Flip the column so its first clearly nonzero component is positive.
template <typename Scalar>
void fix_sign(Eigen::Ref<VectorX<Scalar>> v) {
  const Scalar cutoff = v.cwiseAbs().maxCoeff() * Scalar(1e-8);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cutoff) {
      if (v(i) < Scalar(0)) v = -v;
      return;
    }
  }
}

inline std::vector<int> to_one_based(const std::vector<int>& idx) {
  std::vector<int> out(idx);
  for (int& i : out) ++i;
  return out;
}

}  // namespace detail

/// Largest absolute entry; 0 for empty matrices.
template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.size() == 0 ? typename Derived::Scalar(0) : a.cwiseAbs().maxCoeff();
}

/// Symmetric eigendecomposition, eigenvalues sorted descending and each
/// eigenvector sign-normalized. Only the lower triangle of `a` is read.
template <typename Derived>
SymEig<typename Derived::Scalar> sym_eig(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a, "sym_eig");
  detail::require_finite(a, "sym_eig");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(a.eval());
  if (solver.info() != Eigen::Success) {
    throw NumericFailure("sym_eig: eigensolver did not converge");
  }
  const Eigen::Index n = a.rows();
  SymEig<Scalar> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index k = 0; k < n; ++k) {
    detail::fix_sign<Scalar>(out.eigenvectors.col(k));
  }
  return out;
}

/// Thin SVD with singular values descending; each (u_i, v_i) pair is flipped
/// together so v_i follows the sign convention of sym_eig.
template <typename Derived>
Svd<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_finite(a, "svd");
  Eigen::JacobiSVD<MatrixX<Scalar>> solver(a.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) {
    throw NumericFailure("svd: decomposition did not converge");
  }
  Svd<Scalar> out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  for (Eigen::Index k = 0; k < out.V.cols(); ++k) {
    VectorX<Scalar> before = out.V.col(k);
    detail::fix_sign<Scalar>(out.V.col(k));
    if (out.V.col(k) != before) out.U.col(k) = -out.U.col(k);
  }
  return out;
}

/// Relative cutoff used when the caller does not supply one: max(m, n) * eps.
template <typename Derived>
typename Derived::Scalar default_rank_tol(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  return Scalar(std::max(a.rows(), a.cols())) * std::numeric_limits<Scalar>::epsilon();
}

/// Moore-Penrose pseudoinverse. Singular values at or below
/// rank_tol * sigma_max are treated as exact zeros.
template <typename Derived>
MatrixX<typename Derived::Scalar> pseudoinverse(
    const Eigen::MatrixBase<Derived>& a,
    std::optional<typename Derived::Scalar> rank_tol = std::nullopt) {
  using Scalar = typename Derived::Scalar;
  const Svd<Scalar> d = svd(a);
  const Scalar tol = rank_tol.value_or(default_rank_tol(a));
  const Scalar sigma_max = d.singular_values.size() ? d.singular_values(0) : Scalar(0);
  VectorX<Scalar> inv = VectorX<Scalar>::Zero(d.singular_values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    if (d.singular_values(i) > tol * sigma_max) inv(i) = Scalar(1) / d.singular_values(i);
  }
  return d.V * inv.asDiagonal() * d.U.transpose();
}

/// Pseudoinverse of a matrix whose rank is known a priori: keeps exactly the
/// `rank` largest singular values. Laplacians of strongly connected graphs
/// have rank n-1 regardless of how small sigma_{n-1} gets numerically.
template <typename Derived>
MatrixX<typename Derived::Scalar> pseudoinverse_with_rank(const Eigen::MatrixBase<Derived>& a,
                                                          Eigen::Index rank) {
  using Scalar = typename Derived::Scalar;
  const Svd<Scalar> d = svd(a);
  if (rank < 0 || rank > d.singular_values.size()) {
    throw ContractViolation("pseudoinverse_with_rank: rank out of range");
  }
  VectorX<Scalar> inv = VectorX<Scalar>::Zero(d.singular_values.size());
  for (Eigen::Index i = 0; i < rank; ++i) {
    if (!(d.singular_values(i) > Scalar(0))) {
      throw NumericFailure("pseudoinverse_with_rank: matrix rank is below the requested rank");
    }
    inv(i) = Scalar(1) / d.singular_values(i);
  }
  return d.V * inv.asDiagonal() * d.U.transpose();
}

/// Solve A x = B with partial-pivot LU, refusing when the reciprocal
/// condition estimate says cond(A) > limit.
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> solve_checked(const Eigen::MatrixBase<DerivedA>& a,
                                                 const Eigen::MatrixBase<DerivedB>& b,
                                                 const char* where,
                                                 double limit = kConditionLimit) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_square(a, where);
  Eigen::PartialPivLU<MatrixX<Scalar>> lu(a.eval());
  const Scalar rcond = lu.rcond();
  if (!(rcond * Scalar(limit) >= Scalar(1))) {
    throw NumericFailure(std::string(where) + ": matrix is singular or ill-conditioned (rcond " +
                         std::to_string(static_cast<double>(rcond)) + ")");
  }
  return lu.solve(b.eval());
}

/// A[keep, keep] - A[keep, keep^c] A[keep^c, keep^c]^{-1} A[keep^c, keep].
/// Throws DegenerateBlockError when the eliminated block's condition
/// estimate exceeds `limit`.
template <typename Derived>
MatrixX<typename Derived::Scalar> schur_complement(const Eigen::MatrixBase<Derived>& a,
                                                   const NodeSet& keep,
                                                   double limit = kConditionLimit) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a, "schur_complement");
  if (keep.universe() != a.rows()) {
    throw ContractViolation("schur_complement: node set universe does not match matrix size");
  }
  const std::vector<int>& k = keep.indices();
  const std::vector<int> e = keep.complement();
  MatrixX<Scalar> akk = a(k, k);
  if (e.empty()) return akk;

  const MatrixX<Scalar> aee = a(e, e);
  Eigen::PartialPivLU<MatrixX<Scalar>> lu(aee);
  const Scalar rcond = lu.rcond();
  if (!(rcond * Scalar(limit) >= Scalar(1))) {
    throw DegenerateBlockError(
        "schur_complement: eliminated block is singular or ill-conditioned (rcond " +
            std::to_string(static_cast<double>(rcond)) + ")",
        detail::to_one_based(e));
  }
  const MatrixX<Scalar> ake = a(k, e);
  const MatrixX<Scalar> aek = a(e, k);
  akk.noalias() -= ake * lu.solve(aek);
  return akk;
}

/// Same result as schur_complement, computed by eliminating keep^c one node
/// at a time in increasing index order (Gaussian elimination on 1x1 pivots).
template <typename Derived>
MatrixX<typename Derived::Scalar> schur_sequential(const Eigen::MatrixBase<Derived>& a,
                                                   const NodeSet& keep) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(a, "schur_sequential");
  if (keep.universe() != a.rows()) {
    throw ContractViolation("schur_sequential: node set universe does not match matrix size");
  }
  MatrixX<Scalar> work = a;
  std::vector<int> labels(static_cast<std::size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i) labels[static_cast<std::size_t>(i)] = i;
  const Scalar scale = std::max(max_abs(a), Scalar(1e-300));
  const Scalar pivot_floor = scale * Scalar(64) * std::numeric_limits<Scalar>::epsilon();

  for (int node : keep.complement()) {
    const auto it = std::find(labels.begin(), labels.end(), node);
    const Eigen::Index p = it - labels.begin();
    const Scalar pivot = work(p, p);
    if (!(std::abs(pivot) > pivot_floor)) {
      throw DegenerateBlockError("schur_sequential: zero pivot while eliminating node " +
                                     std::to_string(node + 1),
                                 {node + 1});
    }
    const VectorX<Scalar> col = work.col(p);
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> row = work.row(p);
    work.noalias() -= (col / pivot) * row;

    // Drop row/column p.
    const Eigen::Index m = work.rows();
    std::vector<Eigen::Index> rest;
    rest.reserve(static_cast<std::size_t>(m - 1));
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i != p) rest.push_back(i);
    }
    work = MatrixX<Scalar>(work(rest, rest));
    labels.erase(it);
  }
  return work;
}

/// Counts of positive, negative and near-zero eigenvalues of a symmetric
/// matrix; |lambda| <= tol * max|lambda| counts as zero.
template <typename Derived>
Inertia inertia(const Eigen::MatrixBase<Derived>& s, double tol = kStructuralTol) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(s, "inertia");
  detail::require_finite(s, "inertia");
  const Scalar scale = std::max(max_abs(s), Scalar(1));
  if (max_abs(s - s.transpose()) > Scalar(kStructuralTol) * scale) {
    throw ContractViolation("inertia: matrix is not symmetric");
  }
  const VectorX<Scalar> lambda = sym_eig(s).eigenvalues;
  const Scalar cutoff = Scalar(tol) * max_abs(lambda);
  Inertia out;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff) {
      ++out.n_pos;
    } else if (lambda(i) < -cutoff) {
      ++out.n_neg;
    } else {
      ++out.n_zero;
    }
  }
  return out;
}

/// I - 11^T / n.
template <typename Scalar = double>
MatrixX<Scalar> centering_projector(Eigen::Index n) {
  if (n < 1) throw ContractViolation("centering_projector: n must be positive");
  return MatrixX<Scalar>::Identity(n, n) -
         MatrixX<Scalar>::Constant(n, n, Scalar(1) / static_cast<Scalar>(n));
}

/// Vector of ones; shorthand used all over the resistance formulas.
template <typename Scalar = double>
VectorX<Scalar> ones(Eigen::Index n) {
  return VectorX<Scalar>::Ones(n);
}

}  // namespace rgeom
