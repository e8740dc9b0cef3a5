#include "rgeom/resistance.hpp"

#include <cmath>

#include "rgeom/errors.hpp"
#include "rgeom/linalg.hpp"

namespace rgeom {

std::string to_string(ResistanceKind kind) {
  switch (kind) {
    case ResistanceKind::kDirectedSc: return "directed_sc";
    case ResistanceKind::kScwb: return "scwb";
    case ResistanceKind::kClassQ: return "class_q";
  }
  return "unknown";
}

std::string to_string(MetricLabel label) {
  switch (label) {
    case MetricLabel::kNotNegativeType: return "not_negative_type";
    case MetricLabel::kNegativeType: return "negative_type";
    case MetricLabel::kStrictNegativeType: return "strict_negative_type";
    case MetricLabel::kResistanceMetric: return "resistance_metric";
  }
  return "unknown";
}

double effective_resistance_directed(const DirectedLaplacian& L, int a, int b) {
  const int n = L.n();
  if (a < 0 || a >= n || b < 0 || b >= n) {
    throw ContractViolation("effective_resistance_directed: node out of range");
  }
  if (a == b) throw ContractViolation("effective_resistance_directed: nodes must differ");
  const NodeSet pair = NodeSet::from_zero_based({a, b}, n);
  const std::vector<int> missing = unreachable_nodes(L, pair);
  if (!missing.empty()) {
    std::vector<int> ids(missing);
    for (int& i : ids) ++i;
    throw StructureError("effective_resistance_directed: {" + std::to_string(a + 1) + "," +
                             std::to_string(b + 1) + "} is not a reachable subset",
                         ids);
  }
  const Matrix reduced = schur_complement(L.matrix(), pair);
  const int pos = pair.position(a);
  const double d = reduced(pos, pos);
  if (!(d > 0.0)) {
    throw DegenerateBlockError("effective_resistance_directed: reduced diagonal entry is not positive",
                               {a + 1, b + 1});
  }
  return 1.0 / d;
}

Matrix resistance_from_gram(const Matrix& P) {
  const Eigen::Index n = P.rows();
  const Vector zeta = P.diagonal();
  Matrix omega = zeta.transpose().replicate(n, 1) + zeta.replicate(1, n) - 2.0 * P;
  omega.diagonal().setZero();
  return omega;
}

ResistanceMatrix resistance_matrix_scwb(const DirectedLaplacian& L) {
  if (!L.scwb()) {
    throw StructureError("resistance_matrix_scwb: graph must be strongly connected and weight-balanced");
  }
  return {resistance_from_gram(sym_pinv(L)), ResistanceKind::kScwb};
}

ResistanceMatrix resistance_matrix_sc(const DirectedLaplacian& L) {
  if (L.scwb()) return resistance_matrix_scwb(L);
  const WeightBalancing wb = weight_balance(L);
  const Matrix omega_wb = resistance_from_gram(sym_pinv(wb.balanced));
  return {wb.m.asDiagonal() * omega_wb, ResistanceKind::kDirectedSc};
}

ResistanceMatrix resistance_matrix_q(const SignedLaplacianQ& Q) {
  const Matrix qp = pseudoinverse_with_rank(Q.matrix(), Q.n() - 1);
  return {resistance_from_gram(0.5 * (qp + qp.transpose())), ResistanceKind::kClassQ};
}

Matrix centered_gram(const Matrix& D) {
  const Matrix J = centering_projector(D.rows());
  return -0.5 * J * D * J;
}

MetricClass classify_metric(const Matrix& D, double tol) {
  if (D.rows() != D.cols() || D.rows() < 1) {
    throw ContractViolation("classify_metric: distance matrix must be square");
  }
  if (!D.allFinite()) throw ContractViolation("classify_metric: non-finite entries");
  const Eigen::Index n = D.rows();
  const double scale = std::max(max_abs(D), 1e-300);
  if (max_abs(Matrix(D - D.transpose())) > tol * scale) {
    throw ContractViolation("classify_metric: distance matrix is not symmetric");
  }
  if (max_abs(Vector(D.diagonal())) > tol * scale) {
    throw ContractViolation("classify_metric: distance matrix has a nonzero diagonal");
  }
  if (D.minCoeff() < -tol * scale) {
    throw ContractViolation("classify_metric: distance matrix has negative entries");
  }

  const Matrix G = centered_gram(0.5 * (D + D.transpose()));
  const SymEig<double> eig = sym_eig(G);
  const double cutoff = tol * std::max(max_abs(eig.eigenvalues), 1e-300);

  MetricClass out;
  if (eig.eigenvalues(n - 1) < -cutoff) {
    out.label = MetricLabel::kNotNegativeType;
    out.witness = eig.eigenvectors.col(n - 1);
    return out;
  }

  std::vector<Eigen::Index> zero;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(eig.eigenvalues(k)) <= cutoff) zero.push_back(k);
  }
  if (zero.size() > 1) {
    out.label = MetricLabel::kNegativeType;
    // Kernel direction with the least overlap with 1.
    const Matrix J = centering_projector(n);
    Vector best = Vector::Zero(n);
    for (Eigen::Index k : zero) {
      const Vector candidate = J * eig.eigenvectors.col(k);
      if (candidate.norm() > best.norm()) best = candidate;
    }
    out.witness = best.normalized();
    return out;
  }

  out.label = MetricLabel::kStrictNegativeType;
  if (n >= 2) {
    const Matrix gp = pseudoinverse_with_rank(G, n - 1);
    const double off_cutoff = tol * std::max(max_abs(Vector(gp.diagonal())), 1.0);
    bool unsigned_laplacian = true;
    for (Eigen::Index i = 0; i < n && unsigned_laplacian; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j && gp(i, j) > off_cutoff) {
          unsigned_laplacian = false;
          break;
        }
      }
    }
    if (unsigned_laplacian) out.label = MetricLabel::kResistanceMetric;
  } else {
    out.label = MetricLabel::kResistanceMetric;
  }
  return out;
}

SignedLaplacianQ q_from_distance(const Matrix& D, double tol) {
  const MetricClass cls = classify_metric(D, tol);
  if (!cls.at_least(MetricLabel::kStrictNegativeType)) {
    std::vector<double> witness;
    if (cls.witness) witness.assign(cls.witness->data(), cls.witness->data() + cls.witness->size());
    throw ClassificationError("q_from_distance: distance matrix is " + to_string(cls.label) +
                                  ", not strict negative type",
                              std::move(witness));
  }
  const Matrix G = centered_gram(0.5 * (D + D.transpose()));
  const Matrix q = pseudoinverse_with_rank(G, D.rows() - 1);
  return SignedLaplacianQ::from_matrix(0.5 * (q + q.transpose()), tol);
}

}  // namespace rgeom
