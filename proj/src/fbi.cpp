#include "rgeom/fbi.hpp"

#include <algorithm>

#include "rgeom/errors.hpp"
#include "rgeom/kron.hpp"
#include "rgeom/linalg.hpp"

namespace rgeom {
namespace {

void require_scwb(const DirectedLaplacian& L, const char* where) {
  if (!L.scwb()) {
    throw StructureError(std::string(where) +
                         ": graph must be strongly connected and weight-balanced");
  }
}

Matrix symmetric_pinv_rank(const Matrix& a, Eigen::Index rank) {
  const Matrix p = pseudoinverse_with_rank(a, rank);
  return 0.5 * (p + p.transpose());
}

// (L^dagger_s)^dagger from an already computed L^dagger_s.
Matrix undirect_from_sym_pinv(const Matrix& ps) { return symmetric_pinv_rank(ps, ps.rows() - 1); }

FbiBlocks assemble_fbi(const Matrix& omega, const Vector& p, double sigma2, const Matrix& x) {
  const Eigen::Index n = omega.rows();
  FbiBlocks out;
  out.lhs = Matrix::Zero(n + 1, n + 1);
  out.lhs.block(0, 1, 1, n).setOnes();
  out.lhs.block(1, 0, n, 1).setOnes();
  out.lhs.bottomRightCorner(n, n) = omega;

  Matrix inner(n + 1, n + 1);
  inner(0, 0) = 4.0 * sigma2;
  inner.block(0, 1, 1, n) = -2.0 * p.transpose();
  inner.block(1, 0, n, 1) = -2.0 * p;
  inner.bottomRightCorner(n, n) = x;
  out.rhs = -0.5 * inner;

  const Matrix product = out.lhs * inner + 2.0 * Matrix::Identity(n + 1, n + 1);
  out.residual = max_abs(product);
  out.passed = out.residual <= kFbiTol;
  return out;
}

std::vector<int> checked_subset(const std::vector<int>& nodes, Eigen::Index n) {
  std::vector<int> sorted(nodes);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= n) throw ContractViolation("sigma2_subset: node out of range");
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      throw ContractViolation("sigma2_subset: duplicate node");
    }
  }
  return sorted;
}

}  // namespace

SignedLaplacianQ undirect(const DirectedLaplacian& L) {
  require_scwb(L, "undirect");
  const Matrix x = undirect_from_sym_pinv(sym_pinv(L));
  auto result = validate_class_q(x);
  if (auto* report = std::get_if<ClassReport>(&result)) {
    throw NumericFailure("undirect: result failed class-Q validation (" + report->message() + ")");
  }
  return std::get<SignedLaplacianQ>(std::move(result));
}

CurvatureRadius curvature_radius_scwb(const DirectedLaplacian& L) {
  require_scwb(L, "curvature_radius_scwb");
  const Eigen::Index n = L.n();
  const Matrix ps = sym_pinv(L);
  const Matrix x = undirect_from_sym_pinv(ps);
  const Vector zeta = ps.diagonal();
  CurvatureRadius out;
  out.p = 0.5 * x * zeta + Vector::Constant(n, 1.0 / double(n));
  out.sigma2 = 0.25 * zeta.dot(x * zeta) + zeta.sum() / double(n);
  out.zeta = zeta;
  return out;
}

FbiBlocks verify_fbi(const DirectedLaplacian& L) {
  require_scwb(L, "verify_fbi");
  const Matrix ps = sym_pinv(L);
  const Matrix x = undirect_from_sym_pinv(ps);
  const CurvatureRadius cr = curvature_radius_scwb(L);
  return assemble_fbi(resistance_from_gram(ps), cr.p, cr.sigma2, x);
}

double RelationResiduals::max() const noexcept {
  return std::max({sum_p, omega_p, omega_x, omega_inverse, p_formula, sigma2_formula});
}

RelationResiduals verify_relations(const DirectedLaplacian& L) {
  require_scwb(L, "verify_relations");
  const Eigen::Index n = L.n();
  const Matrix ps = sym_pinv(L);
  const Matrix x = undirect_from_sym_pinv(ps);
  const Matrix omega = resistance_from_gram(ps);
  const CurvatureRadius cr = curvature_radius_scwb(L);
  const Vector& p = cr.p;
  const double s2 = cr.sigma2;
  const Vector ones = Vector::Ones(n);
  const Matrix identity = Matrix::Identity(n, n);
  const Matrix omega_inv = solve_checked(omega, identity, "verify_relations");
  const Vector w = omega_inv * ones;

  RelationResiduals out;
  out.sum_p = std::abs(p.sum() - 1.0);
  out.omega_p = max_abs(Vector(omega * p - 2.0 * s2 * ones));
  out.omega_x = max_abs(Matrix(omega * x + 2.0 * identity - 2.0 * ones * p.transpose()));
  out.omega_inverse = max_abs(Matrix(omega_inv + 0.5 * x - p * p.transpose() / (2.0 * s2)));
  out.p_formula = max_abs(Vector(p - w / w.sum()));
  out.sigma2_formula = std::abs(s2 - 0.5 * p.dot(omega * p));
  return out;
}

FbiBlocks verify_fbi_q(const SignedLaplacianQ& Q) {
  const ResistanceMatrix omega = resistance_matrix_q(Q);
  const CurvatureRadius cr = curvature_radius_q(Q, NodeSet::all(Q.n()));
  return assemble_fbi(omega.omega, cr.p, cr.sigma2, Q.matrix());
}

CurvatureRadius curvature_radius_from_omega(const Matrix& omega) {
  const Eigen::Index n = omega.rows();
  const Vector x = solve_checked(omega, Vector::Ones(n), "curvature_radius");
  const double s = x.sum();
  if (!(s > 0.0)) throw NumericFailure("curvature_radius: 1^T Omega^{-1} 1 is not positive");
  CurvatureRadius out;
  out.p = x / s;
  out.sigma2 = 0.5 / s;
  return out;
}

CurvatureRadius curvature_radius_sc(const DirectedLaplacian& L) {
  if (!L.strongly_connected()) {
    throw StructureError("curvature_radius_sc: graph is not strongly connected");
  }
  CurvatureRadius out = curvature_radius_from_omega(resistance_matrix_sc(L).omega);
  if (L.weight_balanced()) out.zeta = sym_pinv(L).diagonal();
  return out;
}

CurvatureRadius wb_transform(const Vector& p, double sigma2, const Vector& m,
                             const ResistanceMatrix& omega) {
  const Eigen::Index n = omega.omega.rows();
  if (p.size() != n || m.size() != n) {
    throw ContractViolation("wb_transform: dimension mismatch");
  }
  const Vector scaled = m.asDiagonal() * (omega.omega * p);
  const Vector x = solve_checked(omega.omega, scaled, "wb_transform");
  const double d = x.sum();
  if (!(d > kStructuralTol)) throw NumericFailure("wb_transform: normalizer is not positive");
  CurvatureRadius out;
  out.p = x / d;
  out.sigma2 = sigma2 / d;
  return out;
}

CommutativityReport check_commutativity(const DirectedLaplacian& L, const NodeSet& keep) {
  require_scwb(L, "check_commutativity");
  CommutativityReport out;
  out.lhs = schur_complement(undirect(L).matrix(), keep);
  out.rhs = undirect(kron_reduce(L, keep).laplacian()).matrix();
  out.residual = max_abs(Matrix(out.lhs - out.rhs));
  out.passed = out.residual <= kFbiTol;
  return out;
}

NonCommutativity check_noncommutativity(const DirectedLaplacian& L, const NodeSet& keep) {
  require_scwb(L, "check_noncommutativity");
  NonCommutativity out;
  out.lhs = schur_complement(sym_pinv(L), keep);
  out.rhs = sym_pinv(kron_reduce(L, keep).laplacian());
  out.difference = out.lhs - out.rhs;
  return out;
}

CurvatureRadius reduce_curvature_radius(const DirectedLaplacian& L, const NodeSet& keep) {
  require_scwb(L, "reduce_curvature_radius");
  if (keep.universe() != L.n() || keep.size() < 2) {
    throw ContractViolation("reduce_curvature_radius: need at least two kept nodes of this graph");
  }
  const CurvatureRadius full = curvature_radius_scwb(L);
  const std::vector<int> elim = keep.complement();
  if (elim.empty()) return full;

  const Matrix x = undirect_from_sym_pinv(sym_pinv(L));
  const std::vector<int>& k = keep.indices();
  const Vector pe = full.p(elim);
  const Vector y = solve_checked(Matrix(x(elim, elim)), pe, "reduce_curvature_radius");
  CurvatureRadius out;
  out.p = Vector(full.p(k)) - Matrix(x(k, elim)) * y;
  out.sigma2 = full.sigma2 - pe.dot(y);
  return out;
}

double sigma2_subset(const Matrix& omega, const std::vector<int>& nodes) {
  const std::vector<int> v = checked_subset(nodes, omega.rows());
  if (v.size() <= 1) return 0.0;
  const Matrix sub = omega(v, v);
  const Vector x = solve_checked(sub, Vector::Ones(sub.rows()), "sigma2_subset");
  return 0.5 / x.sum();
}

double sigma2_subset(const DirectedLaplacian& L, const std::vector<int>& nodes) {
  require_scwb(L, "sigma2_subset");
  return sigma2_subset(resistance_matrix_scwb(L).omega, nodes);
}

CurvatureRadius curvature_radius_q(const SignedLaplacianQ& Q, const NodeSet& nodes) {
  if (nodes.universe() != Q.n()) {
    throw ContractViolation("curvature_radius_q: node set universe does not match graph size");
  }
  if (nodes.size() < 2) throw ContractViolation("curvature_radius_q: need at least two nodes");
  const Matrix qp = symmetric_pinv_rank(Q.matrix(), Q.n() - 1);
  const Matrix omega = resistance_from_gram(qp);
  const std::vector<int>& v = nodes.indices();
  CurvatureRadius out = curvature_radius_from_omega(Matrix(omega(v, v)));
  out.zeta = Vector(qp.diagonal())(v);
  return out;
}

}  // namespace rgeom
