#include "rgeom/graph.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "rgeom/errors.hpp"
#include "rgeom/linalg.hpp"

namespace rgeom {
namespace {

Matrix with_derived_diagonal(Matrix m) {
  m.diagonal().setZero();
  const Vector row_sums = m.rowwise().sum();
  m.diagonal() = -row_sums;
  return m;
}

// Breadth-first search over the off-diagonal pattern; `reverse` follows
// edges backwards.
std::vector<char> reach(const Matrix& m, const std::vector<int>& sources, bool reverse) {
  const Eigen::Index n = m.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::deque<Eigen::Index> queue;
  for (int s : sources) {
    seen[static_cast<std::size_t>(s)] = 1;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const Eigen::Index u = queue.front();
    queue.pop_front();
    for (Eigen::Index v = 0; v < n; ++v) {
      if (v == u || seen[static_cast<std::size_t>(v)]) continue;
      const double w = reverse ? m(v, u) : m(u, v);
      if (w != 0.0) {
        seen[static_cast<std::size_t>(v)] = 1;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

bool all_set(const std::vector<char>& flags) {
  for (char f : flags) {
    if (!f) return false;
  }
  return true;
}

void require_sc(const DirectedLaplacian& L, const char* where) {
  if (!L.strongly_connected()) {
    throw StructureError(std::string(where) + ": graph is not strongly connected");
  }
}

}  // namespace

DirectedLaplacian::DirectedLaplacian(Matrix m) : matrix_(with_derived_diagonal(std::move(m))) {
  strongly_connected_ = rgeom::is_strongly_connected(matrix_);
  weight_balanced_ = max_abs(Vector(matrix_.colwise().sum().transpose())) <= kStructuralTol;
}

DirectedLaplacian DirectedLaplacian::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ValidationError("laplacian: matrix must be square and nonempty");
  }
  if (!m.allFinite()) throw ValidationError("laplacian: matrix has non-finite entries");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && m(i, j) > 0.0) {
        throw ValidationError("laplacian: positive off-diagonal entry at (" +
                              std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
    }
  }
  return DirectedLaplacian(m);
}

DirectedLaplacian DirectedLaplacian::from_adjacency(const Matrix& adjacency) {
  if (adjacency.rows() != adjacency.cols() || adjacency.rows() < 1) {
    throw ValidationError("adjacency: matrix must be square and nonempty");
  }
  if (!adjacency.allFinite()) throw ValidationError("adjacency: matrix has non-finite entries");
  if ((adjacency.array() < 0.0).any()) {
    throw ValidationError("adjacency: negative weight in an unsigned adjacency matrix");
  }
  return DirectedLaplacian(-adjacency);
}

DirectedLaplacian laplacian_from_edges(int n, const std::vector<Edge>& edges) {
  if (n < 1) throw ValidationError("edge list: node count must be positive");
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    const std::string where = "edge " + std::to_string(k + 1) + " (" + std::to_string(e.src) +
                              " " + std::to_string(e.dst) + ")";
    if (e.src < 1 || e.src > n || e.dst < 1 || e.dst > n) {
      throw ValidationError(where + ": node id outside [1, " + std::to_string(n) + "]");
    }
    if (e.src == e.dst) throw ValidationError(where + ": self-loop");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError(where + ": weight must be positive and finite");
    }
    m(e.src - 1, e.dst - 1) -= e.weight;
  }
  return DirectedLaplacian::from_matrix(m);
}

bool is_strongly_connected(const Matrix& m) {
  if (m.rows() == 1) return true;
  return all_set(reach(m, {0}, false)) && all_set(reach(m, {0}, true));
}

bool is_strongly_connected(const DirectedLaplacian& L) { return is_strongly_connected(L.matrix()); }

bool is_weight_balanced(const DirectedLaplacian& L, double tol) {
  return max_abs(Vector(L.matrix().colwise().sum().transpose())) <= tol;
}

WeightBalancing weight_balance(const DirectedLaplacian& L, double tol) {
  require_sc(L, "weight_balance");
  const int n = L.n();
  if (n == 1) return {Vector::Ones(1), L};

  // w^T L = 0  <=>  L^T w = 0: right singular vector of L^T for sigma_min.
  const Svd<double> d = svd(Matrix(L.matrix().transpose()));
  const double sigma_max = d.singular_values(0);
  if (d.singular_values(n - 2) <= tol * sigma_max) {
    throw NumericFailure("weight_balance: left null space is not one-dimensional");
  }
  Vector w = d.V.col(n - 1);
  if (w.sum() < 0.0) w = -w;
  if ((w.array() <= 0.0).any()) {
    throw NumericFailure("weight_balance: left null vector is not strictly positive");
  }
  w *= static_cast<double>(n) / w.sum();
  return {w, DirectedLaplacian::from_matrix(w.asDiagonal() * L.matrix())};
}

std::vector<int> unreachable_nodes(const DirectedLaplacian& L, const NodeSet& alpha) {
  if (alpha.universe() != L.n()) {
    throw ContractViolation("reachability: node set universe does not match graph size");
  }
  const std::vector<char> seen = reach(L.matrix(), alpha.indices(), true);
  std::vector<int> out;
  for (int i = 0; i < L.n(); ++i) {
    if (!seen[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

bool is_reachable_subset(const DirectedLaplacian& L, const NodeSet& alpha) {
  if (alpha.size() < 2) throw ContractViolation("reachability: subset needs at least two nodes");
  return unreachable_nodes(L, alpha).empty();
}

Matrix symmetrized(const DirectedLaplacian& L) {
  return 0.5 * (L.matrix() + L.matrix().transpose());
}

Matrix laplacian_pinv(const DirectedLaplacian& L) {
  require_sc(L, "laplacian_pinv");
  return pseudoinverse_with_rank(L.matrix(), L.n() - 1);
}

Matrix sym_pinv(const DirectedLaplacian& L) {
  const Matrix p = laplacian_pinv(L);
  return 0.5 * (p + p.transpose());
}

Matrix pinv_via_shift(const DirectedLaplacian& L, double gamma) {
  if (!L.scwb()) {
    throw StructureError("pinv_via_shift: graph must be strongly connected and weight-balanced");
  }
  if (gamma == 0.0 || !std::isfinite(gamma)) {
    throw ContractViolation("pinv_via_shift: gamma must be a nonzero finite number");
  }
  const int n = L.n();
  const double nd = static_cast<double>(n);
  const Matrix J = Matrix::Ones(n, n);
  const Matrix shifted = L.matrix() + (gamma / nd) * J;
  const Matrix inv = solve_checked(shifted, Matrix::Identity(n, n), "pinv_via_shift");
  return inv - (1.0 / (nd * gamma)) * J;
}

std::string to_string(ClassFailure f) {
  switch (f) {
    case ClassFailure::kNotSquare: return "not square";
    case ClassFailure::kNonFinite: return "non-finite entries";
    case ClassFailure::kAsymmetric: return "asymmetric";
    case ClassFailure::kNonzeroRowSum: return "nonzero row sum";
    case ClassFailure::kNotPsd: return "not PSD";
    case ClassFailure::kOversizedKernel: return "kernel larger than span(1)";
    case ClassFailure::kKernelNotOnes: return "kernel is not span(1)";
    case ClassFailure::kNonpositiveDiagonal: return "nonpositive diagonal";
  }
  return "unknown";
}

std::string ClassReport::message() const {
  if (ok()) return "class Q";
  std::ostringstream os;
  os << "not in class Q:";
  for (std::size_t i = 0; i < failures.size(); ++i) {
    os << (i ? "," : "") << ' ' << to_string(failures[i]);
  }
  return os.str();
}

std::variant<SignedLaplacianQ, ClassReport> validate_class_q(const Matrix& m, double tol) {
  ClassReport report;
  if (m.rows() != m.cols() || m.rows() < 1) {
    report.failures.push_back(ClassFailure::kNotSquare);
    return report;
  }
  if (!m.allFinite()) {
    report.failures.push_back(ClassFailure::kNonFinite);
    return report;
  }
  const Eigen::Index n = m.rows();
  const double scale = std::max(max_abs(m), 1.0);
  report.asymmetry = max_abs(Matrix(m - m.transpose()));
  report.max_row_sum = max_abs(Vector(m.rowwise().sum()));
  report.min_diagonal = m.diagonal().minCoeff();
  if (report.asymmetry > tol * scale) report.failures.push_back(ClassFailure::kAsymmetric);
  if (report.max_row_sum > tol * scale) report.failures.push_back(ClassFailure::kNonzeroRowSum);

  const Matrix sym = 0.5 * (m + m.transpose());
  const SymEig<double> eig = sym_eig(sym);
  const double lambda_scale = std::max(max_abs(eig.eigenvalues), 1.0);
  report.min_eigenvalue = eig.eigenvalues(n - 1);
  report.second_eigenvalue = n >= 2 ? eig.eigenvalues(n - 2) : 0.0;
  if (report.min_eigenvalue < -tol * lambda_scale) report.failures.push_back(ClassFailure::kNotPsd);
  if (n < 2 || report.second_eigenvalue <= tol * lambda_scale) {
    report.failures.push_back(ClassFailure::kOversizedKernel);
  }
  Vector v = eig.eigenvectors.col(n - 1);
  if (v.sum() < 0.0) v = -v;
  report.kernel_residual = (v - Vector::Constant(n, 1.0 / std::sqrt(double(n)))).norm();
  if (report.kernel_residual > std::sqrt(tol)) {
    report.failures.push_back(ClassFailure::kKernelNotOnes);
  }
  if (!(report.min_diagonal > 0.0)) report.failures.push_back(ClassFailure::kNonpositiveDiagonal);

  if (!report.ok()) return report;

  Matrix q = sym;
  q.diagonal().setZero();
  q.diagonal() = -Vector(q.rowwise().sum());
  return SignedLaplacianQ(std::move(q));
}

SignedLaplacianQ SignedLaplacianQ::from_matrix(const Matrix& m, double tol) {
  auto result = validate_class_q(m, tol);
  if (auto* report = std::get_if<ClassReport>(&result)) {
    throw ValidationError(report->message());
  }
  return std::get<SignedLaplacianQ>(std::move(result));
}

bool SignedLaplacianQ::has_negative_edge(double tol) const {
  const double cutoff = tol * std::max(max_abs(matrix_), 1.0);
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
      if (i != j && matrix_(i, j) > cutoff) return true;
    }
  }
  return false;
}

}  // namespace rgeom
