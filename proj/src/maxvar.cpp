#include "rgeom/maxvar.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "rgeom/errors.hpp"
#include "rgeom/linalg.hpp"
#include "rgeom/random.hpp"

namespace rgeom {
namespace {

constexpr double kSimplexSumTol = 1e-12;

void require_distance_like(const Matrix& d, const char* where) {
  if (d.rows() != d.cols()) throw ContractViolation(std::string(where) + ": matrix must be square");
  if (!d.allFinite()) throw ContractViolation(std::string(where) + ": matrix has non-finite entries");
  const double scale = std::max(1.0, max_abs(d));
  if (max_abs(Matrix(d - d.transpose())) > kStructuralTol * scale) {
    throw ContractViolation(std::string(where) + ": matrix must be symmetric");
  }
  if (d.rows() > 0 && d.diagonal().cwiseAbs().maxCoeff() > kStructuralTol * scale) {
    throw ContractViolation(std::string(where) + ": matrix must have zero diagonal");
  }
}

const Matrix& symmetric_omega(const ResistanceMatrix& omega, const char* where) {
  if (!omega.symmetric()) {
    throw ContractViolation(std::string(where) + ": resistance matrix must be symmetric");
  }
  return omega.omega;
}

// Euclidean projection onto the probability simplex (sort-based).
Vector project_simplex(const Vector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  Vector out = (v.array() - theta).max(0.0).matrix();
  out /= out.sum();
  return out;
}

double kkt_scale(const Vector& grad) { return std::max(grad.cwiseAbs().maxCoeff(), 1e-300); }

double kkt_residual(const Matrix& omega, const Vector& f) {
  const Vector g = omega * f;
  double lowest_support = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (f(i) > 0.0) lowest_support = std::min(lowest_support, g(i));
  }
  return std::max(0.0, g.maxCoeff() - lowest_support);
}

bool certified(const Matrix& omega, const Vector& f, double tol, double* residual) {
  *residual = kkt_residual(omega, f);
  return *residual <= tol * kkt_scale(omega * f);
}

// Solves Omega[V, V] x = 1 and normalizes; empty if singular or 1^T x <= 0.
std::optional<Vector> resolve_on(const Matrix& omega, const std::vector<int>& support) {
  const Eigen::Index n = omega.rows();
  const Matrix sub = omega(support, support);
  Vector x;
  try {
    x = solve_checked(sub, Vector::Ones(static_cast<Eigen::Index>(support.size())), "maxvar");
  } catch (const NumericFailure&) {
    return std::nullopt;
  }
  const double s = x.sum();
  if (!(s > 0.0)) return std::nullopt;
  Vector f = Vector::Zero(n);
  for (std::size_t k = 0; k < support.size(); ++k) f(support[k]) = x(static_cast<Eigen::Index>(k)) / s;
  return f;
}

NodeSet support_of(const Vector& f, double support_tol) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (f(i) > support_tol) idx.push_back(static_cast<int>(i));
  }
  return NodeSet::from_zero_based(std::move(idx), static_cast<int>(f.size()));
}

// Degenerate optima put round-off mass on tied nodes; resolving on the
// thresholded support removes it when that is still certified.
MaxVarSolution finish(const Matrix& omega, const Vector& f, double residual, MaxVarMethod method,
                      int iterations, const MaxVarOptions& opts) {
  NodeSet support = support_of(f, opts.support_tol);
  Vector best = f;
  if (support.size() >= 2 && (f.array() > 0.0).count() > support.size()) {
    if (auto trimmed = resolve_on(omega, support.indices())) {
      double trimmed_residual = 0.0;
      if ((*trimmed)(support.indices()).minCoeff() > opts.support_tol &&
          certified(omega, *trimmed, opts.tol, &trimmed_residual)) {
        best = *trimmed;
        residual = trimmed_residual;
      }
    }
  }
  return MaxVarSolution{Distribution(best), std::move(support), 0.5 * best.dot(omega * best),
                        residual, method, iterations};
}

MaxVarSolution trivial_solution(MaxVarMethod method) {
  return MaxVarSolution{Distribution::point_mass(1, 0), NodeSet::all(1), 0.0, 0.0, method, 0};
}

// Resolves exactly on the detected support, dropping nonpositive components
// until the solution is strictly positive on what remains.
std::optional<Vector> active_set_resolve(const Matrix& omega, const Vector& f, double support_tol) {
  std::vector<int> support;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (f(i) > support_tol) support.push_back(static_cast<int>(i));
  }
  while (support.size() >= 2) {
    auto candidate = resolve_on(omega, support);
    if (!candidate) return std::nullopt;
    std::vector<int> kept;
    for (int i : support) {
      if ((*candidate)(i) > 0.0) kept.push_back(i);
    }
    if (kept.size() == support.size()) return candidate;
    support = std::move(kept);
  }
  if (support.size() == 1) {
    Vector point = Vector::Zero(f.size());
    point(support.front()) = 1.0;
    return point;
  }
  return std::nullopt;
}

}  // namespace

Distribution::Distribution(Vector f) : f_(std::move(f)) {
  if (f_.size() == 0) throw ContractViolation("Distribution: empty vector");
  if (!f_.allFinite()) throw ContractViolation("Distribution: non-finite entry");
  if (f_.minCoeff() < 0.0) throw ContractViolation("Distribution: negative entry");
  if (std::abs(f_.sum() - 1.0) > kSimplexSumTol) {
    throw ContractViolation("Distribution: entries do not sum to 1");
  }
}

Distribution Distribution::point_mass(int n, int node) {
  if (node < 0 || node >= n) throw ContractViolation("Distribution::point_mass: node out of range");
  Vector f = Vector::Zero(n);
  f(node) = 1.0;
  return Distribution(std::move(f));
}

Distribution Distribution::uniform(int n) {
  if (n < 1) throw ContractViolation("Distribution::uniform: need n >= 1");
  return Distribution(Vector::Constant(n, 1.0 / double(n)));
}

double variance(const Matrix& D, const Distribution& f) {
  require_distance_like(D, "variance");
  if (D.rows() != f.n()) throw ContractViolation("variance: dimension mismatch");
  return 0.5 * f.f().dot(D * f.f());
}

KktCheck verify_kkt(const Matrix& omega, const Distribution& f, double tol) {
  if (omega.rows() != omega.cols() || omega.rows() != f.n()) {
    throw ContractViolation("verify_kkt: dimension mismatch");
  }
  KktCheck out;
  out.residual = kkt_residual(omega, f.f());
  out.ok = out.residual <= tol;
  return out;
}

MaxVarSolution solve_maxvar_exact(const ResistanceMatrix& omega) {
  return solve_maxvar_exact(symmetric_omega(omega, "solve_maxvar_exact"));
}

MaxVarSolution solve_maxvar_exact(const Matrix& omega) {
  require_distance_like(omega, "solve_maxvar_exact");
  const int n = static_cast<int>(omega.rows());
  if (n > kMaxEnumerationNodes) {
    throw CapacityError("solve_maxvar_exact: n = " + std::to_string(n) + " exceeds " +
                        std::to_string(kMaxEnumerationNodes));
  }
  if (n < 1) throw ContractViolation("solve_maxvar_exact: empty matrix");
  if (n == 1) return trivial_solution(MaxVarMethod::kEnumeration);

  const MaxVarOptions defaults;
  for (int size = n; size >= 2; --size) {
    // Combinations of `size` nodes in lexicographic order.
    std::vector<int> support(static_cast<std::size_t>(size));
    std::iota(support.begin(), support.end(), 0);
    while (true) {
      if (auto f = resolve_on(omega, support)) {
        bool positive = true;
        for (int i : support) positive = positive && (*f)(i) > 0.0;
        double residual = 0.0;
        if (positive && certified(omega, *f, defaults.tol, &residual)) {
          return finish(omega, *f, residual, MaxVarMethod::kEnumeration, 0, defaults);
        }
      }
      int k = size - 1;
      while (k >= 0 && support[static_cast<std::size_t>(k)] == n - size + k) --k;
      if (k < 0) break;
      ++support[static_cast<std::size_t>(k)];
      for (int j = k + 1; j < size; ++j) {
        support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  throw NumericFailure("solve_maxvar_exact: no support passed the optimality certificate");
}

MaxVarSolution solve_maxvar(const ResistanceMatrix& omega, const MaxVarOptions& opts) {
  return solve_maxvar(symmetric_omega(omega, "solve_maxvar"), opts);
}

MaxVarSolution solve_maxvar(const Matrix& omega, const MaxVarOptions& opts) {
  require_distance_like(omega, "solve_maxvar");
  const Eigen::Index n = omega.rows();
  if (n < 1) throw ContractViolation("solve_maxvar: empty matrix");
  if (n == 1) return trivial_solution(MaxVarMethod::kIterative);
  if (opts.resolve_every < 1 || opts.max_iterations < 0) {
    throw ContractViolation("solve_maxvar: invalid iteration options");
  }

  Vector f = opts.initial ? Distribution(*opts.initial).f() : Distribution::uniform(int(n)).f();
  if (f.size() != n) throw ContractViolation("solve_maxvar: initial point has wrong dimension");

  const double lipschitz = Eigen::JacobiSVD<Matrix>(omega).singularValues()(0);
  if (!(lipschitz > 0.0)) throw ContractViolation("solve_maxvar: zero matrix");
  const auto objective = [&](const Vector& v) { return 0.5 * v.dot(omega * v); };

  std::vector<double> history;
  double value = objective(f);
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const Vector grad = omega * f;
    double step = 1.0 / lipschitz;
    Vector next = project_simplex(f + step * grad);
    double next_value = objective(next);
    for (int halving = 0; halving < 30 && next_value < value; ++halving) {
      step *= 0.5;
      next = project_simplex(f + step * grad);
      next_value = objective(next);
    }
    if (next_value >= value) {
      f = std::move(next);
      value = next_value;
    }

    if (it % opts.resolve_every != 0 && it != opts.max_iterations) continue;
    double raw_residual = kkt_residual(omega, f);
    history.push_back(raw_residual);
    if (auto exact = active_set_resolve(omega, f, opts.support_tol)) {
      double residual = 0.0;
      if (certified(omega, *exact, opts.tol, &residual)) {
        return finish(omega, *exact, residual, MaxVarMethod::kIterative, it, opts);
      }
    }
  }
  throw ConvergenceFailure("solve_maxvar: no certified solution after " +
                               std::to_string(opts.max_iterations) + " iterations",
                           std::move(history));
}

CharacterizationReport characterize(const MaxVarSolution& solution, const SignedLaplacianQ& Q) {
  if (solution.f_star.n() != Q.n()) throw ContractViolation("characterize: dimension mismatch");
  CharacterizationReport out;
  const std::vector<int>& v = solution.support.indices();
  const Vector f_support = solution.f_star.f()(v);
  if (v.size() >= 2) {
    const CurvatureRadius cr = curvature_radius_q(Q, solution.support);
    out.p_support = cr.p;
    out.sigma2_support = cr.sigma2;
  } else {
    out.p_support = Vector::Ones(static_cast<Eigen::Index>(v.size()));
    out.sigma2_support = 0.0;
  }
  out.curvature_residual = v.empty() ? 0.0 : max_abs(Vector(f_support - out.p_support));
  out.radius_residual = std::abs(solution.value - out.sigma2_support);
  out.passed = out.curvature_residual <= kCharacterizationTol &&
               out.radius_residual <= kCharacterizationTol;
  return out;
}

CharacterizationReport characterize(const MaxVarSolution& solution, const DirectedLaplacian& L) {
  return characterize(solution, undirect(L));
}

std::vector<int> negative_curvature_support_nodes(const SignedLaplacianQ& Q,
                                                  const MaxVarSolution& solution,
                                                  double threshold) {
  if (solution.f_star.n() != Q.n()) {
    throw ContractViolation("negative_curvature_support_nodes: dimension mismatch");
  }
  const Vector p = curvature_radius_q(Q, NodeSet::all(Q.n())).p;
  std::vector<int> out;
  for (int i : solution.support) {
    if (p(i) < -threshold) out.push_back(i);
  }
  return out;
}

std::optional<NegativeCurvatureInstance> find_negative_curvature_support_instance(
    int n, std::uint64_t seed, int attempts) {
  if (n < 4 || n > 12) {
    throw ContractViolation("find_negative_curvature_support_instance: need 4 <= n <= 12");
  }
  constexpr double kThreshold = 1e-10;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    InstanceRng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    try {
      SignedLaplacianQ q = random_class_q(n, rng);
      const ResistanceMatrix omega = resistance_matrix_q(q);
      MaxVarSolution solution = solve_maxvar_exact(omega);
      const std::vector<int> nodes = negative_curvature_support_nodes(q, solution, kThreshold);
      if (nodes.empty()) continue;

      const Vector p = curvature_radius_q(q, NodeSet::all(n)).p;
      const int node = *std::min_element(nodes.begin(), nodes.end(),
                                         [&](int a, int b) { return p(a) < p(b); });
      const double tol = MaxVarOptions{}.tol * kkt_scale(omega.omega * solution.f_star.f());
      if (!verify_kkt(omega.omega, solution.f_star, tol).ok || !(p(node) < -kThreshold)) continue;
      return NegativeCurvatureInstance{std::move(q), std::move(solution), node, p(node), attempt};
    } catch (const NumericFailure&) {
      continue;
    }
  }
  return std::nullopt;
}

}  // namespace rgeom
