#include "rgeom/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <variant>

#include "rgeom/embed.hpp"
#include "rgeom/errors.hpp"
#include "rgeom/fbi.hpp"
#include "rgeom/kron.hpp"
#include "rgeom/linalg.hpp"
#include "rgeom/maxvar.hpp"
#include "rgeom/resistance.hpp"

namespace rgeom::cli {
namespace {

constexpr double kResistanceTol = 1e-9;

// The input seen through the two graph classes the library works with.
struct Classified {
  std::optional<DirectedLaplacian> directed;  // no positive off-diagonal
  std::optional<SignedLaplacianQ> q;          // symmetric, PSD, kernel span(1)
  ClassReport q_report;
};

bool has_positive_offdiag(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) > 0.0) return true;
    }
  }
  return false;
}

double row_sum_residual(const Matrix& m) { return max_abs(Vector(m.rowwise().sum())); }
double col_sum_residual(const Matrix& m) { return max_abs(Vector(m.colwise().sum().transpose())); }

Classified classify(const GraphInput& input, double tol) {
  const Matrix& L = input.laplacian;
  if (!L.allFinite()) throw ValidationError("input matrix has non-finite entries");
  if (row_sum_residual(L) > tol * std::max(1.0, max_abs(L))) {
    throw ValidationError("input is not a Laplacian: row sums are not zero (max |L 1| = " +
                          std::to_string(row_sum_residual(L)) + ")");
  }
  Classified out;
  if (!has_positive_offdiag(L)) out.directed = DirectedLaplacian::from_matrix(L);
  if (input.n >= 2) {
    auto result = validate_class_q(L, tol);
    if (auto* q = std::get_if<SignedLaplacianQ>(&result)) {
      out.q = std::move(*q);
    } else {
      out.q_report = std::get<ClassReport>(result);
    }
  }
  return out;
}

const DirectedLaplacian& need_directed(const Classified& c, const char* what) {
  if (!c.directed) {
    throw ValidationError(std::string(what) +
                          ": input has negative edge weights; only unsigned graphs qualify");
  }
  return *c.directed;
}

const SignedLaplacianQ& need_q(const Classified& c, const char* what) {
  if (!c.q) {
    throw ValidationError(std::string(what) + ": input is not in class Q (" + c.q_report.message() +
                          ")");
  }
  return *c.q;
}

// The class-Q matrix for any input with a symmetric resistance matrix.
SignedLaplacianQ symmetric_source(const Classified& c, const char* what) {
  if (c.q) return *c.q;
  if (c.directed && c.directed->scwb()) return undirect(*c.directed);
  if (c.directed && !c.directed->strongly_connected()) {
    throw StructureError(std::string(what) + ": graph is not strongly connected");
  }
  if (c.directed) {
    throw ContractViolation(std::string(what) +
                            ": needs a symmetric resistance matrix (weight-balanced or class Q)");
  }
  return need_q(c, what);
}

Json ids_json(const NodeSet& s) { return Json(s.one_based()); }

Json ids_json(const std::vector<int>& zero_based) {
  Json out = Json::array();
  for (int i : zero_based) out.push_back(i + 1);
  return out;
}

Json class_report_json(const ClassReport& r) {
  Json failures = Json::array();
  for (ClassFailure f : r.failures) failures.push_back(to_string(f));
  return Json{{"failures", failures},
              {"asymmetry", r.asymmetry},
              {"max_row_sum", r.max_row_sum},
              {"min_eigenvalue", r.min_eigenvalue},
              {"second_eigenvalue", r.second_eigenvalue},
              {"kernel_residual", r.kernel_residual},
              {"min_diagonal", r.min_diagonal}};
}

Json metric_json(const Matrix& omega) {
  const MetricClass mc = classify_metric(omega);
  Json out{{"label", to_string(mc.label)}};
  if (mc.witness) out["witness"] = to_json(*mc.witness);
  return out;
}

void add_common_inputs(Report& r, const GraphInput& input, const CommonOptions& opts) {
  r.inputs["file"] = opts.input_path;
  r.inputs["format"] = input.source == InputSource::kEdgeList ? "edge_list" : "matrix";
  r.inputs["as_laplacian"] = opts.as_laplacian;
  r.inputs["n"] = input.n;
  if (opts.tol) r.inputs["tol"] = *opts.tol;
  if (opts.gamma) r.inputs["gamma"] = *opts.gamma;
}

void add_shift_check(Report& r, const DirectedLaplacian& L, const CommonOptions& opts) {
  if (!opts.gamma) return;
  if (!L.scwb()) {
    throw ContractViolation("--gamma needs a strongly connected weight-balanced graph");
  }
  const Matrix shifted = pinv_via_shift(L, *opts.gamma);
  const double residual = max_abs(Matrix(shifted - laplacian_pinv(L)));
  r.residuals["pinv_via_shift"] = residual;
  r.ok = r.ok && residual <= kResistanceTol;
}

Json degrees(const Matrix& cosines) {
  Matrix deg = cosines.unaryExpr([](double c) {
    return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / std::numbers::pi;
  });
  return to_json(deg);
}

void dump(std::string& out, const Json& v, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line so matrices read row by row.
      bool flat = true;
      for (const auto& e : v) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>() + 0.0;  // no negative zero
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string dump_json(const Json& value, int indent) {
  std::string out;
  dump(out, value, indent, 0);
  return out;
}

Json Report::to_json() const {
  return Json{{"command", command},
              {"inputs", inputs},
              {"outputs", outputs},
              {"residuals", residuals},
              {"status", ok ? "ok" : "fail"}};
}

Report cmd_check(const GraphInput& input, const CommonOptions& opts) {
  const double tol = opts.tol.value_or(kStructuralTol);
  Report r{"check"};
  add_common_inputs(r, input, opts);
  const Classified c = classify(input, tol);
  const Matrix& L = input.laplacian;
  const double scale = std::max(1.0, max_abs(L));
  r.outputs["signed"] = !c.directed.has_value();
  r.outputs["sc"] = c.directed ? c.directed->strongly_connected() : is_strongly_connected(L);
  r.outputs["wb"] = col_sum_residual(L) <= tol * scale;
  r.outputs["symmetric"] = max_abs(Matrix(L - L.transpose())) <= tol * scale;
  r.outputs["class_q"] = c.q.has_value();
  if (!c.q && input.n >= 2) r.outputs["class_q_report"] = class_report_json(c.q_report);
  const Matrix sym = 0.5 * (L + L.transpose());
  r.outputs["symmetric_part_eigenvalues"] = to_json(Vector(sym_eig(sym).eigenvalues));
  if (c.directed && c.directed->strongly_connected()) {
    r.outputs["singular_values"] = to_json(Vector(svd(L).singular_values));
  }
  r.residuals["row_sums"] = row_sum_residual(L);
  r.residuals["column_sums"] = col_sum_residual(L);
  return r;
}

Report cmd_kron(const GraphInput& input, const std::vector<int>& keep_one_based,
                const CommonOptions& opts) {
  const double tol = opts.tol.value_or(kStructuralTol);
  Report r{"kron"};
  add_common_inputs(r, input, opts);
  r.inputs["keep"] = keep_one_based;
  const NodeSet keep = NodeSet::from_one_based(keep_one_based, input.n);
  if (keep.size() < 2) throw ContractViolation("kron: --keep needs at least two nodes");
  const Classified c = classify(input, tol);

  if (c.directed) {
    const DirectedLaplacian& L = *c.directed;
    const KronResult k = kron_reduce(L, keep);
    r.outputs["reduced"] = to_json(k.reduced);
    r.outputs["kept"] = ids_json(k.kept);
    r.outputs["preserved"] = Json{{"row_sums_zero", k.preserved.row_sums_zero},
                                  {"offdiag_nonpos", k.preserved.offdiag_nonpos},
                                  {"weight_balanced", k.preserved.weight_balanced},
                                  {"strongly_connected", k.preserved.strongly_connected}};
    if (L.strongly_connected()) {
      const DirectedLaplacian reduced = k.laplacian();
      double residual = 0.0;
      for (int a = 0; a < keep.size(); ++a) {
        for (int b = 0; b < keep.size(); ++b) {
          if (a == b) continue;
          const double before = effective_resistance_directed(L, keep[a], keep[b]);
          const double after = effective_resistance_directed(reduced, a, b);
          residual = std::max(residual, std::abs(before - after));
        }
      }
      r.residuals["resistance_invariance"] = residual;
      r.ok = residual <= kResistanceTol;
    }
    return r;
  }

  const SignedLaplacianQ& Q = need_q(c, "kron");
  const SignedLaplacianQ reduced = kron_reduce_q(Q, keep);
  r.outputs["reduced"] = to_json(reduced.matrix());
  r.outputs["kept"] = ids_json(keep);
  const Matrix before = resistance_matrix_q(Q).omega;
  const Matrix after = resistance_matrix_q(reduced).omega;
  const double residual =
      max_abs(Matrix(Matrix(before(keep.indices(), keep.indices())) - after));
  r.residuals["resistance_invariance"] = residual;
  r.ok = residual <= kResistanceTol;
  return r;
}

Report cmd_resistance(const GraphInput& input, const CommonOptions& opts) {
  const double tol = opts.tol.value_or(kStructuralTol);
  Report r{"resistance"};
  add_common_inputs(r, input, opts);
  const Classified c = classify(input, tol);
  ResistanceMatrix omega;
  if (c.directed) {
    if (!c.directed->strongly_connected()) {
      throw StructureError("resistance: graph is not strongly connected");
    }
    omega = resistance_matrix_sc(*c.directed);
    add_shift_check(r, *c.directed, opts);
  } else {
    omega = resistance_matrix_q(need_q(c, "resistance"));
  }
  r.outputs["kind"] = to_string(omega.kind);
  r.outputs["omega"] = to_json(omega.omega);
  if (omega.symmetric()) {
    r.outputs["metric"] = metric_json(omega.omega);
    r.outputs["inertia"] = [&] {
      const Inertia in = inertia(omega.omega);
      return Json{{"positive", in.n_pos}, {"negative", in.n_neg}, {"zero", in.n_zero}};
    }();
  }
  return r;
}

Report cmd_curvature(const GraphInput& input, const CommonOptions& opts) {
  const double tol = opts.tol.value_or(kFbiTol);
  Report r{"curvature"};
  add_common_inputs(r, input, opts);
  const Classified c = classify(input, kStructuralTol);
  if (c.directed) {
    const DirectedLaplacian& L = *c.directed;
    if (!L.strongly_connected()) throw StructureError("curvature: graph is not strongly connected");
    if (L.weight_balanced()) {
      const CurvatureRadius cr = curvature_radius_scwb(L);
      r.outputs["p"] = to_json(cr.p);
      r.outputs["sigma2"] = cr.sigma2;
      r.outputs["zeta"] = to_json(cr.zeta);
      r.outputs["undirected"] = to_json(undirect(L).matrix());
      const FbiBlocks fbi = verify_fbi(L);
      const RelationResiduals rel = verify_relations(L);
      r.residuals["fbi"] = fbi.residual;
      r.residuals["relations"] = rel.max();
      r.ok = fbi.residual <= tol && rel.max() <= tol;
      add_shift_check(r, L, opts);
    } else {
      const CurvatureRadius cr = curvature_radius_sc(L);
      r.outputs["p"] = to_json(cr.p);
      r.outputs["sigma2"] = cr.sigma2;
      const WeightBalancing wb = weight_balance(L);
      const CurvatureRadius balanced =
          wb_transform(cr.p, cr.sigma2, wb.m, resistance_matrix_sc(L));
      const CurvatureRadius direct = curvature_radius_scwb(wb.balanced);
      r.outputs["balancing"] = to_json(wb.m);
      r.outputs["p_balanced"] = to_json(balanced.p);
      r.outputs["sigma2_balanced"] = balanced.sigma2;
      const double residual = std::max(max_abs(Vector(balanced.p - direct.p)),
                                       std::abs(balanced.sigma2 - direct.sigma2));
      r.residuals["wb_transform"] = residual;
      r.ok = residual <= tol;
    }
    return r;
  }
  const SignedLaplacianQ& Q = need_q(c, "curvature");
  const CurvatureRadius cr = curvature_radius_q(Q, NodeSet::all(Q.n()));
  r.outputs["p"] = to_json(cr.p);
  r.outputs["sigma2"] = cr.sigma2;
  r.outputs["zeta"] = to_json(cr.zeta);
  const FbiBlocks fbi = verify_fbi_q(Q);
  r.residuals["fbi"] = fbi.residual;
  r.ok = fbi.residual <= tol;
  return r;
}

Report cmd_maxvar(const GraphInput& input, const CommonOptions& opts) {
  MaxVarOptions mv;
  if (opts.tol) mv.tol = *opts.tol;
  Report r{"maxvar"};
  add_common_inputs(r, input, opts);
  const Classified c = classify(input, kStructuralTol);
  if (input.n == 1) {
    r.outputs["f_star"] = Json::array({1.0});
    r.outputs["support"] = Json::array({1});
    r.outputs["value"] = 0.0;
    return r;
  }
  const SignedLaplacianQ Q = symmetric_source(c, "maxvar");
  const ResistanceMatrix omega = resistance_matrix_q(Q);
  const MaxVarSolution sol = solve_maxvar(omega, mv);
  r.outputs["f_star"] = to_json(sol.f_star.f());
  r.outputs["support"] = ids_json(sol.support);
  r.outputs["value"] = sol.value;
  r.outputs["method"] = sol.method == MaxVarMethod::kIterative ? "iterative" : "enumeration";
  r.outputs["iterations"] = sol.iterations;

  const CharacterizationReport ch = characterize(sol, Q);
  r.outputs["p_support"] = to_json(ch.p_support);
  r.outputs["sigma2_support"] = ch.sigma2_support;
  const Vector p_full = curvature_radius_q(Q, NodeSet::all(Q.n())).p;
  r.outputs["p"] = to_json(p_full);
  r.outputs["negative_curvature_support"] = ids_json(negative_curvature_support_nodes(Q, sol));
  r.residuals["kkt"] = sol.kkt_residual;
  r.residuals["curvature"] = ch.curvature_residual;
  r.residuals["radius"] = ch.radius_residual;
  r.ok = ch.passed;
  if (Q.n() <= kMaxEnumerationNodes) {
    const MaxVarSolution exact = solve_maxvar_exact(omega);
    const double gap = std::abs(exact.value - sol.value);
    r.residuals["exact_value_gap"] = gap;
    r.residuals["exact_support_match"] = exact.support == sol.support;
    r.ok = r.ok && gap <= kCharacterizationTol && exact.support == sol.support;
  }
  return r;
}

Report cmd_embed(const GraphInput& input, const std::optional<std::string>& coordinates_path,
                 const CommonOptions& opts) {
  Report r{"embed"};
  add_common_inputs(r, input, opts);
  if (coordinates_path) r.inputs["coordinates"] = *coordinates_path;
  const Classified c = classify(input, opts.tol.value_or(kStructuralTol));
  const SignedLaplacianQ Q = symmetric_source(c, "embed");
  const Embedding emb = embed(Q);
  const SimplexGeometry geom = simplex_geometry(Q, emb);
  r.outputs["coordinates"] = to_json(Matrix(emb.B.transpose()));
  r.outputs["lambda"] = to_json(emb.lambda);
  r.outputs["circumcenter"] = to_json(geom.circumcenter);
  r.outputs["circumradius"] = geom.circumradius;
  r.outputs["cos_dihedral"] = to_json(geom.cos_dihedral);
  r.outputs["cos_vertex"] = to_json(geom.cos_vertex);
  r.outputs["dihedral_degrees"] = degrees(geom.cos_dihedral);
  r.outputs["vertex_degrees"] = degrees(geom.cos_vertex);

  const Matrix omega = resistance_matrix_q(Q).omega;
  double distance = 0.0;
  double radius = 0.0;
  for (int i = 0; i < Q.n(); ++i) {
    radius = std::max(radius, std::abs((geom.circumcenter - emb.B.col(i)).squaredNorm() -
                                       geom.circumradius * geom.circumradius));
    for (int j = 0; j < Q.n(); ++j) {
      distance = std::max(distance, std::abs((emb.B.col(i) - emb.B.col(j)).squaredNorm() - omega(i, j)));
    }
  }
  r.residuals["distances"] = distance;
  r.residuals["circumsphere"] = radius;
  const AngleCheck angles = verify_angles_geometric(Q, emb);
  if (angles.skipped) {
    r.residuals["angles"] = Json{{"skipped", angles.reason}};
  } else {
    r.residuals["angles"] = Json{{"dihedral", angles.dihedral_deviation},
                                 {"vertex", angles.vertex_deviation},
                                 {"normals", angles.normal_residual}};
  }
  r.ok = distance <= kResistanceTol && radius <= kResistanceTol &&
         (angles.skipped || std::max({angles.dihedral_deviation, angles.vertex_deviation,
                                      angles.normal_residual}) <= kResistanceTol);
  if (coordinates_path) export_coordinates(emb, geom, *coordinates_path);
  return r;
}

Report cmd_balance(const GraphInput& input, const CommonOptions& opts) {
  const double tol = opts.tol.value_or(kStructuralTol);
  Report r{"balance"};
  add_common_inputs(r, input, opts);
  const Classified c = classify(input, tol);
  const DirectedLaplacian& L = need_directed(c, "balance");
  const WeightBalancing wb = weight_balance(L, tol);
  r.outputs["m"] = to_json(wb.m);
  r.outputs["balanced"] = to_json(wb.balanced.matrix());
  r.residuals["column_sums"] = col_sum_residual(wb.balanced.matrix());
  r.ok = wb.balanced.weight_balanced();
  return r;
}

}  // namespace rgeom::cli
