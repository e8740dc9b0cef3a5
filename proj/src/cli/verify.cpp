#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "rgeom/cli/commands.hpp"
#include "rgeom/embed.hpp"
#include "rgeom/errors.hpp"
#include "rgeom/fbi.hpp"
#include "rgeom/kron.hpp"
#include "rgeom/linalg.hpp"
#include "rgeom/maxvar.hpp"
#include "rgeom/random.hpp"
#include "rgeom/resistance.hpp"

namespace rgeom::cli {
namespace {

struct Tally {
  double tol = 0.0;
  int runs = 0;
  int passed = 0;
  double max_residual = 0.0;
  std::vector<std::string> errors;

  void record(double residual) {
    ++runs;
    max_residual = std::max(max_residual, residual);
    if (residual <= tol) ++passed;
  }
  void record(bool ok) { record(ok ? 0.0 : std::numeric_limits<double>::infinity()); }
};

class Suite {
 public:
  void declare(const std::string& name, double tol) {
    order_.push_back(name);
    tallies_[name].tol = tol;
  }

  // Runs one check; exceptions count as failures.
  void run(const std::string& name, int case_index, const std::function<void(Tally&)>& check) {
    Tally& t = tallies_.at(name);
    try {
      check(t);
    } catch (const Error& e) {
      ++t.runs;
      if (t.errors.size() < 5) {
        t.errors.push_back("case " + std::to_string(case_index) + ": " + e.what());
      }
    }
  }

  bool all_passed() const {
    return std::all_of(tallies_.begin(), tallies_.end(),
                       [](const auto& kv) { return kv.second.passed == kv.second.runs; });
  }

  Json to_json() const {
    Json out = Json::object();
    for (const std::string& name : order_) {
      const Tally& t = tallies_.at(name);
      Json entry{{"runs", t.runs}, {"passed", t.passed}, {"tolerance", t.tol}};
      entry["max_residual"] = t.runs > 0 ? Json(t.max_residual) : Json(nullptr);
      if (!t.errors.empty()) entry["errors"] = t.errors;
      out[name] = entry;
    }
    return out;
  }

 private:
  std::vector<std::string> order_;
  std::map<std::string, Tally> tallies_;
};

double max_abs_diff(const Matrix& a, const Matrix& b) { return max_abs(Matrix(a - b)); }

}  // namespace

Report cmd_verify(const VerifyOptions& opts) {
  Report r{"verify"};
  r.inputs = Json{{"seed", opts.seed}, {"cases", opts.cases}, {"n_max", opts.n_max}};
  if (opts.cases < 0) throw ValidationError("verify: --cases must be nonnegative");
  if (opts.cases > 0 && opts.n_max < 4) throw ValidationError("verify: --n-max must be at least 4");

  Suite suite;
  suite.declare("commutativity", 1e-8);
  suite.declare("fbi", 1e-8);
  suite.declare("fbi_q", 1e-8);
  suite.declare("relations", 1e-9);
  suite.declare("kron_resistance", 1e-9);
  suite.declare("omega_inertia", 0.0);
  suite.declare("sigma2_pairs", 1e-10);
  suite.declare("sigma2_monotone", 1e-12);
  suite.declare("wb_transform", 1e-8);
  suite.declare("pinv_via_shift", 1e-9);
  suite.declare("maxvar_agreement", 1e-8);
  suite.declare("maxvar_characterization", kCharacterizationTol);
  suite.declare("embedding", 1e-9);
  suite.declare("metric_classification", 0.0);

  for (int c = 0; c < opts.cases; ++c) {
    InstanceRng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(c)));
    const int n = rng.integer(4, opts.n_max);
    const DirectedLaplacian scwb = random_scwb_laplacian(n, rng);
    const DirectedLaplacian sc = random_sc_laplacian(n, rng);
    const DirectedLaplacian undirected = random_undirected_laplacian(n, rng);
    const NodeSet keep = random_subset(n, rng, 2);
    const std::uint64_t q_seed = derive_seed(opts.seed ^ 0x51ULL, static_cast<std::uint64_t>(c));
    const double gamma = rng.uniform(0.1, 10.0) * (rng.bernoulli(0.5) ? 1.0 : -1.0);

    suite.run("commutativity", c, [&](Tally& t) { t.record(check_commutativity(scwb, keep).residual); });
    suite.run("fbi", c, [&](Tally& t) { t.record(verify_fbi(scwb).residual); });
    suite.run("relations", c, [&](Tally& t) { t.record(verify_relations(scwb).max()); });
    suite.run("kron_resistance", c, [&](Tally& t) {
      InstanceRng local(derive_seed(q_seed, 1));
      const NodeSet kept = random_reachable_keep(sc, local);
      const DirectedLaplacian reduced = kron_reduce(sc, kept).laplacian();
      double worst = 0.0;
      for (int a = 0; a < kept.size(); ++a) {
        for (int b = 0; b < kept.size(); ++b) {
          if (a == b) continue;
          worst = std::max(worst, std::abs(effective_resistance_directed(sc, kept[a], kept[b]) -
                                           effective_resistance_directed(reduced, a, b)));
        }
      }
      t.record(worst);
    });
    suite.run("omega_inertia", c, [&](Tally& t) {
      const Inertia expected{1, n - 1, 0};
      t.record(inertia(resistance_matrix_scwb(scwb).omega) == expected);
    });
    suite.run("sigma2_pairs", c, [&](Tally& t) {
      const Matrix omega = resistance_matrix_scwb(scwb).omega;
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          worst = std::max(worst, std::abs(sigma2_subset(omega, {i, j}) - omega(i, j) / 4.0));
        }
      }
      t.record(worst);
    });
    suite.run("sigma2_monotone", c, [&](Tally& t) {
      const Matrix omega = resistance_matrix_scwb(scwb).omega;
      InstanceRng local(derive_seed(q_seed, 2));
      double worst = 0.0;
      for (int k = 0; k < 20; ++k) {
        const NodeSet big = random_subset(n, local, 2);
        std::vector<int> small = big.indices();
        const int drop = local.integer(0, static_cast<int>(small.size()) - 2);
        small.resize(small.size() - static_cast<std::size_t>(drop));
        const double s_small = sigma2_subset(omega, small);
        const double s_big = sigma2_subset(omega, big.indices());
        worst = std::max(worst, s_small - s_big);
      }
      t.record(std::max(0.0, worst));
    });
    suite.run("wb_transform", c, [&](Tally& t) {
      const WeightBalancing wb = weight_balance(sc);
      const CurvatureRadius raw = curvature_radius_sc(sc);
      const ResistanceMatrix omega = resistance_matrix_sc(sc);
      const CurvatureRadius there = wb_transform(raw.p, raw.sigma2, wb.m, omega);
      const CurvatureRadius direct = curvature_radius_scwb(wb.balanced);
      const CurvatureRadius back = wb_transform(there.p, there.sigma2,
                                                Vector(wb.m.cwiseInverse()), omega);
      t.record(std::max({max_abs(Vector(there.p - direct.p)), std::abs(there.sigma2 - direct.sigma2),
                         max_abs(Vector(back.p - raw.p)), std::abs(back.sigma2 - raw.sigma2)}));
    });
    suite.run("pinv_via_shift", c, [&](Tally& t) {
      t.record(max_abs_diff(pinv_via_shift(scwb, gamma), laplacian_pinv(scwb)));
    });
    suite.run("metric_classification", c, [&](Tally& t) {
      t.record(classify_metric(resistance_matrix_scwb(undirected).omega).label ==
               MetricLabel::kResistanceMetric);
    });

    InstanceRng q_rng(q_seed);
    const SignedLaplacianQ q = random_class_q(std::min(n, 10), q_rng);
    const ResistanceMatrix q_omega = resistance_matrix_q(q);
    suite.run("fbi_q", c, [&](Tally& t) { t.record(verify_fbi_q(q).residual); });
    suite.run("omega_inertia", c, [&](Tally& t) {
      const Inertia expected{1, q.n() - 1, 0};
      t.record(inertia(q_omega.omega) == expected);
    });
    suite.run("metric_classification", c, [&](Tally& t) {
      t.record(classify_metric(q_omega.omega).label == MetricLabel::kStrictNegativeType);
    });
    suite.run("maxvar_agreement", c, [&](Tally& t) {
      const MaxVarSolution a = solve_maxvar(q_omega);
      const MaxVarSolution b = solve_maxvar_exact(q_omega);
      t.record(a.support == b.support ? std::abs(a.value - b.value)
                                      : std::numeric_limits<double>::infinity());
    });
    suite.run("maxvar_characterization", c, [&](Tally& t) {
      const CharacterizationReport ch = characterize(solve_maxvar(q_omega), q);
      t.record(std::max(ch.curvature_residual, ch.radius_residual));
    });
    suite.run("embedding", c, [&](Tally& t) {
      const Embedding emb = embed(q);
      const SimplexGeometry geom = simplex_geometry(q, emb);
      double worst = 0.0;
      for (int i = 0; i < q.n(); ++i) {
        worst = std::max(worst, std::abs((geom.circumcenter - emb.B.col(i)).squaredNorm() -
                                         geom.circumradius * geom.circumradius));
        for (int j = 0; j < q.n(); ++j) {
          worst = std::max(worst, std::abs((emb.B.col(i) - emb.B.col(j)).squaredNorm() -
                                           q_omega.omega(i, j)));
        }
      }
      const AngleCheck angles = verify_angles_geometric(q, emb);
      worst = std::max({worst, angles.dihedral_deviation, angles.vertex_deviation});
      t.record(worst);
    });
  }

  r.outputs["properties"] = suite.to_json();
  r.ok = suite.all_passed();
  return r;
}

}  // namespace rgeom::cli
