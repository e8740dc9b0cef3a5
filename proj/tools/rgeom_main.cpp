// rgeom: resistance geometry of directed and signed graphs.
//
// Exit codes: 0 ok, 1 invalid input or usage, 2 numeric failure,
// 3 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rgeom/cli/commands.hpp"
#include "rgeom/cli/input.hpp"
#include "rgeom/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitVerification = 3;

void emit(const rgeom::cli::Report& report, const std::string& out_path) {
  const std::string text = rgeom::cli::dump_json(report.to_json()) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os || !(os << text)) throw rgeom::IoError("cannot write report to '" + out_path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resistance geometry of directed and signed graphs"};
  app.require_subcommand(1);

  rgeom::cli::CommonOptions common;
  std::string out_path;
  std::string keep_text;
  rgeom::cli::VerifyOptions verify;

  const auto add_graph_options = [&](CLI::App* sub, bool report_out) {
    sub->add_option("input", common.input_path, "Edge list, or CSV matrix (*.csv)")->required();
    sub->add_flag("--as-laplacian", common.as_laplacian, "Read a CSV matrix as a Laplacian");
    sub->add_option("--tol", common.tol, "Tolerance (defaults to the module default)");
    sub->add_option("--gamma", common.gamma, "Check L^dagger against the shifted inverse with this gamma");
    if (report_out) sub->add_option("--out", out_path, "Write the JSON report to this file");
  };

  CLI::App* check = app.add_subcommand("check", "Structural properties and class-Q membership");
  add_graph_options(check, true);
  CLI::App* kron = app.add_subcommand("kron", "Kron reduction onto a kept node set");
  add_graph_options(kron, true);
  kron->add_option("--keep", keep_text, "Kept nodes, 1-based, e.g. 1,2,4")->required();
  CLI::App* resistance = app.add_subcommand("resistance", "Effective resistance matrix");
  add_graph_options(resistance, true);
  CLI::App* curvature = app.add_subcommand("curvature", "Resistance curvature and radius");
  add_graph_options(curvature, true);
  CLI::App* maxvar = app.add_subcommand("maxvar", "Maximum variance distribution");
  add_graph_options(maxvar, true);
  CLI::App* embed = app.add_subcommand("embed", "Resistive embedding and simplex geometry");
  add_graph_options(embed, false);
  embed->add_option("--out", out_path, "Write the coordinate CSV to this file");
  CLI::App* balance = app.add_subcommand("balance", "Weight-balancing vector");
  add_graph_options(balance, true);
  CLI::App* verify_cmd = app.add_subcommand("verify", "Random-instance invariant suite");
  verify_cmd->add_option("--seed", verify.seed, "Base seed");
  verify_cmd->add_option("--cases", verify.cases, "Number of random cases");
  verify_cmd->add_option("--n-max", verify.n_max, "Largest graph size");
  verify_cmd->add_option("--out", out_path, "Write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    rgeom::cli::Report report;
    if (*verify_cmd) {
      report = rgeom::cli::cmd_verify(verify);
    } else {
      const rgeom::cli::GraphInput input =
          rgeom::cli::read_graph_input(common.input_path, common.as_laplacian);
      if (*check) {
        report = rgeom::cli::cmd_check(input, common);
      } else if (*kron) {
        report = rgeom::cli::cmd_kron(input, rgeom::cli::parse_id_list(keep_text), common);
      } else if (*resistance) {
        report = rgeom::cli::cmd_resistance(input, common);
      } else if (*curvature) {
        report = rgeom::cli::cmd_curvature(input, common);
      } else if (*maxvar) {
        report = rgeom::cli::cmd_maxvar(input, common);
      } else if (*embed) {
        std::optional<std::string> coords;
        if (!out_path.empty()) coords = out_path;
        report = rgeom::cli::cmd_embed(input, coords, common);
        out_path.clear();
      } else if (*balance) {
        report = rgeom::cli::cmd_balance(input, common);
      }
    }
    emit(report, out_path);
    return report.ok ? kExitOk : kExitVerification;
  } catch (const rgeom::NumericFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const rgeom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
