#pragma once

// Subcommands of the rgeom tool. Each returns a Report; the caller maps
// exceptions and failed reports to exit codes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgeom/cli/input.hpp"
#include "rgeom/types.hpp"

namespace rgeom::cli {

using Json = nlohmann::ordered_json;

struct Report {
  std::string command;
  Json inputs = Json::object();
  Json outputs = Json::object();
  Json residuals = Json::object();
  bool ok = true;

  Json to_json() const;
};

struct CommonOptions {
  std::string input_path;
  bool as_laplacian = false;
  std::optional<double> tol;  // module default when unset
  std::optional<double> gamma;
};

Report cmd_check(const GraphInput& input, const CommonOptions& opts);
Report cmd_kron(const GraphInput& input, const std::vector<int>& keep_one_based,
                const CommonOptions& opts);
Report cmd_resistance(const GraphInput& input, const CommonOptions& opts);
Report cmd_curvature(const GraphInput& input, const CommonOptions& opts);
Report cmd_maxvar(const GraphInput& input, const CommonOptions& opts);
Report cmd_embed(const GraphInput& input, const std::optional<std::string>& coordinates_path,
                 const CommonOptions& opts);
Report cmd_balance(const GraphInput& input, const CommonOptions& opts);

struct VerifyOptions {
  std::uint64_t seed = 1;
  int cases = 50;
  int n_max = 12;
};

/// Random-instance invariant suite over every module.
Report cmd_verify(const VerifyOptions& opts);

/// JSON text with reals printed to 17 significant digits and non-finite
/// reals as null.
std::string dump_json(const Json& value, int indent = 2);

Json to_json(const Matrix& m);
Json to_json(const Vector& v);

}  // namespace rgeom::cli
