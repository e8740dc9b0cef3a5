#include "rgeom/cli/input.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rgeom/errors.hpp"

namespace rgeom::cli {
namespace {

std::string where(const std::string& origin, int line) {
  return origin + ":" + std::to_string(line) + ": ";
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& token, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || *end != '\0' || !std::isfinite(v)) {
    throw ValidationError(context + "expected a finite number, got '" + token + "'");
  }
  return v;
}

int parse_int(const std::string& token, const std::string& context) {
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (token.empty() || *end != '\0') {
    throw ValidationError(context + "expected an integer, got '" + token + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

GraphInput parse_edge_list(const std::string& text, const std::string& origin) {
  GraphInput out;
  out.source = InputSource::kEdgeList;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  int declared = -1;
  int max_id = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string content = trim(raw.substr(0, raw.find('#')));
    if (content.empty()) continue;
    std::istringstream fields(content);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok[0] == "n") {
      if (tok.size() != 2 || declared >= 0 || !out.edges.empty()) {
        throw ValidationError(where(origin, line) + "header must be a single leading 'n <count>'");
      }
      declared = parse_int(tok[1], where(origin, line));
      if (declared < 1) throw ValidationError(where(origin, line) + "node count must be positive");
      continue;
    }
    if (tok.size() != 3) {
      throw ValidationError(where(origin, line) + "expected 'src dst weight'");
    }
    Edge e{parse_int(tok[0], where(origin, line)), parse_int(tok[1], where(origin, line)),
           parse_real(tok[2], where(origin, line))};
    if (e.src < 1 || e.dst < 1) throw ValidationError(where(origin, line) + "node ids are 1-based");
    if (declared >= 0 && (e.src > declared || e.dst > declared)) {
      throw ValidationError(where(origin, line) + "node id exceeds declared n = " +
                            std::to_string(declared));
    }
    if (e.src == e.dst) throw ValidationError(where(origin, line) + "self-loop");
    if (e.weight == 0.0) throw ValidationError(where(origin, line) + "zero weight");
    max_id = std::max({max_id, e.src, e.dst});
    out.edges.push_back(e);
  }
  out.n = declared >= 0 ? declared : max_id;
  if (out.n < 1) throw ValidationError(origin + ": no nodes");
  out.laplacian = Matrix::Zero(out.n, out.n);
  for (const Edge& e : out.edges) {
    out.laplacian(e.src - 1, e.dst - 1) -= e.weight;
    out.laplacian(e.src - 1, e.src - 1) += e.weight;
  }
  return out;
}

GraphInput parse_matrix_csv(const std::string& text, const std::string& origin, bool as_laplacian) {
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, raw)) {
    ++line;
    std::string content = trim(raw.substr(0, raw.find('#')));
    if (content.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(content);
    for (std::string cell; std::getline(cells, cell, ',');) {
      row.push_back(parse_real(trim(cell), where(origin, line)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError(where(origin, line) + "row has " + std::to_string(row.size()) +
                            " entries, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(origin + ": empty matrix");
  if (rows.size() != rows.front().size()) {
    throw ValidationError(origin + ": matrix is " + std::to_string(rows.size()) + "x" +
                          std::to_string(rows.front().size()) + ", expected square");
  }
  const int n = static_cast<int>(rows.size());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  GraphInput out;
  out.source = InputSource::kMatrix;
  out.n = n;
  if (as_laplacian) {
    out.laplacian = m;
  } else {
    m.diagonal().setZero();
    out.laplacian = -m;
    out.laplacian.diagonal() = m.rowwise().sum();
  }
  return out;
}

GraphInput read_graph_input(const std::string& path, bool as_laplacian) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open input file '" + path + "'");
  std::stringstream buffer;
  buffer << is.rdbuf();
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (csv) return parse_matrix_csv(buffer.str(), path, as_laplacian);
  if (as_laplacian) throw ValidationError("--as-laplacian applies to CSV matrix input only");
  return parse_edge_list(buffer.str(), path);
}

std::vector<int> parse_id_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string cell; std::getline(ss, cell, ',');) {
    out.push_back(parse_int(trim(cell), "node list: "));
  }
  if (out.empty()) throw ValidationError("node list: empty");
  return out;
}

}  // namespace rgeom::cli
