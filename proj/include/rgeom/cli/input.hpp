#pragma once

// Graph ingestion for the command-line tool.
//
// Edge lists: `#` comments, optional `n <count>` header, then lines
// `src dst weight` with 1-based ids. Negative weights are allowed and make
// the graph signed. Matrices: CSV, one row per line; read as an adjacency
// matrix unless `as_laplacian` is set.

#include <string>
#include <vector>

#include "rgeom/graph.hpp"
#include "rgeom/types.hpp"

namespace rgeom::cli {

enum class InputSource { kEdgeList, kMatrix };

struct GraphInput {
  InputSource source = InputSource::kEdgeList;
  int n = 0;
  std::vector<Edge> edges;  // edge lists only
  Matrix laplacian;         // D - A, possibly with positive off-diagonals
};

/// Files ending in `.csv` are matrices, anything else an edge list.
GraphInput read_graph_input(const std::string& path, bool as_laplacian);

GraphInput parse_edge_list(const std::string& text, const std::string& origin);
GraphInput parse_matrix_csv(const std::string& text, const std::string& origin, bool as_laplacian);

/// "1,2,4" -> {1, 2, 4}.
std::vector<int> parse_id_list(const std::string& text);

}  // namespace rgeom::cli
