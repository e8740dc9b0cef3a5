#pragma once

// Kron reduction: Schur complement of a Laplacian onto a kept node set.

#include "rgeom/graph.hpp"
#include "rgeom/types.hpp"

namespace rgeom {

/// Structure checks on the reduced matrix, computed rather than assumed.
struct PreservedFlags {
  bool row_sums_zero = false;
  bool offdiag_nonpos = false;
  bool weight_balanced = false;
  bool strongly_connected = false;
};

struct KronResult {
  Matrix reduced;  // |kept| x |kept|
  NodeSet kept;
  PreservedFlags preserved;

  /// The reduced matrix as a Laplacian. Throws ValidationError if it has a
  /// positive off-diagonal entry (impossible for reachable keep sets).
  DirectedLaplacian laplacian() const { return DirectedLaplacian::from_matrix(reduced); }
};

/// L / keep^c. Requires |keep| >= 2 and that every eliminated node reaches
/// `keep`; off-diagonal round-off within kClampTol (relative) is clamped to 0.
KronResult kron_reduce(const DirectedLaplacian& L, const NodeSet& keep);

/// Q / keep^c, validated back into class Q.
SignedLaplacianQ kron_reduce_q(const SignedLaplacianQ& Q, const NodeSet& keep);

}  // namespace rgeom
