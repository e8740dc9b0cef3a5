#pragma once

// Resistive embedding of a class-Q graph as a simplex in R^{n-1}.

#include <string>

#include "rgeom/graph.hpp"
#include "rgeom/types.hpp"

namespace rgeom {

/// Column i of B is vertex b_i, with B(k, i) = v_k(i) / sqrt(lambda_k) for
/// the positive eigenpairs of Q in descending order. B^T B = Q^dagger.
struct Embedding {
  Matrix B;       // (n-1) x n
  Vector lambda;  // positive eigenvalues, descending
  Matrix V;       // n x (n-1) matching eigenvectors
};

/// Cosines rather than angles. Diagonals of the cosine matrices are 1.
struct SimplexGeometry {
  Vector circumcenter;  // B p
  double circumradius = 0.0;
  Matrix cos_dihedral;  // -Q_ij / sqrt(Q_ii Q_jj)
  Matrix cos_vertex;    // Q^dagger_ij / sqrt(Q^dagger_ii Q^dagger_jj)
};

struct AngleCheck {
  bool skipped = false;
  std::string reason;
  double dihedral_deviation = 0.0;  // face normals vs closed form
  double vertex_deviation = 0.0;    // law of cosines vs closed form
  double normal_residual = 0.0;     // max |<n_i, b_k - b_l>| / |n_i| over k, l != i
};

/// Everything an exported coordinate file holds.
struct CoordinateFile {
  Matrix points;  // n x (n-1), row i = b_i
  Vector circumcenter;
  double circumradius = 0.0;
  Matrix cos_dihedral;
  Matrix cos_vertex;
};

Embedding embed(const SignedLaplacianQ& Q);

SimplexGeometry simplex_geometry(const SignedLaplacianQ& Q, const Embedding& emb);

/// Recomputes both angle families from the coordinates: dihedral cosines
/// from the face normals (B^dagger)^T 1_i, vertex cosines from pairwise
/// distances. Skipped for n < 3.
AngleCheck verify_angles_geometric(const SignedLaplacianQ& Q, const Embedding& emb);

/// CSV: header `node,x1,...,x{n-1}`, one row per node, then `# circumcenter`,
/// `# circumradius`, `# cos_dihedral` and `# cos_vertex` sections. Reals use
/// 17 significant digits. Throws IoError naming the path.
void export_coordinates(const Embedding& emb, const SimplexGeometry& geom, const std::string& path);

CoordinateFile read_coordinates(const std::string& path);

}  // namespace rgeom
