#include "rgeom/embed.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "rgeom/errors.hpp"
#include "rgeom/fbi.hpp"
#include "rgeom/linalg.hpp"

namespace rgeom {
namespace {

Matrix cosine_matrix(const Matrix& m, double sign) {
  const Vector d = m.diagonal().cwiseSqrt();
  Matrix out = sign * m.cwiseQuotient(d * d.transpose());
  out.diagonal().setOnes();
  return out;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_row(std::ostream& os, const Eigen::Ref<const Vector>& row) {
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    if (k > 0) os << ',';
    os << format_real(row(k));
  }
  os << '\n';
}

std::vector<double> parse_row(const std::string& line, const std::string& path, int line_no) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') {
      throw IoError(path + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

Embedding embed(const SignedLaplacianQ& Q) {
  const int n = Q.n();
  const SymEig<double> eig = sym_eig(Q.matrix());
  Embedding out;
  out.lambda = eig.eigenvalues.head(n - 1);
  out.V = eig.eigenvectors.leftCols(n - 1);
  out.B = out.lambda.cwiseSqrt().cwiseInverse().asDiagonal() * out.V.transpose();
  return out;
}

SimplexGeometry simplex_geometry(const SignedLaplacianQ& Q, const Embedding& emb) {
  const CurvatureRadius cr = curvature_radius_q(Q, NodeSet::all(Q.n()));
  SimplexGeometry out;
  out.circumcenter = emb.B * cr.p;
  out.circumradius = std::sqrt(cr.sigma2);
  out.cos_dihedral = cosine_matrix(Q.matrix(), -1.0);
  out.cos_vertex = cosine_matrix(emb.B.transpose() * emb.B, 1.0);
  return out;
}

AngleCheck verify_angles_geometric(const SignedLaplacianQ& Q, const Embedding& emb) {
  const int n = Q.n();
  AngleCheck out;
  if (n < 3) {
    out.skipped = true;
    out.reason = "no faces";
    return out;
  }
  const SimplexGeometry closed = simplex_geometry(Q, emb);
  // Row i of B^dagger is the normal of the face opposite b_i.
  const Matrix normals = pseudoinverse(emb.B);
  for (int i = 0; i < n; ++i) {
    const Vector ni = normals.row(i).transpose();
    const double norm_i = ni.norm();
    for (int j = 0; j < n; ++j) {
      if (j != i) {
        const Vector nj = normals.row(j).transpose();
        const double c = -ni.dot(nj) / (norm_i * nj.norm());
        out.dihedral_deviation = std::max(out.dihedral_deviation, std::abs(c - closed.cos_dihedral(i, j)));

        const Vector bi = emb.B.col(i);
        const Vector bj = emb.B.col(j);
        const double side = (bi - bj).squaredNorm();
        const double cv = (bi.squaredNorm() + bj.squaredNorm() - side) / (2.0 * bi.norm() * bj.norm());
        out.vertex_deviation = std::max(out.vertex_deviation, std::abs(cv - closed.cos_vertex(i, j)));
      }
      for (int k = 0; k < n; ++k) {
        if (j == i || k == i || k == j) continue;
        const double r = std::abs(ni.dot(emb.B.col(j) - emb.B.col(k))) / norm_i;
        out.normal_residual = std::max(out.normal_residual, r);
      }
    }
  }
  return out;
}

void export_coordinates(const Embedding& emb, const SimplexGeometry& geom, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("export_coordinates: cannot open '" + path + "' for writing");
  const Eigen::Index n = emb.B.cols();
  const Eigen::Index dim = emb.B.rows();
  os << "node";
  for (Eigen::Index k = 1; k <= dim; ++k) os << ",x" << k;
  os << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    os << (i + 1);
    for (Eigen::Index k = 0; k < dim; ++k) os << ',' << format_real(emb.B(k, i));
    os << '\n';
  }
  os << "# circumcenter\n";
  write_row(os, geom.circumcenter);
  os << "# circumradius\n" << format_real(geom.circumradius) << '\n';
  os << "# cos_dihedral\n";
  for (Eigen::Index i = 0; i < n; ++i) write_row(os, geom.cos_dihedral.row(i).transpose());
  os << "# cos_vertex\n";
  for (Eigen::Index i = 0; i < n; ++i) write_row(os, geom.cos_vertex.row(i).transpose());
  os.flush();
  if (!os) throw IoError("export_coordinates: write to '" + path + "' failed");
}

CoordinateFile read_coordinates(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("read_coordinates: cannot open '" + path + "'");
  std::string line;
  int line_no = 0;
  std::string section = "points";
  std::vector<std::vector<double>> points, center, radius, dihedral, vertex;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line.rfind("node", 0) != 0) throw IoError(path + ":1: missing header");
      continue;
    }
    if (line[0] == '#') {
      section = line.substr(line.find_first_not_of("# "));
      continue;
    }
    std::vector<double> row = parse_row(line, path, line_no);
    if (section == "points") {
      row.erase(row.begin());
      points.push_back(std::move(row));
    } else if (section == "circumcenter") {
      center.push_back(std::move(row));
    } else if (section == "circumradius") {
      radius.push_back(std::move(row));
    } else if (section == "cos_dihedral") {
      dihedral.push_back(std::move(row));
    } else if (section == "cos_vertex") {
      vertex.push_back(std::move(row));
    } else {
      throw IoError(path + ":" + std::to_string(line_no) + ": unknown section '" + section + "'");
    }
  }
  const auto to_matrix = [&](const std::vector<std::vector<double>>& rows, const char* what) {
    if (rows.empty()) return Matrix(0, 0);
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size()) {
        throw IoError(path + ": ragged rows in section '" + what + "'");
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      }
    }
    return m;
  };
  if (radius.size() != 1 || radius[0].size() != 1 || center.size() != 1) {
    throw IoError(path + ": missing circumcenter or circumradius section");
  }
  CoordinateFile out;
  out.points = to_matrix(points, "points");
  out.circumcenter = to_matrix(center, "circumcenter").row(0).transpose();
  out.circumradius = radius[0][0];
  out.cos_dihedral = to_matrix(dihedral, "cos_dihedral");
  out.cos_vertex = to_matrix(vertex, "cos_vertex");
  return out;
}

}  // namespace rgeom
