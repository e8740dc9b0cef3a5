#pragma once

// Small named graphs shared by the unit tests.

#include <Eigen/Dense>

namespace fixture {

using Matrix = Eigen::MatrixXd;

/// Strongly connected weight-balanced 4-node digraph.
inline Matrix example() {
  Matrix l(4, 4);
  l << 3, -1, -2, 0,
       0, 1, 0, -1,
       0, 0, 2, -2,
       -3, 0, 0, 3;
  return l;
}

/// Its undirected image (L^dagger_s)^dagger.
inline Matrix example_undirected() {
  Matrix q(4, 4);
  q << 36, -6, -12, -18,
       -6, 10, 2, -6,
       -12, 2, 22, -12,
       -18, -6, -12, 36;
  return q / 9.0;
}

inline Matrix example_symmetrized() {
  Matrix s(4, 4);
  s << 3, -.5, -1, -1.5,
       -.5, 1, 0, -.5,
       -1, 0, 2, -1,
       -1.5, -.5, -1, 3;
  return s;
}

inline Matrix two_node() {
  Matrix l(2, 2);
  l << 1, -1, -1, 1;
  return l;
}

inline Matrix unbalanced_pair() {
  Matrix l(2, 2);
  l << 2, -2, -1, 1;
  return l;
}

inline Matrix cycle3() {
  Matrix l(3, 3);
  l << 1, -1, 0,
       0, 1, -1,
       -1, 0, 1;
  return l;
}

inline Matrix path3() {
  Matrix l(3, 3);
  l << 1, -1, 0,
       -1, 2, -1,
       0, -1, 1;
  return l;
}

inline Matrix k3() {
  Matrix l(3, 3);
  l << 2, -1, -1,
       -1, 2, -1,
       -1, -1, 2;
  return l;
}

inline Matrix path3_resistance() {
  Matrix r(3, 3);
  r << 0, 1, 2,
       1, 0, 1,
       2, 1, 0;
  return r;
}

/// Squared distances between the corners of the unit square.
inline Matrix unit_square() {
  Matrix d(4, 4);
  d << 0, 1, 2, 1,
       1, 0, 1, 2,
       2, 1, 0, 1,
       1, 2, 1, 0;
  return d;
}

}  // namespace fixture
