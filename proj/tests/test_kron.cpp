#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rgeom/errors.hpp"
#include "rgeom/fbi.hpp"
#include "rgeom/kron.hpp"
#include "rgeom/random.hpp"

using rgeom::DirectedLaplacian;
using rgeom::Matrix;
using rgeom::NodeSet;

namespace {

DirectedLaplacian lap(const Matrix& m) { return DirectedLaplacian::from_matrix(m); }

}  // namespace

TEST_CASE("Kron reduction of small digraphs") {
  const rgeom::KronResult cyc = rgeom::kron_reduce(lap(fixture::cycle3()), NodeSet::from_one_based({1, 2}, 3));
  CHECK(oracle::max_abs_diff(cyc.reduced, fixture::two_node()) < 1e-15);
  CHECK(cyc.preserved.row_sums_zero);
  CHECK(cyc.preserved.offdiag_nonpos);
  CHECK(cyc.preserved.weight_balanced);
  CHECK(cyc.preserved.strongly_connected);

  Matrix expected(3, 3);
  expected << 3, -1, -2,
              0, 1, -1,
              -3, 0, 3;
  const NodeSet keep = NodeSet::from_one_based({1, 2, 4}, 4);
  const rgeom::KronResult ex = rgeom::kron_reduce(lap(fixture::example()), keep);
  CHECK(oracle::max_abs_diff(ex.reduced, expected) < 1e-14);
  CHECK(oracle::max_abs_diff(ex.reduced, oracle::schur(fixture::example(), keep.indices())) < 1e-14);
  CHECK(ex.kept == keep);

  const rgeom::KronResult all = rgeom::kron_reduce(lap(fixture::example()), NodeSet::all(4));
  CHECK(all.reduced == fixture::example());
}

TEST_CASE("Kron reduction preconditions") {
  const DirectedLaplacian dag = rgeom::laplacian_from_edges(3, {{1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  try {
    (void)rgeom::kron_reduce(dag, NodeSet::from_one_based({1, 2}, 3));
    FAIL("expected StructureError");
  } catch (const rgeom::StructureError& e) {
    CHECK(e.nodes() == std::vector<int>{3});
  }
  CHECK_NOTHROW(rgeom::kron_reduce(dag, NodeSet::from_one_based({2, 3}, 3)));
  CHECK_THROWS_AS(rgeom::kron_reduce(lap(fixture::cycle3()), NodeSet::from_one_based({1}, 3)),
                  rgeom::ContractViolation);
}

TEST_CASE("Kron reduction of class Q Laplacians") {
  const rgeom::SignedLaplacianQ p3 = rgeom::SignedLaplacianQ::from_matrix(fixture::path3());
  const rgeom::SignedLaplacianQ ends = rgeom::kron_reduce_q(p3, NodeSet::from_one_based({1, 3}, 3));
  CHECK(oracle::max_abs_diff(ends.matrix(), fixture::two_node() / 2.0) < 1e-15);
  CHECK(rgeom::kron_reduce_q(p3, NodeSet::all(3)).matrix() == fixture::path3());

  const DirectedLaplacian ex = lap(fixture::example());
  const NodeSet keep = NodeSet::from_one_based({1, 2, 4}, 4);
  const Matrix lhs = rgeom::kron_reduce_q(rgeom::undirect(ex), keep).matrix();
  const Matrix rhs = rgeom::undirect(rgeom::kron_reduce(ex, keep).laplacian()).matrix();
  CHECK(oracle::max_abs_diff(lhs, rhs) < 1e-9);
}

TEST_CASE("Kron reduction preserves Laplacian structure on random digraphs") {
  rgeom::InstanceRng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.integer(3, 30);
    const DirectedLaplacian l = rgeom::random_sc_laplacian(n, rng);
    const NodeSet keep = rgeom::random_reachable_keep(l, rng);
    const rgeom::KronResult r = rgeom::kron_reduce(l, keep);
    CAPTURE(n);
    CHECK(r.reduced.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    Matrix off = r.reduced;
    off.diagonal().setZero();
    CHECK(off.maxCoeff() <= 1e-12);
    CHECK(r.preserved.strongly_connected);
    CHECK(r.laplacian().strongly_connected());
    CHECK(oracle::max_abs_diff(r.reduced, oracle::schur(l.matrix(), keep.indices())) <=
          1e-9 * l.matrix().cwiseAbs().maxCoeff());

    const DirectedLaplacian b = rgeom::random_scwb_laplacian(n, rng);
    const rgeom::KronResult rb = rgeom::kron_reduce(b, rgeom::random_subset(n, rng));
    CHECK(rb.reduced.colwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(rb.preserved.weight_balanced);
  }
}

TEST_CASE("Kron reduction one node at a time") {
  rgeom::InstanceRng rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(4, 15);
    const DirectedLaplacian l = rgeom::random_sc_laplacian(n, rng);
    const NodeSet keep = rgeom::random_reachable_keep(l, rng);
    DirectedLaplacian step = l;
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i;
    for (int drop : keep.complement()) {
      std::vector<int> rest;
      for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
        if (labels[static_cast<std::size_t>(i)] != drop) rest.push_back(i);
      }
      step = rgeom::kron_reduce(step, NodeSet::from_zero_based(rest, step.n())).laplacian();
      labels.erase(std::find(labels.begin(), labels.end(), drop));
    }
    CHECK(oracle::max_abs_diff(step.matrix(), rgeom::kron_reduce(l, keep).reduced) < 1e-10);
  }
}
