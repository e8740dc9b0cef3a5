#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rgeom/errors.hpp"
#include "rgeom/fbi.hpp"
#include "rgeom/kron.hpp"
#include "rgeom/linalg.hpp"
#include "rgeom/random.hpp"
#include "rgeom/resistance.hpp"

using rgeom::CurvatureRadius;
using rgeom::DirectedLaplacian;
using rgeom::Matrix;
using rgeom::NodeSet;
using rgeom::SignedLaplacianQ;
using rgeom::Vector;

namespace {

DirectedLaplacian lap(const Matrix& m) { return DirectedLaplacian::from_matrix(m); }

/// p and sigma2 straight from an explicit inverse of Omega.
CurvatureRadius from_inverse(const Matrix& omega) {
  const Matrix inv = Eigen::FullPivLU<Matrix>(omega).inverse();
  const Vector w = inv * Vector::Ones(omega.rows());
  return {w / w.sum(), 0.5 / w.sum(), {}};
}

}  // namespace

TEST_CASE("undirecting map") {
  CHECK(oracle::max_abs_diff(rgeom::undirect(lap(fixture::path3())).matrix(), fixture::path3()) < 1e-10);
  CHECK(oracle::max_abs_diff(rgeom::undirect(lap(fixture::example())).matrix(), fixture::example_undirected()) <
        1e-12);
  const SignedLaplacianQ c = rgeom::undirect(lap(fixture::cycle3()));
  CHECK(oracle::max_abs_diff(c.matrix(), c.matrix().transpose()) == 0.0);
  CHECK(rgeom::inertia(c.matrix()) == rgeom::Inertia{2, 0, 1});
  CHECK_THROWS_AS(rgeom::undirect(lap(fixture::unbalanced_pair())), rgeom::StructureError);
}

TEST_CASE("curvature and radius of balanced digraphs") {
  const CurvatureRadius two = rgeom::curvature_radius_scwb(lap(fixture::two_node()));
  CHECK(oracle::max_abs_diff(two.p, Vector::Constant(2, 0.5)) < 1e-15);
  CHECK(two.sigma2 == doctest::Approx(0.25).epsilon(1e-15));

  const CurvatureRadius k3 = rgeom::curvature_radius_scwb(lap(fixture::k3()));
  CHECK(oracle::max_abs_diff(k3.p, Vector::Constant(3, 1.0 / 3.0)) < 1e-15);
  CHECK(k3.sigma2 == doctest::Approx(2.0 / 9.0).epsilon(1e-14));

  const DirectedLaplacian ex = lap(fixture::example());
  const CurvatureRadius cr = rgeom::curvature_radius_scwb(ex);
  const Matrix omega = rgeom::resistance_matrix_scwb(ex).omega;
  CHECK(std::abs(cr.p.sum() - 1.0) < 1e-10);
  CHECK((omega * cr.p - Vector::Constant(4, 2.0 * cr.sigma2)).cwiseAbs().maxCoeff() < 1e-10);
  const CurvatureRadius ref = from_inverse(omega);
  CHECK(oracle::max_abs_diff(cr.p, ref.p) < 1e-10);
  CHECK(std::abs(cr.sigma2 - ref.sigma2) < 1e-10);
}

TEST_CASE("radius of the undirected image of the example") {
  const SignedLaplacianQ q = rgeom::undirect(lap(fixture::example()));
  const CurvatureRadius cr = rgeom::curvature_radius_q(q, NodeSet::all(4));
  CHECK(cr.sigma2 == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
  CHECK(q.matrix()(1, 2) > 0.0);
  const Matrix omega = rgeom::resistance_matrix_q(q).omega;
  CHECK((omega * cr.p - Vector::Constant(4, 2.0 * cr.sigma2)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("block identity") {
  CHECK(rgeom::verify_fbi(lap(fixture::two_node())).residual <= 1e-12);
  const rgeom::FbiBlocks ex = rgeom::verify_fbi(lap(fixture::example()));
  CHECK(ex.residual <= 1e-9);
  CHECK(ex.passed);
  CHECK(oracle::max_abs_diff(ex.lhs * ex.rhs, Matrix::Identity(5, 5)) <= 1e-9);

  rgeom::InstanceRng rng(50);
  const rgeom::FbiBlocks big = rgeom::verify_fbi(rgeom::random_scwb_laplacian(20, rng));
  CHECK(big.residual <= 1e-8);
  CHECK(rgeom::verify_fbi_q(rgeom::random_class_q(8, rng)).residual <= 1e-8);
}

TEST_CASE("relations between resistance, curvature and radius") {
  rgeom::InstanceRng rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const DirectedLaplacian l = rgeom::random_scwb_laplacian(rng.integer(2, 20), rng);
    const rgeom::RelationResiduals r = rgeom::verify_relations(l);
    CHECK(r.max() <= 1e-9);
    CHECK(r.sum_p <= 1e-9);
  }
  CHECK(rgeom::verify_relations(lap(fixture::example())).max() <= 1e-12);
}

TEST_CASE("curvature and radius of unbalanced digraphs") {
  const CurvatureRadius pair = rgeom::curvature_radius_sc(lap(fixture::unbalanced_pair()));
  CHECK(pair.p(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(pair.p(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(pair.sigma2 == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(pair.zeta.size() == 0);

  const DirectedLaplacian ex = lap(fixture::example());
  const CurvatureRadius a = rgeom::curvature_radius_sc(ex);
  const CurvatureRadius b = rgeom::curvature_radius_scwb(ex);
  CHECK(oracle::max_abs_diff(a.p, b.p) < 1e-10);
  CHECK(std::abs(a.sigma2 - b.sigma2) < 1e-10);

  rgeom::InstanceRng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const DirectedLaplacian l = rgeom::random_sc_laplacian(rng.integer(2, 12), rng);
    const double c = rng.uniform(0.2, 5.0);
    const CurvatureRadius base = rgeom::curvature_radius_sc(l);
    const CurvatureRadius scaled = rgeom::curvature_radius_sc(lap(l.matrix() * c));
    CHECK(oracle::max_abs_diff(base.p, scaled.p) < 1e-10);
    CHECK(std::abs(scaled.sigma2 - base.sigma2 / c) < 1e-10 * std::max(1.0, base.sigma2));
    const CurvatureRadius ref = from_inverse(rgeom::resistance_matrix_sc(l).omega);
    CHECK(oracle::max_abs_diff(base.p, ref.p) < 1e-9);
  }
}

TEST_CASE("weight-balancing transform") {
  const DirectedLaplacian pair = lap(fixture::unbalanced_pair());
  const CurvatureRadius raw = rgeom::curvature_radius_sc(pair);
  const rgeom::ResistanceMatrix omega = rgeom::resistance_matrix_sc(pair);
  const Vector m = rgeom::weight_balance(pair).m;
  const CurvatureRadius wb = rgeom::wb_transform(raw.p, raw.sigma2, m, omega);
  CHECK(oracle::max_abs_diff(wb.p, Vector::Constant(2, 0.5)) < 1e-14);
  CHECK(wb.sigma2 == doctest::Approx(3.0 / 16.0).epsilon(1e-14));

  const CurvatureRadius same = rgeom::wb_transform(raw.p, raw.sigma2, Vector::Ones(2), omega);
  CHECK(oracle::max_abs_diff(same.p, raw.p) < 1e-15);
  CHECK(same.sigma2 == doctest::Approx(raw.sigma2));

  rgeom::InstanceRng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const DirectedLaplacian l = rgeom::random_sc_laplacian(rng.integer(2, 10), rng);
    const CurvatureRadius r = rgeom::curvature_radius_sc(l);
    const rgeom::ResistanceMatrix o = rgeom::resistance_matrix_sc(l);
    const rgeom::WeightBalancing w = rgeom::weight_balance(l);
    const CurvatureRadius there = rgeom::wb_transform(r.p, r.sigma2, w.m, o);
    const CurvatureRadius direct = rgeom::curvature_radius_scwb(w.balanced);
    CHECK(oracle::max_abs_diff(there.p, direct.p) < 1e-9);
    CHECK(std::abs(there.sigma2 - direct.sigma2) < 1e-9);
    const CurvatureRadius back = rgeom::wb_transform(there.p, there.sigma2, w.m.cwiseInverse(), o);
    CHECK(oracle::max_abs_diff(back.p, r.p) < 1e-10);
    CHECK(std::abs(back.sigma2 - r.sigma2) < 1e-10);
  }
}

TEST_CASE("undirecting commutes with Kron reduction") {
  const NodeSet keep = NodeSet::from_one_based({1, 2, 4}, 4);
  const rgeom::CommutativityReport ex = rgeom::check_commutativity(lap(fixture::example()), keep);
  CHECK(ex.residual <= 1e-9);
  CHECK(ex.passed);
  const rgeom::CommutativityReport all = rgeom::check_commutativity(lap(fixture::example()), NodeSet::all(4));
  CHECK(oracle::max_abs_diff(all.lhs, fixture::example_undirected()) < 1e-12);
  CHECK(oracle::max_abs_diff(all.rhs, fixture::example_undirected()) < 1e-12);

  rgeom::InstanceRng rng(54);
  const DirectedLaplacian l = rgeom::random_scwb_laplacian(15, rng);
  const NodeSet k = rgeom::random_subset(15, rng);
  const rgeom::CommutativityReport r = rgeom::check_commutativity(l, k);
  CHECK(r.residual <= 1e-8);
  const Matrix x = oracle::pinv(oracle::pinv(l.matrix()) / 2.0 + oracle::pinv(l.matrix()).transpose() / 2.0);
  CHECK(oracle::max_abs_diff(r.lhs, oracle::schur(x, k.indices())) < 1e-8);
}

TEST_CASE("symmetrized pseudoinverse does not commute with Kron reduction") {
  // Exact values; the pairing of the two matrices with the two sides was
  // confirmed by rational arithmetic.
  Matrix a(3, 3), b(3, 3);
  a << 29, -27, -2,
       -27, 54, -27,
       -2, -27, 29;
  b << 10, -11, 1,
       -11, 22, -11,
       1, -11, 10;
  const rgeom::NonCommutativity nc =
      rgeom::check_noncommutativity(lap(fixture::example()), NodeSet::from_one_based({1, 2, 4}, 4));
  CHECK(oracle::max_abs_diff(nc.lhs, a / 186.0) < 1e-12);
  CHECK(oracle::max_abs_diff(nc.rhs, b / 54.0) < 1e-12);
  CHECK(nc.difference.cwiseAbs().maxCoeff() > 1e-3);

  // Independent recomputation of both sides.
  const Matrix p = oracle::pinv(fixture::example());
  const Matrix ps = (p + p.transpose()) / 2.0;
  CHECK(oracle::max_abs_diff(nc.lhs, oracle::schur(ps, {0, 1, 3})) < 1e-12);
  const Matrix red = oracle::schur(fixture::example(), {0, 1, 3});
  const Matrix pr = oracle::pinv(red);
  CHECK(oracle::max_abs_diff(nc.rhs, (pr + pr.transpose()) / 2.0) < 1e-12);

  const rgeom::NonCommutativity sym =
      rgeom::check_noncommutativity(lap(fixture::path3()), NodeSet::from_one_based({1, 3}, 3));
  CHECK(oracle::max_abs_diff(sym.lhs, sym.rhs) < 1e-12);
}

TEST_CASE("non-commutativity is witnessed on random directed instances") {
  rgeom::InstanceRng rng(55);
  int witnessed = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(4, 12);
    const DirectedLaplacian l = rgeom::random_scwb_laplacian(n, rng);
    if (oracle::max_abs_diff(l.matrix(), l.matrix().transpose()) == 0.0) continue;
    const NodeSet keep = rgeom::random_subset(n, rng);
    if (keep.is_all()) continue;
    if (rgeom::check_noncommutativity(l, keep).difference.cwiseAbs().maxCoeff() > 1e-6) ++witnessed;
  }
  CHECK(witnessed > 0);
}

TEST_CASE("curvature and radius after Kron reduction") {
  const DirectedLaplacian ex = lap(fixture::example());
  const CurvatureRadius full = rgeom::curvature_radius_scwb(ex);
  const CurvatureRadius same = rgeom::reduce_curvature_radius(ex, NodeSet::all(4));
  CHECK(oracle::max_abs_diff(same.p, full.p) < 1e-12);
  CHECK(std::abs(same.sigma2 - full.sigma2) < 1e-12);

  // Scalar form for eliminating the last node.
  const Matrix x = fixture::example_undirected();
  const CurvatureRadius one = rgeom::reduce_curvature_radius(ex, NodeSet::from_one_based({1, 2, 3}, 4));
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(one.p(i) - (full.p(i) - x(i, 3) / x(3, 3) * full.p(3))) < 1e-12);
  }
  CHECK(std::abs(one.sigma2 - (full.sigma2 - full.p(3) * full.p(3) / x(3, 3))) < 1e-12);

  rgeom::InstanceRng rng(56);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(3, 12);
    const DirectedLaplacian l = rgeom::random_scwb_laplacian(n, rng);
    const NodeSet keep = rgeom::random_subset(n, rng);
    const CurvatureRadius fast = rgeom::reduce_curvature_radius(l, keep);
    const CurvatureRadius slow = rgeom::curvature_radius_scwb(rgeom::kron_reduce(l, keep).laplacian());
    CHECK(oracle::max_abs_diff(fast.p, slow.p) < 1e-9);
    CHECK(std::abs(fast.sigma2 - slow.sigma2) < 1e-9);
    CHECK(std::abs(fast.p.sum() - 1.0) < 1e-10);
    CHECK(fast.sigma2 <= rgeom::curvature_radius_scwb(l).sigma2 + 1e-12);
  }
}

TEST_CASE("radius as a set function") {
  const DirectedLaplacian k3 = lap(fixture::k3());
  CHECK(rgeom::sigma2_subset(k3, {1}) == 0.0);
  CHECK(rgeom::sigma2_subset(k3, {}) == 0.0);
  CHECK(rgeom::sigma2_subset(k3, {0, 1, 2}) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));

  rgeom::InstanceRng rng(57);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(3, 15);
    const DirectedLaplacian l = rgeom::random_scwb_laplacian(n, rng);
    const Matrix omega = rgeom::resistance_matrix_scwb(l).omega;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        CHECK(std::abs(rgeom::sigma2_subset(l, {i, j}) - omega(i, j) / 4.0) <= 1e-10);
      }
    }
    for (int k = 0; k < 100; ++k) {
      const NodeSet big = rgeom::random_subset(n, rng, 1);
      std::vector<int> small = big.indices();
      small.resize(static_cast<std::size_t>(rng.integer(0, big.size())));
      CHECK(rgeom::sigma2_subset(omega, small) <= rgeom::sigma2_subset(omega, big.indices()) + 1e-12);
    }
  }
}

TEST_CASE("curvature and radius of a class Q subset") {
  const SignedLaplacianQ two = SignedLaplacianQ::from_matrix(fixture::two_node());
  const CurvatureRadius t = rgeom::curvature_radius_q(two, NodeSet::all(2));
  CHECK(oracle::max_abs_diff(t.p, Vector::Constant(2, 0.5)) < 1e-15);
  CHECK(t.sigma2 == doctest::Approx(0.25));

  const SignedLaplacianQ p3 = SignedLaplacianQ::from_matrix(fixture::path3());
  const CurvatureRadius ends = rgeom::curvature_radius_q(p3, NodeSet::from_one_based({1, 3}, 3));
  CHECK(oracle::max_abs_diff(ends.p, Vector::Constant(2, 0.5)) < 1e-15);
  CHECK(ends.sigma2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(rgeom::curvature_radius_q(p3, NodeSet::from_one_based({2}, 3)), rgeom::ContractViolation);
}
