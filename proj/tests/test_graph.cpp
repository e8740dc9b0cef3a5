#include <doctest.h>

#include <string>
#include <variant>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rgeom/errors.hpp"
#include "rgeom/fbi.hpp"
#include "rgeom/graph.hpp"
#include "rgeom/linalg.hpp"
#include "rgeom/random.hpp"

using rgeom::DirectedLaplacian;
using rgeom::Matrix;
using rgeom::NodeSet;
using rgeom::Vector;

namespace {

DirectedLaplacian lap(const Matrix& m) { return DirectedLaplacian::from_matrix(m); }

}  // namespace

TEST_CASE("Laplacian from edge lists") {
  CHECK(rgeom::laplacian_from_edges(2, {{1, 2, 1}, {2, 1, 1}}).matrix() == fixture::two_node());
  CHECK(rgeom::laplacian_from_edges(4, {{1, 2, 1}, {1, 3, 2}, {2, 4, 1}, {3, 4, 2}, {4, 1, 3}}).matrix() ==
        fixture::example());
  CHECK(rgeom::laplacian_from_edges(3, {{1, 2, 1}, {2, 3, 1}, {3, 1, 1}}).matrix() == fixture::cycle3());
}

TEST_CASE("Laplacian from edge lists rejects bad edges") {
  CHECK_THROWS_AS(rgeom::laplacian_from_edges(2, {{1, 1, 1}}), rgeom::ValidationError);
  CHECK_THROWS_AS(rgeom::laplacian_from_edges(2, {{1, 2, 0}}), rgeom::ValidationError);
  CHECK_THROWS_AS(rgeom::laplacian_from_edges(2, {{1, 2, -1}}), rgeom::ValidationError);
  CHECK_THROWS_AS(rgeom::laplacian_from_edges(2, {{1, 3, 1}}), rgeom::ValidationError);
  try {
    (void)rgeom::laplacian_from_edges(3, {{1, 2, 1}, {2, 3, 1}, {3, 3, 1}});
    FAIL("expected ValidationError");
  } catch (const rgeom::ValidationError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("DirectedLaplacian validates its matrix") {
  Matrix bad = fixture::two_node();
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(lap(bad), rgeom::ValidationError);
  bad = fixture::two_node();
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(lap(bad), rgeom::ValidationError);
  CHECK_THROWS_AS(lap(Matrix(2, 3)), rgeom::ValidationError);

  Matrix a(2, 2);
  a << 0, 2, 1, 0;
  CHECK(DirectedLaplacian::from_adjacency(a).matrix() == fixture::unbalanced_pair());
  CHECK(oracle::max_abs_diff(oracle::laplacian(a), fixture::unbalanced_pair()) == 0.0);
}

TEST_CASE("strong connectivity") {
  CHECK(rgeom::is_strongly_connected(lap(fixture::cycle3())));
  CHECK_FALSE(rgeom::is_strongly_connected(rgeom::laplacian_from_edges(2, {{1, 2, 1}})));
  CHECK(rgeom::is_strongly_connected(lap(fixture::example())));
  CHECK(lap(fixture::example()).strongly_connected());
}

TEST_CASE("weight balance predicate") {
  CHECK(rgeom::is_weight_balanced(lap(fixture::example())));
  CHECK_FALSE(rgeom::is_weight_balanced(lap(fixture::unbalanced_pair())));
  CHECK(rgeom::is_weight_balanced(lap(fixture::path3())));
  rgeom::InstanceRng rng(1);
  for (int i = 0; i < 10; ++i) {
    CHECK(rgeom::is_weight_balanced(rgeom::random_undirected_laplacian(rng.integer(2, 12), rng)));
  }
}

TEST_CASE("weight balancing vector") {
  const rgeom::WeightBalancing ex = rgeom::weight_balance(lap(fixture::example()));
  CHECK(oracle::max_abs_diff(ex.m, Vector::Ones(4)) < 1e-12);
  CHECK(oracle::max_abs_diff(ex.balanced.matrix(), fixture::example()) < 1e-12);

  const rgeom::WeightBalancing pair = rgeom::weight_balance(lap(fixture::unbalanced_pair()));
  CHECK(pair.m(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(pair.m(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(oracle::max_abs_diff(pair.balanced.matrix(), fixture::two_node() * (4.0 / 3.0)) < 1e-14);

  CHECK(oracle::max_abs_diff(rgeom::weight_balance(lap(fixture::cycle3())).m, Vector::Ones(3)) < 1e-12);
  CHECK_THROWS_AS(rgeom::weight_balance(rgeom::laplacian_from_edges(2, {{1, 2, 1}})), rgeom::StructureError);
}

TEST_CASE("weight balancing invariants on random strongly connected graphs") {
  rgeom::InstanceRng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(2, 30);
    const DirectedLaplacian l = rgeom::random_sc_laplacian(n, rng);
    const rgeom::WeightBalancing wb = rgeom::weight_balance(l);
    CHECK(wb.m.minCoeff() > 0.0);
    CHECK(std::abs(wb.m.sum() - n) < 1e-10);
    const Matrix balanced = wb.m.asDiagonal() * l.matrix();
    CHECK(balanced.colwise().sum().cwiseAbs().maxCoeff() < 1e-10);
    CHECK(wb.balanced.weight_balanced());

    // The left null vector, rescaled and renormalized, is the same vector.
    const Vector scaled = wb.m * rng.uniform(0.1, 10.0);
    CHECK(oracle::max_abs_diff(scaled * (n / scaled.sum()), wb.m) < 1e-12);
    const Eigen::FullPivLU<Matrix> lu(l.matrix().transpose());
    CHECK(lu.rank() == n - 1);
    Vector kernel = lu.kernel().col(0);
    kernel *= n / kernel.sum();
    CHECK(oracle::max_abs_diff(kernel, wb.m) < 1e-9);
  }
}

TEST_CASE("reachable subsets") {
  const DirectedLaplacian dag = rgeom::laplacian_from_edges(3, {{1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  CHECK(rgeom::is_reachable_subset(dag, NodeSet::from_one_based({2, 3}, 3)));
  CHECK_FALSE(rgeom::is_reachable_subset(dag, NodeSet::from_one_based({1, 2}, 3)));
  CHECK(rgeom::unreachable_nodes(dag, NodeSet::from_one_based({1, 2}, 3)) == std::vector<int>{2});
  CHECK(rgeom::is_reachable_subset(dag, NodeSet::all(3)));
  CHECK_THROWS_AS(rgeom::is_reachable_subset(dag, NodeSet::from_one_based({1}, 3)), rgeom::ContractViolation);

  rgeom::InstanceRng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(3, 15);
    CHECK(rgeom::is_reachable_subset(rgeom::random_sc_laplacian(n, rng), rgeom::random_subset(n, rng)));
  }
}

TEST_CASE("symmetrized Laplacian") {
  CHECK(rgeom::symmetrized(lap(fixture::path3())) == fixture::path3());
  CHECK(oracle::max_abs_diff(rgeom::symmetrized(lap(fixture::example())), fixture::example_symmetrized()) == 0.0);
  Matrix half(3, 3);
  half << 1, -.5, -.5,
          -.5, 1, -.5,
          -.5, -.5, 1;
  CHECK(oracle::max_abs_diff(rgeom::symmetrized(lap(fixture::cycle3())), half) == 0.0);
}

TEST_CASE("symmetrized pseudoinverse") {
  CHECK(oracle::max_abs_diff(rgeom::sym_pinv(lap(fixture::path3())), oracle::pinv(fixture::path3())) < 1e-12);
  CHECK(oracle::max_abs_diff(rgeom::pseudoinverse(rgeom::sym_pinv(lap(fixture::example()))),
                             fixture::example_undirected()) < 1e-12);
  CHECK(oracle::max_abs_diff(rgeom::sym_pinv(lap(fixture::two_node())), fixture::two_node() / 4.0) < 1e-15);
  CHECK_THROWS_AS(rgeom::laplacian_pinv(rgeom::laplacian_from_edges(2, {{1, 2, 1}})), rgeom::StructureError);
}

TEST_CASE("pseudoinverse commutes with balanced Laplacians only") {
  rgeom::InstanceRng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(2, 20);
    const DirectedLaplacian l = rgeom::random_scwb_laplacian(n, rng);
    const Matrix p = rgeom::laplacian_pinv(l);
    const Matrix j = rgeom::centering_projector(n);
    CHECK(oracle::max_abs_diff(p * l.matrix(), j) < 1e-9);
    CHECK(oracle::max_abs_diff(l.matrix() * p, j) < 1e-9);
    CHECK(oracle::max_abs_diff(p, oracle::pinv(l.matrix())) < 1e-9);

    const Matrix s = rgeom::sym_pinv(l);
    const auto eig = rgeom::sym_eig(s);
    CHECK(eig.eigenvalues(n - 1) > -1e-12);
    CHECK((s * Vector::Ones(n)).cwiseAbs().maxCoeff() < 1e-12);
    if (n > 1) CHECK(eig.eigenvalues(n - 2) > 1e-9);

    for (double gamma : {1.0, -1.0, 10.0, -10.0}) {
      CHECK(oracle::max_abs_diff(rgeom::pinv_via_shift(l, gamma), p) < 1e-9);
    }
  }
  const DirectedLaplacian pair = lap(fixture::unbalanced_pair());
  const Matrix p = rgeom::laplacian_pinv(pair);
  CHECK(oracle::max_abs_diff(p * pair.matrix(), pair.matrix() * p) > 1e-3);
}

TEST_CASE("pseudoinverse through a shifted inverse") {
  CHECK(oracle::max_abs_diff(rgeom::pinv_via_shift(lap(fixture::two_node()), 1.0), fixture::two_node() / 4.0) <
        1e-15);
  const DirectedLaplacian ex = lap(fixture::example());
  CHECK(oracle::max_abs_diff(rgeom::pinv_via_shift(ex, 1.0), rgeom::pseudoinverse(fixture::example())) < 1e-10);
  CHECK_THROWS_AS(rgeom::pinv_via_shift(ex, 0.0), rgeom::ContractViolation);
}

TEST_CASE("class Q validation") {
  CHECK(std::holds_alternative<rgeom::SignedLaplacianQ>(rgeom::validate_class_q(fixture::two_node())));
  const auto ex = rgeom::validate_class_q(fixture::example_undirected());
  REQUIRE(std::holds_alternative<rgeom::SignedLaplacianQ>(ex));
  CHECK(std::get<rgeom::SignedLaplacianQ>(ex).has_negative_edge());

  // Heavy negative edge between 1 and 3 breaks positive semidefiniteness.
  Matrix heavy(3, 3);
  heavy << 1 - 5, -1, 5,
           -1, 2, -1,
           5, -1, 1 - 5;
  const auto not_psd = rgeom::validate_class_q(heavy);
  REQUIRE(std::holds_alternative<rgeom::ClassReport>(not_psd));
  const rgeom::ClassReport& report = std::get<rgeom::ClassReport>(not_psd);
  CHECK(std::find(report.failures.begin(), report.failures.end(), rgeom::ClassFailure::kNotPsd) !=
        report.failures.end());
  CHECK(report.min_eigenvalue < 0.0);
  CHECK(report.message().find("not PSD") != std::string::npos);

  Matrix split = Matrix::Zero(4, 4);
  split.topLeftCorner(2, 2) = fixture::two_node();
  split.bottomRightCorner(2, 2) = fixture::two_node();
  const auto kernel = rgeom::validate_class_q(split);
  REQUIRE(std::holds_alternative<rgeom::ClassReport>(kernel));
  const auto& failures = std::get<rgeom::ClassReport>(kernel).failures;
  CHECK(std::find(failures.begin(), failures.end(), rgeom::ClassFailure::kOversizedKernel) != failures.end());

  const auto asym = rgeom::validate_class_q(fixture::example());
  REQUIRE(std::holds_alternative<rgeom::ClassReport>(asym));
  CHECK(std::get<rgeom::ClassReport>(asym).failures.front() == rgeom::ClassFailure::kAsymmetric);

  CHECK_THROWS_AS(rgeom::SignedLaplacianQ::from_matrix(heavy), rgeom::ValidationError);
}

TEST_CASE("undirected images of random balanced digraphs are in class Q") {
  rgeom::InstanceRng rng(30);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.integer(2, 30);
    const Matrix x = rgeom::pseudoinverse(rgeom::sym_pinv(rgeom::random_scwb_laplacian(n, rng)));
    const auto v = rgeom::validate_class_q(Matrix((x + x.transpose()) / 2.0));
    CAPTURE(n);
    CHECK(std::holds_alternative<rgeom::SignedLaplacianQ>(v));
  }
}
