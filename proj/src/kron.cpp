#include "rgeom/kron.hpp"

#include <variant>

#include "rgeom/errors.hpp"
#include "rgeom/linalg.hpp"

namespace rgeom {
namespace {

void require_pair(const NodeSet& keep, int n, const char* where) {
  if (keep.universe() != n) {
    throw ContractViolation(std::string(where) + ": node set universe does not match graph size");
  }
  if (keep.size() < 2) {
    throw ContractViolation(std::string(where) + ": at least two nodes must be kept");
  }
}

}  // namespace

KronResult kron_reduce(const DirectedLaplacian& L, const NodeSet& keep) {
  require_pair(keep, L.n(), "kron_reduce");
  const std::vector<int> missing = unreachable_nodes(L, keep);
  if (!missing.empty()) {
    std::vector<int> ids(missing);
    std::string list;
    for (int& i : ids) {
      ++i;
      list += (list.empty() ? "" : ",") + std::to_string(i);
    }
    throw StructureError("kron_reduce: nodes {" + list + "} cannot reach the kept set " +
                             to_string(keep),
                         ids);
  }

  Matrix reduced = schur_complement(L.matrix(), keep);
  const Eigen::Index m = reduced.rows();
  const double cutoff = kClampTol * std::max(max_abs(reduced), 1.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j && std::abs(reduced(i, j)) <= cutoff) reduced(i, j) = 0.0;
    }
  }

  PreservedFlags flags;
  const double scale = std::max(max_abs(reduced), 1.0);
  flags.row_sums_zero = max_abs(Vector(reduced.rowwise().sum())) <= kStructuralTol * scale;
  flags.offdiag_nonpos = true;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j && reduced(i, j) > 0.0) flags.offdiag_nonpos = false;
    }
  }
  flags.weight_balanced =
      max_abs(Vector(reduced.colwise().sum().transpose())) <= kStructuralTol * scale;
  flags.strongly_connected = is_strongly_connected(reduced);

  return {std::move(reduced), keep, flags};
}

SignedLaplacianQ kron_reduce_q(const SignedLaplacianQ& Q, const NodeSet& keep) {
  require_pair(keep, Q.n(), "kron_reduce_q");
  const Matrix reduced = schur_complement(Q.matrix(), keep);
  auto result = validate_class_q(reduced);
  if (auto* report = std::get_if<ClassReport>(&result)) {
    throw NumericFailure("kron_reduce_q: reduced matrix left class Q (" + report->message() +
                         ", min eigenvalue " + std::to_string(report->min_eigenvalue) +
                         ", row sum residual " + std::to_string(report->max_row_sum) + ")");
  }
  return std::get<SignedLaplacianQ>(std::move(result));
}

}  // namespace rgeom
