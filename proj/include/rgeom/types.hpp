#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace rgeom {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Everything above linalg works in double precision.
using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

// Default tolerances shared across modules.
inline constexpr double kStructuralTol = 1e-9;
inline constexpr double kConditionLimit = 1e12;
inline constexpr double kClampTol = 1e-12;

/// Sorted, distinct, nonempty subset of the node universe {0, ..., n-1}.
/// Files and the CLI use 1-based ids; conversion happens at the edges.
class NodeSet {
 public:
  /// Throws ValidationError on duplicates, out-of-range ids or empty input.
  static NodeSet from_zero_based(std::vector<int> indices, int universe);
  static NodeSet from_one_based(const std::vector<int>& ids, int universe);
  static NodeSet all(int universe);

  int universe() const noexcept { return universe_; }
  int size() const noexcept { return static_cast<int>(indices_.size()); }
  const std::vector<int>& indices() const noexcept { return indices_; }
  std::vector<int> one_based() const;
  bool contains(int index) const;
  bool is_all() const noexcept { return size() == universe_; }

  /// Nodes of the universe not in this set; may be empty.
  std::vector<int> complement() const;

  /// Position of `index` inside indices(), or -1.
  int position(int index) const;

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  int operator[](int k) const { return indices_[static_cast<std::size_t>(k)]; }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  NodeSet(std::vector<int> indices, int universe)
      : indices_(std::move(indices)), universe_(universe) {}

  std::vector<int> indices_;
  int universe_ = 0;
};

std::string to_string(const NodeSet& set);

}  // namespace rgeom
