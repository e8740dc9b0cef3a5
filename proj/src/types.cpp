#include "rgeom/types.hpp"

#include <algorithm>
#include <sstream>

#include "rgeom/errors.hpp"

namespace rgeom {

NodeSet NodeSet::from_zero_based(std::vector<int> indices, int universe) {
  if (universe < 1) throw ValidationError("node set: universe must be nonempty");
  if (indices.empty()) throw ValidationError("node set: must contain at least one node");
  std::sort(indices.begin(), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= universe) {
      throw ValidationError("node set: node " + std::to_string(indices[i] + 1) +
                            " outside [1, " + std::to_string(universe) + "]");
    }
    if (i > 0 && indices[i] == indices[i - 1]) {
      throw ValidationError("node set: duplicate node " + std::to_string(indices[i] + 1));
    }
  }
  return NodeSet(std::move(indices), universe);
}

NodeSet NodeSet::from_one_based(const std::vector<int>& ids, int universe) {
  std::vector<int> zero(ids);
  for (int& i : zero) --i;
  return from_zero_based(std::move(zero), universe);
}

NodeSet NodeSet::all(int universe) {
  std::vector<int> idx(static_cast<std::size_t>(std::max(universe, 0)));
  for (int i = 0; i < universe; ++i) idx[static_cast<std::size_t>(i)] = i;
  return from_zero_based(std::move(idx), universe);
}

std::vector<int> NodeSet::one_based() const {
  std::vector<int> out(indices_);
  for (int& i : out) ++i;
  return out;
}

bool NodeSet::contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

int NodeSet::position(int index) const {
  const auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
  if (it == indices_.end() || *it != index) return -1;
  return static_cast<int>(it - indices_.begin());
}

std::vector<int> NodeSet::complement() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(universe_ - size()));
  std::size_t k = 0;
  for (int i = 0; i < universe_; ++i) {
    if (k < indices_.size() && indices_[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

std::string to_string(const NodeSet& set) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i : set) {
    os << (first ? "" : ",") << i + 1;
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace rgeom
