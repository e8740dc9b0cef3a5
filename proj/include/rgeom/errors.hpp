#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rgeom {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad ids, nonpositive weights, parse failures.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition (shape, symmetry, set size).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The graph lacks a required structural property (SC, WB, reachability).
class StructureError : public Error {
 public:
  StructureError(const std::string& what, std::vector<int> nodes = {})
      : Error(what), nodes_(std::move(nodes)) {}

  /// Offending nodes, 1-based, when the failure is attributable to nodes.
  const std::vector<int>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<int> nodes_;
};

/// Floating point trouble: singular systems, failed factorizations.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// The block to be eliminated in a Schur complement is singular or too
/// ill-conditioned. Carries the eliminated indices (1-based).
class DegenerateBlockError : public NumericFailure {
 public:
  DegenerateBlockError(const std::string& what, std::vector<int> indices)
      : NumericFailure(what), indices_(std::move(indices)) {}

  const std::vector<int>& indices() const noexcept { return indices_; }

 private:
  std::vector<int> indices_;
};

class ConvergenceFailure : public NumericFailure {
 public:
  ConvergenceFailure(const std::string& what, std::vector<double> history)
      : NumericFailure(what), history_(std::move(history)) {}

  /// Sampled KKT residuals, oldest first.
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// Problem size beyond what an exponential algorithm accepts.
class CapacityError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

/// A distance matrix is not of the metric class an operation needs.
class ClassificationError : public Error {
 public:
  ClassificationError(const std::string& what, std::vector<double> witness)
      : Error(what), witness_(std::move(witness)) {}

  const std::vector<double>& witness() const noexcept { return witness_; }

 private:
  std::vector<double> witness_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rgeom
