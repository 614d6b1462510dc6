#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace levelbn {

/// Raised when an operation is called outside its documented domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised while reading a dataset; the message names the offending row/column.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised before any DP allocation when the predicted peak exceeds the budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::uint64_t estimated_bytes, std::uint64_t budget_bytes);

  std::uint64_t estimated_bytes() const noexcept { return estimated_bytes_; }
  std::uint64_t budget_bytes() const noexcept { return budget_bytes_; }

 private:
  std::uint64_t estimated_bytes_;
  std::uint64_t budget_bytes_;
};

/// A broken internal invariant (e.g. an unfilled sink entry during backtracking).
class InternalStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace levelbn
