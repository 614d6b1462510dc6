#include "levelbn/errors.hpp"

namespace levelbn {

BudgetError::BudgetError(std::uint64_t estimated_bytes, std::uint64_t budget_bytes)
    : std::runtime_error("predicted peak of " + std::to_string(estimated_bytes) + " bytes exceeds the budget of " +
                         std::to_string(budget_bytes) + " bytes"),
      estimated_bytes_(estimated_bytes),
      budget_bytes_(budget_bytes) {}

}  // namespace levelbn
