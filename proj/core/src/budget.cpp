#include "wpvol/budget.hpp"

namespace wpvol {

void Budget::admit(int g, int n) const {
  if (g > max_g) {
    throw BudgetError("max_g", "genus " + std::to_string(g) + " exceeds " + std::to_string(max_g));
  }
  if (n > max_n) {
    throw BudgetError("max_n", "n = " + std::to_string(n) + " exceeds " + std::to_string(max_n));
  }
}

Deadline::Deadline(const Budget& budget) {
  if (budget.max_wall) until_ = std::chrono::steady_clock::now() + *budget.max_wall;
}

void Deadline::check() const {
  if (until_ && std::chrono::steady_clock::now() > *until_) {
    throw BudgetError("max_wall", "wall-time limit reached");
  }
}

}  // namespace wpvol
