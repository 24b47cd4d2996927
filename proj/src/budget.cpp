#include "rigidlab/budget.hpp"

#include <cstdlib>
#include <string>

namespace rigidlab {

Budget Budget::from_env() {
    Budget b;
    if (const char* env = std::getenv("RIGIDLAB_BUDGET")) {
        try {
            b.max_scalars = std::stoull(env);
        } catch (const std::logic_error&) {
            throw InvalidArgument(std::string("RIGIDLAB_BUDGET must be an integer, got '") + env + "'");
        }
        if (b.max_scalars == 0) throw InvalidArgument("RIGIDLAB_BUDGET must be positive");
    }
    return b;
}

void Budget::charge(std::uint64_t scalars, const char* what) const {
    if (scalars > max_scalars) {
        throw BudgetExceeded(std::string(what) + " needs " + std::to_string(scalars) +
                             " scalars, over the budget of " + std::to_string(max_scalars) +
                             " (set RIGIDLAB_BUDGET to raise)");
    }
}

}  // namespace rigidlab
