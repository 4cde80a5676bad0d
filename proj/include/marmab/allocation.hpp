#pragma once

#include <functional>

#include "marmab/core.hpp"

namespace marmab {

/// index(arm, j): value of moving `arm` from action j-1 to j in its current state.
using IndexFn = std::function<double(std::size_t arm, int j)>;

/// Greedy index allocation: start all-passive and repeatedly upgrade the arm
/// whose next action has the highest index, considering only upgrades whose
/// extra cost still fits. Ties go to the lowest arm. Stops when nothing fits.
ActionVector greedy_index_allocation(const RmabInstance& instance, const IndexFn& index);

}  // namespace marmab
