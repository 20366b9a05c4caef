#pragma once

#include <vector>

namespace catq {

// Minimum-cost perfect matching on a square cost matrix (Hungarian method, O(n^3)).
// Returns assignment[row] = column.
std::vector<int> optimal_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace catq
