#pragma once
#include "floqsim/dem.hpp"
#include <cstdint>
#include <vector>

namespace floqsim {

struct MwpmResult {
    uint32_t obs = 0;   // predicted observable flips
    int64_t cost = 0;   // total matched distance (quantized weight units)
    // matched defect pairs as detector ids; -1 stands for the boundary
    std::vector<std::pair<int, int>> pairs;
};

// exact minimum-weight perfect matching over the precomputed path metric
MwpmResult mwpm_decode(const MatchingGraph& g, const std::vector<int>& defects);

// maximum-weight matching on a dense nonnegative weight matrix (0 = no
// edge); returns the matched partner per node, 0 for unmatched; nodes are
// 1-indexed internally so index 0 of the result is unused
std::vector<int> max_weight_matching(const std::vector<std::vector<int64_t>>& w);

// reference oracle: minimum-cost perfect pairing by exhaustive recursion;
// cost kDistInf marks a forbidden pair
int64_t min_cost_pairing_brute(const std::vector<std::vector<int64_t>>& cost);

} // namespace floqsim
