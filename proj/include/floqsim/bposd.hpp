#pragma once
#include "floqsim/dem.hpp"
#include <cstdint>
#include <vector>

namespace floqsim {

struct BposdConfig {
    int max_iters = 30;
    double alpha = 0.9; // normalized min-sum scaling
    int osd_order = 1;  // exhaustive weight-1 postprocessing
};

struct BposdResult {
    uint32_t obs = 0;
    bool bp_converged = false;
    std::vector<int> support; // chosen mechanism columns
};

// belief propagation over the detector/mechanism Tanner graph with ordered-
// statistics fallback. Mechanisms without detectors are invisible to the
// syndrome and excluded from the column set.
struct BposdDecoder {
    BposdConfig cfg;
    int nd = 0;
    std::vector<std::vector<int>> col_rows; // detector ids per column
    std::vector<uint32_t> col_obs;
    std::vector<double> col_llr;  // log((1-p)/p) prior per column
    std::vector<std::vector<std::pair<int, int>>> row_entries; // (col, slot)

    explicit BposdDecoder(const DetectorErrorModel& dem, BposdConfig cfg = {});

    BposdResult decode(const std::vector<int>& defects) const;
};

} // namespace floqsim
