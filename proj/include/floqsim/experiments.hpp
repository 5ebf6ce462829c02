#pragma once
#include "floqsim/bposd.hpp"
#include "floqsim/mwpm.hpp"
#include "floqsim/rng.hpp"
#include <cstdint>
#include <string>
#include <vector>

namespace floqsim {

// independent per-shot mechanism sampler with geometric skipping inside
// groups of equal probability
struct DemSampler {
    struct Group {
        double p;
        double log1m; // log(1-p)
        std::vector<int> idx;
    };
    int nd = 0;
    const DetectorErrorModel* dem = nullptr;
    std::vector<Group> groups;

    explicit DemSampler(const DetectorErrorModel& d);

    // fills sorted defect list and the true observable flip mask
    void sample(SplitMix64& rng, std::vector<int>& defects,
                uint32_t& obs) const;
};

struct SampleStats {
    long long shots = 0;
    long long failures = 0; // shots with any observable mispredicted
    std::vector<long long> obs_failures;
    long long undecodable = 0;
    double decode_seconds = 0; // summed over shots
    double p_logical() const {
        return shots ? double(failures) / double(shots) : 0.0;
    }
};

// decoder: "mwpm" or "bposd"; threads <= 0 reads FLOQSIM_THREADS (default 1)
SampleStats run_memory_experiment(const DetectorErrorModel& dem,
                                  const std::string& decoder, long long shots,
                                  uint64_t seed, int threads = 0,
                                  bool literal_weights = false);

// 95% score interval for a binomial proportion
std::pair<double, double> wilson_interval(long long fails, long long shots,
                                          double z = 1.959963984540054);

// log-log interpolated crossing of two logical-error curves on a shared
// strength grid; NaN when the curves do not cross
double crossing_point(const std::vector<double>& ps,
                      const std::vector<double>& pl_a,
                      const std::vector<double>& pl_b);

struct PairCrossing {
    int a = 0, b = 0;  // curve indices
    double p = 0;      // NaN when the pair never crosses in the grid
    bool degenerate = false; // curves coincide at every grid point
};

struct ThresholdEstimate {
    bool crossed = false;    // at least one pair crosses inside the grid
    bool degenerate = false; // at least one pair coincides everywhere
    double p_th = 0;         // geometric mean over crossing pairs
    double p_min = 0, p_max = 0; // spread of the pairwise crossings
    double lo = 0, hi = 0;       // bootstrap percentile interval of p_th
    std::vector<PairCrossing> pairs;
};

// pl rows indexed by lattice size, columns by the shared grid
ThresholdEstimate threshold_with_bootstrap(
    const std::vector<double>& ps,
    const std::vector<std::vector<long long>>& fails,
    const std::vector<long long>& shots, int resamples, uint64_t seed);

struct TimingStats {
    long long shots = 0;
    double tmin = 0, tmed = 0, tmean = 0, tmax = 0; // seconds per shot
};

// pre-generates syndromes, then decodes them serially under the clock
TimingStats decode_timing(const DetectorErrorModel& dem,
                          const std::string& decoder, long long shots,
                          uint64_t seed);

struct PowerFit {
    double alpha = 0; // exponent
    double beta = 0;  // log prefactor
    double r2 = 0;
};

// least-squares fit of t = exp(beta) * n^alpha
PowerFit fit_power_law(const std::vector<double>& n,
                       const std::vector<double>& t);

std::string git_describe();
uint64_t fnv1a(const std::string& s);

} // namespace floqsim
