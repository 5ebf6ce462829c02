#pragma once
#include "floqsim/stabsim.hpp"
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace floqsim {

struct SiteRef {
    SiteKind kind;
    int time;
    int loc;     // edge or qubit, matching the site
    int element; // which elementary outcome of the site
};

struct FaultMechanism {
    std::vector<int> dets; // sorted detector indices
    uint32_t obs = 0;      // observable flip mask
    double p = 0;
    std::vector<SiteRef> prov;
};

struct DetectorErrorModel {
    int num_detectors = 0;
    int num_observables = 0;
    std::vector<FaultMechanism> mechanisms; // sorted by (dets, obs)
};

// expand a noise site into elementary faults (probability, fault)
std::vector<std::pair<double, Fault>> site_faults(const MeasurementCircuit& c,
                                                  const NoiseSite& site);

// frame-propagate every elementary fault and merge equal signatures;
// trivial signatures are dropped, observable-only ones retained
DetectorErrorModel compile_dem(const MeasurementCircuit& c);

// weight -> (mechanism count, fraction); weight 0 = observable-only
std::map<int, std::pair<long long, double>> weight_histogram(
    const DetectorErrorModel& dem);

std::string emit_dem(const DetectorErrorModel& dem);
DetectorErrorModel parse_dem(const std::string& text);

// one matching-graph component of a decomposed mechanism
struct DecompPart {
    std::vector<int> dets; // 1 or 2 detectors
    uint32_t obs = 0;
    bool remnant = false; // not an existing low-weight signature
};

struct Decomposition {
    size_t mech; // index into dem.mechanisms
    std::vector<DecompPart> parts;
};

// split every mechanism with 3+ detectors into parts that each match an
// existing 1- or 2-detector signature, with observable masks consistent in
// total; when no exact cover exists, one leftover part of at most two
// detectors absorbs the residual observables; throws naming the mechanism
// when even that fails
std::vector<Decomposition> decompose_hyperedges(const DetectorErrorModel& dem);

struct GraphEdge {
    int u, v;     // v == node_count() means the boundary
    double p = 0; // combined probability of parallel contributions
    uint32_t obs = 0;
    double w = 0;
    int64_t wq = 0; // weight quantized to integer for exact matching
};

constexpr int64_t kDistInf = int64_t(1) << 60;
constexpr int64_t kWeightScale = int64_t(1) << 20;

struct MatchingGraph {
    int nd = 0; // detectors; boundary node id == nd
    bool literal_weights = false;
    std::vector<GraphEdge> edges;
    std::vector<std::vector<int>> adj; // node -> edge ids
    // all-pairs shortest paths over nd+1 nodes (kDistInf = unreachable)
    std::vector<std::vector<int64_t>> dist;
    std::vector<std::vector<int32_t>> pred; // arriving edge id, -1 at source

    int boundary() const { return nd; }
    // XOR of observable payloads along a shortest path; from/to in [0, nd]
    uint32_t path_obs(int from, int to) const;
};

// literal_weights: -log p instead of -log(p/(1-p))
MatchingGraph to_matching_graph(const DetectorErrorModel& dem,
                                bool literal_weights = false);

} // namespace floqsim
