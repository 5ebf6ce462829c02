#pragma once
#include "floqsim/circuit.hpp"
#include <cstdint>
#include <string>
#include <vector>

namespace floqsim {

// elementary fault: a Pauli applied before step `time`'s measurements
// (time == T applies before the final readout), and/or an outcome flip
struct Fault {
    int time = 0;
    Bits x, z;
    int flip_out = -1; // outcome index to flip, or -1
};

struct ShotResult {
    std::vector<uint8_t> outcomes, det, obs;
};

// reference execution; isg_check verifies the tracked stabilizer-group
// contents against the presence tables after every step
ShotResult run_tableau(const MeasurementCircuit& c, uint64_t seed,
                       const std::vector<Fault>& faults = {},
                       bool isg_check = false);

// outcome flip mask of a single elementary fault under Pauli-frame rules
Bits frame_flips(const MeasurementCircuit& c, const Fault& fault);

struct FaultSignature {
    std::vector<int> dets;
    uint32_t obs = 0;
    bool operator==(const FaultSignature& o) const {
        return dets == o.dets && obs == o.obs;
    }
    bool operator<(const FaultSignature& o) const {
        return dets != o.dets ? dets < o.dets : obs < o.obs;
    }
};

// detectors/observables toggled by an outcome flip mask (bias excluded)
FaultSignature signature(const MeasurementCircuit& c, const Bits& flips);

// empty iff every detector and observable reads 0 on R noiseless shots
std::vector<std::string> check_detector_determinism(const MeasurementCircuit& c,
                                                    int rounds = 8);

} // namespace floqsim
