#pragma once
#include "floqsim/pauli.hpp"
#include "floqsim/tiling.hpp"
#include <string>
#include <vector>

namespace floqsim {

// measurement schedules: (edge color, Pauli) per step, repeated cyclically
extern const std::vector<std::pair<int, char>> kHcfSchedule;
extern const std::vector<std::pair<int, char>> kHfSchedule;

// plaquette Pauli type per face color in the three-Pauli code
char hf_face_type(int fcol);

struct Step {
    int color;
    char pauli;
    std::vector<int> edges; // sorted edge ids of this color
};

// comparison of two inference sets for one face; t1/t2 are the steps of the
// first measurement in each set, kAnchorStart for the preparation anchor and
// T for the readout anchor
constexpr int kAnchorStart = -1;

struct Detector {
    int face;
    int t1, t2;
    std::vector<int> outs; // sorted outcome indices
    int bias;              // deterministic offset so noiseless value is 0
};

struct Observable {
    std::vector<int> hop_edges; // skeleton hop edges of the initial string
    std::vector<int> outs;      // sorted outcome indices
    int phase;
    std::vector<std::pair<Bits, Bits>> pattern; // support before each step
};

enum class SiteKind { Prep, Depol2, MeasFlip, Corr, Idle };

struct NoiseSite {
    SiteKind kind;
    int time; // step index; prep sites use 0
    int loc;  // edge id for two-qubit kinds, qubit id otherwise
    double prob;
};

struct MeasurementCircuit {
    Tiling t;
    std::string family; // "hcf" or "hf"
    char beta = 'Z';
    int T = 0;

    std::vector<Step> steps;
    std::vector<std::pair<Bits, Bits>> meas; // (x,z) per outcome
    // (step, edge) per outcome; epilogue readouts use (T, qubit)
    std::vector<std::pair<int, int>> meas_at;
    std::vector<int> step_base; // first outcome index of each step
    std::vector<int> ep_out;    // outcome index of qubit readout
    int nout = 0;

    std::vector<Detector> detectors;
    std::vector<Observable> observables;

    std::string noise_model; // empty until apply_noise
    double noise_p = 0;
    std::vector<NoiseSite> noise;

    int out_of(int tt, int e) const;
    std::vector<int> inst_set(int f, int tt) const; // face overlap at step tt
    std::vector<int> half_boundary(int f, int c) const;
};

// schedule + outcome tables; detectors/observables attached separately
MeasurementCircuit build_schedule(const Tiling& t, const std::string& family,
                                  int periods, char beta);

void attach_detectors(MeasurementCircuit& c);
void attach_observables(MeasurementCircuit& c);

// both attachments in one call
MeasurementCircuit build_memory_circuit(const Tiling& t,
                                        const std::string& family,
                                        int periods, char beta);

// inference sets comparing to the plaquette value: (first step, outcomes)
std::vector<std::pair<int, std::vector<int>>>
plaquette_inference_sets(const MeasurementCircuit& c, int f, char mu);

// is the (face color, Pauli) plaquette in the stabilizer group after step tt
bool face_present(const std::string& family, int fcol, char mu, int tt,
                  char beta);

// model: "em3-ind" or "em3-cor"
void apply_noise(MeasurementCircuit& c, const std::string& model, double p);

std::string emit_circuit(const MeasurementCircuit& c);
MeasurementCircuit parse_circuit(const std::string& text);

} // namespace floqsim
