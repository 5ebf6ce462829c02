#include "floqsim/stabsim.hpp"
#include "floqsim/rng.hpp"
#include "floqsim/tableau.hpp"
#include <map>
#include <stdexcept>

namespace floqsim {

ShotResult run_tableau(const MeasurementCircuit& c, uint64_t seed,
                       const std::vector<Fault>& faults, bool isg_check) {
    const Tiling& t = c.t;
    Tableau tab(t.nv, c.beta, seed);
    ShotResult r;
    r.outcomes.assign(size_t(c.nout), 0);
    Bits flips(size_t(c.nout));
    std::map<int, std::vector<const Fault*>> by_time;
    for (const Fault& f : faults) {
        if (f.flip_out >= 0) flips.flip(size_t(f.flip_out));
        if (f.x.any() || f.z.any()) by_time[f.time].push_back(&f);
    }
    for (int tt = 0; tt < c.T; tt++) {
        auto it = by_time.find(tt);
        if (it != by_time.end())
            for (const Fault* f : it->second) tab.apply_pauli(f->x, f->z);
        for (int e : c.steps[size_t(tt)].edges) {
            int idx = c.out_of(tt, e);
            int b = tab.measure({c.meas[size_t(idx)].first,
                                 c.meas[size_t(idx)].second, 0});
            if (flips.get(size_t(idx))) b ^= 1;
            r.outcomes[size_t(idx)] = uint8_t(b);
        }
        if (isg_check) {
            for (int f = 0; f < t.nf(); f++) {
                int cf = t.fcol[size_t(f)];
                std::vector<char> mus;
                if (c.family == "hcf") mus = {'X', 'Z'};
                else mus = {hf_face_type(cf)};
                for (char m : mus) {
                    bool want = face_present(c.family, cf, m, tt, c.beta);
                    auto [xp, zp] = pauli_mask(t.faces[size_t(f)], m);
                    bool got = tab.contains_mod_sign(xp, zp);
                    if (got != want)
                        throw std::runtime_error(
                            "stabilizer group content mismatch at step " +
                            std::to_string(tt) + " face " + std::to_string(f) +
                            " " + std::string(1, m));
                }
            }
        }
    }
    auto it = by_time.find(c.T);
    if (it != by_time.end())
        for (const Fault* f : it->second) tab.apply_pauli(f->x, f->z);
    for (int q = 0; q < t.nv; q++) {
        int idx = c.ep_out[size_t(q)];
        int b = tab.measure({c.meas[size_t(idx)].first,
                             c.meas[size_t(idx)].second, 0});
        if (flips.get(size_t(idx))) b ^= 1;
        r.outcomes[size_t(idx)] = uint8_t(b);
    }
    for (const Detector& d : c.detectors) {
        int v = d.bias;
        for (int o : d.outs) v ^= r.outcomes[size_t(o)];
        r.det.push_back(uint8_t(v));
    }
    for (const Observable& ob : c.observables) {
        int v = ob.phase;
        for (int o : ob.outs) v ^= r.outcomes[size_t(o)];
        r.obs.push_back(uint8_t(v));
    }
    return r;
}

Bits frame_flips(const MeasurementCircuit& c, const Fault& fault) {
    Bits m(size_t(c.nout));
    if (fault.flip_out >= 0) m.flip(size_t(fault.flip_out));
    if (fault.x.any() || fault.z.any()) {
        for (int idx = 0; idx < c.nout; idx++) {
            if (c.meas_at[size_t(idx)].first < fault.time) continue;
            if (sym(fault.x, fault.z, c.meas[size_t(idx)].first,
                    c.meas[size_t(idx)].second))
                m.flip(size_t(idx));
        }
    }
    return m;
}

FaultSignature signature(const MeasurementCircuit& c, const Bits& flips) {
    FaultSignature s;
    for (size_t i = 0; i < c.detectors.size(); i++) {
        int v = 0;
        for (int o : c.detectors[i].outs) v ^= int(flips.get(size_t(o)));
        if (v) s.dets.push_back(int(i));
    }
    for (size_t i = 0; i < c.observables.size(); i++) {
        int v = 0;
        for (int o : c.observables[i].outs) v ^= int(flips.get(size_t(o)));
        if (v) s.obs |= uint32_t(1) << i;
    }
    return s;
}

std::vector<std::string> check_detector_determinism(const MeasurementCircuit& c,
                                                    int rounds) {
    std::vector<std::string> bad;
    for (int r = 0; r < rounds; r++) {
        ShotResult res = run_tableau(c, mix64(0x5eedull, uint64_t(r)));
        for (size_t i = 0; i < res.det.size(); i++)
            if (res.det[i])
                bad.push_back("detector " + std::to_string(i) +
                              " fired on noiseless shot " + std::to_string(r));
        for (size_t i = 0; i < res.obs.size(); i++)
            if (res.obs[i])
                bad.push_back("observable " + std::to_string(i) +
                              " flipped on noiseless shot " + std::to_string(r));
        if (!bad.empty()) break;
    }
    return bad;
}

} // namespace floqsim
