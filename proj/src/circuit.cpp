#include "floqsim/circuit.hpp"
#include "floqsim/anyon.hpp"
#include "floqsim/f2.hpp"
#include "floqsim/homology.hpp"
#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace floqsim {

const std::vector<std::pair<int, char>> kHcfSchedule = {
    {0, 'X'}, {1, 'Z'}, {2, 'X'}, {0, 'Z'}, {1, 'X'}, {2, 'Z'}};
const std::vector<std::pair<int, char>> kHfSchedule = {
    {0, 'X'}, {1, 'Y'}, {2, 'Z'}};

char hf_face_type(int fcol) {
    static const char ft[3] = {'X', 'Y', 'Z'};
    return ft[fcol];
}

static int pauli_axis(char p) {
    switch (p) {
        case 'X': return 0;
        case 'Y': return 1;
        case 'Z': return 2;
    }
    throw std::runtime_error("bad Pauli letter");
}

int MeasurementCircuit::out_of(int tt, int e) const {
    const auto& es = steps[size_t(tt)].edges;
    auto it = std::lower_bound(es.begin(), es.end(), e);
    assert(it != es.end() && *it == e);
    return step_base[size_t(tt)] + int(it - es.begin());
}

std::vector<int> MeasurementCircuit::half_boundary(int f, int c) const {
    std::vector<int> out;
    for (int e : t.fedges[size_t(f)])
        if (t.ecol[size_t(e)] == c) out.push_back(e);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> MeasurementCircuit::inst_set(int f, int tt) const {
    int col = steps[size_t(tt)].color;
    std::vector<int> out;
    for (int e : half_boundary(f, col)) out.push_back(out_of(tt, e));
    return out;
}

static MeasurementCircuit build_schedule_steps(const Tiling& t,
                                               const std::string& family,
                                               int T, char beta) {
    if (family != "hcf" && family != "hf")
        throw std::runtime_error("unknown circuit family: " + family);
    if (beta != 'X' && beta != 'Z')
        throw std::runtime_error("memory basis must be X or Z");
    if (T <= 0) throw std::runtime_error("need at least one step");
    const auto& sched = family == "hcf" ? kHcfSchedule : kHfSchedule;

    std::vector<Boson> seq;
    for (auto& [col, mu] : sched) seq.push_back({col, pauli_axis(mu)});
    auto viol = validate_schedule(seq);
    if (!viol.empty()) throw std::runtime_error(viol[0].describe());

    MeasurementCircuit c;
    c.t = t;
    c.family = family;
    c.beta = beta;
    c.T = T;
    for (int tt = 0; tt < T; tt++) {
        auto [col, mu] = sched[size_t(tt) % sched.size()];
        Step st;
        st.color = col;
        st.pauli = mu;
        for (int e = 0; e < t.ne(); e++)
            if (t.ecol[size_t(e)] == col) st.edges.push_back(e);
        c.step_base.push_back(int(c.meas.size()));
        for (int e : st.edges) {
            c.meas.push_back(pauli_mask({t.edges[size_t(e)][0],
                                         t.edges[size_t(e)][1]}, mu));
            c.meas_at.push_back({tt, e});
        }
        c.steps.push_back(std::move(st));
    }
    for (int q = 0; q < t.nv; q++) {
        c.ep_out.push_back(int(c.meas.size()));
        c.meas.push_back(pauli_mask({q}, beta));
        c.meas_at.push_back({T, q});
    }
    c.nout = int(c.meas.size());
    return c;
}

MeasurementCircuit build_schedule(const Tiling& t, const std::string& family,
                                  int periods, char beta) {
    int plen = family == "hf" ? 3 : 6;
    return build_schedule_steps(t, family, periods * plen, beta);
}

// -------------------------------------------------------------- detectors

// step residues (mod 6) that destroy / infer each (face color, Pauli)
static int dest_step(int fcol, char mu) {
    static const std::map<std::pair<int, char>, int> d = {
        {{0, 'Z'}, 0}, {{1, 'X'}, 1}, {{2, 'Z'}, 2},
        {{0, 'X'}, 3}, {{1, 'Z'}, 4}, {{2, 'X'}, 5}};
    return d.at({fcol, mu});
}

static std::pair<int, int> inst_steps(int fcol, char mu) {
    static const std::map<std::pair<int, char>, std::pair<int, int>> d = {
        {{0, 'Z'}, {1, 5}}, {{1, 'Z'}, {3, 5}}, {{2, 'Z'}, {1, 3}},
        {{0, 'X'}, {2, 4}}, {{1, 'X'}, {0, 2}}, {{2, 'X'}, {0, 4}}};
    return d.at({fcol, mu});
}

// unit start offset (mod 3) per face color in the three-Pauli schedule
static int hf_unit_off(int fcol) {
    static const int off[3] = {1, 2, 0};
    return off[fcol];
}

std::vector<std::pair<int, std::vector<int>>>
plaquette_inference_sets(const MeasurementCircuit& c, int f, char mu) {
    std::vector<std::pair<int, std::vector<int>>> out;
    int cf = c.t.fcol[size_t(f)];
    if (c.family == "hcf") {
        for (int tt = 0; tt < c.T; tt++) {
            if (c.steps[size_t(tt)].color != cf &&
                c.steps[size_t(tt)].pauli == mu)
                out.push_back({tt, c.inst_set(f, tt)});
        }
    } else {
        if (mu != hf_face_type(cf)) return out;
        for (int m = 0;; m++) {
            int t1 = 3 * m + hf_unit_off(cf);
            if (t1 + 1 >= c.T) break;
            auto s = c.inst_set(f, t1);
            auto s2 = c.inst_set(f, t1 + 1);
            s.insert(s.end(), s2.begin(), s2.end());
            std::sort(s.begin(), s.end());
            out.push_back({t1, std::move(s)});
        }
    }
    return out;
}

void attach_detectors(MeasurementCircuit& c) {
    const Tiling& t = c.t;
    c.detectors.clear();
    if (c.family == "hcf") {
        char mu = c.beta;
        for (int f = 0; f < t.nf(); f++) {
            int cf = t.fcol[size_t(f)];
            auto insts = plaquette_inference_sets(c, f, mu);
            std::vector<int> dests;
            for (int tt = 0; tt < c.T; tt++)
                if (c.steps[size_t(tt)].color == cf &&
                    c.steps[size_t(tt)].pauli != mu)
                    dests.push_back(tt);
            // epochs between destructions; compare pairs within an epoch
            std::vector<std::vector<std::pair<int, std::vector<int>>>> epochs;
            std::vector<std::pair<int, std::vector<int>>> cur;
            size_t di = 0;
            for (auto& inst : insts) {
                while (di < dests.size() && dests[di] < inst.first) {
                    epochs.push_back(std::move(cur));
                    cur.clear();
                    di++;
                }
                cur.push_back(inst);
            }
            while (di < dests.size()) {
                epochs.push_back(std::move(cur));
                cur.clear();
                di++;
            }
            epochs.push_back(std::move(cur));
            // odd boundary epochs anchor to preparation / final readout;
            // an inference at a basis-aligned boundary round is instead
            // covered by the per-edge boundary checks emitted below
            bool edge_pro = c.beta == 'X' && c.steps[0].pauli == 'X';
            bool edge_epi =
                c.beta == 'Z' && c.steps[size_t(c.T - 1)].pauli == 'Z';
            if (!epochs.empty() && epochs.front().size() % 2 == 1 &&
                !(edge_pro && epochs.front().front().first == 0))
                epochs.front().insert(epochs.front().begin(),
                                      {kAnchorStart, {}});
            if (!epochs.empty() && epochs.back().size() % 2 == 1 &&
                !(edge_epi && epochs.back().back().first == c.T - 1)) {
                std::vector<int> ep_set;
                for (int q : t.faces[size_t(f)])
                    ep_set.push_back(c.ep_out[size_t(q)]);
                std::sort(ep_set.begin(), ep_set.end());
                epochs.back().push_back({c.T, std::move(ep_set)});
            }
            for (auto& ep : epochs) {
                for (size_t i = 0; i + 1 < ep.size(); i += 2) {
                    std::vector<int> outs = ep[i].second;
                    outs.insert(outs.end(), ep[i + 1].second.begin(),
                                ep[i + 1].second.end());
                    std::sort(outs.begin(), outs.end());
                    c.detectors.push_back(
                        {f, ep[i].first, ep[i + 1].first, std::move(outs), 0});
                }
            }
        }
    } else {
        for (int f = 0; f < t.nf(); f++) {
            int cf = t.fcol[size_t(f)];
            char mu = hf_face_type(cf);
            // the two-step unit equals i^|f| times the plaquette, so units
            // on 4k+2-gons carry a sign
            int usign = (int(t.faces[size_t(f)].size()) % 4 == 2) ? 1 : 0;
            struct Unit { int t1; std::vector<int> outs; int sign; };
            std::vector<Unit> chain;
            for (auto& [t1, outs] : plaquette_inference_sets(c, f, mu))
                chain.push_back({t1, outs, usign});
            if (mu == c.beta) {
                chain.insert(chain.begin(), {kAnchorStart, {}, 0});
                std::vector<int> ep_set;
                for (int q : t.faces[size_t(f)])
                    ep_set.push_back(c.ep_out[size_t(q)]);
                std::sort(ep_set.begin(), ep_set.end());
                chain.push_back({c.T, std::move(ep_set), 0});
            }
            for (size_t i = 0; i + 1 < chain.size(); i++) {
                std::vector<int> outs = chain[i].outs;
                outs.insert(outs.end(), chain[i + 1].outs.begin(),
                            chain[i + 1].outs.end());
                std::sort(outs.begin(), outs.end());
                c.detectors.push_back({f, chain[i].t1, chain[i + 1].t1,
                                       std::move(outs),
                                       chain[i].sign ^ chain[i + 1].sign});
            }
            // hybrid boundary checks: a face whose type is the product of
            // the preparation (readout) basis and an adjacent round's Pauli
            // has a known value before (after) its first (last) full unit;
            // the i^|f| signs of the hybrid and the unit cancel
            if (c.beta == 'Z' && mu == 'Y' && c.T >= 4) {
                std::vector<int> outs;
                for (int e : c.half_boundary(f, 0))
                    outs.push_back(c.out_of(0, e));
                auto u2 = c.inst_set(f, 2);
                auto u3 = c.inst_set(f, 3);
                outs.insert(outs.end(), u2.begin(), u2.end());
                outs.insert(outs.end(), u3.begin(), u3.end());
                std::sort(outs.begin(), outs.end());
                c.detectors.push_back(
                    {f, kAnchorStart, 2, std::move(outs), 0});
            }
            if (c.beta == 'X' && mu == 'Y' && c.T >= 6 &&
                c.steps[size_t(c.T - 1)].pauli == 'Z') {
                int t1 = c.T - 4;
                auto outs = c.inst_set(f, t1);
                auto u2 = c.inst_set(f, t1 + 1);
                outs.insert(outs.end(), u2.begin(), u2.end());
                for (int e : c.half_boundary(f, 2))
                    outs.push_back(c.out_of(c.T - 1, e));
                for (int q : t.faces[size_t(f)])
                    outs.push_back(c.ep_out[size_t(q)]);
                std::sort(outs.begin(), outs.end());
                c.detectors.push_back({f, t1, c.T, std::move(outs), 0});
            }
        }
    }
    // rounds whose Pauli matches the boundary basis pin every edge
    // outcome individually: against preparation at the opening step,
    // against the qubit readout pair at the closing step
    if (c.beta == 'X' && c.steps[0].pauli == 'X') {
        for (int e = 0; e < t.ne(); e++)
            if (t.ecol[size_t(e)] == c.steps[0].color)
                c.detectors.push_back({-2 - e, kAnchorStart, 0,
                                       {c.out_of(0, e)}, 0});
    }
    if (c.beta == 'Z' && c.steps[size_t(c.T - 1)].pauli == 'Z') {
        int lc = c.steps[size_t(c.T - 1)].color;
        for (int e = 0; e < t.ne(); e++) {
            if (t.ecol[size_t(e)] != lc) continue;
            std::vector<int> outs = {
                c.out_of(c.T - 1, e),
                c.ep_out[size_t(t.edges[size_t(e)][0])],
                c.ep_out[size_t(t.edges[size_t(e)][1])]};
            std::sort(outs.begin(), outs.end());
            c.detectors.push_back({-2 - e, c.T - 1, c.T,
                                   std::move(outs), 0});
        }
    }
}

// ------------------------------------------------------------- ISG tracking

bool face_present(const std::string& family, int fcol, char mu, int tt,
                  char beta) {
    if (family == "hf") {
        if (hf_face_type(fcol) == beta) return true;
        // a prep half-product and one measured half establish the face
        // before its first full inference unit
        if (beta == 'Z') return tt >= (fcol == 1 ? 0 : 2);
        return tt >= (fcol == 2 ? 1 : 3);
    }
    int ld = -1, li = -1;
    auto [i1, i2] = inst_steps(fcol, mu);
    int dd = dest_step(fcol, mu);
    for (int s = tt; s >= 0; s--) {
        if (ld < 0 && s % 6 == dd) ld = s;
        if (li < 0 && (s % 6 == i1 || s % 6 == i2)) li = s;
        if (ld >= 0 && li >= 0) break;
    }
    if (mu == beta && ld < 0) return true;
    return li >= 0 && (ld < 0 || li > ld);
}

namespace {

struct Gen {
    Bits oset;   // outcome indices whose product gives the value
    PauliOp op;
};

std::vector<int> face_qubits(const Tiling& t, int f) {
    return t.faces[size_t(f)];
}

PauliOp face_op(const Tiling& t, int f, char mu) {
    auto [x, z] = pauli_mask(face_qubits(t, f), mu);
    return {x, z, 0};
}

// generators of the known-value subgroup just after step t_after: that
// step's checks plus every face operator currently present, valued by its
// latest inference set (empty set = preparation value)
std::vector<Gen> known_stabilizers(const MeasurementCircuit& c, int t_after,
                                   char want_pauli /* 0 = all */) {
    const Tiling& t = c.t;
    std::vector<Gen> gens;
    const Step& st = c.steps[size_t(t_after)];
    if (want_pauli == 0 || st.pauli == want_pauli) {
        for (int e : st.edges) {
            int idx = c.out_of(t_after, e);
            Gen g;
            g.oset.set(size_t(idx));
            g.op = {c.meas[size_t(idx)].first, c.meas[size_t(idx)].second, 0};
            gens.push_back(std::move(g));
        }
    }
    for (int f = 0; f < t.nf(); f++) {
        int cf = t.fcol[size_t(f)];
        std::vector<char> nus;
        if (c.family == "hcf") nus = {'X', 'Z'};
        else nus = {hf_face_type(cf)};
        for (char nu : nus) {
            if (want_pauli != 0 && nu != want_pauli) continue;
            if (!face_present(c.family, cf, nu, t_after, c.beta)) continue;
            bool found = false;
            Gen g;
            if (c.family == "hcf") {
                auto [i1, i2] = inst_steps(cf, nu);
                for (int s = t_after; s >= 0; s--) {
                    if (s % 6 == i1 || s % 6 == i2) {
                        for (int o : c.inst_set(f, s)) g.oset.set(size_t(o));
                        g.op = face_op(t, f, nu);
                        found = true;
                        break;
                    }
                }
            } else {
                int first = hf_unit_off(cf);
                int num = t_after - first - 1;
                if (num >= 0) {
                    int s = first + 3 * (num / 3);
                    for (int o : c.inst_set(f, s)) g.oset.set(size_t(o));
                    for (int o : c.inst_set(f, s + 1)) g.oset.set(size_t(o));
                    PauliOp h1 = face_op(t, f, c.steps[size_t(s)].pauli);
                    PauliOp h2 = face_op(t, f, c.steps[size_t(s) + 1].pauli);
                    g.op = mult(h1, h2);
                    found = true;
                }
            }
            if (!found) {
                if (nu != c.beta) continue;
                g.op = face_op(t, f, nu); // preparation value, empty set
            }
            gens.push_back(std::move(g));
        }
    }
    return gens;
}

void apply_solution(PauliOp& L, Bits& outs, const Bits& sol,
                    const std::vector<Gen>& gens) {
    sol.for_each_set([&](size_t j) {
        L = mult(L, gens[j].op);
        outs ^= gens[j].oset;
    });
}

Bits op_key(const PauliOp& p, int nq) {
    Bits k = p.z;
    p.x.for_each_set([&](size_t i) { k.set(size_t(nq) + i); });
    return k;
}

// reduce L to the canonical coset representative modulo null-space products
// so steady-state support patterns are strictly periodic
void canon_reduce(PauliOp& L, Bits& outs, const std::vector<Bits>& null_basis,
                  const std::vector<Gen>& gens, int nq) {
    std::map<int, std::pair<PauliOp, Bits>> basis;
    for (const Bits& v : null_basis) {
        PauliOp op;
        Bits oset;
        v.for_each_set([&](size_t j) {
            op = mult(op, gens[j].op);
            oset ^= gens[j].oset;
        });
        Bits key = op_key(op, nq);
        while (key.any()) {
            int p = key.top();
            auto it = basis.find(p);
            if (it == basis.end()) {
                basis[p] = {op, oset};
                break;
            }
            op = mult(op, it->second.first);
            oset ^= it->second.second;
            key = op_key(op, nq);
        }
    }
    for (auto it = basis.rbegin(); it != basis.rend(); ++it) {
        if (op_key(L, nq).get(size_t(it->first))) {
            L = mult(L, it->second.first);
            outs ^= it->second.second;
        }
    }
}

Observable evolve_observable(const MeasurementCircuit& c,
                             const std::vector<int>& hops) {
    const Tiling& t = c.t;
    int nq = t.nv;
    PauliOp L;
    for (int e : hops) {
        auto [x, z] = pauli_mask({t.edges[size_t(e)][0],
                                  t.edges[size_t(e)][1]}, c.beta);
        L = mult(L, {x, z, 0});
    }
    Bits outs(size_t(c.nout));
    std::vector<std::pair<Bits, Bits>> pattern;
    pattern.push_back({L.x, L.z});
    char want = c.family == "hcf" ? c.beta : 0;
    for (int tt = 0; tt < c.T; tt++) {
        const Step& st = c.steps[size_t(tt)];
        std::vector<std::pair<Bits, Bits>> checks;
        for (int e : st.edges) checks.push_back(c.meas[size_t(c.out_of(tt, e))]);
        if (tt == 0) {
            for (auto& [xm, zm] : checks)
                if (sym(L.x, L.z, xm, zm))
                    throw std::runtime_error(
                        "initial string incompatible with step 0");
        } else {
            auto gens = known_stabilizers(c, tt - 1, want);
            std::vector<Bits> rows;
            std::vector<uint8_t> rhs;
            for (auto& [xm, zm] : checks) {
                Bits row(gens.size());
                for (size_t j = 0; j < gens.size(); j++)
                    if (sym(gens[j].op.x, gens[j].op.z, xm, zm)) row.set(j);
                rows.push_back(std::move(row));
                rhs.push_back(uint8_t(sym(L.x, L.z, xm, zm)));
            }
            auto sol = solve_f2(rows, rhs, int(gens.size()));
            if (!sol.ok)
                throw std::runtime_error("no stabilizer update at step " +
                                         std::to_string(tt));
            apply_solution(L, outs, sol.x, gens);
            canon_reduce(L, outs, sol.null_basis, gens, nq);
        }
        pattern.push_back({L.x, L.z});
    }
    // bring the final operator to pure memory-basis form
    auto gens = known_stabilizers(c, c.T - 1, want);
    auto off_bits = [&](const PauliOp& p) -> const Bits& {
        return c.beta == 'Z' ? p.x : p.z;
    };
    std::vector<Bits> rows;
    std::vector<uint8_t> rhs;
    for (int q = 0; q < nq; q++) {
        Bits row(gens.size());
        for (size_t j = 0; j < gens.size(); j++)
            if (off_bits(gens[j].op).get(size_t(q))) row.set(j);
        rows.push_back(std::move(row));
        rhs.push_back(uint8_t(off_bits(L).get(size_t(q))));
    }
    auto sol = solve_f2(rows, rhs, int(gens.size()));
    if (!sol.ok) throw std::runtime_error("cannot purify final operator");
    apply_solution(L, outs, sol.x, gens);
    canon_reduce(L, outs, sol.null_basis, gens, nq);
    const Bits& supp = c.beta == 'Z' ? L.z : L.x;
    if (off_bits(L).any())
        throw std::runtime_error("final operator not in the memory basis");
    Observable ob;
    ob.hop_edges = hops;
    supp.for_each_set([&](size_t q) { outs.flip(size_t(c.ep_out[q])); });
    ob.outs = outs.to_indices();
    ob.phase = sign_bit(L);
    ob.pattern = std::move(pattern);
    return ob;
}

} // namespace

void attach_observables(MeasurementCircuit& c) {
    const Tiling& t = c.t;
    int color = c.beta == 'Z' ? 0 : 1; // red strings for Z memory, green for X
    auto strings = skeleton_strings(t, color);
    Homology H(t);
    Echelon sp;
    std::vector<std::vector<int>> chosen;
    for (auto& s : strings)
        if (sp.add(H.klass(s.lifted))) chosen.push_back(s.hop_edges);
    int g = t.genus();
    if (int(chosen.size()) != 2 * g)
        throw std::runtime_error("string classes do not span the handles");
    if (2 * g > 30) throw std::runtime_error("too many observables");
    c.observables.clear();
    for (auto& hops : chosen) c.observables.push_back(evolve_observable(c, hops));
}

MeasurementCircuit build_memory_circuit(const Tiling& t,
                                        const std::string& family,
                                        int periods, char beta) {
    // one hf period leaves no round the final logical operator can be
    // rewritten into measured checks of, so the readout is undefined
    if (family == "hf" && periods < 2)
        throw std::runtime_error("hf memory needs at least 2 periods");
    MeasurementCircuit c = build_schedule(t, family, periods, beta);
    attach_detectors(c);
    attach_observables(c);
    return c;
}

// ------------------------------------------------------------------ noise

void apply_noise(MeasurementCircuit& c, const std::string& model, double p) {
    bool cor = model == "em3-cor";
    bool bg = model == "em3-ind-bg";
    if (model != "em3-ind" && !cor && !bg)
        throw std::runtime_error("unknown noise model: " + model);
    if (!(p >= 0 && p < 1)) throw std::runtime_error("noise strength out of range");
    c.noise_model = model;
    c.noise_p = p;
    c.noise.clear();
    for (int q = 0; q < c.t.nv; q++)
        c.noise.push_back({SiteKind::Prep, 0, q, cor ? p / 2 : p});
    for (int tt = 0; tt < c.T; tt++) {
        const Step& st = c.steps[size_t(tt)];
        std::vector<uint8_t> covered(size_t(c.t.nv), 0);
        for (int e : st.edges) {
            covered[size_t(c.t.edges[size_t(e)][0])] = 1;
            covered[size_t(c.t.edges[size_t(e)][1])] = 1;
            if (cor) {
                c.noise.push_back({SiteKind::Corr, tt, e, p});
            } else {
                c.noise.push_back({SiteKind::Depol2, tt, e, p});
                c.noise.push_back({SiteKind::MeasFlip, tt, e, p});
            }
        }
        // -bg: a background depolarizing layer hits every qubit each
        // step, busy or not; plain -ind only depolarizes waiting qubits
        for (int q = 0; q < c.t.nv; q++)
            if (bg || !covered[size_t(q)])
                c.noise.push_back({SiteKind::Idle, tt, q, p});
    }
}

// --------------------------------------------------------------------- io

std::string emit_circuit(const MeasurementCircuit& c) {
    std::ostringstream os;
    os << "circuit " << c.family << " " << c.beta << " steps " << c.T << "\n";
    os << emit_lattice(c.t);
    for (int tt = 0; tt < c.T; tt++) {
        const Step& st = c.steps[size_t(tt)];
        os << "step " << tt << " " << color_char(st.color) << " " << st.pauli
           << " :";
        for (int e : st.edges) os << " " << e;
        os << "\n";
    }
    if (c.noise_model.empty()) {
        os << "noise none\n";
    } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c.noise_p);
        os << "noise " << c.noise_model << " " << buf << "\n";
    }
    os << "detectors " << c.detectors.size() << "\n";
    for (const Detector& d : c.detectors) {
        os << "det " << d.face << " " << d.t1 << " " << d.t2 << " " << d.bias
           << " :";
        for (int o : d.outs) os << " " << o;
        os << "\n";
    }
    os << "observables " << c.observables.size() << "\n";
    for (const Observable& ob : c.observables) {
        os << "obs " << ob.phase << " hops";
        for (int e : ob.hop_edges) os << " " << e;
        os << " outs";
        for (int o : ob.outs) os << " " << o;
        os << "\n";
    }
    os << "end\n";
    return os.str();
}

MeasurementCircuit parse_circuit(const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    if (!(is >> tok) || tok != "circuit")
        throw std::runtime_error("not a circuit file");
    std::string family;
    char beta;
    int T;
    if (!(is >> family >> beta >> tok >> T) || tok != "steps")
        throw std::runtime_error("bad circuit header");
    std::string rest;
    std::getline(is, rest);
    std::ostringstream lat;
    std::string line;
    // the lattice block ends after its faces section
    int pending = -1;
    bool in_faces = false;
    while (std::getline(is, line)) {
        lat << line << "\n";
        std::istringstream ls(line);
        std::string w;
        ls >> w;
        if (w == "faces") {
            ls >> pending;
            in_faces = true;
            continue;
        }
        if (in_faces && --pending == 0) break;
    }
    Tiling t = parse_lattice(lat.str());
    MeasurementCircuit c = build_schedule_steps(t, family, T, beta);
    for (int tt = 0; tt < T; tt++) {
        int id;
        char col, mu;
        if (!(is >> tok >> id >> col >> mu) || tok != "step" || id != tt)
            throw std::runtime_error("bad step line");
        if (col != color_char(c.steps[size_t(tt)].color) ||
            mu != c.steps[size_t(tt)].pauli)
            throw std::runtime_error("step line disagrees with schedule");
        is >> tok; // ":"
        for (size_t i = 0; i < c.steps[size_t(tt)].edges.size(); i++) {
            int e;
            is >> e;
            if (e != c.steps[size_t(tt)].edges[i])
                throw std::runtime_error("step edge list disagrees with lattice");
        }
    }
    std::string model;
    if (!(is >> tok >> model) || tok != "noise")
        throw std::runtime_error("missing noise line");
    if (model != "none") {
        double p;
        is >> p;
        apply_noise(c, model, p);
    }
    size_t nd;
    if (!(is >> tok >> nd) || tok != "detectors")
        throw std::runtime_error("missing detector block");
    std::getline(is, line);
    for (size_t i = 0; i < nd; i++) {
        std::getline(is, line);
        std::istringstream ls(line);
        Detector d;
        if (!(ls >> tok >> d.face >> d.t1 >> d.t2 >> d.bias) || tok != "det")
            throw std::runtime_error("bad detector line");
        ls >> tok;
        int o;
        while (ls >> o) d.outs.push_back(o);
        c.detectors.push_back(std::move(d));
    }
    size_t no;
    if (!(is >> tok >> no) || tok != "observables")
        throw std::runtime_error("missing observable block");
    std::getline(is, line);
    for (size_t i = 0; i < no; i++) {
        std::getline(is, line);
        std::istringstream ls(line);
        Observable ob;
        if (!(ls >> tok >> ob.phase) || tok != "obs")
            throw std::runtime_error("bad observable line");
        ls >> tok; // "hops"
        while (ls >> tok && tok != "outs") ob.hop_edges.push_back(std::stoi(tok));
        int o;
        while (ls >> o) ob.outs.push_back(o);
        c.observables.push_back(std::move(ob));
    }
    if (!(is >> tok) || tok != "end")
        throw std::runtime_error("missing end marker");
    return c;
}

} // namespace floqsim
