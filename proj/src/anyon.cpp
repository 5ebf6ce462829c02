#include "floqsim/anyon.hpp"
#include <stdexcept>

namespace floqsim {

std::string boson_name(Boson b) {
    return std::string(1, "rgb"[b.color]) + "xyz"[b.pauli];
}

Boson boson_of(const std::string& name) {
    if (name.size() != 2) throw std::runtime_error("bad boson name " + name);
    std::string cs = "rgb", ps = "xyz";
    auto c = cs.find(name[0]), p = ps.find(name[1]);
    if (c == std::string::npos || p == std::string::npos)
        throw std::runtime_error("bad boson name " + name);
    return {int(c), int(p)};
}

std::array<Boson, 9> all_bosons() {
    std::array<Boson, 9> out{};
    for (int c = 0; c < 3; c++)
        for (int p = 0; p < 3; p++) out[c * 3 + p] = {c, p};
    return out;
}

FuseResult fuse(Boson a, Boson b) {
    if (a == b) return {FuseResult::Vacuum, {}, {}};
    if (a.color == b.color)
        return {FuseResult::Single, {a.color, 3 - a.pauli - b.pauli}, {}};
    if (a.pauli == b.pauli)
        return {FuseResult::Single, {3 - a.color - b.color, a.pauli}, {}};
    FuseResult r{FuseResult::Composite, {}, {a, b}};
    if (b < a) r.pair = {b, a};
    return r;
}

int monodromy(Boson a, Boson b) {
    if (a == b) throw std::runtime_error("monodromy needs distinct bosons");
    return (a.color == b.color || a.pauli == b.pauli) ? +1 : -1;
}

CondensationTable classify(Boson condensed) {
    CondensationTable t;
    t.condensed = condensed;
    for (Boson b : all_bosons()) {
        Condense s;
        if (b == condensed) s = Condense::V;
        else if (b.color == condensed.color || b.pauli == condensed.pauli)
            s = Condense::D;
        else s = Condense::C;
        t.status[b.color * 3 + b.pauli] = s;
    }
    return t;
}

std::string ScheduleViolation::describe() const {
    std::string what = cls == Condense::V ? "repeated boson"
                                          : "deconfined adjacency";
    return "step " + std::to_string(step) + ": " + boson_name(a) + " -> " +
           boson_name(b) + " (" + what + ")";
}

std::vector<ScheduleViolation> validate_schedule(const std::vector<Boson>& seq) {
    if (seq.empty()) throw std::runtime_error("empty schedule");
    std::vector<ScheduleViolation> out;
    for (size_t i = 0; i < seq.size(); i++) {
        Boson a = seq[i], b = seq[(i + 1) % seq.size()];
        Condense cls = classify(a).of(b);
        if (cls != Condense::C) out.push_back({int(i), a, b, cls});
    }
    return out;
}

} // namespace floqsim
