#pragma once
#include <array>
#include <string>
#include <vector>

namespace floqsim {

// color-code boson: a (color, Pauli) cell of the 3x3 table
struct Boson {
    int color; // 0=r 1=g 2=b
    int pauli; // 0=x 1=y 2=z
    bool operator==(const Boson& o) const {
        return color == o.color && pauli == o.pauli;
    }
    bool operator<(const Boson& o) const {
        return color != o.color ? color < o.color : pauli < o.pauli;
    }
};

std::string boson_name(Boson b);          // "rx", "gz", ...
Boson boson_of(const std::string& name);

std::array<Boson, 9> all_bosons();

struct FuseResult {
    enum Kind { Vacuum, Single, Composite } kind;
    Boson b{};                   // valid when kind == Single
    std::array<Boson, 2> pair{}; // unordered tag when kind == Composite
};

// a*a = 1; same color or same Pauli completes the line; the rest is a fermion
FuseResult fuse(Boson a, Boson b);

// +1 when a and b share a color or Pauli line, -1 otherwise; requires a != b
int monodromy(Boson a, Boson b);

enum class Condense { V, D, C };

struct CondensationTable {
    Boson condensed;
    std::array<Condense, 9> status; // indexed by color*3 + pauli
    Condense of(Boson b) const { return status[b.color * 3 + b.pauli]; }
};

// condensed boson -> V; its color/Pauli lines -> D; the other four -> C
CondensationTable classify(Boson condensed);

struct ScheduleViolation {
    int step; // transition step->step+1 (cyclic)
    Boson a, b;
    Condense cls; // V: repeated boson, D: deconfined adjacency
    std::string describe() const;
};

// a measurement sequence is valid iff every cyclically-adjacent pair differs
// in both color and Pauli (next boson confined under the current one)
std::vector<ScheduleViolation> validate_schedule(const std::vector<Boson>& seq);

} // namespace floqsim
