#pragma once
#include "floqsim/pauli.hpp"
#include "floqsim/rng.hpp"
#include <optional>
#include <vector>

namespace floqsim {

// CHP-style stabilizer tableau. Rows 0..n-1 are destabilizers, n..2n-1
// stabilizers. Initial state is the all-|0> (basis 'Z') or all-|+>
// (basis 'X') product state.
struct Tableau {
    int n = 0;
    std::vector<PauliOp> rows;
    SplitMix64 rng;

    Tableau(int nq, char basis, uint64_t seed);

    void apply_pauli(const Bits& xe, const Bits& ze);
    // measure a Hermitian Pauli product (phase bit folded into r)
    int measure(const PauliOp& p);
    // true if +/-P is in the stabilizer group
    bool contains_mod_sign(const Bits& xp, const Bits& zp) const;
};

} // namespace floqsim
