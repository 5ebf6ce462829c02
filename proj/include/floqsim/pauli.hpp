#pragma once
#include "floqsim/bits.hpp"
#include <cassert>
#include <vector>

namespace floqsim {

// Pauli as i^r * prod_q i^{x_q z_q} X^x Z^z with r tracked mod 4.
struct PauliOp {
    Bits x, z;
    int r = 0;
};

// symplectic product parity (0 = commute, 1 = anticommute)
inline int sym(const Bits& x1, const Bits& z1, const Bits& x2, const Bits& z2) {
    return x1.parity_and(z2) ^ z1.parity_and(x2);
}

inline int sym(const PauliOp& a, const PauliOp& b) {
    return sym(a.x, a.z, b.x, b.z);
}

// phase exponent of the product, summed over qubits, mod 4
inline int g_phase(const Bits& x1, const Bits& z1, const Bits& x2,
                   const Bits& z2) {
    size_t nw = std::max(std::max(x1.words(), z1.words()),
                         std::max(x2.words(), z2.words()));
    auto word = [](const Bits& b, size_t i) -> uint64_t {
        return i < b.words() ? b.w[i] : 0;
    };
    long long s = 0;
    for (size_t i = 0; i < nw; i++) {
        uint64_t a = word(x1, i), b = word(z1, i);
        uint64_t c = word(x2, i), d = word(z2, i);
        uint64_t y1 = a & b, xo = a & ~b, zo = ~a & b;
        s += std::popcount(y1 & d & ~c) - std::popcount(y1 & c & ~d);
        s += std::popcount(xo & d & c) - std::popcount(xo & d & ~c);
        s += std::popcount(zo & c & ~d) - std::popcount(zo & c & d);
    }
    return int(((s % 4) + 4) % 4);
}

inline PauliOp mult(const PauliOp& p1, const PauliOp& p2) {
    PauliOp out;
    out.x = p1.x ^ p2.x;
    out.z = p1.z ^ p2.z;
    out.r = (p1.r + p2.r + g_phase(p1.x, p1.z, p2.x, p2.z)) % 4;
    return out;
}

inline int sign_bit(const PauliOp& p) {
    assert(p.r % 2 == 0 && "non-Hermitian operator");
    return (p.r / 2) & 1;
}

// (x,z) masks for a uniform Pauli on a qubit set
inline std::pair<Bits, Bits> pauli_mask(const std::vector<int>& qubits,
                                        char pauli) {
    Bits x, z;
    for (int q : qubits) {
        if (pauli == 'X' || pauli == 'Y') x.set(size_t(q));
        if (pauli == 'Z' || pauli == 'Y') z.set(size_t(q));
    }
    return {x, z};
}

} // namespace floqsim
