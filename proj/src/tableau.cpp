#include "floqsim/tableau.hpp"
#include <stdexcept>

namespace floqsim {

Tableau::Tableau(int nq, char basis, uint64_t seed) : n(nq), rng(seed) {
    if (basis != 'Z' && basis != 'X') throw std::runtime_error("tableau basis must be X or Z");
    rows.assign(size_t(2 * n), PauliOp{});
    for (int i = 0; i < n; i++) {
        PauliOp xi, zi;
        xi.x.set(size_t(i));
        zi.z.set(size_t(i));
        if (basis == 'Z') {
            rows[size_t(i)] = xi;        // destabilizer X_i
            rows[size_t(n + i)] = zi;    // stabilizer Z_i
        } else {
            rows[size_t(i)] = zi;
            rows[size_t(n + i)] = xi;
        }
    }
}

void Tableau::apply_pauli(const Bits& xe, const Bits& ze) {
    for (int i = n; i < 2 * n; i++) {
        if (sym(rows[size_t(i)].x, rows[size_t(i)].z, xe, ze))
            rows[size_t(i)].r = (rows[size_t(i)].r + 2) % 4;
    }
}

int Tableau::measure(const PauliOp& p) {
    int anti = -1;
    for (int i = n; i < 2 * n; i++) {
        if (sym(rows[size_t(i)].x, rows[size_t(i)].z, p.x, p.z)) { anti = i; break; }
    }
    if (anti >= 0) {
        // random outcome branch
        PauliOp old = rows[size_t(anti)];
        int out = int(rng.next_bit());
        for (int i = 0; i < 2 * n; i++) {
            if (i == anti || i == anti - n) continue;
            if (sym(rows[size_t(i)].x, rows[size_t(i)].z, p.x, p.z))
                rows[size_t(i)] = mult(rows[size_t(i)], old);
        }
        rows[size_t(anti - n)] = old;
        // store measured operator with sign matching the outcome
        rows[size_t(anti)] = PauliOp{p.x, p.z, (p.r + 2 * out) % 4};
        return out;
    }
    // deterministic branch: accumulate stabilizer rows indexed by
    // anticommuting destabilizers
    PauliOp acc;
    for (int i = 0; i < n; i++) {
        if (sym(rows[size_t(i)].x, rows[size_t(i)].z, p.x, p.z))
            acc = mult(acc, rows[size_t(n + i)]);
    }
    if (acc.x != p.x || acc.z != p.z)
        throw std::runtime_error("deterministic measurement does not reproduce operator");
    int sa = sign_bit(acc), sp = sign_bit(p);
    return sa ^ sp;
}

bool Tableau::contains_mod_sign(const Bits& xp, const Bits& zp) const {
    for (int i = n; i < 2 * n; i++) {
        if (sym(rows[size_t(i)].x, rows[size_t(i)].z, xp, zp)) return false;
    }
    PauliOp acc;
    for (int i = 0; i < n; i++) {
        if (sym(rows[size_t(i)].x, rows[size_t(i)].z, xp, zp))
            acc = mult(acc, rows[size_t(n + i)]);
    }
    return acc.x == xp && acc.z == zp;
}

} // namespace floqsim
