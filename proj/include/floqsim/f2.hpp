#pragma once
#include "floqsim/bits.hpp"
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace floqsim {

// Echelon basis over F2, rows keyed by top set bit, with optional augmentation.
struct Echelon {
    std::map<int, std::pair<Bits, Bits>> piv; // top bit -> (row, aug)

    // reduce v (and aug a) by the basis; returns residual
    std::pair<Bits, Bits> reduce(Bits v, Bits a = Bits()) const {
        for (int p = v.top(); p >= 0; p = v.top()) {
            auto it = piv.find(p);
            if (it == piv.end()) break;
            v ^= it->second.first;
            a ^= it->second.second;
        }
        return {v, a};
    }

    bool add(Bits v, Bits a = Bits()) {
        auto [rv, ra] = reduce(std::move(v), std::move(a));
        if (!rv.any()) return false;
        piv[rv.top()] = {rv, ra};
        return true;
    }

    bool contains(const Bits& v) const { return !reduce(v).first.any(); }

    int rank() const { return int(piv.size()); }
};

struct LinearSolution {
    bool ok = false;
    Bits x;                       // one solution over nvar variables
    std::vector<Bits> null_basis; // kernel basis of the row system
};

// Solve rows·x = rhs over F2. Rows are variable masks with pivot = top bit;
// back-substitution runs over pivots in ascending order since non-pivot bits
// of an echelon row sit below its pivot.
inline LinearSolution solve_f2(const std::vector<Bits>& rows,
                               const std::vector<uint8_t>& rhs, int nvar) {
    assert(rows.size() == rhs.size());
    std::map<int, std::pair<Bits, uint8_t>> piv; // pivot var -> (row, rhs bit)
    for (size_t i = 0; i < rows.size(); i++) {
        Bits v = rows[i];
        uint8_t b = rhs[i];
        for (int p = v.top(); p >= 0; p = v.top()) {
            auto it = piv.find(p);
            if (it == piv.end()) break;
            v ^= it->second.first;
            b ^= it->second.second;
        }
        if (v.any()) piv[v.top()] = {v, b};
        else if (b) return {};
    }
    LinearSolution out;
    out.ok = true;
    out.x = Bits(size_t(nvar));
    for (auto& [p, rb] : piv) { // std::map iterates pivots in ascending order
        auto& [row, b] = rb;
        uint8_t val = b;
        row.for_each_set([&](size_t q) {
            if (int(q) != p && out.x.get(q)) val ^= 1;
        });
        out.x.set(size_t(p), val);
    }
    for (int f = 0; f < nvar; f++) {
        if (piv.count(f)) continue;
        Bits v{size_t(nvar)};
        v.set(size_t(f));
        for (auto& [p, rb] : piv) {
            if (p <= f) continue; // rows with pivot below f cannot contain f
            uint8_t val = 0;
            rb.first.for_each_set([&](size_t q) {
                if (int(q) != p && v.get(q)) val ^= 1;
            });
            v.set(size_t(p), val);
        }
        out.null_basis.push_back(std::move(v));
    }
    return out;
}

// determinant of a small dense binary matrix, mod 2
inline int f2_det(std::vector<std::vector<uint8_t>> m) {
    size_t n = m.size();
    for (size_t c = 0; c < n; c++) {
        size_t p = c;
        while (p < n && !m[p][c]) p++;
        if (p == n) return 0;
        std::swap(m[c], m[p]);
        for (size_t i = 0; i < n; i++) {
            if (i == c || !m[i][c]) continue;
            for (size_t j = 0; j < n; j++) m[i][j] ^= m[c][j];
        }
    }
    return 1;
}

} // namespace floqsim
