#pragma once
#include <cstdint>
#include <cstddef>
#include <vector>
#include <cassert>
#include <bit>

namespace floqsim {

// Dynamic bitset sized at construction; grows on demand for set().
struct Bits {
    std::vector<uint64_t> w;

    Bits() = default;
    explicit Bits(size_t nbits) : w((nbits + 63) / 64, 0) {}

    static Bits one(size_t i) {
        Bits b(i + 1);
        b.set(i);
        return b;
    }

    size_t words() const { return w.size(); }

    void grow_bits(size_t nbits) {
        size_t need = (nbits + 63) / 64;
        if (w.size() < need) w.resize(need, 0);
    }

    bool get(size_t i) const {
        size_t q = i >> 6;
        if (q >= w.size()) return false;
        return (w[q] >> (i & 63)) & 1;
    }

    void set(size_t i, bool v = true) {
        grow_bits(i + 1);
        if (v) w[i >> 6] |= uint64_t(1) << (i & 63);
        else   w[i >> 6] &= ~(uint64_t(1) << (i & 63));
    }

    void flip(size_t i) {
        grow_bits(i + 1);
        w[i >> 6] ^= uint64_t(1) << (i & 63);
    }

    Bits& operator^=(const Bits& o) {
        if (w.size() < o.w.size()) w.resize(o.w.size(), 0);
        for (size_t i = 0; i < o.w.size(); i++) w[i] ^= o.w[i];
        return *this;
    }

    Bits& operator|=(const Bits& o) {
        if (w.size() < o.w.size()) w.resize(o.w.size(), 0);
        for (size_t i = 0; i < o.w.size(); i++) w[i] |= o.w[i];
        return *this;
    }

    Bits& operator&=(const Bits& o) {
        for (size_t i = 0; i < w.size(); i++)
            w[i] &= (i < o.w.size()) ? o.w[i] : 0;
        return *this;
    }

    friend Bits operator^(Bits a, const Bits& b) { a ^= b; return a; }
    friend Bits operator&(Bits a, const Bits& b) { a &= b; return a; }
    friend Bits operator|(Bits a, const Bits& b) { a |= b; return a; }

    bool any() const {
        for (uint64_t x : w) if (x) return true;
        return false;
    }

    int popcount() const {
        int c = 0;
        for (uint64_t x : w) c += std::popcount(x);
        return c;
    }

    // highest set bit index, or -1
    int top() const {
        for (size_t i = w.size(); i-- > 0;)
            if (w[i]) return int(i * 64 + 63 - std::countl_zero(w[i]));
        return -1;
    }

    // parity of |this AND o|
    int parity_and(const Bits& o) const {
        size_t m = std::min(w.size(), o.w.size());
        uint64_t acc = 0;
        for (size_t i = 0; i < m; i++) acc ^= w[i] & o.w[i];
        return std::popcount(acc) & 1;
    }

    bool intersects(const Bits& o) const {
        size_t m = std::min(w.size(), o.w.size());
        for (size_t i = 0; i < m; i++)
            if (w[i] & o.w[i]) return true;
        return false;
    }

    bool operator==(const Bits& o) const {
        size_t m = std::max(w.size(), o.w.size());
        for (size_t i = 0; i < m; i++) {
            uint64_t a = i < w.size() ? w[i] : 0;
            uint64_t b = i < o.w.size() ? o.w[i] : 0;
            if (a != b) return false;
        }
        return true;
    }
    bool operator!=(const Bits& o) const { return !(*this == o); }

    // strict weak order for map keys: compare as little-endian word arrays
    bool operator<(const Bits& o) const {
        size_t m = std::max(w.size(), o.w.size());
        for (size_t i = m; i-- > 0;) {
            uint64_t a = i < w.size() ? w[i] : 0;
            uint64_t b = i < o.w.size() ? o.w[i] : 0;
            if (a != b) return a < b;
        }
        return false;
    }

    template <class F>
    void for_each_set(F&& f) const {
        for (size_t i = 0; i < w.size(); i++) {
            uint64_t x = w[i];
            while (x) {
                int b = std::countr_zero(x);
                f(i * 64 + b);
                x &= x - 1;
            }
        }
    }

    std::vector<int> to_indices() const {
        std::vector<int> out;
        for_each_set([&](size_t i) { out.push_back(int(i)); });
        return out;
    }

    uint64_t hash() const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (size_t i = 0; i < w.size(); i++) {
            if (!w[i]) continue;
            h ^= w[i] + i;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

inline Bits from_indices(const std::vector<int>& idx) {
    Bits b;
    for (int i : idx) b.set(size_t(i));
    return b;
}

} // namespace floqsim
