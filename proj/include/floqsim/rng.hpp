#pragma once
#include <cstdint>
#include <cmath>

namespace floqsim {

// splitmix64: deterministic across platforms, cheap enough to seed per shot
struct SplitMix64 {
    uint64_t s;
    explicit SplitMix64(uint64_t seed = 0) : s(seed) {}

    uint64_t next() {
        uint64_t z = (s += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return double(next() >> 11) * 0x1.0p-53; }

    bool next_bit() { return next() >> 63; }

    // uniform integer in [0, n)
    uint64_t next_below(uint64_t n) {
        return uint64_t((__uint128_t(next()) * n) >> 64);
    }
};

inline uint64_t mix64(uint64_t a, uint64_t b) {
    SplitMix64 r(a ^ (b * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull));
    r.next();
    return r.next();
}

} // namespace floqsim
