#pragma once

#include <cstdint>

namespace trimap {

// Deterministic seeded generator (splitmix64 core). All randomness in the
// library flows through explicitly passed Rng instances so that identical
// seeds give identical artifacts on every platform. Never use std::random.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection; n must be positive.
    uint64_t below(uint64_t n) {
        uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
        uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    int64_t below_i(int64_t n) { return static_cast<int64_t>(below(static_cast<uint64_t>(n))); }

    bool coin() { return (next() & 1u) != 0; }

    // Independent child generator; advances this one.
    Rng fork() { return Rng(next() ^ 0xd1b54a32d192ed03ULL); }

private:
    uint64_t state_;
};

} // namespace trimap
