#pragma once

#include <cstdint>

namespace txg {

// splitmix64 (Vigna, public domain). Chosen because its output stream is an
// exact function of the 64-bit state on every platform; the first outputs for
// seeds 0, 42 and 0x0123456789ABCDEF are frozen as test vectors in
// tests/gf2core_tests.cpp and quoted in the README.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Low n bits of one output, 1 <= n <= 32.
    std::uint32_t next_bits(int n) {
        return static_cast<std::uint32_t>(next_u64() & ((std::uint64_t{1} << n) - 1));
    }

    int next_bit() { return static_cast<int>(next_u64() >> 63); }

    // Uniform in [0,1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1], for logs.
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_gaussian();

    // One full splitmix64 step applied to x; the stream-derivation mixer.
    static std::uint64_t mix64(std::uint64_t x) {
        std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Independent child stream: a pure function of (master, index), so
    // trial i draws the same values no matter which worker runs it.
    static Rng derive(std::uint64_t master, std::uint64_t index) {
        return Rng(mix64(master ^ mix64(index)));
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace txg
