#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace price {

// splitmix64 stream. Hand-rolled so that seeded runs are byte-identical across
// platforms and standard-library versions (std::shuffle and the <random>
// distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
        }
    }

private:
    std::uint64_t state_;
};

// Stable stage seed from (master seed, stage name, label). FNV-1a over the
// master seed bytes and both strings; adding a strategy to a run never
// perturbs another strategy's stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stage,
                                 std::string_view label) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto mix = [&h](unsigned char byte) {
        h ^= byte;
        h *= 0x100000001B3ull;
    };
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(master >> (8 * i)));
    mix(0);
    for (char c : stage) mix(static_cast<unsigned char>(c));
    mix(0);
    for (char c : label) mix(static_cast<unsigned char>(c));
    return h;
}

}  // namespace price
