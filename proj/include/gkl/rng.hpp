// SPDX-License-Identifier: Apache-2.0
#pragma once

// xoshiro256** (Blackman & Vigna) seeded through splitmix64, with the
// reference jump() that advances the state by 2^128 draws. Each jump
// yields a non-overlapping stream for one worker.

#include <array>
#include <cstdint>
#include <limits>

namespace gkl {

class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& word : state_) word = splitmix64(z);
    }

    /// Raw state; must not be all zero.
    explicit Xoshiro256(const std::array<std::uint64_t, 4>& state) : state_{state} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Equivalent to 2^128 calls of operator().
    void jump() {
        static constexpr std::array<std::uint64_t, 4> kJump = {
            0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL, 0xa9582618e03fc9aaULL,
            0x39abdc4529b1661cULL};
        std::array<std::uint64_t, 4> acc{};
        for (const std::uint64_t word : kJump) {
            for (int b = 0; b < 64; ++b) {
                if (word & (std::uint64_t{1} << b)) {
                    for (int i = 0; i < 4; ++i) acc[i] ^= state_[i];
                }
                (*this)();
            }
        }
        state_ = acc;
    }

    /// Generator for stream `index`: the base seed jumped `index` times.
    static Xoshiro256 stream(std::uint64_t seed, unsigned index) {
        Xoshiro256 gen{seed};
        for (unsigned i = 0; i < index; ++i) gen.jump();
        return gen;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace gkl
