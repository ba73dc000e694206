#pragma once

// Deterministic random number generation. xoshiro256** state is derived from
// a (seed, stream_id) pair through SplitMix64, so each replicate owns an
// independent stream and parallel runs reproduce byte-for-byte regardless of
// worker count. Bounded draws use rejection instead of std::uniform_int_*,
// which is not bit-reproducible across standard library implementations.

#include <array>
#include <cstdint>

namespace suslab {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_(stream_id) {
        std::uint64_t sm = seed;
        const std::uint64_t a = splitmix64_next(sm);
        sm ^= 0xd1b54a32d192ed03ULL * (stream_id + 1);
        sm += a;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64() {
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

    // Unbiased integer in [0, bound), bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    // Uniform double in [0, 1) built from the top 53 bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace suslab
