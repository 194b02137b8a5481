#pragma once

#include <cstdint>
#include <stdexcept>

namespace fracount {

// Splittable deterministic random stream. A stream is identified by
// (seed, stream_index); equal identifiers reproduce the same sequence on
// every platform. Streams with distinct indices are derived through a
// splitmix64 key schedule and behave as statistically independent
// xoshiro256++ generators.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}

    RngStream(std::uint64_t seed, std::uint64_t stream_index = 0)
        : seed_(seed), stream_(stream_index) {
        std::uint64_t x = mix(seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1));
        for (auto& s : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            s = mix(x);
        }
        // all-zero state is invalid for xoshiro; cannot happen after mixing
        // distinct increments, but guard anyway
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
            state_[0] = 1;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    // Derived stream, independent of this stream's consumption state.
    RngStream child(std::uint64_t slot) const {
        return RngStream(mix(seed_ ^ mix(stream_ + 0x6a09e667f3bcc909ULL)), slot);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result =
            rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe argument for log().
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_[4];
};

}  // namespace fracount
