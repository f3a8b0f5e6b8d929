#ifndef ERGOLAB_RNG_HPP
#define ERGOLAB_RNG_HPP

#include <cstdint>
#include <cstring>
#include <string_view>

namespace ergolab {

// splitmix64 finalizer; used for seeding and stream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream for (master seed, stream index).  Every parallel task
// derives its own stream so results do not depend on scheduling.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t stream) {
    return mix64(master ^ mix64(stream));
}

// Task labels hash into stream indices (cli_runner seeding policy).
inline std::uint64_t label_stream(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// xoshiro256**: small, fast, and fully specified (bit-reproducible across
// platforms, unlike std distributions).
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = mix64(x++);
    }

    std::uint64_t next_u64() {
        std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1) with 53 random bits
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // k uniform low-order bits scaled to [0, 2^k * 2^-53); used by orbit
    // dithering for integer-slope branches
    double low_bits(int k) {
        std::uint64_t m = next_u64() & ((std::uint64_t(1) << k) - 1);
        return double(m) * 0x1.0p-53;
    }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

} // namespace ergolab

#endif
