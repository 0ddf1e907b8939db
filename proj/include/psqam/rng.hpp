#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>
#include <optional>

namespace psqam {

// xoshiro256++ with splitmix64 seeding. Fast, well-tested generator; we keep
// our own copy (rather than std::mt19937_64) so that streams derived from
// (seed, tag...) tuples stay stable across standard library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
        cached_.reset();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1), 53-bit resolution
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; pairs are cached
    double next_gaussian() {
        if (cached_) {
            double v = *cached_;
            cached_.reset();
            return v;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        return r * std::cos(a);
    }

    // derive an independent substream from a seed plus integer tags; mixing is
    // done with splitmix64 so nearby tags land far apart
    template <class... Tags>
    static Rng stream(std::uint64_t seed, Tags... tags) {
        std::uint64_t h = seed;
        ((h = splitmix64(h) ^ (static_cast<std::uint64_t>(tags) * 0x9e3779b97f4a7c15ULL)), ...);
        return Rng(splitmix64(h));
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t splitmix64(std::uint64_t&& x) {
        std::uint64_t y = x;
        return splitmix64(y);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4] = {};
    std::optional<double> cached_;
};

}  // namespace psqam
