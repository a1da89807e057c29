#pragma once

#include <cmath>
#include <cstdint>

namespace hllg {

// splitmix64: tiny, seedable, and stable across platforms. Used everywhere a
// reproducibility contract ("same seed, bit-identical output") is promised,
// instead of the implementation-defined std distributions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Box-Muller; one value per call, pair cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        while (u1 <= 0.0) u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Decorrelated substream for trial/run index i under a base seed.
    static std::uint64_t substream(std::uint64_t base, std::uint64_t index) {
        Rng r(base ^ (0x5851f42d4c957f2dULL * (index + 1)));
        return r.next_u64();
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace hllg
