#pragma once

#include <cmath>
#include <cstdint>

namespace cometq {

// Deterministic, splittable generator: splitmix64 stream plus Box-Muller
// gaussians. Self-contained so frozen test values and solver results do not
// depend on the standard library's distribution algorithms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Seed for a child stream (multi-start index or any sub-task); independent
    // of how many draws the parent has made.
    static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        mix.next_u64();
        return mix.next_u64();
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; never returns 0 so log() below is safe.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = next_unit();
        double v = next_unit();
        double m = std::sqrt(-2.0 * std::log(u));
        spare_ = m * std::sin(6.283185307179586 * v);
        have_spare_ = true;
        return m * std::cos(6.283185307179586 * v);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace cometq
