// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Fixed-algorithm generators. The standard library distributions are
// implementation-defined, which would break the bit-reproducibility contract
// of the Monte Carlo runs, so the uniform-to-normal transform is spelled out
// here (splitmix64 plus Box-Muller).
namespace accprec::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Decorrelates per-trial streams regardless of how close master seeds are.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    return mix(master + kGolden * (index + 1));
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kGolden;
        return mix(state_);
    }

    // Uniform on (0, 1]; never returns zero, so it is log-safe.
    double next_unit() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    // One standard normal draw; a Box-Muller pair is cached across calls.
    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double z0, z1;
        fresh_pair(z0, z1);
        spare_ = z1;
        has_spare_ = true;
        return z0;
    }

    // Two draws consuming exactly two uniforms, independent of the cache.
    void fresh_pair(double& z0, double& z1) {
        double u1 = gen_.next_unit();
        double u2 = gen_.next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        z0 = r * std::cos(a);
        z1 = r * std::sin(a);
    }

    double next_unit() { return gen_.next_unit(); }

  private:
    SplitMix64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace accprec::rng
