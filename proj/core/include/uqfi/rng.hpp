#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace uqfi {

// Counter-free splittable generator built on the splitmix64 finalizer.
// Every draw is a pure function of (state); independent streams are derived
// by hashing (seed, stream) so replications never share a sequence.  The
// point of rolling this by hand instead of using <random> is bit-exact
// reproducibility: std::normal_distribution is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Derive the seed of an independent stream from (seed, stream id).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return mix(mix(seed) ^ (0x632be59bd9b4e019ull * (stream + 1)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform draw strictly inside (0,1); safe as a log()/tan() argument.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the paired draw is cached.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Exponential with unit rate.
    double next_exponential() { return -std::log(next_unit()); }

    /// Student t with 3 degrees of freedom: Z0 / sqrt((Z1^2+Z2^2+Z3^2)/3).
    double next_t3() {
        double z0 = next_normal();
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            double z = next_normal();
            s += z * z;
        }
        return z0 / std::sqrt(s / 3.0);
    }

    /// Standard Cauchy.
    double next_cauchy() {
        return std::tan(std::numbers::pi * (next_unit() - 0.5));
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace uqfi
