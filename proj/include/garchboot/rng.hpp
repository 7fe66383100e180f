#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace garchboot {

/// SplitMix64 finalizer. Used as the mixing step of seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : s) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ULL;
    }
    return h;
}

/**
 * Seed derivation H(master, stream, label).
 *
 * Every nested source of randomness (replication, bootstrap replicate,
 * weight draw, ...) gets its own stream derived from the master seed, the
 * stream index, and a textual label. The label keeps streams of different
 * experiments from colliding even when they share (master, index).
 */
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::string_view label = {}) noexcept {
    std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ (stream * 0x9e3779b97f4a7c15ULL + 1));
    if (!label.empty()) h = mix64(h ^ fnv1a64(label));
    return h;
}

/**
 * Deterministic random source.
 *
 * Wraps std::mt19937_64 (whose raw output sequence is pinned by the
 * standard) and applies fixed arithmetic transforms for every
 * distribution, so a given seed produces the same stream on every
 * platform. The <random> distribution classes are deliberately avoided:
 * their algorithms are implementation-defined.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the Box-Muller transform (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Student-t with df degrees of freedom (Bailey's polar-free form,
    /// the t analogue of Box-Muller).
    double student_t(double df) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double radial = std::sqrt(df * (std::pow(u1, -2.0 / df) - 1.0));
        return radial * std::cos(2.0 * M_PI * u2);
    }

    /// Exponential with mean 1.
    double exponential() { return -std::log(uniform()); }

    /// Gamma(shape, rate) for shape >= 1, Marsaglia-Tsang squeeze method.
    double gamma(double shape, double rate) {
        if (shape < 1.0) throw std::invalid_argument("gamma: shape must be >= 1");
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    /// Uniform integer in [0, n) via the multiply-shift reduction.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace garchboot
