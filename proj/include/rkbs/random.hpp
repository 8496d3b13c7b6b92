#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace rkbs {

/// Purposes that key independent random streams within one trial.
enum class StreamPurpose : std::uint64_t {
    Noise = 1,
    PointSet = 2,
    Audit = 3,
    Corruption = 4,
    Test = 5,
};

namespace detail {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

/// Counter-based generator: output i is mix64(key + i * golden), with the key
/// derived from (master seed, trial index, purpose). Every (trial, purpose)
/// pair gets its own stream, so results do not depend on execution order.
/// All derived variates use only integer arithmetic and IEEE basic operations
/// plus log/sqrt/cos, so streams are reproducible across platforms.
class KeyedStream {
public:
    using result_type = std::uint64_t;

    KeyedStream(std::uint64_t master_seed, std::uint64_t trial_index, StreamPurpose purpose) noexcept
        : key_(derive_key(master_seed, trial_index, static_cast<std::uint64_t>(purpose))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        ++counter_;
        return detail::mix64(key_ + counter_ * detail::kGolden);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform01_open_low() noexcept { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double a, double b) noexcept { return a + (b - a) * uniform01(); }

    /// Uniform integer in [lo, hi] by rejection (no modulo bias).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>((*this)());
        const std::uint64_t limit = max() - max() % span;
        std::uint64_t r;
        do {
            r = (*this)();
        } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % span);
    }

    /// Standard normal by Box-Muller; the second variate of each pair is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Fair coin.
    bool coin() noexcept { return ((*this)() >> 63) != 0; }

private:
    static constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose) noexcept {
        std::uint64_t k = detail::mix64(seed + detail::kGolden);
        k = detail::mix64(k ^ (trial + 0x632BE59BD9B4E019ULL));
        k = detail::mix64(k ^ (purpose * 0xD1B54A32D192ED03ULL));
        return k;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rkbs
