#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rkbs/error.hpp"
#include "rkbs/gram.hpp"
#include "rkbs/kernels.hpp"
#include "rkbs/random.hpp"

namespace rkbs {

/// Slack on the unit Lebesgue bound; absorbs solve round-off.
inline constexpr double kLebesgueTolerance = 1e-9;
/// Slack on the kernel bound M.
inline constexpr double kBoundTolerance = 1e-12;
/// Default uniform grid size for Lebesgue profiles.
inline constexpr int kDefaultGridSize = 2001;

enum class Condition { A1, A2, A4, RelaxedA4 };
enum class Verdict { Pass, Fail, Inconclusive };

inline const char *to_string(Condition c) {
    switch (c) {
        case Condition::A1: return "A1";
        case Condition::A2: return "A2";
        case Condition::A4: return "A4";
        case Condition::RelaxedA4: return "RelaxedA4";
    }
    return "?";
}

inline const char *to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "Pass";
        case Verdict::Fail: return "Fail";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

/// Concrete configuration that violates a condition.
struct Witness {
    std::vector<double> points;
    std::optional<double> t;
    double value = 0.0;
};

struct AuditStats {
    int n_trials = 0;
    int n_skipped = 0;  ///< trials whose Gram system could not be built
    double worst_value = 0.0;
    std::optional<double> argmax_location;
};

/// Outcome of a sampled audit. Pass only means no violation was found over
/// `stats.n_trials` samples; it is never a proof.
struct AuditReport {
    Condition condition = Condition::A1;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Witness> witness;
    AuditStats stats;
    std::string message;
};

struct LebesgueProfile {
    std::vector<double> grid;
    std::vector<double> values;
    double max_value = 0.0;
    double argmax = 0.0;
};

/// L(t) = ||K[x]^{-1} K_x(t)||_1
inline double lebesgue_function(const GramSystem &system, double t) {
    return system.cardinal_coefficients(t).lpNorm<1>();
}

/// Lebesgue function on every grid point (exactly 1 at nodes). The maximum is
/// a lower bound for the Lebesgue constant over the domain.
inline LebesgueProfile lebesgue_constant(const GramSystem &system, std::span<const double> grid) {
    if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "Lebesgue grid must be nonempty");
    const auto n = system.size();
    const auto m = static_cast<Eigen::Index>(grid.size());
    Matrix rhs(n, m);
    for (Eigen::Index i = 0; i < m; ++i) rhs.col(i) = system.kx_column(grid[static_cast<std::size_t>(i)]);
    const Matrix weights = system.factorization().solve(rhs);

    LebesgueProfile profile;
    profile.grid.assign(grid.begin(), grid.end());
    profile.values.resize(grid.size());
    profile.max_value = -1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double t = grid[static_cast<std::size_t>(i)];
        const double v = system.points().contains(t) ? 1.0 : weights.col(i).lpNorm<1>();
        profile.values[static_cast<std::size_t>(i)] = v;
        if (v > profile.max_value) {
            profile.max_value = v;
            profile.argmax = grid[static_cast<std::size_t>(i)];
        }
    }
    return profile;
}

/// `size` uniformly spaced points covering a bounded interval. Open endpoints
/// are excluded by placing the nodes strictly inside.
inline std::vector<double> uniform_grid(const Interval &interval, int size) {
    if (!interval.bounded()) throw Error(ErrorKind::InvalidArgument, "grid interval must be bounded");
    if (size < 1) throw Error(ErrorKind::InvalidArgument, "grid size must be positive");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(size));
    const double a = interval.lo;
    const double b = interval.hi;
    if (size == 1) {
        grid.push_back(0.5 * (a + b));
        return grid;
    }
    // Closed endpoints use linspace(a, b); open endpoints shift inward by one step.
    const int lo_skip = interval.lo_closed ? 0 : 1;
    const int hi_skip = interval.hi_closed ? 0 : 1;
    const int segments = size - 1 + lo_skip + hi_skip;
    const double h = (b - a) / segments;
    for (int i = 0; i < size; ++i) grid.push_back(a + (i + lo_skip) * h);
    if (interval.hi_closed) grid.back() = b;
    return grid;
}

/// Uniform grid plus the midpoints between consecutive sample points, sorted.
/// Midpoints matter: the closed forms show the extrema sit between nodes.
inline std::vector<double> lebesgue_grid(const Interval &interval, const PointSet &x, int size = kDefaultGridSize) {
    std::vector<double> grid = uniform_grid(interval, size);
    const std::vector<double> sorted = x.sorted();
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        const double mid = 0.5 * (sorted[k - 1] + sorted[k]);
        if (interval.contains(mid)) grid.push_back(mid);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// Draws raw point sequences for audits. The raw output is validated by
/// PointSet, so a faulty generator surfaces as a construction error.
struct PointSampler {
    Interval interval;
    std::function<std::vector<double>(KeyedStream &)> draw;
};

/// n uniform on {n_min..n_max}; points uniform on the interval, redrawn until the
/// minimum spacing is at least `min_spacing_fraction` times the interval length.
inline PointSampler uniform_point_sampler(Interval interval, int n_min = 2, int n_max = 30,
                                          double min_spacing_fraction = 1e-3) {
    if (!interval.bounded()) throw Error(ErrorKind::InvalidArgument, "sampler interval must be bounded");
    if (n_min < 1 || n_max < n_min) throw Error(ErrorKind::InvalidArgument, "invalid sampler size range");
    const double min_gap = min_spacing_fraction * interval.length();
    if (min_gap * n_max >= interval.length()) {
        throw Error(ErrorKind::InvalidArgument, "sampler spacing too large for the requested point count");
    }
    return {interval, [interval, n_min, n_max, min_gap](KeyedStream &rng) {
                const auto n = static_cast<std::size_t>(rng.uniform_int(n_min, n_max));
                std::vector<double> pts(n);
                for (;;) {
                    for (double &p : pts) {
                        do {
                            p = rng.uniform(interval.lo, interval.hi);
                        } while (!interval.contains(p));
                    }
                    std::vector<double> sorted = pts;
                    std::sort(sorted.begin(), sorted.end());
                    bool ok = true;
                    for (std::size_t k = 1; k < n && ok; ++k) ok = sorted[k] - sorted[k - 1] >= min_gap;
                    if (interval.lo_closed == false && n > 0) ok = ok && sorted.front() - interval.lo >= min_gap;
                    if (interval.hi_closed == false && n > 0) ok = ok && interval.hi - sorted.back() >= min_gap;
                    if (ok) return pts;
                }
            }};
}

/// Sampled check of (A1): every drawn Gram matrix must be numerically nonsingular.
inline AuditReport audit_a1(const KernelSpec &kernel, const PointSampler &sampler, int trials,
                            std::uint64_t seed = 1) {
    if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
    AuditReport report;
    report.condition = Condition::A1;
    report.stats.worst_value = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        KeyedStream rng(seed, static_cast<std::uint64_t>(trial), StreamPurpose::PointSet);
        std::vector<double> raw = sampler.draw(rng);
        std::optional<PointSet> x;
        try {
            x.emplace(raw);
        } catch (const Error &e) {
            report.verdict = Verdict::Inconclusive;
            report.message = "sampler produced an invalid point set: " + std::string(e.what());
            return report;
        }
        ++report.stats.n_trials;
        try {
            GramSystem system(kernel, *x);
            if (system.rcond_estimate() < report.stats.worst_value) report.stats.worst_value = system.rcond_estimate();
        } catch (const Error &e) {
            if (e.kind() == ErrorKind::SingularGram) {
                const Eigen::PartialPivLU<Matrix> lu(GramSystem::raw_gram(kernel, *x));
                report.verdict = Verdict::Fail;
                report.witness = Witness{raw, std::nullopt, lu.rcond()};
                report.stats.worst_value = lu.rcond();
                report.message = e.what();
                return report;
            }
            report.verdict = Verdict::Inconclusive;
            report.message = e.what();
            return report;
        }
    }
    report.verdict = Verdict::Pass;
    report.message = "no numerically singular Gram matrix in " + std::to_string(report.stats.n_trials) +
                     " sampled point sets (worst_value is the smallest rcond estimate)";
    return report;
}

/// Sampled check of (A2): sup |K(s,t)| over the given pairs against the family bound.
inline AuditReport audit_a2(const KernelSpec &kernel, std::span<const std::pair<double, double>> pairs) {
    AuditReport report;
    report.condition = Condition::A2;
    if (pairs.empty()) {
        report.message = "empty sample grid";
        return report;
    }
    double worst = -1.0;
    std::pair<double, double> where{};
    for (const auto &[s, t] : pairs) {
        const double v = std::abs(eval(kernel, s, t));
        if (v > worst) {
            worst = v;
            where = {s, t};
        }
    }
    report.stats.n_trials = static_cast<int>(pairs.size());
    report.stats.worst_value = worst;
    report.stats.argmax_location = where.second;
    if (worst > kernel.bound() + kBoundTolerance) {
        report.verdict = Verdict::Fail;
        report.witness = Witness{{where.first}, where.second, worst};
        report.message = "kernel exceeds its declared bound " + std::to_string(kernel.bound());
    } else {
        report.verdict = Verdict::Pass;
        report.message = "sup |K| over the sample does not exceed the declared bound " + std::to_string(kernel.bound());
    }
    return report;
}

/// Tensor grid of `m` x `m` pairs over a bounded interval.
inline std::vector<std::pair<double, double>> square_grid(const Interval &interval, int m) {
    const std::vector<double> axis = uniform_grid(interval, m);
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(axis.size() * axis.size());
    for (double s : axis)
        for (double t : axis) pairs.emplace_back(s, t);
    return pairs;
}

namespace detail {

inline AuditReport audit_lebesgue(Condition condition, const KernelSpec &kernel, const PointSampler &sampler,
                                  int grid_size, int trials, std::uint64_t seed, double threshold) {
    if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
    AuditReport report;
    report.condition = condition;
    report.stats.worst_value = 0.0;
    std::optional<Witness> worst;
    for (int trial = 0; trial < trials; ++trial) {
        KeyedStream rng(seed, static_cast<std::uint64_t>(trial), StreamPurpose::PointSet);
        std::vector<double> raw = sampler.draw(rng);
        std::optional<GramSystem> system;
        try {
            system.emplace(kernel, PointSet(raw));
        } catch (const Error &e) {
            if (e.kind() == ErrorKind::SingularGram) {
                ++report.stats.n_skipped;
                continue;
            }
            report.verdict = Verdict::Inconclusive;
            report.message = "sampler produced an invalid point set: " + std::string(e.what());
            return report;
        }
        ++report.stats.n_trials;
        const std::vector<double> grid = lebesgue_grid(sampler.interval, system->points(), grid_size);
        const LebesgueProfile profile = lebesgue_constant(*system, grid);
        if (profile.max_value > report.stats.worst_value) {
            report.stats.worst_value = profile.max_value;
            report.stats.argmax_location = profile.argmax;
            worst = Witness{raw, profile.argmax, profile.max_value};
        }
    }
    if (report.stats.n_trials == 0) {
        report.verdict = Verdict::Inconclusive;
        report.message = "every sampled Gram matrix was numerically singular";
        return report;
    }
    if (report.stats.worst_value > threshold) {
        report.verdict = Verdict::Fail;
        report.witness = worst;
        report.message = "Lebesgue function exceeds " + std::to_string(threshold);
    } else {
        report.verdict = Verdict::Pass;
        report.message = "no Lebesgue value above " + std::to_string(threshold) + " in " +
                         std::to_string(report.stats.n_trials) + " sampled point sets";
    }
    if (report.stats.n_skipped > 0) {
        report.message += " (" + std::to_string(report.stats.n_skipped) + " ill-conditioned sets skipped)";
    }
    return report;
}

}  // namespace detail

/// Sampled check of (A4): max Lebesgue value over grid + midpoints must stay <= 1.
inline AuditReport audit_a4(const KernelSpec &kernel, const PointSampler &sampler, int grid_size, int trials,
                            std::uint64_t seed = 1) {
    return detail::audit_lebesgue(Condition::A4, kernel, sampler, grid_size, trials, seed,
                                  1.0 + kLebesgueTolerance);
}

/// Estimates the relaxed constant beta_n (as stats.worst_value) and fails if it exceeds `beta_bound`.
inline AuditReport audit_relaxed_a4(const KernelSpec &kernel, const PointSampler &sampler, int grid_size,
                                    int trials, double beta_bound, std::uint64_t seed = 1) {
    return detail::audit_lebesgue(Condition::RelaxedA4, kernel, sampler, grid_size, trials, seed,
                                  beta_bound + kLebesgueTolerance);
}

/// Threshold below which the Schur complement of the one-point extension is degenerate.
inline constexpr double kDegenerateSchur = 1e-14;

/// Coefficients K[x̄]^{-1} (y, b) for x̄ = x ∪ {t_new}, computed from the
/// factorization of K[x] through the Schur complement p.
inline Vector extension_coefficients(const GramSystem &system, const Vector &y, double t_new, double b) {
    if (system.points().contains(t_new)) {
        throw Error(ErrorKind::InvalidArgument, "extension point coincides with a sample point");
    }
    const Vector column = system.kx_column(t_new);  // K_x(t_new)
    const Vector row = system.kx_row(t_new);        // K^x(t_new)
    const Vector base = system.solve(y);
    const Vector cardinal = system.solve(column);
    const double p = system.kernel().value(t_new, t_new) - row.dot(cardinal);
    if (std::abs(p) < kDegenerateSchur) {
        throw Error(ErrorKind::DegenerateSchur,
                    "Schur complement " + std::to_string(p) + " of the extended Gram matrix is numerically zero");
    }
    const double q = row.dot(base) - b;
    Vector out(system.size() + 1);
    out.head(system.size()) = base + (q / p) * cardinal;
    out(system.size()) = -q / p;
    return out;
}

/// ||K[x̄]^{-1} (y, b)||_1, the norm of the interpolant on the extended point set.
inline double extension_norm(const GramSystem &system, const Vector &y, double t_new, double b) {
    return extension_coefficients(system, y, t_new, b).lpNorm<1>();
}

}  // namespace rkbs
