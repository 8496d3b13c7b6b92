#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "rkbs/error.hpp"
#include "rkbs/gram.hpp"
#include "rkbs/interpolation.hpp"
#include "rkbs/kernels.hpp"
#include "rkbs/random.hpp"
#include "rkbs/solvers.hpp"

namespace rkbs {

enum class NoiseKind { Gaussian, Uniform, PepperSauce };

/// Additive output noise. `parameter` is the variance (Gaussian), the half
/// width (Uniform) or the magnitude (PepperSauce). For pepper noise,
/// `fraction` is the probability that a sample is corrupted at all; 1 means
/// every sample receives +-magnitude.
struct NoiseModel {
    NoiseKind kind = NoiseKind::Gaussian;
    double parameter = 0.01;
    double fraction = 1.0;

    static NoiseModel gaussian(double variance = 0.01) { return {NoiseKind::Gaussian, variance, 1.0}; }
    static NoiseModel uniform(double halfwidth = 0.1) { return {NoiseKind::Uniform, halfwidth, 1.0}; }
    static NoiseModel pepper(double magnitude = 0.1, double fraction = 1.0) {
        return {NoiseKind::PepperSauce, magnitude, fraction};
    }

    std::string name() const {
        switch (kind) {
            case NoiseKind::Gaussian: return "gaussian";
            case NoiseKind::Uniform: return "uniform";
            case NoiseKind::PepperSauce: return "pepper";
        }
        return "?";
    }

    void validate() const {
        if (!(parameter >= 0.0) || !std::isfinite(parameter)) {
            throw Error(ErrorKind::InvalidArgument, "noise parameter must be finite and >= 0");
        }
        if (!(fraction >= 0.0 && fraction <= 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "pepper fraction must lie in [0, 1]");
        }
    }
};

inline std::vector<double> default_mu_grid() {
    std::vector<double> grid;
    for (int j = -7; j <= 1; ++j) grid.push_back(std::pow(10.0, j));
    return grid;
}

struct ExperimentConfig {
    int n_points = 200;
    double interval_lo = -1.0;
    double interval_hi = 1.0;
    KernelSpec kernel = KernelSpec::exponential();
    NoiseModel noise = NoiseModel::gaussian();
    int trials = 50;
    std::vector<double> mu_grid = default_mu_grid();
    std::uint64_t master_seed = 1;
    int quadrature_nodes = 2001;
    LassoConfig lasso{};
    /// Worker threads for independent trials; results do not depend on it.
    int threads = 1;

    void validate() const {
        if (n_points < 2) throw Error(ErrorKind::InvalidArgument, "n_points must be >= 2");
        if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
        if (!(interval_lo < interval_hi)) throw Error(ErrorKind::InvalidArgument, "empty experiment interval");
        if (mu_grid.empty()) throw Error(ErrorKind::InvalidArgument, "mu grid must be nonempty");
        for (double mu : mu_grid) {
            if (!(mu >= 0.0)) throw Error(ErrorKind::NegativeMu, "mu grid entries must be >= 0");
        }
        if (quadrature_nodes < 2) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least 2 nodes");
        if (threads < 1) throw Error(ErrorKind::InvalidArgument, "threads must be >= 1");
        noise.validate();
    }
};

/// One point of a regularization path.
struct PathPoint {
    double mu = 0.0;
    double l2_error = 0.0;
    int sparsity = 0;
    bool converged = true;
};

/// Result of one method on one trial at its error-minimizing mu.
struct MethodRecord {
    double l2_error = 0.0;
    double squared_error = 0.0;
    int sparsity = 0;
    double chosen_mu = 0.0;
    bool converged = true;
    std::vector<PathPoint> path;
};

struct TrialRecord {
    int trial_index = 0;
    MethodRecord rkhs;
    MethodRecord rkbs;
};

/// Aggregates over trials. `mean_error` is the mean squared L2 distance to the
/// target, the quantity tabulated in the reference comparison; `mean_l2_error`
/// is the mean of the distances themselves.
struct MethodSummary {
    double mean_error = 0.0;
    double mean_l2_error = 0.0;
    double mean_sparsity = 0.0;
    int max_sparsity = 0;
};

struct TrialSummary {
    ExperimentConfig config;
    std::vector<TrialRecord> trials;
    MethodSummary rkhs;
    MethodSummary rkbs;
    std::vector<std::string> notes;
};

/// Five-bump target: sum of e^{-|t - c|} for c in {-1, -0.8, 0, 0.8, 1}.
/// Mirrored terms are paired so that target(-t) == target(t) bit for bit.
inline double target_function(double t) {
    const double outer = std::exp(-std::abs(t + 1.0)) + std::exp(-std::abs(t - 1.0));
    const double inner = std::exp(-std::abs(t + 0.8)) + std::exp(-std::abs(t - 0.8));
    return (outer + inner) + std::exp(-std::abs(t));
}

inline Vector generate_noise(const NoiseModel &model, int n, KeyedStream &stream,
                             KeyedStream *corruption = nullptr) {
    model.validate();
    Vector e(n);
    switch (model.kind) {
        case NoiseKind::Gaussian: {
            const double sd = std::sqrt(model.parameter);
            for (int i = 0; i < n; ++i) e(i) = sd * stream.normal();
            break;
        }
        case NoiseKind::Uniform:
            for (int i = 0; i < n; ++i) e(i) = stream.uniform(-model.parameter, model.parameter);
            break;
        case NoiseKind::PepperSauce:
            for (int i = 0; i < n; ++i) {
                const double value = stream.coin() ? model.parameter : -model.parameter;
                const bool hit = model.fraction >= 1.0 || (corruption && corruption->uniform01() < model.fraction);
                e(i) = hit ? value : 0.0;
            }
            break;
    }
    return e;
}

/// Composite-trapezoid weights for `nodes` uniform nodes on [a, b].
inline Vector trapezoid_weights(double a, double b, int nodes) {
    if (nodes < 2) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least 2 nodes");
    const double h = (b - a) / (nodes - 1);
    Vector w = Vector::Constant(nodes, h);
    w(0) *= 0.5;
    w(nodes - 1) *= 0.5;
    return w;
}

inline std::vector<double> linspace(double a, double b, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = a;
        return out;
    }
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
    out.back() = b;
    return out;
}

/// sqrt of the trapezoid rule for (f - g)^2 over [a, b].
inline double l2_distance(const std::function<double(double)> &f, const std::function<double(double)> &g, double a,
                          double b, int nodes) {
    const Vector w = trapezoid_weights(a, b, nodes);
    const std::vector<double> t = linspace(a, b, nodes);
    double sum = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double d = f(t[static_cast<std::size_t>(i)]) - g(t[static_cast<std::size_t>(i)]);
        sum += w(i) * d * d;
    }
    return std::sqrt(sum);
}

/// L2([a,b]) distance between an expansion and the target function.
inline double l2_error(const ExpansionFunction &f, double a, double b, int nodes) {
    return l2_distance([&f](double t) { return evaluate(f, t); }, target_function, a, b, nodes);
}

namespace detail {

/// Quantities shared by every trial of a configuration.
struct ExperimentSetup {
    PointSet x;
    GramSystem system;
    Vector clean_values;
    Matrix quadrature_eval;  ///< (i, j) = K(x_j, q_i)
    Vector quadrature_weights;
    Vector target_at_nodes;

    explicit ExperimentSetup(const ExperimentConfig &config)
        : x(linspace(config.interval_lo, config.interval_hi, config.n_points)), system(config.kernel, x) {
        clean_values.resize(config.n_points);
        for (int i = 0; i < config.n_points; ++i) clean_values(i) = target_function(x[static_cast<std::size_t>(i)]);
        const std::vector<double> q = linspace(config.interval_lo, config.interval_hi, config.quadrature_nodes);
        quadrature_eval = evaluation_matrix(config.kernel, x, q);
        quadrature_weights = trapezoid_weights(config.interval_lo, config.interval_hi, config.quadrature_nodes);
        target_at_nodes.resize(config.quadrature_nodes);
        for (int i = 0; i < config.quadrature_nodes; ++i) target_at_nodes(i) = target_function(q[static_cast<std::size_t>(i)]);
    }

    double l2_error(const Vector &c) const {
        const Vector d = quadrature_eval * c - target_at_nodes;
        return std::sqrt(quadrature_weights.dot(d.cwiseProduct(d)));
    }
};

inline void choose_best(MethodRecord &record) {
    double best = std::numeric_limits<double>::infinity();
    for (const PathPoint &p : record.path) {
        if (p.l2_error < best) {
            best = p.l2_error;
            record.l2_error = p.l2_error;
            record.squared_error = p.l2_error * p.l2_error;
            record.sparsity = p.sparsity;
            record.chosen_mu = p.mu;
            record.converged = p.converged;
        }
    }
}

inline TrialRecord run_trial(const ExperimentConfig &config, const ExperimentSetup &setup, int trial_index) {
    const auto index = static_cast<std::uint64_t>(trial_index);
    KeyedStream noise_stream(config.master_seed, index, StreamPurpose::Noise);
    KeyedStream corruption_stream(config.master_seed, index, StreamPurpose::Corruption);
    const Vector y = setup.clean_values + generate_noise(config.noise, config.n_points, noise_stream, &corruption_stream);

    TrialRecord record;
    record.trial_index = trial_index;

    // Large to small mu so each lasso solve warm-starts from the sparser neighbour.
    std::vector<std::size_t> order(config.mu_grid.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return config.mu_grid[a] > config.mu_grid[b]; });

    record.rkhs.path.resize(config.mu_grid.size());
    record.rkbs.path.resize(config.mu_grid.size());
    std::optional<Vector> warm;
    for (std::size_t k : order) {
        const double mu = config.mu_grid[k];
        LassoConfig lasso = config.lasso;
        lasso.mu = mu;
        const FitResult sparse = lasso_gram(setup.system, y, lasso, warm);
        warm = sparse.coefficients.values;
        record.rkbs.path[k] = {mu, setup.l2_error(sparse.coefficients.values), sparse.sparsity, sparse.converged};

        const FitResult dense = ridge_gram(setup.system, y, mu, config.lasso.sparsity_threshold);
        record.rkhs.path[k] = {mu, setup.l2_error(dense.coefficients.values), dense.sparsity, true};
    }
    choose_best(record.rkhs);
    choose_best(record.rkbs);
    return record;
}

inline MethodSummary summarize(const std::vector<TrialRecord> &trials, MethodRecord TrialRecord::*method) {
    MethodSummary s;
    for (const TrialRecord &t : trials) {
        const MethodRecord &m = t.*method;
        s.mean_error += m.squared_error;
        s.mean_l2_error += m.l2_error;
        s.mean_sparsity += m.sparsity;
        s.max_sparsity = std::max(s.max_sparsity, m.sparsity);
    }
    const double count = static_cast<double>(trials.size());
    s.mean_error /= count;
    s.mean_l2_error /= count;
    s.mean_sparsity /= count;
    return s;
}

}  // namespace detail

/// One trial: noisy samples of the target on n equally spaced points, both
/// regularization paths over the mu grid, and the mu that minimizes the L2
/// error against the true target for each method.
inline TrialRecord run_trial(const ExperimentConfig &config, int trial_index) {
    config.validate();
    const detail::ExperimentSetup setup(config);
    return detail::run_trial(config, setup, trial_index);
}

inline TrialSummary run_experiment(const ExperimentConfig &config) {
    config.validate();
    const detail::ExperimentSetup setup(config);
    TrialSummary summary;
    summary.config = config;
    summary.trials.resize(static_cast<std::size_t>(config.trials));

    const int workers = std::min(config.threads, config.trials);
    if (workers <= 1) {
        for (int i = 0; i < config.trials; ++i) summary.trials[static_cast<std::size_t>(i)] = detail::run_trial(config, setup, i);
    } else {
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int i = w; i < config.trials; i += workers) {
                        summary.trials[static_cast<std::size_t>(i)] = detail::run_trial(config, setup, i);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto &t : pool) t.join();
        for (auto &e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    summary.rkhs = detail::summarize(summary.trials, &TrialRecord::rkhs);
    summary.rkbs = detail::summarize(summary.trials, &TrialRecord::rkbs);
    for (const TrialRecord &t : summary.trials) {
        for (const PathPoint &p : t.rkhs.path) {
            if (p.sparsity != config.n_points) {
                summary.notes.push_back("trial " + std::to_string(t.trial_index) + ": ridge solution at mu=" +
                                        std::to_string(p.mu) + " has " + std::to_string(p.sparsity) + " nonzeros");
            }
        }
        for (const PathPoint &p : t.rkbs.path) {
            if (!p.converged) {
                summary.notes.push_back("trial " + std::to_string(t.trial_index) + ": lasso at mu=" +
                                        std::to_string(p.mu) + " stopped before reaching the KKT tolerance");
            }
        }
    }
    return summary;
}

inline const char *experiment_csv_header() { return "noise,method,mean_error,mean_sparsity,max_sparsity,trials,seed"; }

/// Appends the two rows (rkhs, rkbs) of one summary.
inline void write_csv_rows(std::ostream &os, const TrialSummary &summary) {
    char line[256];
    const auto row = [&](const char *method, const MethodSummary &m) {
        std::snprintf(line, sizeof line, "%s,%s,%.6e,%.4f,%d,%d,%llu\n", summary.config.noise.name().c_str(), method,
                      m.mean_error, m.mean_sparsity, m.max_sparsity, summary.config.trials,
                      static_cast<unsigned long long>(summary.config.master_seed));
        os << line;
    };
    row("rkhs", summary.rkhs);
    row("rkbs", summary.rkbs);
}

inline void write_csv(std::ostream &os, const std::vector<TrialSummary> &summaries) {
    os << experiment_csv_header() << '\n';
    for (const TrialSummary &s : summaries) write_csv_rows(os, s);
}

}  // namespace rkbs
