#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"

#include "rkbs/admissibility.hpp"
#include "rkbs/error.hpp"
#include "rkbs/experiment.hpp"
#include "rkbs/interpolation.hpp"
#include "rkbs/kernels.hpp"
#include "rkbs/solvers.hpp"

// JSON schemas for the CLI:
//   kernel:     {"family": "<name>", "params": {...}, "domain": {"lo", "hi", "lo_closed", "hi_closed"}}
//               family names: exponential, brownian_bridge, gaussian (sigma), inverse_multiquadric (beta),
//               wendland_d3k0, wendland_d3k1, bspline (order), sinc. Infinite endpoints are null.
//   audit:      {"condition", "verdict", "witness": {"points", "t", "value"} | null, "stats": {...}, "message"}
//   expansion:  {"kernel", "points", "coefficients", "side"}
//   fit:        {"method", "mu", "objective", "kkt_residual", "sparsity", "iterations", "converged", "function"}
namespace rkbs {

using json = nlohmann::json;

namespace detail {

inline json endpoint(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double read_endpoint(const json &j, const char *key, double fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<double>();
}

}  // namespace detail

inline json to_json(const Interval &i) {
    return {{"lo", detail::endpoint(i.lo)},
            {"hi", detail::endpoint(i.hi)},
            {"lo_closed", i.lo_closed},
            {"hi_closed", i.hi_closed}};
}

inline Interval interval_from_json(const json &j) {
    Interval i;
    i.lo = detail::read_endpoint(j, "lo", -std::numeric_limits<double>::infinity());
    i.hi = detail::read_endpoint(j, "hi", std::numeric_limits<double>::infinity());
    i.lo_closed = std::isfinite(i.lo) && j.value("lo_closed", false);
    i.hi_closed = std::isfinite(i.hi) && j.value("hi_closed", false);
    return i;
}

inline json to_json(const KernelSpec &k) {
    json params = json::object();
    if (const auto *g = std::get_if<family::Gaussian>(&k.family())) params["sigma"] = g->sigma;
    if (const auto *m = std::get_if<family::InverseMultiquadric>(&k.family())) params["beta"] = m->beta;
    if (const auto *b = std::get_if<family::BSpline>(&k.family())) params["order"] = b->order;
    const Admissibility a = k.admissibility();
    return {{"family", k.name()},
            {"params", params},
            {"domain", to_json(k.domain())},
            {"admissibility",
             {{"a1", to_string(a.a1)}, {"a2", to_string(a.a2)}, {"a3", to_string(a.a3)}, {"a4", to_string(a.a4)}}}};
}

inline KernelSpec kernel_from_json(const json &j) {
    if (!j.is_object() || !j.contains("family")) {
        throw Error(ErrorKind::InvalidArgument, "kernel JSON must be an object with a \"family\" field");
    }
    const std::string name = j.at("family").get<std::string>();
    const json params = j.value("params", json::object());
    std::optional<Interval> domain;
    if (j.contains("domain") && !j.at("domain").is_null()) domain = interval_from_json(j.at("domain"));

    Family f;
    if (name == "exponential") f = family::Exponential{};
    else if (name == "brownian_bridge") f = family::BrownianBridge{};
    else if (name == "gaussian") f = family::Gaussian{params.value("sigma", 1.0)};
    else if (name == "inverse_multiquadric") f = family::InverseMultiquadric{params.value("beta", 0.5)};
    else if (name == "wendland_d3k0") f = family::WendlandD3K0{};
    else if (name == "wendland_d3k1") f = family::WendlandD3K1{};
    else if (name == "bspline") f = family::BSpline{params.value("order", 4)};
    else if (name == "sinc") f = family::Sinc{};
    else throw Error(ErrorKind::InvalidArgument, "unknown kernel family \"" + name + "\"");
    return KernelSpec(f, domain);
}

/// Accepts either a bare family name (default parameters) or a JSON object.
inline KernelSpec parse_kernel(const std::string &text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error &e) {
            throw Error(ErrorKind::InvalidArgument, std::string("malformed kernel JSON: ") + e.what());
        }
        return kernel_from_json(j);
    }
    return kernel_from_json(json{{"family", text}});
}

inline json to_json(const AuditReport &r) {
    json witness = nullptr;
    if (r.witness) {
        witness = {{"points", r.witness->points},
                   {"t", r.witness->t ? json(*r.witness->t) : json(nullptr)},
                   {"value", r.witness->value}};
    }
    return {{"condition", to_string(r.condition)},
            {"verdict", to_string(r.verdict)},
            {"witness", witness},
            {"stats",
             {{"n_trials", r.stats.n_trials},
              {"n_skipped", r.stats.n_skipped},
              {"worst_value", detail::endpoint(r.stats.worst_value)},
              {"argmax_location",
               r.stats.argmax_location ? json(*r.stats.argmax_location) : json(nullptr)}}},
            {"message", r.message}};
}

inline std::vector<double> to_std(const Vector &v) { return {v.data(), v.data() + v.size()}; }

inline json to_json(const ExpansionFunction &f) {
    const auto pts = f.points.values();
    return {{"kernel", to_json(f.kernel)},
            {"points", std::vector<double>(pts.begin(), pts.end())},
            {"coefficients", to_std(f.coef())},
            {"side", to_string(f.side())}};
}

inline ExpansionFunction expansion_from_json(const json &j) {
    const auto pts = j.at("points").get<std::vector<double>>();
    const auto coef = j.at("coefficients").get<std::vector<double>>();
    const std::string side = j.value("side", "left");
    if (side != "left" && side != "right") throw Error(ErrorKind::InvalidArgument, "side must be left or right");
    Vector c = Eigen::Map<const Vector>(coef.data(), static_cast<Eigen::Index>(coef.size()));
    return ExpansionFunction(kernel_from_json(j.at("kernel")), PointSet(pts),
                             CoefficientVector{c, side == "left" ? Side::Left : Side::Right});
}

inline json to_json(const FitResult &r) {
    return {{"objective", r.objective},
            {"kkt_residual", r.kkt_residual},
            {"sparsity", r.sparsity},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"coefficients", to_std(r.coefficients.values)}};
}

inline json to_json(const Matrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const MethodRecord &m) {
    json path = json::array();
    for (const PathPoint &p : m.path) {
        path.push_back({{"mu", p.mu}, {"l2_error", p.l2_error}, {"sparsity", p.sparsity}, {"converged", p.converged}});
    }
    return {{"l2_error", m.l2_error},
            {"squared_error", m.squared_error},
            {"sparsity", m.sparsity},
            {"chosen_mu", m.chosen_mu},
            {"converged", m.converged},
            {"path", path}};
}

inline json to_json(const MethodSummary &s) {
    return {{"mean_error", s.mean_error},
            {"mean_l2_error", s.mean_l2_error},
            {"mean_sparsity", s.mean_sparsity},
            {"max_sparsity", s.max_sparsity}};
}

inline json to_json(const TrialSummary &s) {
    const ExperimentConfig &c = s.config;
    json trials = json::array();
    for (const TrialRecord &t : s.trials) {
        trials.push_back({{"trial_index", t.trial_index}, {"rkhs", to_json(t.rkhs)}, {"rkbs", to_json(t.rkbs)}});
    }
    json noise = {{"kind", c.noise.name()}, {"parameter", c.noise.parameter}};
    if (c.noise.kind == NoiseKind::PepperSauce) {
        noise["fraction"] = c.noise.fraction;
        noise["interpretation"] = c.noise.fraction >= 1.0
                                      ? "every sample receives an independent equiprobable +-magnitude perturbation"
                                      : "each sample is corrupted with probability `fraction` by +-magnitude";
    }
    return {{"config",
             {{"n_points", c.n_points},
              {"interval", {c.interval_lo, c.interval_hi}},
              {"points", "equally spaced, both endpoints included"},
              {"kernel", to_json(c.kernel)},
              {"noise", noise},
              {"trials", c.trials},
              {"mu_grid", c.mu_grid},
              {"master_seed", c.master_seed},
              {"quadrature_nodes", c.quadrature_nodes},
              {"mu_selection", "oracle: minimizes the L2 distance to the true target"},
              {"error_metric", "mean_error is the mean squared L2 distance; mean_l2_error averages the distance"}}},
            {"rkhs", to_json(s.rkhs)},
            {"rkbs", to_json(s.rkbs)},
            {"trials", trials},
            {"notes", s.notes}};
}

}  // namespace rkbs
