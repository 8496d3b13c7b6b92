#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "rkbs/error.hpp"
#include "rkbs/gram.hpp"

namespace rkbs {

struct LassoConfig {
    double mu = 0.0;
    int max_iter = 50000;
    double tol = 1e-8;                 ///< KKT residual accepted as converged
    double sparsity_threshold = 1e-8;  ///< relative to max(1, ||c||_inf)
    /// Weight the loss by 1/n, i.e. minimize (1/n)||K c - y||^2 + mu ||c||_1.
    bool average_loss = false;
    /// FISTA iterations between active-set refinements; 0 runs plain FISTA.
    int refine_interval = 50;
    /// Keep the objective value after every iteration in FitResult::objective_trace.
    bool record_objective = false;
};

struct FitResult {
    CoefficientVector coefficients;
    double objective = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
    int sparsity = 0;
    bool converged = false;
    std::vector<double> objective_trace;
};

/// sign(v_j) max(|v_j| - tau, 0), componentwise.
inline Vector soft_threshold(const Vector &v, double tau) {
    if (tau < 0.0) throw Error(ErrorKind::InvalidArgument, "soft threshold requires tau >= 0");
    Vector out(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        const double a = std::abs(v(j)) - tau;
        out(j) = a > 0.0 ? std::copysign(a, v(j)) : 0.0;
    }
    return out;
}

/// Number of coefficients with |c_j| > threshold * max(1, ||c||_inf).
inline int count_nonzeros(const Vector &c, double threshold) {
    const double scale = std::max(1.0, c.size() ? c.lpNorm<Eigen::Infinity>() : 0.0);
    int count = 0;
    for (Eigen::Index j = 0; j < c.size(); ++j) count += std::abs(c(j)) > threshold * scale ? 1 : 0;
    return count;
}

/// w ||K c - y||^2 + mu ||c||_1
inline double lasso_objective(const Matrix &gram, const Vector &y, double mu, const Vector &c, double loss_weight = 1.0) {
    return loss_weight * (gram * c - y).squaredNorm() + mu * c.lpNorm<1>();
}

namespace detail {

/// Largest KKT violation for w||Kc - y||^2 + mu||c||_1 given the smooth gradient.
inline double kkt_from_gradient(const Vector &grad, const Vector &c, double mu) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < c.size(); ++j) {
        const double v = c(j) != 0.0 ? std::abs(grad(j) + std::copysign(mu, c(j))) : std::max(std::abs(grad(j)) - mu, 0.0);
        worst = std::max(worst, v);
    }
    return worst;
}

inline void check_lasso_inputs(const GramSystem &system, const Vector &y, double mu) {
    if (y.size() != system.size()) {
        throw Error(ErrorKind::DimensionMismatch, "data vector has length " + std::to_string(y.size()) +
                                                      ", expected " + std::to_string(system.size()));
    }
    if (!(mu >= 0.0)) throw Error(ErrorKind::NegativeMu, "regularization weight must be >= 0");
    if (system.kernel().is<family::Sinc>()) {
        throw Error(ErrorKind::UnsupportedKernel, "the sinc kernel is not injective on l1 coefficient sequences, so "
                                                  "it does not define an l1 function space to regularize in");
    }
}

/// Proximal-gradient solver for w||Kc - y||^2 + mu||c||_1 on a square Gram matrix.
///
/// Iterates monotone FISTA with constant step 1/L. Every `refine_interval`
/// iterations the current support and signs seed a feature-sign search: the
/// sign-constrained least-squares problem on the active set is solved exactly
/// and a line search over zero crossings keeps the objective nonincreasing.
/// Plain FISTA alone stalls far above a 1e-8 KKT residual on the ill-conditioned
/// Grams of smooth kernels; the exact active-set step removes that floor.
class LassoSolver {
public:
    LassoSolver(const Matrix &gram, const Vector &y, const LassoConfig &config)
        : k_(gram), y_(y), cfg_(config), w_(config.average_loss ? 1.0 / static_cast<double>(gram.rows()) : 1.0) {
        g_.noalias() = k_.transpose() * k_;
        b_.noalias() = k_.transpose() * y_;
        step_l_ = 2.0 * w_ * largest_eigenvalue(g_) * 1.0001;
        if (!(step_l_ > 0.0)) step_l_ = 1.0;
    }

    FitResult run(std::optional<Vector> initial) {
        const auto n = k_.rows();
        FitResult result;
        Vector x = initial ? *initial : Vector::Zero(n);
        double fx = objective(x);
        if (cfg_.record_objective) result.objective_trace.push_back(fx);

        double kkt = kkt_residual(x);
        int iter = 0;
        if (kkt > cfg_.tol) {
            Vector z = x;
            Vector x_prev = x;
            double t = 1.0;
            const double tau = cfg_.mu;
            while (iter < cfg_.max_iter) {
                ++iter;
                Vector u = soft_threshold(z - smooth_gradient_fast(z) / step_l_, tau / step_l_);
                double fu = objective(u);
                if (fu <= fx) {
                    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
                    x_prev = x;
                    x = std::move(u);
                    fx = fu;
                    z = x + ((t - 1.0) / t_next) * (x - x_prev);
                    t = t_next;
                } else {
                    // Accelerated candidate rejected: plain proximal step from x.
                    Vector gx = smooth_gradient_fast(x);
                    for (int backtrack = 0; backtrack < 60; ++backtrack) {
                        u = soft_threshold(x - gx / step_l_, tau / step_l_);
                        fu = objective(u);
                        if (fu <= fx) break;
                        step_l_ *= 2.0;
                    }
                    if (fu <= fx) {
                        x = std::move(u);
                        fx = fu;
                    }
                    x_prev = x;
                    z = x;
                    t = 1.0;
                }
                const bool refine_now = cfg_.refine_interval > 0 && iter % cfg_.refine_interval == 0;
                if (refine_now) {
                    if (auto refined = feature_sign(x, fx)) {
                        x = std::move(refined->first);
                        fx = refined->second;
                        x_prev = x;
                        z = x;
                        t = 1.0;
                    }
                }
                if (cfg_.record_objective) result.objective_trace.push_back(fx);
                if (refine_now || iter % 10 == 0 || iter == cfg_.max_iter) {
                    kkt = kkt_residual(x);
                    if (kkt <= cfg_.tol) break;
                }
            }
        }

        result.coefficients = CoefficientVector{x, Side::Left};
        result.objective = objective(x);
        result.kkt_residual = kkt_residual(x);
        result.iterations = iter;
        result.converged = result.kkt_residual <= cfg_.tol;
        result.sparsity = count_nonzeros(x, cfg_.sparsity_threshold);
        return result;
    }

    double objective(const Vector &c) const { return lasso_objective(k_, y_, cfg_.mu, c, w_); }

    /// 2w K^T (K c - y) in residual form, the accurate variant used for certificates.
    Vector smooth_gradient(const Vector &c) const {
        const Vector r = k_ * c - y_;
        return 2.0 * w_ * (k_.transpose() * r);
    }

    double kkt_residual(const Vector &c) const { return kkt_from_gradient(smooth_gradient(c), c, cfg_.mu); }

private:
    Vector smooth_gradient_fast(const Vector &c) const { return 2.0 * w_ * (g_ * c - b_); }

    static double largest_eigenvalue(const Matrix &sym) {
        const auto n = sym.rows();
        if (n == 0) return 0.0;
        Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
        // Perturb away from symmetric starting vectors that could be orthogonal to the top eigenvector.
        for (Eigen::Index j = 0; j < n; ++j) v(j) *= 1.0 + 1e-3 * static_cast<double>(j % 7);
        v.normalize();
        double lambda = 0.0;
        for (int it = 0; it < 100; ++it) {
            Vector w = sym * v;
            const double next = v.dot(w);
            const double norm = w.norm();
            if (norm == 0.0) return 0.0;
            v = w / norm;
            if (std::abs(next - lambda) <= 1e-10 * std::abs(next)) {
                lambda = next;
                break;
            }
            lambda = next;
        }
        // Rayleigh quotients approach the top eigenvalue from below; never exceed the row-sum bound.
        return std::min(std::max(lambda, 0.0), sym.cwiseAbs().rowwise().sum().maxCoeff());
    }

    /// Exact minimizer of w||K_A c - y||^2 + mu theta^T c over the active columns.
    Vector active_set_solution(const std::vector<Eigen::Index> &active, const Vector &theta) const {
        const auto n = k_.rows();
        const auto m = static_cast<Eigen::Index>(active.size());
        Matrix ka(n, m);
        for (Eigen::Index j = 0; j < m; ++j) ka.col(j) = k_.col(active[static_cast<std::size_t>(j)]);
        const Eigen::HouseholderQR<Matrix> qr(ka);
        const auto r = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
        const Vector qty = (qr.householderQ().transpose() * y_).head(m);
        const Vector shift = (cfg_.mu / (2.0 * w_)) * theta;
        // Normal equations R^T R c = R^T Q^T y - shift.
        auto solve_normal = [&](const Vector &rhs_tail, const Vector &qt) {
            Vector tmp = r.transpose().solve(rhs_tail);
            return Vector(r.solve(qt - tmp));
        };
        Vector c = solve_normal(shift, qty);
        // One step of iterative refinement on the normal equations.
        const Vector resid = ka.transpose() * (y_ - ka * c) - shift;
        c += r.solve(Vector(r.transpose().solve(resid)));
        return c;
    }

    /// objective(to) - objective(from), given resid = K from - y.
    double objective_change(const Vector &from, const Vector &to, const Vector &resid) const {
        const Vector kd = k_ * (to - from);
        double l1 = 0.0;
        for (Eigen::Index j = 0; j < from.size(); ++j) l1 += std::abs(to(j)) - std::abs(from(j));
        return w_ * kd.dot(2.0 * resid + kd) + cfg_.mu * l1;
    }

    /// Feature-sign search from x. Returns the improved iterate and its
    /// objective, or nothing if no decrease was achieved.
    std::optional<std::pair<Vector, double>> feature_sign(const Vector &x0, double f0) const {
        const auto n = k_.rows();
        Vector x = x0;
        double fx = f0;
        const double mu = cfg_.mu;
        const double inner_tol = 0.1 * cfg_.tol;
        bool improved = false;
        const int max_steps = 4 * static_cast<int>(n) + 20;
        std::vector<char> forced(static_cast<std::size_t>(n), 0);
        Vector theta_forced = Vector::Zero(n);

        for (int step = 0; step < max_steps; ++step) {
            const Vector grad = smooth_gradient(x);
            double active_violation = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (x(j) != 0.0) active_violation = std::max(active_violation, std::abs(grad(j) + std::copysign(mu, x(j))));
            }
            std::fill(forced.begin(), forced.end(), 0);
            if (active_violation <= inner_tol) {
                Eigen::Index best = -1;
                double best_mag = mu + inner_tol;
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (x(j) == 0.0 && std::abs(grad(j)) > best_mag) {
                        best_mag = std::abs(grad(j));
                        best = j;
                    }
                }
                if (best < 0) break;  // optimal
                forced[static_cast<std::size_t>(best)] = 1;
                theta_forced(best) = grad(best) > 0.0 ? -1.0 : 1.0;
            }

            std::vector<Eigen::Index> active;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (x(j) != 0.0 || forced[static_cast<std::size_t>(j)]) active.push_back(j);
            }
            if (active.empty()) break;
            const auto m = static_cast<Eigen::Index>(active.size());
            Vector theta(m);
            Vector start(m);
            for (Eigen::Index j = 0; j < m; ++j) {
                const Eigen::Index idx = active[static_cast<std::size_t>(j)];
                start(j) = x(idx);
                theta(j) = x(idx) != 0.0 ? (x(idx) > 0.0 ? 1.0 : -1.0) : theta_forced(idx);
            }
            const Vector target = active_set_solution(active, theta);
            if (!target.allFinite()) break;

            // Candidates: the Newton point and every zero crossing along the segment.
            std::vector<double> steps{1.0};
            for (Eigen::Index j = 0; j < m; ++j) {
                if (start(j) != 0.0 && start(j) * target(j) < 0.0) steps.push_back(start(j) / (start(j) - target(j)));
            }
            // Objective changes are compared in difference form: near the optimum
            // they fall below the rounding of the objective value itself.
            const Vector resid = k_ * x - y_;
            Vector best_x = x;
            double best_delta = 0.0;
            for (double s : steps) {
                Vector cand = x;
                for (Eigen::Index j = 0; j < m; ++j) {
                    const Eigen::Index idx = active[static_cast<std::size_t>(j)];
                    cand(idx) = start(j) + s * (target(j) - start(j));
                }
                // Coordinates at their crossing become exact zeros.
                for (Eigen::Index j = 0; j < m; ++j) {
                    if (start(j) != 0.0 && start(j) * target(j) < 0.0 && start(j) / (start(j) - target(j)) == s) {
                        cand(active[static_cast<std::size_t>(j)]) = 0.0;
                    }
                }
                const double delta = objective_change(x, cand, resid);
                if (delta < best_delta) {
                    best_delta = delta;
                    best_x = std::move(cand);
                }
            }
            if (!(best_delta < 0.0)) break;
            x = std::move(best_x);
            fx += best_delta;
            improved = true;
        }
        if (!improved) return std::nullopt;
        return std::make_pair(std::move(x), fx);
    }

    const Matrix &k_;
    const Vector &y_;
    LassoConfig cfg_;
    double w_;
    Matrix g_;
    Vector b_;
    double step_l_ = 1.0;
};

}  // namespace detail

/// Maximum violation of the subgradient optimality conditions of
/// ||K c - y||^2 + mu ||c||_1 (times `loss_weight` on the loss term).
inline double kkt_residual(const GramSystem &system, const Vector &y, double mu, const Vector &c,
                           double loss_weight = 1.0) {
    detail::check_lasso_inputs(system, y, mu);
    if (c.size() != system.size()) throw Error(ErrorKind::DimensionMismatch, "coefficient length mismatch");
    const Matrix &k = system.gram();
    const Vector grad = 2.0 * loss_weight * (k.transpose() * (k * c - y));
    return detail::kkt_from_gradient(grad, c, mu);
}

/// argmin_c ||K[x] c - y||^2 + mu ||c||_1, certified by the KKT residual.
/// If max_iter runs out the best iterate is returned with converged = false.
inline FitResult lasso_gram(const GramSystem &system, const Vector &y, const LassoConfig &config,
                            std::optional<Vector> initial = std::nullopt) {
    detail::check_lasso_inputs(system, y, config.mu);
    if (config.max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be >= 1");
    if (!(config.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
    if (initial && initial->size() != system.size()) {
        throw Error(ErrorKind::DimensionMismatch, "initial iterate length mismatch");
    }
    detail::LassoSolver solver(system.gram(), y, config);
    return solver.run(std::move(initial));
}

/// h = (K[x] + mu I)^{-1} y, the coefficient vector of the RKHS regularization network.
/// The reported objective is ||K h - y||^2 + mu h^T K h and kkt_residual is
/// the linear-system residual ||(K + mu I) h - y||_inf.
inline FitResult ridge_gram(const GramSystem &system, const Vector &y, double mu,
                            double sparsity_threshold = 1e-8) {
    detail::check_lasso_inputs(system, y, mu);
    const Matrix &k = system.gram();
    Matrix shifted = k;
    shifted.diagonal().array() += mu;
    const Eigen::PartialPivLU<Matrix> lu(shifted);
    if (!(lu.rcond() >= kSingularRcond)) {
        throw Error(ErrorKind::SingularShifted, "K[x] + mu I is numerically singular (rcond estimate " +
                                                    std::to_string(lu.rcond()) + ")");
    }
    const Vector h = lu.solve(y);
    FitResult result;
    result.coefficients = CoefficientVector{h, Side::Left};
    const Vector kh = k * h;
    result.objective = (kh - y).squaredNorm() + mu * h.dot(kh);
    result.kkt_residual = (shifted * h - y).lpNorm<Eigen::Infinity>();
    result.iterations = 1;
    result.converged = true;
    result.sparsity = count_nonzeros(h, sparsity_threshold);
    return result;
}

}  // namespace rkbs
