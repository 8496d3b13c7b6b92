#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "rkbs/error.hpp"
#include "rkbs/gram.hpp"
#include "rkbs/kernels.hpp"

namespace rkbs {

/// Finite kernel expansion. Left expansions sum_j c_j K(x_j, .) live in the
/// l1 space; right expansions sum_j c_j K(., x_j) live in its companion space
/// normed by the sup over the domain.
struct ExpansionFunction {
    KernelSpec kernel;
    PointSet points;
    CoefficientVector coefficients;

    ExpansionFunction(KernelSpec k, PointSet x, CoefficientVector c)
        : kernel(std::move(k)), points(std::move(x)), coefficients(std::move(c)) {
        if (static_cast<std::size_t>(coefficients.size()) != points.size()) {
            throw Error(ErrorKind::DimensionMismatch, "expansion has " + std::to_string(coefficients.size()) +
                                                          " coefficients for " + std::to_string(points.size()) +
                                                          " points");
        }
        for (double p : points.values()) require_in_domain(kernel, p);
    }

    Side side() const noexcept { return coefficients.side; }
    const Vector &coef() const noexcept { return coefficients.values; }
};

inline double evaluate(const ExpansionFunction &f, double t) {
    require_in_domain(f.kernel, t);
    const Vector &c = f.coef();
    double sum = 0.0;
    if (f.side() == Side::Left) {
        for (Eigen::Index j = 0; j < c.size(); ++j) sum += c(j) * f.kernel.value(f.points[static_cast<std::size_t>(j)], t);
    } else {
        for (Eigen::Index j = 0; j < c.size(); ++j) sum += c(j) * f.kernel.value(t, f.points[static_cast<std::size_t>(j)]);
    }
    return sum;
}

/// ||f|| in the l1 space: sum_j |c_j|.
inline double bnorm(const ExpansionFunction &f) {
    if (f.side() != Side::Left) {
        throw Error(ErrorKind::InvalidArgument, "bnorm requires a left expansion");
    }
    return f.coef().lpNorm<1>();
}

/// Companion-space norm ||c^T K[x]||_inf, valid only for kernels with a
/// proven unit Lebesgue bound; otherwise use grid_sup_norm.
inline double bsharp_norm(const ExpansionFunction &f) {
    if (f.side() != Side::Right) {
        throw Error(ErrorKind::InvalidArgument, "bsharp_norm requires a right expansion");
    }
    if (f.kernel.admissibility().a4 != Status::Proven) {
        throw Error(ErrorKind::FormulaUnavailable, "the node-maximum norm formula needs a proven unit Lebesgue "
                                                   "bound; the " + f.kernel.name() +
                                                       " kernel lacks one (use grid_sup_norm)");
    }
    const Matrix gram = GramSystem::raw_gram(f.kernel, f.points);
    return (f.coef().transpose() * gram).lpNorm<Eigen::Infinity>();
}

/// max over the grid of |f(t)|; a lower bound for the sup norm.
inline double grid_sup_norm(const ExpansionFunction &f, std::span<const double> grid) {
    double best = 0.0;
    for (double t : grid) best = std::max(best, std::abs(evaluate(f, t)));
    return best;
}

/// The interpolant sum_j c_j K(x_j, .) with c = K[x]^{-1} y. It has minimal l1
/// norm among all interpolants when the kernel satisfies the unit Lebesgue
/// bound, and is within a factor beta_n of minimal otherwise.
inline ExpansionFunction min_norm_interpolant_b(const GramSystem &system, const Vector &y) {
    return ExpansionFunction(system.kernel(), system.points(), CoefficientVector{system.solve(y), Side::Left});
}

/// The interpolant f(t) = y^T K[x]^{-1} K_x(t), stored as a right expansion with
/// coefficients K[x]^{-T} y. Its companion norm equals ||y||_inf.
inline ExpansionFunction min_norm_interpolant_bsharp(const GramSystem &system, const Vector &y) {
    if (system.kernel().admissibility().a4 != Status::Proven) {
        throw Error(ErrorKind::FormulaUnavailable,
                    "minimal-norm interpolation in the companion space needs a proven unit Lebesgue bound");
    }
    return ExpansionFunction(system.kernel(), system.points(),
                             CoefficientVector{system.solve_transposed(y), Side::Right});
}

/// <f, g> = sum_j sum_k a_j b_k K(s_j, t_k) for left f and right g.
inline double bilinear_form(const ExpansionFunction &f, const ExpansionFunction &g) {
    if (f.side() != Side::Left || g.side() != Side::Right) {
        throw Error(ErrorKind::InvalidArgument, "bilinear_form expects (left, right) expansions");
    }
    if (!(f.kernel == g.kernel)) {
        throw Error(ErrorKind::KernelMismatch,
                    "bilinear form of expansions over different kernels (" + f.kernel.name() + ", " + g.kernel.name() + ")");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < f.points.size(); ++j) {
        double inner = 0.0;
        for (std::size_t k = 0; k < g.points.size(); ++k) {
            inner += g.coef()(static_cast<Eigen::Index>(k)) * f.kernel.value(f.points[j], g.points[k]);
        }
        sum += f.coef()(static_cast<Eigen::Index>(j)) * inner;
    }
    return sum;
}

/// K(s, .) as a one-term left expansion.
inline ExpansionFunction left_section(const KernelSpec &kernel, double s) {
    return ExpansionFunction(kernel, PointSet{s}, CoefficientVector{Vector::Ones(1), Side::Left});
}

/// K(., t) as a one-term right expansion.
inline ExpansionFunction right_section(const KernelSpec &kernel, double t) {
    return ExpansionFunction(kernel, PointSet{t}, CoefficientVector{Vector::Ones(1), Side::Right});
}

}  // namespace rkbs
