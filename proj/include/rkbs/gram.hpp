#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <string>

#include "rkbs/error.hpp"
#include "rkbs/kernels.hpp"
#include "rkbs/point_set.hpp"

namespace rkbs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Below this reciprocal condition number a Gram matrix is treated as singular.
inline constexpr double kSingularRcond = 1e-14;

/// Which kernel slot the sample points occupy in an expansion.
///   Left:  f = sum_j c_j K(x_j, .)   (the l1 space)
///   Right: g = sum_j c_j K(., x_j)   (its sup-norm companion)
enum class Side { Left, Right };

inline const char *to_string(Side side) { return side == Side::Left ? "left" : "right"; }

struct CoefficientVector {
    Vector values;
    Side side = Side::Left;

    Eigen::Index size() const { return values.size(); }
};

/// Point set, Gram matrix K[x] with entry (j,k) = K(x_k, x_j), and its LU factorization.
class GramSystem {
public:
    GramSystem(KernelSpec kernel, PointSet points) : kernel_(std::move(kernel)), points_(std::move(points)) {
        const auto n = static_cast<Eigen::Index>(points_.size());
        gram_ = raw_gram(kernel_, points_);
        lu_.compute(gram_);
        rcond_ = lu_.rcond();
        if (!(rcond_ >= kSingularRcond)) {
            std::ostringstream os;
            os.precision(6);
            os << "Gram matrix of the " << kernel_.name() << " kernel on " << n
               << " points is numerically singular (rcond estimate " << rcond_ << ", minimum point spacing "
               << points_.min_spacing() << ")";
            throw Error(ErrorKind::SingularGram, os.str());
        }
    }

    /// K[x] without factorization or conditioning checks.
    static Matrix raw_gram(const KernelSpec &kernel, const PointSet &x) {
        const auto n = static_cast<Eigen::Index>(x.size());
        for (double p : x.values()) require_in_domain(kernel, p);
        Matrix g(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index j = 0; j < n; ++j) {
                g(j, k) = kernel.value(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(j)]);
            }
        }
        return g;
    }

    const KernelSpec &kernel() const noexcept { return kernel_; }
    const PointSet &points() const noexcept { return points_; }
    const Matrix &gram() const noexcept { return gram_; }
    const Eigen::PartialPivLU<Matrix> &factorization() const noexcept { return lu_; }
    double rcond_estimate() const noexcept { return rcond_; }
    Eigen::Index size() const noexcept { return gram_.rows(); }

    /// K_x(t) = (K(t, x_j))_j
    Vector kx_column(double t) const {
        require_in_domain(kernel_, t);
        Vector v(size());
        for (Eigen::Index j = 0; j < size(); ++j) v(j) = kernel_.value(t, points_[j]);
        return v;
    }

    /// K^x(t) = (K(x_j, t))_j
    Vector kx_row(double t) const {
        require_in_domain(kernel_, t);
        Vector v(size());
        for (Eigen::Index j = 0; j < size(); ++j) v(j) = kernel_.value(points_[j], t);
        return v;
    }

    /// Solves K[x] c = y.
    Vector solve(const Vector &y) const {
        check_length(y);
        return lu_.solve(y);
    }

    /// Solves K[x]^T c = y.
    Vector solve_transposed(const Vector &y) const {
        check_length(y);
        return lu_.transpose().solve(y);
    }

    /// K[x]^{-1} K_x(t): the interpolation weights of the kernel basis at t.
    /// At a node x_j this is exactly e_j, returned without a solve.
    Vector cardinal_coefficients(double t) const {
        Vector rhs = kx_column(t);
        if (const auto j = points_.index_of(t)) return Vector::Unit(size(), static_cast<Eigen::Index>(*j));
        return solve(rhs);
    }

private:
    void check_length(const Vector &y) const {
        if (y.size() != size()) {
            throw Error(ErrorKind::DimensionMismatch, "right-hand side has length " + std::to_string(y.size()) +
                                                          ", expected " + std::to_string(size()));
        }
    }

    KernelSpec kernel_;
    PointSet points_;
    Matrix gram_;
    Eigen::PartialPivLU<Matrix> lu_;
    double rcond_ = 0.0;
};

inline GramSystem build_system(const KernelSpec &kernel, const PointSet &x) { return GramSystem(kernel, x); }

inline Vector kx_column(const GramSystem &system, double t) { return system.kx_column(t); }
inline Vector kx_row(const GramSystem &system, double t) { return system.kx_row(t); }
inline Vector solve(const GramSystem &system, const Vector &y) { return system.solve(y); }
inline Vector cardinal_coefficients(const GramSystem &system, double t) { return system.cardinal_coefficients(t); }

/// Evaluation matrix E with E(i, j) = K(x_j, t_i), so (E c)_i is the left expansion at t_i.
inline Matrix evaluation_matrix(const KernelSpec &kernel, const PointSet &x, std::span<const double> at) {
    Matrix e(static_cast<Eigen::Index>(at.size()), static_cast<Eigen::Index>(x.size()));
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
        require_in_domain(kernel, at[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < e.cols(); ++j) {
            e(i, j) = kernel.value(x[static_cast<std::size_t>(j)], at[static_cast<std::size_t>(i)]);
        }
    }
    return e;
}

}  // namespace rkbs
