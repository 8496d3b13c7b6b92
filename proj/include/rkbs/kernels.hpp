#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "rkbs/error.hpp"
#include "rkbs/point_set.hpp"

namespace rkbs {

/// Real interval with independently open or closed endpoints. Infinite
/// endpoints are always treated as open.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_closed = false;
    bool hi_closed = false;

    static Interval real_line() { return {}; }
    static Interval open(double a, double b) { return {a, b, false, false}; }
    static Interval closed(double a, double b) { return {a, b, true, true}; }

    bool contains(double x) const {
        if (!std::isfinite(x)) return false;
        const bool above = lo_closed ? x >= lo : x > lo;
        const bool below = hi_closed ? x <= hi : x < hi;
        return above && below;
    }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    double length() const { return hi - lo; }
    bool subset_of(const Interval &other) const {
        const bool lo_ok = lo > other.lo || (lo == other.lo && (other.lo_closed || !lo_closed));
        const bool hi_ok = hi < other.hi || (hi == other.hi && (other.hi_closed || !hi_closed));
        return lo_ok && hi_ok;
    }

    std::string to_string() const {
        std::ostringstream os;
        os.precision(17);
        os << (lo_closed ? '[' : '(') << lo << ", " << hi << (hi_closed ? ']' : ')');
        return os.str();
    }

    bool operator==(const Interval &) const = default;
};

enum class Status { Proven, Disproven, Unknown };

inline const char *to_string(Status s) {
    switch (s) {
        case Status::Proven: return "Proven";
        case Status::Disproven: return "Disproven";
        case Status::Unknown: return "Unknown";
    }
    return "Unknown";
}

/// Known status of the four admissibility conditions for a kernel family.
struct Admissibility {
    Status a1 = Status::Unknown;
    Status a2 = Status::Unknown;
    Status a3 = Status::Unknown;
    Status a4 = Status::Unknown;

    bool fully_proven() const {
        return a1 == Status::Proven && a2 == Status::Proven && a3 == Status::Proven && a4 == Status::Proven;
    }
    bool operator==(const Admissibility &) const = default;
};

namespace family {

/// e^{-|s-t|}
struct Exponential {
    bool operator==(const Exponential &) const = default;
};
/// min(s,t) - st on (0,1)
struct BrownianBridge {
    bool operator==(const BrownianBridge &) const = default;
};
/// exp(-(s-t)^2 / sigma)
struct Gaussian {
    double sigma = 1.0;
    bool operator==(const Gaussian &) const = default;
};
/// (1 + (s-t)^2)^{-beta}
struct InverseMultiquadric {
    double beta = 0.5;
    bool operator==(const InverseMultiquadric &) const = default;
};
/// (1-r)^2_+, the d=3 Wendland function of smoothness 0
struct WendlandD3K0 {
    bool operator==(const WendlandD3K0 &) const = default;
};
/// (1-r)^4_+ (1+4r), the d=3 Wendland function of smoothness 1
struct WendlandD3K1 {
    bool operator==(const WendlandD3K1 &) const = default;
};
/// Centered cardinal B-spline of order p (degree p-1) evaluated at s-t
struct BSpline {
    int order = 2;
    bool operator==(const BSpline &) const = default;
};
/// sin(pi r) / (pi r)
struct Sinc {
    bool operator==(const Sinc &) const = default;
};

}  // namespace family

using Family = std::variant<family::Exponential, family::BrownianBridge, family::Gaussian,
                            family::InverseMultiquadric, family::WendlandD3K0, family::WendlandD3K1,
                            family::BSpline, family::Sinc>;

inline constexpr int kMaxBSplineOrder = 6;

namespace detail {

/// Cardinal B-spline with knots 0,1,...,order via Cox-de Boor.
inline double cardinal_bspline(int order, double x) {
    if (order == 1) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
    if (x <= 0.0 || x >= order) return 0.0;
    const double k = order - 1;
    return (x * cardinal_bspline(order - 1, x) + (order - x) * cardinal_bspline(order - 1, x - 1.0)) / k;
}

}  // namespace detail

/// Immutable kernel description: family, parameters and the input domain.
class KernelSpec {
public:
    explicit KernelSpec(Family family, std::optional<Interval> domain = std::nullopt)
        : family_(family), domain_(domain.value_or(default_domain(family))) {
        validate();
    }

    static KernelSpec exponential(Interval domain = Interval::real_line()) {
        return KernelSpec(family::Exponential{}, domain);
    }
    static KernelSpec brownian_bridge(Interval domain = Interval::open(0.0, 1.0)) {
        return KernelSpec(family::BrownianBridge{}, domain);
    }
    static KernelSpec gaussian(double sigma, Interval domain = Interval::real_line()) {
        return KernelSpec(family::Gaussian{sigma}, domain);
    }
    static KernelSpec inverse_multiquadric(double beta, Interval domain = Interval::real_line()) {
        return KernelSpec(family::InverseMultiquadric{beta}, domain);
    }
    static KernelSpec wendland_d3k0(Interval domain = Interval::real_line()) {
        return KernelSpec(family::WendlandD3K0{}, domain);
    }
    static KernelSpec wendland_d3k1(Interval domain = Interval::real_line()) {
        return KernelSpec(family::WendlandD3K1{}, domain);
    }
    static KernelSpec bspline(int order, Interval domain = Interval::real_line()) {
        return KernelSpec(family::BSpline{order}, domain);
    }
    static KernelSpec sinc(Interval domain = Interval::real_line()) { return KernelSpec(family::Sinc{}, domain); }

    const Family &family() const noexcept { return family_; }
    const Interval &domain() const noexcept { return domain_; }

    template <typename F>
    bool is() const noexcept {
        return std::holds_alternative<F>(family_);
    }

    /// Kernel value without a domain check. Callers must have validated s and t.
    double value(double s, double t) const {
        return std::visit([s, t](const auto &f) { return evaluate(f, s, t); }, family_);
    }

    /// Supremum of |K| over the domain.
    double bound() const {
        if (is<family::BrownianBridge>()) return 0.25;
        return 1.0;
    }

    Admissibility admissibility() const {
        Admissibility a;
        if (is<family::Exponential>() || is<family::BrownianBridge>()) {
            a = {Status::Proven, Status::Proven, Status::Proven, Status::Proven};
        } else if (is<family::Gaussian>()) {
            a.a4 = Status::Disproven;
        } else if (const auto *imq = std::get_if<family::InverseMultiquadric>(&family_); imq && imq->beta == 0.5) {
            a.a4 = Status::Disproven;
        } else if (is<family::Sinc>()) {
            a.a3 = Status::Disproven;
        }
        return a;
    }

    /// Stable identifier used by the JSON schema and CLI.
    std::string name() const {
        return std::visit(
            [](const auto &f) -> std::string {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, family::Exponential>) return "exponential";
                else if constexpr (std::is_same_v<T, family::BrownianBridge>) return "brownian_bridge";
                else if constexpr (std::is_same_v<T, family::Gaussian>) return "gaussian";
                else if constexpr (std::is_same_v<T, family::InverseMultiquadric>) return "inverse_multiquadric";
                else if constexpr (std::is_same_v<T, family::WendlandD3K0>) return "wendland_d3k0";
                else if constexpr (std::is_same_v<T, family::WendlandD3K1>) return "wendland_d3k1";
                else if constexpr (std::is_same_v<T, family::BSpline>) return "bspline";
                else return "sinc";
            },
            family_);
    }

    bool operator==(const KernelSpec &) const = default;

private:
    static Interval default_domain(const Family &f) {
        if (std::holds_alternative<family::BrownianBridge>(f)) return Interval::open(0.0, 1.0);
        return Interval::real_line();
    }

    void validate() const {
        if (!(domain_.lo < domain_.hi)) {
            throw Error(ErrorKind::InvalidArgument, "kernel domain " + domain_.to_string() + " is empty");
        }
        if (const auto *g = std::get_if<family::Gaussian>(&family_); g && !(g->sigma > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "Gaussian kernel requires sigma > 0");
        }
        if (const auto *m = std::get_if<family::InverseMultiquadric>(&family_); m && !(m->beta > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "inverse multiquadric requires beta > 0");
        }
        if (const auto *b = std::get_if<family::BSpline>(&family_);
            b && (b->order < 2 || b->order > kMaxBSplineOrder)) {
            throw Error(ErrorKind::InvalidArgument,
                        "B-spline kernel order must lie in [2, " + std::to_string(kMaxBSplineOrder) + "]");
        }
        if (is<family::BrownianBridge>() && !domain_.subset_of(Interval::open(0.0, 1.0))) {
            throw Error(ErrorKind::InvalidArgument,
                        "Brownian bridge kernel domain must lie inside (0, 1), got " + domain_.to_string());
        }
    }

    static double evaluate(family::Exponential, double s, double t) { return std::exp(-std::abs(s - t)); }
    static double evaluate(family::BrownianBridge, double s, double t) { return std::min(s, t) - s * t; }
    static double evaluate(family::Gaussian g, double s, double t) {
        const double r = s - t;
        return std::exp(-(r * r) / g.sigma);
    }
    static double evaluate(family::InverseMultiquadric m, double s, double t) {
        const double r = s - t;
        return std::pow(1.0 / (1.0 + r * r), m.beta);
    }
    static double evaluate(family::WendlandD3K0, double s, double t) {
        const double u = std::max(0.0, 1.0 - std::abs(s - t));
        return u * u;
    }
    static double evaluate(family::WendlandD3K1, double s, double t) {
        const double r = std::abs(s - t);
        const double u = std::max(0.0, 1.0 - r);
        return u * u * u * u * (1.0 + 4.0 * r);
    }
    static double evaluate(family::BSpline b, double s, double t) {
        // Even function: evaluating at |s-t| keeps K(s,t) == K(t,s) bitwise.
        const double r = std::abs(s - t);
        return detail::cardinal_bspline(b.order, r + 0.5 * b.order);
    }
    static double evaluate(family::Sinc, double s, double t) {
        const double r = std::abs(s - t);
        if (r == 0.0) return 1.0;
        if (r == std::floor(r)) return 0.0;
        const double x = std::numbers::pi * r;
        return std::sin(x) / x;
    }

    Family family_;
    Interval domain_;
};

inline void require_in_domain(const KernelSpec &kernel, double x) {
    if (!kernel.domain().contains(x)) {
        std::ostringstream os;
        os.precision(17);
        os << "point " << x << " lies outside the " << kernel.name() << " kernel domain "
           << kernel.domain().to_string();
        throw Error(ErrorKind::Domain, os.str());
    }
}

/// K(s, t) with domain validation.
inline double eval(const KernelSpec &kernel, double s, double t) {
    require_in_domain(kernel, s);
    require_in_domain(kernel, t);
    return kernel.value(s, t);
}

/// Closed-form K[x]^{-1} K_x(t) for the two kernels with a proven unit
/// Lebesgue bound. The result is indexed like `x` (caller order), and only the
/// one or two weights adjacent to t are nonzero.
inline std::vector<double> closed_form_cardinal(const KernelSpec &kernel, const PointSet &x, double t) {
    const bool exponential = kernel.is<family::Exponential>();
    if (!exponential && !kernel.is<family::BrownianBridge>()) {
        throw Error(ErrorKind::UnsupportedKernel,
                    "no closed-form cardinal function for the " + kernel.name() + " kernel");
    }
    require_in_domain(kernel, t);
    for (double p : x.values()) require_in_domain(kernel, p);

    const auto order = x.sorted_order();
    const std::size_t n = x.size();
    std::vector<double> weights(n, 0.0);
    const double first = x[order.front()];
    const double last = x[order.back()];

    if (const auto it = std::find(x.values().begin(), x.values().end(), t); it != x.values().end()) {
        weights[static_cast<std::size_t>(it - x.values().begin())] = 1.0;
        return weights;
    }
    if (t < first) {
        weights[order.front()] = exponential ? std::exp(t - first) : t / first;
        return weights;
    }
    if (t > last) {
        weights[order.back()] = exponential ? std::exp(last - t) : (1.0 - t) / (1.0 - last);
        return weights;
    }
    // Interior gap x_j < t < x_{j+1}.
    std::size_t j = 0;
    while (j + 1 < n && x[order[j + 1]] < t) ++j;
    const double left = x[order[j]];
    const double right = x[order[j + 1]];
    if (exponential) {
        const double denom = std::sinh(right - left);
        weights[order[j]] = std::sinh(right - t) / denom;
        weights[order[j + 1]] = std::sinh(t - left) / denom;
    } else {
        const double h = right - left;
        weights[order[j]] = (right - t) / h;
        weights[order[j + 1]] = (t - left) / h;
    }
    return weights;
}

}  // namespace rkbs
