#pragma once

// Reference computations that share no code path with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

inline double kexp(double s, double t) { return std::exp(-std::abs(s - t)); }
inline double kbridge(double s, double t) { return std::min(s, t) - s * t; }
inline double kgauss(double s, double t, double sigma) { return std::exp(-(s - t) * (s - t) / sigma); }

/// Entry (j, k) = K(x_k, x_j).
inline Mat gram(const std::function<double(double, double)> &k, const Vec &x) {
    Mat g(x.size(), Vec(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t c = 0; c < x.size(); ++c) g[j][c] = k(x[c], x[j]);
    return g;
}

/// Gauss-Jordan elimination with full pivoting.
inline Vec solve(Mat a, Vec b) {
    const std::size_t n = b.size();
    std::vector<std::size_t> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = i;
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t br = p, bc = p;
        for (std::size_t r = p; r < n; ++r)
            for (std::size_t c = p; c < n; ++c)
                if (std::abs(a[r][c]) > std::abs(a[br][bc])) br = r, bc = c;
        if (a[br][bc] == 0.0) throw std::runtime_error("oracle: singular system");
        std::swap(a[p], a[br]);
        std::swap(b[p], b[br]);
        for (auto &row : a) std::swap(row[p], row[bc]);
        std::swap(col[p], col[bc]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == p) continue;
            const double f = a[r][p] / a[p][p];
            if (f == 0.0) continue;
            for (std::size_t c = p; c < n; ++c) a[r][c] -= f * a[p][c];
            b[r] -= f * b[p];
        }
    }
    Vec out(n);
    for (std::size_t p = 0; p < n; ++p) out[col[p]] = b[p] / a[p][p];
    return out;
}

inline double l1(const Vec &v) {
    double s = 0.0;
    for (double e : v) s += std::abs(e);
    return s;
}

inline double lasso_objective(const Mat &k, const Vec &y, double mu, const Vec &c) {
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double r = -y[i];
        for (std::size_t j = 0; j < c.size(); ++j) r += k[i][j] * c[j];
        loss += r * r;
    }
    return loss + mu * l1(c);
}

/// Cyclic coordinate descent for ||K c - y||^2 + mu ||c||_1.
inline Vec lasso_cd(const Mat &k, const Vec &y, double mu, double tol = 1e-15, int max_sweeps = 2000000) {
    const std::size_t n = y.size();
    Vec c(n, 0.0);
    Vec r = y;  // y - K c
    Vec norms(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) norms[j] += k[i][j] * k[i][j];
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double change = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double z = 0.0;
            for (std::size_t i = 0; i < n; ++i) z += k[i][j] * (r[i] + k[i][j] * c[j]);
            const double a = std::abs(2.0 * z) - mu;
            const double next = a > 0.0 ? std::copysign(a, z) / (2.0 * norms[j]) : 0.0;
            const double d = next - c[j];
            if (d != 0.0) {
                for (std::size_t i = 0; i < n; ++i) r[i] -= k[i][j] * d;
                c[j] = next;
            }
            change = std::max(change, std::abs(d));
        }
        if (change < tol) break;
    }
    return c;
}

/// Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)> &f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Small deterministic generator for property tests (xorshift64*).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x2545F4914F6CDD1DULL) {}
    double uniform(double a, double b) { return a + (b - a) * static_cast<double>(next() >> 11) * 0x1.0p-53; }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

    /// n points in (lo + gap, hi - gap), pairwise at least `gap` apart, in random order.
    /// Sorted uniforms on a shortened interval shifted by i * gap are uniform over
    /// the admissible configurations.
    Vec spaced_points(int n, double lo, double hi, double gap) {
        const double span = (hi - lo - 2.0 * gap) - (n - 1) * gap;
        Vec x(static_cast<std::size_t>(n));
        for (double &v : x) v = uniform(0.0, span);
        std::sort(x.begin(), x.end());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += lo + gap + static_cast<double>(i) * gap;
        for (std::size_t i = x.size(); i > 1; --i) std::swap(x[i - 1], x[static_cast<std::size_t>(integer(0, static_cast<int>(i) - 1))]);
        return x;
    }

private:
    std::uint64_t next() {
        s_ ^= s_ >> 12;
        s_ ^= s_ << 25;
        s_ ^= s_ >> 27;
        return s_ * 0x2545F4914F6CDD1DULL;
    }
    std::uint64_t s_;
};

}  // namespace oracle
