#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "rkbs/error.hpp"

namespace rkbs {

/// Finite sequence of pairwise-distinct real sample points.
///
/// Points keep the caller's order; a sorting permutation is retained for
/// routines (closed-form cardinal functions, Lebesgue grids) that need the
/// nodes in ascending order.
class PointSet {
public:
    PointSet() = default;

    explicit PointSet(std::vector<double> points) : points_(std::move(points)) {
        if (points_.empty()) {
            throw Error(ErrorKind::InvalidArgument, "point set must contain at least one point");
        }
        for (double p : points_) {
            if (!std::isfinite(p)) {
                throw Error(ErrorKind::InvalidArgument, "point set contains a non-finite value");
            }
        }
        order_.resize(points_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(),
                         [this](std::size_t a, std::size_t b) { return points_[a] < points_[b]; });
        min_spacing_ = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < order_.size(); ++k) {
            const double gap = points_[order_[k]] - points_[order_[k - 1]];
            min_spacing_ = std::min(min_spacing_, gap);
        }
        if (min_spacing_ <= 0.0) {
            std::ostringstream msg;
            msg << "sample points must be pairwise distinct (duplicate value found among " << points_.size()
                << " points)";
            throw Error(ErrorKind::DuplicatePoints, msg.str());
        }
    }

    PointSet(std::initializer_list<double> points) : PointSet(std::vector<double>(points)) {}

    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t j) const { return points_[j]; }
    std::span<const double> values() const noexcept { return points_; }

    /// Indices that sort the points ascending.
    std::span<const std::size_t> sorted_order() const noexcept { return order_; }

    std::vector<double> sorted() const {
        std::vector<double> out(points_.size());
        for (std::size_t k = 0; k < order_.size(); ++k) out[k] = points_[order_[k]];
        return out;
    }

    /// Smallest gap between two points; +inf for a single point.
    double min_spacing() const noexcept { return min_spacing_; }

    double min() const { return points_[order_.front()]; }
    double max() const { return points_[order_.back()]; }

    /// True if t coincides with one of the points.
    bool contains(double t) const {
        return std::find(points_.begin(), points_.end(), t) != points_.end();
    }

    /// Position of t among the points, if it is one of them.
    std::optional<std::size_t> index_of(double t) const {
        const auto it = std::find(points_.begin(), points_.end(), t);
        if (it == points_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - points_.begin());
    }

    /// Appends a point, returning a new set.
    PointSet with_point(double t) const {
        std::vector<double> extended = points_;
        extended.push_back(t);
        return PointSet(std::move(extended));
    }

    bool operator==(const PointSet &other) const { return points_ == other.points_; }

private:
    std::vector<double> points_;
    std::vector<std::size_t> order_;
    double min_spacing_ = std::numeric_limits<double>::infinity();
};

}  // namespace rkbs
