// Interpolates a few samples with the exponential and Gaussian kernels and
// compares their Lebesgue constants and interpolant norms.

#include <cstdio>

#include "rkbs/rkbs.hpp"

int main() {
    const rkbs::PointSet x{-0.9, -0.4, 0.1, 0.35, 0.8};
    rkbs::Vector y(5);
    y << 0.2, -1.0, 0.5, 0.7, -0.3;

    for (const rkbs::KernelSpec &kernel : {rkbs::KernelSpec::exponential(), rkbs::KernelSpec::gaussian(1.0)}) {
        const rkbs::GramSystem system(kernel, x);
        const auto f = rkbs::min_norm_interpolant_b(system, y);
        const auto grid = rkbs::lebesgue_grid(rkbs::Interval::closed(-1.0, 1.0), x);
        const auto profile = rkbs::lebesgue_constant(system, grid);
        std::printf("%-12s l1 norm %.6f  Lebesgue constant %.6f at t = %.4f\n", kernel.name().c_str(), rkbs::bnorm(f),
                    profile.max_value, profile.argmax);
    }
    return 0;
}
