#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tvqc {

/// Gauss-Legendre rule on [-1, 1]. Rules are computed once per node count
/// and cached; the returned reference stays valid for the program lifetime.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(std::size_t n);

/// Pairwise (tree) summation; the result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values);

/// Integral of f over [a, b] with an n-node Gauss-Legendre rule, summed pairwise.
double integrate_gl(const std::function<double(double)>& f, double a, double b, std::size_t n);

/// Root of a monotone function on [lo, hi] by bisection. Requires a sign change.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double x_tol = 0.0,
                   int max_iter = 200);

/// Maximum of f on [lo, hi]: coarse grid scan followed by golden-section
/// refinement inside the best bracket.
struct Maximum {
    double argmax;
    double value;
};
Maximum maximize_interval(const std::function<double(double)>& f, double lo, double hi,
                          std::size_t coarse_points = 1024, double x_tol = 1e-9);

} // namespace tvqc
