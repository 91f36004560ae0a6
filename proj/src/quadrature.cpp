#include "tvqc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "tvqc/errors.hpp"

namespace tvqc {

namespace {

GaussLegendreRule compute_rule(std::size_t n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess, Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Final derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace

const GaussLegendreRule& gauss_legendre(std::size_t n) {
    if (n < 2) throw UsageError("Gauss-Legendre rule needs at least 2 nodes");
    static std::mutex mutex;
    static std::map<std::size_t, GaussLegendreRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t mid = values.size() / 2;
    return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    if (!(b > a)) return 0.0;
    const auto& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double center = 0.5 * (b + a);
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        terms[i] = rule.weights[i] * f(center + half * rule.nodes[i]);
    }
    return half * pairwise_sum(terms);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double x_tol, int max_iter) {
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) throw NumericalError("bisection: no sign change on bracket");
    for (int iter = 0; iter < max_iter; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= x_tol) break;
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Maximum maximize_interval(const std::function<double(double)>& f, double lo, double hi, std::size_t coarse_points,
                          double x_tol) {
    if (coarse_points < 3) coarse_points = 3;
    const double step = (hi - lo) / static_cast<double>(coarse_points - 1);
    std::size_t best = 0;
    double best_value = f(lo);
    for (std::size_t i = 1; i < coarse_points; ++i) {
        const double v = f(lo + step * static_cast<double>(i));
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double a = lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
    double b = lo + step * static_cast<double>(std::min(best + 1, coarse_points - 1));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    Maximum result{x, f(x)};
    // The grid point may still beat the refined one on flat or kinked functions.
    const double grid_x = lo + step * static_cast<double>(best);
    if (best_value > result.value) result = {grid_x, best_value};
    return result;
}

} // namespace tvqc
