#include "tvqc/capacity.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "tvqc/errors.hpp"
#include "tvqc/quadrature.hpp"

namespace tvqc {

namespace {

constexpr double kEigenFloor = 1e-14;
// Realizations whose coherent information is below this count as zero rate.
constexpr double kPositiveRate = 1e-13;

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

void require_complete(const KrausSet& kraus) {
    if (kraus.operators.empty() || kraus.completeness_error() > 1e-10) {
        throw DomainError("Kraus set does not satisfy completeness");
    }
}

// Realized channel value as a function of (T1, T2). Monotone non-decreasing
// in both arguments; its positive part is the quantity being averaged.
using JointValue = std::function<double(double, double)>;

struct Window {
    double lo;
    double hi;
};

// The lower edge stays strictly positive so realized channels remain defined.
Window window(double mu, double sigma, double k) { return {std::max(1e-9 * mu, mu - k * sigma), mu + k * sigma}; }

// Smallest t in [lo, hi] with value(t) > threshold, given monotone value.
// Returns hi when never positive and lo when always positive.
double positive_from(const std::function<double(double)>& value, double lo, double hi, double threshold) {
    if (value(lo) > threshold) return lo;
    if (!(value(hi) > threshold)) return hi;
    double a = lo;
    double b = hi;
    const double tol = 1e-12 * hi;
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (value(mid) > threshold) b = mid;
        else a = mid;
    }
    return b;
}

// E[max(0, value(T1, min(T2, 2 T1)))] under independent truncated normals,
// or E[value(...)] when `floor` is false. With `locked`, T2 = 2 T1 in every
// realization. Floored integrands are integrated only where positive.
double joint_expectation(const DecoherenceSpec& spec, const JointValue& value, bool locked, bool floor,
                         double threshold, const QuadratureOptions& opts) {
    const auto positive = [floor](double v) { return floor ? std::max(0.0, v) : v; };
    const double mu2 = spec.mu_t2();
    const double sigma2 = spec.sigma_t2();
    const TruncatedNormal t2_model{mu2, sigma2};
    const Window w2 = sigma2 > 0.0 ? window(mu2, sigma2, opts.span_sigmas) : Window{mu2, mu2};
    const double mass2 = sigma2 > 0.0 ? t2_model.cdf(w2.hi) - t2_model.cdf(w2.lo) : 1.0;

    // Conditional expectation over T2 for a fixed T1 realization.
    auto inner = [&](double t1) -> double {
        const double cap = 2.0 * t1;
        if (locked) return positive(value(t1, cap));
        if (sigma2 == 0.0) return positive(value(t1, std::min(mu2, cap)));
        const double upper = std::min(w2.hi, cap);
        const double tail = std::max(0.0, t2_model.cdf(w2.hi) - t2_model.cdf(std::max(cap, w2.lo))) / mass2;
        const double at_cap = positive(value(t1, cap));
        if (floor && at_cap == 0.0) return 0.0;
        double body = 0.0;
        if (upper > w2.lo) {
            const double from =
                floor ? positive_from([&](double t2) { return value(t1, t2); }, w2.lo, upper, threshold) : w2.lo;
            body = integrate_gl([&](double t2) { return positive(value(t1, t2)) * t2_model.pdf(t2); }, from, upper,
                                opts.nodes) /
                   mass2;
        }
        return body + at_cap * tail;
    };

    if (spec.sigma_t1() == 0.0) return inner(spec.mu_t1());

    const TruncatedNormal t1_model{spec.mu_t1(), spec.sigma_t1()};
    const Window w1 = window(spec.mu_t1(), spec.sigma_t1(), opts.span_sigmas);
    const double mass1 = t1_model.cdf(w1.hi) - t1_model.cdf(w1.lo);
    // Outer integrand vanishes until the best realization (T2 = 2 T1) turns positive.
    const double from =
        floor ? positive_from([&](double t1) { return value(t1, 2.0 * t1); }, w1.lo, w1.hi, threshold) : w1.lo;

    std::vector<double> cuts{from, w1.hi};
    if (!locked) {
        for (double b : sigma2 == 0.0 ? std::vector<double>{mu2 / 2.0} : std::vector<double>{w2.lo / 2.0, w2.hi / 2.0}) {
            if (b > from && b < w1.hi) cuts.push_back(b);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        pieces.push_back(integrate_gl([&](double t1) { return inner(t1) * t1_model.pdf(t1); }, cuts[i], cuts[i + 1],
                                      opts.nodes));
    }
    return pairwise_sum(pieces) / mass1;
}

CapacityResult quadrature_result(double value) {
    CapacityResult r;
    r.value = std::clamp(value, 0.0, 1.0);
    r.method = CapacityMethod::Quadrature;
    return r;
}

Eigen::Matrix2cd pauli_matrix(int which) {
    using C = std::complex<double>;
    Eigen::Matrix2cd m;
    switch (which) {
    case 0: m << 0, 1, 1, 0; break;
    case 1: m << 0, C(0, -1), C(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
    }
    return m;
}

constexpr Eigen::Index kMaxSmallKraus = 3;
using SmallMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

// Closed-form eigenvalues of a Hermitian matrix of order <= 3, ascending.
int small_eigenvalues(const SmallMatrix& m, double* out) {
    const Eigen::Index n = m.rows();
    if (n == 1) {
        out[0] = m(0, 0).real();
        return 1;
    }
    if (n == 2) {
        const double a = m(0, 0).real();
        const double d = m(1, 1).real();
        const double mean = 0.5 * (a + d);
        const double radius = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
        out[0] = mean - radius;
        out[1] = mean + radius;
        return 2;
    }
    const double a0 = m(0, 0).real();
    const double a1 = m(1, 1).real();
    const double a2 = m(2, 2).real();
    const double p1 = std::norm(m(0, 1)) + std::norm(m(0, 2)) + std::norm(m(1, 2));
    if (p1 == 0.0) {
        out[0] = a0;
        out[1] = a1;
        out[2] = a2;
        return 3;
    }
    // Trigonometric solution of the characteristic cubic.
    const double q = (a0 + a1 + a2) / 3.0;
    const double p2 = (a0 - q) * (a0 - q) + (a1 - q) * (a1 - q) + (a2 - q) * (a2 - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Eigen::Matrix3cd b = m;
    b.diagonal().array() -= q;
    b /= p;
    const double r = std::clamp(0.5 * b.determinant().real(), -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    out[0] = e3;
    out[1] = 3.0 * q - e1 - e3;
    out[2] = e1;
    return 3;
}

double small_entropy(const SmallMatrix& m) {
    double ev[3];
    const int n = small_eigenvalues(m, ev);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        if (ev[i] >= kEigenFloor) s -= ev[i] * std::log2(ev[i]);
    }
    return s;
}

Eigen::Matrix2cd diagonal_input(double xi) {
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    rho(0, 0) = 1.0 - xi;
    rho(1, 1) = xi;
    return rho;
}

} // namespace

double coherent_information_unchecked(const KrausSet& kraus, const Eigen::Matrix2cd& in) {
    const auto& ops = kraus.operators;
    const auto k = static_cast<Eigen::Index>(ops.size());
    if (k > kMaxSmallKraus) {
        Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
        Eigen::MatrixXcd env(k, k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const Eigen::Matrix2cd e_rho = ops[j] * in;
            out += e_rho * ops[j].adjoint();
            for (Eigen::Index l = 0; l < k; ++l) env(j, l) = (e_rho * ops[l].adjoint()).trace();
        }
        return von_neumann_entropy(out) - von_neumann_entropy(env);
    }
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    SmallMatrix env(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Matrix2cd e_rho = ops[j] * in;
        out += e_rho * ops[j].adjoint();
        for (Eigen::Index l = 0; l < k; ++l) env(j, l) = (e_rho * ops[l].adjoint()).trace();
    }
    return small_entropy(out) - small_entropy(env);
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0) throw DomainError("density matrix must be square");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw DomainError("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - std::complex<double>(1.0)) > 1e-12) throw DomainError("density matrix trace != 1");
    for (double e : hermitian_eigenvalues(rho_)) {
        if (e < -1e-10) throw DomainError("density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::qubit_diagonal(double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("xi must lie in [0, 1]");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
    rho(0, 0) = 1.0 - xi;
    rho(1, 1) = xi;
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::qubit_bloch(double rx, double ry, double rz) {
    const double r2 = rx * rx + ry * ry + rz * rz;
    if (r2 > 1.0 + 1e-12) throw DomainError("Bloch vector outside the unit ball");
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Identity();
    rho += rx * pauli_matrix(0) + ry * pauli_matrix(1) + rz * pauli_matrix(2);
    return DensityMatrix(Eigen::MatrixXcd(0.5 * rho));
}

std::string to_string(CapacityMethod method) {
    switch (method) {
    case CapacityMethod::ClosedForm: return "closed_form";
    case CapacityMethod::KrausSearch: return "kraus_search";
    case CapacityMethod::Quadrature: return "quadrature";
    }
    return "?";
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary entropy argument must lie in [0, 1]");
    return plogp(x) + plogp(1.0 - x);
}

double shannon_entropy(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs) h += plogp(p);
    return h;
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
    if (m.rows() <= 3) {
        double ev[3];
        const int n = small_eigenvalues(m, ev);
        return {ev, ev + n};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
    double s = 0.0;
    for (double e : hermitian_eigenvalues(rho)) {
        if (e >= kEigenFloor) s -= e * std::log2(e);
    }
    return s;
}

CapacityResult cq_ad_closed(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
    CapacityResult r;
    r.method = CapacityMethod::ClosedForm;
    if (gamma == 0.0) {
        r.value = 1.0;
        r.argmax_xi = 0.5;
        return r;
    }
    if (gamma >= 0.5) {
        r.value = 0.0;
        r.argmax_xi = 0.0;
        return r;
    }
    const auto best = maximize_interval(
        [gamma](double xi) { return binary_entropy((1.0 - gamma) * xi) - binary_entropy(gamma * xi); }, 0.0, 1.0);
    r.value = std::max(0.0, best.value);
    r.argmax_xi = best.argmax;
    return r;
}

double coherent_information_kraus(const KrausSet& kraus, const DensityMatrix& rho) {
    require_complete(kraus);
    if (rho.dim() != 2) throw UsageError("single-qubit Kraus set requires a qubit input");
    return coherent_information_unchecked(kraus, rho.matrix());
}

double coherent_information_kraus(const KrausSet& kraus, double xi) {
    return coherent_information_kraus(kraus, DensityMatrix::qubit_diagonal(xi));
}

CapacityResult maximize_coherent_information(const KrausSet& kraus, InputSearch search, std::size_t coarse_points,
                                             double xi_tolerance) {
    require_complete(kraus);
    auto diagonal_value = [&](double xi) { return coherent_information_unchecked(kraus, diagonal_input(xi)); };
    const auto best = maximize_interval(diagonal_value, 0.0, 1.0, coarse_points, xi_tolerance);
    CapacityResult r;
    r.method = CapacityMethod::KrausSearch;
    r.value = best.value;
    r.argmax_xi = best.argmax;

    if (search == InputSearch::Bloch) {
        // Spherical coordinates (radius, polar, azimuth); start at the diagonal optimum.
        std::array<double, 3> x{std::abs(1.0 - 2.0 * best.argmax), 1.0 - 2.0 * best.argmax >= 0.0 ? 0.0 : std::numbers::pi,
                                0.0};
        const std::array<double, 3> lo{0.0, 0.0, 0.0};
        const std::array<double, 3> hi{1.0, std::numbers::pi, 2.0 * std::numbers::pi};
        auto value_at = [&](const std::array<double, 3>& v) {
            const double s = std::sin(v[1]);
            const double r3 = std::min(1.0, v[0]);
            return coherent_information_kraus(
                kraus, DensityMatrix::qubit_bloch(r3 * s * std::cos(v[2]), r3 * s * std::sin(v[2]), r3 * std::cos(v[1])));
        };
        double current = value_at(x);
        for (int sweep = 0; sweep < 12; ++sweep) {
            const double before = current;
            for (std::size_t axis = 0; axis < 3; ++axis) {
                auto along = [&](double t) {
                    auto v = x;
                    v[axis] = t;
                    return value_at(v);
                };
                const auto m = maximize_interval(along, lo[axis], hi[axis], 64, 1e-10);
                if (m.value > current) {
                    x[axis] = m.argmax;
                    current = m.value;
                }
            }
            if (current - before < 1e-13) break;
        }
        if (current > r.value) {
            r.value = current;
            r.argmax_xi.reset();
        }
    }
    if (r.value < 0.0) {
        r.value = 0.0;
        r.clamped = true;
    }
    return r;
}

double hashing_bound(const PauliDist& p) {
    const std::array<double, 4> probs{p.p_i, p.p_x, p.p_y, p.p_z};
    return 1.0 - shannon_entropy(probs);
}

CapacityResult ergodic_capacity_ad(const DecoherenceSpec& spec, const QuadratureOptions& opts) {
    const double t = spec.t_algo();
    if (spec.sigma_t1() == 0.0) {
        auto r = cq_ad_closed(damping_gamma(spec.mu_t1(), t));
        r.method = CapacityMethod::Quadrature;
        return r;
    }
    // C_Q(gamma(T1)) is positive exactly when gamma < 1/2, i.e. T1 > t / ln 2.
    const JointValue value = [t](double t1, double) { return 0.5 - damping_gamma(t1, t); };
    const JointValue capacity = [t](double t1, double) { return cq_ad_closed(damping_gamma(t1, t)).value; };
    const TruncatedNormal model{spec.mu_t1(), spec.sigma_t1()};
    const Window w = window(spec.mu_t1(), spec.sigma_t1(), opts.span_sigmas);
    const double from = positive_from([&](double t1) { return value(t1, 0.0); }, w.lo, w.hi, 0.0);
    const double integral =
        integrate_gl([&](double t1) { return capacity(t1, 0.0) * model.pdf(t1); }, from, w.hi, opts.nodes);
    return quadrature_result(integral / (model.cdf(w.hi) - model.cdf(w.lo)));
}

double static_hashing(const DecoherenceSpec& spec, NoiseModel model) {
    return hashing_bound(pauli_dist(model, spec.mu_t1(), spec.mu_t2(), spec.t_algo()));
}

CapacityResult ergodic_hashing(const DecoherenceSpec& spec, NoiseModel model, const QuadratureOptions& opts) {
    const double t = spec.t_algo();
    const bool locked = !uses_t2(model) || spec.ramsey_locked();
    if (spec.sigma_t1() == 0.0 && (locked || spec.sigma_t2() == 0.0)) {
        return quadrature_result(static_hashing(spec, model));
    }
    const JointValue value = [t, model](double t1, double t2) { return hashing_bound(pauli_dist(model, t1, t2, t)); };
    return quadrature_result(joint_expectation(spec, value, locked, opts.clamp_realizations, 0.0, opts));
}

CapacityResult ergodic_capacity_apd_lower(const DecoherenceSpec& spec, const QuadratureOptions& opts) {
    const double t = spec.t_algo();
    const InputSearch search = opts.search;
    const std::size_t coarse = opts.coarse_points;
    const double xi_tol = opts.xi_tolerance;
    const JointValue value = [t, search, coarse, xi_tol](double t1, double t2) {
        return maximize_coherent_information(kraus_apd(damping_pair(t1, t2, t)), search, coarse, xi_tol).value;
    };
    if (spec.sigma_t1() == 0.0 && (spec.ramsey_locked() || spec.sigma_t2() == 0.0)) {
        const double t2 = spec.ramsey_locked() ? 2.0 * spec.mu_t1() : spec.mu_t2();
        return quadrature_result(value(spec.mu_t1(), t2));
    }
    return quadrature_result(joint_expectation(spec, value, spec.ramsey_locked(), true, kPositiveRate, opts));
}

RateThreshold solve_rate_threshold(double rate, RateCurve curve, const DecoherenceSpec& spec, NoiseModel model,
                                   const QuadratureOptions& opts, double p_low, double p_high) {
    if (!(rate >= 0.0 && rate < 1.0)) throw DomainError("rate must lie in [0, 1)");
    if (!(p_low > 0.0 && p_low < p_high && p_high < 0.75)) throw DomainError("rate search window must satisfy 0 < p_low < p_high < 3/4");
    auto curve_at = [&](double p_bar) {
        const double t = solve_t_algo(spec.mu_t1(), spec.mu_t2(), p_bar, model);
        const DecoherenceSpec point = spec.with_t_algo(t);
        return curve == RateCurve::StaticHashing ? static_hashing(point, model)
                                                 : ergodic_hashing(point, model, opts).value;
    };
    double lo = p_low;
    double hi = p_high;
    if (!(curve_at(lo) > rate)) {
        throw DomainError(fmt::format("rate {} is unreachable: the curve stays below it on [{}, {}]", rate, lo, hi));
    }
    if (curve_at(hi) > rate) {
        throw DomainError(fmt::format("rate {} is not crossed on [{}, {}]", rate, lo, hi));
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (curve_at(mid) > rate) lo = mid;
        else hi = mid;
    }
    return {0.5 * (lo + hi), lo, hi};
}

void write_capacity_csv(std::ostream& os, const std::string& abscissa_name, const std::vector<CurvePoint>& points) {
    fmt::print(os, "{},cv,mode,value\n", abscissa_name);
    for (const auto& p : points) {
        fmt::print(os, "{},{},{},{}\n", p.abscissa, p.cv, p.mode, p.value);
    }
}

} // namespace tvqc
