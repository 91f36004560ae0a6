#include "tvqc/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tvqc/errors.hpp"

namespace tvqc {

namespace {

void require_positive_t1(double t1) {
    if (!(t1 > 0.0)) throw DomainError("T1 must be positive");
}

void require_time(double t) {
    if (!(t >= 0.0)) throw DomainError("elapsed time must be non-negative");
}

void require_t2(double t1, double t2) {
    require_positive_t1(t1);
    if (!(t2 > 0.0)) throw DomainError("T2 must be positive");
    if (t2 > 2.0 * t1) throw DomainError("T2 exceeds the Ramsey limit 2*T1");
}

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

} // namespace

DecoherenceSpec::DecoherenceSpec(double mu_t1, double sigma_t1, double mu_t2, double sigma_t2, double t_algo)
    : mu_t1_(mu_t1), sigma_t1_(sigma_t1), mu_t2_(mu_t2), sigma_t2_(sigma_t2), t_algo_(t_algo) {
    if (!(mu_t1 > 0.0) || !(mu_t2 > 0.0)) throw DomainError("mean T1/T2 must be positive");
    if (!(sigma_t1 >= 0.0) || !(sigma_t2 >= 0.0)) throw DomainError("T1/T2 deviations must be non-negative");
    if (!(t_algo > 0.0)) throw DomainError("t_algo must be positive");
    if (mu_t2 > 2.0 * mu_t1) throw DomainError("mean T2 exceeds the Ramsey limit 2*T1");
}

DecoherenceSpec DecoherenceSpec::amplitude_damping(double mu_t1, double sigma_t1, double t_algo) {
    DecoherenceSpec spec(mu_t1, sigma_t1, 2.0 * mu_t1, 2.0 * sigma_t1, t_algo);
    spec.ramsey_locked_ = true;
    return spec;
}

DecoherenceSpec DecoherenceSpec::from_cv(double mu_t1, double mu_t2, double cv, double t_algo) {
    if (!(cv >= 0.0)) throw DomainError("coefficient of variation must be non-negative");
    return {mu_t1, cv * mu_t1, mu_t2, cv * mu_t2, t_algo};
}

DecoherenceSpec DecoherenceSpec::with_t_algo(double t_algo) const {
    DecoherenceSpec spec(mu_t1_, sigma_t1_, mu_t2_, sigma_t2_, t_algo);
    spec.ramsey_locked_ = ramsey_locked_;
    return spec;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double standard_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double TruncatedNormal::support_mass() const { return 1.0 - q_function(mu / sigma); }

double TruncatedNormal::pdf(double x) const { return truncated_normal_pdf(x, *this); }

double TruncatedNormal::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (!(sigma > 0.0)) return x >= mu ? 1.0 : 0.0;
    return (normal_cdf((x - mu) / sigma) - normal_cdf(-mu / sigma)) / support_mass();
}

double TruncatedNormal::mean() const {
    if (!(sigma > 0.0)) return mu;
    const double beta = mu / sigma;
    return mu + sigma * standard_normal_pdf(beta) / normal_cdf(beta);
}

double TruncatedNormal::variance() const {
    if (!(sigma > 0.0)) return 0.0;
    const double alpha = -mu / sigma;
    const double mass = normal_cdf(mu / sigma);
    const double ratio = standard_normal_pdf(alpha) / mass;
    return sigma * sigma * (1.0 + alpha * ratio - ratio * ratio);
}

double truncated_normal_pdf(double x, const TruncatedNormal& model) {
    if (!(model.sigma > 0.0)) throw DomainError("truncated normal pdf requires sigma > 0");
    if (x < 0.0) return 0.0;
    const double z = (x - model.mu) / model.sigma;
    return standard_normal_pdf(z) / (model.sigma * model.support_mass());
}

double sample_truncated_normal(const TruncatedNormal& model, RngStream& rng) {
    if (!(model.sigma >= 0.0)) throw DomainError("sigma must be non-negative");
    if (model.sigma == 0.0) {
        if (model.mu < 0.0) throw DomainError("degenerate truncated normal with negative mean");
        return model.mu;
    }
    const double lower = -model.mu / model.sigma;
    if (lower < 3.0) {
        for (;;) {
            const double z = rng.normal();
            if (z >= lower) return model.mu + model.sigma * z;
        }
    }
    // Deep tail: exponential proposal (Robert 1995).
    const double rate = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
    for (;;) {
        const double z = lower - std::log1p(-rng.uniform()) / rate;
        const double d = z - rate;
        if (rng.uniform() <= std::exp(-0.5 * d * d)) return model.mu + model.sigma * z;
    }
}

PauliDist PauliDist::depolarizing(double p) {
    return {1.0 - p, p / 3.0, p / 3.0, p / 3.0};
}

bool PauliDist::valid(double tol) const {
    for (double p : {p_i, p_x, p_y, p_z}) {
        if (!(p >= -tol && p <= 1.0 + tol)) return false;
    }
    return std::abs(p_i + p_x + p_y + p_z - 1.0) <= tol;
}

double KrausSet::completeness_error() const {
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    for (const auto& e : operators) sum += e.adjoint() * e;
    return (sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

Eigen::Matrix2cd KrausSet::apply(const Eigen::Matrix2cd& rho) const {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (const auto& e : operators) out += e * rho * e.adjoint();
    return out;
}

double damping_gamma(double t1, double t) {
    require_positive_t1(t1);
    require_time(t);
    return -std::expm1(-t / t1);
}

double scattering_lambda(double t1, double t2, double t) {
    require_t2(t1, t2);
    require_time(t);
    return -std::expm1(t / t1 - 2.0 * t / t2);
}

DampingPair damping_pair(double t1, double t2, double t) {
    return {damping_gamma(t1, t), scattering_lambda(t1, t2, t)};
}

PauliDist pta_probs_ad(double t1, double t) {
    require_positive_t1(t1);
    require_time(t);
    const double decay = std::exp(-t / t1);
    const double half_decay = std::exp(-t / (2.0 * t1));
    PauliDist d;
    d.p_x = 0.25 * (1.0 - decay);
    d.p_y = d.p_x;
    d.p_z = 0.25 * (1.0 + decay - 2.0 * half_decay);
    d.p_i = 1.0 - d.p_x - d.p_y - d.p_z;
    return d;
}

PauliDist pta_probs_apd(double t1, double t2, double t) {
    require_t2(t1, t2);
    require_time(t);
    const double decay = std::exp(-t / t1);
    const double dephase = std::exp(-t / t2);
    PauliDist d;
    d.p_x = 0.25 * (1.0 - decay);
    d.p_y = d.p_x;
    d.p_z = 0.25 * (1.0 + decay - 2.0 * dephase);
    d.p_i = 1.0 - d.p_x - d.p_y - d.p_z;
    return d;
}

double cta_depol_ad(double t1, double t) {
    require_positive_t1(t1);
    require_time(t);
    return 0.75 - 0.25 * std::exp(-t / t1) - 0.5 * std::exp(-t / (2.0 * t1));
}

double cta_depol_apd(double t1, double t2, double t) {
    require_t2(t1, t2);
    require_time(t);
    return 0.75 - 0.25 * std::exp(-t / t1) - 0.5 * std::exp(-t / t2);
}

KrausSet kraus_ad(double gamma) {
    require_probability(gamma, "gamma");
    return kraus_apd({gamma, 0.0});
}

KrausSet kraus_apd(DampingPair pair) {
    require_probability(pair.gamma, "gamma");
    require_probability(pair.lambda, "lambda");
    const double g = pair.gamma;
    const double l = pair.lambda;
    KrausSet set;
    Eigen::Matrix2cd e0 = Eigen::Matrix2cd::Zero();
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt((1.0 - g) * (1.0 - l));
    set.operators.push_back(e0);
    if (g > 0.0) {
        Eigen::Matrix2cd e1 = Eigen::Matrix2cd::Zero();
        e1(0, 1) = std::sqrt(g);
        set.operators.push_back(e1);
    }
    if (l > 0.0 && g < 1.0) {
        Eigen::Matrix2cd e2 = Eigen::Matrix2cd::Zero();
        e2(1, 1) = std::sqrt((1.0 - g) * l);
        set.operators.push_back(e2);
    }
    return set;
}

bool uses_t2(NoiseModel model) { return model == NoiseModel::CtaApd || model == NoiseModel::PtaApd; }

std::string to_string(NoiseModel model) {
    switch (model) {
    case NoiseModel::CtaAd: return "cta_ad";
    case NoiseModel::CtaApd: return "cta_apd";
    case NoiseModel::PtaAd: return "pta_ad";
    case NoiseModel::PtaApd: return "pta_apd";
    }
    return "?";
}

std::string to_string(ChannelMode mode) {
    switch (mode) {
    case ChannelMode::Static: return "static";
    case ChannelMode::Stvqc: return "stvqc";
    case ChannelMode::Ftvqc: return "ftvqc";
    }
    return "?";
}

NoiseModel parse_noise_model(const std::string& name) {
    if (name == "cta_ad") return NoiseModel::CtaAd;
    if (name == "cta_apd") return NoiseModel::CtaApd;
    if (name == "pta_ad") return NoiseModel::PtaAd;
    if (name == "pta_apd") return NoiseModel::PtaApd;
    throw UsageError("unknown noise model '" + name + "' (expected cta_ad, cta_apd, pta_ad or pta_apd)");
}

ChannelMode parse_channel_mode(const std::string& name) {
    if (name == "static") return ChannelMode::Static;
    if (name == "stvqc") return ChannelMode::Stvqc;
    if (name == "ftvqc") return ChannelMode::Ftvqc;
    throw UsageError("unknown channel mode '" + name + "' (expected static, stvqc or ftvqc)");
}

PauliDist pauli_dist(NoiseModel model, double t1, double t2, double t) {
    switch (model) {
    case NoiseModel::CtaAd: return PauliDist::depolarizing(cta_depol_ad(t1, t));
    case NoiseModel::CtaApd: return PauliDist::depolarizing(cta_depol_apd(t1, t2, t));
    case NoiseModel::PtaAd: return pta_probs_ad(t1, t);
    case NoiseModel::PtaApd: return pta_probs_apd(t1, t2, t);
    }
    throw UsageError("invalid noise model");
}

double solve_t_algo(double mu_t1, double mu_t2, double target_p, NoiseModel model) {
    if (!(target_p > 0.0 && target_p < 0.75)) {
        throw DomainError("target depolarizing probability must lie in (0, 3/4); 3/4 is unreachable");
    }
    const bool apd = uses_t2(model);
    if (apd) require_t2(mu_t1, mu_t2);
    else require_positive_t1(mu_t1);
    auto depol = [&](double t) { return apd ? cta_depol_apd(mu_t1, mu_t2, t) : cta_depol_ad(mu_t1, t); };

    double lo = 0.0;
    double hi = mu_t1;
    while (depol(hi) < target_p) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw NumericalError("solve_t_algo: failed to bracket the target");
    }
    for (int iter = 0; iter < 400 && hi - lo > 0.0; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (depol(mid) < target_p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

DecoherenceDraw draw_decoherence(const DecoherenceSpec& spec, bool need_t2, RngStream& rng) {
    DecoherenceDraw draw{};
    draw.t1 = sample_truncated_normal({spec.mu_t1(), spec.sigma_t1()}, rng);
    if (need_t2 && !spec.ramsey_locked()) {
        draw.t2 = sample_truncated_normal({spec.mu_t2(), spec.sigma_t2()}, rng);
        draw.t2 = std::min(draw.t2, 2.0 * draw.t1);
    } else {
        draw.t2 = 2.0 * draw.t1;
    }
    // A realization of exactly zero would make the channel undefined.
    if (draw.t1 <= 0.0) draw.t1 = std::numeric_limits<double>::min();
    if (draw.t2 <= 0.0) draw.t2 = std::min(2.0 * draw.t1, std::numeric_limits<double>::min());
    return draw;
}

PauliLetter sample_pauli(const PauliDist& dist, RngStream& rng) {
    const double u = rng.uniform();
    if (u < dist.p_i) return PauliLetter::I;
    if (u < dist.p_i + dist.p_x) return PauliLetter::X;
    if (u < dist.p_i + dist.p_x + dist.p_y) return PauliLetter::Y;
    return PauliLetter::Z;
}

BlockSample sample_block_error(std::size_t n, ChannelMode mode, const DecoherenceSpec& spec, NoiseModel model,
                               RngStream& rng) {
    BlockSample out;
    sample_block_error(n, mode, spec, model, rng, out);
    return out;
}

void sample_block_error(std::size_t n, ChannelMode mode, const DecoherenceSpec& spec, NoiseModel model,
                        RngStream& rng, BlockSample& out) {
    if (n == 0) throw UsageError("block must contain at least one qubit");
    if (out.error.size() != n) out.error = PauliOperator(n);
    else out.error.clear();
    out.qubit_dists.resize(n);

    const bool need_t2 = uses_t2(model);
    const double t = spec.t_algo();
    switch (mode) {
    case ChannelMode::Static: {
        const PauliDist d = pauli_dist(model, spec.mu_t1(), spec.mu_t2(), t);
        std::fill(out.qubit_dists.begin(), out.qubit_dists.end(), d);
        break;
    }
    case ChannelMode::Stvqc: {
        const auto draw = draw_decoherence(spec, need_t2, rng);
        const PauliDist d = pauli_dist(model, draw.t1, draw.t2, t);
        std::fill(out.qubit_dists.begin(), out.qubit_dists.end(), d);
        break;
    }
    case ChannelMode::Ftvqc:
        for (auto& d : out.qubit_dists) {
            const auto draw = draw_decoherence(spec, need_t2, rng);
            d = pauli_dist(model, draw.t1, draw.t2, t);
        }
        break;
    default: throw UsageError("invalid channel mode");
    }
    for (std::size_t q = 0; q < n; ++q) {
        out.error.set(q, sample_pauli(out.qubit_dists[q], rng));
    }
}

} // namespace tvqc
