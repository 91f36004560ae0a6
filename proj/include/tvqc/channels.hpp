#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tvqc/pauli.hpp"
#include "tvqc/rng.hpp"

namespace tvqc {

/// Statistical model of the decoherence parameters of a qubit population
/// plus the duration of one error-correction block. Times in microseconds.
class DecoherenceSpec {
public:
    /// Throws DomainError unless mu_t1, mu_t2, t_algo > 0, sigmas >= 0 and
    /// mu_t2 <= 2 mu_t1.
    DecoherenceSpec(double mu_t1, double sigma_t1, double mu_t2, double sigma_t2, double t_algo);

    /// Pure amplitude damping population: every realization has T2 = 2 T1,
    /// so the scattering probability is identically zero.
    static DecoherenceSpec amplitude_damping(double mu_t1, double sigma_t1, double t_algo);
    /// Means and t_algo as given, both deviations set from a common coefficient of variation.
    static DecoherenceSpec from_cv(double mu_t1, double mu_t2, double cv, double t_algo);

    double mu_t1() const { return mu_t1_; }
    double sigma_t1() const { return sigma_t1_; }
    double mu_t2() const { return mu_t2_; }
    double sigma_t2() const { return sigma_t2_; }
    double t_algo() const { return t_algo_; }
    double cv_t1() const { return sigma_t1_ / mu_t1_; }
    double cv_t2() const { return sigma_t2_ / mu_t2_; }
    /// T2 realizations follow T1 (T2 = 2 T1) instead of being drawn.
    bool ramsey_locked() const { return ramsey_locked_; }

    DecoherenceSpec with_t_algo(double t_algo) const;

    friend bool operator==(const DecoherenceSpec&, const DecoherenceSpec&) = default;

private:
    double mu_t1_;
    double sigma_t1_;
    double mu_t2_;
    double sigma_t2_;
    double t_algo_;
    bool ramsey_locked_ = false;
};

/// Gaussian N(mu, sigma^2) truncated to [0, inf).
struct TruncatedNormal {
    double mu = 0.0;
    double sigma = 1.0;

    /// Probability mass of the parent Gaussian on [0, inf), i.e. 1 - Q(mu/sigma).
    double support_mass() const;
    double pdf(double x) const;
    double cdf(double x) const;
    double mean() const;
    double variance() const;
};

/// Gaussian tail function Q(x) = P(Z > x).
double q_function(double x);
double standard_normal_pdf(double x);

double truncated_normal_pdf(double x, const TruncatedNormal& model);
/// Rejection from the untruncated Gaussian; sigma == 0 returns mu.
double sample_truncated_normal(const TruncatedNormal& model, RngStream& rng);

struct DampingPair {
    double gamma = 0.0;
    double lambda = 0.0;
};

/// Pauli channel probability mass (identity, X, Y, Z).
struct PauliDist {
    double p_i = 1.0;
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;

    double error_probability() const { return p_x + p_y + p_z; }
    /// Depolarizing channel with total error probability p split evenly.
    static PauliDist depolarizing(double p);
    bool valid(double tol = 1e-12) const;
};

/// Single-qubit Kraus decomposition. Operators that are exactly zero are dropped.
struct KrausSet {
    std::vector<Eigen::Matrix2cd> operators;

    /// max-norm of sum E^dagger E - I.
    double completeness_error() const;
    Eigen::Matrix2cd apply(const Eigen::Matrix2cd& rho) const;
};

double damping_gamma(double t1, double t);
double scattering_lambda(double t1, double t2, double t);
DampingPair damping_pair(double t1, double t2, double t);

PauliDist pta_probs_ad(double t1, double t);
PauliDist pta_probs_apd(double t1, double t2, double t);
double cta_depol_ad(double t1, double t);
double cta_depol_apd(double t1, double t2, double t);

/// E0 = diag(1, sqrt(1-gamma)), E1 = sqrt(gamma)|0><1|.
KrausSet kraus_ad(double gamma);
/// E0 = diag(1, sqrt((1-g)(1-l))), E1 = sqrt(g)|0><1|, E2 = sqrt((1-g) l)|1><1|.
KrausSet kraus_apd(DampingPair pair);

enum class NoiseModel { CtaAd, CtaApd, PtaAd, PtaApd };
enum class ChannelMode { Static, Stvqc, Ftvqc };

bool uses_t2(NoiseModel model);
std::string to_string(NoiseModel model);
std::string to_string(ChannelMode mode);
NoiseModel parse_noise_model(const std::string& name);
ChannelMode parse_channel_mode(const std::string& name);

/// Per-qubit Pauli channel for realized decoherence times. AD models ignore t2.
PauliDist pauli_dist(NoiseModel model, double t1, double t2, double t);

/// Elapsed time at which the mean-parameter channel reaches depolarizing
/// probability target_p. PTA models are inverted through their CTA
/// counterpart (same total error probability). Throws DomainError when
/// target_p is outside (0, 3/4).
double solve_t_algo(double mu_t1, double mu_t2, double target_p, NoiseModel model);

/// Draws a realization of (T1, T2) from the spec. T2 is clamped to 2 T1.
struct DecoherenceDraw {
    double t1;
    double t2;
};
DecoherenceDraw draw_decoherence(const DecoherenceSpec& spec, bool need_t2, RngStream& rng);

struct BlockSample {
    PauliOperator error;
    std::vector<PauliDist> qubit_dists;
};

/// One block of the multi-qubit channel: static evaluates at the means,
/// stvqc shares one draw across the block, ftvqc draws per qubit.
BlockSample sample_block_error(std::size_t n, ChannelMode mode, const DecoherenceSpec& spec, NoiseModel model,
                               RngStream& rng);
/// Allocation-free variant; `out` is resized to n.
void sample_block_error(std::size_t n, ChannelMode mode, const DecoherenceSpec& spec, NoiseModel model,
                        RngStream& rng, BlockSample& out);

PauliLetter sample_pauli(const PauliDist& dist, RngStream& rng);

} // namespace tvqc
