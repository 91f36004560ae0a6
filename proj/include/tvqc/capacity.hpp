#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tvqc/channels.hpp"

namespace tvqc {

/// Validated density matrix.
class DensityMatrix {
public:
    /// Throws DomainError unless Hermitian (1e-12), unit trace (1e-12) and
    /// eigenvalues >= -1e-10.
    explicit DensityMatrix(Eigen::MatrixXcd rho);
    /// diag(1 - xi, xi)
    static DensityMatrix qubit_diagonal(double xi);
    /// (I + r . sigma) / 2 with |r| <= 1.
    static DensityMatrix qubit_bloch(double rx, double ry, double rz);

    const Eigen::MatrixXcd& matrix() const { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }

private:
    Eigen::MatrixXcd rho_;
};

enum class CapacityMethod { ClosedForm, KrausSearch, Quadrature };
std::string to_string(CapacityMethod method);

struct CapacityResult {
    double value = 0.0;
    std::optional<double> argmax_xi;
    CapacityMethod method = CapacityMethod::ClosedForm;
    /// The optimum was negative and has been reported as 0.
    bool clamped = false;
};

/// Input states searched when maximizing coherent information.
enum class InputSearch {
    Diagonal,  ///< rho = diag(1 - xi, xi); exact for amplitude damping
    Bloch,     ///< full Bloch ball, for auditing the diagonal assumption
};

struct QuadratureOptions {
    std::size_t nodes = 257;
    /// Integration window is [max(0, mu - k sigma), mu + k sigma].
    double span_sigmas = 8.0;
    InputSearch search = InputSearch::Diagonal;
    /// Per-realization coherent-information search: coarse-scan size and
    /// xi tolerance of the golden-section refinement. The value error is
    /// quadratic in the xi error.
    std::size_t coarse_points = 32;
    double xi_tolerance = 1e-7;
    /// Clamp each realized hashing bound at 0 before averaging (per-use
    /// achievability). When false the raw bound is averaged and only the
    /// final expectation is floored at 0.
    bool clamp_realizations = false;
};

double binary_entropy(double x);
/// Shannon entropy in bits of a probability vector; 0 log 0 = 0.
double shannon_entropy(std::span<const double> probs);
/// Eigenvalues of a small Hermitian matrix (closed form for 2x2 and 3x3).
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m);
/// Von Neumann entropy in bits; eigenvalues below 1e-14 count as zero.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

CapacityResult cq_ad_closed(double gamma);

/// S(N(rho)) - S(rho_E) for rho = diag(1 - xi, xi).
double coherent_information_kraus(const KrausSet& kraus, double xi);
double coherent_information_kraus(const KrausSet& kraus, const DensityMatrix& rho);
/// As above without validating the Kraus set or the input state.
double coherent_information_unchecked(const KrausSet& kraus, const Eigen::Matrix2cd& rho);

CapacityResult maximize_coherent_information(const KrausSet& kraus, InputSearch search = InputSearch::Diagonal,
                                             std::size_t coarse_points = 1024, double xi_tolerance = 1e-9);

/// 1 - H(p). Negative values are returned unchanged.
double hashing_bound(const PauliDist& p);

/// Ergodic capacity of the fast time-varying amplitude damping channel.
CapacityResult ergodic_capacity_ad(const DecoherenceSpec& spec, const QuadratureOptions& opts = {});
/// Expected hashing bound over the decoherence distribution, floored at 0.
CapacityResult ergodic_hashing(const DecoherenceSpec& spec, NoiseModel model, const QuadratureOptions& opts = {});
/// Lower bound: expected maximal coherent information of the APD channel.
CapacityResult ergodic_capacity_apd_lower(const DecoherenceSpec& spec, const QuadratureOptions& opts = {});

/// Static hashing bound of the mean-parameter channel.
double static_hashing(const DecoherenceSpec& spec, NoiseModel model);

enum class RateCurve { StaticHashing, ErgodicHashing };

/// Mean depolarizing probability at which the chosen curve equals `rate`,
/// searched on [p_low, p_high]. `spec` supplies means and deviations; its
/// t_algo is replaced per point.
struct RateThreshold {
    double p_bar;
    double bracket_low;
    double bracket_high;
};
inline constexpr double kRateSearchLow = 1e-3;
RateThreshold solve_rate_threshold(double rate, RateCurve curve, const DecoherenceSpec& spec, NoiseModel model,
                                   const QuadratureOptions& opts = {}, double p_low = kRateSearchLow,
                                   double p_high = 0.75 - 1e-12);

/// One point of a capacity curve for CSV export.
struct CurvePoint {
    double abscissa;   ///< gamma_bar or p_bar
    double cv;
    std::string mode;  ///< "static" or "ergodic"
    double value;
};
void write_capacity_csv(std::ostream& os, const std::string& abscissa_name, const std::vector<CurvePoint>& points);

} // namespace tvqc
