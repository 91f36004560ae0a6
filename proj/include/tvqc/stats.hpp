#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tvqc/rng.hpp"

namespace tvqc {

/// Excited-state counts of a relaxation (inversion recovery) experiment.
struct DecayCurve {
    std::vector<double> delays;  // microseconds, strictly increasing
    std::uint64_t shots = 0;
    std::vector<std::uint64_t> excited_counts;

    /// Throws DomainError when the invariants do not hold.
    void validate() const;
    std::vector<double> probabilities() const;
};

/// `count` delays evenly spaced on [1, 2 true_t1] microseconds.
std::vector<double> default_delay_grid(double true_t1, std::size_t count = 20);

DecayCurve simulate_relaxation_experiment(double true_t1, std::uint64_t shots, const std::vector<double>& delays,
                                          RngStream& rng);

/// Least-squares fit of P1(t) = A exp(-t/T1) + B.
struct DecayFit {
    double t1 = 0.0;
    double stderr_t1 = 0.0;
    double amplitude = 0.0;
    double baseline = 0.0;
    double rss = 0.0;
    int iterations = 0;
};

struct FitOptions {
    int max_iterations = 200;
    double tolerance = 1e-13;
};

/// Throws DomainError for fewer than 4 points or flat data, NumericalError
/// when the iteration does not converge.
DecayFit fit_t1_decay(const DecayCurve& curve, const FitOptions& opts = {});
DecayFit fit_t1_decay(const std::vector<double>& delays, const std::vector<double>& p1, const FitOptions& opts = {});

/// Sample Pearson correlation. Throws DomainError on length mismatch,
/// fewer than 3 samples or zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct BootstrapCi {
    double low = 0.0;
    double high = 0.0;
    std::size_t skipped = 0;
};

/// Paired percentile bootstrap of the Pearson coefficient. Resample i draws
/// from RngStream(seed, i). Degenerate resamples are skipped; more than 10%
/// skipped is a NumericalError.
BootstrapCi bootstrap_ci(const std::vector<double>& x, const std::vector<double>& y, std::size_t resamples,
                         std::uint64_t seed, double level = 0.95);

enum class Verdict { Negligible, Significant };

struct Classification {
    Verdict verdict = Verdict::Negligible;
    /// Negligible, but the CI reaches the significance threshold.
    bool borderline = false;
};

inline constexpr double kSignificantCorrelation = 0.6;

Classification classify_correlation(double r, double ci_low, double ci_high);
std::string to_string(const Classification& c);

struct T1Series {
    std::string qubit_id;
    std::vector<std::string> timestamps;
    std::vector<double> t1_values;
};

struct CorrelationPair {
    std::string qubit_i;
    std::string qubit_j;
    double r = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    Classification verdict;
};

struct CorrelationReport {
    std::vector<CorrelationPair> pairs;
};

/// All pairs i < j; pair (i, j) bootstraps with seed mix_seed(seed, i, j).
CorrelationReport correlation_report(const std::vector<T1Series>& series, std::size_t resamples = 2000,
                                     std::uint64_t seed = 0);

struct SummaryStats {
    double mean = 0.0;
    double stddev = 0.0;
    double cv = 0.0;
};

SummaryStats summary_stats(const std::vector<double>& values);
SummaryStats summary_stats(const T1Series& series);

/// Keeps samples with index in [begin, end).
struct SampleWindow {
    std::size_t begin = 0;
    std::size_t end = std::numeric_limits<std::size_t>::max();
};
T1Series apply_window(const T1Series& series, const SampleWindow& window);

/// Independent truncated-normal T1 draws per qubit (qubit q uses stream q).
std::vector<T1Series> generate_t1_series(std::size_t qubits, std::size_t samples, double mu_t1, double sigma_t1,
                                         std::uint64_t seed);

// CSV I/O. Readers throw IoError naming the offending row.
std::vector<T1Series> read_t1_series(std::istream& is, std::vector<std::string>* warnings = nullptr);
std::vector<T1Series> load_t1_series(const std::string& path, std::vector<std::string>* warnings = nullptr);
void write_t1_series(std::ostream& os, const std::vector<T1Series>& series);

void write_report(std::ostream& os, const CorrelationReport& report);
void save_report(const CorrelationReport& report, const std::string& path);
CorrelationReport read_report(std::istream& is);

void write_decay_curve(std::ostream& os, const DecayCurve& curve);
DecayCurve read_decay_curve(std::istream& is);

/// Fixed-width table with one row per pair.
void print_report_table(std::ostream& os, const CorrelationReport& report);

} // namespace tvqc
