#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tvqc/channels.hpp"
#include "tvqc/planar_code.hpp"

namespace tvqc {

enum WerFlag : unsigned {
    kWerOk = 0,
    /// Fewer failures than the target were observed; CI is Clopper-Pearson.
    kWerLowFailures = 1u << 0,
    /// No failure at all; only the upper CI bound is informative.
    kWerUpperBoundOnly = 1u << 1,
};

struct WerEstimate {
    double wer_hat = 0.0;
    std::uint64_t failures = 0;
    std::uint64_t blocks = 0;
    /// Reported interval: (0.8, 1.25) x wer_hat when failures reach the
    /// target, Clopper-Pearson otherwise.
    double ci_low = 0.0;
    double ci_high = 1.0;
    /// Exact 95% Clopper-Pearson interval, always filled.
    double cp_low = 0.0;
    double cp_high = 1.0;
    std::uint64_t seed = 0;
    unsigned flags = kWerOk;
    /// Blocks decoded past the stopping point by parallel workers; they are
    /// discarded from the counts above.
    std::uint64_t overshoot = 0;
};

struct WerOptions {
    std::uint64_t failure_target = 100;
    std::uint64_t max_blocks = 200000;
    /// When positive, caps the run at ceil(failure_target / floor) blocks.
    double target_wer_floor = 0.0;
    unsigned workers = 1;
    /// Blocks handed to one worker at a time.
    std::uint64_t chunk = 256;
};

/// Exact two-sided Clopper-Pearson interval at the given confidence level.
std::pair<double, double> clopper_pearson(std::uint64_t failures, std::uint64_t trials, double level = 0.95);

/// Block i uses RngStream(seed, i). The run stops at the first block index
/// where the cumulative failure count reaches the target, so the result does
/// not depend on the number of workers.
WerEstimate estimate_wer(const PlanarCode& code, ChannelMode mode, NoiseModel model, const DecoherenceSpec& spec,
                         std::uint64_t seed, const WerOptions& opts = {});

struct SweepRow {
    int d = 0;
    ChannelMode mode = ChannelMode::Static;
    NoiseModel model = NoiseModel::CtaAd;
    double p_bar = 0.0;
    double cv = 0.0;
    WerEstimate estimate;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct SweepConfig {
    std::vector<int> distances;
    std::vector<ChannelMode> modes;
    NoiseModel model = NoiseModel::CtaAd;
    std::vector<double> p_grid;
    double cv = 0.0;
    double mu_t1 = 100.0;
    /// Only used by APD models; AD models lock T2 = 2 T1.
    double mu_t2 = 100.0;
    std::uint64_t seed = 0;
    WerOptions wer;
};

std::uint64_t cell_seed(std::uint64_t seed, int d, ChannelMode mode, std::size_t p_index);

/// Spec used for one grid point: t_algo solved so that the mean channel has
/// depolarizing probability p_bar.
DecoherenceSpec sweep_point_spec(const SweepConfig& cfg, double p_bar);

using SweepProgress = std::function<void(const SweepRow&, std::size_t done, std::size_t total)>;

/// Rows are ordered by mode, then d, then p. Throws UsageError on empty grids.
SweepResult sweep(const SweepConfig& cfg, const SweepProgress& progress = {});

struct PairCrossing {
    int d_small = 0;
    int d_large = 0;
    double p = 0.0;
};

struct ThresholdEstimate {
    double value = 0.0;
    /// Half the range of the pairwise crossings.
    double spread = 0.0;
    std::vector<PairCrossing> crossings;
};

/// Crossing of log WER between every pair of adjacent distances, by linear
/// interpolation in p. Rows must share a single mode. Throws NumericalError
/// naming the p window when some pair does not cross.
ThresholdEstimate estimate_threshold(const SweepResult& result);
ThresholdEstimate estimate_threshold(const SweepResult& result, ChannelMode mode);

void write_sweep_csv(std::ostream& os, const SweepResult& result);
void write_sweep_json(std::ostream& os, const SweepResult& result);

} // namespace tvqc
