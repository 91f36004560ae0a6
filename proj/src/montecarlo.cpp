#include "tvqc/montecarlo.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

#include "tvqc/decoder.hpp"
#include "tvqc/errors.hpp"

namespace tvqc {

std::pair<double, double> clopper_pearson(std::uint64_t failures, std::uint64_t trials, double level) {
    if (trials == 0) throw UsageError("clopper_pearson: zero trials");
    if (failures > trials) throw UsageError("clopper_pearson: failures exceed trials");
    if (!(level > 0.0 && level < 1.0)) throw UsageError("clopper_pearson: level must lie in (0, 1)");
    const double alpha = 1.0 - level;
    const double k = static_cast<double>(failures);
    const double n = static_cast<double>(trials);
    double lo = 0.0;
    double hi = 1.0;
    if (failures > 0) lo = boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2.0);
    if (failures < trials) hi = boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
    return {lo, hi};
}

namespace {

struct Worker {
    BlockSample sample;
    Syndrome syn;
};

// Decodes blocks [begin, end) and writes one failure bit per block.
void run_range(const PlanarCode& code, ChannelMode mode, NoiseModel model, const DecoherenceSpec& spec,
               std::uint64_t seed, std::uint64_t begin, std::uint64_t end, std::uint8_t* out, Worker& w) {
    const std::size_t n = code.num_qubits();
    for (std::uint64_t b = begin; b < end; ++b) {
        RngStream rng(seed, b);
        sample_block_error(n, mode, spec, model, rng, w.sample);
        syndrome(code, w.sample.error, w.syn);
        const PauliOperator corr = mwpm_decode(code, w.syn);
        out[b - begin] = is_logical_failure(code, w.sample.error, corr) ? 1 : 0;
    }
}

} // namespace

WerEstimate estimate_wer(const PlanarCode& code, ChannelMode mode, NoiseModel model, const DecoherenceSpec& spec,
                         std::uint64_t seed, const WerOptions& opts) {
    if (opts.max_blocks < 1) throw UsageError("estimate_wer: max_blocks must be at least 1");
    if (opts.failure_target < 1) throw UsageError("estimate_wer: failure_target must be at least 1");
    if (opts.target_wer_floor < 0.0 || opts.target_wer_floor > 1.0)
        throw UsageError("estimate_wer: target_wer_floor must lie in [0, 1]");

    std::uint64_t cap = opts.max_blocks;
    if (opts.target_wer_floor > 0.0) {
        const double by_floor = std::ceil(static_cast<double>(opts.failure_target) / opts.target_wer_floor);
        if (by_floor < static_cast<double>(cap)) cap = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(by_floor));
    }
    const unsigned workers = std::max(1u, opts.workers);
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk);

    std::vector<Worker> state(workers);
    std::vector<std::uint8_t> bits;
    WerEstimate est;
    est.seed = seed;

    std::uint64_t next = 0;
    bool stopped = false;
    while (!stopped && next < cap) {
        const std::uint64_t round = std::min<std::uint64_t>(chunk * workers, cap - next);
        bits.assign(round, 0);
        const std::uint64_t per = (round + workers - 1) / workers;
        if (workers == 1 || round <= chunk) {
            run_range(code, mode, model, spec, seed, next, next + round, bits.data(), state[0]);
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                const std::uint64_t lo = std::min(round, w * per);
                const std::uint64_t hi = std::min(round, lo + per);
                if (lo >= hi) break;
                pool.emplace_back([&, lo, hi, w] {
                    run_range(code, mode, model, spec, seed, next + lo, next + hi, bits.data() + lo, state[w]);
                });
            }
        }
        for (std::uint64_t i = 0; i < round; ++i) {
            est.failures += bits[i];
            ++est.blocks;
            if (est.failures >= opts.failure_target) {
                est.overshoot = round - i - 1;
                stopped = true;
                break;
            }
        }
        next += round;
    }

    est.wer_hat = static_cast<double>(est.failures) / static_cast<double>(est.blocks);
    const auto [lo, hi] = clopper_pearson(est.failures, est.blocks);
    est.cp_low = lo;
    est.cp_high = hi;
    if (est.failures >= opts.failure_target) {
        est.ci_low = 0.8 * est.wer_hat;
        est.ci_high = std::min(1.0, 1.25 * est.wer_hat);
    } else {
        est.flags |= kWerLowFailures;
        if (est.failures == 0) est.flags |= kWerUpperBoundOnly;
        est.ci_low = lo;
        est.ci_high = hi;
    }
    return est;
}

std::uint64_t cell_seed(std::uint64_t seed, int d, ChannelMode mode, std::size_t p_index) {
    return mix_seed(seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(mode), p_index);
}

DecoherenceSpec sweep_point_spec(const SweepConfig& cfg, double p_bar) {
    if (uses_t2(cfg.model)) {
        const double t = solve_t_algo(cfg.mu_t1, cfg.mu_t2, p_bar, cfg.model);
        return DecoherenceSpec::from_cv(cfg.mu_t1, cfg.mu_t2, cfg.cv, t);
    }
    const double t = solve_t_algo(cfg.mu_t1, 2.0 * cfg.mu_t1, p_bar, cfg.model);
    return DecoherenceSpec::amplitude_damping(cfg.mu_t1, cfg.cv * cfg.mu_t1, t);
}

SweepResult sweep(const SweepConfig& cfg, const SweepProgress& progress) {
    if (cfg.distances.empty()) throw UsageError("sweep: empty distance list");
    if (cfg.modes.empty()) throw UsageError("sweep: empty mode list");
    if (cfg.p_grid.empty()) throw UsageError("sweep: empty p grid");
    if (cfg.cv < 0.0) throw UsageError("sweep: cv must be non-negative");

    std::vector<DecoherenceSpec> specs;
    specs.reserve(cfg.p_grid.size());
    for (double p : cfg.p_grid) specs.push_back(sweep_point_spec(cfg, p));

    SweepResult out;
    const std::size_t total = cfg.modes.size() * cfg.distances.size() * cfg.p_grid.size();
    for (ChannelMode mode : cfg.modes) {
        for (int d : cfg.distances) {
            const PlanarCode code(d);
            for (std::size_t i = 0; i < cfg.p_grid.size(); ++i) {
                SweepRow row;
                row.d = d;
                row.mode = mode;
                row.model = cfg.model;
                row.p_bar = cfg.p_grid[i];
                row.cv = cfg.cv;
                row.estimate = estimate_wer(code, mode, cfg.model, specs[i], cell_seed(cfg.seed, d, mode, i), cfg.wer);
                out.rows.push_back(row);
                if (progress) progress(out.rows.back(), out.rows.size(), total);
            }
        }
    }
    return out;
}

namespace {

std::optional<double> first_crossing(const std::map<double, double>& small, const std::map<double, double>& large) {
    // g(p) = log WER_small - log WER_large; positive below threshold.
    std::vector<std::pair<double, double>> g;
    for (const auto& [p, w] : small) {
        auto it = large.find(p);
        if (it == large.end() || w <= 0.0 || it->second <= 0.0) continue;
        g.emplace_back(p, std::log(w) - std::log(it->second));
    }
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const auto [p0, g0] = g[i];
        const auto [p1, g1] = g[i + 1];
        if (g0 == 0.0) return p0;
        if (g0 > 0.0 && g1 <= 0.0) return p0 + (p1 - p0) * g0 / (g0 - g1);
    }
    return std::nullopt;
}

} // namespace

ThresholdEstimate estimate_threshold(const SweepResult& result) {
    if (result.rows.empty()) throw UsageError("estimate_threshold: empty sweep");
    const ChannelMode mode = result.rows.front().mode;
    for (const auto& r : result.rows)
        if (r.mode != mode) throw UsageError("estimate_threshold: rows mix channel modes; select one");
    return estimate_threshold(result, mode);
}

ThresholdEstimate estimate_threshold(const SweepResult& result, ChannelMode mode) {
    std::map<int, std::map<double, double>> curves;
    double p_lo = std::numeric_limits<double>::infinity();
    double p_hi = -p_lo;
    for (const auto& r : result.rows) {
        if (r.mode != mode) continue;
        curves[r.d][r.p_bar] = r.estimate.wer_hat;
        p_lo = std::min(p_lo, r.p_bar);
        p_hi = std::max(p_hi, r.p_bar);
    }
    if (curves.size() < 2) throw UsageError("estimate_threshold: need at least two distances");
    for (const auto& [d, c] : curves)
        if (c.size() < 4) throw UsageError(fmt::format("estimate_threshold: d={} has fewer than 4 grid points", d));

    ThresholdEstimate est;
    for (auto it = curves.begin(); std::next(it) != curves.end(); ++it) {
        auto nx = std::next(it);
        auto p = first_crossing(it->second, nx->second);
        if (!p)
            throw NumericalError(fmt::format("estimate_threshold: d={} and d={} curves do not cross in p window [{}, {}]",
                                             it->first, nx->first, p_lo, p_hi));
        est.crossings.push_back({it->first, nx->first, *p});
    }
    double sum = 0.0;
    double lo = est.crossings.front().p;
    double hi = lo;
    for (const auto& c : est.crossings) {
        sum += c.p;
        lo = std::min(lo, c.p);
        hi = std::max(hi, c.p);
    }
    est.value = sum / static_cast<double>(est.crossings.size());
    est.spread = 0.5 * (hi - lo);
    return est;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "d,mode,model,p_bar,cv,wer,ci_low,ci_high,failures,blocks,seed\n";
    for (const auto& r : result.rows) {
        const auto& e = r.estimate;
        fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{}\n", r.d, to_string(r.mode), to_string(r.model), r.p_bar, r.cv,
                   e.wer_hat, e.ci_low, e.ci_high, e.failures, e.blocks, e.seed);
    }
}

void write_sweep_json(std::ostream& os, const SweepResult& result) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : result.rows) {
        const auto& e = r.estimate;
        rows.push_back({{"d", r.d},
                        {"mode", to_string(r.mode)},
                        {"model", to_string(r.model)},
                        {"p_bar", r.p_bar},
                        {"cv", r.cv},
                        {"wer", e.wer_hat},
                        {"ci_low", e.ci_low},
                        {"ci_high", e.ci_high},
                        {"cp_low", e.cp_low},
                        {"cp_high", e.cp_high},
                        {"failures", e.failures},
                        {"blocks", e.blocks},
                        {"seed", e.seed},
                        {"low_failures", (e.flags & kWerLowFailures) != 0},
                        {"upper_bound_only", (e.flags & kWerUpperBoundOnly) != 0}});
    }
    os << nlohmann::ordered_json{{"rows", rows}}.dump(2) << '\n';
}

} // namespace tvqc
