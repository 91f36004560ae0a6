#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>

#include <cmath>
#include <sstream>

#include "tvqc/decoder.hpp"
#include "tvqc/errors.hpp"
#include "tvqc/montecarlo.hpp"

using namespace tvqc;

namespace {

DecoherenceSpec spec_at(double p, double cv = 0.0) {
    const double t = solve_t_algo(100, 200, p, NoiseModel::CtaAd);
    return DecoherenceSpec::amplitude_damping(100, cv * 100, t);
}

} // namespace

TEST(MonteCarlo, ClopperPearsonTailsAreExact) {
    // The bounds are where the binomial tails equal alpha / 2.
    for (auto [k, n] : {std::pair{3ull, 50ull}, std::pair{100ull, 800ull}, std::pair{0ull, 30ull}}) {
        const auto [lo, hi] = clopper_pearson(k, n);
        if (k > 0) {
            const boost::math::binomial b(static_cast<double>(n), lo);
            EXPECT_NEAR(1.0 - boost::math::cdf(b, static_cast<double>(k) - 1), 0.025, 1e-9);
        } else {
            EXPECT_EQ(lo, 0.0);
            EXPECT_NEAR(std::pow(1 - hi, static_cast<double>(n)), 0.025, 1e-9);
        }
        const boost::math::binomial bh(static_cast<double>(n), hi);
        EXPECT_NEAR(boost::math::cdf(bh, static_cast<double>(k)), 0.025, 1e-9);
    }
    EXPECT_THROW(clopper_pearson(1, 0), UsageError);
}

TEST(MonteCarlo, ZeroNoiseIsFlaggedUpperBound) {
    const PlanarCode code(3);
    const auto spec = DecoherenceSpec::amplitude_damping(100, 0, 1e-12);
    WerOptions o;
    o.max_blocks = 500;
    const auto e = estimate_wer(code, ChannelMode::Static, NoiseModel::CtaAd, spec, 1, o);
    EXPECT_EQ(e.wer_hat, 0.0);
    EXPECT_EQ(e.blocks, 500u);
    EXPECT_TRUE(e.flags & kWerLowFailures);
    EXPECT_TRUE(e.flags & kWerUpperBoundOnly);
    EXPECT_EQ(e.ci_low, 0.0);
    EXPECT_GT(e.ci_high, 0.0);
}

TEST(MonteCarlo, FarAboveThreshold) {
    const PlanarCode code(3);
    // Coarse pre-run with 1000 fixed blocks as the reference.
    const auto spec = spec_at(0.3);
    int fails = 0;
    BlockSample bs;
    for (int b = 0; b < 1000; ++b) {
        RngStream rng(99, static_cast<std::uint64_t>(b));
        sample_block_error(code.num_qubits(), ChannelMode::Static, spec, NoiseModel::CtaAd, rng, bs);
        fails += is_logical_failure(code, bs.error, mwpm_decode(code, syndrome(code, bs.error)));
    }
    EXPECT_GT(fails / 1000.0, 0.2);
    const auto e = estimate_wer(code, ChannelMode::Static, NoiseModel::CtaAd, spec, 5);
    EXPECT_GT(e.wer_hat, 0.2);
}

TEST(MonteCarlo, StoppingRule) {
    const PlanarCode code(3);
    const auto e = estimate_wer(code, ChannelMode::Static, NoiseModel::CtaAd, spec_at(0.1), 3);
    EXPECT_EQ(e.failures, 100u);
    EXPECT_DOUBLE_EQ(e.wer_hat, 100.0 / e.blocks);
    EXPECT_EQ(e.flags, kWerOk);
    EXPECT_DOUBLE_EQ(e.ci_low, 0.8 * e.wer_hat);
    EXPECT_DOUBLE_EQ(e.ci_high, 1.25 * e.wer_hat);
    EXPECT_LE(e.cp_low, e.wer_hat);
    EXPECT_GE(e.cp_high, e.wer_hat);
    // The last counted block is a failure: stopping one block earlier would miss the target.
    WerOptions o;
    o.max_blocks = e.blocks - 1;
    const auto short_run = estimate_wer(code, ChannelMode::Static, NoiseModel::CtaAd, spec_at(0.1), 3, o);
    EXPECT_EQ(short_run.failures, 99u);
    EXPECT_TRUE(short_run.flags & kWerLowFailures);
}

TEST(MonteCarlo, WorkerCountDoesNotChangeResult) {
    const PlanarCode code(5);
    const auto spec = spec_at(0.11, 0.25);
    WerOptions o;
    o.chunk = 37;
    const auto a = estimate_wer(code, ChannelMode::Ftvqc, NoiseModel::CtaAd, spec, 77, o);
    for (unsigned w : {2u, 3u, 8u}) {
        o.workers = w;
        const auto b = estimate_wer(code, ChannelMode::Ftvqc, NoiseModel::CtaAd, spec, 77, o);
        EXPECT_EQ(a.failures, b.failures);
        EXPECT_EQ(a.blocks, b.blocks);
    }
}

TEST(MonteCarlo, WerFloorCapsBlocks) {
    const PlanarCode code(3);
    WerOptions o;
    o.target_wer_floor = 0.5;
    const auto e = estimate_wer(code, ChannelMode::Static, NoiseModel::CtaAd, spec_at(0.01), 1, o);
    EXPECT_LE(e.blocks, 200u);
    EXPECT_THROW(estimate_wer(code, ChannelMode::Static, NoiseModel::CtaAd, spec_at(0.01), 1, WerOptions{100, 0}),
                 UsageError);
}

TEST(MonteCarlo, SingleCellSweepEqualsDirectEstimate) {
    SweepConfig cfg;
    cfg.distances = {3};
    cfg.modes = {ChannelMode::Stvqc};
    cfg.p_grid = {0.12};
    cfg.cv = 0.25;
    cfg.seed = 2024;
    const auto res = sweep(cfg);
    ASSERT_EQ(res.rows.size(), 1u);
    const auto& r = res.rows[0];
    const auto direct = estimate_wer(PlanarCode(3), ChannelMode::Stvqc, NoiseModel::CtaAd, spec_at(0.12, 0.25),
                                     cell_seed(2024, 3, ChannelMode::Stvqc, 0));
    EXPECT_EQ(r.estimate.seed, direct.seed);
    EXPECT_EQ(r.estimate.failures, direct.failures);
    EXPECT_EQ(r.estimate.blocks, direct.blocks);
}

TEST(MonteCarlo, SweepLayoutAndCsv) {
    SweepConfig cfg;
    cfg.distances = {3, 5};
    cfg.modes = {ChannelMode::Static, ChannelMode::Ftvqc};
    cfg.p_grid = {0.1, 0.12};
    cfg.cv = 0.25;
    cfg.seed = 1;
    cfg.wer.failure_target = 10;
    const auto res = sweep(cfg);
    ASSERT_EQ(res.rows.size(), 8u);
    EXPECT_EQ(res.rows[0].mode, ChannelMode::Static);
    EXPECT_EQ(res.rows[4].mode, ChannelMode::Ftvqc);
    std::ostringstream os;
    write_sweep_csv(os, res);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "d,mode,model,p_bar,cv,wer,ci_low,ci_high,failures,blocks,seed");
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
    }
    EXPECT_EQ(rows, 8);
    std::ostringstream js;
    write_sweep_json(js, res);
    EXPECT_NE(js.str().find("\"failures\": 10"), std::string::npos);

    cfg.p_grid.clear();
    EXPECT_THROW(sweep(cfg), UsageError);
}

TEST(MonteCarlo, ThresholdOfSyntheticCurves) {
    for (double q : {0.105, 0.112, 0.12}) {
        SweepResult res;
        for (int d : {3, 5, 7})
            for (int i = 0; i <= 40; ++i) {
                SweepRow r;
                r.d = d;
                r.p_bar = 0.09 + 0.001 * i;
                r.estimate.wer_hat = std::pow(r.p_bar / q, (d + 1) / 2.0);
                res.rows.push_back(r);
            }
        const auto t = estimate_threshold(res);
        EXPECT_NEAR(t.value, q, 1e-4);
        EXPECT_NEAR(t.spread, 0.0, 1e-4);
        EXPECT_EQ(t.crossings.size(), 2u);
    }
}

TEST(MonteCarlo, ThresholdErrors) {
    SweepResult res;
    for (int d : {3, 5})
        for (int i = 0; i < 5; ++i) {
            SweepRow r;
            r.d = d;
            r.p_bar = 0.01 * (i + 1);
            r.estimate.wer_hat = 0.01 * (i + 1) / d;  // larger d always better
            res.rows.push_back(r);
        }
    try {
        estimate_threshold(res);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("[0.01, 0.05]"), std::string::npos);
    }
    res.rows.resize(5);
    EXPECT_THROW(estimate_threshold(res), UsageError);
}

TEST(MonteCarlo, ModeOrderingAndCollapse) {
    const PlanarCode code(5);
    WerOptions o;
    o.failure_target = 400;
    const auto st = estimate_wer(code, ChannelMode::Static, NoiseModel::CtaAd, spec_at(0.11), 1, o);
    const auto ft = estimate_wer(code, ChannelMode::Ftvqc, NoiseModel::CtaAd, spec_at(0.11, 0.25), 2, o);
    // Static is no worse than ftvqc up to CI resolution.
    EXPECT_LE(st.cp_low, ft.cp_high);
    const auto flat = estimate_wer(code, ChannelMode::Ftvqc, NoiseModel::CtaAd, spec_at(0.11, 0.0), 3, o);
    EXPECT_TRUE(flat.cp_low <= st.cp_high && st.cp_low <= flat.cp_high);
}

TEST(MonteCarlo, MonotoneInP) {
    SweepConfig cfg;
    cfg.distances = {3};
    cfg.modes = {ChannelMode::Static};
    cfg.p_grid = {0.03, 0.06, 0.12, 0.24};
    cfg.wer.failure_target = 200;
    const auto res = sweep(cfg);
    for (std::size_t i = 0; i + 1 < res.rows.size(); ++i)
        EXPECT_LE(res.rows[i].estimate.cp_low, res.rows[i + 1].estimate.cp_high);
}
