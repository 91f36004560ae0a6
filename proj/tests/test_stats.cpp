#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "tvqc/channels.hpp"
#include "tvqc/errors.hpp"
#include "tvqc/stats.hpp"

using namespace tvqc;

TEST(Stats, DefaultDelayGrid) {
    const auto g = default_delay_grid(80);
    ASSERT_EQ(g.size(), 20u);
    EXPECT_EQ(g.front(), 1.0);
    EXPECT_EQ(g.back(), 160.0);
    EXPECT_THROW(default_delay_grid(0.4), DomainError);
}

TEST(Stats, ZeroDelayCountsAreFull) {
    RngStream rng(1, 0);
    const auto c = simulate_relaxation_experiment(80, 4000, {0.0, 10.0}, rng);
    EXPECT_EQ(c.excited_counts[0], 4000u);
}

TEST(Stats, SurvivalAtT1WithinBinomialInterval) {
    RngStream rng(2, 0);
    const auto c = simulate_relaxation_experiment(80, 4000, {80.0}, rng);
    const double p = std::exp(-1.0);
    const double sd = std::sqrt(p * (1 - p) / 4000);
    EXPECT_NEAR(c.excited_counts[0] / 4000.0, p, 3.3 * sd);
}

TEST(Stats, NoiselessFitIsExact) {
    const auto t = default_delay_grid(80);
    std::vector<double> y;
    for (double x : t) y.push_back(std::exp(-x / 80));
    const auto f = fit_t1_decay(t, y);
    EXPECT_NEAR(f.t1, 80.0, 80e-6);
    EXPECT_NEAR(f.amplitude, 1.0, 1e-6);
    EXPECT_NEAR(f.baseline, 0.0, 1e-6);
}

TEST(Stats, FitIsAFixedPoint) {
    RngStream rng(3, 0);
    const auto c = simulate_relaxation_experiment(60, 4000, default_delay_grid(60), rng);
    const auto f = fit_t1_decay(c);
    std::vector<double> y;
    for (double x : c.delays) y.push_back(f.amplitude * std::exp(-x / f.t1) + f.baseline);
    const auto g = fit_t1_decay(c.delays, y);
    EXPECT_NEAR(g.t1, f.t1, 1e-9 * f.t1);
}

TEST(Stats, FitRecoversT1) {
    int ok = 0;
    for (int i = 0; i < 500; ++i) {
        RngStream rng(4, static_cast<std::uint64_t>(i));
        const auto f = fit_t1_decay(simulate_relaxation_experiment(80, 4000, default_delay_grid(80), rng));
        ok += std::abs(f.t1 - 80) / 80 < 0.05;
    }
    EXPECT_GE(ok, 475);
}

TEST(Stats, SpamOffsetBiasIsSmall) {
    // Counts drawn from 0.95 exp(-t/T1) + 0.03.
    double sum = 0;
    const int runs = 300;
    const auto delays = default_delay_grid(80);
    for (int i = 0; i < runs; ++i) {
        RngStream rng(5, static_cast<std::uint64_t>(i));
        DecayCurve c{delays, 4000, {}};
        for (double t : delays) c.excited_counts.push_back(rng.binomial(4000, 0.95 * std::exp(-t / 80) + 0.03));
        sum += fit_t1_decay(c).t1;
    }
    EXPECT_LT(std::abs(sum / runs - 80) / 80, 0.02);
}

TEST(Stats, FitRejectsBadInput) {
    EXPECT_THROW(fit_t1_decay({1, 2, 3}, {0.9, 0.8, 0.7}), DomainError);
    EXPECT_THROW(fit_t1_decay({1, 2, 3, 4}, {0.5, 0.5, 0.5, 0.5}), DomainError);
    DecayCurve bad{{1, 1, 2, 3}, 10, {5, 5, 4, 3}};
    EXPECT_THROW(fit_t1_decay(bad), DomainError);
}

TEST(Stats, PearsonBasics) {
    const std::vector<double> x{1, 2, 3, 4, 5, 7};
    std::vector<double> y, neg, aff;
    for (double v : x) {
        y.push_back(v);
        neg.push_back(-2 * v + 7);
        aff.push_back(3 * v + 1);
    }
    EXPECT_NEAR(pearson(x, y), 1.0, 1e-15);
    EXPECT_NEAR(pearson(x, neg), -1.0, 1e-15);
    const std::vector<double> z{2, 1, 4, 3, 6, 5};
    EXPECT_NEAR(pearson(x, z), pearson(z, x), 1e-15);
    EXPECT_NEAR(pearson(aff, z), pearson(x, z), 1e-14);
    EXPECT_NEAR(pearson(neg, z), -pearson(x, z), 1e-14);
    EXPECT_THROW(pearson({1, 1, 1}, {1, 2, 3}), DomainError);
    EXPECT_THROW(pearson({1, 2}, {1, 2}), DomainError);
}

TEST(Stats, PearsonSamplingDistribution) {
    int ok = 0;
    for (int trial = 0; trial < 200; ++trial) {
        RngStream rng(6, static_cast<std::uint64_t>(trial));
        std::vector<double> x(400), y(400);
        for (int i = 0; i < 400; ++i) {
            x[i] = rng.normal();
            y[i] = 0.5 * x[i] + std::sqrt(0.75) * rng.normal();
        }
        ok += std::abs(pearson(x, y) - 0.5) < 0.1;
    }
    EXPECT_GE(ok, 190);
}

TEST(Stats, BootstrapCollapsesOnIdentity) {
    std::vector<double> x;
    for (int i = 0; i < 50; ++i) x.push_back(std::sin(i) + i);
    const auto ci = bootstrap_ci(x, x, 2000, 1);
    EXPECT_NEAR(ci.low, 1.0, 1e-12);
    EXPECT_NEAR(ci.high, 1.0, 1e-12);
}

TEST(Stats, BootstrapCoverage) {
    int covered = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        RngStream rng(7, static_cast<std::uint64_t>(t));
        std::vector<double> x(400), y(400);
        for (int i = 0; i < 400; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
        const auto ci = bootstrap_ci(x, y, 2000, static_cast<std::uint64_t>(t));
        covered += ci.low <= 0.0 && 0.0 <= ci.high;
    }
    // Binomial(500, 0.95) lies above 460 with overwhelming probability.
    EXPECT_GE(covered, 460);
    EXPECT_LE(covered, 495);
}

TEST(Stats, BootstrapStrongCorrelation) {
    RngStream rng(8, 0);
    std::vector<double> x(200), y(200);
    for (int i = 0; i < 200; ++i) {
        x[i] = rng.normal();
        y[i] = 0.9 * x[i] + std::sqrt(0.19) * rng.normal();
    }
    const auto ci = bootstrap_ci(x, y, 2000, 3);
    EXPECT_GT(ci.low, 0.6);
    const double r = pearson(x, y);
    EXPECT_LE(ci.low, r);
    EXPECT_GE(ci.high, r);
}

TEST(Stats, BootstrapSkipsDegenerateResamples) {
    // Mostly constant series: many resamples have zero variance.
    std::vector<double> x(10, 1.0), y(10, 2.0);
    x[0] = 5;
    y[0] = 3;
    EXPECT_THROW(bootstrap_ci(x, y, 2000, 1), NumericalError);
    EXPECT_THROW(bootstrap_ci({1, 2, 3}, {1, 2, 3}, 100, 1), DomainError);
}

TEST(Stats, Classification) {
    const auto b = classify_correlation(0.53, 0.3, 0.6);
    EXPECT_EQ(b.verdict, Verdict::Negligible);
    EXPECT_TRUE(b.borderline);
    EXPECT_EQ(to_string(b), "negligible (borderline)");
    EXPECT_EQ(classify_correlation(0.95, 0.9, 0.98).verdict, Verdict::Significant);
    EXPECT_EQ(to_string(classify_correlation(0.05, -0.05, 0.15)), "negligible");
    EXPECT_EQ(classify_correlation(-0.7, -0.8, -0.6).verdict, Verdict::Significant);
}

TEST(Stats, CorrelationReportPairs) {
    auto s = generate_t1_series(5, 400, 80, 20, 9);
    auto rep = correlation_report(s, 500, 1);
    ASSERT_EQ(rep.pairs.size(), 10u);
    // sd(r) is about 1 / sqrt(400) = 0.05 under independence; 4 sd bound.
    for (const auto& p : rep.pairs) {
        EXPECT_LT(std::abs(p.r), 0.2);
        EXPECT_LE(p.ci_low, p.r);
        EXPECT_GE(p.ci_high, p.r);
        EXPECT_EQ(p.verdict.verdict, Verdict::Negligible);
    }
    for (auto& x : s) x.t1_values = s[0].t1_values;
    for (const auto& p : correlation_report(s, 200, 1).pairs) EXPECT_NEAR(p.r, 1.0, 1e-12);
    s[1].t1_values.pop_back();
    EXPECT_THROW(correlation_report(s, 200, 1), UsageError);
}

TEST(Stats, SummaryStats) {
    const auto a = summary_stats(std::vector<double>{2, 4});
    EXPECT_DOUBLE_EQ(a.mean, 3.0);
    EXPECT_DOUBLE_EQ(a.stddev, std::sqrt(2.0));
    EXPECT_NEAR(a.cv, 0.4714, 1e-4);
    const auto c = summary_stats(std::vector<double>{5, 5, 5});
    EXPECT_EQ(c.stddev, 0.0);
    EXPECT_EQ(c.cv, 0.0);
    // Truncated-normal draws against the analytic truncated c_v.
    const auto s = generate_t1_series(1, 10000, 80, 20, 4)[0];
    const TruncatedNormal tn{80, 20};
    const double cv = std::sqrt(tn.variance()) / tn.mean();
    EXPECT_NEAR(summary_stats(s).cv / cv, 1.0, 0.03);
}

TEST(Stats, WindowKeepsRange) {
    T1Series s{"Q0", {"a", "b", "c", "d"}, {1, 2, 3, 4}};
    const auto w = apply_window(s, {1, 3});
    EXPECT_EQ(w.t1_values, (std::vector<double>{2, 3}));
    EXPECT_EQ(w.timestamps, (std::vector<std::string>{"b", "c"}));
    EXPECT_TRUE(apply_window(s, {5, 9}).t1_values.empty());
}

TEST(Stats, T1SeriesCsvRoundTrip) {
    const auto s = generate_t1_series(5, 37, 80, 20, 10);
    std::stringstream io;
    write_t1_series(io, s);
    const auto back = read_t1_series(io);
    ASSERT_EQ(back.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(back[i].qubit_id, s[i].qubit_id);
        EXPECT_EQ(back[i].t1_values, s[i].t1_values);
        EXPECT_EQ(back[i].timestamps, s[i].timestamps);
    }
}

TEST(Stats, CsvErrors) {
    std::istringstream empty("");
    EXPECT_THROW(read_t1_series(empty), IoError);
    std::istringstream header("timestamp,qubit_id,t1_us\n");
    std::vector<std::string> warnings;
    EXPECT_TRUE(read_t1_series(header, &warnings).empty());
    EXPECT_EQ(warnings.size(), 1u);
    std::istringstream bad("timestamp,qubit_id,t1_us\n0,Q0,80\n1,Q0,abc\n");
    try {
        read_t1_series(bad);
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos);
    }
    std::istringstream neg("timestamp,qubit_id,t1_us\n0,Q0,-1\n");
    EXPECT_THROW(read_t1_series(neg), IoError);
    std::istringstream wrong("time,qubit,t1\n");
    EXPECT_THROW(read_t1_series(wrong), IoError);
    EXPECT_THROW(load_t1_series("/nonexistent/file.csv"), IoError);
}

TEST(Stats, ReportAndDecayRoundTrip) {
    const auto rep = correlation_report(generate_t1_series(3, 50, 80, 20, 2), 300, 5);
    std::stringstream io;
    write_report(io, rep);
    const auto back = read_report(io);
    ASSERT_EQ(back.pairs.size(), rep.pairs.size());
    for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
        EXPECT_EQ(back.pairs[i].r, rep.pairs[i].r);
        EXPECT_EQ(back.pairs[i].ci_low, rep.pairs[i].ci_low);
        EXPECT_EQ(to_string(back.pairs[i].verdict), to_string(rep.pairs[i].verdict));
    }
    RngStream rng(1, 0);
    const auto c = simulate_relaxation_experiment(80, 4000, default_delay_grid(80), rng);
    std::stringstream dc;
    write_decay_curve(dc, c);
    const auto c2 = read_decay_curve(dc);
    EXPECT_EQ(c2.delays, c.delays);
    EXPECT_EQ(c2.excited_counts, c.excited_counts);
    std::istringstream over("delay_us,shots,excited_count\n1,10,11\n");
    EXPECT_THROW(read_decay_curve(over), IoError);
}

TEST(Stats, FiveQubitFixture) {
    const auto s = load_t1_series(std::string(TVQC_TEST_DATA) + "/t1_five_qubits.csv");
    ASSERT_EQ(s.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(s[i].qubit_id, "Q" + std::to_string(i));
        EXPECT_EQ(s[i].t1_values.size(), 12u);
    }
}
