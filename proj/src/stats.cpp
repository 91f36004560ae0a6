#include "tvqc/stats.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include "tvqc/channels.hpp"
#include "tvqc/errors.hpp"

namespace tvqc {

void DecayCurve::validate() const {
    if (delays.size() != excited_counts.size()) throw DomainError("DecayCurve: delays and counts differ in length");
    if (shots < 1) throw DomainError("DecayCurve: shots must be at least 1");
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (!std::isfinite(delays[i]) || delays[i] < 0.0) throw DomainError("DecayCurve: delays must be finite and >= 0");
        if (i > 0 && !(delays[i] > delays[i - 1])) throw DomainError("DecayCurve: delays must be strictly increasing");
        if (excited_counts[i] > shots) throw DomainError("DecayCurve: excited count exceeds shots");
    }
}

std::vector<double> DecayCurve::probabilities() const {
    std::vector<double> p(excited_counts.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = static_cast<double>(excited_counts[i]) / static_cast<double>(shots);
    return p;
}

std::vector<double> default_delay_grid(double true_t1, std::size_t count) {
    if (count < 2) throw DomainError("default_delay_grid: need at least 2 delays");
    const double hi = 2.0 * true_t1;
    if (!(hi > 1.0)) throw DomainError("default_delay_grid: 2 T1 must exceed the first delay of 1 us");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = 1.0 + (hi - 1.0) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

DecayCurve simulate_relaxation_experiment(double true_t1, std::uint64_t shots, const std::vector<double>& delays,
                                          RngStream& rng) {
    if (!(true_t1 > 0.0)) throw DomainError("simulate_relaxation_experiment: T1 must be positive");
    if (shots < 1) throw DomainError("simulate_relaxation_experiment: shots must be at least 1");
    DecayCurve c;
    c.delays = delays;
    c.shots = shots;
    c.excited_counts.reserve(delays.size());
    for (double t : delays) c.excited_counts.push_back(rng.binomial(shots, std::exp(-t / true_t1)));
    c.validate();
    return c;
}

namespace {

// root_w holds square roots of the least-squares weights.
DecayFit fit_weighted(const std::vector<double>& t, const std::vector<double>& y, const std::vector<double>& root_w,
                      const FitOptions& opts) {
    const std::size_t n = t.size();
    if (y.size() != n) throw DomainError("fit_t1_decay: delays and values differ in length");
    if (n < 4) throw DomainError("fit_t1_decay: need at least 4 delay points");
    const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
    const double ymin = *ymin_it;
    const double ymax = *ymax_it;
    if (!(ymax - ymin > 0.0)) throw DomainError("fit_t1_decay: degenerate (flat) data");

    // Start: baseline 0 unless the data goes negative, then a weighted
    // log-linear regression of y - B against t.
    double b = std::min(0.0, ymin - 1e-3);
    double sw = 0, swt = 0, swl = 0, swtt = 0, swtl = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = y[i] - b;
        if (z <= 0.0) continue;
        const double w = z * z;
        const double l = std::log(z);
        sw += w;
        swt += w * t[i];
        swl += w * l;
        swtt += w * t[i] * t[i];
        swtl += w * t[i] * l;
    }
    const double det = sw * swtt - swt * swt;
    double k = det > 0.0 ? -(sw * swtl - swt * swl) / det : 0.0;
    double a = 0.0;
    if (!(k > 0.0) || !std::isfinite(k)) k = 1.0 / std::max(t.back(), 1e-12);
    a = std::exp((swl + k * swt) / sw);
    if (!std::isfinite(a)) a = ymax - ymin;

    // Levenberg-Marquardt on (A, k, B) with k = 1/T1.
    auto residuals = [&](double aa, double kk, double bb, Eigen::VectorXd& r) {
        for (std::size_t i = 0; i < n; ++i) r[static_cast<Eigen::Index>(i)] = root_w[i] * (aa * std::exp(-kk * t[i]) + bb - y[i]);
    };
    Eigen::VectorXd r(static_cast<Eigen::Index>(n));
    Eigen::MatrixXd J(static_cast<Eigen::Index>(n), 3);
    residuals(a, k, b, r);
    double rss = r.squaredNorm();
    double mu = 1e-3;
    int it = 0;
    bool converged = false;
    for (; it < opts.max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-k * t[i]);
            const auto row = static_cast<Eigen::Index>(i);
            J(row, 0) = root_w[i] * e;
            J(row, 1) = -root_w[i] * a * t[i] * e;
            J(row, 2) = root_w[i];
        }
        const Eigen::Matrix3d jtj = J.transpose() * J;
        const Eigen::Vector3d g = J.transpose() * r;
        if (g.norm() == 0.0) {
            converged = true;
            break;
        }
        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::Matrix3d m = jtj;
            m.diagonal() += mu * jtj.diagonal().cwiseMax(1e-300);
            const Eigen::Vector3d step = m.ldlt().solve(-g);
            const double a2 = a + step[0];
            const double k2 = k + step[1];
            const double b2 = b + step[2];
            if (!(k2 > 0.0) || !std::isfinite(a2 + k2 + b2)) {
                mu *= 10.0;
                continue;
            }
            Eigen::VectorXd r2(r.size());
            residuals(a2, k2, b2, r2);
            const double rss2 = r2.squaredNorm();
            if (rss2 <= rss) {
                const double rel = std::abs(step[1]) / k + std::abs(step[0]) / std::max(std::abs(a), 1e-300);
                const bool small = rel < opts.tolerance || rss - rss2 <= opts.tolerance * opts.tolerance * rss;
                a = a2;
                k = k2;
                b = b2;
                r = r2;
                rss = rss2;
                mu = std::max(mu / 10.0, 1e-15);
                accepted = true;
                if (small) converged = true;
                break;
            }
            mu *= 10.0;
        }
        if (!accepted) {
            // No descent direction left: the current point is a minimum to
            // machine precision.
            converged = true;
            break;
        }
        if (converged) break;
    }
    if (!converged)
        throw NumericalError(fmt::format("fit_t1_decay: no convergence after {} iterations (rss {:.3e}, T1 {:.6g})",
                                         it, rss, 1.0 / k));

    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::exp(-k * t[i]);
        const auto row = static_cast<Eigen::Index>(i);
        J(row, 0) = root_w[i] * e;
        J(row, 1) = -root_w[i] * a * t[i] * e;
        J(row, 2) = root_w[i];
    }
    const Eigen::Matrix3d jtj = J.transpose() * J;
    const double s2 = rss / static_cast<double>(n - 3);
    const Eigen::Matrix3d cov = s2 * jtj.inverse();
    DecayFit fit;
    fit.t1 = 1.0 / k;
    fit.stderr_t1 = std::sqrt(std::max(0.0, cov(1, 1))) / (k * k);
    fit.amplitude = a;
    fit.baseline = b;
    fit.rss = rss;
    fit.iterations = it + 1;
    return fit;
}

} // namespace

DecayFit fit_t1_decay(const DecayCurve& curve, const FitOptions& opts) {
    curve.validate();
    // Inverse binomial variance, with (k + 1/2) / (N + 1) keeping the
    // weights finite at counts of 0 or N.
    const double shots = static_cast<double>(curve.shots);
    std::vector<double> sw(curve.delays.size());
    for (std::size_t i = 0; i < sw.size(); ++i) {
        const double q = (static_cast<double>(curve.excited_counts[i]) + 0.5) / (shots + 1.0);
        sw[i] = std::sqrt(shots / (q * (1.0 - q)));
    }
    return fit_weighted(curve.delays, curve.probabilities(), sw, opts);
}

DecayFit fit_t1_decay(const std::vector<double>& t, const std::vector<double>& y, const FitOptions& opts) {
    return fit_weighted(t, y, std::vector<double>(t.size(), 1.0), opts);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("pearson: series differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw DomainError("pearson: need at least 3 samples");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw DomainError("pearson: undefined correlation (zero variance)");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

// Linear interpolation between order statistics (Hyndman-Fan type 7).
double percentile(const std::vector<double>& sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

BootstrapCi bootstrap_ci(const std::vector<double>& x, const std::vector<double>& y, std::size_t resamples,
                         std::uint64_t seed, double level) {
    if (x.size() != y.size()) throw DomainError("bootstrap_ci: series differ in length");
    if (x.size() < 10) throw DomainError("bootstrap_ci: need at least 10 samples");
    if (resamples < 1) throw DomainError("bootstrap_ci: resamples must be positive");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("bootstrap_ci: level must lie in (0, 1)");
    const double r0 = pearson(x, y);
    const std::size_t n = x.size();
    std::vector<double> rs;
    rs.reserve(resamples);
    std::vector<double> bx(n), by(n);
    BootstrapCi ci;
    for (std::size_t b = 0; b < resamples; ++b) {
        RngStream rng(seed, b);
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = static_cast<std::size_t>(rng.below(n));
            bx[i] = x[j];
            by[i] = y[j];
        }
        try {
            rs.push_back(pearson(bx, by));
        } catch (const DomainError&) {
            ++ci.skipped;
        }
    }
    if (ci.skipped * 10 > resamples)
        throw NumericalError(fmt::format("bootstrap_ci: {} of {} resamples were degenerate", ci.skipped, resamples));
    std::sort(rs.begin(), rs.end());
    const double tail = 0.5 * (1.0 - level);
    // The percentile interval is widened to the point estimate in the rare
    // case where r lies outside it.
    ci.low = std::min(percentile(rs, tail), r0);
    ci.high = std::max(percentile(rs, 1.0 - tail), r0);
    return ci;
}

Classification classify_correlation(double r, double ci_low, double ci_high) {
    if (!(ci_low <= ci_high)) throw DomainError("classify_correlation: invalid interval");
    Classification c;
    if (std::abs(r) >= kSignificantCorrelation) {
        c.verdict = Verdict::Significant;
    } else {
        c.borderline = std::max(std::abs(ci_low), std::abs(ci_high)) >= kSignificantCorrelation;
    }
    return c;
}

std::string to_string(const Classification& c) {
    if (c.verdict == Verdict::Significant) return "significant";
    return c.borderline ? "negligible (borderline)" : "negligible";
}

CorrelationReport correlation_report(const std::vector<T1Series>& series, std::size_t resamples, std::uint64_t seed) {
    if (series.size() < 2) throw UsageError("correlation_report: need at least 2 series");
    for (const auto& s : series)
        if (s.t1_values.size() != series.front().t1_values.size())
            throw UsageError(fmt::format("correlation_report: series {} has {} samples, {} has {}", s.qubit_id,
                                         s.t1_values.size(), series.front().qubit_id,
                                         series.front().t1_values.size()));
    CorrelationReport rep;
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t j = i + 1; j < series.size(); ++j) {
            CorrelationPair p;
            p.qubit_i = series[i].qubit_id;
            p.qubit_j = series[j].qubit_id;
            p.r = pearson(series[i].t1_values, series[j].t1_values);
            const auto ci = bootstrap_ci(series[i].t1_values, series[j].t1_values, resamples, mix_seed(seed, i, j));
            p.ci_low = ci.low;
            p.ci_high = ci.high;
            p.verdict = classify_correlation(p.r, p.ci_low, p.ci_high);
            rep.pairs.push_back(std::move(p));
        }
    }
    return rep;
}

SummaryStats summary_stats(const std::vector<double>& v) {
    if (v.size() < 2) throw DomainError("summary_stats: need at least 2 samples");
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    SummaryStats s;
    s.mean = m;
    s.stddev = std::sqrt(ss / (n - 1.0));
    s.cv = m != 0.0 ? s.stddev / m : 0.0;
    return s;
}

SummaryStats summary_stats(const T1Series& series) { return summary_stats(series.t1_values); }

T1Series apply_window(const T1Series& s, const SampleWindow& w) {
    const std::size_t end = std::min(w.end, s.t1_values.size());
    const std::size_t begin = std::min(w.begin, end);
    T1Series out;
    out.qubit_id = s.qubit_id;
    out.t1_values.assign(s.t1_values.begin() + static_cast<std::ptrdiff_t>(begin),
                         s.t1_values.begin() + static_cast<std::ptrdiff_t>(end));
    if (s.timestamps.size() == s.t1_values.size())
        out.timestamps.assign(s.timestamps.begin() + static_cast<std::ptrdiff_t>(begin),
                              s.timestamps.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

std::vector<T1Series> generate_t1_series(std::size_t qubits, std::size_t samples, double mu_t1, double sigma_t1,
                                         std::uint64_t seed) {
    if (!(mu_t1 > 0.0) || sigma_t1 < 0.0) throw DomainError("generate_t1_series: need mu_t1 > 0 and sigma_t1 >= 0");
    std::vector<T1Series> out(qubits);
    const TruncatedNormal model{mu_t1, sigma_t1};
    for (std::size_t q = 0; q < qubits; ++q) {
        RngStream rng(seed, q);
        out[q].qubit_id = fmt::format("Q{}", q);
        for (std::size_t i = 0; i < samples; ++i) {
            out[q].timestamps.push_back(std::to_string(i));
            out[q].t1_values.push_back(sample_truncated_normal(model, rng));
        }
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

struct CsvReader {
    CsvReader(std::istream& in, std::string name) : is(in), what(std::move(name)) {}

    std::istream& is;
    std::string what;
    std::size_t row = 0;
    std::string line;

    // Returns false at end of input; skips blank lines.
    bool next(std::vector<std::string_view>& fields) {
        while (std::getline(is, line)) {
            ++row;
            if (trim(line).empty()) continue;
            fields = split(line);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw IoError(fmt::format("{}: row {}: {}", what, row, msg));
    }

    void expect_header(const std::string& header) {
        std::vector<std::string_view> f;
        if (!next(f)) throw IoError(fmt::format("{}: empty input", what));
        std::string joined;
        for (std::size_t i = 0; i < f.size(); ++i) joined += (i ? "," : "") + std::string(f[i]);
        if (joined != header) fail(fmt::format("expected header '{}', got '{}'", header, joined));
    }

    void expect_fields(const std::vector<std::string_view>& f, std::size_t n) const {
        if (f.size() != n) fail(fmt::format("expected {} fields, got {}", n, f.size()));
    }

    double number(std::string_view s, const char* name) const {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
            fail(fmt::format("{} '{}' is not a finite number", name, s));
        return v;
    }

    std::uint64_t count(std::string_view s, const char* name) const {
        std::uint64_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            fail(fmt::format("{} '{}' is not a non-negative integer", name, s));
        return v;
    }
};

} // namespace

std::vector<T1Series> read_t1_series(std::istream& is, std::vector<std::string>* warnings) {
    CsvReader rd(is, "T1 series");
    rd.expect_header("timestamp,qubit_id,t1_us");
    std::vector<T1Series> out;
    std::map<std::string, std::size_t, std::less<>> index;
    std::vector<std::string_view> f;
    while (rd.next(f)) {
        rd.expect_fields(f, 3);
        if (f[1].empty()) rd.fail("empty qubit_id");
        const double v = rd.number(f[2], "t1_us");
        if (!(v > 0.0)) rd.fail(fmt::format("t1_us must be positive, got {}", v));
        auto it = index.find(f[1]);
        if (it == index.end()) {
            it = index.emplace(std::string(f[1]), out.size()).first;
            out.push_back(T1Series{std::string(f[1]), {}, {}});
        }
        out[it->second].timestamps.emplace_back(f[0]);
        out[it->second].t1_values.push_back(v);
    }
    if (out.empty() && warnings) warnings->push_back("T1 series: header only, no samples");
    return out;
}

std::vector<T1Series> load_t1_series(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream is(path);
    if (!is) throw IoError(fmt::format("cannot open '{}'", path));
    return read_t1_series(is, warnings);
}

void write_t1_series(std::ostream& os, const std::vector<T1Series>& series) {
    os << "timestamp,qubit_id,t1_us\n";
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.t1_values.size(); ++i)
            fmt::print(os, "{},{},{}\n", i < s.timestamps.size() ? s.timestamps[i] : std::to_string(i), s.qubit_id,
                       s.t1_values[i]);
}

void write_report(std::ostream& os, const CorrelationReport& report) {
    os << "qubit_i,qubit_j,r,ci_low,ci_high,verdict\n";
    for (const auto& p : report.pairs)
        fmt::print(os, "{},{},{},{},{},{}\n", p.qubit_i, p.qubit_j, p.r, p.ci_low, p.ci_high, to_string(p.verdict));
}

void save_report(const CorrelationReport& report, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError(fmt::format("cannot write '{}'", path));
    write_report(os, report);
    if (!os) throw IoError(fmt::format("write to '{}' failed", path));
}

CorrelationReport read_report(std::istream& is) {
    CsvReader rd(is, "correlation report");
    rd.expect_header("qubit_i,qubit_j,r,ci_low,ci_high,verdict");
    CorrelationReport rep;
    std::vector<std::string_view> f;
    while (rd.next(f)) {
        rd.expect_fields(f, 6);
        CorrelationPair p;
        p.qubit_i = std::string(f[0]);
        p.qubit_j = std::string(f[1]);
        p.r = rd.number(f[2], "r");
        p.ci_low = rd.number(f[3], "ci_low");
        p.ci_high = rd.number(f[4], "ci_high");
        if (f[5] == "significant") {
            p.verdict.verdict = Verdict::Significant;
        } else if (f[5] == "negligible (borderline)") {
            p.verdict.borderline = true;
        } else if (f[5] != "negligible") {
            rd.fail(fmt::format("unknown verdict '{}'", f[5]));
        }
        rep.pairs.push_back(std::move(p));
    }
    return rep;
}

void write_decay_curve(std::ostream& os, const DecayCurve& curve) {
    os << "delay_us,shots,excited_count\n";
    for (std::size_t i = 0; i < curve.delays.size(); ++i)
        fmt::print(os, "{},{},{}\n", curve.delays[i], curve.shots, curve.excited_counts[i]);
}

DecayCurve read_decay_curve(std::istream& is) {
    CsvReader rd(is, "decay curve");
    rd.expect_header("delay_us,shots,excited_count");
    DecayCurve c;
    std::vector<std::string_view> f;
    while (rd.next(f)) {
        rd.expect_fields(f, 3);
        const double t = rd.number(f[0], "delay_us");
        const std::uint64_t shots = rd.count(f[1], "shots");
        const std::uint64_t k = rd.count(f[2], "excited_count");
        if (c.delays.empty()) {
            c.shots = shots;
        } else if (shots != c.shots) {
            rd.fail("shots must be constant across delays");
        }
        if (!c.delays.empty() && !(t > c.delays.back())) rd.fail("delays must be strictly increasing");
        if (k > shots) rd.fail("excited_count exceeds shots");
        c.delays.push_back(t);
        c.excited_counts.push_back(k);
    }
    if (c.delays.empty()) throw IoError("decay curve: no data rows");
    c.validate();
    return c;
}

void print_report_table(std::ostream& os, const CorrelationReport& report) {
    fmt::print(os, "{:<8} {:<8} {:>8} {:>20}  {}\n", "qubit_i", "qubit_j", "r", "95% CI", "verdict");
    for (const auto& p : report.pairs)
        fmt::print(os, "{:<8} {:<8} {:>8.4f} {:>20}  {}\n", p.qubit_i, p.qubit_j, p.r,
                   fmt::format("({:.4f}, {:.4f})", p.ci_low, p.ci_high), to_string(p.verdict));
}

} // namespace tvqc
