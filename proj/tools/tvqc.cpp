// tvqc command-line tool.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "tvqc/capacity.hpp"
#include "tvqc/channels.hpp"
#include "tvqc/errors.hpp"
#include "tvqc/grid.hpp"
#include "tvqc/montecarlo.hpp"
#include "tvqc/stats.hpp"

namespace fs = std::filesystem;
using namespace tvqc;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Global {
    std::uint64_t seed = 1;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string out = ".";
};

bool to_stdout(const Global& g) { return g.out == "-"; }

// Opens <out>/<name>, or returns std::cout when --out is "-".
class Output {
public:
    Output(const Global& g, const std::string& name) {
        if (to_stdout(g)) return;
        fs::create_directories(g.out);
        path_ = (fs::path(g.out) / name).string();
        file_.open(path_);
        if (!file_) throw IoError(fmt::format("cannot write '{}'", path_));
    }
    std::ostream& stream() { return path_.empty() ? std::cout : file_; }
    void close() {
        if (path_.empty()) return;
        file_.close();
        if (!file_) throw IoError(fmt::format("write to '{}' failed", path_));
        std::cerr << "wrote " << path_ << '\n';
    }

private:
    std::string path_;
    std::ofstream file_;
};

// Globals plus the options of the subcommand that ran, defaults included.
void write_resolved_config(const CLI::App& app, const CLI::App& sub, const Global& g) {
    if (to_stdout(g)) return;
    std::istringstream all(app.config_to_str(true, false));
    Output out(g, sub.get_name() + ".config.toml");
    const std::string own = sub.get_name() + ".";
    for (std::string line; std::getline(all, line);) {
        const auto key = line.substr(0, line.find('='));
        if (key.find('.') == std::string::npos || key.rfind(own, 0) == 0) out.stream() << line << '\n';
    }
    out.close();
}

// Registers an option whose default is printed with round-trip precision.
template <class T>
CLI::Option* opt(CLI::App* app, const std::string& name, T& value, const std::string& help) {
    return app->add_option(name, value, help)->default_str(fmt::format("{}", value));
}

double t_from_gamma(double mu_t1, double gamma) { return -mu_t1 * std::log1p(-gamma); }

// ---- capacity ------------------------------------------------------------

struct CapacityArgs {
    std::string model = "ad";
    std::string cv = "";
    std::string grid;
    std::string noise = "cta_ad";
    double mu_t1 = 100.0;
    double lambda = 0.1;
    int nodes = 257;
};

void cmd_capacity(const CapacityArgs& a, const Global& g) {
    const std::vector<double> cvs = a.cv.empty() ? std::vector<double>{} : parse_grid(a.cv);
    for (double c : cvs)
        if (c < 0.0) throw UsageError("--cv values must be non-negative");
    QuadratureOptions q;
    q.nodes = a.nodes;
    std::vector<CurvePoint> pts;
    std::string abscissa;
    if (a.model == "ad" || a.model == "apd") {
        abscissa = "gamma_bar";
        const auto grid = parse_grid(a.grid.empty() ? "0:0.5:51" : a.grid);
        for (double gb : grid)
            if (!(gb >= 0.0 && gb < 1.0)) throw UsageError(fmt::format("gamma_bar {} outside [0, 1)", gb));
        if (a.model == "apd" && !(a.lambda >= 0.0 && a.lambda < 1.0)) throw UsageError("--lambda must lie in [0, 1)");
        const bool ad = a.model == "ad";
        for (double gb : grid) {
            const double stat = ad ? cq_ad_closed(gb).value
                                   : maximize_coherent_information(kraus_apd({gb, a.lambda})).value;
            pts.push_back({gb, 0.0, "static", stat});
        }
        for (double c : cvs) {
            for (double gb : grid) {
                double v = 1.0;
                const double t = t_from_gamma(a.mu_t1, gb);
                if (ad) {
                    if (gb > 0.0) v = ergodic_capacity_ad(DecoherenceSpec::amplitude_damping(a.mu_t1, c * a.mu_t1, t), q).value;
                } else if (gb > 0.0 || a.lambda > 0.0) {
                    const double tt = gb > 0.0 ? t : 1e-9 * a.mu_t1;
                    const double mu_t2 = 2.0 * tt / (tt / a.mu_t1 - std::log1p(-a.lambda));
                    v = ergodic_capacity_apd_lower(DecoherenceSpec::from_cv(a.mu_t1, mu_t2, c, tt), q).value;
                }
                pts.push_back({gb, c, "ergodic", v});
            }
        }
    } else if (a.model == "hashing") {
        abscissa = "p_bar";
        const NoiseModel nm = parse_noise_model(a.noise);
        const auto grid = parse_grid(a.grid.empty() ? "0.01:0.3:59" : a.grid);
        for (double p : grid)
            if (!(p > 0.0 && p < 0.75)) throw UsageError(fmt::format("p_bar {} outside (0, 3/4)", p));
        const double mu_t2 = uses_t2(nm) ? a.mu_t1 : 2.0 * a.mu_t1;
        for (double p : grid) {
            const double t = solve_t_algo(a.mu_t1, mu_t2, p, nm);
            const double v = static_hashing(DecoherenceSpec(a.mu_t1, 0.0, mu_t2, 0.0, t), nm);
            pts.push_back({p, 0.0, "static", std::max(0.0, v)});
        }
        for (double c : cvs) {
            for (double p : grid) {
                const double t = solve_t_algo(a.mu_t1, mu_t2, p, nm);
                const DecoherenceSpec s = uses_t2(nm) ? DecoherenceSpec::from_cv(a.mu_t1, mu_t2, c, t)
                                                      : DecoherenceSpec::amplitude_damping(a.mu_t1, c * a.mu_t1, t);
                pts.push_back({p, c, "ergodic", ergodic_hashing(s, nm, q).value});
            }
        }
    } else {
        throw UsageError(fmt::format("unknown capacity model '{}' (expected ad, apd or hashing)", a.model));
    }
    Output out(g, "capacity.csv");
    write_capacity_csv(out.stream(), abscissa, pts);
    out.close();
}

// ---- threshold-solve -----------------------------------------------------

struct ThresholdArgs {
    double rate = 1.0 / 9.0;
    std::string cv;
    std::string noise = "cta_ad";
    double mu_t1 = 100.0;
    double mu_t2 = 100.0;
    double p_low = kRateSearchLow;
};

void cmd_threshold_solve(const ThresholdArgs& a, const Global& g) {
    if (!(a.rate >= 0.0 && a.rate < 1.0)) throw UsageError("--rate must lie in [0, 1)");
    const NoiseModel nm = parse_noise_model(a.noise);
    const std::vector<double> cvs = a.cv.empty() ? std::vector<double>{} : parse_grid(a.cv);
    const double mu_t2 = uses_t2(nm) ? a.mu_t2 : 2.0 * a.mu_t1;
    auto spec_for = [&](double c) {
        return uses_t2(nm) ? DecoherenceSpec::from_cv(a.mu_t1, mu_t2, c, 1.0)
                           : DecoherenceSpec::amplitude_damping(a.mu_t1, c * a.mu_t1, 1.0);
    };
    nlohmann::ordered_json j;
    j["rate"] = a.rate;
    j["model"] = to_string(nm);
    const auto st = solve_rate_threshold(a.rate, RateCurve::StaticHashing, spec_for(0.0), nm, {}, a.p_low);
    fmt::print("p* = {:.6f}  bracket [{:.12f}, {:.12f}]\n", st.p_bar, st.bracket_low, st.bracket_high);
    j["static"] = {{"p_bar", st.p_bar}, {"bracket_low", st.bracket_low}, {"bracket_high", st.bracket_high}};
    j["ergodic"] = nlohmann::ordered_json::array();
    for (double c : cvs) {
        const auto er = solve_rate_threshold(a.rate, RateCurve::ErgodicHashing, spec_for(c), nm, {}, a.p_low);
        fmt::print("p*_erg(cv={}) = {:.6f}  bracket [{:.12f}, {:.12f}]\n", c, er.p_bar, er.bracket_low, er.bracket_high);
        j["ergodic"].push_back({{"cv", c}, {"p_bar", er.p_bar}, {"bracket_low", er.bracket_low},
                                {"bracket_high", er.bracket_high}});
    }
    if (!to_stdout(g)) {
        Output out(g, "threshold.json");
        out.stream() << j.dump(2) << '\n';
        out.close();
    }
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
    std::string d = "3,5,7";
    std::string mode = "static";
    std::string noise = "cta_ad";
    std::string p = "0.09:0.13:9";
    double cv = 0.0;
    double mu_t1 = 100.0;
    double mu_t2 = 100.0;
    std::uint64_t failures = 100;
    std::uint64_t max_blocks = 200000;
    double wer_floor = 0.0;
    bool threshold = false;
    bool quiet = false;
};

void cmd_simulate(const SimulateArgs& a, const Global& g) {
    SweepConfig cfg;
    cfg.distances = parse_int_list(a.d);
    for (const auto& m : parse_name_list(a.mode)) cfg.modes.push_back(parse_channel_mode(m));
    cfg.model = parse_noise_model(a.noise);
    cfg.p_grid = parse_grid(a.p);
    for (double p : cfg.p_grid)
        if (!(p > 0.0 && p < 0.75)) throw UsageError(fmt::format("p_bar {} outside (0, 3/4)", p));
    for (int d : cfg.distances) PlanarCode check(d);
    cfg.cv = a.cv;
    cfg.mu_t1 = a.mu_t1;
    cfg.mu_t2 = a.mu_t2;
    cfg.seed = g.seed;
    cfg.wer.failure_target = a.failures;
    cfg.wer.max_blocks = a.max_blocks;
    cfg.wer.target_wer_floor = a.wer_floor;
    cfg.wer.workers = g.workers;
    SweepProgress progress;
    if (!a.quiet) {
        progress = [](const SweepRow& r, std::size_t done, std::size_t total) {
            fmt::print(std::cerr, "[{}/{}] d={} {} p={:.4f} wer={:.4g} failures={} blocks={}{}\n", done, total, r.d,
                       to_string(r.mode), r.p_bar, r.estimate.wer_hat, r.estimate.failures, r.estimate.blocks,
                       r.estimate.flags & kWerLowFailures ? " (flagged)" : "");
        };
    }
    const SweepResult res = sweep(cfg, progress);
    {
        Output out(g, "sweep.csv");
        write_sweep_csv(out.stream(), res);
        out.close();
    }
    if (!to_stdout(g)) {
        Output out(g, "sweep.json");
        write_sweep_json(out.stream(), res);
        out.close();
    }
    if (a.threshold) {
        for (ChannelMode m : cfg.modes) {
            const auto th = estimate_threshold(res, m);
            std::ostream& os = to_stdout(g) ? std::cerr : std::cout;
            fmt::print(os, "threshold {}: {:.4f} +/- {:.4f}\n", to_string(m), th.value, th.spread);
            for (const auto& c : th.crossings) fmt::print(os, "  d={} vs d={}: {:.4f}\n", c.d_small, c.d_large, c.p);
        }
    }
}

// ---- analyze -------------------------------------------------------------

struct AnalyzeArgs {
    std::string input;
    std::size_t resamples = 2000;
    std::size_t window_begin = 0;
    std::size_t window_end = std::numeric_limits<std::size_t>::max();
};

void cmd_analyze(const AnalyzeArgs& a, const Global& g) {
    std::vector<std::string> warnings;
    auto series = load_t1_series(a.input, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    for (auto& s : series) s = apply_window(s, {a.window_begin, a.window_end});
    std::ostream& os = to_stdout(g) ? std::cerr : std::cout;
    fmt::print(os, "{:<8} {:>6} {:>12} {:>12} {:>8}\n", "qubit", "n", "mean_us", "std_us", "cv");
    for (const auto& s : series) {
        const auto st = summary_stats(s);
        fmt::print(os, "{:<8} {:>6} {:>12.4f} {:>12.4f} {:>8.4f}\n", s.qubit_id, s.t1_values.size(), st.mean, st.stddev,
                   st.cv);
    }
    const auto rep = correlation_report(series, a.resamples, g.seed);
    print_report_table(os, rep);
    Output out(g, "report.csv");
    write_report(out.stream(), rep);
    out.close();
}

// ---- fit-t1 --------------------------------------------------------------

struct FitArgs {
    std::string input;
};

void cmd_fit_t1(const FitArgs& a, const Global& g) {
    std::ifstream is(a.input);
    if (!is) throw IoError(fmt::format("cannot open '{}'", a.input));
    const DecayCurve c = read_decay_curve(is);
    const DecayFit f = fit_t1_decay(c);
    fmt::print("T1 = {:.6f} +/- {:.6f} us  (A = {:.6f}, B = {:.6f}, iterations {})\n", f.t1, f.stderr_t1, f.amplitude,
               f.baseline, f.iterations);
    if (!to_stdout(g)) {
        nlohmann::ordered_json j{{"input", a.input},     {"t1_us", f.t1},       {"stderr_us", f.stderr_t1},
                                 {"amplitude", f.amplitude}, {"baseline", f.baseline}, {"rss", f.rss},
                                 {"iterations", f.iterations}};
        Output out(g, "fit.json");
        out.stream() << j.dump(2) << '\n';
        out.close();
    }
}

// ---- generate ------------------------------------------------------------

struct GenerateArgs {
    std::string kind = "t1-series";
    std::size_t qubits = 5;
    std::size_t samples = 400;
    double mu_t1 = 80.0;
    double sigma_t1 = 20.0;
    double t1 = 80.0;
    std::uint64_t shots = 4000;
    std::size_t delays = 20;
};

void cmd_generate(const GenerateArgs& a, const Global& g) {
    if (a.kind == "t1-series") {
        const auto series = generate_t1_series(a.qubits, a.samples, a.mu_t1, a.sigma_t1, g.seed);
        Output out(g, "t1_series.csv");
        write_t1_series(out.stream(), series);
        out.close();
    } else if (a.kind == "decay-curve") {
        if (a.shots < 1) throw UsageError("--shots must be at least 1");
        RngStream rng(g.seed, 0);
        const auto c = simulate_relaxation_experiment(a.t1, a.shots, default_delay_grid(a.t1, a.delays), rng);
        Output out(g, "decay_curve.csv");
        write_decay_curve(out.stream(), c);
        out.close();
    } else {
        throw UsageError(fmt::format("unknown --kind '{}' (expected t1-series or decay-curve)", a.kind));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-varying quantum channel toolkit: capacities, planar-code Monte Carlo and T1 statistics"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from a TOML/INI key-value file");
    Global g;
    app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
    app.add_option("--workers", g.workers, "Worker threads (results do not depend on it)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output directory, or - for stdout")->capture_default_str();

    CapacityArgs ca;
    auto* cap = app.add_subcommand("capacity", "Static and ergodic capacity curves as CSV");
    opt(cap, "--model", ca.model, "ad, apd or hashing");
    cap->add_option("--cv", ca.cv, "Coefficients of variation for the ergodic curves (list or grid)");
    cap->add_option("--grid", ca.grid, "Abscissa grid start:stop:count (gamma_bar, or p_bar for hashing)");
    opt(cap, "--noise", ca.noise, "Pauli model for hashing curves");
    opt(cap, "--mu-t1", ca.mu_t1, "Mean T1 in us");
    opt(cap, "--lambda", ca.lambda, "Mean scattering probability for apd");
    opt(cap, "--nodes", ca.nodes, "Gauss-Legendre nodes per dimension");

    ThresholdArgs ta;
    auto* ths = app.add_subcommand("threshold-solve", "Depolarizing probability where the hashing rate hits a target");
    opt(ths, "--rate", ta.rate, "Target rate");
    ths->add_option("--cv", ta.cv, "Also solve the ergodic curve at these c_v");
    opt(ths, "--noise", ta.noise, "Pauli model");
    opt(ths, "--mu-t1", ta.mu_t1, "Mean T1 in us");
    opt(ths, "--mu-t2", ta.mu_t2, "Mean T2 in us (apd models)");
    opt(ths, "--p-low", ta.p_low, "Lower end of the search window");

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Planar-code WER sweep with MWPM decoding");
    opt(sim, "--d", sa.d, "Code distances");
    opt(sim, "--mode", sa.mode, "static, stvqc, ftvqc (comma list)");
    opt(sim, "--noise", sa.noise, "Pauli model");
    opt(sim, "--p", sa.p, "Mean depolarizing probability grid");
    opt(sim, "--cv", sa.cv, "Coefficient of variation of T1 (and T2)");
    opt(sim, "--mu-t1", sa.mu_t1, "Mean T1 in us");
    opt(sim, "--mu-t2", sa.mu_t2, "Mean T2 in us (apd models)");
    opt(sim, "--failures", sa.failures, "Failures to collect per point");
    opt(sim, "--max-blocks", sa.max_blocks, "Block cap per point");
    opt(sim, "--wer-floor", sa.wer_floor, "Lowest WER worth resolving (caps blocks at failures/floor)");
    sim->add_flag("--threshold", sa.threshold, "Print the threshold estimate");
    sim->add_flag("--quiet", sa.quiet, "No progress on stderr");

    AnalyzeArgs aa;
    auto* ana = app.add_subcommand("analyze", "Summary statistics and pairwise T1 correlations");
    ana->add_option("--input", aa.input, "T1 series CSV (timestamp,qubit_id,t1_us)")->required();
    opt(ana, "--resamples", aa.resamples, "Bootstrap resamples");
    opt(ana, "--window-begin", aa.window_begin, "First sample index kept");
    opt(ana, "--window-end", aa.window_end, "One past the last sample index kept");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit-t1", "Fit A exp(-t/T1) + B to a decay curve");
    fit->add_option("--input", fa.input, "Decay curve CSV (delay_us,shots,excited_count)")->required();

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "Synthetic T1 series or relaxation experiments");
    opt(gen, "--kind", ga.kind, "t1-series or decay-curve");
    opt(gen, "--qubits", ga.qubits, "Number of qubits");
    opt(gen, "--samples", ga.samples, "Samples per qubit");
    opt(gen, "--mu-t1", ga.mu_t1, "Mean T1 in us");
    opt(gen, "--sigma-t1", ga.sigma_t1, "Standard deviation of T1 in us");
    opt(gen, "--t1", ga.t1, "True T1 for decay curves");
    opt(gen, "--shots", ga.shots, "Shots per delay");
    opt(gen, "--delays", ga.delays, "Number of delays on [1, 2 T1]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        if (sub == cap) cmd_capacity(ca, g);
        else if (sub == ths) cmd_threshold_solve(ta, g);
        else if (sub == sim) cmd_simulate(sa, g);
        else if (sub == ana) cmd_analyze(aa, g);
        else if (sub == fit) cmd_fit_t1(fa, g);
        else if (sub == gen) cmd_generate(ga, g);
        write_resolved_config(app, *sub, g);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
