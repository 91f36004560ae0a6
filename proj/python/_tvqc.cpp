#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tvqc/capacity.hpp"
#include "tvqc/channels.hpp"
#include "tvqc/decoder.hpp"
#include "tvqc/errors.hpp"
#include "tvqc/matching.hpp"
#include "tvqc/montecarlo.hpp"
#include "tvqc/planar_code.hpp"
#include "tvqc/stats.hpp"

namespace py = pybind11;
using namespace tvqc;

namespace {

py::dict row_to_dict(const SweepRow& r) {
    py::dict d;
    d["d"] = r.d;
    d["mode"] = to_string(r.mode);
    d["model"] = to_string(r.model);
    d["p_bar"] = r.p_bar;
    d["cv"] = r.cv;
    d["wer"] = r.estimate.wer_hat;
    d["ci_low"] = r.estimate.ci_low;
    d["ci_high"] = r.estimate.ci_high;
    d["failures"] = r.estimate.failures;
    d["blocks"] = r.estimate.blocks;
    d["seed"] = r.estimate.seed;
    d["flagged"] = (r.estimate.flags & kWerLowFailures) != 0;
    return d;
}

} // namespace

PYBIND11_MODULE(_tvqc, m) {
    m.doc() = "Time-varying quantum channels: capacities, planar-code Monte Carlo, T1 statistics";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    // channels
    py::class_<DecoherenceSpec>(m, "DecoherenceSpec")
        .def(py::init<double, double, double, double, double>(), py::arg("mu_t1"), py::arg("sigma_t1"),
             py::arg("mu_t2"), py::arg("sigma_t2"), py::arg("t_algo"))
        .def_static("amplitude_damping", &DecoherenceSpec::amplitude_damping, py::arg("mu_t1"), py::arg("sigma_t1"),
                    py::arg("t_algo"))
        .def_static("from_cv", &DecoherenceSpec::from_cv, py::arg("mu_t1"), py::arg("mu_t2"), py::arg("cv"),
                    py::arg("t_algo"))
        .def_property_readonly("mu_t1", &DecoherenceSpec::mu_t1)
        .def_property_readonly("sigma_t1", &DecoherenceSpec::sigma_t1)
        .def_property_readonly("mu_t2", &DecoherenceSpec::mu_t2)
        .def_property_readonly("sigma_t2", &DecoherenceSpec::sigma_t2)
        .def_property_readonly("t_algo", &DecoherenceSpec::t_algo)
        .def_property_readonly("ramsey_locked", &DecoherenceSpec::ramsey_locked)
        .def("with_t_algo", &DecoherenceSpec::with_t_algo);

    m.def("damping_gamma", &damping_gamma, py::arg("t1"), py::arg("t"));
    m.def("scattering_lambda", &scattering_lambda, py::arg("t1"), py::arg("t2"), py::arg("t"));
    m.def("cta_depol_ad", &cta_depol_ad, py::arg("t1"), py::arg("t"));
    m.def("cta_depol_apd", &cta_depol_apd, py::arg("t1"), py::arg("t2"), py::arg("t"));
    auto dist_tuple = [](const PauliDist& p) { return py::make_tuple(p.p_i, p.p_x, p.p_y, p.p_z); };
    m.def("pta_probs_ad", [dist_tuple](double t1, double t) { return dist_tuple(pta_probs_ad(t1, t)); },
          py::arg("t1"), py::arg("t"), "(p_i, p_x, p_y, p_z)");
    m.def("pta_probs_apd", [dist_tuple](double t1, double t2, double t) { return dist_tuple(pta_probs_apd(t1, t2, t)); },
          py::arg("t1"), py::arg("t2"), py::arg("t"), "(p_i, p_x, p_y, p_z)");
    m.def("solve_t_algo",
          [](double mu_t1, double mu_t2, double p, const std::string& model) {
              return solve_t_algo(mu_t1, mu_t2, p, parse_noise_model(model));
          },
          py::arg("mu_t1"), py::arg("mu_t2"), py::arg("target_p"), py::arg("model") = "cta_ad");

    // capacity
    m.def("binary_entropy", &binary_entropy);
    m.def("cq_ad", [](double gamma) { return cq_ad_closed(gamma).value; }, py::arg("gamma"));
    m.def("coherent_information_ad", [](double gamma) {
        const auto r = maximize_coherent_information(kraus_ad(gamma));
        return py::make_tuple(r.value, r.argmax_xi ? py::cast(*r.argmax_xi) : py::none());
    });
    m.def("hashing_bound", [](double p) { return hashing_bound(PauliDist::depolarizing(p)); }, py::arg("p"));
    m.def("static_hashing",
          [](const DecoherenceSpec& s, const std::string& model) { return static_hashing(s, parse_noise_model(model)); },
          py::arg("spec"), py::arg("model") = "cta_ad");
    m.def("ergodic_capacity_ad", [](const DecoherenceSpec& s) { return ergodic_capacity_ad(s).value; });
    m.def("ergodic_capacity_apd_lower", [](const DecoherenceSpec& s) { return ergodic_capacity_apd_lower(s).value; });
    m.def("ergodic_hashing",
          [](const DecoherenceSpec& s, const std::string& model) {
              return ergodic_hashing(s, parse_noise_model(model)).value;
          },
          py::arg("spec"), py::arg("model") = "cta_ad");
    m.def("solve_rate_threshold",
          [](double rate, double mu_t1, double cv, bool ergodic, const std::string& model) {
              const NoiseModel nm = parse_noise_model(model);
              const DecoherenceSpec s = uses_t2(nm) ? DecoherenceSpec::from_cv(mu_t1, mu_t1, cv, 1.0)
                                                    : DecoherenceSpec::amplitude_damping(mu_t1, cv * mu_t1, 1.0);
              const auto r = solve_rate_threshold(rate, ergodic ? RateCurve::ErgodicHashing : RateCurve::StaticHashing,
                                                  s, nm);
              return py::make_tuple(r.p_bar, r.bracket_low, r.bracket_high);
          },
          py::arg("rate"), py::arg("mu_t1") = 100.0, py::arg("cv") = 0.0, py::arg("ergodic") = false,
          py::arg("model") = "cta_ad");

    // surface code
    py::class_<PlanarCode>(m, "PlanarCode")
        .def(py::init<int>(), py::arg("d"))
        .def_property_readonly("d", &PlanarCode::distance)
        .def_property_readonly("num_qubits", &PlanarCode::num_qubits);
    m.def("min_weight_perfect_matching",
          [](int n, const std::vector<std::tuple<int, int, std::int64_t>>& edges) {
              std::vector<WeightedEdge> e;
              for (auto [u, v, w] : edges) e.push_back({u, v, w});
              return min_weight_perfect_matching(n, e);
          },
          py::arg("n"), py::arg("edges"), "mate[i] for each vertex");
    m.def("decode_failure",
          [](const PlanarCode& code, const std::string& error) {
              const auto e = PauliOperator::from_string(error);
              return is_logical_failure(code, e, mwpm_decode(code, syndrome(code, e)));
          },
          py::arg("code"), py::arg("error"), "True when MWPM decoding of the Pauli string leaves a logical error");

    // montecarlo
    m.def("estimate_wer",
          [](const PlanarCode& code, const std::string& mode, const std::string& model, const DecoherenceSpec& spec,
             std::uint64_t seed, std::uint64_t failures, std::uint64_t max_blocks, unsigned workers) {
              WerOptions o;
              o.failure_target = failures;
              o.max_blocks = max_blocks;
              o.workers = workers;
              const ChannelMode cm = parse_channel_mode(mode);
              const NoiseModel nm = parse_noise_model(model);
              WerEstimate e;
              {
                  py::gil_scoped_release nogil;
                  e = estimate_wer(code, cm, nm, spec, seed, o);
              }
              py::dict d;
              d["wer"] = e.wer_hat;
              d["failures"] = e.failures;
              d["blocks"] = e.blocks;
              d["ci_low"] = e.ci_low;
              d["ci_high"] = e.ci_high;
              d["cp_low"] = e.cp_low;
              d["cp_high"] = e.cp_high;
              d["flagged"] = (e.flags & kWerLowFailures) != 0;
              return d;
          },
          py::arg("code"), py::arg("mode"), py::arg("model"), py::arg("spec"), py::arg("seed"),
          py::arg("failures") = 100, py::arg("max_blocks") = 200000, py::arg("workers") = 1);
    m.def("sweep",
          [](const std::vector<int>& ds, const std::vector<std::string>& modes, const std::vector<double>& p_grid,
             double cv, std::uint64_t seed, const std::string& model, std::uint64_t failures, std::uint64_t max_blocks,
             unsigned workers) {
              SweepConfig cfg;
              cfg.distances = ds;
              for (const auto& mo : modes) cfg.modes.push_back(parse_channel_mode(mo));
              cfg.p_grid = p_grid;
              cfg.cv = cv;
              cfg.seed = seed;
              cfg.model = parse_noise_model(model);
              cfg.wer.failure_target = failures;
              cfg.wer.max_blocks = max_blocks;
              cfg.wer.workers = workers;
              SweepResult res;
              {
                  py::gil_scoped_release nogil;
                  res = sweep(cfg);
              }
              py::list rows;
              for (const auto& r : res.rows) rows.append(row_to_dict(r));
              return rows;
          },
          py::arg("ds"), py::arg("modes"), py::arg("p_grid"), py::arg("cv") = 0.0, py::arg("seed") = 0,
          py::arg("model") = "cta_ad", py::arg("failures") = 100, py::arg("max_blocks") = 200000,
          py::arg("workers") = 1, "List of row dicts in CSV column order");
    m.def("estimate_threshold",
          [](const std::vector<std::tuple<int, double, double>>& points) {
              SweepResult res;
              for (auto [d, p, w] : points) {
                  SweepRow r;
                  r.d = d;
                  r.p_bar = p;
                  r.estimate.wer_hat = w;
                  res.rows.push_back(r);
              }
              const auto t = estimate_threshold(res);
              return py::make_tuple(t.value, t.spread);
          },
          py::arg("points"), "points are (d, p, wer); returns (threshold, spread)");

    // stats
    m.def("default_delay_grid", &default_delay_grid, py::arg("true_t1"), py::arg("count") = 20);
    m.def("simulate_relaxation_experiment",
          [](double t1, std::uint64_t shots, const std::vector<double>& delays, std::uint64_t seed) {
              RngStream rng(seed, 0);
              return simulate_relaxation_experiment(t1, shots, delays, rng).excited_counts;
          },
          py::arg("true_t1"), py::arg("shots"), py::arg("delays"), py::arg("seed"));
    m.def("fit_t1_decay",
          [](const std::vector<double>& delays, std::uint64_t shots, const std::vector<std::uint64_t>& counts) {
              DecayCurve c{delays, shots, counts};
              const auto f = fit_t1_decay(c);
              return py::make_tuple(f.t1, f.stderr_t1);
          },
          py::arg("delays"), py::arg("shots"), py::arg("counts"), "(t1_hat, stderr)");
    m.def("pearson", &pearson, py::arg("x"), py::arg("y"));
    m.def("bootstrap_ci",
          [](const std::vector<double>& x, const std::vector<double>& y, std::size_t resamples, std::uint64_t seed) {
              const auto c = bootstrap_ci(x, y, resamples, seed);
              return py::make_tuple(c.low, c.high);
          },
          py::arg("x"), py::arg("y"), py::arg("resamples") = 2000, py::arg("seed") = 0);
    m.def("summary_stats",
          [](const std::vector<double>& v) {
              const auto s = summary_stats(v);
              return py::make_tuple(s.mean, s.stddev, s.cv);
          },
          py::arg("values"), "(mean, stddev, cv)");
    m.def("generate_t1_series",
          [](std::size_t qubits, std::size_t samples, double mu, double sigma, std::uint64_t seed) {
              std::vector<std::vector<double>> out;
              for (auto& s : generate_t1_series(qubits, samples, mu, sigma, seed)) out.push_back(s.t1_values);
              return out;
          },
          py::arg("qubits"), py::arg("samples"), py::arg("mu_t1"), py::arg("sigma_t1"), py::arg("seed"));
    m.def("correlation_report",
          [](const std::vector<std::vector<double>>& series, std::size_t resamples, std::uint64_t seed) {
              std::vector<T1Series> s;
              for (std::size_t i = 0; i < series.size(); ++i) s.push_back({"Q" + std::to_string(i), {}, series[i]});
              py::list rows;
              for (const auto& p : correlation_report(s, resamples, seed).pairs)
                  rows.append(py::make_tuple(p.qubit_i, p.qubit_j, p.r, p.ci_low, p.ci_high, to_string(p.verdict)));
              return rows;
          },
          py::arg("series"), py::arg("resamples") = 2000, py::arg("seed") = 0);
}
