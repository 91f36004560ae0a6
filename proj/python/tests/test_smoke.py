import math

import pytest

import tvqc


def test_ad_capacity_endpoints():
    assert tvqc.cq_ad(0.0) == 1.0
    assert tvqc.cq_ad(0.5) == 0.0
    value, xi = tvqc.coherent_information_ad(0.2)
    assert value == pytest.approx(tvqc.cq_ad(0.2), abs=1e-6)
    assert 0.0 < xi < 1.0


def test_twirl_identity():
    p = tvqc.cta_depol_ad(80.0, 10.0)
    _, px, py, pz = tvqc.pta_probs_ad(80.0, 10.0)
    assert p == pytest.approx(px + py + pz, abs=1e-12)


def test_static_hashing_threshold():
    p_bar, lo, hi = tvqc.solve_rate_threshold(1.0 / 9.0)
    assert lo <= p_bar <= hi
    assert 0.159 <= p_bar <= 0.161


def test_solve_t_algo_round_trip():
    t = tvqc.solve_t_algo(100.0, 200.0, 0.1)
    assert tvqc.cta_depol_ad(100.0, t) == pytest.approx(0.1, abs=1e-10)


def test_matching_square():
    mate = tvqc.min_weight_perfect_matching(4, [(0, 1, 1), (2, 3, 1), (0, 2, 5), (1, 3, 5)])
    assert mate == [1, 0, 3, 2]


def test_decoder_single_error():
    code = tvqc.PlanarCode(3)
    assert code.num_qubits == 13
    error = "I" * 6 + "Y" + "I" * 6
    assert not tvqc.decode_failure(code, error)


def test_estimate_wer_and_sweep_agree():
    rows = tvqc.sweep([3], ["static"], [0.12], seed=7, failures=20)
    assert len(rows) == 1
    row = rows[0]
    t = tvqc.solve_t_algo(100.0, 200.0, 0.12)
    spec = tvqc.DecoherenceSpec.amplitude_damping(100.0, 0.0, t)
    direct = tvqc.estimate_wer(tvqc.PlanarCode(3), "static", "cta_ad", spec, row["seed"], failures=20)
    assert direct["failures"] == row["failures"]
    assert direct["blocks"] == row["blocks"]
    assert row["wer"] == pytest.approx(row["failures"] / row["blocks"])


def test_threshold_fixture():
    q = 0.11
    pts = [(d, p, (p / q) ** ((d + 1) / 2)) for d in (3, 5, 7) for p in (0.09, 0.10, 0.11, 0.12, 0.13)]
    value, spread = tvqc.estimate_threshold(pts)
    assert value == pytest.approx(q, abs=1e-4)


def test_fit_and_correlation():
    delays = tvqc.default_delay_grid(80.0)
    counts = tvqc.simulate_relaxation_experiment(80.0, 4000, delays, seed=3)
    t1, err = tvqc.fit_t1_decay(delays, 4000, counts)
    assert abs(t1 - 80.0) / 80.0 < 0.1
    assert err > 0.0
    series = tvqc.generate_t1_series(3, 200, 80.0, 20.0, seed=1)
    rows = tvqc.correlation_report(series, resamples=500, seed=2)
    assert len(rows) == 3
    for _, _, r, lo, hi, verdict in rows:
        assert lo <= r <= hi
        assert verdict.startswith("negligible")


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        tvqc.PlanarCode(4)
    with pytest.raises(ValueError):
        tvqc.pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        tvqc.solve_rate_threshold(0.999)


def test_summary_stats_hand_values():
    mean, sd, cv = tvqc.summary_stats([2.0, 4.0])
    assert mean == 3.0
    assert sd == pytest.approx(math.sqrt(2.0))
    assert cv == pytest.approx(math.sqrt(2.0) / 3.0)
