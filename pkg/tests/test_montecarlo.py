import io
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from oracles import exact_failure_rate, failure_counts
from qeclab.codes import build_named_code
from qeclab.decoders import DecoderError
from qeclab.montecarlo import (
    CSV_COLUMNS,
    ExperimentConfig,
    ThresholdError,
    TrialStats,
    curves_from_rows,
    estimate_threshold,
    pseudo_threshold,
    read_csv,
    run_trials,
    stats_row,
    sweep,
    trial_rng,
    wilson_interval,
    write_csv,
    write_json,
)


def _within(stats, expected, slack=0.0):
    lo, hi = stats.interval
    return lo - slack <= expected <= hi + slack


# -- Wilson intervals ------------------------------------------------------------


def test_wilson_zero_failures():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0
    # Closed form z^2 / (n + z^2), about 0.036.
    assert hi == pytest.approx(1.959963984540054**2 / (100 + 1.959963984540054**2), rel=1e-12)
    assert hi == pytest.approx(0.036, abs=1e-3)


def test_wilson_one_in_ten_is_interior():
    lo, hi = wilson_interval(1, 10)
    assert 0.0 < lo < 0.1 < hi < 1.0


def test_wilson_symmetric_at_half():
    lo, hi = wilson_interval(50, 100)
    assert lo + hi == pytest.approx(1.0)
    assert 0.40 < lo < 0.41


@given(st.integers(1, 10_000), st.data())
def test_wilson_contains_estimate(n, data):
    k = data.draw(st.integers(0, n))
    lo, hi = wilson_interval(k, n)
    assert 0.0 <= lo <= k / n <= hi <= 1.0


def test_wilson_matches_formula():
    k, n, z = 7, 40, 1.959963984540054
    ph = k / n
    c = (ph + z * z / (2 * n)) / (1 + z * z / n)
    h = z / (1 + z * z / n) * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n))
    assert wilson_interval(k, n) == pytest.approx((c - h, c + h))


# -- trial engine ----------------------------------------------------------------


def test_zero_noise_never_fails():
    s = run_trials(ExperimentConfig("surface", {"L": 3}, "depolarizing", 0.0, decoder="mwpm", trials=300))
    assert s.trials == 300 and s.failures == 0


def test_repetition_bitflip_matches_majority_vote():
    p = 0.1
    s = run_trials(ExperimentConfig("repetition", {"n": 3}, "bitflip", p, decoder="minweight",
                                    trials=100_000, seed=11))
    assert _within(s, 3 * p**2 - 2 * p**3)


def test_shor9_quadratic_scaling():
    code = build_named_code("shor9")
    counts = failure_counts(code, "minweight", 4)
    assert counts[0] == counts[1] == 0
    rates = {}
    for p in (0.01, 0.02):
        exact = exact_failure_rate(counts, code.n, p)
        s = run_trials(ExperimentConfig("shor9", {}, "depolarizing", p, decoder="minweight",
                                        trials=60_000, seed=3))
        assert _within(s, exact)
        rates[p] = exact
    # Weight-2 failures dominate, so doubling p multiplies the rate by about four.
    assert 3.5 < rates[0.02] / rates[0.01] < 4.5


def test_results_do_not_depend_on_jobs():
    cfg = dict(family="surface", params={"L": 3}, noise="depolarizing", p=0.08, decoder="mwpm",
               trials=1_200, seed=5)
    one = run_trials(ExperimentConfig(**cfg, jobs=1))
    two = run_trials(ExperimentConfig(**cfg, jobs=2))
    assert one == two


def test_trial_rng_is_a_pure_function_of_seed_and_index():
    a = trial_rng(9, 17).random(5)
    assert np.array_equal(a, trial_rng(9, 17).random(5))
    assert not np.array_equal(a, trial_rng(9, 18).random(5))
    assert not np.array_equal(a, trial_rng(10, 17).random(5))


def test_target_width_stops_early():
    s = run_trials(ExperimentConfig("repetition", {"n": 3}, "bitflip", 0.2, decoder="minweight",
                                    trials=50_000, target_ci_width=0.05))
    lo, hi = s.interval
    assert hi - lo <= 0.05
    assert s.trials < 50_000 and s.trials % 500 == 0


def test_failure_breakdown_is_consistent():
    s = run_trials(ExperimentConfig("shor9", {}, "depolarizing", 0.1, decoder="minweight", trials=2_000))
    assert sum(s.classes.values()) == s.failures
    assert max(s.failures_x, s.failures_z) <= s.failures <= s.failures_x + s.failures_z


def test_trialstats_merge():
    a = TrialStats(10, 2, 1, 1, 0, {"X1": 1, "Z1": 1})
    b = TrialStats(5, 1, 0, 1, 0, {"Z1": 1})
    m = a.merge(b)
    assert (m.trials, m.failures, m.failures_x, m.failures_z) == (15, 3, 1, 2)
    assert m.classes == {"X1": 1, "Z1": 2}


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("surface", {"L": 3}, trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig("surface", {"L": 3}, rounds=0)
    with pytest.raises(ValueError):
        ExperimentConfig("surface", {"L": 3}, "depolarizing", 1.5).model


def test_decoder_size_cap_raised_before_sampling():
    with pytest.raises(DecoderError):
        run_trials(ExperimentConfig("toric", {"L": 8}, "depolarizing", 0.01, decoder="ml", trials=10))


def test_surface_improves_with_size_below_threshold():
    rates = {}
    for L in (4, 8, 12):
        s = run_trials(ExperimentConfig("toric", {"L": L}, "bitflip", 0.04, decoder="mwpm",
                                        trials=6_000, seed=L))
        rates[L] = s
    assert rates[8].interval[1] < rates[4].interval[0]
    assert rates[12].p_logical <= rates[8].p_logical


# -- files -------------------------------------------------------------------------


def _rows():
    out = []
    for L in (3, 5):
        cfg = ExperimentConfig("surface", {"L": L}, "bitflip", 0.05, decoder="mwpm", trials=200, seed=1)
        out.append(stats_row(cfg, run_trials(cfg)))
    return out


def test_csv_round_trip():
    rows = _rows()
    text = write_csv(rows)
    assert text.startswith("# schema=1\n")
    assert text.splitlines()[1].split(",") == CSV_COLUMNS
    back = read_csv(text)
    assert back == rows
    assert all(r["wall_time_s"] == "" for r in back)


def test_csv_rejects_other_schema_and_missing_columns():
    with pytest.raises(ValueError):
        read_csv("# schema=2\nfamily\nsurface\n")
    with pytest.raises(ValueError):
        read_csv("# schema=1\nfamily,p\nsurface,0.1\n")


def test_json_mirror_and_timing_column():
    cfg = ExperimentConfig("repetition", {"n": 3}, "bitflip", 0.1, decoder="minweight", trials=100)
    res = sweep([cfg], timing=True)
    doc = json.loads(write_json(res))
    assert doc["schema"] == 1
    assert doc["rows"][0]["config"]["params"] == {"n": 3}
    assert doc["rows"][0]["stats"]["trials"] == 100
    assert float(res[0][2]["wall_time_s"]) >= 0
    buf = io.StringIO()
    write_csv([res[0][2]], buf)
    assert read_csv(buf.getvalue())[0]["trials"] == "100"


def test_curves_from_rows_groups_by_size():
    curves = curves_from_rows(_rows())
    assert sorted(curves) == [3, 5]
    p, pl, (lo, hi), n = curves[3][0]
    assert p == 0.05 and lo <= pl <= hi and n == 200


# -- thresholds ---------------------------------------------------------------------


@pytest.mark.parametrize("p_star", [0.03, 0.0725, 0.11])
def test_threshold_of_synthetic_power_laws(p_star):
    ps = np.linspace(p_star * 0.6, p_star * 1.4, 9)
    curves = {L: [(p, (p / p_star) ** L * 0.5) for p in ps] for L in (4, 8, 16)}
    est = estimate_threshold(curves)
    assert est.p_c == pytest.approx(p_star, rel=1e-9)
    assert est.low == pytest.approx(p_star) and est.high == pytest.approx(p_star)


def test_threshold_reports_non_crossing_curves():
    ps = np.linspace(0.01, 0.05, 5)
    curves = {3: [(p, 0.1 * p) for p in ps], 5: [(p, 0.05 * p) for p in ps]}
    with pytest.raises(ThresholdError, match="no crossing"):
        estimate_threshold(curves)
    with pytest.raises(ThresholdError):
        estimate_threshold({3: curves[3]})


def test_repetition_pseudo_threshold_is_one_half():
    ps = np.linspace(0.3, 0.7, 41)
    curve = [(p, 3 * p**2 - 2 * p**3) for p in ps]
    assert pseudo_threshold(curve) == pytest.approx(0.5, abs=1e-9)


def test_pseudo_threshold_needs_a_crossing():
    with pytest.raises(ThresholdError):
        pseudo_threshold([(p, min(1.0, 2 * p)) for p in (0.1, 0.2, 0.3)])


def test_surface3_bitflip_pseudo_threshold():
    code = build_named_code("surface", L=3)
    counts = failure_counts(code, "mwpm", code.n, x_only=True)
    assert counts[1] == 0

    def exact(p):
        return exact_failure_rate(counts, code.n, p, x_only=True)

    root = brentq(lambda p: exact(p) - p, 0.01, 0.49)
    ps = np.linspace(0.05, 0.3, 26)
    est = pseudo_threshold([(p, exact(p)) for p in ps])
    assert est == pytest.approx(root, abs=2e-3)
    # Regression baseline for this lattice and decoder.
    assert root == pytest.approx(0.051775, abs=1e-5)
    s = run_trials(ExperimentConfig("surface", {"L": 3}, "bitflip", round(root, 4), decoder="mwpm",
                                    trials=20_000, seed=2))
    assert _within(s, exact(round(root, 4)))
