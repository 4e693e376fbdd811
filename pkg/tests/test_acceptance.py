"""Acceptance criteria, each checked at its stated tolerance.

Every test records one line through the ``report`` fixture; the lines are
printed in the "acceptance criteria" section at the end of the pytest run.
Long Monte Carlo sweeps run on one process with fixed seeds.
"""

import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from qeclab.cli import main
from qeclab.codes import build_named_code, distance
from qeclab.codes.catalogue import c6c4
from qeclab.montecarlo import ExperimentConfig, curves_from_rows, estimate_threshold, run_trials, sweep

TESTS = Path(__file__).parent


def _threshold(family, sizes, ps, decoder, trials, seed, noise="bitflip", q_equals_p=False, rounds_equal_size=False):
    configs = [ExperimentConfig(family, {"L": L}, noise, float(p), float(p) if q_equals_p else 0.0, decoder,
                                trials, L if rounds_equal_size else 1, seed)
               for L in sizes for p in ps]
    rows = [r for _, _, r in sweep(configs, jobs=1)]
    curves = curves_from_rows(rows)
    table = ", ".join(f"L={L}:" + "/".join(f"{y:.3g}" for _, y, _, _ in c) for L, c in curves.items())
    return estimate_threshold(curves), table


# -- 1. catalogue parameters ----------------------------------------------------------

CATALOGUE = [
    ("shor9", {}, 9, 1, 3),
    ("steane7", {}, 7, 1, 3),
    ("five_one_three", {}, 5, 1, 3),
    ("four_two_two", {}, 4, 2, 2),
    ("c6", {}, 6, 2, 2),
    ("c6c4", {}, 12, 2, 4),
    ("surface", {"L": 2}, None, 1, 2),
    ("surface", {"L": 3}, 13, 1, 3),
    ("bacon_shor", {"n": 3}, None, 1, 3),
    ("subsystem_surface", {"L": 3}, 41, 1, 3),
]
_catalogue_seconds = []


@pytest.mark.parametrize("family,params,n,k,d", CATALOGUE,
                         ids=[f"{f}{''.join(str(v) for v in p.values())}" for f, p, *_ in CATALOGUE])
def test_criterion_1_catalogue_parameters(family, params, n, k, d, report):
    t0 = time.perf_counter()
    code = build_named_code(family, **params)
    got = (code.n, code.k, distance(code))
    _catalogue_seconds.append(time.perf_counter() - t0)
    want = (n if n is not None else code.n, k, d)
    ok = report(1, got == want, f"{code.label}: [[{got[0]},{got[1]},{got[2]}]] vs [[{want[0]},{want[1]},{want[2]}]]")
    assert ok


def test_criterion_1_runtime(report):
    total = sum(_catalogue_seconds)
    assert len(_catalogue_seconds) == len(CATALOGUE)
    assert report(1, total < 60, f"total {total:.2f} s (< 60 s)")


# -- 2. golden matrices -----------------------------------------------------------------

GOLDEN_SX = ["XXXXIIIIIIII", "IIIIXXXXIIII", "IIIIIIIIXXXX", "XXIIIXIXXIIX", "XIIXXXIIIXIX"]
GOLDEN_SZ = ["ZZZZIIIIIIII", "IIIIZZZZIIII", "IIIIIIIIZZZZ", "ZIZIIIZZZIIZ", "ZIIZZIZIIIZZ"]
GOLDEN_LOGICALS = ["IXIXXXIIIIII", "ZIIZIIZZIIII", "XIIXIXIXIIII", "IIIIIIZZZIZI"]


def test_criterion_2_concatenated_golden_rows(report):
    code = c6c4("printed")
    rows = [str(s) for s in code.stabilizers]
    sx = [r for r in rows if set(r) <= {"I", "X"}]
    sz = [r for r in rows if set(r) <= {"I", "Z"}]
    (x1, z1), (x2, z2) = code.logicals
    logicals = [str(x1), str(z1), str(x2), str(z2)]
    ok = sx == GOLDEN_SX and sz == GOLDEN_SZ and logicals == GOLDEN_LOGICALS and len(rows) == 10
    assert report(2, ok, "S(X), S(Z) and four logical rows match verbatim" if ok else f"got {rows} {logicals}")


# -- 3. toric MWPM threshold, perfect measurements -------------------------------------------


def test_criterion_3_toric_mwpm_threshold(report):
    t0 = time.perf_counter()
    est, table = _threshold("toric", (8, 12, 16), np.round(np.arange(0.09, 0.1151, 0.005), 4), "mwpm",
                            20_000, seed=3)
    minutes = (time.perf_counter() - t0) / 60
    ok = abs(est.p_c - 0.103) <= 0.007
    assert report(3, ok, f"p_c={est.p_c:.4f} (spread {est.low:.4f}..{est.high:.4f}; target 0.103±0.007; "
                         f"{minutes:.1f} min; {table})")


# -- 4. RG decoder threshold --------------------------------------------------------------------


def test_criterion_4_rg_threshold(report):
    t0 = time.perf_counter()
    est, table = _threshold("toric", (8, 16, 32), np.round(np.arange(0.05, 0.1001, 0.01), 4), "rg",
                            10_000, seed=4)
    minutes = (time.perf_counter() - t0) / 60
    ok = abs(est.p_c - 0.067) <= 0.010
    assert report(4, ok, f"p_c={est.p_c:.4f} (spread {est.low:.4f}..{est.high:.4f}; target 0.067±0.010; "
                         f"{minutes:.1f} min; {table})")


# -- 5. phenomenological threshold, p = q, R = L -------------------------------------------------


def test_criterion_5_phenomenological_threshold(report):
    t0 = time.perf_counter()
    est, table = _threshold("toric", (4, 6, 8), np.round(np.arange(0.02, 0.0401, 0.005), 4), "mwpm",
                            10_000, seed=5, q_equals_p=True, rounds_equal_size=True)
    minutes = (time.perf_counter() - t0) / 60
    ok = abs(est.p_c - 0.029) <= 0.005
    assert report(5, ok, f"p_c={est.p_c:.4f} (spread {est.low:.4f}..{est.high:.4f}; target 0.029±0.005; "
                         f"{minutes:.1f} min; {table})")


# -- 6. sub-threshold scaling -----------------------------------------------------------------


def test_criterion_6_subthreshold_slope(report):
    sizes = (6, 8, 10, 12)
    rates = []
    for L in sizes:
        s = run_trials(ExperimentConfig("toric", {"L": L}, "bitflip", 0.0343, 0.0, "mwpm", 200_000, 1, seed=60 + L))
        assert s.failures > 0
        rates.append(s.p_logical)
    kappa = np.polyfit(sizes, -np.log(rates), 1)[0]
    ok = 0.5 <= kappa <= 1.2
    detail = ", ".join(f"L={L}:{r:.3g}" for L, r in zip(sizes, rates))
    assert report(6, ok, f"kappa={kappa:.3f} (band [0.5, 1.2]; {detail})")


# -- 7. Bacon-Shor noise-free bound --------------------------------------------------------------


def test_criterion_7_bacon_shor_bound(report):
    p = 0.01
    n = round(np.log(2) / (4 * p))
    s = run_trials(ExperimentConfig("bacon_shor", {"n": n}, "independent_xz", p, 0.0, "bs1d", 200_000, 1, seed=7))
    bound = np.exp(-0.06 / p)
    hi = s.interval[1]
    ok = n == 17 and hi <= bound
    assert report(7, ok, f"n={n}, p_bar={s.p_logical:.2e}, 95% upper {hi:.2e} <= {bound:.2e}")


# -- 8. property suites ----------------------------------------------------------------------

PROPERTY_SUITES = ["test_pauli.py", "test_noise.py", "test_decoders.py", "test_matching.py", "test_tableau.py"]


def test_criterion_8_property_suites(report):
    env = dict(os.environ, QECLAB_HYPOTHESIS_PROFILE="deterministic")
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           *[str(TESTS / f) for f in PROPERTY_SUITES]],
                          capture_output=True, text=True, env=env, cwd=TESTS.parent)
    minutes = (time.perf_counter() - t0) / 60
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-300:]
    ok = proc.returncode == 0 and minutes < 10
    assert report(8, ok, f"{summary} ({minutes:.1f} min)")


# -- 9. reproducibility across worker counts ----------------------------------------------------


def test_criterion_9_csv_identical_across_jobs(report, tmp_path):
    base = ["sweep", "--family", "toric", "--L", "4,6", "--decoder", "mwpm", "--p", "0.03:0.05:2", "--q",
            "0.02", "--rounds", "L", "--trials", "1300", "--seed", "99"]
    texts = []
    for jobs in (1, 2, 3):
        path = tmp_path / f"j{jobs}.csv"
        assert main(base + ["--jobs", str(jobs), "--out", str(path)]) == 0
        texts.append(path.read_bytes())
    ok = texts[0] == texts[1] == texts[2]
    assert report(9, ok, f"--jobs 1/2/3 give identical CSV ({len(texts[0])} bytes)")
