import itertools
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qeclab.codes.catalogue import surface, toric
from qeclab.decoders import (
    DecoderError,
    MatchingError,
    build_matching_graph,
    decode_surface_mwpm,
    detector_graph,
    log_odds,
    matching_correction,
    max_weight_matching,
    min_weight_perfect_matching,
    mwpm,
)
from qeclab.noise import DefectRecord, ErrorModel, logical_class_bits, syndrome_bits


def brute_min_perfect(n, edges, weights):
    """Minimum total weight of a perfect matching by recursion, ``inf`` if none."""
    w = {}
    for (u, v), c in zip(edges, weights):
        key = (min(u, v), max(u, v))
        w[key] = min(c, w.get(key, np.inf))

    @lru_cache(maxsize=None)
    def best(free):
        if not free:
            return 0.0
        u, rest = free[0], free[1:]
        out = np.inf
        for i, v in enumerate(rest):
            if (u, v) in w:
                out = min(out, w[(u, v)] + best(rest[:i] + rest[i + 1:]))
        return out

    return best(tuple(range(n)))


def matched_weight(edges, weights, mate):
    total = 0.0
    for (u, v), c in zip(edges, weights):
        if mate[u] == v:
            total += c
    return total


graphs = st.sampled_from([2, 4, 6, 8]).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.sampled_from(list(itertools.combinations(range(n), 2))), min_size=1, max_size=28, unique=True),
        st.randoms(use_true_random=False),
    )
)


@given(graphs)
def test_blossom_matches_brute_force(g):
    n, edges, rnd = g
    weights = [round(rnd.uniform(0, 10), 3) for _ in edges]
    want = brute_min_perfect(n, edges, weights)
    if not np.isfinite(want):
        with pytest.raises(MatchingError):
            min_weight_perfect_matching(n, np.array(edges), np.array(weights))
        return
    mate = min_weight_perfect_matching(n, np.array(edges), np.array(weights))
    assert np.all(mate[mate] == np.arange(n))
    assert matched_weight(edges, weights, mate) == pytest.approx(want, abs=1e-6)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_blossom_complete_graphs_integer_weights(n):
    rng = np.random.default_rng(n)
    edges = np.array(list(itertools.combinations(range(n), 2)))
    for _ in range(200):
        weights = rng.integers(0, 6, len(edges)).astype(float)
        mate = min_weight_perfect_matching(n, edges, weights)
        assert matched_weight(edges, weights, mate) == brute_min_perfect(n, [tuple(e) for e in edges], weights)


def test_blossom_odd_and_deterministic():
    with pytest.raises(MatchingError):
        min_weight_perfect_matching(3, np.array([[0, 1], [1, 2]]), np.array([1.0, 1.0]))
    edges = np.array([[0, 1], [2, 3], [0, 2], [1, 3]])
    w = np.ones(4)
    first = min_weight_perfect_matching(4, edges, w)
    for _ in range(5):
        assert np.array_equal(min_weight_perfect_matching(4, edges, w), first)


def test_max_weight_matching_triangle_plus_pendant():
    mate = max_weight_matching(4, np.array([[0, 1], [1, 2], [0, 2], [2, 3]]), np.array([5, 4, 3, 6]))
    assert list(mate) == [1, 0, 3, 2]


def test_log_odds():
    assert log_odds(0.0) == np.inf
    assert log_odds(0.5) == 0.0
    assert log_odds(0.7) == 0.0
    assert log_odds(0.01) == pytest.approx(np.log(99))
    assert log_odds(0.1) == pytest.approx(np.log(9))


def _record(code, checks, rounds=1, round_of=None):
    ev = [(0 if round_of is None else round_of[c], c) for c in checks]
    return DefectRecord(rounds, len(code.checks), np.array(ev, dtype=np.int64).reshape(-1, 2))


def brute_defect_matching(det, loc, ws):
    """Oracle: best assignment of each defect to another defect or to the boundary."""
    hops = det.hops
    b = det.boundary

    @lru_cache(maxsize=None)
    def best(free):
        if not free:
            return 0.0
        u, rest = free[0], free[1:]
        out = hops[loc[u], b] * ws if det.has_boundary else np.inf
        out += best(rest)
        for i, v in enumerate(rest):
            out = min(out, hops[loc[u], loc[v]] * ws + best(rest[:i] + rest[i + 1:]))
        return out

    return best(tuple(range(len(loc))))


@pytest.mark.parametrize("code_fn,L", [(toric, 3), (surface, 4)])
def test_mwpm_matches_brute_force_on_all_small_defect_sets(code_fn, L):
    code = code_fn(L)
    det = detector_graph(code, "X")
    model = ErrorModel("bitflip", 0.1)
    ws = log_odds(0.1)
    checks = det.checks
    count = 0
    for size in range(1, 9):
        for subset in itertools.combinations(range(len(checks)), size):
            rec = _record(code, checks[list(subset)])
            g = build_matching_graph(code, rec, model, "X")
            if not det.has_boundary and size % 2:
                with pytest.raises(MatchingError):
                    mwpm(g)
                continue
            pairs = mwpm(g)
            got = sum(g.weights[np.flatnonzero((g.edges[:, 0] == u) & (g.edges[:, 1] == v))].min() for u, v in pairs)
            assert got == pytest.approx(brute_defect_matching(det, np.array(subset), ws))
            flips = matching_correction(g, pairs)
            syn = syndrome_bits(code, flips, np.zeros(code.n, dtype=np.uint8))
            assert set(np.flatnonzero(syn[checks])) == set(subset)
            count += 1
    assert count > 100


def test_weights_follow_log_odds():
    code = toric(4)
    det = detector_graph(code, "X")
    a, b = det.checks[0], det.checks[1]
    rec = DefectRecord(3, len(code.checks), np.array([[0, a], [2, b]]))
    g = build_matching_graph(code, rec, ErrorModel("bitflip", 0.01, 0.1), "X")
    hops = det.hops[0, 1]
    assert g.weights[0] == pytest.approx(hops * np.log(99) + 2 * np.log(9))


def test_zero_q_forbids_time_edges():
    code = toric(4)
    det = detector_graph(code, "X")
    a = det.checks[0]
    rec = DefectRecord(2, len(code.checks), np.array([[0, a], [1, a]]))
    g = build_matching_graph(code, rec, ErrorModel("bitflip", 0.1, 0.0), "X")
    assert len(g.edges) == 0
    with pytest.raises(MatchingError):
        mwpm(g)


def test_rectangle_one_by_three():
    # Four defects at the corners of a 1 x 3 rectangle on the torus pair along the short sides.
    code = toric(8)
    det = detector_graph(code, "X")
    pos = {tuple(code.check_coords[c]): c for c in det.checks}
    corners = [pos[(1, 1)], pos[(3, 1)], pos[(1, 7)], pos[(3, 7)]]
    g = build_matching_graph(code, _record(code, corners), ErrorModel("bitflip", 0.05), "X")
    pairs = mwpm(g)
    got = {frozenset((int(g.coords[u, 1]), int(g.coords[v, 1]))) for u, v in pairs}
    assert got == {frozenset(corners[:2]), frozenset(corners[2:])}


@pytest.mark.parametrize("length", [1, 2])
@pytest.mark.parametrize("row", range(9))
@pytest.mark.parametrize("kind", ["X", "Z"])
def test_surface5_straight_chains(length, row, kind):
    # Every straight chain of weight <= 2 on surface(5), in both orientations.
    code = surface(5)
    coords = {tuple(c): q for q, c in enumerate(code.qubit_coords)}
    size = 2 * 5 - 1
    for horizontal in (True, False):
        for start in range(size):
            cells = [(row, start + 2 * s) if horizontal else (start + 2 * s, row) for s in range(length)]
            qs = [coords.get(c) for c in cells]
            if any(q is None for q in qs):
                continue
            x = np.zeros(code.n, dtype=np.uint8)
            z = np.zeros(code.n, dtype=np.uint8)
            (x if kind == "X" else z)[qs] = 1
            syn = syndrome_bits(code, x, z)
            corr = decode_surface_mwpm(code, DefectRecord.from_syndrome(syn))
            assert not logical_class_bits(code, corr.x ^ x, corr.z ^ z).any()


def test_non_graphlike_code_rejected():
    from qeclab.codes.catalogue import five_one_three, steane7

    with pytest.raises(DecoderError):
        detector_graph(five_one_three(), "X")
    with pytest.raises(DecoderError):
        detector_graph(steane7(), "X")
