"""Minimum-weight matching decoding for codes with graph-like checks.

A check matrix is graph-like for one error type when every qubit flips at most
two checks of the detecting type.  Checks become vertices, qubits become edges,
and a qubit that flips a single check is an edge to the boundary.  Surface,
toric, subsystem-surface (stabilizer plaquettes) and Bacon-Shor (double
columns / double rows) codes all have this form.

Repeated noisy measurement adds a time axis: detection events ``(r, c)`` are
matched with weight ``hops * w_s + |dr| * w_t`` where ``w_s = ln((1-p)/p)``
and ``w_t = ln((1-q)/q)``.  Only the spatial part of each matched path turns
into a data correction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from ..codes.code import StabilizerCode
from ..noise import DefectRecord, ErrorModel
from .base import Correction, DecoderError, as_syndrome, make_correction
from .blossom import MatchingError, min_weight_perfect_matching

__all__ = [
    "DetectorGraph",
    "MatchingGraph",
    "detector_graph",
    "log_odds",
    "build_matching_graph",
    "mwpm",
    "matching_correction",
    "decode_surface_mwpm",
    "decode_graphlike_mwpm",
    "MatchingError",
]


def log_odds(p: float) -> float:
    """Edge weight ``ln((1-p)/p)``: ``inf`` at ``p = 0``, clamped to 0 for ``p >= 0.5``."""
    if p <= 0:
        return np.inf
    if p >= 0.5:
        return 0.0
    return float(np.log((1 - p) / p))


@dataclass(frozen=True, eq=False)
class DetectorGraph:
    """Static decoding graph for one error type of one code.

    ``kind`` is the error component being corrected (``"X"`` errors are seen by
    Z-type checks).  Local vertex ``i < m`` is check ``checks[i]``; vertex ``m``
    is the boundary.  ``ends[q]`` lists the two vertices joined by qubit ``q``
    (``-1`` twice if no detecting check sees it).
    """

    code: StabilizerCode
    kind: str
    checks: np.ndarray
    local: np.ndarray
    hops: np.ndarray
    pred: np.ndarray
    edge_qubit: np.ndarray
    has_boundary: bool
    ends: np.ndarray

    @property
    def m(self) -> int:
        return len(self.checks)

    @property
    def boundary(self) -> int:
        return len(self.checks)

    def path_qubits(self, a: int, b: int) -> list[int]:
        """Qubits on the stored shortest path between local vertices ``a`` and ``b``."""
        out = []
        cur = b
        while cur != a:
            prev = int(self.pred[a, cur])
            if prev < 0:
                raise DecoderError(f"no path between detector vertices {a} and {b}")
            out.append(int(self.edge_qubit[prev, cur]))
            cur = prev
        return out


@lru_cache(maxsize=64)
def detector_graph(code: StabilizerCode, kind: str) -> DetectorGraph:
    """Build (and cache) the graph on which ``kind`` errors are matched.

    Raises:
        DecoderError: if the code is not CSS-like for this type or some qubit
            flips more than two detecting checks.
    """
    if kind not in ("X", "Z"):
        raise ValueError("kind must be 'X' or 'Z'")
    n = code.n
    det_type = "Z" if kind == "X" else "X"
    checks = code.check_indices(det_type)
    for i, t in enumerate(code.check_types):
        if t is None:
            raise DecoderError(f"check {i} of {code.label} is not a pure X or Z operator")
    cm = code.check_matrix
    inc = cm[checks, n:] if det_type == "Z" else cm[checks, :n]
    inc = inc.astype(np.int64)
    m = len(checks)
    per_qubit = inc.sum(axis=0)
    if per_qubit.size and per_qubit.max() > 2:
        q = int(np.argmax(per_qubit))
        raise DecoderError(f"qubit {q} flips {per_qubit[q]} {det_type}-checks; matching needs at most 2")
    B = m
    edge_qubit = np.full((m + 1, m + 1), -1, dtype=np.int64)
    ends = np.full((n, 2), -1, dtype=np.int64)
    rows, cols = [], []
    for q in range(n):
        vs = np.flatnonzero(inc[:, q])
        if len(vs) == 0:
            continue
        a, b = (int(vs[0]), int(vs[1])) if len(vs) == 2 else (int(vs[0]), B)
        ends[q] = a, b
        if edge_qubit[a, b] < 0:
            edge_qubit[a, b] = edge_qubit[b, a] = q
            rows.append(a)
            cols.append(b)
    has_boundary = bool(np.any(edge_qubit[:, B] >= 0))
    adj = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(m + 1, m + 1)).tocsr()
    hops, pred = shortest_path(adj, directed=False, unweighted=True, return_predecessors=True)
    local = np.full(len(code.checks), -1, dtype=np.int64)
    local[checks] = np.arange(m)
    return DetectorGraph(code, kind, checks, local, hops, pred, edge_qubit, has_boundary, ends)


@dataclass(frozen=True, eq=False)
class MatchingGraph:
    """Weighted graph handed to the blossom matcher.

    Nodes ``0..n_defects-1`` are detection events (``coords[i] = (round,
    check)``); nodes ``n_defects..2*n_defects-1`` are their boundary copies
    when the code has a boundary.  ``exact`` is ``False`` only if edges were
    dropped by a distance cutoff.
    """

    n_defects: int
    n_nodes: int
    edges: np.ndarray
    weights: np.ndarray
    coords: np.ndarray
    detector: DetectorGraph
    exact: bool = True

    def boundary_node(self, i: int) -> int:
        return self.n_defects + i

    def is_boundary(self, v: int) -> bool:
        return v >= self.n_defects


def _weights(detector: DetectorGraph, model: ErrorModel | None, spatial_p: float | None):
    if spatial_p is None:
        if model is None:
            return 1.0, 1.0
        spatial_p = model.marginal_x if detector.kind == "X" else model.marginal_z
    q = 0.0 if model is None else model.q
    ws = log_odds(spatial_p)
    wt = log_odds(q)
    if ws == np.inf and q <= 0:
        # Noise-free record at p = 0: every defect is unexplained; use unit weights.
        ws = 1.0
    return ws, wt


def build_matching_graph(code: StabilizerCode, record: DefectRecord, model: ErrorModel | None = None,
                         kind: str = "X", spatial_p: float | None = None,
                         cutoff_defects: int = 10_000) -> MatchingGraph:
    """Matching graph for the ``kind``-error events of ``record``.

    Args:
        code: a code whose ``kind`` errors are graph-like (see module docstring).
        record: detection events; only events on the detecting checks are used.
        model: supplies the data rate (marginal for ``kind``) and ``q``.
        kind: ``"X"`` or ``"Z"``.
        spatial_p: override for the per-edge data flip probability.
        cutoff_defects: above this many defects, pair edges longer than the
            median boundary distance are dropped and ``exact`` is ``False``.
    """
    det = detector_graph(code, kind)
    ws, wt = _weights(det, model, spatial_p)
    ev = record.events
    loc = det.local[ev[:, 1]] if len(ev) else np.zeros(0, dtype=np.int64)
    keep = loc >= 0
    rounds = ev[keep, 0] if len(ev) else np.zeros(0, dtype=np.int64)
    loc = loc[keep]
    nd = len(loc)
    coords = np.stack([rounds, det.checks[loc]], axis=1) if nd else np.zeros((0, 2), dtype=np.int64)

    with np.errstate(invalid="ignore"):
        h = det.hops[np.ix_(loc, loc)]
        dt = np.abs(rounds[:, None] - rounds[None, :]).astype(float)
        d = np.where(h > 0, h * ws, 0.0) + np.where(dt > 0, dt * wt, 0.0)
        bh = det.hops[loc, det.boundary]
        b = np.where(bh > 0, bh * ws, 0.0) if det.has_boundary else np.full(nd, np.inf)
    iu, ju = np.triu_indices(nd, 1)
    dij = d[iu, ju]
    ok = np.isfinite(dij)
    exact = True
    if det.has_boundary:
        # A pair edge no shorter than both boundary edges is never needed.
        ok &= dij < b[iu] + b[ju]
        if nd > cutoff_defects:
            ok &= dij <= np.median(b[np.isfinite(b)]) * 2
            exact = False
    e_list = [np.stack([iu[ok], ju[ok]], axis=1)]
    w_list = [dij[ok]]
    n_nodes = nd
    if det.has_boundary:
        n_nodes = 2 * nd
        fin = np.flatnonzero(np.isfinite(b))
        e_list.append(np.stack([fin, fin + nd], axis=1))
        w_list.append(b[fin])
        bi, bj = np.triu_indices(nd, 1)
        e_list.append(np.stack([bi + nd, bj + nd], axis=1))
        w_list.append(np.zeros(len(bi)))
    edges = np.concatenate(e_list).astype(np.int64) if nd else np.zeros((0, 2), dtype=np.int64)
    weights = np.concatenate(w_list).astype(float) if nd else np.zeros(0)
    return MatchingGraph(nd, n_nodes, edges, weights, coords, det, exact)


def mwpm(g: MatchingGraph) -> np.ndarray:
    """Minimum-weight perfect matching of ``g`` as sorted ``(u, v)`` pairs with ``u < v``.

    Raises:
        MatchingError: odd node count or no perfect matching.
    """
    if g.n_nodes == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if g.n_nodes % 2:
        raise MatchingError(f"{g.n_nodes} defects and no boundary: parity cannot be fixed")
    mate = min_weight_perfect_matching(g.n_nodes, g.edges, g.weights)
    u = np.arange(g.n_nodes)
    sel = u < mate
    return np.stack([u[sel], mate[sel]], axis=1)


def matching_correction(g: MatchingGraph, pairs: np.ndarray) -> np.ndarray:
    """Flip bits (length ``n``) implied by the spatial parts of the matched paths."""
    det = g.detector
    flips = np.zeros(det.code.n, dtype=np.uint8)
    nd = g.n_defects
    loc = det.local[g.coords[:, 1]] if nd else None
    for u, v in pairs:
        if u >= nd:
            continue
        a = int(loc[u])
        b = det.boundary if v >= nd else int(loc[v])
        if a == b:
            continue
        for q in det.path_qubits(a, b):
            flips[q] ^= 1
    return flips


def decode_graphlike_mwpm(code: StabilizerCode, record: DefectRecord, model: ErrorModel | None = None,
                          spatial_p: dict | None = None, decoder: str = "mwpm") -> Correction:
    """Match X and Z errors independently and combine the two corrections."""
    if not isinstance(record, DefectRecord):
        record = DefectRecord.from_syndrome(as_syndrome(code, record))
    syn = as_syndrome(code, record)
    bits = {}
    info = {}
    for kind in ("X", "Z"):
        det = detector_graph(code, kind)
        if det.m == 0 or not syn[det.checks].any() and not _has_events(record, det):
            bits[kind] = np.zeros(code.n, dtype=np.uint8)
            continue
        g = build_matching_graph(code, record, model, kind, None if spatial_p is None else spatial_p.get(kind))
        pairs = mwpm(g)
        bits[kind] = matching_correction(g, pairs)
        info[kind] = {"defects": g.n_defects, "exact": g.exact}
    return make_correction(code, bits["X"], bits["Z"], syn, decoder, info=info)


def _has_events(record: DefectRecord, det: DetectorGraph) -> bool:
    if not len(record.events):
        return False
    return bool(np.any(det.local[record.events[:, 1]] >= 0))


def decode_surface_mwpm(code: StabilizerCode, record, model: ErrorModel | None = None) -> Correction:
    """Space-time minimum-weight matching for surface, toric and subsystem surface codes."""
    if code.name not in ("surface", "toric", "subsystem_surface") and code.check_coords is None:
        raise DecoderError(f"{code.label} has no lattice geometry for matching")
    return decode_graphlike_mwpm(code, record, model)
