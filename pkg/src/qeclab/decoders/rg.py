"""Renormalization-group (cluster-growth) decoder.

At level ``l = 0, 1, ...`` the remaining defects are grouped into clusters:
two defects are linked when their L-infinity lattice distance (space and, for
repeated rounds, time) is at most ``2**l``.  A cluster is neutral when its
syndrome can be annihilated by a correction supported near the cluster: the
checks within ``ceil(2**l / 2)`` of its defects and the qubits between them.
That restricted parity-check system is solved exactly by peeling a spanning
forest, which is Gaussian elimination specialised to graph incidence matrices.
A neutral cluster is corrected by the lightest pairing of its own defects.  A
cluster that is not neutral but lies within ``2**l`` of an open boundary is
paired with boundary copies allowed.  Other clusters survive to the next
level.  Defects left after ``max_rounds`` levels mean the decoder gives up,
which is reported as ``failed``; a final global pairing still returns the
output to the codespace.

Records with several rounds use the parity test (``pairing="mwpm"``) because
the solvability test is spatial only.
"""

from __future__ import annotations

from functools import lru_cache
from math import ceil, log2

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..codes.code import StabilizerCode
from ..noise import DefectRecord, ErrorModel
from .base import Correction, as_syndrome, make_correction
from .blossom import min_weight_perfect_matching
from .matching import DetectorGraph, _weights, detector_graph

__all__ = ["decode_rg", "default_rg_rounds"]


def default_rg_rounds(code: StabilizerCode) -> int:
    """``ceil(log2 L) + 1`` with ``L`` from the code parameters (or its lattice extent)."""
    L = code.params.get("L") or code.params.get("n")
    if not L:
        L = max(2, int(np.ceil(np.sqrt(code.n))))
    return int(ceil(log2(max(int(L), 2)))) + 1


@lru_cache(maxsize=64)
def _lattice(det: DetectorGraph):
    """Check positions in lattice units plus per-axis periods, or ``None`` without geometry."""
    code = det.code
    if code.check_coords is None or len(det.checks) == 0:
        return None
    pos = [code.check_coords[c] for c in det.checks]
    if any(v is None for p in pos for v in p):
        return None
    pos = np.asarray(pos, dtype=float)
    periods = np.asarray(code.periods or (0,) * pos.shape[1], dtype=float)
    diffs = np.abs(pos[:, None, :] - pos[None, :, :])
    diffs = np.where(periods > 0, np.minimum(diffs, periods - diffs), diffs)
    cheb = diffs.max(axis=2)
    unit = cheb[cheb > 0].min() if np.any(cheb > 0) else 1.0
    per = periods[periods > 0]
    span = float(per.min() / unit) if len(per) else np.inf
    return cheb / unit, span


def _pair_cluster(det, loc, rounds, idx, ws, wt, use_boundary, pairing="mwpm"):
    """Pair up the defects ``idx`` (with boundary copies if allowed).

    ``pairing="mwpm"`` is a minimum-weight pairing; ``"greedy"`` repeatedly
    takes the closest remaining pair (or defect-boundary edge).
    """
    k = len(idx)
    a = loc[idx]
    h = det.hops[np.ix_(a, a)]
    dt = np.abs(rounds[idx][:, None] - rounds[idx][None, :]).astype(float)
    with np.errstate(invalid="ignore"):
        d = np.where(h > 0, h * ws, 0.0) + np.where(dt > 0, dt * wt, 0.0)
    iu, ju = np.triu_indices(k, 1)
    edges = [np.stack([iu, ju], axis=1)]
    weights = [d[iu, ju]]
    nodes = k
    if use_boundary:
        bh = det.hops[a, det.boundary]
        with np.errstate(invalid="ignore"):
            b = np.where(bh > 0, bh * ws, 0.0)
        edges.append(np.stack([np.arange(k), np.arange(k) + k], axis=1))
        weights.append(b)
        edges.append(np.stack([iu + k, ju + k], axis=1))
        weights.append(np.zeros(len(iu)))
        nodes = 2 * k
    edges = np.concatenate(edges)
    weights = np.concatenate(weights)
    fin = np.isfinite(weights)
    if pairing == "greedy":
        mate = _greedy(nodes, edges[fin], weights[fin])
    else:
        mate = min_weight_perfect_matching(nodes, edges[fin], weights[fin])
    pairs = []
    for u in range(k):
        v = int(mate[u])
        if v >= k:
            pairs.append((int(a[u]), det.boundary))
        elif u < v:
            pairs.append((int(a[u]), int(a[v])))
    return pairs


def _greedy(nodes, edges, weights):
    mate = np.full(nodes, -1, dtype=np.int64)
    for e in np.argsort(weights, kind="stable"):
        u, v = edges[e]
        if mate[u] < 0 and mate[v] < 0:
            mate[u], mate[v] = v, u
    return mate


@lru_cache(maxsize=64)
def _adjacency(det: DetectorGraph):
    adj = [[] for _ in range(det.m + 1)]
    for q, (a, b) in enumerate(det.ends.tolist()):
        if a >= 0:
            adj[a].append((b, q))
            adj[b].append((a, q))
    return adj


def _solve_cluster(det, cheb, loc, members, reach, use_boundary):
    """Local correction supported on the cluster region, or ``None`` if none exists.

    The region holds every check within L-infinity distance ``ceil(reach / 2)``
    of a cluster defect (plus the boundary vertex if ``use_boundary``), and the
    support is every qubit with both ends in the region.  The syndrome equations
    restricted to that support are a graph incidence system, solved exactly by
    peeling a breadth-first spanning forest: a component is solvable iff its
    defect parity is even or it contains the boundary.
    """
    radius = ceil(reach / 2)
    inside = np.zeros(det.m + 1, dtype=bool)
    inside[: det.m] = np.any(cheb[loc[members]] <= radius, axis=0)
    inside[det.m] = use_boundary
    parity = np.zeros(det.m + 1, dtype=np.uint8)
    np.bitwise_xor.at(parity, loc[members], 1)
    adj = _adjacency(det)
    seen = np.zeros(det.m + 1, dtype=bool)
    fix = []
    roots = ([det.m] if use_boundary else []) + np.flatnonzero(inside[: det.m]).tolist()
    for root in roots:
        if seen[root]:
            continue
        seen[root] = True
        order = [root]
        parent = {root: (-1, -1)}
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            for w, q in adj[v]:
                if inside[w] and not seen[w]:
                    seen[w] = True
                    parent[w] = (v, q)
                    order.append(w)
        for v in reversed(order[1:]):
            if parity[v]:
                u, q = parent[v]
                fix.append(q)
                parity[v] = 0
                parity[u] ^= 1
        if parity[root] and root != det.m:
            return None
    return np.array(fix, dtype=np.int64)


def _decode_kind(code, det: DetectorGraph, record: DefectRecord, model, max_rounds: int, pairing: str,
                 max_extent: float):
    ev = record.events
    loc_all = det.local[ev[:, 1]] if len(ev) else np.zeros(0, dtype=np.int64)
    keep = loc_all >= 0
    loc = loc_all[keep]
    rounds = ev[keep, 0] if len(ev) else np.zeros(0, dtype=np.int64)
    flips = np.zeros(code.n, dtype=np.uint8)
    if len(loc) == 0:
        return flips, 0, -1
    if pairing == "solve" and record.rounds > 1:
        pairing = "mwpm"
    ws, wt = _weights(det, model, None)
    if not np.isfinite(ws):
        ws = 1.0
    if not np.isfinite(wt):
        wt = 1.0
    lat = _lattice(det)
    if lat is None:
        cheb, span = det.hops[: det.m, : det.m], np.inf
    else:
        cheb, span = lat
    limit = span * max_extent
    bdist = det.hops[: det.m, det.boundary] if det.has_boundary else np.full(det.m, np.inf)
    alive = np.arange(len(loc))
    used = -1
    for level in range(max_rounds):
        if len(alive) == 0:
            break
        reach = 2 ** level
        a = loc[alive]
        dist = np.maximum(cheb[np.ix_(a, a)], np.abs(rounds[alive][:, None] - rounds[alive][None, :]))
        ncomp, lab = connected_components(csr_matrix(dist <= reach), directed=False)
        survivors = []
        for c in range(ncomp):
            members = alive[lab == c]
            near = bool(np.min(bdist[loc[members]]) <= reach)
            local = len(members) == 1 or float(cheb[np.ix_(loc[members], loc[members])].max()) < limit
            done = False
            if local and pairing == "solve":
                if _solve_cluster(det, cheb, loc, members, reach, False) is not None:
                    # Neutral: annihilate with the lightest pairing of the cluster's own defects.
                    _apply(det, flips, _pair_cluster(det, loc, rounds, members, ws, wt, False))
                    done = True
                elif near:
                    # Different boundary pieces may be joined through the boundary
                    # vertex, so boundary-touching clusters take a lightest pairing.
                    _apply(det, flips, _pair_cluster(det, loc, rounds, members, ws, wt, True))
                    done = True
            elif local and (len(members) % 2 == 0 or near):
                _apply(det, flips, _pair_cluster(det, loc, rounds, members, ws, wt, near, pairing))
                done = True
            if done:
                used = level
            else:
                survivors.append(members)
        alive = np.concatenate(survivors) if survivors else np.zeros(0, dtype=np.int64)
    left = len(alive)
    if left:
        # Give up, but still return to the codespace so the output stays a valid correction.
        _apply(det, flips, _pair_cluster(det, loc, rounds, alive, ws, wt, det.has_boundary))
    return flips, left, used


def _apply(det, flips, pairs):
    for p, q in pairs:
        if p != q:
            for qb in det.path_qubits(p, q):
                flips[qb] ^= 1


def decode_rg(code: StabilizerCode, record, max_rounds: int | None = None,
              model: ErrorModel | None = None, pairing: str = "solve",
              max_extent: float = np.inf) -> Correction:
    """Cluster-growth decoding of X and Z errors independently.

    Args:
        code: a code with graph-like checks (surface, toric, ...).
        record: a :class:`DefectRecord` or final syndrome.
        max_rounds: number of growth levels; default :func:`default_rg_rounds`.
        model: only sets the relative space/time weights used inside clusters.
        pairing: neutrality rule.  ``"solve"`` uses the local solvability
            test (single-round records only); ``"mwpm"`` and ``"greedy"`` treat
            any even cluster as neutral and pair it exactly or greedily.
        max_extent: on periodic lattices a cluster whose diameter reaches this
            fraction of the period is not local and cannot be neutralized.
    """
    if not isinstance(record, DefectRecord):
        record = DefectRecord.from_syndrome(as_syndrome(code, record))
    syn = as_syndrome(code, record)
    max_rounds = default_rg_rounds(code) if max_rounds is None else int(max_rounds)
    bits = {}
    residual = 0
    levels = {}
    for kind in ("X", "Z"):
        det = detector_graph(code, kind)
        bits[kind], left, lvl = _decode_kind(code, det, record, model, max_rounds, pairing, max_extent)
        residual += left
        levels[kind] = lvl
    corr = make_correction(code, bits["X"], bits["Z"], syn, "rg", failed=residual > 0,
                           info={"residual_defects": residual, "levels": levels})
    return corr
