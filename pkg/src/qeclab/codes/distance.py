"""Exact code distance by iterative deepening with meet-in-the-middle.

A logical operator of weight ``w`` is split into two halves of weights
``a = ceil(w/2)`` and ``b = floor(w/2)``.  Both halves have equal syndromes and
differ in their logical-class functional, so enumerating all weight-``a`` and
weight-``b`` Paulis and bucketing them by syndrome finds every weight-``w``
logical while touching only ``O(3^a C(n, a))`` operators.  Levels are visited
in increasing ``w``; since no lighter logical exists, any collision found at
level ``w`` is a logical of weight exactly ``w``.

For subsystem codes the syndrome is taken with respect to the stabilizers and
the class with respect to the bare logicals, which measures ``C(S) \\ G``.
CSS codes are searched separately over X-type and Z-type operators.
"""

from __future__ import annotations

from itertools import combinations, product
from math import comb

import numpy as np

from ..pauli import PauliOp
from .code import StabilizerCode

__all__ = ["DistanceCapExceeded", "distance", "minimum_weight_logical"]

_MAX_ROWS = 20_000_000


class DistanceCapExceeded(RuntimeError):
    """No logical operator up to the search cap; ``lower_bound`` is the proven bound."""

    def __init__(self, lower_bound: int, reason: str = "weight cap"):
        super().__init__(f"distance > {lower_bound - 1} ({reason})")
        self.lower_bound = lower_bound


def _tables(code: StabilizerCode) -> tuple[np.ndarray, np.ndarray]:
    """Per (qubit, letter) packed syndrome words and class integers.

    Letters are indexed I, X, Z, Y.
    """
    n = code.n
    sm = code.stabilizer_matrix.astype(np.int64)
    ca, cb = code.class_operator
    m = sm.shape[0]
    words = max(1, (m + 63) // 64)
    syn = np.zeros((n, 4, words), dtype=np.uint64)
    cls = np.zeros((n, 4), dtype=np.int64)
    weights = (1 << np.arange(ca.shape[0], dtype=np.int64)) if ca.shape[0] else np.zeros(0, np.int64)
    for q in range(n):
        for letter, (xb, zb) in enumerate(((0, 0), (1, 0), (0, 1), (1, 1))):
            bits = (sm[:, n + q] * xb + sm[:, q] * zb) % 2
            for w in range(words):
                chunk = bits[64 * w: 64 * (w + 1)]
                syn[q, letter, w] = np.uint64(int("".join(map(str, chunk[::-1])) or "0", 2))
            cbits = (ca[:, q] * xb + cb[:, q] * zb) % 2
            cls[q, letter] = int(cbits @ weights)
    return syn, cls


def _enumerate(syn, cls, n: int, w: int, letters: tuple[int, ...]):
    """Syndrome words, class ints and (support, letters) index arrays for weight ``w``."""
    words = syn.shape[2]
    if w == 0:
        return np.zeros((1, words), dtype=np.uint64), np.zeros(1, dtype=np.int64), None
    count = comb(n, w) * len(letters) ** w
    if count > _MAX_ROWS:
        raise MemoryError
    supp = np.array(list(combinations(range(n), w)), dtype=np.int64)
    lets = np.array(list(product(letters, repeat=w)), dtype=np.int64)
    s = np.zeros((len(supp), len(lets), words), dtype=np.uint64)
    c = np.zeros((len(supp), len(lets)), dtype=np.int64)
    for j in range(w):
        s ^= syn[supp[:, j][:, None], lets[:, j][None, :]]
        c ^= cls[supp[:, j][:, None], lets[:, j][None, :]]
    return s.reshape(-1, words), c.reshape(-1), (supp, lets)


def _op_from(n: int, idx, row: int, w: int) -> PauliOp:
    supp, lets = idx
    si, li = divmod(row, len(lets))
    op = PauliOp(n)
    for q, letter in zip(supp[si], lets[li]):
        op = op * PauliOp.single(n, int(q), "IXZY"[letter])
    return op.unsigned()


def _search_level(syn, cls, n: int, w: int, letters):
    a, b = (w + 1) // 2, w // 2
    sa, ca, ia = _enumerate(syn, cls, n, a, letters)
    if a == b:
        sb, cb, ib = sa, ca, ia
    else:
        sb, cb, ib = _enumerate(syn, cls, n, b, letters)
    keys = np.ascontiguousarray(np.vstack([sb, sa]))
    view = keys.view(np.dtype((np.void, keys.dtype.itemsize * keys.shape[1]))).ravel()
    _, inv = np.unique(view, return_inverse=True)
    inv = inv.ravel()
    nb = len(sb)
    groups = inv.max() + 1
    bmin = np.full(groups, np.iinfo(np.int64).max, dtype=np.int64)
    bmax = np.full(groups, -1, dtype=np.int64)
    np.minimum.at(bmin, inv[:nb], cb)
    np.maximum.at(bmax, inv[:nb], cb)
    ga = inv[nb:]
    has_b = bmax[ga] >= 0
    hit = has_b & ((ca != bmin[ga]) | (bmin[ga] != bmax[ga]))
    rows = np.flatnonzero(hit)
    if rows.size == 0:
        return None
    r = int(rows[0])
    g = ga[r]
    partner_rows = np.flatnonzero((inv[:nb] == g) & (cb != ca[r]))
    pa = _op_from(n, ia, r, a) if ia is not None else PauliOp(n)
    pb = _op_from(n, ib, int(partner_rows[0]), b) if ib is not None else PauliOp(n)
    return (pa * pb).unsigned()


def _search(code: StabilizerCode, letters, weight_cap: int):
    syn, cls = _tables(code)
    for w in range(1, weight_cap + 1):
        try:
            found = _search_level(syn, cls, code.n, w, letters)
        except MemoryError:
            raise DistanceCapExceeded(w, "enumeration size") from None
        if found is not None:
            return w, found
    raise DistanceCapExceeded(weight_cap + 1)


def minimum_weight_logical(code: StabilizerCode, weight_cap: int | None = None) -> PauliOp:
    """A minimum-weight element of ``C(S) \\ S`` (``C(S) \\ G`` for subsystem codes)."""
    if code.k == 0:
        raise ValueError("code encodes no logical qubits")
    cap = code.n if weight_cap is None else weight_cap
    if code.is_css:
        best = None
        lower = None
        for letters in ((1,), (2,)):
            try:
                w, op = _search(code, letters, cap if best is None else min(cap, best[0]))
            except DistanceCapExceeded as exc:
                lower = exc.lower_bound if lower is None else min(lower, exc.lower_bound)
                continue
            if best is None or w < best[0]:
                best = (w, op)
        if best is None:
            raise DistanceCapExceeded(lower)
        if lower is not None and lower <= best[0] and lower <= cap:
            # The other type ran out of enumeration budget below the found weight.
            raise DistanceCapExceeded(lower, "enumeration size")
        return best[1]
    return _search(code, (1, 2, 3), cap)[1]


def distance(code: StabilizerCode, weight_cap: int | None = None) -> int:
    """Exact distance; raises :class:`DistanceCapExceeded` past ``weight_cap``."""
    return minimum_weight_logical(code, weight_cap).weight
