"""Dense linear algebra over the binary field on ``uint8`` numpy arrays."""

from __future__ import annotations

import numpy as np

__all__ = [
    "row_reduce",
    "rank",
    "nullspace",
    "solve",
    "in_rowspace",
    "independent_rows",
    "inverse",
    "symplectic_gram",
    "symplectic_matrix_product",
]


def _as_gf2(a) -> np.ndarray:
    return np.array(a, dtype=np.uint8, copy=True) & 1


def row_reduce(a, *, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Only the first ``ncols`` columns are used for pivoting (all by default), which
    lets callers carry an augmented block along.
    """
    m = _as_gf2(a)
    if m.ndim != 2:
        raise ValueError("matrix expected")
    rows, cols = m.shape
    ncols = cols if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        hits = np.flatnonzero(m[r:, c])
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        if others.size:
            m[others] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(row_reduce(a)[1])


def nullspace(a) -> np.ndarray:
    """Basis (as rows) of ``{v : a @ v = 0}``."""
    a = _as_gf2(a)
    if a.ndim != 2:
        raise ValueError("matrix expected")
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.uint8)
    rref, pivots = row_reduce(a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = rref[r, f]
    return basis


def solve(a, b) -> np.ndarray | None:
    """One solution ``x`` of ``a @ x = b`` (free variables zero), or ``None``.

    ``b`` may be a matrix; its columns are solved together with a single
    elimination and the result has one column per right-hand side.
    """
    a = _as_gf2(a)
    b = _as_gf2(b)
    multi = b.ndim == 2
    b = b if multi else b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ValueError("dimension mismatch")
    cols = a.shape[1]
    rref, pivots = row_reduce(np.hstack([a, b]), ncols=cols)
    r = len(pivots)
    if np.any(rref[r:, cols:]):
        return None
    x = np.zeros((cols, b.shape[1]), dtype=np.uint8)
    x[pivots] = rref[:r, cols:]
    return x if multi else x[:, 0]


def in_rowspace(a, v) -> bool:
    a = np.asarray(a, dtype=np.uint8)
    if a.size == 0:
        return not np.any(v)
    return solve(a.T, v) is not None


def independent_rows(a) -> list[int]:
    """Indices of a maximal independent subset of rows, greedily in order."""
    a = _as_gf2(a)
    # Pivot columns of a^T are exactly the greedy independent rows of a.
    return row_reduce(a.T)[1] if a.size else []


def inverse(a) -> np.ndarray:
    a = _as_gf2(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("square matrix expected")
    rref, pivots = row_reduce(np.hstack([a, np.eye(n, dtype=np.uint8)]), ncols=n)
    if len(pivots) != n:
        raise np.linalg.LinAlgError("matrix is singular over GF(2)")
    return rref[:, n:].copy()


def symplectic_matrix_product(a, b) -> np.ndarray:
    """Pairwise symplectic forms between rows of ``a`` and ``b`` (``[x|z]`` layout)."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    n = a.shape[1] // 2
    ax, az = a[:, :n].astype(np.int64), a[:, n:].astype(np.int64)
    bx, bz = b[:, :n].astype(np.int64), b[:, n:].astype(np.int64)
    return ((ax @ bz.T + az @ bx.T) & 1).astype(np.uint8)


def symplectic_gram(a) -> np.ndarray:
    return symplectic_matrix_product(a, a)
