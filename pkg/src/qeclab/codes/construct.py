"""Code constructions: logical completion, gauge centers, CSS and concatenation."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .. import gf2
from ..pauli import PauliOp, commutes, matrix_to_paulis, paulis_to_matrix
from .code import StabilizerCode

__all__ = [
    "ConstructionError",
    "ClassicalCode",
    "symplectic_complement",
    "complete_logicals",
    "derive_center",
    "css_from_classical",
    "concatenate",
    "trivial_code",
]


class ConstructionError(ValueError):
    """Raised when a requested code cannot be built from its ingredients."""


@dataclass(frozen=True, eq=False)
class ClassicalCode:
    """Binary linear code given by a parity check matrix with independent rows."""

    H: np.ndarray

    def __post_init__(self):
        h = np.atleast_2d(np.asarray(self.H, dtype=np.uint8))
        if h.size and gf2.rank(h) != h.shape[0]:
            raise ConstructionError("parity check rows are not independent")
        object.__setattr__(self, "H", h)

    @classmethod
    def empty(cls, n: int) -> ClassicalCode:
        return cls(np.zeros((0, n), dtype=np.uint8))

    @property
    def n(self) -> int:
        return self.H.shape[1]

    @property
    def k(self) -> int:
        return self.n - self.H.shape[0]

    def codeword_basis(self) -> np.ndarray:
        return gf2.nullspace(self.H)


def _swap_halves(m: np.ndarray) -> np.ndarray:
    n = m.shape[1] // 2
    return np.hstack([m[:, n:], m[:, :n]])


def symplectic_complement(stabs: Sequence[PauliOp]) -> list[PauliOp]:
    """Mutually commuting destabilizers ``D_i`` with ``<D_i, S_j> = δ_ij``."""
    stabs = list(stabs)
    n = stabs[0].n
    sm = paulis_to_matrix(stabs, n)
    sw = _swap_halves(sm)
    dest = []
    for i in range(len(stabs)):
        e = np.zeros(len(stabs), dtype=np.uint8)
        e[i] = 1
        v = gf2.solve(sw, e)
        if v is None:
            raise ConstructionError("generators are not independent")
        dest.append(PauliOp.from_symplectic(v))
    for i in range(len(dest)):
        for j in range(i + 1, len(dest)):
            if not commutes(dest[i], dest[j]):
                dest[j] = (dest[j] * stabs[i]).unsigned()
    return dest


def _reduce_against(basis: np.ndarray, cands: np.ndarray) -> np.ndarray:
    """Rows of ``cands`` that extend span(``basis``), greedily in order."""
    kept = []
    cur = basis.copy()
    r = gf2.rank(cur) if cur.size else 0
    for row in cands:
        trial = np.vstack([cur, row[None]]) if cur.size else row[None].copy()
        rt = gf2.rank(trial)
        if rt > r:
            kept.append(row)
            cur, r = trial, rt
    return np.array(kept, dtype=np.uint8).reshape(len(kept), cands.shape[1])


def _pair_css(xreps: np.ndarray, zreps: np.ndarray, n: int) -> list[tuple[PauliOp, PauliOp]]:
    # xreps rows are x-bit vectors, zreps rows are z-bit vectors of equal count.
    m = (xreps.astype(np.int64) @ zreps.T.astype(np.int64)) % 2
    inv = gf2.inverse(m)
    zfix = (inv.T.astype(np.int64) @ zreps.astype(np.int64)) % 2
    pairs = []
    for xr, zr in zip(xreps, zfix):
        lx = PauliOp.from_bits(xr, np.zeros(n, dtype=np.uint8))
        lz = PauliOp.from_bits(np.zeros(n, dtype=np.uint8), zr)
        pairs.append((lx, lz))
    return pairs


def _symplectic_gram_schmidt(reps: list[np.ndarray]) -> list[tuple[np.ndarray, np.ndarray]]:
    reps = [r.copy() for r in reps]
    n = len(reps[0]) // 2 if reps else 0

    def form(a, b):
        return int((a[:n] @ b[n:] + a[n:] @ b[:n]) % 2)

    pairs = []
    while reps:
        r = reps.pop(0)
        idx = next((i for i, s in enumerate(reps) if form(r, s)), None)
        if idx is None:
            raise ConstructionError("logical representatives are degenerate")
        s = reps.pop(idx)
        out = []
        for t in reps:
            t = (t + form(t, s) * r + form(t, r) * s) % 2
            out.append(t.astype(np.uint8))
        reps = out
        pairs.append((r, s))
    return pairs


def complete_logicals(stabs: Sequence[PauliOp], gauge: Sequence[PauliOp] = ()) -> list[tuple[PauliOp, PauliOp]]:
    """Logical pairs for ``stabs`` (bare logicals if ``gauge`` is given).

    Deterministic: representatives come from a fixed nullspace basis, and CSS
    inputs yield pure-X ``X̄`` and pure-Z ``Z̄`` operators.
    """
    stabs = list(stabs)
    gauge = list(gauge)
    ops = stabs + gauge
    if not ops:
        raise ConstructionError("need at least one stabilizer or gauge generator")
    n = ops[0].n
    sm = paulis_to_matrix(stabs, n) if stabs else np.zeros((0, 2 * n), dtype=np.uint8)
    gm = paulis_to_matrix(ops, n)
    css = all(op.pauli_type is not None for op in ops if not op.is_identity)
    if css:
        gx = np.array([op.x_bits for op in ops if op.pauli_type == "X"], dtype=np.uint8).reshape(-1, n)
        gz = np.array([op.z_bits for op in ops if op.pauli_type == "Z"], dtype=np.uint8).reshape(-1, n)
        sx = np.array([op.x_bits for op in stabs if op.pauli_type == "X"], dtype=np.uint8).reshape(-1, n)
        sz = np.array([op.z_bits for op in stabs if op.pauli_type == "Z"], dtype=np.uint8).reshape(-1, n)
        # X logicals commute with all Z-type gauge/stabilizers.
        xker = gf2.nullspace(gz) if gz.size else np.eye(n, dtype=np.uint8)
        zker = gf2.nullspace(gx) if gx.size else np.eye(n, dtype=np.uint8)
        xreps = _reduce_against(sx, xker)
        zreps = _reduce_against(sz, zker)
        if len(xreps) != len(zreps):
            raise ConstructionError("unbalanced CSS logical counts")
        if len(xreps) == 0:
            return []
        return _pair_css(xreps, zreps, n)
    cent = gf2.nullspace(_swap_halves(gm))
    reps = _reduce_against(sm, cent)
    pairs = _symplectic_gram_schmidt(list(reps))
    return [(PauliOp.from_symplectic(a), PauliOp.from_symplectic(b)) for a, b in pairs]


def derive_center(gauge: Sequence[PauliOp]) -> list[PauliOp]:
    """Independent generators (sign +1) of the center of the gauge group."""
    gauge = list(gauge)
    if not gauge:
        raise ValueError("gauge generators required")
    n = gauge[0].n
    gm = paulis_to_matrix(gauge, n)
    omega = gf2.symplectic_gram(gm)
    ker = gf2.nullspace(omega)
    if ker.size == 0:
        return []
    cent = (ker.astype(np.int64) @ gm.astype(np.int64)) % 2
    css = all(op.pauli_type is not None for op in gauge)
    if css:
        # Reduce X and Z parts separately so each generator keeps a pure type.
        out = []
        cx = cent[:, :n][np.any(cent[:, :n], axis=1) & ~np.any(cent[:, n:], axis=1)]
        cz = cent[:, n:][np.any(cent[:, n:], axis=1) & ~np.any(cent[:, :n], axis=1)]
        mixed = cent[np.any(cent[:, :n], axis=1) & np.any(cent[:, n:], axis=1)]
        if len(mixed) == 0:
            zeros = np.zeros(n, dtype=np.uint8)
            for part, is_x in ((cx, True), (cz, False)):
                if len(part) == 0:
                    continue
                rref, piv = gf2.row_reduce(part)
                for row in rref[: len(piv)]:
                    out.append(PauliOp.from_bits(row, zeros) if is_x else PauliOp.from_bits(zeros, row))
            if gf2.rank(paulis_to_matrix(out, n)) == gf2.rank(cent):
                return out
    rref, piv = gf2.row_reduce(cent)
    return matrix_to_paulis(rref[: len(piv)])


def css_from_classical(h1: ClassicalCode, h2: ClassicalCode, *, name: str = "css", params: dict | None = None) -> StabilizerCode:
    """Z-checks from the rows of ``h1`` and X-checks from the rows of ``h2``."""
    if not isinstance(h1, ClassicalCode):
        h1 = ClassicalCode(h1)
    if not isinstance(h2, ClassicalCode):
        h2 = ClassicalCode(h2)
    if h1.n != h2.n:
        raise ConstructionError(f"codes have different lengths {h1.n} and {h2.n}")
    n = h1.n
    overlap = (h2.H.astype(np.int64) @ h1.H.T.astype(np.int64)) % 2
    bad = np.argwhere(overlap)
    if bad.size:
        i, j = bad[0]
        raise ConstructionError(f"row {i} of H2 is not orthogonal to row {j} of H1")
    zero = np.zeros(n, dtype=np.uint8)
    zchecks = [PauliOp.from_bits(zero, r) for r in h1.H]
    xchecks = [PauliOp.from_bits(r, zero) for r in h2.H]
    stabs = zchecks + xchecks
    k = h1.k + h2.k - n
    logicals = complete_logicals(stabs) if stabs else [
        (PauliOp.single(n, j, "X"), PauliOp.single(n, j, "Z")) for j in range(n)]
    if len(logicals) != k:
        raise ConstructionError(f"expected k={k}, found {len(logicals)} logical pairs")
    return StabilizerCode(n, k, tuple(stabs), tuple(logicals), name=name, params=params or {})


def trivial_code() -> StabilizerCode:
    """The ``[[1,1,1]]`` code with no checks."""
    return StabilizerCode(1, 1, (), ((PauliOp.single(1, 0, "X"), PauliOp.single(1, 0, "Z")),), name="trivial")


def _encode(op: PauliOp, inner: StabilizerCode, blocks: list[list[int]]) -> PauliOp:
    n_in = inner.n
    total = n_in * len(blocks)
    out = PauliOp(total)
    for b, block in enumerate(blocks):
        for j, q in enumerate(block):
            letter = op.letter(q)
            if letter == "I":
                continue
            lx, lz = inner.logicals[j]
            lx = PauliOp(total, lx.x << (b * n_in), lx.z << (b * n_in), lx.phase)
            lz = PauliOp(total, lz.x << (b * n_in), lz.z << (b * n_in), lz.phase)
            if letter == "X":
                out = out * lx
            elif letter == "Z":
                out = out * lz
            else:
                out = out * lx * lz
    # Encoded Hermitian operators are reported with sign +1 (the phase of Y = iXZ is
    # absorbed); only commutation structure matters for checks and logicals.
    return out.unsigned()


def _shift(op: PauliOp, offset: int, total: int) -> PauliOp:
    return PauliOp(total, op.x << offset, op.z << offset, op.phase)


def concatenate(outer: StabilizerCode, inner: StabilizerCode, grouping: Sequence[Sequence[int]] | None = None,
                *, name: str | None = None) -> StabilizerCode:
    """Replace groups of ``outer`` qubits by ``inner``-encoded logical qubits.

    ``grouping`` partitions the outer qubits into blocks of ``inner.k`` qubits;
    position ``j`` inside a block becomes logical qubit ``j`` of that inner
    block.  Inner blocks are laid out consecutively.  The checks are the inner
    checks of every block followed by the encoded outer checks, split by type
    (X-type first) when both codes are CSS.
    """
    ki = inner.k
    if ki < 1:
        raise ConstructionError("inner code must encode at least one qubit")
    if grouping is None:
        if outer.n % ki:
            raise ConstructionError(f"{outer.n} outer qubits cannot be grouped in blocks of {ki}")
        grouping = [list(range(b * ki, (b + 1) * ki)) for b in range(outer.n // ki)]
    blocks = [list(g) for g in grouping]
    flat = sorted(q for g in blocks for q in g)
    if flat != list(range(outer.n)) or any(len(g) != ki for g in blocks):
        raise ConstructionError("grouping must partition the outer qubits into blocks of inner.k")
    total = inner.n * len(blocks)

    inner_checks = [[_shift(s, b * inner.n, total) for s in inner.stabilizers] for b in range(len(blocks))]
    outer_checks = [_encode(s, inner, blocks) for s in outer.stabilizers]
    if inner.is_css and outer.is_css:
        stabs = []
        for kind in ("X", "Z"):
            for block in inner_checks:
                stabs += [s for s in block if s.pauli_type == kind]
            stabs += [s for s in outer_checks if s.pauli_type == kind]
    else:
        stabs = [s for block in inner_checks for s in block] + outer_checks
    logicals = [(_encode(lx, inner, blocks), _encode(lz, inner, blocks)) for lx, lz in outer.logicals]
    gauge = []
    if inner.gauge or outer.gauge:
        for b in range(len(blocks)):
            gauge += [_shift(g, b * inner.n, total) for g in (inner.gauge or inner.stabilizers)]
        gauge += [_encode(g, inner, blocks) for g in (outer.gauge or outer.stabilizers)]
    params = {"outer": outer.label, "inner": inner.label}
    return StabilizerCode(total, outer.k, tuple(stabs), tuple(logicals), gauge=tuple(gauge),
                          name=name or f"{outer.name}*{inner.name}", params=params)
