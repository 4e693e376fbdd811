"""Pauli error models, syndromes, logical classes and noisy measurement histories.

Errors are handled in two forms: :class:`~qeclab.pauli.PauliOp` values for the
exact API and ``(x, z)`` ``uint8`` arrays for the Monte Carlo hot path.  Letter
index order everywhere is ``I, X, Z, Y`` (``x | z << 1``).

A noisy history consists of ``R`` measurement rounds.  Before every round a
fresh error is drawn and multiplied onto the running error; every check
outcome is then flipped with probability ``q``.  With ``final_round_perfect``
the last of the ``R`` rounds is read out with ``q = 0``.  Events are outcome
changes between consecutive rounds, with an all-``+1`` reference before round
0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import gf2
from .codes.code import StabilizerCode
from .pauli import PauliOp

__all__ = [
    "ErrorModel",
    "NotInCentralizer",
    "DefectRecord",
    "SampledHistory",
    "sample_error",
    "sample_error_bits",
    "syndrome",
    "syndrome_bits",
    "logical_class",
    "logical_class_bits",
    "class_label",
    "pure_errors",
    "reference_error",
    "reference_class_bits",
    "sample_history",
]

_KINDS = {
    "depolarizing": "depolarizing",
    "depol": "depolarizing",
    "independent_xz": "independent_xz",
    "xz": "independent_xz",
    "bitflip": "bitflip",
    "bitflip_only": "bitflip",
    "x": "bitflip",
}


class NotInCentralizer(ValueError):
    """The operator anticommutes with a stabilizer, so it has no logical class."""


@dataclass(frozen=True)
class ErrorModel:
    """I.i.d. single-qubit Pauli noise with rate ``p`` plus measurement flips at rate ``q``.

    ``kind`` is one of ``depolarizing`` (X, Y, Z each ``p/3``), ``independent_xz``
    (X and Z flips independently with probability ``p`` each) or ``bitflip``
    (X only).
    """

    kind: str = "depolarizing"
    p: float = 0.0
    q: float = 0.0

    def __post_init__(self):
        kind = _KINDS.get(self.kind.lower())
        if kind is None:
            raise ValueError(f"unknown error model {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        for name in ("p", "q"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    @property
    def letter_probs(self) -> np.ndarray:
        """Per-qubit probabilities of ``I, X, Z, Y``."""
        p = self.p
        if self.kind == "depolarizing":
            return np.array([1 - p, p / 3, p / 3, p / 3])
        if self.kind == "independent_xz":
            return np.array([(1 - p) ** 2, p * (1 - p), p * (1 - p), p * p])
        return np.array([1 - p, p, 0.0, 0.0])

    @property
    def marginal_x(self) -> float:
        """Probability that a qubit's error has an X component (X or Y)."""
        lp = self.letter_probs
        return float(lp[1] + lp[3])

    @property
    def marginal_z(self) -> float:
        lp = self.letter_probs
        return float(lp[2] + lp[3])

    def with_rates(self, p: float | None = None, q: float | None = None) -> ErrorModel:
        return ErrorModel(self.kind, self.p if p is None else p, self.q if q is None else q)


def sample_error_bits(model: ErrorModel, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw one error as ``(x, z)`` bit arrays."""
    cum = np.cumsum(model.letter_probs)
    cum[-1] = 1.0
    letters = np.searchsorted(cum, rng.random(n), side="right")
    x = (letters & 1).astype(np.uint8)
    z = (letters >> 1).astype(np.uint8)
    return x, z


def sample_error(model: ErrorModel, n: int, rng: np.random.Generator) -> PauliOp:
    x, z = sample_error_bits(model, n, rng)
    return PauliOp.from_bits(x, z)


# -- syndromes and classes ---------------------------------------------------


class _Kernel:
    """Padded support lists for fast parity evaluation on ``[x | z | 0]`` vectors."""

    def __init__(self, matrix: np.ndarray, n: int):
        # Row r of ``matrix`` is [a | b]: parity = a·x + b·z.
        rows = [np.flatnonzero(row) for row in matrix]
        width = max((len(r) for r in rows), default=0)
        self.idx = np.full((len(rows), max(width, 1)), 2 * n, dtype=np.int64)
        for i, r in enumerate(rows):
            self.idx[i, : len(r)] = r
        self.n = n

    def __call__(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        v = np.concatenate([x, z, np.zeros(x.shape[:-1] + (1,), dtype=np.uint8)], axis=-1)
        return (np.bitwise_xor.reduce(v[..., self.idx], axis=-1) & 1).astype(np.uint8)


@lru_cache(maxsize=64)
def _syndrome_kernel(code: StabilizerCode) -> _Kernel:
    n = code.n
    m = code.check_matrix
    # Check row [cx | cz] anticommutes with error [x | z] via cz·x + cx·z.
    return _Kernel(np.hstack([m[:, n:], m[:, :n]]), n)


@lru_cache(maxsize=64)
def _class_kernel(code: StabilizerCode) -> _Kernel:
    a, b = code.class_operator
    return _Kernel(np.hstack([a, b]).astype(np.uint8), code.n)


def syndrome_bits(code: StabilizerCode, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Syndrome over :attr:`StabilizerCode.checks` for (batches of) bit arrays."""
    return _syndrome_kernel(code)(np.asarray(x, dtype=np.uint8), np.asarray(z, dtype=np.uint8))


def syndrome(code: StabilizerCode, error: PauliOp) -> np.ndarray:
    """One bit per check (generators then redundant checks); 1 means outcome ``-1``."""
    if error.n != code.n:
        raise ValueError(f"error acts on {error.n} qubits, code has {code.n}")
    return syndrome_bits(code, error.x_bits, error.z_bits)


def logical_class_bits(code: StabilizerCode, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Class bits without the centralizer check (vectorized)."""
    return _class_kernel(code)(np.asarray(x, dtype=np.uint8), np.asarray(z, dtype=np.uint8))


def logical_class(code: StabilizerCode, op: PauliOp) -> np.ndarray:
    """``2k`` bits: coefficients of ``X̄_1..X̄_k, Z̄_1..Z̄_k`` in ``op`` modulo the stabilizer
    (gauge) group.

    Raises:
        NotInCentralizer: if ``op`` anticommutes with a stabilizer generator.
    """
    if op.n != code.n:
        raise ValueError(f"operator acts on {op.n} qubits, code has {code.n}")
    syn = syndrome(code, op)
    if syn.any():
        bad = int(np.flatnonzero(syn)[0])
        raise NotInCentralizer(f"{op} anticommutes with check {bad} ({code.checks[bad]})")
    return logical_class_bits(code, op.x_bits, op.z_bits)


def class_label(bits, k: int | None = None) -> str:
    """Human label such as ``"I"``, ``"X1"`` or ``"Y1 Z2"``."""
    bits = np.asarray(bits, dtype=np.uint8)
    k = len(bits) // 2 if k is None else k
    parts = []
    for i in range(k):
        letter = "IXZY"[int(bits[i]) | int(bits[k + i]) << 1]
        if letter != "I":
            parts.append(f"{letter}{i + 1}")
    return " ".join(parts) or "I"


@lru_cache(maxsize=64)
def _pure_error_matrix(code: StabilizerCode) -> np.ndarray:
    n = code.n
    sm = code.check_matrix[: len(code.stabilizers)]
    lm = code.logical_matrix
    cons = np.vstack([sm, lm]) if len(lm) else sm
    sw = np.hstack([cons[:, n:], cons[:, :n]])
    rhs = np.zeros((len(cons), len(sm)), dtype=np.uint8)
    rhs[np.arange(len(sm)), np.arange(len(sm))] = 1
    sol = gf2.solve(sw, rhs)
    if sol is None:
        raise ValueError("stabilizers and logicals are not independent")
    return np.ascontiguousarray(sol.T)


def pure_errors(code: StabilizerCode) -> list[PauliOp]:
    """``T_i`` with ``<T_i, S_j> = δ_ij`` that commute with every logical operator."""
    return [PauliOp.from_symplectic(v) for v in _pure_error_matrix(code)]


def reference_error(code: StabilizerCode, syn: np.ndarray) -> PauliOp:
    """Fixed representative error for a generator syndrome (product of pure errors)."""
    sel = np.asarray(syn, dtype=bool)[: len(code.stabilizers)]
    mat = _pure_error_matrix(code)
    v = np.bitwise_xor.reduce(mat[sel], axis=0) if sel.any() else np.zeros(2 * code.n, dtype=np.uint8)
    return PauliOp.from_symplectic(v)


@lru_cache(maxsize=64)
def _pure_error_classes(code: StabilizerCode) -> np.ndarray:
    mat = _pure_error_matrix(code)
    return logical_class_bits(code, mat[:, : code.n], mat[:, code.n:])


def reference_class_bits(code: StabilizerCode, syn: np.ndarray) -> np.ndarray:
    """Class bits of :func:`reference_error` for ``syn`` (the class map is linear)."""
    sel = np.asarray(syn, dtype=bool)[: len(code.stabilizers)]
    cls = _pure_error_classes(code)
    if not sel.any():
        return np.zeros(cls.shape[1], dtype=np.uint8)
    return np.bitwise_xor.reduce(cls[sel], axis=0)


# -- histories ----------------------------------------------------------------


@dataclass(frozen=True)
class DefectRecord:
    """Decoder-visible space-time record of check-outcome changes.

    ``events`` is an ``(E, 2)`` array of ``(round, check)`` pairs sorted
    lexicographically; check indices refer to :attr:`StabilizerCode.checks`.
    """

    rounds: int
    n_checks: int
    events: np.ndarray
    final_round_perfect: bool = True

    def __post_init__(self):
        ev = np.asarray(self.events, dtype=np.int64).reshape(-1, 2)
        if ev.size:
            order = np.lexsort((ev[:, 1], ev[:, 0]))
            ev = ev[order]
            if ev[:, 0].min() < 0 or ev[:, 0].max() >= self.rounds:
                raise ValueError("event round out of range")
            if ev[:, 1].min() < 0 or ev[:, 1].max() >= self.n_checks:
                raise ValueError("event check index out of range")
            if len(np.unique(ev, axis=0)) != len(ev):
                raise ValueError("duplicate events")
        ev.setflags(write=False)
        object.__setattr__(self, "events", ev)

    @classmethod
    def from_matrix(cls, events: np.ndarray, final_round_perfect: bool = True) -> DefectRecord:
        events = np.asarray(events)
        r, c = np.nonzero(events)
        return cls(events.shape[0], events.shape[1], np.stack([r, c], axis=1), final_round_perfect)

    @classmethod
    def from_syndrome(cls, syn: np.ndarray) -> DefectRecord:
        """Single perfect round."""
        return cls.from_matrix(np.asarray(syn, dtype=np.uint8)[None, :])

    def event_matrix(self) -> np.ndarray:
        out = np.zeros((self.rounds, self.n_checks), dtype=np.uint8)
        if self.events.size:
            out[self.events[:, 0], self.events[:, 1]] = 1
        return out

    def final_syndrome(self) -> np.ndarray:
        """Last-round outcomes: XOR of each check's events against the all-+1 reference."""
        out = np.zeros(self.n_checks, dtype=np.uint8)
        if self.events.size:
            np.bitwise_xor.at(out, self.events[:, 1], 1)
        return out

    def __len__(self) -> int:
        return len(self.events)

    def to_text(self) -> str:
        lines = [f"{self.rounds} {self.n_checks}"]
        lines += [f"{r} {c}" for r, c in self.events]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> DefectRecord:
        rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
        rows = [r for r in rows if r]
        if not rows or len(rows[0]) != 2:
            raise ValueError("record header must be 'R n_checks'")
        R, m = int(rows[0][0]), int(rows[0][1])
        ev = []
        for i, r in enumerate(rows[1:], 2):
            if len(r) != 2:
                raise ValueError(f"record line {i}: expected 'r c'")
            ev.append((int(r[0]), int(r[1])))
        return cls(R, m, np.array(ev, dtype=np.int64).reshape(-1, 2))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DefectRecord):
            return NotImplemented
        return (self.rounds, self.n_checks, self.final_round_perfect) == (
            other.rounds, other.n_checks, other.final_round_perfect) and np.array_equal(self.events, other.events)

    __hash__ = None


@dataclass(frozen=True)
class SampledHistory:
    """A record plus the hidden ground truth used only for scoring.

    ``x``/``z`` hold the cumulative error after the data noise of each round
    (shape ``(R, n)``); ``flips`` marks measurement errors (shape ``(R, m)``).
    """

    record: DefectRecord
    x: np.ndarray
    z: np.ndarray
    flips: np.ndarray
    measured: np.ndarray = field(repr=False, default=None)

    @property
    def final_error(self) -> PauliOp:
        return PauliOp.from_bits(self.x[-1], self.z[-1])


def sample_history(code: StabilizerCode, model: ErrorModel, rounds: int, rng: np.random.Generator,
                   final_round_perfect: bool = True) -> SampledHistory:
    """Sample ``rounds`` noisy syndrome measurements (see module docstring)."""
    if rounds < 1:
        raise ValueError("need at least one round")
    n = code.n
    m = len(code.checks)
    kern = _syndrome_kernel(code)
    xs = np.zeros((rounds, n), dtype=np.uint8)
    zs = np.zeros((rounds, n), dtype=np.uint8)
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    for r in range(rounds):
        dx, dz = sample_error_bits(model, n, rng)
        x ^= dx
        z ^= dz
        xs[r], zs[r] = x, z
    true_syn = kern(xs, zs)
    flips = (rng.random((rounds, m)) < model.q).astype(np.uint8)
    if final_round_perfect:
        flips[-1] = 0
    measured = true_syn ^ flips
    events = measured.copy()
    events[1:] ^= measured[:-1]
    record = DefectRecord.from_matrix(events, final_round_perfect)
    return SampledHistory(record, xs, zs, flips, measured)
