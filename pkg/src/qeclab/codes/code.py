"""The :class:`StabilizerCode` container and its derived binary matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .. import gf2
from ..pauli import PauliOp, paulis_to_matrix


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """A stabilizer or subsystem code.

    Attributes:
        n: number of physical qubits.
        k: number of protected logical qubits.
        stabilizers: independent commuting check generators.
        logicals: ``k`` pairs ``(X̄_i, Z̄_i)``.  For subsystem codes these are
            bare logicals (they commute with every gauge generator).
        gauge: gauge generators; empty for plain stabilizer codes.
        redundant: extra stabilizer elements measured alongside the generators
            (for example the last plaquette of a torus).  They are products of
            generators but carry their own measurement outcome, which matters
            for matching decoders and noisy measurement.
        name, params: catalogue family and the parameters used to build it.
        qubit_coords: optional 2D position per qubit.
        check_coords: optional position per entry of :attr:`checks`.
        periods: per coordinate axis, the period for periodic lattices or ``0``.
    """

    n: int
    k: int
    stabilizers: tuple[PauliOp, ...]
    logicals: tuple[tuple[PauliOp, PauliOp], ...]
    gauge: tuple[PauliOp, ...] = ()
    redundant: tuple[PauliOp, ...] = ()
    name: str = "custom"
    params: dict = field(default_factory=dict)
    qubit_coords: tuple | None = None
    check_coords: tuple | None = None
    periods: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "stabilizers", tuple(self.stabilizers))
        object.__setattr__(self, "logicals", tuple(tuple(p) for p in self.logicals))
        object.__setattr__(self, "gauge", tuple(self.gauge))
        object.__setattr__(self, "redundant", tuple(self.redundant))
        for op in self.all_operators():
            if op.n != self.n:
                raise ValueError(f"operator {op} does not act on {self.n} qubits")
        if len(self.logicals) != self.k:
            raise ValueError(f"expected {self.k} logical pairs, got {len(self.logicals)}")

    def all_operators(self):
        yield from self.stabilizers
        yield from self.redundant
        yield from self.gauge
        for lx, lz in self.logicals:
            yield lx
            yield lz

    # -- labels -----------------------------------------------------------

    @property
    def label(self) -> str:
        if self.params:
            inner = ",".join(f"{k}={v}" for k, v in self.params.items())
            return f"{self.name}({inner})"
        return self.name

    @property
    def is_subsystem(self) -> bool:
        return bool(self.gauge)

    @cached_property
    def gauge_qubits(self) -> int:
        if not self.gauge:
            return 0
        rg = gf2.rank(np.vstack([self.stabilizer_matrix, self.gauge_matrix]))
        return (rg - gf2.rank(self.stabilizer_matrix)) // 2

    @cached_property
    def is_css(self) -> bool:
        return all(op.pauli_type is not None for op in self.all_operators()
                   if not op.is_identity)

    # -- matrices -----------------------------------------------------------

    @property
    def checks(self) -> tuple[PauliOp, ...]:
        """Measured check operators: generators followed by redundant checks."""
        return self.stabilizers + self.redundant

    @cached_property
    def stabilizer_matrix(self) -> np.ndarray:
        return _mat(self.stabilizers, self.n)

    @cached_property
    def check_matrix(self) -> np.ndarray:
        return _mat(self.checks, self.n)

    @cached_property
    def gauge_matrix(self) -> np.ndarray:
        return _mat(self.gauge, self.n)

    @cached_property
    def logical_matrix(self) -> np.ndarray:
        """Rows ``X̄_1..X̄_k, Z̄_1..Z̄_k``."""
        ops = [lx for lx, _ in self.logicals] + [lz for _, lz in self.logicals]
        return _mat(ops, self.n)

    @cached_property
    def check_types(self) -> tuple[str | None, ...]:
        return tuple(c.pauli_type for c in self.checks)

    def check_indices(self, kind: str) -> np.ndarray:
        """Indices into :attr:`checks` of the pure ``kind``-type checks."""
        return np.array([i for i, t in enumerate(self.check_types) if t == kind], dtype=np.int64)

    @cached_property
    def syndrome_operator(self) -> tuple[np.ndarray, np.ndarray]:
        """``(A, B)`` with ``syndrome = (A @ x + B @ z) % 2`` for error bits ``x, z``."""
        m = self.check_matrix.astype(np.int64)
        n = self.n
        return m[:, n:].copy(), m[:, :n].copy()

    @cached_property
    def class_operator(self) -> tuple[np.ndarray, np.ndarray]:
        """``(A, B)`` with ``class = (A @ x + B @ z) % 2`` for centralizer elements.

        Class bits are ordered as coefficients of ``X̄_1..X̄_k, Z̄_1..Z̄_k``.  The
        stored logicals need not be canonically paired; the Gram matrix of the
        logical basis is inverted so any non-degenerate basis works.
        """
        lm = self.logical_matrix
        if self.k == 0:
            z = np.zeros((0, self.n), dtype=np.int64)
            return z, z
        gram = gf2.symplectic_gram(lm)
        inv = gf2.inverse(gram).astype(np.int64)
        n = self.n
        # s_j = <P, L_j> = c @ gram, so c = s @ inv; gram is symmetric, hence inv too.
        a = (inv @ lm[:, n:].astype(np.int64)) % 2
        b = (inv @ lm[:, :n].astype(np.int64)) % 2
        return a, b

    def __repr__(self) -> str:
        d = self.params.get("d")
        core = f"[[{self.n},{self.k}" + (f",{d}" if d else "") + "]]"
        return f"StabilizerCode({self.label} {core})"


def _mat(ops, n) -> np.ndarray:
    if not ops:
        return np.zeros((0, 2 * n), dtype=np.uint8)
    return paulis_to_matrix(list(ops), n)
