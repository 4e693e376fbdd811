"""Stabilizer-tableau simulation of Clifford circuits and Pauli measurements.

The state of ``n`` qubits is tracked by ``n`` stabilizer generators together
with ``n`` destabilizers (the Aaronson-Gottesman layout).  Rows are
:class:`~qeclab.pauli.PauliOp` values, so signs are tracked exactly by the
Pauli algebra rather than by a separate phase column.

Circuits are plain lists of :class:`Gate`.  The text form used by the CLI has
one gate per line::

    H 3
    CNOT 0 4
    MEAS XXII
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .pauli import PauliOp, commutes, parse_pauli, symplectic

__all__ = [
    "Tableau",
    "Gate",
    "apply_gate",
    "measure_pauli",
    "run_circuit",
    "parse_circuit",
    "format_circuit",
    "parity_check_circuit",
    "cnot_by_measurement",
]

_ONE_QUBIT = ("H", "S", "X", "Y", "Z")


@dataclass(frozen=True)
class Gate:
    """One circuit instruction: a Clifford gate or a Pauli measurement."""

    name: str
    qubits: tuple[int, ...] = ()
    pauli: PauliOp | None = None

    def __str__(self) -> str:
        if self.name == "MEAS":
            return f"MEAS {self.pauli}"
        return " ".join([self.name, *map(str, self.qubits)])


def _conjugate(p: PauliOp, name: str, qubits: tuple[int, ...]) -> PauliOp:
    """Return ``U p U^dagger`` for a Clifford gate ``U``."""
    x, z, ph = p.x, p.z, p.phase
    if name == "CNOT":
        c, t = qubits
        xc, zc = x >> c & 1, z >> c & 1
        xt, zt = x >> t & 1, z >> t & 1
        if xc & zt & (xt ^ zc ^ 1):
            ph += 2
        x ^= xc << t
        z ^= zt << c
        return PauliOp(p.n, x, z, ph)
    (j,) = qubits
    xj, zj = x >> j & 1, z >> j & 1
    if name == "H":
        if xj & zj:
            ph += 2
        x = (x & ~(1 << j)) | (zj << j)
        z = (z & ~(1 << j)) | (xj << j)
    elif name == "S":
        if xj & zj:
            ph += 2
        z ^= xj << j
    elif name == "X":
        if zj:
            ph += 2
    elif name == "Z":
        if xj:
            ph += 2
    elif name == "Y":
        if xj ^ zj:
            ph += 2
    else:
        raise ValueError(f"unknown gate {name!r}")
    return PauliOp(p.n, x, z, ph)


class Tableau:
    """Stabilizer state of ``n`` qubits; starts in ``|0...0>``."""

    def __init__(self, n: int):
        self.n = n
        self.stabs: list[PauliOp] = [PauliOp.single(n, j, "Z") for j in range(n)]
        self.destabs: list[PauliOp] = [PauliOp.single(n, j, "X") for j in range(n)]

    @classmethod
    def from_stabilizers(cls, gens: Sequence[PauliOp]) -> Tableau:
        """State stabilized by ``n`` independent commuting Hermitian generators."""
        from .codes.construct import symplectic_complement

        gens = list(gens)
        if not gens:
            raise ValueError("need at least one generator")
        n = gens[0].n
        if len(gens) != n:
            raise ValueError(f"need exactly n={n} generators, got {len(gens)}")
        for i, g in enumerate(gens):
            if not g.is_hermitian:
                raise ValueError(f"generator {i} is not Hermitian")
            for h in gens[i + 1:]:
                if not commutes(g, h):
                    raise ValueError("generators do not commute")
        t = cls(n)
        t.stabs = list(gens)
        t.destabs = symplectic_complement(gens)
        return t

    def copy(self) -> Tableau:
        t = Tableau.__new__(Tableau)
        t.n = self.n
        t.stabs = list(self.stabs)
        t.destabs = list(self.destabs)
        return t

    # -- gates --------------------------------------------------------------

    def _check(self, qubits: Iterable[int]) -> None:
        for q in qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for n={self.n}")

    def apply(self, name: str, *qubits: int) -> Tableau:
        name = name.upper()
        if name in ("CNOT", "CX"):
            name = "CNOT"
            if len(qubits) != 2 or qubits[0] == qubits[1]:
                raise ValueError("CNOT needs two distinct qubits")
        elif name in _ONE_QUBIT:
            if len(qubits) != 1:
                raise ValueError(f"{name} acts on one qubit")
        else:
            raise ValueError(f"unknown gate {name!r}")
        self._check(qubits)
        self.stabs = [_conjugate(p, name, qubits) for p in self.stabs]
        self.destabs = [_conjugate(p, name, qubits) for p in self.destabs]
        return self

    def h(self, q: int) -> Tableau:
        return self.apply("H", q)

    def s(self, q: int) -> Tableau:
        return self.apply("S", q)

    def cnot(self, c: int, t: int) -> Tableau:
        return self.apply("CNOT", c, t)

    def apply_pauli(self, p: PauliOp) -> Tableau:
        """Apply a Pauli operator to the state (flips the anticommuting stabilizer signs)."""
        if p.n != self.n:
            raise ValueError("dimension mismatch")
        self.stabs = [-s if not commutes(s, p) else s for s in self.stabs]
        self.destabs = [-d if not commutes(d, p) else d for d in self.destabs]
        return self

    # -- measurement --------------------------------------------------------

    def expectation_sign(self, p: PauliOp) -> int | None:
        """``+1``/``-1`` if ``p`` is (up to sign) in the stabilizer group, else ``None``."""
        if not p.is_hermitian:
            raise ValueError("only Hermitian Paulis have eigenvalues")
        if any(not commutes(p, s) for s in self.stabs):
            return None
        prod = PauliOp(self.n)
        for d, s in zip(self.destabs, self.stabs):
            if not commutes(p, d):
                prod = prod * s
        if prod.x != p.x or prod.z != p.z:
            raise AssertionError("tableau lost full rank")
        return 1 if (p.phase - prod.phase) % 4 == 0 else -1

    def measure(self, p: PauliOp, rng=None, forced: int | None = None) -> tuple[int, bool]:
        """Measure Hermitian ``p``; returns ``(outcome, deterministic)``.

        ``forced`` (``+1``/``-1``) selects the outcome of a random measurement
        instead of drawing it from ``rng``.
        """
        if p.n != self.n:
            raise ValueError("dimension mismatch")
        if not p.is_hermitian:
            raise ValueError("only Hermitian Paulis can be measured")
        anti = [i for i, s in enumerate(self.stabs) if not commutes(p, s)]
        if not anti:
            return self.expectation_sign(p), True
        if forced is not None:
            outcome = 1 if forced > 0 else -1
        else:
            if rng is None:
                raise ValueError("random measurement needs an rng")
            outcome = 1 if rng.integers(2) == 0 else -1
        piv = anti[0]
        sp = self.stabs[piv]
        for i in anti[1:]:
            self.stabs[i] = self.stabs[i] * sp
        for i, d in enumerate(self.destabs):
            if i != piv and not commutes(p, d):
                self.destabs[i] = d * sp
        self.destabs[piv] = sp
        self.stabs[piv] = p if outcome == 1 else -p
        return outcome, False

    # -- inspection ---------------------------------------------------------

    def check_invariants(self) -> None:
        """Raise ``AssertionError`` if the stabilizer/destabilizer pattern is broken."""
        n = self.n
        for i in range(n):
            for j in range(n):
                if symplectic(self.stabs[i], self.stabs[j]):
                    raise AssertionError(f"stabilizers {i},{j} anticommute")
                want = 1 if i == j else 0
                if symplectic(self.destabs[i], self.stabs[j]) != want:
                    raise AssertionError(f"destabilizer {i} vs stabilizer {j}")
            if not self.stabs[i].is_hermitian:
                raise AssertionError(f"stabilizer {i} is not Hermitian")

    def stabilizer_strings(self) -> list[str]:
        return [str(s) for s in self.stabs]

    def __repr__(self) -> str:
        return f"Tableau(n={self.n}, stabs={self.stabilizer_strings()})"


def apply_gate(t: Tableau, g: Gate, rng=None) -> int | None:
    """Apply one instruction in place; returns the outcome for measurements."""
    if g.name == "MEAS":
        return t.measure(g.pauli, rng)[0]
    t.apply(g.name, *g.qubits)
    return None


def measure_pauli(t: Tableau, p: PauliOp, rng=None) -> tuple[int, bool, Tableau]:
    outcome, det = t.measure(p, rng)
    return outcome, det, t


def run_circuit(t: Tableau, circuit: Sequence[Gate], rng=None) -> tuple[Tableau, list[int]]:
    outcomes = []
    for g in circuit:
        r = apply_gate(t, g, rng)
        if r is not None:
            outcomes.append(r)
    return t, outcomes


def parse_circuit(text: str) -> list[Gate]:
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        head = head.upper()
        try:
            if head in ("MEAS", "M", "MPP"):
                if len(rest) != 1:
                    raise ValueError("MEAS takes one Pauli string")
                gates.append(Gate("MEAS", (), parse_pauli(rest[0])))
            elif head in ("CNOT", "CX"):
                gates.append(Gate("CNOT", tuple(int(v) for v in rest)))
                if len(rest) != 2:
                    raise ValueError("CNOT takes two qubits")
            elif head in _ONE_QUBIT:
                if len(rest) != 1:
                    raise ValueError(f"{head} takes one qubit")
                gates.append(Gate(head, (int(rest[0]),)))
            else:
                raise ValueError(f"unknown instruction {head!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return gates


def format_circuit(circuit: Sequence[Gate]) -> str:
    return "".join(f"{g}\n" for g in circuit)


def parity_check_circuit(check: PauliOp, ancilla: int, style: str = "mx") -> list[Gate]:
    """Ancilla-based measurement of ``check`` on a register that includes ``ancilla``.

    ``style="mx"``: ancilla prepared in ``|+>``, controlled-P, then an X-basis
    readout (implemented as ``H`` followed by ``MEAS Z_a``).  Works for any
    Hermitian ``check`` with sign +1.

    ``style="cnot_in"``: for Z-type checks only; ancilla stays in ``|0>``, each
    data qubit is a CNOT control onto the ancilla, then ``MEAS Z_a``.

    The ancilla must start in ``|0>`` and the outcome equals the eigenvalue.
    """
    n = check.n
    if not 0 <= ancilla < n:
        raise IndexError("ancilla index outside register")
    if check.letter(ancilla) != "I":
        raise ValueError("check must not act on the ancilla")
    if check.phase != 0:
        raise ValueError("check must have sign +1")
    z_a = PauliOp.single(n, ancilla, "Z")
    if style == "cnot_in":
        if check.pauli_type != "Z":
            raise ValueError("cnot_in style needs a Z-type check")
        gates = [Gate("CNOT", (q, ancilla)) for q in check.support]
        return gates + [Gate("MEAS", (), z_a)]
    if style != "mx":
        raise ValueError(f"unknown style {style!r}")
    gates = [Gate("H", (ancilla,))]
    for q in check.support:
        letter = check.letter(q)
        if letter == "X":
            gates.append(Gate("CNOT", (ancilla, q)))
        elif letter == "Z":
            gates += [Gate("H", (q,)), Gate("CNOT", (ancilla, q)), Gate("H", (q,))]
        else:
            # S X S^dagger = Y, with S^dagger = S^3.
            gates += [Gate("S", (q,))] * 3
            gates.append(Gate("CNOT", (ancilla, q)))
            gates.append(Gate("S", (q,)))
    gates += [Gate("H", (ancilla,)), Gate("MEAS", (), z_a)]
    return gates


def cnot_by_measurement(t: Tableau, control: int, ancilla: int, target: int, rng=None,
                        forced: Sequence[int] | None = None, rule: str = "exact") -> tuple[int, int, int]:
    """CNOT(control -> target) via joint measurements on a ``|0>`` ancilla.

    Measures ``X_a X_t``, then ``Z_c Z_a``, then ``X_a``, and applies a
    Pauli-frame correction built from the outcome bits.  ``rule="exact"``
    applies ``X_t^{b_zz} Z_c^{b_xx ^ b_x}``, which reproduces CNOT for every
    input.  ``rule="target_only"`` applies ``Z_t^{b_xx} X_t^{b_zz}``; it drops
    the phase that the first measurement leaves on superposed inputs and is
    kept to demonstrate that failure.

    Returns the three outcome bits ``(b_xx, b_zz, b_x)`` (bit 1 means outcome ``-1``).
    """
    if rule not in ("exact", "target_only"):
        raise ValueError(f"unknown correction rule {rule!r}")
    n = t.n
    xx = PauliOp.from_support(n, "X", [ancilla, target])
    zz = PauliOp.from_support(n, "Z", [control, ancilla])
    xa = PauliOp.single(n, ancilla, "X")
    outs = []
    for k, op in enumerate((xx, zz, xa)):
        f = None if forced is None else forced[k]
        outs.append(t.measure(op, rng, forced=f)[0])
    b_xx, b_zz, b_x = (int(o == -1) for o in outs)
    if b_zz:
        t.apply_pauli(PauliOp.single(n, target, "X"))
    if rule == "exact":
        if b_xx ^ b_x:
            t.apply_pauli(PauliOp.single(n, control, "Z"))
    elif b_xx:
        t.apply_pauli(PauliOp.single(n, target, "Z"))
    return b_xx, b_zz, b_x
