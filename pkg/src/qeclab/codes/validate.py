"""Structural checks of a :class:`StabilizerCode` with witness operators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import gf2
from ..pauli import PauliOp, commutes, paulis_to_matrix
from .code import StabilizerCode
from .construct import derive_center

__all__ = ["Violation", "ValidationReport", "validate_code"]


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    witnesses: tuple[PauliOp, ...] = ()

    def __str__(self) -> str:
        if self.witnesses:
            ops = ", ".join(str(w) for w in self.witnesses)
            return f"{self.rule}: {self.message} [{ops}]"
        return f"{self.rule}: {self.message}"


@dataclass
class ValidationReport:
    code_label: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return f"{self.code_label}: ok"
        return "\n".join([f"{self.code_label}: {len(self.violations)} violation(s)"] +
                         [f"  {v}" for v in self.violations])


def _first_anticommuting(a, b, same=False):
    for i, p in enumerate(a):
        for j, q in enumerate(b):
            if same and j <= i:
                continue
            if not commutes(p, q):
                return i, j
    return None


def validate_code(code: StabilizerCode) -> ValidationReport:
    """Check every structural invariant; never raises on a bad code."""
    rep = ValidationReport(code.label)
    add = rep.violations.append
    n = code.n
    stabs = list(code.stabilizers)
    gauge = list(code.gauge)
    lx = [p[0] for p in code.logicals]
    lz = [p[1] for p in code.logicals]

    for s in stabs:
        if s.phase != 0:
            add(Violation("sign", "stabilizer generators must carry sign +1", (s,)))
            break
    hit = _first_anticommuting(stabs, stabs, same=True)
    if hit:
        add(Violation("commutation", f"stabilizers {hit[0]} and {hit[1]} anticommute",
                      (stabs[hit[0]], stabs[hit[1]])))
    if stabs:
        sm = code.stabilizer_matrix
        if gf2.rank(sm) != len(stabs):
            dep = next(i for i in range(len(stabs)) if gf2.rank(sm[: i + 1]) <= i)
            add(Violation("independence", f"stabilizer {dep} is a product of earlier generators", (stabs[dep],)))
    for r in code.redundant:
        if not gf2.in_rowspace(code.stabilizer_matrix, r.symplectic_vector()):
            add(Violation("redundant", "redundant check is not in the stabilizer group", (r,)))

    for kind, ops in (("X", lx), ("Z", lz)):
        hit = _first_anticommuting(ops, stabs)
        if hit:
            add(Violation("logical-commutation", f"{kind}-logical {hit[0]} anticommutes with stabilizer {hit[1]}",
                          (ops[hit[0]], stabs[hit[1]])))
        if gauge:
            hit = _first_anticommuting(ops, gauge)
            if hit:
                add(Violation("bare-logical", f"{kind}-logical {hit[0]} anticommutes with gauge generator {hit[1]}",
                              (ops[hit[0]], gauge[hit[1]])))
    for i in range(code.k):
        for j in range(code.k):
            want = i == j
            if commutes(lx[i], lz[j]) == want:
                rel = "anticommute" if want else "commute"
                add(Violation("logical-pairing", f"X̄_{i + 1} and Z̄_{j + 1} should {rel}", (lx[i], lz[j])))
            if j > i:
                if not commutes(lx[i], lx[j]):
                    add(Violation("logical-pairing", f"X̄_{i + 1} and X̄_{j + 1} anticommute", (lx[i], lx[j])))
                if not commutes(lz[i], lz[j]):
                    add(Violation("logical-pairing", f"Z̄_{i + 1} and Z̄_{j + 1} anticommute", (lz[i], lz[j])))

    m = 0
    if gauge:
        hit = _first_anticommuting(stabs, gauge)
        if hit:
            add(Violation("center", f"stabilizer {hit[0]} anticommutes with gauge generator {hit[1]}",
                          (stabs[hit[0]], gauge[hit[1]])))
        gm = code.gauge_matrix
        for s in stabs:
            if not gf2.in_rowspace(gm, s.symplectic_vector()):
                add(Violation("center", "stabilizer is not in the gauge group", (s,)))
                break
        center = derive_center(gauge)
        if stabs and len(center) != gf2.rank(code.stabilizer_matrix):
            add(Violation("center", f"stabilizers span {gf2.rank(code.stabilizer_matrix)} dimensions, "
                          f"center of the gauge group has {len(center)}"))
        m = code.gauge_qubits
    else:
        lm = code.logical_matrix
        if stabs and code.k and gf2.rank(np.vstack([code.stabilizer_matrix, lm])) != len(stabs) + 2 * code.k:
            add(Violation("logical-independence", "logicals are not independent of the stabilizers"))
    if len(stabs) != n - code.k - m:
        add(Violation("counting", f"{len(stabs)} generators but n-k-m = {n - code.k - m}"))
    if code.k and gauge:
        lm = paulis_to_matrix(lx + lz, n)
        if gf2.rank(np.vstack([code.gauge_matrix, lm])) != gf2.rank(code.gauge_matrix) + 2 * code.k:
            add(Violation("logical-independence", "logicals are not independent of the gauge group"))
    return rep
