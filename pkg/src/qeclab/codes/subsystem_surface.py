"""Subsystem surface code with weight-3 triangle gauge operators.

Layout on an ``L x L`` array of plaquettes: one qubit on every vertex and on
every edge, ``(L+1)^2 + 2L(L+1) = 3L^2 + 4L + 1`` qubits.  Each plaquette
carries four triangles (a corner plus its two adjacent edges): the NW and SE
triangles are X-type, the NE and SW triangles Z-type.  Their products
``X_NW X_SE`` and ``Z_NE Z_SW`` are the weight-6 stabilizers.

On the boundary, the triangles of the missing outer plaquettes are cut to
weight 2 (one edge plus one vertex).  Top and bottom keep their X pieces, left
and right their Z pieces; these ``4L`` operators are both gauge operators and
stabilizers.  Total: ``2L^2 + 4L`` stabilizers, ``L^2`` gauge qubits, one
logical qubit, distance ``L``.

Grid coordinates: vertex ``(a, b) -> (2a, 2b)``, horizontal edge
``(a, b) -> (2a, 2b+1)``, vertical edge ``(a, b) -> (2a+1, 2b)``; plaquette
stabilizers sit at ``(2a+1, 2b+1)`` and boundary stabilizers just outside the
array.
"""

from __future__ import annotations

from ..pauli import PauliOp
from .code import StabilizerCode
from .construct import complete_logicals

__all__ = ["build_subsystem_surface", "subsystem_surface_sites"]


def subsystem_surface_sites(L: int) -> list[tuple]:
    verts = [("v", a, b) for a in range(L + 1) for b in range(L + 1)]
    hedges = [("h", a, b) for a in range(L + 1) for b in range(L)]
    vedges = [("e", a, b) for a in range(L) for b in range(L + 1)]
    return verts + hedges + vedges


def _coord(site) -> tuple[int, int]:
    kind, a, b = site
    if kind == "v":
        return 2 * a, 2 * b
    if kind == "h":
        return 2 * a, 2 * b + 1
    return 2 * a + 1, 2 * b


def _min_weight_rep(op: PauliOp, stabs: list[PauliOp]) -> PauliOp:
    # Greedy descent: multiply by any stabilizer that lowers the weight.
    improved = True
    while improved:
        improved = False
        for s in stabs:
            cand = (op * s).unsigned()
            if cand.weight < op.weight:
                op, improved = cand, True
    return op


def build_subsystem_surface(L: int) -> StabilizerCode:
    if L < 2:
        raise ValueError("subsystem surface code needs L >= 2")
    sites = subsystem_surface_sites(L)
    idx = {s: i for i, s in enumerate(sites)}
    n = len(sites)

    gauge, xs, zs, xc, zc = [], [], [], [], []
    for a in range(L):
        for b in range(L):
            N, S = idx[("h", a, b)], idx[("h", a + 1, b)]
            W, E = idx[("e", a, b)], idx[("e", a, b + 1)]
            NW, NE = idx[("v", a, b)], idx[("v", a, b + 1)]
            SW, SE = idx[("v", a + 1, b)], idx[("v", a + 1, b + 1)]
            gauge += [PauliOp.from_support(n, "X", [NW, N, W]), PauliOp.from_support(n, "X", [SE, S, E]),
                      PauliOp.from_support(n, "Z", [NE, N, E]), PauliOp.from_support(n, "Z", [SW, S, W])]
            xs.append(PauliOp.from_support(n, "X", [NW, N, W, SE, S, E]))
            zs.append(PauliOp.from_support(n, "Z", [NE, N, E, SW, S, W]))
            xc.append((2 * a + 1, 2 * b + 1))
            zc.append((2 * a + 1, 2 * b + 1))
    for t in range(L):
        # Cut SE triangle of the missing plaquette above, NW triangle below.
        xs.append(PauliOp.from_support(n, "X", [idx[("h", 0, t)], idx[("v", 0, t + 1)]]))
        xc.append((-1, 2 * t + 1))
        xs.append(PauliOp.from_support(n, "X", [idx[("h", L, t)], idx[("v", L, t)]]))
        xc.append((2 * L + 1, 2 * t + 1))
        # Cut NE triangle of the missing plaquette on the left, SW triangle on the right.
        zs.append(PauliOp.from_support(n, "Z", [idx[("e", t, 0)], idx[("v", t, 0)]]))
        zc.append((2 * t + 1, -1))
        zs.append(PauliOp.from_support(n, "Z", [idx[("e", t, L)], idx[("v", t + 1, L)]]))
        zc.append((2 * t + 1, 2 * L + 1))
    boundary = xs[L * L:] + zs[L * L:]
    gauge += boundary
    stabs = xs + zs
    lx, lz = complete_logicals(stabs, gauge)[0]
    lx = _min_weight_rep(lx, xs)
    lz = _min_weight_rep(lz, zs)
    return StabilizerCode(n, 1, stabs, [(lx, lz)], gauge=gauge, name="subsystem_surface", params={"L": L},
                          qubit_coords=tuple(_coord(s) for s in sites), check_coords=tuple(xc + zc),
                          periods=(0, 0))
