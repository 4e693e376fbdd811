"""Named code families.

Every builder returns a validated-by-construction :class:`StabilizerCode`;
:func:`build_named_code` dispatches on the family name used by the CLI and the
catalogue file format.
"""

from __future__ import annotations

import numpy as np

from ..pauli import PauliOp
from .code import StabilizerCode
from .construct import ClassicalCode, concatenate, css_from_classical, trivial_code

__all__ = [
    "FAMILIES",
    "PUBLISHED",
    "build_named_code",
    "repetition",
    "repetition_x",
    "two_qubit",
    "shor9",
    "steane7",
    "five_one_three",
    "four_two_two",
    "four_two_two_subsystem",
    "c6",
    "c6c4",
    "surface",
    "toric",
    "bacon_shor",
    "subsystem_surface",
    "STEANE_H",
]

STEANE_H = np.array([[0, 0, 0, 1, 1, 1, 1],
                     [0, 1, 1, 0, 0, 1, 1],
                     [1, 0, 1, 0, 1, 0, 1]], dtype=np.uint8)


def _sp(text: str, n: int) -> PauliOp:
    return PauliOp.from_sparse(text, n)


def repetition(n: int = 3) -> StabilizerCode:
    """Bit-flip repetition code: checks ``Z_i Z_{i+1}``, ``X̄ = X^{⊗n}``, ``Z̄ = Z_1``."""
    if n < 1:
        raise ValueError("n must be positive")
    stabs = [PauliOp.from_support(n, "Z", [i, i + 1]) for i in range(n - 1)]
    lx = PauliOp.from_support(n, "X", range(n))
    lz = PauliOp.single(n, 0, "Z")
    return StabilizerCode(n, 1, stabs, [(lx, lz)], name="repetition", params={"n": n})


def repetition_x(n: int = 3) -> StabilizerCode:
    """Phase-flip repetition code: checks ``X_i X_{i+1}``, ``X̄ = X_1``, ``Z̄ = Z^{⊗n}``."""
    if n < 1:
        raise ValueError("n must be positive")
    stabs = [PauliOp.from_support(n, "X", [i, i + 1]) for i in range(n - 1)]
    lx = PauliOp.single(n, 0, "X")
    lz = PauliOp.from_support(n, "Z", range(n))
    return StabilizerCode(n, 1, stabs, [(lx, lz)], name="repetition_x", params={"n": n})


def two_qubit() -> StabilizerCode:
    """``|0̄> = (|00>+|11>)/√2``: stabilizer ``X_1X_2``, ``X̄ = X_1``, ``Z̄ = Z_1Z_2``."""
    return StabilizerCode(2, 1, [_sp("X1 X2", 2)], [(_sp("X1", 2), _sp("Z1 Z2", 2))], name="two_qubit")


def shor9() -> StabilizerCode:
    """Phase-flip repetition code with each qubit replaced by a bit-flip repetition block."""
    code = concatenate(repetition_x(3), repetition(3), name="shor9")
    return StabilizerCode(code.n, code.k, code.stabilizers, code.logicals, name="shor9")


def steane7() -> StabilizerCode:
    h = ClassicalCode(STEANE_H)
    code = css_from_classical(h, h, name="steane7")
    # Z-checks come from H1; list the X-checks first like every other CSS family here.
    stabs = code.stabilizers[3:] + code.stabilizers[:3]
    return StabilizerCode(7, 1, stabs, code.logicals, name="steane7")


def five_one_three() -> StabilizerCode:
    """The cyclic ``[[5,1,3]]`` code generated by shifts of ``XZZXI``."""
    base = "XZZXI"
    stabs = [PauliOp.from_string(base[-s:] + base[:-s] if s else base) for s in range(4)]
    lx = PauliOp.from_string("XXXXX")
    lz = PauliOp.from_string("ZZZZZ")
    return StabilizerCode(5, 1, stabs, [(lx, lz)], name="five_one_three")


def four_two_two() -> StabilizerCode:
    """``[[4,2,2]]`` with ``X̄_1=X_1X_2, Z̄_1=Z_1Z_3, X̄_2=X_2X_4, Z̄_2=Z_3Z_4``."""
    n = 4
    stabs = [_sp("X1 X2 X3 X4", n), _sp("Z1 Z2 Z3 Z4", n)]
    logicals = [(_sp("X1 X2", n), _sp("Z1 Z3", n)), (_sp("X2 X4", n), _sp("Z3 Z4", n))]
    return StabilizerCode(n, 2, stabs, logicals, name="four_two_two")


def four_two_two_subsystem() -> StabilizerCode:
    """``[[4,2,2]]`` with logical qubit 2 demoted to a gauge qubit."""
    n = 4
    stabs = [_sp("X1 X2 X3 X4", n), _sp("Z1 Z2 Z3 Z4", n)]
    gauge = [_sp(s, n) for s in ("Z1 Z2", "Z3 Z4", "X1 X3", "X2 X4")]
    logicals = [(_sp("X1 X2", n), _sp("Z1 Z3", n))]
    return StabilizerCode(n, 1, stabs, logicals, gauge=gauge, name="four_two_two_subsystem")


def c6(logicals: str = "canonical") -> StabilizerCode:
    """The 6-qubit ``C_6`` code.

    ``logicals="printed"`` keeps ``X̄_2 = X_1X_2X_4`` as commonly printed, which
    anticommutes with ``Z̄_1 = Z_1Z_2Z_4``; ``"canonical"`` replaces it with
    ``X_1X_3X_4`` so the pairs are properly conjugate.  Both span the same
    logical algebra.
    """
    n = 6
    stabs = [_sp(s, n) for s in ("X1 X4 X5 X6", "X1 X2 X3 X6", "Z1 Z4 Z5 Z6", "Z1 Z2 Z3 Z6")]
    if logicals == "printed":
        x2 = "X1 X2 X4"
    elif logicals == "canonical":
        x2 = "X1 X3 X4"
    else:
        raise ValueError("logicals must be 'canonical' or 'printed'")
    pairs = [(_sp("X2 X3", n), _sp("Z1 Z2 Z4", n)), (_sp(x2, n), _sp("Z4 Z5", n))]
    params = {} if logicals == "canonical" else {"logicals": logicals}
    return StabilizerCode(n, 2, stabs, pairs, name="c6", params=params)


def c6c4(logicals: str = "canonical") -> StabilizerCode:
    """``C_6`` with the pairs (12), (34), (56) each replaced by a ``[[4,2,2]]`` block."""
    code = concatenate(c6(logicals), four_two_two(), [[0, 1], [2, 3], [4, 5]], name="c6c4")
    params = {} if logicals == "canonical" else {"logicals": logicals}
    return StabilizerCode(code.n, code.k, code.stabilizers, code.logicals, name="c6c4", params=params)


# -- 2D families -------------------------------------------------------------


def surface(L: int) -> StabilizerCode:
    """Planar surface code ``[[L^2+(L-1)^2, 1, L]]``.

    Sites of a ``(2L-1) x (2L-1)`` grid with ``i+j`` even are qubits; X-checks
    (stars) sit at (odd, even) and Z-checks (plaquettes) at (even, odd).  Z-checks
    are cut to weight 3 on the left and right edges, X-checks on the top and
    bottom.  ``Z̄`` runs down column 0 and ``X̄`` along row 0.
    """
    if L < 2:
        raise ValueError("surface code needs L >= 2")
    size = 2 * L - 1
    sites = [(i, j) for i in range(size) for j in range(size) if (i + j) % 2 == 0]
    index = {s: q for q, s in enumerate(sites)}
    n = len(sites)

    def nbrs(i, j):
        return [index[(a, b)] for a, b in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)) if (a, b) in index]

    xs, xc, zs, zc = [], [], [], []
    for i in range(size):
        for j in range(size):
            if i % 2 == 1 and j % 2 == 0:
                xs.append(PauliOp.from_support(n, "X", nbrs(i, j)))
                xc.append((i, j))
            elif i % 2 == 0 and j % 2 == 1:
                zs.append(PauliOp.from_support(n, "Z", nbrs(i, j)))
                zc.append((i, j))
    lz = PauliOp.from_support(n, "Z", [index[(i, 0)] for i in range(0, size, 2)])
    lx = PauliOp.from_support(n, "X", [index[(0, j)] for j in range(0, size, 2)])
    return StabilizerCode(n, 1, xs + zs, [(lx, lz)], name="surface", params={"L": L},
                          qubit_coords=tuple(sites), check_coords=tuple(xc + zc), periods=(0, 0))


def toric(L: int) -> StabilizerCode:
    """Toric code ``[[2L^2, 2, L]]`` on a ``2L x 2L`` periodic grid.

    Qubits sit where ``i+j`` is odd, X-stars at (even, even), Z-plaquettes at
    (odd, odd).  One star and one plaquette are dependent; they are kept as
    :attr:`~StabilizerCode.redundant` checks so every site carries a syndrome bit.
    """
    if L < 2:
        raise ValueError("toric code needs L >= 2")
    size = 2 * L
    sites = [(i, j) for i in range(size) for j in range(size) if (i + j) % 2 == 1]
    index = {s: q for q, s in enumerate(sites)}
    n = len(sites)

    def nbrs(i, j):
        return [index[((i + a) % size, (j + b) % size)] for a, b in ((-1, 0), (1, 0), (0, -1), (0, 1))]

    xs, xc, zs, zc = [], [], [], []
    for i in range(size):
        for j in range(size):
            if i % 2 == 0 and j % 2 == 0:
                xs.append(PauliOp.from_support(n, "X", nbrs(i, j)))
                xc.append((i, j))
            elif i % 2 == 1 and j % 2 == 1:
                zs.append(PauliOp.from_support(n, "Z", nbrs(i, j)))
                zc.append((i, j))
    stabs = xs[:-1] + zs[:-1]
    redundant = [xs[-1], zs[-1]]
    coords = xc[:-1] + zc[:-1] + [xc[-1], zc[-1]]
    logicals = [
        (PauliOp.from_support(n, "X", [index[(i, 1)] for i in range(0, size, 2)]),
         PauliOp.from_support(n, "Z", [index[(0, j)] for j in range(1, size, 2)])),
        (PauliOp.from_support(n, "X", [index[(1, j)] for j in range(0, size, 2)]),
         PauliOp.from_support(n, "Z", [index[(i, 0)] for i in range(1, size, 2)])),
    ]
    return StabilizerCode(n, 2, stabs, logicals, redundant=redundant, name="toric", params={"L": L},
                          qubit_coords=tuple(sites), check_coords=tuple(coords), periods=(size, size))


def bacon_shor(n: int) -> StabilizerCode:
    """``[[n^2, 1, n]]`` Bacon-Shor code on an ``n x n`` array, qubit ``(r, c) -> r*n + c``.

    Gauge group: vertical ``X X`` links and horizontal ``Z Z`` links.  Stabilizers:
    ``Z`` on columns ``i, i+1`` and ``X`` on rows ``j, j+1``.  ``Z̄`` is ``Z`` on
    column 0 and ``X̄`` is ``X`` on row 0.
    """
    if n < 2:
        raise ValueError("Bacon-Shor needs n >= 2")
    N = n * n

    def q(r, c):
        return r * n + c

    gauge = [PauliOp.from_support(N, "X", [q(r, c), q(r + 1, c)]) for r in range(n - 1) for c in range(n)]
    gauge += [PauliOp.from_support(N, "Z", [q(r, c), q(r, c + 1)]) for r in range(n) for c in range(n - 1)]
    xs = [PauliOp.from_support(N, "X", [q(r, c) for r in (j, j + 1) for c in range(n)]) for j in range(n - 1)]
    zs = [PauliOp.from_support(N, "Z", [q(r, c) for c in (i, i + 1) for r in range(n)]) for i in range(n - 1)]
    lx = PauliOp.from_support(N, "X", [q(0, c) for c in range(n)])
    lz = PauliOp.from_support(N, "Z", [q(r, 0) for r in range(n)])
    coords = tuple((r, c) for r in range(n) for c in range(n))
    check_coords = tuple([(j + 0.5, None) for j in range(n - 1)] + [(None, i + 0.5) for i in range(n - 1)])
    return StabilizerCode(N, 1, xs + zs, [(lx, lz)], gauge=gauge, name="bacon_shor", params={"n": n},
                          qubit_coords=coords, check_coords=check_coords, periods=(0, 0))


def subsystem_surface(L: int) -> StabilizerCode:
    from .subsystem_surface import build_subsystem_surface

    return build_subsystem_surface(L)


FAMILIES = {
    "repetition": (repetition, {"n": 3}),
    "repetition_x": (repetition_x, {"n": 3}),
    "two_qubit": (two_qubit, {}),
    "shor9": (shor9, {}),
    "steane7": (steane7, {}),
    "five_one_three": (five_one_three, {}),
    "four_two_two": (four_two_two, {}),
    "four_two_two_subsystem": (four_two_two_subsystem, {}),
    "c6": (c6, {"logicals": "canonical"}),
    "c6c4": (c6c4, {"logicals": "canonical"}),
    "trivial": (trivial_code, {}),
    "surface": (surface, {"L": 3}),
    "toric": (toric, {"L": 4}),
    "bacon_shor": (bacon_shor, {"n": 3}),
    "subsystem_surface": (subsystem_surface, {"L": 3}),
}

# Published distances, keyed by family and frozen parameters.
PUBLISHED = {
    ("shor9", ()): (9, 1, 3),
    ("steane7", ()): (7, 1, 3),
    ("five_one_three", ()): (5, 1, 3),
    ("four_two_two", ()): (4, 2, 2),
    ("c6", ()): (6, 2, 2),
    ("c6c4", ()): (12, 2, 4),
    ("surface", (("L", 2),)): (5, 1, 2),
    ("surface", (("L", 3),)): (13, 1, 3),
    ("bacon_shor", (("n", 3),)): (9, 1, 3),
}

_ALIASES = {"c4": "four_two_two", "422": "four_two_two", "513": "five_one_three", "steane": "steane7",
            "shor": "shor9", "bs": "bacon_shor", "bacon-shor": "bacon_shor", "planar": "surface",
            "subsystem-surface": "subsystem_surface", "rep": "repetition"}


def build_named_code(family: str, **params) -> StabilizerCode:
    """Build a catalogue code; unknown families or parameters raise ``ValueError``."""
    family = _ALIASES.get(family.lower(), family.lower())
    if family not in FAMILIES:
        raise ValueError(f"unknown code family {family!r}; known: {', '.join(sorted(FAMILIES))}")
    builder, defaults = FAMILIES[family]
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"family {family!r} takes no parameter(s) {sorted(unknown)}")
    kwargs = {**defaults, **{k: v for k, v in params.items() if v is not None}}
    for key in ("L", "n"):
        if key in kwargs:
            kwargs[key] = int(kwargs[key])
    return builder(**kwargs)
