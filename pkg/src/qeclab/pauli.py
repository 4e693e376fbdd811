"""Exact n-qubit Pauli group arithmetic in the binary-symplectic representation.

A :class:`PauliOp` stores its X and Z components as Python integers used as
bit sets (bit ``j`` is qubit ``j``), so products and commutation tests are
word-parallel XOR/AND/popcount operations regardless of ``n``.

The phase is tracked exactly as a power of ``i`` multiplying the *letter*
string, where a qubit with both bits set is the Hermitian ``Y = iXZ``.
For example ``X * Z == -iY`` and ``Z * X == +iY``.

Qubits are 0-indexed everywhere in the API; :meth:`PauliOp.sparse` prints
1-indexed labels such as ``Z1 Z4 Z7`` for comparison with textbook notation.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence

import numpy as np

__all__ = [
    "PauliOp",
    "pauli_mul",
    "commutes",
    "symplectic",
    "weight",
    "parse_pauli",
    "format_pauli",
    "paulis_to_matrix",
    "matrix_to_paulis",
]

_SIGNS = {0: "", 1: "i", 2: "-", 3: "-i"}
_SIGN_PREFIX = {"": 0, "+": 0, "i": 1, "+i": 1, "-": 2, "-i": 3}
_PARSE_RE = re.compile(r"^([+-]?i?)([IXYZ]+)$")


def _popcount(v: int) -> int:
    return v.bit_count()


class PauliOp:
    """An element ``i**phase * P_0 ⊗ ... ⊗ P_{n-1}`` of the n-qubit Pauli group.

    Instances are immutable and hashable.
    """

    __slots__ = ("n", "x", "z", "phase")

    def __init__(self, n: int, x: int = 0, z: int = 0, phase: int = 0):
        if n < 0:
            raise ValueError("qubit count must be non-negative")
        mask = (1 << n) - 1
        if x & ~mask or z & ~mask:
            raise ValueError(f"bit pattern does not fit in {n} qubits")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", phase % 4)

    def __setattr__(self, name, value):
        raise AttributeError("PauliOp is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliOp:
        return cls(n)

    @classmethod
    def from_string(cls, s: str) -> PauliOp:
        return parse_pauli(s)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliOp:
        return cls.from_support(n, letter, [qubit])

    @classmethod
    def from_support(cls, n: int, letter: str, qubits: Iterable[int]) -> PauliOp:
        """Apply the same single-qubit ``letter`` on every qubit in ``qubits``."""
        bits = 0
        for q in qubits:
            if not 0 <= q < n:
                raise IndexError(f"qubit {q} out of range for n={n}")
            bits |= 1 << q
        letter = letter.upper()
        if letter == "X":
            return cls(n, bits, 0)
        if letter == "Z":
            return cls(n, 0, bits)
        if letter == "Y":
            return cls(n, bits, bits)
        if letter == "I":
            return cls(n)
        raise ValueError(f"unknown Pauli letter {letter!r}")

    @classmethod
    def from_sparse(cls, text: str, n: int) -> PauliOp:
        """Parse 1-indexed sparse notation such as ``"Z1 Z4 Z7"`` or ``"X1X2"``."""
        text = text.strip()
        phase = 0
        m = re.match(r"^([+-]?i?)\s*", text)
        if m and m.group(1):
            phase = _SIGN_PREFIX[m.group(1)]
            text = text[m.end():]
        terms = re.findall(r"([IXYZ])_?(\d+)", text.replace(" ", ""))
        if not terms and text.replace(" ", "") not in ("", "I"):
            raise ValueError(f"cannot parse sparse Pauli {text!r}")
        op = cls(n)
        for letter, idx in terms:
            op = op * cls.single(n, int(idx) - 1, letter)
        return PauliOp(n, op.x, op.z, op.phase + phase)

    @classmethod
    def from_bits(cls, x_bits: Sequence[int], z_bits: Sequence[int], phase: int = 0) -> PauliOp:
        x_bits = np.asarray(x_bits, dtype=np.uint8).ravel()
        z_bits = np.asarray(z_bits, dtype=np.uint8).ravel()
        if x_bits.shape != z_bits.shape:
            raise ValueError("x and z bit vectors differ in length")
        return cls(len(x_bits), _bits_to_int(x_bits), _bits_to_int(z_bits), phase)

    @classmethod
    def from_symplectic(cls, vec: Sequence[int], phase: int = 0) -> PauliOp:
        """Build from a ``[x | z]`` vector of length ``2n``."""
        vec = np.asarray(vec, dtype=np.uint8).ravel()
        if len(vec) % 2:
            raise ValueError("symplectic vector must have even length")
        n = len(vec) // 2
        return cls.from_bits(vec[:n], vec[n:], phase)

    # -- views --------------------------------------------------------------

    @property
    def sign(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase]

    @property
    def x_bits(self) -> np.ndarray:
        return _int_to_bits(self.x, self.n)

    @property
    def z_bits(self) -> np.ndarray:
        return _int_to_bits(self.z, self.n)

    def symplectic_vector(self) -> np.ndarray:
        return np.concatenate([self.x_bits, self.z_bits])

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def support(self) -> list[int]:
        s = self.x | self.z
        return [j for j in range(self.n) if s >> j & 1]

    def letter(self, qubit: int) -> str:
        return "IXZY"[(self.x >> qubit & 1) | (self.z >> qubit & 1) << 1]

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def pauli_type(self) -> str | None:
        """``"X"`` or ``"Z"`` for pure-type operators, ``None`` for mixed or identity."""
        if self.z == 0 and self.x:
            return "X"
        if self.x == 0 and self.z:
            return "Z"
        return None

    def unsigned(self) -> PauliOp:
        return PauliOp(self.n, self.x, self.z, 0)

    def with_phase(self, phase: int) -> PauliOp:
        return PauliOp(self.n, self.x, self.z, phase)

    def restricted(self, kind: str) -> PauliOp:
        """The pure X part (``kind='X'``) or pure Z part (``kind='Z'``), sign +1."""
        if kind == "X":
            return PauliOp(self.n, self.x, 0)
        if kind == "Z":
            return PauliOp(self.n, 0, self.z)
        raise ValueError(kind)

    def sparse(self) -> str:
        body = " ".join(f"{self.letter(j)}{j + 1}" for j in self.support) or "I"
        return _SIGNS[self.phase] + body

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix, qubit 0 as the leftmost tensor factor."""
        single = {
            "I": np.eye(2, dtype=complex),
            "X": np.array([[0, 1], [1, 0]], dtype=complex),
            "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
            "Z": np.array([[1, 0], [0, -1]], dtype=complex),
        }
        out = np.array([[1.0 + 0j]])
        for j in range(self.n):
            out = np.kron(out, single[self.letter(j)])
        return self.sign * out

    # -- algebra ------------------------------------------------------------

    def __mul__(self, other: PauliOp) -> PauliOp:
        return pauli_mul(self, other)

    def __neg__(self) -> PauliOp:
        return PauliOp(self.n, self.x, self.z, self.phase + 2)

    def commutes(self, other: PauliOp) -> bool:
        return commutes(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOp):
            return NotImplemented
        return (self.n, self.x, self.z, self.phase) == (other.n, other.x, other.z, other.phase)

    def __hash__(self) -> int:
        return hash((self.n, self.x, self.z, self.phase))

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliOp({format_pauli(self)!r})"

    def __reduce__(self):
        return (PauliOp, (self.n, self.x, self.z, self.phase))


def _bits_to_int(bits: np.ndarray) -> int:
    if len(bits) == 0:
        return 0
    packed = np.packbits(bits.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def _int_to_bits(v: int, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros(0, dtype=np.uint8)
    raw = np.frombuffer(v.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].copy()


def _check_dims(p: PauliOp, q: PauliOp) -> None:
    if p.n != q.n:
        raise ValueError(f"dimension mismatch: {p.n} vs {q.n} qubits")


def pauli_mul(p: PauliOp, q: PauliOp) -> PauliOp:
    """Group product ``p · q`` with exact phase."""
    _check_dims(p, q)
    # Move to X^x Z^z form: letters = i^{|x&z|} X^x Z^z, then reorder Z1 X2.
    ph = p.phase + q.phase + _popcount(p.x & p.z) + _popcount(q.x & q.z)
    ph += 2 * _popcount(p.z & q.x)
    x = p.x ^ q.x
    z = p.z ^ q.z
    ph -= _popcount(x & z)
    return PauliOp(p.n, x, z, ph)


def symplectic(p: PauliOp, q: PauliOp) -> int:
    """Symplectic form: 0 if ``p`` and ``q`` commute, 1 if they anticommute."""
    _check_dims(p, q)
    return (_popcount(p.x & q.z) + _popcount(p.z & q.x)) & 1


def commutes(p: PauliOp, q: PauliOp) -> bool:
    return symplectic(p, q) == 0


def weight(p: PauliOp) -> int:
    return p.weight


def parse_pauli(s: str) -> PauliOp:
    """Parse a dense string like ``"IXZ"``, ``"-YI"`` or ``"+iXX"``."""
    if not isinstance(s, str):
        raise TypeError("Pauli string expected")
    m = _PARSE_RE.match(s.strip())
    if not m:
        if not s.strip().lstrip("+-i"):
            raise ValueError("empty Pauli string")
        raise ValueError(f"illegal Pauli string {s!r}")
    prefix, body = m.groups()
    x = z = 0
    for j, ch in enumerate(body):
        if ch in "XY":
            x |= 1 << j
        if ch in "ZY":
            z |= 1 << j
    return PauliOp(len(body), x, z, _SIGN_PREFIX[prefix])


def format_pauli(p: PauliOp) -> str:
    return _SIGNS[p.phase] + "".join(p.letter(j) for j in range(p.n))


def paulis_to_matrix(ops: Sequence[PauliOp], n: int | None = None) -> np.ndarray:
    """Stack operators into a ``len(ops) x 2n`` binary ``[x | z]`` matrix."""
    if n is None:
        if not ops:
            raise ValueError("cannot infer n from an empty list")
        n = ops[0].n
    out = np.zeros((len(ops), 2 * n), dtype=np.uint8)
    for i, op in enumerate(ops):
        if op.n != n:
            raise ValueError("operators act on different numbers of qubits")
        out[i, :n] = op.x_bits
        out[i, n:] = op.z_bits
    return out


def matrix_to_paulis(mat: np.ndarray) -> list[PauliOp]:
    mat = np.asarray(mat, dtype=np.uint8)
    return [PauliOp.from_symplectic(row) for row in mat]
