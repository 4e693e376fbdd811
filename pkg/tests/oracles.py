"""Independent reference routes used by several test modules."""

import itertools

import numpy as np

from qeclab.pauli import PauliOp, format_pauli

_DENSE = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
}
_PHASE = {0: 1, 1: 1j, 2: -1, 3: -1j}


def dense(p: PauliOp) -> np.ndarray:
    """Dense matrix built from the letter string, qubit 0 leftmost."""
    out = np.ones((1, 1), dtype=complex)
    for ch in format_pauli(p).lstrip("+-i"):
        out = np.kron(out, _DENSE[ch])
    return _PHASE[p.phase] * out


def gate_matrix(name: str, qubits, n: int) -> np.ndarray:
    """Unitary of a Clifford gate on ``n`` qubits (qubit 0 leftmost)."""
    one = {
        "H": np.array([[1, 1], [1, -1]]) / np.sqrt(2),
        "S": np.diag([1, 1j]),
        "X": _DENSE["X"],
        "Y": _DENSE["Y"],
        "Z": _DENSE["Z"],
    }
    dim = 2**n
    if name == "CNOT":
        c, t = qubits
        u = np.zeros((dim, dim), dtype=complex)
        for b in range(dim):
            bits = [(b >> (n - 1 - j)) & 1 for j in range(n)]
            if bits[c]:
                bits[t] ^= 1
            out = int("".join(map(str, bits)), 2)
            u[out, b] = 1
        return u
    (q,) = qubits
    u = np.ones((1, 1), dtype=complex)
    for j in range(n):
        u = np.kron(u, one[name] if j == q else np.eye(2))
    return u


def zero_state(n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1
    return psi


def project(psi: np.ndarray, p: PauliOp, outcome: int) -> np.ndarray:
    """Normalized post-measurement state; ``None`` if the outcome has probability 0."""
    m = dense(p)
    out = (psi + outcome * (m @ psi)) / 2
    norm = np.linalg.norm(out)
    return None if norm < 1e-9 else out / norm


def all_errors(n: int, max_weight: int):
    """Every Pauli (unsigned) of weight ``<= max_weight`` as ``(x_bits, z_bits)``."""
    for w in range(max_weight + 1):
        for support in itertools.combinations(range(n), w):
            for letters in itertools.product((1, 2, 3), repeat=w):
                x = np.zeros(n, dtype=np.uint8)
                z = np.zeros(n, dtype=np.uint8)
                for q, l in zip(support, letters):
                    x[q] = l & 1
                    z[q] = l >> 1
                yield x, z


def group_elements(gens: np.ndarray) -> np.ndarray:
    """Distinct GF(2) combinations of the rows of ``gens`` (which may be dependent)."""
    gens = np.asarray(gens, dtype=np.uint8)
    out = np.zeros((1, gens.shape[1]), dtype=np.uint8)
    for g in gens:
        out = np.unique(np.vstack([out, out ^ g]), axis=0)
    return out


def failure_counts(code, decoder: str, max_weight: int, x_only: bool = False) -> np.ndarray:
    """Number of weight-``w`` errors the decoder leaves as a nontrivial logical, for ``w <= max_weight``.

    Independent of sampling: every error of each weight is decoded from its
    perfect syndrome and its residual class is computed directly.
    """
    from qeclab.decoders import decode
    from qeclab.noise import logical_class_bits, syndrome_bits

    counts = np.zeros(max_weight + 1, dtype=np.int64)
    for w in range(max_weight + 1):
        for support in itertools.combinations(range(code.n), w):
            letter_sets = [(1,)] * w if x_only else [(1, 2, 3)] * w
            for letters in itertools.product(*letter_sets):
                x = np.zeros(code.n, dtype=np.uint8)
                z = np.zeros(code.n, dtype=np.uint8)
                for q, l in zip(support, letters):
                    x[q] = l & 1
                    z[q] = l >> 1
                corr = decode(decoder, code, syndrome_bits(code, x, z))
                if corr.failed or logical_class_bits(code, x ^ corr.x, z ^ corr.z).any():
                    counts[w] += 1
    return counts


def exact_failure_rate(counts: np.ndarray, n: int, p: float, x_only: bool = False) -> float:
    """Failure probability from :func:`failure_counts` (exact when every weight up to ``n`` is counted)."""
    per = p if x_only else p / 3
    return float(sum(c * per**w * (1 - p) ** (n - w) for w, c in enumerate(counts)))
