"""Exhaustive minimum-weight decoding with a deterministic tie-break.

Errors are enumerated by weight, then by support (lexicographic qubit tuple),
then by letters with ``X < Y < Z`` on the lowest qubit first.  The first error
met for each syndrome is stored, so the answer for a syndrome is the smallest
minimum-weight error in that order.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from math import comb

import numpy as np

from ..codes.code import StabilizerCode
from .base import Correction, DecoderError, as_syndrome, make_correction

__all__ = ["MAX_MINWEIGHT_ENUMERATION", "MinWeightTable", "decode_minweight_exhaustive", "minweight_table"]

MAX_MINWEIGHT_ENUMERATION = 50_000_000

# letter -> (x, z); enumeration order X < Y < Z.
_LETTERS = ((1, 0), (1, 1), (0, 1))


class MinWeightTable:
    """Syndrome -> first minimum-weight error, filled one weight level at a time."""

    def __init__(self, code: StabilizerCode, budget: int = MAX_MINWEIGHT_ENUMERATION):
        r = len(code.stabilizers)
        if r > 62:
            raise DecoderError(f"{code.label}: {r} generators do not fit a 64-bit syndrome key")
        self.code = code
        self.budget = budget
        self.spent = 0
        n = code.n
        sm = code.stabilizer_matrix.astype(np.uint64)
        powers = (np.uint64(1) << np.arange(r, dtype=np.uint64)) if r else np.zeros(0, dtype=np.uint64)
        # key[q, l] = syndrome (as an integer) of letter l on qubit q.
        self.key = np.zeros((n, 3), dtype=np.uint64)
        for li, (x, z) in enumerate(_LETTERS):
            flips = (sm[:, n:] * np.uint64(x)) ^ (sm[:, :n] * np.uint64(z))
            self.key[:, li] = np.bitwise_or.reduce(flips * powers[:, None], axis=0) if r else 0
        self.table: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {0: ((), ())}
        self.next_weight = 1
        self.total = 1 << r

    def _level(self, w: int) -> None:
        n = self.code.n
        cost = comb(n, w) * 3 ** w
        if self.spent + cost > self.budget:
            raise DecoderError(f"{self.code.label}: minimum-weight search cap reached at weight {w}")
        self.spent += cost
        letters = np.array(list(product(range(3), repeat=w)), dtype=np.int64)
        for sup in combinations(range(n), w):
            sup_arr = np.array(sup)
            keys = np.bitwise_xor.reduce(self.key[sup_arr[None, :], letters], axis=1)
            uniq, first = np.unique(keys, return_index=True)
            for kval, i in zip(uniq.tolist(), first.tolist()):
                if kval not in self.table:
                    self.table[kval] = (sup, tuple(letters[i].tolist()))
            if len(self.table) == self.total:
                return

    def lookup(self, key: int):
        while key not in self.table:
            if self.next_weight > self.code.n or len(self.table) == self.total:
                raise DecoderError(f"syndrome {key:#x} is not produced by any Pauli error")
            self._level(self.next_weight)
            self.next_weight += 1
        return self.table[key]


@lru_cache(maxsize=32)
def minweight_table(code: StabilizerCode) -> MinWeightTable:
    return MinWeightTable(code)


def decode_minweight_exhaustive(code: StabilizerCode, syndrome, model=None) -> Correction:
    """A minimum-weight error with the given syndrome (``model`` is ignored).

    Raises:
        DecoderError: if the enumeration budget runs out before the syndrome is found.
    """
    syn = as_syndrome(code, syndrome)
    gen = syn[: len(code.stabilizers)]
    key = int(np.sum(gen.astype(np.uint64) << np.arange(len(gen), dtype=np.uint64))) if len(gen) else 0
    sup, lets = minweight_table(code).lookup(key)
    x = np.zeros(code.n, dtype=np.uint8)
    z = np.zeros(code.n, dtype=np.uint8)
    for q, li in zip(sup, lets):
        x[q], z[q] = _LETTERS[li]
    return make_correction(code, x, z, syn, "minweight")
