"""Exact maximum-likelihood (coset) decoding by enumerating the stabilizer or gauge group."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from .. import gf2
from ..codes.code import StabilizerCode
from ..noise import ErrorModel, reference_error
from .base import Correction, DecoderError, as_syndrome, make_correction

__all__ = ["MAX_ML_GENERATORS", "coset_log_probabilities", "decode_ml", "logical_representatives"]

MAX_ML_GENERATORS = 24
_CHUNK_BITS = 14


def _group_generators(code: StabilizerCode) -> np.ndarray:
    """Independent generators of the group summed over: the gauge group if present, else S."""
    mat = code.gauge_matrix if code.gauge else code.stabilizer_matrix
    if len(mat) == 0:
        return np.zeros((0, 2 * code.n), dtype=np.uint8)
    return mat[gf2.independent_rows(mat)]


def _span(gens: np.ndarray, width: int) -> np.ndarray:
    out = np.zeros((1, width), dtype=np.uint8)
    for g in gens:
        out = np.concatenate([out, out ^ g])
    return out


@lru_cache(maxsize=32)
def _group_tables(code: StabilizerCode, cap: int):
    gens = _group_generators(code)
    if len(gens) > cap:
        raise DecoderError(f"{code.label}: ML enumeration over 2^{len(gens)} group elements exceeds the "
                           f"cap of 2^{cap}")
    split = min(len(gens), _CHUNK_BITS)
    return _span(gens[:split], 2 * code.n), _span(gens[split:], 2 * code.n)


def logical_representatives(code: StabilizerCode) -> np.ndarray:
    """Row ``c`` is the symplectic vector of ``prod_i X̄_i^{c_i} Z̄_i^{c_{k+i}}`` (``c`` as bits, LSB first)."""
    lm = code.logical_matrix
    k2 = 2 * code.k
    out = np.zeros((1 << k2, 2 * code.n), dtype=np.uint8)
    for c in range(1 << k2):
        for b in range(k2):
            if c >> b & 1:
                out[c] ^= lm[b]
    return out


def _log_letter_probs(model: ErrorModel) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(model.letter_probs)


def _coset_scores(code: StabilizerCode, syn: np.ndarray, model: ErrorModel, cap: int):
    n = code.n
    head, tail = _group_tables(code, cap)
    lp = _log_letter_probs(model)
    ref = reference_error(code, syn).symplectic_vector().astype(np.uint8)
    reps = logical_representatives(code) ^ ref
    scores = np.empty(len(reps))
    best_elem = np.empty((len(reps), 2 * n), dtype=np.uint8)
    for c, rep in enumerate(reps):
        parts = []
        top, top_elem = -np.inf, rep
        for t in tail:
            elems = head ^ (rep ^ t)
            w = lp[elems[:, :n] | (elems[:, n:] << 1)].sum(axis=1)
            parts.append(logsumexp(w))
            i = int(np.argmax(w))
            if w[i] > top:
                top, top_elem = w[i], elems[i]
        scores[c] = logsumexp(parts)
        best_elem[c] = top_elem
    return scores, best_elem


def coset_log_probabilities(code: StabilizerCode, syndrome, model: ErrorModel,
                            cap: int = MAX_ML_GENERATORS) -> np.ndarray:
    """Log probability of each logical class ``c`` (bit ``i`` = coefficient of the ``i``-th class bit)
    relative to the reference error of ``syndrome``."""
    syn = as_syndrome(code, syndrome)
    return _coset_scores(code, syn, model, cap)[0]


def _class_index_to_bits(c: int, k2: int) -> np.ndarray:
    return np.array([(c >> b) & 1 for b in range(k2)], dtype=np.uint8)


def decode_ml(code: StabilizerCode, syndrome, model: ErrorModel, cap: int = MAX_ML_GENERATORS) -> Correction:
    """Most probable coset given the syndrome; ties go to the lowest class index.

    The returned Pauli is the single most probable element of the chosen coset.
    For subsystem codes the sum runs over the whole gauge group, so errors that
    differ by gauge operators are pooled.

    Raises:
        DecoderError: more than ``cap`` independent group generators.
    """
    syn = as_syndrome(code, syndrome)
    scores, elems = _coset_scores(code, syn, model, cap)
    best = int(np.argmax(scores))
    v = elems[best]
    corr = make_correction(code, v[: code.n], v[code.n:], syn, "ml",
                           info={"log_probs": scores})
    return corr
