"""Bacon-Shor decoding on the 1D line of column (row) parities.

An X error on any qubit of column ``c`` flips the parity of that column, and
gauge ``XX`` links make every qubit of the column equivalent.  The ``n - 1``
double-column checks read the parity differences, which fixes the flipped
column set up to complement: ``E`` or ``E_c``.  The lighter one is chosen.
Z errors are handled the same way along rows.

With several noisy rounds the same 1D line is extended in time and decoded by
matching, with the column-parity flip rate ``(1 - (1 - 2p)^n) / 2`` as the
spatial rate.
"""

from __future__ import annotations

import numpy as np

from ..codes.code import StabilizerCode
from ..noise import DefectRecord, ErrorModel
from .base import Correction, DecoderError, as_syndrome, make_correction
from .matching import decode_graphlike_mwpm

__all__ = ["column_flips", "decode_bacon_shor"]


def column_flips(diffs) -> np.ndarray:
    """Lighter of the two flip patterns consistent with the parity differences.

    ``diffs[i]`` is the parity of lines ``i`` and ``i + 1``.  Ties keep the
    pattern that leaves line 0 unflipped.
    """
    diffs = np.asarray(diffs, dtype=np.uint8)
    f = np.concatenate([[0], np.bitwise_xor.accumulate(diffs)]).astype(np.uint8) if len(diffs) else np.zeros(1, np.uint8)
    comp = f ^ 1
    return comp if comp.sum() < f.sum() else f


def _size(code: StabilizerCode) -> int:
    if code.name != "bacon_shor":
        raise DecoderError(f"bs1d decodes Bacon-Shor codes only, not {code.label}")
    return int(code.params["n"])


def decode_bacon_shor(code: StabilizerCode, record, model: ErrorModel | None = None) -> Correction:
    """Decode a Bacon-Shor syndrome (single round) or a noisy multi-round record.

    Args:
        code: a ``bacon_shor`` catalogue code.
        record: final syndrome bits or a :class:`DefectRecord`.
        model: needed only for multi-round records (sets the space/time weights).
    """
    n = _size(code)
    multi = isinstance(record, DefectRecord) and record.rounds > 1
    if multi:
        p = 0.0 if model is None else model.p
        px = model.marginal_x if model is not None else p
        pz = model.marginal_z if model is not None else p
        spatial = {"X": (1 - (1 - 2 * px) ** n) / 2, "Z": (1 - (1 - 2 * pz) ** n) / 2}
        corr = decode_graphlike_mwpm(code, record, model, spatial_p=spatial, decoder="bs1d")
        return corr
    syn = as_syndrome(code, record)
    zchk = code.check_indices("Z")
    xchk = code.check_indices("X")
    cols = column_flips(syn[zchk])
    rows = column_flips(syn[xchk])
    x = np.zeros(code.n, dtype=np.uint8)
    z = np.zeros(code.n, dtype=np.uint8)
    x[np.flatnonzero(cols)] = 1           # qubit (0, c)
    z[np.flatnonzero(rows) * n] = 1       # qubit (r, 0)
    return make_correction(code, x, z, syn, "bs1d")
