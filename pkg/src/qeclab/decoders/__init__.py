"""Decoders and the by-name registry used by the Monte Carlo harness and the CLI.

Every registered decoder is called as ``decoder(code, record, model)`` where
``record`` is a :class:`~qeclab.noise.DefectRecord` (or a final syndrome) and
returns a :class:`Correction`.  Single-shot decoders (``ml``, ``minweight``)
read the final-round syndrome.
"""

from __future__ import annotations

from .bacon_shor import column_flips, decode_bacon_shor
from .base import Correction, DecoderError, as_syndrome, make_correction
from .blossom import MatchingError, max_weight_matching, min_weight_perfect_matching
from .matching import (
    MatchingGraph,
    build_matching_graph,
    decode_graphlike_mwpm,
    decode_surface_mwpm,
    detector_graph,
    log_odds,
    matching_correction,
    mwpm,
)
from .minweight import decode_minweight_exhaustive
from .ml import coset_log_probabilities, decode_ml
from .rg import decode_rg, default_rg_rounds

__all__ = [
    "DECODERS",
    "Correction",
    "DecoderError",
    "MatchingError",
    "MatchingGraph",
    "as_syndrome",
    "build_matching_graph",
    "check_decoder",
    "column_flips",
    "coset_log_probabilities",
    "decode",
    "decode_bacon_shor",
    "decode_graphlike_mwpm",
    "decode_minweight_exhaustive",
    "decode_ml",
    "decode_rg",
    "decode_surface_mwpm",
    "default_rg_rounds",
    "detector_graph",
    "get_decoder",
    "log_odds",
    "make_correction",
    "matching_correction",
    "max_weight_matching",
    "min_weight_perfect_matching",
    "mwpm",
]


def _ml(code, record, model):
    return decode_ml(code, record, model)


def _minweight(code, record, model):
    return decode_minweight_exhaustive(code, record)


def _mwpm(code, record, model):
    return decode_graphlike_mwpm(code, record, model)


def _rg(code, record, model):
    return decode_rg(code, record, model=model)


def _bs1d(code, record, model):
    return decode_bacon_shor(code, record, model)


DECODERS = {"ml": _ml, "minweight": _minweight, "mwpm": _mwpm, "rg": _rg, "bs1d": _bs1d}


def get_decoder(name: str):
    try:
        return DECODERS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown decoder {name!r}; known: {', '.join(DECODERS)}") from None


def decode(name: str, code, record, model=None) -> Correction:
    return get_decoder(name)(code, record, model)


def check_decoder(name: str, code, rounds: int = 1) -> None:
    """Fail fast (``DecoderError``) if decoder ``name`` cannot run on ``code``.

    Builds the cached tables the decoder needs, so size caps surface before
    any trial runs.
    """
    name = name.lower()
    get_decoder(name)
    if name == "ml":
        from .ml import MAX_ML_GENERATORS, _group_tables

        _group_tables(code, MAX_ML_GENERATORS)
    elif name == "minweight":
        if code.n > 24:
            raise DecoderError(f"{code.label}: exhaustive minimum-weight decoding is capped at 24 qubits")
    elif name in ("mwpm", "rg"):
        detector_graph(code, "X")
        detector_graph(code, "Z")
    elif name == "bs1d" and code.name != "bacon_shor":
        raise DecoderError(f"bs1d decodes Bacon-Shor codes only, not {code.label}")
    if rounds > 1 and name in ("ml", "minweight"):
        raise DecoderError(f"decoder {name!r} is single-shot; use rounds=1")
