"""Decoder result type and shared helpers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..codes.code import StabilizerCode
from ..noise import (DefectRecord, class_label, logical_class_bits, reference_class_bits, reference_error,
                     syndrome_bits)
from ..pauli import PauliOp

__all__ = ["Correction", "DecoderError", "as_syndrome", "make_correction"]


class DecoderError(ValueError):
    """The decoder cannot handle this code or input (size cap, wrong family, ...)."""


@dataclass(frozen=True)
class Correction:
    """A decoder's answer.

    Attributes:
        x, z: correction bits (``uint8``, length ``n``).
        class_bits: logical class of ``correction * E_ref(s)`` where ``E_ref`` is
            the fixed reference error of the decoded syndrome ``s``.  Two
            decoders agree on the coset iff their ``class_bits`` agree.
        failed: the decoder gave up (RG clusters left over).  Scored as a
            logical failure.
        decoder: name of the decoder that produced it.
    """

    x: np.ndarray
    z: np.ndarray
    class_bits: np.ndarray
    failed: bool = False
    decoder: str = ""
    info: dict = field(default_factory=dict, compare=False)

    @property
    def pauli(self) -> PauliOp:
        return PauliOp.from_bits(self.x, self.z)

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def class_label(self) -> str:
        return class_label(self.class_bits)


def as_syndrome(code: StabilizerCode, data) -> np.ndarray:
    """Final-frame syndrome over ``code.checks`` from a record or a bit vector."""
    if isinstance(data, DefectRecord):
        syn = data.final_syndrome()
    else:
        syn = np.asarray(data, dtype=np.uint8).ravel()
    m = len(code.checks)
    if len(syn) == len(code.stabilizers) and m > len(syn):
        # Generator syndrome only: extend with the implied redundant bits.
        ref = reference_error(code, syn)
        syn = syndrome_bits(code, ref.x_bits, ref.z_bits)
    if len(syn) != m:
        raise ValueError(f"syndrome has {len(syn)} bits, code has {m} checks")
    return syn.astype(np.uint8)


def make_correction(code: StabilizerCode, x, z, syn, decoder: str, failed: bool = False,
                    info: dict | None = None) -> Correction:
    x = np.asarray(x, dtype=np.uint8)
    z = np.asarray(z, dtype=np.uint8)
    cls = logical_class_bits(code, x, z) ^ reference_class_bits(code, syn)
    return Correction(x, z, cls, failed, decoder, info or {})
