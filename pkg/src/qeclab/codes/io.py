"""Plain-text catalogue format.

::

    13 1 surface L=3
    S: XXIII...
    LX: XIXIX...
    LZ: ZIIII...

The header is ``n k family params`` with ``params`` as ``key=value`` pairs
joined by ``,`` (``-`` when empty).  Body lines are ``S:`` stabilizer
generators, ``R:`` redundant checks, ``GX:``/``GZ:``/``G:`` gauge generators
(by type) and ``LX:``/``LZ:`` logical operators in pair order.  ``#`` starts a
comment.
"""

from __future__ import annotations

from ..pauli import format_pauli, parse_pauli
from .code import StabilizerCode

__all__ = ["format_code", "parse_code"]


def _fmt_params(params: dict) -> str:
    if not params:
        return "-"
    return ",".join(f"{k}={v}" for k, v in params.items())


def _parse_params(text: str) -> dict:
    if text in ("", "-"):
        return {}
    out = {}
    for part in text.split(","):
        key, _, value = part.partition("=")
        if not _:
            raise ValueError(f"bad parameter {part!r}")
        out[key.strip()] = int(value) if value.strip().lstrip("-").isdigit() else value.strip()
    return out


def format_code(code: StabilizerCode) -> str:
    lines = [f"{code.n} {code.k} {code.name} {_fmt_params(code.params)}"]
    lines += [f"S: {format_pauli(s)}" for s in code.stabilizers]
    lines += [f"R: {format_pauli(s)}" for s in code.redundant]
    for g in code.gauge:
        tag = {"X": "GX", "Z": "GZ"}.get(g.pauli_type, "G")
        lines.append(f"{tag}: {format_pauli(g)}")
    for lx, lz in code.logicals:
        lines.append(f"LX: {format_pauli(lx)}")
        lines.append(f"LZ: {format_pauli(lz)}")
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> StabilizerCode:
    header = None
    stabs, redundant, gauge, lxs, lzs = [], [], [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if header is None:
                parts = line.split(None, 3)
                if len(parts) < 3:
                    raise ValueError("header must be 'n k family params'")
                header = (int(parts[0]), int(parts[1]), parts[2], _parse_params(parts[3] if len(parts) > 3 else "-"))
                continue
            tag, _, body = line.partition(":")
            if not _:
                raise ValueError("expected 'TAG: pauli'")
            op = parse_pauli(body.strip())
            if op.n != header[0]:
                raise ValueError(f"operator has {op.n} qubits, header says {header[0]}")
            tag = tag.strip().upper()
            if tag == "S":
                stabs.append(op)
            elif tag == "R":
                redundant.append(op)
            elif tag in ("GX", "GZ", "G"):
                if tag != "G" and op.pauli_type != tag[1]:
                    raise ValueError(f"{tag} line holds a non-{tag[1]} operator")
                gauge.append(op)
            elif tag == "LX":
                lxs.append(op)
            elif tag == "LZ":
                lzs.append(op)
            else:
                raise ValueError(f"unknown tag {tag!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if header is None:
        raise ValueError("empty catalogue entry")
    n, k, family, params = header
    if len(lxs) != len(lzs):
        raise ValueError("LX and LZ counts differ")
    return StabilizerCode(n, k, stabs, list(zip(lxs, lzs)), gauge=gauge, redundant=redundant,
                          name=family, params=params)
