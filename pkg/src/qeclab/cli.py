"""Command-line front end: ``qeclab <command> ...``.

Exit status is 0 on success, 1 on a usage error (bad flags or values) and 2
on a runtime error (invalid code, decoder failure, no threshold crossing, ...).
Randomized commands require ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__

__all__ = ["main", "parse_range", "UsageError"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage().strip()}\n{self.prog}: error: {message}")


def parse_range(text: str, kind=float) -> list:
    """``a:b:n`` (``n`` points, endpoints included), ``a,b,c`` or a single value."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            vals = np.linspace(a, b, n).tolist() if n > 1 else [a]
            vals = [round(v, 12) for v in vals]
        else:
            vals = [float(v) for v in text.split(",") if v.strip()]
        if not vals:
            raise ValueError
    except ValueError:
        raise UsageError(f"bad range {text!r}; use a:b:n, a,b,c or a single value") from None
    if kind is int:
        if any(v != int(v) for v in vals):
            raise UsageError(f"expected integers in {text!r}")
        return [int(v) for v in vals]
    return vals


def _code_params(args) -> dict:
    params = {}
    for key in ("L", "n"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    if getattr(args, "logicals", None):
        params["logicals"] = args.logicals
    return params


def _add_code_flags(p, sizes_as_list=False):
    p.add_argument("--family", required=True, help="code family (see 'codes list')")
    if sizes_as_list:
        p.add_argument("--L", help="lattice size(s), e.g. 8,12,16 or 4:8:3")
        p.add_argument("--n", help="Bacon-Shor / repetition size(s)")
    else:
        p.add_argument("--L", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--logicals", choices=["canonical", "printed"])


def _add_noise_flags(p, p_default=None):
    p.add_argument("--noise", default="bitflip", help="depolarizing | independent_xz | bitflip (default)")
    p.add_argument("--p", default=p_default, help="data error rate (range syntax allowed for sweeps)")
    p.add_argument("--q", default="0", help="measurement error rate")


def _build_parser() -> _Parser:
    top = _Parser(prog="qeclab", description="Stabilizer-code laboratory.")
    top.add_argument("--version", action="version", version=f"qeclab {__version__}")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    codes = sub.add_parser("codes", help="catalogue inspection")
    csub = codes.add_subparsers(dest="action", parser_class=_Parser)
    csub.add_parser("list", help="list code families")
    for name, helptext in (("show", "print a catalogue entry"), ("validate", "check structural invariants"),
                           ("distance", "compute the code distance")):
        p = csub.add_parser(name, help=helptext)
        p.add_argument("--file", help="read a catalogue entry from this file instead of --family")
        p.add_argument("--family")
        p.add_argument("--L", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--logicals", choices=["canonical", "printed"])
        if name in ("show", "distance"):
            p.add_argument("--cap", type=int, default=None, help="weight cap for the distance search")
        if name == "show":
            p.add_argument("--format", choices=["human", "text", "json"], default="human")

    dec = sub.add_parser("decode", help="decode one record or a fixture file")
    dec.add_argument("--fixture", help="JSON fixture with code, model, decoder, record and expected class")
    dec.add_argument("--family")
    dec.add_argument("--L", type=int)
    dec.add_argument("--n", type=int)
    dec.add_argument("--logicals", choices=["canonical", "printed"])
    dec.add_argument("--decoder", default="mwpm")
    dec.add_argument("--record", help="defect record file ('R n_checks' header, then 'r c' lines); '-' for stdin")
    dec.add_argument("--syndrome", help="final syndrome as a 0/1 string over the checks")
    dec.add_argument("--expect", help="expected class label; exit 2 on mismatch")
    dec.add_argument("--format", choices=["human", "json"], default="human")
    _add_noise_flags(dec, p_default="0.01")

    sw = sub.add_parser("sweep", help="Monte Carlo grid over sizes and error rates")
    _add_code_flags(sw, sizes_as_list=True)
    sw.add_argument("--decoder", required=True)
    _add_noise_flags(sw)
    sw.add_argument("--trials", type=int, required=True)
    sw.add_argument("--seed", type=int, required=True)
    sw.add_argument("--rounds", default="1", help="measurement rounds per trial, or 'L' for the lattice size")
    sw.add_argument("--jobs", type=int, default=None, help="worker processes (default $QECLAB_JOBS or 1)")
    sw.add_argument("--format", choices=["csv", "json", "human"], default="csv")
    sw.add_argument("--out", help="output file (default stdout)")
    sw.add_argument("--timing", action="store_true", help="fill the wall_time_s column")

    th = sub.add_parser("threshold", help="estimate the threshold from sweep CSV")
    th.add_argument("input", nargs="?", default="-", help="CSV file from 'sweep' ('-' for stdin)")
    th.add_argument("--size-key", default=None, help="parameter that sets the size (default L or n)")
    th.add_argument("--pseudo", action="store_true", help="also report the break-even p for each size")
    th.add_argument("--format", choices=["human", "json"], default="human")

    circ = sub.add_parser("circuit", help="Clifford circuit simulation")
    csub2 = circ.add_subparsers(dest="action", parser_class=_Parser)
    run = csub2.add_parser("run", help="run a circuit on |0...0> and print measurement outcomes")
    run.add_argument("--file", help="circuit file ('-' for stdin)")
    run.add_argument("--circuit", help="instructions separated by ';'")
    run.add_argument("--qubits", type=int, help="register size (default: inferred)")
    run.add_argument("--seed", type=int, required=True)
    run.add_argument("--show-state", action="store_true", help="print final stabilizer generators")
    return top


# -- command implementations ------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load_code(args):
    from .codes import build_named_code, parse_code

    if getattr(args, "file", None):
        return parse_code(_read(args.file))
    if not args.family:
        raise UsageError("need --family or --file")
    try:
        return build_named_code(args.family, **_code_params(args))
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def _cmd_codes(args, out) -> int:
    from .codes import FAMILIES, DistanceCapExceeded, distance, format_code, validate_code

    if args.action is None:
        raise UsageError("codes: choose one of list, show, validate, distance")
    if args.action == "list":
        for name, (_, defaults) in FAMILIES.items():
            extra = " ".join(f"--{k} {v}" for k, v in defaults.items())
            out.write(f"{name:24s} {extra}\n")
        return 0
    code = _load_code(args)
    if args.action == "validate":
        rep = validate_code(code)
        out.write(str(rep) + "\n")
        return 0 if rep.ok else 2
    if args.action == "distance":
        try:
            d = distance(code, args.cap)
            out.write(f"{code.label} [[{code.n},{code.k},{d}]]\n")
        except DistanceCapExceeded as exc:
            out.write(f"{code.label} [[{code.n},{code.k}]] d >= {exc.lower_bound}\n")
        return 0
    # show
    cap = args.cap if args.cap is not None else 8
    try:
        dtext = str(distance(code, cap))
    except DistanceCapExceeded as exc:
        dtext = f">={exc.lower_bound}"
    if args.format == "text":
        out.write(format_code(code))
    elif args.format == "json":
        doc = {"label": code.label, "n": code.n, "k": code.k, "d": dtext, "gauge_qubits": code.gauge_qubits,
               "entry": format_code(code)}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"{code.label} [[{code.n},{code.k},{dtext}]]")
        if code.gauge:
            out.write(f" with {code.gauge_qubits} gauge qubit(s)")
        out.write("\n" + format_code(code))
    return 0


def _decode_one(code, decoder, record, model):
    from .decoders import decode

    return decode(decoder, code, record, model)


def _cmd_decode(args, out) -> int:
    from .codes import build_named_code
    from .noise import DefectRecord, ErrorModel

    expect = args.expect
    if args.fixture:
        fx = json.loads(_read(args.fixture))
        code = build_named_code(fx["family"], **fx.get("params", {}))
        model = ErrorModel(fx.get("noise", "bitflip"), float(fx.get("p", 0.01)), float(fx.get("q", 0.0)))
        decoder = fx.get("decoder", args.decoder)
        record = DefectRecord.from_text(fx["record"])
        expect = expect or fx.get("expected_class")
    else:
        code = _load_code(args)
        try:
            model = ErrorModel(args.noise, float(args.p), float(args.q))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        decoder = args.decoder
        if args.record:
            record = DefectRecord.from_text(_read(args.record))
        elif args.syndrome is not None:
            bits = [int(c) for c in args.syndrome.strip() if c in "01"]
            record = DefectRecord.from_syndrome(np.array(bits, dtype=np.uint8))
        else:
            raise UsageError("decode: need --record, --syndrome or --fixture")
    if record.n_checks != len(code.checks):
        raise ValueError(f"record has {record.n_checks} checks, {code.label} has {len(code.checks)}")
    corr = _decode_one(code, decoder, record, model)
    label = corr.class_label()
    if args.format == "json":
        out.write(json.dumps({"code": code.label, "decoder": decoder, "class": label, "failed": corr.failed,
                              "correction": str(corr.pauli)}) + "\n")
    else:
        out.write(f"code       {code.label}\ndecoder    {decoder}\nclass      {label}\n"
                  f"failed     {corr.failed}\ncorrection {corr.pauli}\n")
    if expect is not None and expect != label:
        sys.stderr.write(f"class mismatch: expected {expect}, got {label}\n")
        return 2
    return 0


def _cmd_sweep(args, out) -> int:
    from .codes import build_named_code
    from .montecarlo import ExperimentConfig, sweep, write_csv, write_json

    if args.p is None:
        raise UsageError("sweep: --p is required")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    ps = parse_range(args.p)
    qs = parse_range(args.q)
    key = "L" if args.L is not None else ("n" if args.n is not None else None)
    sizes = parse_range(getattr(args, key), int) if key else [None]
    configs = []
    for size in sizes:
        params = {} if size is None else {key: size}
        try:
            build_named_code(args.family, **params)
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None
        if args.rounds.upper() == "L":
            if size is None:
                raise UsageError("--rounds L needs --L or --n")
            rounds = size
        else:
            try:
                rounds = int(args.rounds)
            except ValueError:
                raise UsageError(f"bad --rounds {args.rounds!r}") from None
        for p in ps:
            for q in qs:
                try:
                    cfg = ExperimentConfig(args.family, params, args.noise, p, q, args.decoder, args.trials,
                                           rounds, args.seed)
                    cfg.model
                except ValueError as exc:
                    raise UsageError(str(exc)) from None
                configs.append(cfg)
    jobs = args.jobs if args.jobs is not None else int(os.environ.get("QECLAB_JOBS", "1") or 1)
    results = sweep(configs, jobs=jobs, timing=args.timing)
    if args.format == "json":
        text = write_json(results)
    elif args.format == "csv":
        text = write_csv([r for _, _, r in results])
    else:
        lines = [f"{'family':12s} {'params':10s} {'decoder':9s} {'p':>8s} {'q':>8s} {'R':>3s} "
                 f"{'fail/trials':>15s} {'p_logical':>10s} {'95% CI':>23s}"]
        for cfg, st, r in results:
            lines.append(f"{r['family']:12s} {r['params']:10s} {r['decoder']:9s} {cfg.p:8.5f} {cfg.q:8.5f} "
                         f"{cfg.rounds:3d} {st.failures:>7d}/{st.trials:<7d} {float(r['p_logical']):10.3e} "
                         f"[{float(r['ci_low']):.3e}, {float(r['ci_high']):.3e}]")
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def _cmd_threshold(args, out) -> int:
    from .montecarlo import curves_from_rows, estimate_threshold, pseudo_threshold, read_csv

    rows = read_csv(_read(args.input))
    curves = curves_from_rows(rows, args.size_key)
    est = estimate_threshold(curves)
    pseudo = {}
    if args.pseudo:
        for size, curve in curves.items():
            try:
                pseudo[size] = pseudo_threshold(curve)
            except ValueError:
                pseudo[size] = None
    if args.format == "json":
        doc = {"p_c": est.p_c, "low": est.low, "high": est.high,
               "crossings": [{"sizes": [a, b], "p": c} for a, b, c in est.crossings]}
        if args.pseudo:
            doc["pseudo_thresholds"] = {str(k): v for k, v in pseudo.items()}
        out.write(json.dumps(doc, indent=2) + "\n")
        return 0
    out.write(f"p_c = {est.p_c:.5f} (spread {est.low:.5f} .. {est.high:.5f}; "
              f"{len(est.crossings)} pairwise crossing(s))\n")
    for a, b, c in est.crossings:
        out.write(f"  sizes {a} x {b}: {c:.5f}\n")
    for size, v in pseudo.items():
        out.write(f"  pseudo-threshold size {size}: " + ("not bracketed" if v is None else f"{v:.5f}") + "\n")
    return 0


def _cmd_circuit(args, out) -> int:
    from .tableau import Tableau, parse_circuit, run_circuit

    if args.action != "run":
        raise UsageError("circuit: choose 'run'")
    if args.file:
        text = _read(args.file)
    elif args.circuit:
        text = "\n".join(args.circuit.split(";"))
    else:
        raise UsageError("circuit run: need --file or --circuit")
    try:
        gates = parse_circuit(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    n = args.qubits
    if n is None:
        n = 1
        for g in gates:
            if g.qubits:
                n = max(n, max(g.qubits) + 1)
            if g.pauli is not None:
                n = max(n, g.pauli.n)
    rng = np.random.default_rng(args.seed)
    t, outcomes = run_circuit(Tableau(n), gates, rng)
    out.write("outcomes " + " ".join(f"{o:+d}" for o in outcomes) + "\n")
    if args.show_state:
        for s in t.stabilizer_strings():
            out.write(s + "\n")
    return 0


_COMMANDS = {"codes": _cmd_codes, "decode": _cmd_decode, "sweep": _cmd_sweep, "threshold": _cmd_threshold,
             "circuit": _cmd_circuit}


def main(argv=None, out=None) -> int:
    """Run the CLI; returns the exit status instead of exiting."""
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip() + "\nqeclab: error: choose a command")
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        msg = str(exc)
        if not msg.startswith("usage:"):
            msg = f"{parser.format_usage().strip()}\nqeclab: error: {msg}"
        sys.stderr.write(f"{msg}\n")
        return 1
    except SystemExit as exc:
        # --help / --version
        return int(exc.code or 0)
    except Exception as exc:  # runtime failures map to exit status 2
        sys.stderr.write(f"qeclab: {type(exc).__name__}: {exc}\n")
        return 2


def _entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    _entry()
