"""Command-line interface.

Exit codes: 0 success, 1 a verification failed (a proven bound is violated),
2 usage or input error, 3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import blocknbh as bnb
from .caformat import format_ca, load_ca, read_ca_file, save_ca
from .cells import CellSet
from .core import (LINEAR_PRESETS, MAX_TABLE, compose_all, identity, linear_ca, power, shift,
                   toffoli)
from .errors import InputError, RCAError, ResourceError, VerificationFailed
from .explorer import build_conjecture_instance, check_subtraction_minimal, survey
from .reversibility import DEFAULT_MAX_RADIUS, is_injective
from .witness import format_witness, load_witness, semilocalize, verify_witness

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class Out:
    """Human-readable or ``key=value`` output, never both."""

    def __init__(self, porcelain: bool, stream=None):
        self.porcelain = porcelain
        self.stream = stream or sys.stdout

    def emit(self, key: str, value, human: str | None = None):
        if isinstance(value, CellSet):
            pv = value.csv()
        elif isinstance(value, bool):
            pv = "pass" if value else "fail"
        else:
            pv = value
        if self.porcelain:
            print(f"{key}={pv}", file=self.stream)
        elif human is not None:
            print(human, file=self.stream)

    def text(self, human: str):
        if not self.porcelain:
            print(human, file=self.stream)


def _load(args, path):
    return load_ca(path, max_radius=args.max_radius)


def _verdicts(out: Out, rep: bnb.BoundsReport) -> int:
    for key, ok in rep.verdicts.items():
        label = bnb.VERDICT_LABELS.get(key, key)
        out.emit(f"verdict.{key}", ok, f"{label}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if rep.all_pass else EXIT_VERIFY


def cmd_info(args, out: Out) -> int:
    cf = read_ca_file(args.file)
    out.emit("alphabet", cf.alphabet.size, f"alphabet: {cf.alphabet.size}"
             + (f" (tracks {' x '.join(map(str, cf.alphabet.tracks))})" if cf.alphabet.tracks else ""))
    out.emit("window", CellSet(cf.forward.offsets), f"window: {cf.forward.offsets}")
    verdict = is_injective(cf.forward, cf.alphabet)
    if not verdict.injective:
        out.emit("reversible", "no", "not reversible")
        for i, (left, center, right) in enumerate(verdict.witness, 1):
            text = f"({','.join(map(str, left))})^∞ [{','.join(map(str, center))}] ({','.join(map(str, right))})^∞"
            out.emit(f"witness.{i}", text.replace(" ", ""), f"  configuration {i}: {text}")
        out.text("  both configurations have the same image")
        return EXIT_OK
    ca = load_ca(args.file, max_radius=args.max_radius)
    out.emit("reversible", "yes", "reversible: yes" + ("" if cf.inverse else " (inverse synthesized)"))
    out.emit("n", ca.N, None)
    out.emit("n_dual", ca.N_dual, None)
    out.text(f"N = {ca.N}; Ñ = {ca.N_dual}")
    out.emit("inverse_window", ca.inverse.offsets, f"inverse window: {ca.inverse.offsets}")
    return EXIT_OK


def cmd_bn(args, out: Out) -> int:
    ca = _load(args, args.file)
    rep = bnb.verify_all_bounds(ca, args.max_evals)
    out.emit("n", rep.n, f"N = {rep.n}")
    out.emit("n_dual", rep.n_dual, f"Ñ = {rep.n_dual}")
    out.emit("bn", rep.bn, f"BN = {rep.bn}" + ("  (BN = N ∪ Ñ, minimal)" if rep.minimal else ""))
    out.emit("minimal", "yes" if rep.minimal else "no", None)
    out.emit("individual_bound", rep.individual_bound,
             f"(N−N+Ñ) ∩ (Ñ−Ñ+N) = {rep.individual_bound}")
    return _verdicts(out, rep)


def cmd_decompose(args, out: Out) -> int:
    ca = _load(args, args.file)
    x, y = CellSet.parse(args.cells), CellSet.parse(args.target)
    w = semilocalize(ca, x, y, args.ring)
    n = verify_witness(ca, w)
    text = format_witness(w)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    elif not args.porcelain:
        sys.stdout.write(text)
    out.emit("ring", w.ring_period, None)
    out.emit("e_size", w.e_size, f"|E| = {w.e_size}")
    out.emit("reconstruction", "ok", f"reconstruction OK over {n} configurations")
    out.emit("configurations", n, None)
    return EXIT_OK


def cmd_verify_witness(args, out: Out) -> int:
    ca = _load(args, args.file)
    w = load_witness(args.witness)
    n = verify_witness(ca, w)
    out.emit("reconstruction", "ok", f"reconstruction OK over {n} configurations")
    out.emit("configurations", n, None)
    return EXIT_OK


def _bounds_report(out: Out, rep: bnb.BoundsReport) -> int:
    out.emit("n", rep.n, f"N = {rep.n}")
    out.emit("n_dual", rep.n_dual, f"Ñ = {rep.n_dual}")
    for s in rep.summands:
        k = s["k"]
        out.emit(f"summand.{k}", s["V"],
                 f"k={k}: C={s['C']} BN={s['BN']} K={s['K']} D={s['D']} V_k={s['V']}")
    out.emit("v", rep.composition_bound, f"V = {rep.composition_bound}")
    for name, cells in rep.extra_bounds.items():
        out.emit(f"bound.{name}", cells, f"{name} bound = {cells}")
    if rep.bn is None:
        out.emit("bn", "skipped", "BN of the composite: skipped (beyond enumeration caps)")
    else:
        out.emit("bn", rep.bn, f"BN = {rep.bn}")
    return _verdicts(out, rep)


def cmd_compose(args, out: Out) -> int:
    fs = [_load(args, p) for p in args.files]
    total = compose_all(fs, args.max_table)
    if args.output:
        save_ca(total, args.output)
    rep = bnb.composition_bound(fs, args.max_evals, compute_true=not args.no_bn)
    return _bounds_report(out, rep)


def cmd_power(args, out: Out) -> int:
    f = _load(args, args.file)
    total = power(f, args.k, args.max_table)
    if args.output:
        save_ca(total, args.output)
    if args.no_bn:
        rep = bnb.composition_bound([f] * args.k, args.max_evals, compute_true=False)
        rep.extra_bounds["iterate"] = bnb.iterate_bound(f, args.k)
    else:
        rep = bnb.iterate_report(f, args.k, args.max_evals)
    return _bounds_report(out, rep)


def cmd_check_bounds(args, out: Out) -> int:
    fs = [_load(args, p) for p in args.files]
    if len(fs) == 1:
        return cmd_bn(argparse.Namespace(**{**vars(args), "file": args.files[0]}), out)
    rep = bnb.composition_bound(fs, args.max_evals, compute_true=not args.no_bn)
    return _bounds_report(out, rep)


def cmd_builtin(args, out: Out) -> int:
    name = args.name
    if name == "toffoli":
        ca = toffoli(args.l)
    elif name == "shift":
        ca = shift(args.k, args.q)
    elif name == "identity":
        ca = identity(args.q)
    elif name == "linear":
        if args.preset not in LINEAR_PRESETS:
            raise InputError(f"unknown preset {args.preset!r}; known: {', '.join(LINEAR_PRESETS)}")
        ca = linear_ca(LINEAR_PRESETS[args.preset], name=args.preset)
    else:
        raise InputError(f"unknown builtin {name!r}")
    text = format_ca(ca, comment=ca.name)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_explore(args, out: Out) -> int:
    if args.mode == "survey":
        window = CellSet.parse(args.window)
        records = survey(args.q, window, args.limit, args.output, max_evals=args.max_evals)
        minimal = sum(r.bn == (r.n | r.n_dual) for r in records)
        out.emit("records", len(records), f"{len(records)} reversible automata recorded")
        out.emit("minimal", minimal, f"{minimal} with BN = N ∪ Ñ")
        out.emit("bounds", True, "individual bound and self-duality: PASS on every record")
        if not args.output and not args.porcelain:
            for r in records:
                print(r.line())
        return EXIT_OK
    if args.mode == "instance":
        x, y, z = (CellSet.parse(s) for s in (args.x, args.y, args.z))
        ca = build_conjecture_instance(x, y, z, prune=not args.full, max_table=args.max_table,
                                       max_evals=args.max_evals)
        if args.output:
            save_ca(ca, args.output, comment=ca.name)
        out.emit("alphabet", ca.q, f"alphabet: {ca.q}")
        out.emit("n", ca.N, f"N = {ca.N}")
        out.emit("n_dual", ca.N_dual, f"Ñ = {ca.N_dual}")
        out.emit("bn", z, f"BN = {z}")
        out.emit("verified", True, "triple verified: PASS")
        return EXIT_OK
    if args.mode == "subtraction":
        ca = _load(args, args.file)
        ok = check_subtraction_minimal(ca, max_evals=args.max_evals)
        out.emit("minimal", ok, f"BN = N ∪ Ñ: {'PASS' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_VERIFY
    raise InputError(f"unknown explore mode {args.mode!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--porcelain", action="store_true", help="stable key=value output")
    common.add_argument("--max-evals", type=int, default=bnb.DEFAULT_MAX_EVALS,
                        help="cap on enumerated (context, pattern) pairs (default 2^28)")
    common.add_argument("--max-table", type=int, default=MAX_TABLE,
                        help="cap on rule table entries (default 2^24)")
    common.add_argument("--max-radius", type=int, default=DEFAULT_MAX_RADIUS,
                        help="largest inverse radius tried when synthesizing (default 8)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="rcablock",
                                description="Block neighborhoods of reversible 1D cellular automata.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", parents=[common], help="alphabet, neighborhoods, reversibility")
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("bn", parents=[common], help="block neighborhood and its sandwich")
    s.add_argument("file")
    s.set_defaults(func=cmd_bn)

    s = sub.add_parser("decompose", parents=[common], help="emit a semilocalization witness")
    s.add_argument("file")
    s.add_argument("--ring", type=int, default=None, help="ring period P")
    s.add_argument("--cells", required=True, help="input block X, e.g. 0,1,2 or 0..2")
    s.add_argument("--target", default="0", help="output block Y (default 0)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify-witness", parents=[common], help="check a witness file")
    s.add_argument("file")
    s.add_argument("witness")
    s.set_defaults(func=cmd_verify_witness)

    s = sub.add_parser("compose", parents=[common],
                       help="compose automata (first file applied first) and bound BN")
    s.add_argument("files", nargs="+")
    s.add_argument("-o", "--output")
    s.add_argument("--no-bn", action="store_true", help="skip computing BN of the composite")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("power", parents=[common], help="iterate an automaton and bound BN")
    s.add_argument("file")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("-o", "--output")
    s.add_argument("--no-bn", action="store_true")
    s.set_defaults(func=cmd_power)

    s = sub.add_parser("check-bounds", parents=[common], help="verify all bounds")
    s.add_argument("files", nargs="+")
    s.add_argument("--no-bn", action="store_true")
    s.set_defaults(func=cmd_check_bounds)

    s = sub.add_parser("builtin", parents=[common], help="write a named automaton as .ca")
    s.add_argument("name", choices=["toffoli", "shift", "identity", "linear"])
    s.add_argument("--l", type=int, default=1, help="toffoli stretch")
    s.add_argument("--k", type=int, default=1, help="shift amount")
    s.add_argument("--q", type=int, default=2, help="alphabet size for shift/identity")
    s.add_argument("--preset", default="two-track-partial-shift")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_builtin)

    s = sub.add_parser("explore", parents=[common], help="surveys and constructions")
    s.add_argument("mode", choices=["survey", "instance", "subtraction"])
    s.add_argument("file", nargs="?", help="automaton for 'subtraction'")
    s.add_argument("--q", type=int, default=2, help="largest alphabet size surveyed")
    s.add_argument("--window", default="0,1")
    s.add_argument("--limit", type=int, default=None)
    s.add_argument("--x", default="0,1")
    s.add_argument("--y", default="0,1")
    s.add_argument("--z", default="0,1,2")
    s.add_argument("--full", action="store_true", help="keep every shift component")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_explore)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "explore" and args.mode == "subtraction" and not args.file:
        parser.error("explore subtraction needs a file")
    out = Out(args.porcelain)
    try:
        return args.func(args, out)
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ResourceError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RCAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
