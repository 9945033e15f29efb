"""Command-line front end.

Subcommands: faces, classify, genus, decompose, eval, verify, export-dot.
Spins are doubled integers throughout (``spin=3`` means j = 3/2); the
deformation is ``--q 1`` (exact classical mode) or ``--q-phase p/r``
for q = exp(i*pi*p/r).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import identities
from .expressions import evaluate_numeric, to_sexpr
from .graphs import (SchemeBoundExceeded, classify_k33, embedding_genus,
                     enumerate_schemes, graph_genus, is_planar, k33_parts,
                     scheme_count, set_value, trace_faces)
from .minors import has_forbidden_minor
from .network import IrreducibleNetwork, decompose
from .scalars import Deformation, DomainError, Surd
from .textio import parse_graph, to_dot


def _add_deformation_args(p: argparse.ArgumentParser):
    p.add_argument("--q", type=int, default=None,
                   help="1 selects the exact classical mode (default)")
    p.add_argument("--q-phase", metavar="P/R", default=None,
                   help="unit-circle deformation q = exp(i*pi*P/R)")
    p.add_argument("--tol", type=float, default=1e-9, help="numeric tolerance")


def _deformation(args) -> Deformation:
    if args.q_phase is not None:
        if args.q is not None:
            raise SystemExit("use either --q 1 or --q-phase, not both")
        try:
            frac = Fraction(args.q_phase)
        except (ValueError, ZeroDivisionError):
            raise SystemExit(f"bad phase {args.q_phase!r}; expected a fraction like 1/5")
        return Deformation(frac, args.tol)
    if args.q not in (None, 1):
        raise SystemExit("--q only supports 1 (classical); use --q-phase for q != 1")
    return Deformation.classical(args.tol)


def _read(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_graph(fh.read())
    except OSError as exc:
        raise SystemExit(f"cannot read {path}: {exc}")


def _format_scalar(v) -> str:
    if isinstance(v, Surd):
        return repr(v)
    c = complex(v)
    if abs(c.imag) < 1e-15:
        return f"{c.real:.12g}"
    return f"{c.real:.12g}{c.imag:+.12g}i"


def cmd_faces(args) -> int:
    spec = _read(args.input)
    g = spec.graph
    if spec.has_rotations:
        schemes = [spec.scheme]
    else:
        try:
            schemes = list(enumerate_schemes(g, args.scheme_bound))
        except SchemeBoundExceeded as exc:
            raise SystemExit(str(exc))
        print(f"# {scheme_count(g)} rotation schemes")
    for i, sch in enumerate(schemes):
        trace = trace_faces(g, sch)
        h = embedding_genus(g, trace)
        print(f"scheme {i}: faces {list(trace.partition)} genus {h}")
        for face in trace.faces:
            walk = " ".join(f"{eid}{'+' if d == 0 else '-'}" for eid, d in face)
            print(f"  {walk}")
    return 0


def cmd_classify(args) -> int:
    spec = _read(args.input)
    g = spec.graph
    try:
        part_a, part_b = k33_parts(g)
    except ValueError as exc:
        raise SystemExit(f"classify needs a K33 input: {exc}")
    if spec.has_rotations:
        fam = classify_k33(g, spec.scheme)
        va = set_value(g, spec.scheme, part_a)
        vb = set_value(g, spec.scheme, part_b)
        print(f"family {fam} (set values {va},{vb})")
        return 0
    counts = {"sym666": 0, "sym4410": 0, "asym18": 0}
    for sch in enumerate_schemes(g, args.scheme_bound):
        counts[classify_k33(g, sch)] += 1
    total = sum(counts.values())
    print(f"# {total} schemes")
    for fam in ("sym666", "sym4410", "asym18"):
        print(f"{fam:8s} {counts[fam]}")
    return 0


def cmd_genus(args) -> int:
    spec = _read(args.input)
    g = spec.graph
    try:
        h = graph_genus(g, args.scheme_bound)
    except SchemeBoundExceeded as exc:
        raise SystemExit(str(exc))
    planar = h == 0
    print(f"genus {h}")
    print(f"planar {'yes' if planar else 'no'}")
    if len(g.vertices) <= args.minor_bound:
        minor = has_forbidden_minor(g, args.minor_bound)
        print(f"forbidden-minor {'yes' if minor else 'no'}")
        if minor == planar:
            raise SystemExit("internal inconsistency: minor search disagrees with genus")
    return 0


def _network(spec):
    try:
        return spec.network()
    except ValueError as exc:
        raise SystemExit(str(exc))


def cmd_decompose(args) -> int:
    spec = _read(args.input)
    net = _network(spec)
    try:
        expr, trace = decompose(net)
    except IrreducibleNetwork as exc:
        print(f"irreducible: {exc}", file=sys.stderr)
        return 2
    if args.format == "text":
        print(f"# terminal: {trace.terminal}")
        for step in trace.steps:
            print(f"# {step.kind} {' '.join(step.face_edges)}"
                  + (f" edge {step.edge}" if step.edge else ""))
    print(to_sexpr(expr))
    return 0


def cmd_eval(args) -> int:
    spec = _read(args.input)
    net = _network(spec)
    d = _deformation(args)
    try:
        expr, _ = decompose(net)
        value = evaluate_numeric(expr, d, phase_override=args.phase_override)
    except IrreducibleNetwork as exc:
        print(f"irreducible: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"undefined at this deformation: {exc}", file=sys.stderr)
        return 3
    print(_format_scalar(value))
    return 0


def cmd_verify(args) -> int:
    d = _deformation(args)
    reports = identities.run_suite(d, max_two=args.max_2j, seed=args.seed)
    failed = 0
    for rep in reports:
        print(rep.line())
        if not rep.passed and not rep.known_defect:
            failed += 1
        if args.strict and not rep.passed:
            failed += 1
    print(f"# {sum(r.passed for r in reports)}/{len(reports)} passed at {d.label()}")
    return 1 if failed else 0


def cmd_export_dot(args) -> int:
    spec = _read(args.input)
    scheme = spec.scheme if spec.has_rotations else None
    sys.stdout.write(to_dot(spec.graph, scheme, spec.spins, args.pretty_spins))
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="spinnets",
                                 description="rotation-scheme embeddings and "
                                             "spin-network evaluation")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("faces", help="face walks and genus per scheme")
    p.add_argument("input")
    p.add_argument("--scheme-bound", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_faces)

    p = sub.add_parser("classify", help="K33 embedding-family census")
    p.add_argument("input")
    p.add_argument("--scheme-bound", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("genus", help="orientable genus by exhaustive search")
    p.add_argument("input")
    p.add_argument("--scheme-bound", type=int, default=10 ** 6)
    p.add_argument("--minor-bound", type=int, default=12)
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("decompose", help="reduce a network to recoupling atoms")
    p.add_argument("input")
    p.add_argument("--format", choices=("sexpr", "text"), default="sexpr")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("eval", help="numeric evaluation of a network")
    p.add_argument("input")
    _add_deformation_args(p)
    p.add_argument("--phase-override", action="store_true",
                   help="evaluate with all twist/phase factors forced to 1")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run the identity suite")
    _add_deformation_args(p)
    p.add_argument("--max-2j", type=int, default=3)
    p.add_argument("--seed", type=int, default=20240817,
                   help="seed for the randomized reflection sweeps")
    p.add_argument("--strict", action="store_true",
                   help="fail also on the identities reproduced verbatim from "
                        "the source material that are known to be defective")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-dot", help="DOT export with face comments")
    p.add_argument("input")
    p.add_argument("--pretty-spins", action="store_true")
    p.set_defaults(func=cmd_export_dot)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
