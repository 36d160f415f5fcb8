"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 guard exceeded, 3 repro failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .diagram import CHORD, GENERALIZED, JACOBI, DiagramError, LinComb, tau_A, tau_B_apply
from .dsl import parse_lincomb, serialize_diagram, serialize_lincomb
from .necklace import NecklaceError, tau_S_poly
from .relations import GuardExceeded, enumerate_chord_diagrams, stu_expand
from .span import build_span
from .tensor import TensorError, tau_U
from .weights import chi, phi, psi

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_REPRO = 0, 1, 2, 3


def _read(path: str) -> LinComb:
    if path == "-":
        return parse_lincomb(sys.stdin.read())
    with open(path) as fh:
        return parse_lincomb(fh.read())


def _kinds(v: LinComb) -> set:
    return {d.kind for d in v}


def _single_p(v: LinComb, what: str) -> int | None:
    ps = {d.p for d in v}
    if len(ps) > 1:
        raise DiagramError(f"{what}: diagrams on different numbers of strings")
    return ps.pop() if ps else None


def _lincomb_out(v: LinComb, fmt: str) -> str:
    if fmt == "json":
        rows = [{"coeff": str(c), "diagram": serialize_diagram(d)} for d, c in v.sorted_items()]
        return json.dumps({"terms": rows}, indent=1) + "\n"
    return serialize_lincomb(v)


def _colors(v: LinComb, given: int | None) -> int:
    if given is not None:
        return given
    return max((max(d.colors, default=1) for d in v), default=1)


# -- commands ------------------------------------------------------------------------

def cmd_canon(args) -> str:
    v = _read(args.file)
    return _lincomb_out(v, args.format)


def cmd_tau(args) -> str:
    v = _read(args.file)
    kinds = _kinds(v)
    if kinds and kinds <= {CHORD, GENERALIZED}:
        out = v.map(lambda d: LinComb.of(tau_A(d)))
    elif kinds == {JACOBI}:
        out = v.map(lambda d: LinComb.of(tau_B_apply(d)[1], tau_B_apply(d)[0]))
    elif not kinds:
        out = v
    else:
        raise DiagramError("cannot mix Jacobi diagrams with diagrams on strings")
    return _lincomb_out(out, args.format)


def cmd_stu(args) -> str:
    return _lincomb_out(stu_expand(_read(args.file)), args.format)


def cmd_phi(args) -> str:
    v = _read(args.file)
    if JACOBI in _kinds(v):
        raise DiagramError("phi takes diagrams on strings; use psi or chi for Jacobi diagrams")
    a = phi(v, args.N, args.jobs, p=_single_p(v, "phi"))
    return a.to_json() if args.format == "json" else a.to_text()


def cmd_psi(args) -> str:
    v = _read(args.file)
    if _kinds(v) - {JACOBI}:
        raise DiagramError("psi takes Jacobi diagrams")
    q = psi(v, _colors(v, args.strings))
    return q.to_json() if args.format == "json" else q.to_text()


def cmd_chi(args) -> str:
    v = _read(args.file)
    if _kinds(v) - {JACOBI}:
        raise DiagramError("chi takes Jacobi diagrams")
    p = _colors(v, args.strings)
    return _lincomb_out(v.map(lambda d: chi(d, p)), args.format)


def cmd_check_invertible(args) -> str:
    v = _read(args.file)
    kinds = _kinds(v)
    if args.via == "phi":
        if JACOBI in kinds:
            v = v.map(lambda d: chi(d, _colors(LinComb.of(d), args.strings)))
        a = phi(v, args.N, args.jobs, p=_single_p(v, "phi"))
        b = tau_U(a)
        result = {"via": "phi", "N": args.N, "terms": len(a), "invariant": a == b, "difference terms": len(a - b)}
        name = "tau_U"
    else:
        if kinds - {JACOBI}:
            raise DiagramError("--via psi needs Jacobi diagrams")
        q = psi(v, _colors(v, args.strings))
        diff = q - tau_S_poly(q)
        result = {"via": "psi", "terms": len(q), "invariant": not diff, "difference": diff.to_text()}
        name = "tau_S"
    if args.format == "json":
        return json.dumps(result, indent=1) + "\n"
    lines = []
    if result["invariant"]:
        lines.append(f"invariant under {name} (no non-invertibility detected)")
    else:
        lines.append(f"NOT invariant under {name}: non-invertible")
    for k, val in result.items():
        if k not in ("invariant", "difference"):
            lines.append(f"{k}: {val}")
    if "difference" in result and not result["invariant"]:
        lines.append("difference:")
        lines.append(result["difference"].rstrip("\n"))
    return "\n".join(lines) + "\n"


def cmd_span_check(args) -> str:
    kinds = tuple(k.strip() for k in args.relations.split(",") if k.strip())
    for k in kinds:
        if k not in ("4T", "1T"):
            raise DiagramError(f"unknown relation kind {k!r}")
    v = stu_expand(_read(args.file))
    parts: dict = {}
    for d, c in v.items():
        parts.setdefault((d.degree, d.p), LinComb())
        parts[(d.degree, d.p)] = parts[(d.degree, d.p)] + LinComb.of(d, c)
    results = []
    for (n, p) in sorted(parts):
        basis = build_span(n, p, kinds)
        results.append({"degree": n, "strings": p, "columns": len(basis.columns), "rank": basis.rank,
                        "in_span": not basis.residual(parts[(n, p)])})
    member = all(r["in_span"] for r in results)
    if args.format == "json":
        return json.dumps({"relations": list(kinds), "in_span": member, "degrees": results}, indent=1) + "\n"
    lines = [f"{'in span' if member else 'NOT in span'} of {','.join(kinds)}"]
    for r in results:
        lines.append(f"degree {r['degree']}, {r['strings']} strings: {r['columns']} diagrams, rank {r['rank']}, "
                     f"{'in span' if r['in_span'] else 'not in span'}")
    return "\n".join(lines) + "\n"


def cmd_enumerate(args) -> str:
    ds = enumerate_chord_diagrams(args.degree, args.strings, args.limit)
    if args.format == "json":
        return json.dumps({"count": len(ds), "diagrams": [serialize_diagram(d).strip() for d in ds]}, indent=1) + "\n"
    return "".join(serialize_diagram(d) for d in ds) + f"# {len(ds)} diagrams\n"


def cmd_repro(args):
    from .repro import CLAIMS, FAIL, SOFT, run_claim

    claims = CLAIMS if args.claim == "all" else (args.claim,)
    reports = [run_claim(c, args.fixtures, args.jobs) for c in claims]
    for r in reports:
        print(f"# {r.claim}: {r.seconds:.2f} s", file=sys.stderr)
        if r.status == SOFT:
            print(f"warning: {r.claim} soft mismatch", file=sys.stderr)
    if args.format == "json":
        out = json.dumps([r.to_dict(args.timings) for r in reports], indent=1) + "\n"
    else:
        out = "\n".join(r.to_text(args.timings) for r in reports)
    code = EXIT_REPRO if any(r.status == FAIL for r in reports) else EXIT_OK
    return out, code


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linkweights", description="Weight systems and orientation checks for string-link diagrams.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, file=True):
        sp = sub.add_parser(name, help=help_)
        if file:
            sp.add_argument("file", help="diagram or linear-combination file ('-' for stdin)")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.set_defaults(func=func)
        return sp

    add("canon", cmd_canon, "canonical form")
    add("tau", cmd_tau, "orientation reversal (tau_A or tau_B)")
    add("stu", cmd_stu, "expand into chord diagrams")
    sp = add("phi", cmd_phi, "gl_N weight system, normal-ordered")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sp = add("psi", cmd_psi, "necklace weight system of Jacobi diagrams")
    sp.add_argument("--strings", type=int, default=None, help="number of colors (default: largest color)")
    sp = add("chi", cmd_chi, "symmetrization into diagrams on strings")
    sp.add_argument("--strings", type=int, default=None)
    sp = add("check-invertible", cmd_check_invertible, "compare an image with its reversal")
    sp.add_argument("--via", choices=("phi", "psi"), default="phi")
    sp.add_argument("--N", type=int, default=4)
    sp.add_argument("--strings", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sp = add("span-check", cmd_span_check, "membership in the 4T (and 1T) span")
    sp.add_argument("--relations", default="4T")
    sp = add("enumerate", cmd_enumerate, "list chord diagrams", file=False)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--strings", type=int, required=True)
    sp.add_argument("--limit", type=int, default=20_000)
    sp = add("repro", cmd_repro, "replay a published claim", file=False)
    sp.add_argument("claim", help="claim identifier or 'all'")
    sp.add_argument("--fixtures", default=None, help="fixture directory (default: bundled)")
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--timings", action="store_true", help="include wall times in the report")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "N", None) is not None and args.N < 1:
        print("error: --N must be positive", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        result = args.func(args)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REPRO if args.command == "repro" else EXIT_INPUT
    except (DiagramError, NecklaceError, TensorError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    sys.stdout.write(result)
    return code


if __name__ == "__main__":
    sys.exit(main())
