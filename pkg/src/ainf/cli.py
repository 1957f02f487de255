"""Command-line driver: ``ainf verify|strata|branes|c0|fixtures``.

Exit status is 0 when every non-diagnostic check passes, 1 when a check
fails and 2 when an input fixture cannot be read.  Reports are JSON with
sorted keys and no wall times unless ``--times`` is given, so the same
inputs and seed give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

import numpy as np

from . import branes, cubical, pontryagin, strata, suites
from .ainfty import category as ainfty_category
from .ainfty import functor as ainfty_functor
from .ainfty.fixtures import dg_fixture, transferred_fixture
from .report import SCHEMA_VERSION, VerificationReport

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED = 0, 1, 2

FIXTURE_KINDS = ("digraph-squares", "random-dg", "transferred-ainfty", "frame-path")


class Malformed(Exception):
    pass


def _load(fn: Callable, path: str):
    try:
        return fn(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise Malformed(f"{path}: {exc}") from exc


def _emit(rep: VerificationReport, args, out=None) -> int:
    out = out or sys.stdout
    text = rep.dumps(with_times=getattr(args, "times", False))
    if args.report == "-":
        out.write(text)
    else:
        if args.report:
            with open(args.report, "w") as fh:
                fh.write(text)
        for c in rep.checks:
            out.write(f"{c.status.upper():10s} {c.id}\n")
        out.write(f"{rep.suite}: {'pass' if rep.ok else 'fail'}\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------- handlers

def cmd_verify(args) -> int:
    what = args.what
    if what == "all":
        rep = suites.all_suites(args.seed, args.dmax, args.grid)
    elif what == "cubical":
        if args.input:
            X = _load(lambda p: cubical.load(p, strict=False), args.input)
            rep = VerificationReport("cubical", meta={"input": args.input})
            rep.add(cubical.check_complex(X, id="d_squared"))
        else:
            rep = suites.cubical_suite(args.seed)
    elif what == "pontryagin":
        model = _load(pontryagin.load, args.input) if args.input else None
        rep = suites.pontryagin_suite(args.seed, max_len=args.max_path_len, model=model)
    elif what == "ainfty":
        if args.input:
            C = _load(ainfty_category.load, args.input)
            rep = suites.ainfty_category_report(C, args.dmax)
        else:
            rep = suites.ainfty_suite(args.seed, args.dmax)
    else:  # functor
        if args.input:
            F = _load(ainfty_functor.load, args.input)
        else:
            _, F = transferred_fixture(2 + args.seed % 5, args.dmax)
        rep = suites.functor_report(F, args.dmax, args.convention)
    return _emit(rep, args)


def cmd_strata(args) -> int:
    rep = suites.strata_report(args.space, args.d, list_=args.list, check_=args.check,
                               signed=args.signed, assign=args.assign, seed=args.seed)
    if args.list:
        for c in rep.checks:
            if c.id == "codim1":
                for s in c.details["strata"]:
                    print(s)
    if args.dot:
        if args.space != "Z":
            raise Malformed("Hasse diagrams are available for --space Z only")
        text = strata.hasse_dot(args.d)
        if args.dot == "-":
            sys.stdout.write(text)
        else:
            with open(args.dot, "w") as fh:
                fh.write(text)
    return _emit(rep, args)


def cmd_branes(args) -> int:
    frames = _load(lambda p: branes.read_frames(p, args.n), args.input)
    try:
        rep = suites.maslov_report(frames, args.closed)
    except (ValueError, branes.SamplingDensityError) as exc:
        raise Malformed(str(exc)) from exc
    print(f"winding {rep.checks[0].details['winding']}")
    return _emit(rep, args)


def cmd_c0(args) -> int:
    rep = suites.c0_suite(args.seed, args.grid)
    return _emit(rep, args)


def cmd_fixtures(args) -> int:
    kind = args.kind
    if kind == "frame-path":
        rng = np.random.default_rng(args.seed)
        if args.shape == "rotating-line":
            frames = branes.rotating_line(args.samples)
        else:
            turns = [int(t) for t in rng.integers(-2, 3, size=args.n)]
            frames = branes.frame_loop(rng, args.n, turns, args.samples)
        if args.out.endswith(".csv"):
            branes.write_frames(args.out, frames)
        else:
            data = {"schema_version": SCHEMA_VERSION, "n": frames[0].n, "frames": [F.to_reals() for F in frames],
                    "expected_winding": 1 if args.shape == "rotating-line" else sum(turns)}
            _write_json(args.out, data)
        return EXIT_OK
    if kind == "digraph-squares":
        data = pontryagin.random_digraph(args.seed, n_vertices=args.vertices).to_json()
    elif kind == "random-dg":
        data = dg_fixture(args.seed, max_len=args.max_path_len).to_json()
    else:
        W, F = transferred_fixture(args.seed, args.dmax)
        if args.functor:
            data = F.to_json()
            data["satisfies"] = [c for c in ainfty_functor.CONVENTIONS
                                 if ainfty_functor.check_functor(F, args.dmax, c).ok]
        else:
            data = W.to_json()
    data["schema_version"] = SCHEMA_VERSION
    _write_json(args.out, data)
    return EXIT_OK


def _write_json(path: str, data) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ainf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(q, seed=True):
        q.add_argument("--report", help="write the JSON report here ('-' for stdout)")
        q.add_argument("--times", action="store_true", help="include wall times (breaks byte-identity)")
        if seed:
            q.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("what", choices=["ainfty", "functor", "pontryagin", "cubical", "all"])
    v.add_argument("--in", dest="input", help="fixture JSON")
    v.add_argument("--dmax", type=int, default=4)
    v.add_argument("--grid", type=int, default=100_000)
    v.add_argument("--convention", choices=ainfty_functor.CONVENTIONS, default="paper-literal")
    v.add_argument("--max-path-len", type=int, default=4)
    common(v)
    v.set_defaults(fn=cmd_verify)

    s = sub.add_parser("strata", help="strata of the compactified moduli spaces")
    s.add_argument("--space", choices=["Z", "R"], default="Z")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--list", action="store_true", help="print the codimension-one strata")
    s.add_argument("--check", choices=["mod2"])
    s.add_argument("--signed", action="store_true", help="signed residue table (diagnostic)")
    s.add_argument("--assign", choices=["random", "zero"], default="random")
    s.add_argument("--dot", help="write the Hasse diagram in DOT format ('-' for stdout)")
    common(s)
    s.set_defaults(fn=cmd_strata)

    b = sub.add_parser("branes", help="gradings of Lagrangian frame paths")
    b.add_argument("action", choices=["maslov"])
    b.add_argument("--in", dest="input", required=True, help="CSV or JSON rows of 2n^2 reals")
    b.add_argument("--closed", action="store_true")
    b.add_argument("--n", type=int)
    common(b, seed=False)
    b.set_defaults(fn=cmd_branes)

    c = sub.add_parser("c0", help="numerical checks of the C0 estimate")
    c.add_argument("action", choices=["verify"])
    c.add_argument("--all", action="store_true", help="run every check (the default)")
    c.add_argument("--grid", type=int, default=100_000)
    common(c)
    c.set_defaults(fn=cmd_c0)

    f = sub.add_parser("fixtures", help="generate a reproducible fixture")
    f.add_argument("kind", choices=FIXTURE_KINDS)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out", default="-")
    f.add_argument("--vertices", type=int, default=3)
    f.add_argument("--dmax", type=int, default=4)
    f.add_argument("--max-path-len", type=int, default=6)
    f.add_argument("--functor", action="store_true", help="emit the transfer functor instead of the category")
    f.add_argument("--shape", choices=["rotating-line", "loop"], default="rotating-line")
    f.add_argument("--samples", type=int, default=256)
    f.add_argument("--n", type=int, default=2)
    f.set_defaults(fn=cmd_fixtures)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except Malformed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
