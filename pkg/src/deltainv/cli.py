"""
Command-line front end.

Every subcommand prints one JSON document on stdout.  Exit status is 0
when a result or verdict was produced, 1 for bad input and 2 when an
internal consistency check fails.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import recover as rec
from .algebra import DEFAULT_TOL
from .counterexample import build_counterexample, non_analytic_witness, sample_csv, verify_period_multiple
from .diffops import delta, djokovic_check
from .errors import DeltaInvError, InputError, TheoremViolation
from .exppoly import AmbientSpace, ExpPolynomial
from .invariance import (
    Subspace,
    box_closure,
    decompose_PE,
    diamond_closure,
    main2_equivalence,
    montel_check,
)
from .spectral import matrix_delta, matrix_power, stirling2


@dataclass(frozen=True)
class Config:
    tol: float = DEFAULT_TOL
    seed: int = 0
    grid: tuple = (-5.0, 5.0, 200)
    h_sequence: tuple = rec.DEFAULT_H_SEQUENCE

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError("--tol must be positive")
        if self.seed < 0:
            raise InputError("--seed must be a non-negative integer")
        lo, hi, count = self.grid
        if count < 2 or not hi > lo:
            raise InputError("--grid needs lo < hi and count >= 2")
        hs = self.h_sequence
        if any(h <= 0 for h in hs) or any(b >= a for a, b in zip(hs, hs[1:])):
            raise InputError("--h-seq must be strictly decreasing and positive")

    def grid_points(self):
        lo, hi, count = self.grid
        return np.linspace(lo, hi, int(count))


# ---------------------------------------------------------------------------
# I/O helpers
# ---------------------------------------------------------------------------


def load_json(arg):
    """Parse JSON given inline, as a file path, or ``-`` for stdin."""
    if arg == "-":
        text, where = sys.stdin.read(), "<stdin>"
    elif arg.lstrip()[:1] in ("{", "["):
        text, where = arg, "<inline>"
    else:
        path = Path(arg)
        if not path.is_file():
            raise InputError("no such file: %s" % arg)
        text, where = path.read_text(), arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            "malformed JSON in %s at line %d column %d (char %d): %s"
            % (where, exc.lineno, exc.colno, exc.pos, exc.msg)
        ) from None


def to_jsonable(obj):
    """Plain JSON types; complex numbers become ``[re, im]`` and integral floats ints."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x) and x == int(x) and abs(x) < 2**53:
            return int(x)
        return x if math.isfinite(x) else str(x)
    return obj


def _floats(text, what):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise InputError("%s must be comma-separated numbers, got %r" % (what, text)) from None


def _grid(text):
    vals = _floats(text, "--grid")
    if len(vals) != 3 or vals[2] != int(vals[2]):
        raise InputError("--grid must be lo,hi,count")
    return (vals[0], vals[1], int(vals[2]))


def _subspace(arg, tol):
    return Subspace.from_dict(load_json(arg), tol)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_montel(args, cfg):
    f = ExpPolynomial.from_dict(load_json(args.f), cfg.tol)
    return montel_check(f, args.m, args.h1, args.h2, cfg.tol).to_dict()


def cmd_closure(args, cfg):
    V = _subspace(args.V, cfg.tol)
    if args.h2 is None:
        W = box_closure(V, delta(0, 1), [args.h1], args.m)
        kind = "box"
    else:
        W = diamond_closure(V, delta(0, 2), delta(1, 2), [args.h1, args.h2], args.m)
        kind = "diamond"
    out = W.to_dict()
    out.update({"kind": kind, "dim_V": V.dim, "dim": W.dim})
    return out


def cmd_decompose(args, cfg):
    V = _subspace(args.V, cfg.tol)
    return decompose_PE(V, args.m, seed=cfg.seed).to_dict()


def cmd_main2(args, cfg):
    V = _subspace(args.V, cfg.tol)
    return main2_equivalence(V, args.m, trials=args.trials, seed=cfg.seed).to_dict()


def cmd_djokovic(args, cfg):
    equal, count = djokovic_check(args.s)
    return {"equal": equal, "terms_before_cancel": count}


def cmd_counterexample(args, cfg):
    ce = build_counterexample(args.m, args.p, args.q, args.h)
    grid = cfg.grid_points()
    out = {
        "m": ce.m,
        "h1": ce.h1,
        "h2": ce.h2,
        "residual_h1": verify_period_multiple(ce.f, ce.h, ce.m, ce.p, grid),
        "residual_h2": verify_period_multiple(ce.f, ce.h, ce.m, ce.q, grid),
    }
    lo, hi, _ = cfg.grid
    corners = np.arange(math.ceil(2 * lo / ce.h), math.floor(2 * hi / ce.h) + 1) * ce.h / 2
    w = non_analytic_witness(ce.f, corners, tol=cfg.tol)
    out["witness"] = None if w is None else w._asdict()
    if not args.no_recover:
        fam = rec.SampledFamily([ce.f], ce.m, tol=cfg.tol)
        report = rec.run_recovery(fam, cfg.h_sequence, tol=cfg.tol)
        out["misfit"] = report.misfit
    if args.csv:
        text = sample_csv(ce.f, grid)
        if args.csv == "-":
            sys.stderr.write(text)
        else:
            Path(args.csv).write_text(text)
        out["csv"] = args.csv
    return out


def _load_family(args, cfg):
    if args.family:
        return rec.family_from_json(load_json(args.family), args.m, cfg.tol)
    if args.csv:
        samples = [rec.read_csv_samples(Path(p).read_text()) for p in args.csv]
        return rec.SampledFamily.from_samples(samples, args.m, tol=cfg.tol)
    raise InputError("recover needs --family JSON or one --csv file per function")


def cmd_recover(args, cfg):
    fam = _load_family(args, cfg)
    report = rec.run_recovery(fam, cfg.h_sequence, tol=cfg.tol)
    out = report.to_dict()
    out["collocation"] = fam.colloc
    return out


def cmd_matrix(args, cfg):
    S = AmbientSpace.from_list(load_json(args.S), cfg.tol)
    A = matrix_delta(S, args.h)
    if args.power > 1:
        A = matrix_power(A, args.power)
    return {
        "h": args.h,
        "power": args.power,
        "blocks": [
            {"lambda": lam, "matrix": np.asarray(B, dtype=np.complex128)} for lam, B in A.blocks
        ],
    }


def cmd_stirling(args, cfg):
    return {"value": str(stirling2(args.n, args.k))}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="zero-test tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--grid", type=_grid, default=(-5.0, 5.0, 200), help="lo,hi,count")
    common.add_argument(
        "--h-seq",
        dest="h_seq",
        type=lambda s: _floats(s, "--h-seq"),
        default=rec.DEFAULT_H_SEQUENCE,
        help="decreasing steps for the limit of A(h)/h^m",
    )

    p = argparse.ArgumentParser(prog="deltainv", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("montel", cmd_montel, "decide whether two step differences force a polynomial")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--h1", required=True, help='exact step "a+b*sqrt2"')
    sp.add_argument("--h2", required=True)
    sp.add_argument("--f", required=True, help="exponential polynomial JSON (file, inline or -)")

    sp = add("closure", cmd_closure, "box closure under Delta_h1, or diamond with --h2")
    sp.add_argument("--V", required=True, help="subspace JSON")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--h1", type=float, required=True)
    sp.add_argument("--h2", type=float)

    sp = add("decompose", cmd_decompose, "split an invariant subspace into P and E")
    sp.add_argument("--V", required=True)
    sp.add_argument("--m", type=int, required=True)

    sp = add("main2", cmd_main2, "compare power and mixed-difference invariance")
    sp.add_argument("--V", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--trials", type=int, default=8)

    sp = add("djokovic", cmd_djokovic, "exact check of the mixed-difference expansion")
    sp.add_argument("--s", type=int, required=True)

    sp = add("counterexample", cmd_counterexample, "non-analytic solution for rational step ratios")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--h", type=float, default=1.0)
    sp.add_argument("--csv", help="write t,value samples on the grid to this path (- for stderr)")
    sp.add_argument("--no-recover", action="store_true", help="skip the frequency-recovery misfit")

    sp = add("recover", cmd_recover, "recover frequencies from a sampled family")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--family", help="JSON list of exponential polynomials")
    sp.add_argument("--csv", nargs="+", help="one t,value CSV file per function")

    sp = add("matrix", cmd_matrix, "block matrices of Delta_h (or its power) on an ambient space")
    sp.add_argument("--S", required=True, help='ambient JSON [{"lambda":[re,im],"mult":k},...]')
    sp.add_argument("--h", type=float, required=True)
    sp.add_argument("--power", type=int, default=1)

    sp = add("stirling", cmd_stirling, "Stirling number of the second kind")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    return p


def _emit(obj, stream):
    stream.write(json.dumps(to_jsonable(obj), separators=(",", ":")) + "\n")


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 1
    try:
        cfg = Config(args.tol, args.seed, args.grid, tuple(args.h_seq))
        result = args.func(args, cfg)
    except TheoremViolation as exc:
        _emit({"error": str(exc), "kind": "TheoremViolation"}, stdout)
        return 2
    except (DeltaInvError, ValueError, OverflowError) as exc:
        _emit({"error": str(exc), "kind": type(exc).__name__}, stdout)
        return 1
    _emit(result, stdout)
    return 0


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
