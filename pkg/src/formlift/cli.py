"""Command line front end.

Exit status: 0 when the command succeeds (and any checks pass), 1 when a
verification or membership check fails, 2 for usage or input errors, which
are reported as a single diagnostic line on stderr.  All numeric input and
output is exact rational text.
"""

from __future__ import annotations

import argparse
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import formula as fm
from . import hull, instances, lpsolve, measures, verify
from . import polytope as pt


@dataclass(frozen=True)
class RunConfig:
    """Normalized run parameters shared by all subcommands."""

    subcommand: str
    inputs: tuple
    rounds: int = 1
    level: int = 1
    hull_cap: int = hull.HULL_LIMIT
    seed: int = 0
    out: str | None = None
    jobs: int = 1
    verbose: int = 0

    def __post_init__(self):
        if self.rounds < 0:
            raise ValueError("rounds must be nonnegative")
        if self.level < 1:
            raise ValueError("level must be at least 1")
        if self.hull_cap < 1:
            raise ValueError("dimension cap must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


class InputError(Exception):
    """Bad file content or unusable parameter combination; exits 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_formula(path: str, n=None) -> fm.Formula:
    try:
        return fm.parse(_read(path), n)
    except fm.ParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_polytope(source: str, n: int):
    if source == "cube":
        return pt.cube(n)
    try:
        Q = pt.from_text(_read(source))
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from exc
    if Q.n != n:
        raise InputError(f"{source} is over {Q.n} variables, the formula over {n}")
    return Q


def _load_ef(path: str):
    try:
        return pt.from_text(_read(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse_vector(text: str, what: str):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            raise InputError(f"empty entry in {what}")
        try:
            out.append(Fraction(tok))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational {tok!r} in {what}") from exc
    return tuple(out)


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\s*\*?\s*)?x(\d+)$")


def _parse_ineq(text: str, n: int):
    """Parse `c1*x1 + c2 x2 - x3 >= rhs` into dense coefficients and bound."""
    if ">=" not in text:
        raise InputError("inequality must use >=")
    lhs, _, rhs = text.partition(">=")
    try:
        bound = Fraction(rhs.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad right-hand side {rhs.strip()!r}") from exc
    coeffs = [Fraction(0)] * n
    for signed in lhs.replace("-", "+-").split("+"):
        term = signed.strip()
        if not term:
            continue
        sign = Fraction(1)
        if term.startswith("-"):
            sign = Fraction(-1)
            term = term[1:].strip()
        m = _TERM.match(term)
        if not m:
            raise InputError(f"cannot read term {term!r}")
        c = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        var = int(m.group(2))
        if not 1 <= var <= n:
            raise InputError(f"variable x{var} outside 1..{n}")
        coeffs[var - 1] += sign * c
    return tuple(coeffs), bound


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_parse(args, cfg):
    phi = _load_formula(args.formula, args.n)
    print(phi.to_text())
    if cfg.verbose:
        print(f"n={phi.n} size={phi.size} reduced={phi.is_reduced()}", file=sys.stderr)
    return 0


def _cmd_reduce(args, cfg):
    phi = fm.reduce(_load_formula(args.formula, args.n))
    _emit(phi.to_text() + "\n", cfg.out)
    return 0


def _cmd_lift(args, cfg):
    phi = fm.reduce(_load_formula(args.formula))
    Q = _load_polytope(args.polytope, phi.n)
    ef, reports = pt.iterate_lift(phi, Q, cfg.rounds, hull_cap=cfg.hull_cap,
                                  with_reports=True)
    _emit(pt.to_text(ef), cfg.out)
    for i, rep in enumerate(reports, start=1):
        print(f"round {i}: {rep.summary_line()}", file=sys.stderr)
    return 0


def _cmd_optimize(args, cfg):
    Q = _load_ef(args.ef)
    c = _parse_vector(args.obj, "--obj")
    if len(c) != Q.n:
        raise InputError(f"objective has {len(c)} entries, the formulation {Q.n}")
    if Q.empty_marker:
        raise InputError("the formulation is empty; nothing to optimize")
    out = lpsolve.optimize(Q, c, "max" if args.max else "min")
    print(out.value)
    if cfg.verbose:
        print("at " + " ".join(str(v) for v in out.x), file=sys.stderr)
    return 0


def _cmd_member(args, cfg):
    Q = _load_ef(args.ef)
    x = _parse_vector(args.point, "--point")
    if len(x) != Q.n:
        raise InputError(f"point has {len(x)} entries, the formulation {Q.n}")
    inside = lpsolve.contains_point(Q, x)
    print("inside" if inside else "outside")
    return 0 if inside else 1


def _cmd_measure(args, cfg):
    coeffs, rhs = _parse_ineq(args.ineq, args.n)
    q = measures.to_standard_form(coeffs, rhs)
    if q is None:
        print("pitch=0 notch=0")
        return 0
    print(f"pitch={measures.pitch_of(q)} notch={measures.notch_of(q)}")
    return 0


def _points_from_file(path: str, n=None):
    pts = []
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            pts.append(tuple(int(t) for t in line.split()))
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: not a 0/1 point") from exc
    if not pts:
        raise InputError(f"{path}: no points")
    dim = n if n is not None else len(pts[0])
    try:
        return fm.point_set(dim, pts)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _cmd_notchset(args, cfg):
    if args.points:
        S = _points_from_file(args.points, args.n)
    else:
        phi = _load_formula(args.formula, args.n)
        S = fm.enumerate_set(phi)
    try:
        print(f"notch={measures.notch_of_set(S)}")
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return 0


def _cmd_closure(args, cfg):
    phi = fm.reduce(_load_formula(args.formula))
    S = fm.enumerate_set(phi)
    if args.ef:
        R = _load_ef(args.ef)
        if R.n != phi.n:
            raise InputError(f"{args.ef} is over {R.n} variables, the formula over {phi.n}")
    else:
        rounds = cfg.rounds if args.rounds is not None else cfg.level
        R = pt.iterate_lift(phi, _load_polytope(args.polytope, phi.n), rounds,
                            hull_cap=cfg.hull_cap)
    try:
        rep = measures.verify_closure(measures.ClosureQuery(args.mode, cfg.level, S, R))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    print(rep.line())
    return 0 if rep.closed else 1


def _read_matrix(path: str):
    rows = []
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append(tuple(int(t) for t in line.split()))
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: not an integer row") from exc
    if not rows:
        raise InputError(f"{path}: no rows")
    return rows


def _cmd_gen(args, cfg):
    if args.family == "bz" and args.n is None:
        raise InputError("gen bz needs --n")
    if args.family in ("covering", "bounded") and not args.matrix:
        raise InputError(f"gen {args.family} needs --matrix")
    if args.family == "bounded" and not args.b:
        raise InputError("gen bounded needs --b")
    try:
        if args.family == "bz":
            inst = instances.gen_bz(args.n)
        elif args.family == "covering":
            inst = instances.gen_covering(_read_matrix(args.matrix))
        elif args.family == "bounded":
            b = tuple(int(v) for v in _parse_vector(args.b, "--b"))
            inst = instances.gen_bounded_covering(_read_matrix(args.matrix), b)
        else:
            inst = instances.gen_matching_k4()
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    paths = instances.save_bundle(inst, cfg.out or ".")
    print(f"instance {inst.name} n={inst.n}")
    if cfg.verbose:
        for p in paths:
            print(f"wrote {p}", file=sys.stderr)
    return 0


_VERIFY_NEEDS_Q = {"sandwich", "integral", "size"}


def _one_check(kind, path, cfg, covering_m):
    phi = _load_formula(path)
    name = Path(path).stem
    if kind in _VERIFY_NEEDS_Q:
        Q = _load_polytope(cfg_polytope(cfg), phi.n)
    if kind == "sandwich":
        return verify.check_sandwich(phi, Q, instance=name, seed=cfg.seed)
    if kind == "complete":
        return verify.check_completeness(phi, cfg.rounds, instance=name)
    if kind == "integral":
        return verify.check_integrality(phi, Q, instance=name)
    if kind == "pitch":
        return verify.check_pitch_progression(phi, cfg.rounds, instance=name)
    if kind == "notch":
        return verify.check_notch_progression(phi, cfg.rounds, instance=name)
    return verify.check_size_accounting(phi, Q, instance=name, covering_m=covering_m)


def cfg_polytope(cfg):
    for tag, value in cfg.inputs:
        if tag == "polytope":
            return value
    return "cube"


def _cmd_verify(args, cfg):
    if args.kind in ("complete", "pitch", "notch") and cfg.rounds < 1:
        raise InputError("this check needs --rounds at least 1")
    jobs = min(cfg.jobs, len(args.formula))
    try:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                futs = [pool.submit(_one_check, args.kind, path, cfg, args.covering_m)
                        for path in args.formula]
                reports = [f.result() for f in futs]
        else:
            reports = [_one_check(args.kind, path, cfg, args.covering_m)
                       for path in args.formula]
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for rep in reports:
        print(rep.line())
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# argument grammar


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="formlift",
        description="Strengthen 0/1 relaxations with Boolean formulas, exactly.")
    top.add_argument("-v", "--verbose", action="count", default=0)
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("parse", help="parse a formula and print its canonical form")
    p.add_argument("--formula", required=True)
    p.add_argument("--n", type=int)
    p.set_defaults(run=_cmd_parse)

    p = sub.add_parser("reduce", help="push negations to the literals")
    p.add_argument("--formula", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.set_defaults(run=_cmd_reduce)

    p = sub.add_parser("lift", help="apply a formula to a relaxation")
    p.add_argument("--formula", required=True)
    p.add_argument("--polytope", default="cube",
                   help="'cube' or a formulation file (default cube)")
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--hull-cap", type=int, default=hull.HULL_LIMIT)
    p.add_argument("--out")
    p.set_defaults(run=_cmd_lift)

    p = sub.add_parser("optimize", help="exact LP over a formulation file")
    p.add_argument("--ef", required=True)
    sense = p.add_mutually_exclusive_group(required=True)
    sense.add_argument("--min", action="store_true")
    sense.add_argument("--max", action="store_true")
    p.add_argument("--obj", required=True, help="comma-separated rationals")
    p.set_defaults(run=_cmd_optimize)

    p = sub.add_parser("member", help="membership of a point in a formulation")
    p.add_argument("--ef", required=True)
    p.add_argument("--point", required=True, help="comma-separated rationals")
    p.set_defaults(run=_cmd_member)

    p = sub.add_parser("measure", help="pitch and notch of one inequality")
    p.add_argument("--ineq", required=True, help='e.g. "x1 + x5 >= 1"')
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(run=_cmd_measure)

    p = sub.add_parser("notchset", help="notch of a 0/1 point set")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", help="file with one 0/1 point per line")
    src.add_argument("--formula", help="formula file; the set is enumerated")
    p.add_argument("--n", type=int)
    p.set_defaults(run=_cmd_notchset)

    p = sub.add_parser("closure", help="search for a violated low-measure inequality")
    p.add_argument("--mode", choices=("pitch", "notch"), required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--polytope", default="cube")
    p.add_argument("--ef", help="check this formulation instead of lifting")
    p.add_argument("--rounds", type=int, help="lift rounds (default: the level)")
    p.add_argument("--hull-cap", type=int, default=hull.HULL_LIMIT)
    p.set_defaults(run=_cmd_closure)

    p = sub.add_parser("gen", help="write a named instance bundle")
    p.add_argument("family", choices=("bz", "covering", "bounded", "matching-k4"))
    p.add_argument("--n", type=int, help="dimension (bz)")
    p.add_argument("--matrix", help="matrix file (covering, bounded)")
    p.add_argument("--b", help="comma-separated thresholds (bounded)")
    p.add_argument("--out", help="bundle directory (default .)")
    p.set_defaults(run=_cmd_gen)

    p = sub.add_parser("verify", help="run a checker over formula files")
    p.add_argument("kind", choices=("sandwich", "complete", "integral",
                                    "pitch", "notch", "size"))
    p.add_argument("--formula", required=True, nargs="+")
    p.add_argument("--polytope", default="cube")
    p.add_argument("--rounds", type=int, default=1,
                   help="k_max / v_max for complete, pitch, notch")
    p.add_argument("--covering-m", type=int, dest="covering_m",
                   help="report the covering yardstick ratio (size)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=_cmd_verify)

    return top


def _config(args) -> RunConfig:
    inputs = []
    for tag in ("formula", "polytope", "ef", "matrix", "points"):
        value = getattr(args, tag, None)
        if value:
            inputs.append((tag, value if isinstance(value, str) else tuple(value)))
    return RunConfig(
        subcommand=args.subcommand,
        inputs=tuple(inputs),
        rounds=getattr(args, "rounds", None) if getattr(args, "rounds", None) is not None else 1,
        level=getattr(args, "level", 1),
        hull_cap=getattr(args, "hull_cap", hull.HULL_LIMIT),
        seed=getattr(args, "seed", 0),
        out=getattr(args, "out", None),
        jobs=getattr(args, "jobs", 1),
        verbose=args.verbose,
    )


def dispatch(argv) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return args.run(args, cfg)
    except (InputError, ValueError) as exc:
        print(f"formlift: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"formlift: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
