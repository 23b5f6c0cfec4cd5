"""
Command-line front end.

Every command computes a JSON document first; ``--format text`` renders
that document and ``--json PATH`` writes it to a file.  Relative output
paths are resolved against ``$BUNDLECOVER_OUT`` when it is set.

Exit codes: 0 success, 1 usage or malformed input, 2 the computation could
not be carried out (no lifting power, no quotient, fill impossible),
3 an embedded certificate failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .acceptance import CRITERIA, selftest
from .cover import (
    MANIFOLD,
    FillError,
    NoLiftingPower,
    PermCover,
    build_cover,
    check_lift_conditions,
    cover_from_dict,
    fill_orders,
    grid_cover,
    minimal_lifting_power,
    orbifold_fill,
    punctured_torus,
    to_dot,
    verify_lift,
)
from .exact_algebra import Perm
from .fpgroup import NotAnAutomorphism, parse_aut, torus_names, twist_word_aut
from .homology import NotALift, betti_mapping_torus, betti_oracle, h1_action
from .pipeline import CertificateViolation, run_case1, run_case2, run_multik, run_reduction
from .triangle import DEFAULT_CAP, SearchExhausted, find_triangle_quotient

OUT_ENV = "BUNDLECOVER_OUT"
COMPUTATION_ERRORS = (NoLiftingPower, SearchExhausted, FillError, NotAnAutomorphism, NotALift)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# -- input parsing ------------------------------------------------------------

def _perm(text: str, where: str, degree: int | None = None) -> Perm:
    try:
        return Perm.from_cycles(text, degree)
    except ValueError as e:
        raise UsageError(f"{where}: {e}") from None


def _positive(lo: int):
    def conv(s: str) -> int:
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be at least {lo}, got {v}")
        return v
    return conv


def _grid_sigmas(args) -> list[Perm]:
    """One sigma means ``(s, s^-1, s, s^-1)``, two mean ``(a, a^-1, b, b^-1)``,
    four are taken verbatim."""
    texts = args.sigma or []
    sig = [_perm(t, f"--sigma #{i + 1}", args.r) for i, t in enumerate(texts)]
    if len(sig) == 1:
        return [sig[0], sig[0].inverse(), sig[0], sig[0].inverse()]
    if len(sig) == 2:
        return [sig[0], sig[0].inverse(), sig[1], sig[1].inverse()]
    if len(sig) == 4:
        return sig
    raise UsageError(f"--sigma: give 1, 2 or 4 permutations, got {len(sig)}")


def _cover(args) -> PermCover:
    """A cover from ``--cover FILE``, ``--x/--y`` or ``--r/--sigma``."""
    if getattr(args, "cover", None):
        try:
            d = json.loads(Path(args.cover).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"--cover: {e}") from None
        try:
            return cover_from_dict(d)
        except (KeyError, ValueError) as e:
            raise UsageError(f"--cover {args.cover}: {e}") from None
    if getattr(args, "sigma", None):
        if args.r is None:
            raise UsageError("--sigma needs --r")
        sig = _grid_sigmas(args)
        try:
            return grid_cover(args.r, sig)
        except ValueError as e:
            raise UsageError(f"grid cover: {e}") from None
    if getattr(args, "x", None) and getattr(args, "y", None):
        degree = args.degree
        if degree is None:
            # largest point mentioned in either permutation
            degree = max(_perm(args.x, "--x").degree, _perm(args.y, "--y").degree)
        x = _perm(args.x, "--x", degree)
        y = _perm(args.y, "--y", degree)
        try:
            return build_cover(punctured_torus(1), [x, y])
        except ValueError as e:
            raise UsageError(f"cover: {e}") from None
    raise UsageError("give a cover with --cover FILE, --x/--y, or --r with --sigma")


def _monodromy(args, names=("x", "y")):
    """``(FreeAut, original input)`` from ``--f`` (twist word) or ``--aut``."""
    if getattr(args, "aut", None):
        text = args.aut
        if "->" not in text:
            try:
                text = Path(text).read_text()
            except OSError as e:
                raise UsageError(f"--aut: {e}") from None
        try:
            aut = parse_aut(text)
        except ValueError as e:
            raise UsageError(f"--aut: {e}") from None
        if aut.names != tuple(names):
            raise UsageError(f"--aut: generators {aut.names}, expected {tuple(names)}")
        return aut, aut
    try:
        aut = twist_word_aut(args.f, names)
    except ValueError as e:
        raise UsageError(f"--f: {e}") from None
    return aut, args.f


# -- output -------------------------------------------------------------------

def _out_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUT_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(args, doc: dict, text: str | None = None, dot: str | None = None) -> None:
    if getattr(args, "json", None):
        _out_path(args.json).write_text(_dumps(doc))
    if getattr(args, "dot", None) and dot is not None:
        _out_path(args.dot).write_text(dot)
    fmt = args.format
    if fmt == "text" and text is not None:
        sys.stdout.write(text.rstrip("\n") + "\n")
    elif fmt == "dot" and dot is not None:
        sys.stdout.write(dot)
    else:
        sys.stdout.write(_dumps(doc))


# -- commands -----------------------------------------------------------------

def _cover_text(c: PermCover, extra: dict) -> str:
    lines = [f"cover of degree {c.degree}, genus {c.genus}, "
             f"{c.punctures} punctures, Euler characteristic {c.euler_characteristic}"]
    for p in c.puncture_lifts:
        lines.append(f"  puncture over {p.word}: cycle {list(p.cycle)}, unwraps {p.degree}")
    for k in sorted(extra):
        lines.append(f"  {k}: {extra[k]}")
    return "\n".join(lines)


def _fill_doc(c: PermCover, n: int | None) -> dict:
    if n is None:
        return {}
    res = orbifold_fill(c, n)
    return {"fill": res if res == MANIFOLD else {"cone_orders": res}}


def cmd_cover_grid(args) -> int:
    sig = _grid_sigmas(args)
    c = _cover(args)
    extra = {"sigmas": [str(s) for s in sig], "conditions": check_lift_conditions(sig, args.n or 2)}
    extra.update(_fill_doc(c, args.n))
    doc = dict(c.to_dict(), **extra)
    _emit(args, doc, _cover_text(c, extra), to_dot(c))
    return 0


def cmd_cover_boundary(args) -> int:
    c = _cover(args)
    extra = _fill_doc(c, args.n)
    doc = {"degree": c.degree, "punctures": [p.to_dict() for p in c.puncture_lifts],
           "genus": c.genus, **extra}
    _emit(args, doc, _cover_text(c, extra), to_dot(c))
    return 0


def cmd_lift_check(args) -> int:
    c = _cover(args)
    f, _ = _monodromy(args, c.base.names)
    m, lifts = minimal_lifting_power(c, f, args.bound)
    verified = [verify_lift(c, f, lam, power=m) for lam in lifts]
    doc = {"monodromy": f.to_text(), "power": m, "lifts": [str(l) for l in lifts],
           "verified": all(verified)}
    text = (f"f^{m} lifts; sheet maps found: {len(lifts)}, all verified: {all(verified)}\n"
            + "\n".join(f"  {l}" for l in lifts))
    _emit(args, doc, text)
    return 0 if all(verified) else 3


def cmd_betti(args) -> int:
    c = _cover(args)
    f, _ = _monodromy(args, c.base.names)
    fill_orders(c, args.n)  # fail early if the fill is impossible
    m, lifts = minimal_lifting_power(c, f, args.bound)
    if args.lift:
        lam = _perm(args.lift, "--lift", c.degree)
        chosen = [lam]
    else:
        chosen = lifts
    rows = []
    for lam in chosen:
        a = h1_action(c, f, lam, power=m)
        rows.append({"lift": str(lam), "fixed_dim": a.fixed_dim,
                     "b1_formula": betti_mapping_torus(a, args.n),
                     "b1_oracle": betti_oracle(c, f, lam, args.n, power=m)})
    agree = all(r["b1_formula"] == r["b1_oracle"] for r in rows)
    doc = {"power": m, "n": args.n, "monodromy": f.to_text(), "lifts": rows,
           "formula_equals_oracle": agree}
    text = "\n".join([f"power m = {m}"] + [
        f"  lift {r['lift']}: fixed dim {r['fixed_dim']}, b1 {r['b1_formula']} "
        f"(oracle {r['b1_oracle']})" for r in rows])
    _emit(args, doc, text)
    return 0 if agree else 3


def _report_exit(args, report) -> int:
    _emit(args, report.to_dict(), report.render_text())
    return 0 if report.passed else 3


def cmd_case1(args) -> int:
    f, given = _monodromy(args)
    return _report_exit(args, run_case1(given, n=args.n, bound=args.bound))


def cmd_case2(args) -> int:
    f, given = _monodromy(args)
    return _report_exit(args, run_case2(args.n, given, bound=args.bound, seed=args.seed,
                                        cap=args.cap, min_order=args.min_order))


def cmd_multik(args) -> int:
    f, given = _monodromy(args, torus_names(args.k))
    return _report_exit(args, run_multik(args.k, given, n=args.n, bound=args.bound))


def cmd_quotient(args) -> int:
    cert = find_triangle_quotient(args.n, seed=args.seed, cap=args.cap,
                                  min_order=args.min_order)
    doc = cert.to_dict()
    ok = cert.verify()
    text = (f"({2 * args.n},{2 * args.n},{args.n}) quotient of order {cert.order} "
            f"from {cert.source}" + (f" over F_{cert.prime}" if cert.prime else "")
            + f"\n  a = {doc['a']}\n  b = {doc['b']}\n  orders {doc['verified_orders']}")
    _emit(args, doc, text)
    return 0 if ok else 3


def cmd_reduce(args) -> int:
    try:
        cones = [int(s) for s in args.cones.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"--cones: expected integers, got {args.cones!r}") from None
    if not cones or any(c < 1 for c in cones):
        raise UsageError("--cones: orders must be positive")
    if not 1 <= args.keep <= len(cones):
        raise UsageError(f"--keep must be between 1 and {len(cones)}")
    f, given = _monodromy(args, torus_names(len(cones)))
    return _report_exit(args, run_reduction(given, args.keep, cones, bound=args.bound,
                                            downstream=args.downstream))


def cmd_selftest(args) -> int:
    only = None
    if args.only:
        try:
            only = {int(s) for s in args.only.replace(",", " ").split()}
        except ValueError:
            raise UsageError(f"--only: expected criterion numbers, got {args.only!r}") from None
        bad = only - set(CRITERIA)
        if bad:
            raise UsageError(f"--only: unknown criteria {sorted(bad)}")
    doc = selftest(args.seed, only)
    text = "\n".join(f"[{'PASS' if r['passed'] else 'FAIL'}] {i}. {r['name']}"
                     for i, r in doc["criteria"].items())
    _emit(args, doc, text + ("\nall passed" if doc["passed"] else "\nFAILURES"))
    return 0 if doc["passed"] else 3


# -- parser -------------------------------------------------------------------

def _common(p, cover=False, monodromy=False, dot=False, default_f="Dx Dy^4"):
    formats = ["json", "text", "dot"] if dot else ["json", "text"]
    p.add_argument("--format", choices=formats, default="json", help="stdout format")
    p.add_argument("--json", metavar="PATH", help="also write the JSON document here")
    if dot:
        p.add_argument("--dot", metavar="PATH", help="write the Schreier graph as DOT")
    p.add_argument("--threads", type=_positive(1), default=1,
                   help="accepted for compatibility; runs are sequential")
    if cover:
        p.add_argument("--cover", metavar="FILE", help="JSON cover descriptor")
        p.add_argument("--x", help="permutation of x in cycle notation")
        p.add_argument("--y", help="permutation of y in cycle notation")
        p.add_argument("--degree", type=_positive(1), help="degree for --x/--y")
        p.add_argument("--r", type=_positive(1), help="row length of a grid cover")
        p.add_argument("--sigma", action="append",
                       help="row permutation; give 1, 2 or 4 times")
    if monodromy:
        p.add_argument("--f", default=default_f, help="twist word such as 'Dx Dy^4'")
        p.add_argument("--aut", help="automorphism text (or a file holding it)")
        p.add_argument("--bound", type=_positive(1), default=64,
                       help="largest power tried when lifting")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bundlecover",
                 description="Covers of punctured tori and Betti numbers of mapping tori.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser, required=True)

    cov = sub.add_parser("cover", help="build covers")
    csub = cov.add_subparsers(dest="cover_command", parser_class=_Parser, required=True)
    p = csub.add_parser("grid", help="grid cover from row permutations")
    _common(p, cover=True, dot=True)
    p.add_argument("--n", type=_positive(2), help="cone order to test the fill against")
    p.set_defaults(func=cmd_cover_grid)
    p = csub.add_parser("boundary", help="puncture lifts and unwrapping degrees")
    _common(p, cover=True, dot=True)
    p.add_argument("--n", type=_positive(2), help="cone order to test the fill against")
    p.set_defaults(func=cmd_cover_boundary)

    lift = sub.add_parser("lift", help="lifting of monodromies")
    lsub = lift.add_subparsers(dest="lift_command", parser_class=_Parser, required=True)
    p = lsub.add_parser("check", help="smallest lifting power and all lifts")
    _common(p, cover=True, monodromy=True)
    p.set_defaults(func=cmd_lift_check)

    p = sub.add_parser("betti", help="b1 of the lifted mapping torus, formula and oracle")
    _common(p, cover=True, monodromy=True)
    p.add_argument("--n", type=_positive(2), help="cone order (default: fill with disks)")
    p.add_argument("--lift", help="one sheet map in cycle notation (default: all lifts)")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("case1", help="the 16-sheet grid cover run")
    _common(p, monodromy=True)
    p.add_argument("--n", type=_positive(2), default=2)
    p.set_defaults(func=cmd_case1)

    p = sub.add_parser("case2", help="grid cover from a triangle-group quotient")
    _common(p, monodromy=True)
    p.add_argument("--n", type=_positive(3), default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=_positive(1), default=DEFAULT_CAP)
    p.add_argument("--min-order", type=_positive(1), default=None)
    p.set_defaults(func=cmd_case2)

    p = sub.add_parser("multik", help="several punctures via fiber products")
    _common(p, monodromy=True)
    p.add_argument("--k", type=_positive(2), default=2)
    p.add_argument("--n", type=_positive(2), default=2)
    p.set_defaults(func=cmd_multik)

    p = sub.add_parser("quotient", help="finite (2n, 2n, n) triangle-group quotient")
    _common(p)
    p.add_argument("--n", type=_positive(2), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=_positive(1), default=DEFAULT_CAP)
    p.add_argument("--min-order", type=_positive(1), default=1)
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("reduce", help="fill all cone points but one")
    _common(p, monodromy=True, default_f="id")
    p.add_argument("--cones", required=True, help="cone orders, e.g. '2,3' (1 = filled)")
    p.add_argument("--keep", type=_positive(1), default=1)
    p.add_argument("--downstream", action="store_true",
                   help="also run the single-puncture pipeline on the result")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    _common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"bundlecover: error: {e}", file=sys.stderr)
        return 1
    except COMPUTATION_ERRORS as e:
        print(f"bundlecover: computation failed: {e}", file=sys.stderr)
        return 2
    except CertificateViolation as e:
        print(f"bundlecover: certificate violation: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"bundlecover: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
