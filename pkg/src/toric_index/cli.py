"""``toric-index`` command line.

Exit codes: 0 success, 1 mathematical failure, 2 bad input, 3 window over the point cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .cone_model import (
    ConeError,
    MomentCone,
    cone_over_polytope,
    edges,
    example_N,
    is_good,
    is_reeb_admissible,
    orthant,
    suggest_reeb,
)
from .exact_linalg import LinAlgError
from .index_engine import PolarizingError, index_window, localization_terms
from .lv_engine import LatticeWindow, WindowTooLarge, section_model
from .oracle import verify_completion_independence, verify_cone_lift, verify_index_equality, verify_wall_crossing
from .polarization import PolarizationError, find_polarizing

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return [str(obj.numerator), str(obj.denominator)]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, ensure_ascii=False) + "\n"


def _emit(obj, out=None):
    (out or sys.stdout).write(dumps(obj))


def _rational(x) -> Fraction:
    if isinstance(x, bool):
        raise InputError(f"not a number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, list) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise InputError(f"cannot read {x!r} as an exact rational")


def _vector_out(v):
    """Integer vectors stay plain; anything fractional becomes string pairs."""
    v = [Fraction(x) for x in v]
    if all(x.denominator == 1 for x in v):
        return [int(x) for x in v]
    return [[str(x.numerator), str(x.denominator)] for x in v]


def read_spec(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("cone spec must be a JSON object")
    for key in ("dim", "normals"):
        if key not in data:
            raise InputError(f'cone spec is missing "{key}"')
    return data


def parse_cone(data: dict, with_reeb: bool = True) -> MomentCone:
    dim, normals = data["dim"], data["normals"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise InputError('"dim" must be an integer')
    if not isinstance(normals, list) or not all(isinstance(v, list) for v in normals):
        raise InputError('"normals" must be a list of integer lists')
    for v in normals:
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
            raise InputError(f"normal {v} is not an integer vector")
    reeb = None
    if with_reeb and data.get("reeb") is not None:
        try:
            reeb = tuple(_rational(x) for x in data["reeb"])
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise InputError(f"bad Reeb vector: {exc}") from exc
    try:
        return MomentCone(dim, tuple(tuple(v) for v in normals), reeb)
    except (ConeError, LinAlgError) as exc:
        raise InputError(str(exc)) from exc


def load_cone(path, with_reeb: bool = True) -> MomentCone:
    return parse_cone(read_spec(path), with_reeb)


def _require_reeb(c: MomentCone):
    if c.reeb is None:
        hint = ""
        try:
            hint = f' (for example "reeb": {_vector_out(suggest_reeb(c))})'
        except (ConeError, LinAlgError):
            pass
        raise InputError(f'this command needs a Reeb vector; add a "reeb" entry to the cone spec{hint}')


def _window(c: MomentCone, box) -> LatticeWindow:
    lo, hi = box
    if lo > hi:
        raise InputError(f"empty box [{lo}, {hi}]")
    w = LatticeWindow.cube(c.dim, lo, hi)
    w.check_cap()
    return w


# -- commands --------------------------------------------------------------

def cmd_check(args) -> int:
    data = read_spec(args.path)
    cone = parse_cone(data, with_reeb=False)
    report = is_good(cone)
    out = report.to_json()
    if data.get("reeb") is not None:
        try:
            reeb = tuple(_rational(x) for x in data["reeb"])
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise InputError(f"bad Reeb vector: {exc}") from exc
        if len(reeb) != cone.dim:
            raise InputError("Reeb vector has the wrong dimension")
        ok, cert = is_reeb_admissible(cone, reeb) if report.strictly_convex else (False, None)
        out["reeb_admissible"] = ok
        out["reeb_certificate"] = list(cert) if cert is not None else None
    _emit(out)
    return EXIT_OK if report.good else EXIT_FAIL


def _frame_row(k, fr) -> dict:
    return {
        "edge": k,
        "facets": list(fr.facet_indices),
        "mu": list(fr.mu),
        "weights": [list(w) for w in fr.weights],
        "v0": list(fr.completion),
        "reeb_pairing": fr.reeb_pairing,
    }


def cmd_edges(args) -> int:
    cone = load_cone(args.path)
    _require_reeb(cone)
    try:
        rows = [_frame_row(k, fr) for k, fr in enumerate(edges(cone))]
    except ConeError as exc:
        raise InputError(str(exc)) from exc
    if args.json:
        _emit({"edges": rows})
        return EXIT_OK
    print("edge  facets        mu              v0              weights")
    for r in rows:
        print(f"{r['edge']:<5} {str(r['facets']):<13} {str(r['mu']):<15} {str(r['v0']):<15} {r['weights']}")
    return EXIT_OK


def read_twist(path, dim: int) -> dict:
    """Twist file: ``{"weights": [[lambda, mult], ...], "edges": {"<k>": [[lambda, mult], ...]}}``.

    ``weights`` applies to every edge; ``edges`` overrides individual edges.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read twist file {path}: {exc}") from exc

    def pairs(raw):
        try:
            out = [(tuple(int(a) for a in lam), int(m)) for lam, m in raw]
        except (TypeError, ValueError) as exc:
            raise InputError(f"twist entries must be [weight, multiplicity] pairs: {exc}") from exc
        if any(len(lam) != dim for lam, _ in out):
            raise InputError(f"twist weights must have length {dim}")
        return out

    if not isinstance(data, dict) or not ("weights" in data or "edges" in data):
        raise InputError('twist file needs "weights" and/or "edges"')
    return {
        "default": pairs(data["weights"]) if "weights" in data else None,
        "edges": {int(k): pairs(v) for k, v in data.get("edges", {}).items()},
    }


def cmd_index(args) -> int:
    cone = load_cone(args.path)
    _require_reeb(cone)
    w = _window(cone, args.box)
    try:
        eps = find_polarizing(section_model(cone), args.eps_seed)
    except (ConeError, PolarizationError) as exc:
        raise InputError(str(exc)) from exc
    terms = None
    if args.twist:
        if args.method == "both":
            raise InputError("twisted indices have no lattice counterpart; use --method localized")
        tw = read_twist(args.twist, cone.dim)
        terms = localization_terms(cone, eps)
        for k in tw["edges"]:
            if not 0 <= k < len(terms):
                raise InputError(f"twist names edge {k}, but the cone has {len(terms)} edges")
        terms = [
            t.with_twist(tw["edges"][k]) if k in tw["edges"] else t.with_twist(tw["default"]) if tw["default"] else t
            for k, t in enumerate(terms)
        ]
    result = index_window(cone, eps, w, args.method, terms=terms)
    out = result.to_json()
    out["eps"] = list(eps)
    out["method"] = args.method
    _emit(out)
    if args.method == "both":
        return EXIT_OK if result.equal else EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    data = read_spec(args.path)
    cone = parse_cone(data)
    _require_reeb(cone)
    if args.seeds < 1:
        raise InputError("--seeds must be at least 1")
    w = _window(cone, args.box)
    corrupt = tuple(data.get("corrupt_edges", ()))
    report = is_good(cone)
    if not report.good:
        _emit({"good": report.to_json(), "reports": [], "verdict": "fail"})
        return EXIT_FAIL
    seeds = list(range(args.seeds))
    model = section_model(cone)
    eps = find_polarizing(model, 0)
    reports = [
        verify_index_equality(cone, w, seeds, corrupt_edges=corrupt),
        verify_completion_independence(cone, w),
        verify_cone_lift(cone, eps, w),
        verify_cone_lift(cone, eps, w, dual=True),
    ]
    reports += [verify_wall_crossing(model, j, w, lifted=True) for j in range(len(model.walls()))]
    ok = all(r.passed for r in reports)
    _emit({"reports": [r.to_json() for r in reports], "verdict": "pass" if ok else "fail"})
    return EXIT_OK if ok else EXIT_FAIL


def cone_spec(c: MomentCone) -> dict:
    out = {"dim": c.dim, "normals": [list(v) for v in c.normals]}
    if c.reeb is not None:
        out["reeb"] = _vector_out(c.reeb)
    return out


def cmd_example(args) -> int:
    try:
        if args.family == "orthant":
            cone = orthant(args.dim)
        elif args.family == "delzant":
            if args.size < 1:
                raise InputError("--size must be positive")
            s = args.size
            if args.polytope == "square":
                cone = cone_over_polytope([(1, 0), (0, 1), (-1, 0), (0, -1)], [0, 0, s, s])
            else:
                cone = cone_over_polytope([(1, 0), (0, 1), (-1, -1)], [0, 0, s])
        else:
            cone = example_N(args.n, args.k, args.m)
            cone = cone.with_reeb(suggest_reeb(cone))
    except ConeError as exc:
        raise InputError(str(exc)) from exc
    _emit(cone_spec(cone))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-index", description="Exact equivariant index tools for good moment cones.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check the good-cone axioms")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("edges", help="list edge frames")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_edges)

    p = sub.add_parser("index", help="windowed index multiplicities")
    p.add_argument("path")
    p.add_argument("--box", nargs=2, type=int, metavar=("A", "B"), default=(-3, 3))
    p.add_argument("--eps-seed", type=int, default=0)
    p.add_argument("--method", choices=("both", "localized", "lattice"), default="both")
    p.add_argument("--twist", metavar="FILE")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("verify", help="run the brute-force oracle checks")
    p.add_argument("path")
    p.add_argument("--box", nargs=2, type=int, metavar=("A", "B"), default=(-3, 3))
    p.add_argument("--seeds", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example", help="print a cone spec")
    fam = p.add_subparsers(dest="family", required=True)
    q = fam.add_parser("orthant")
    q.add_argument("--dim", type=int, default=3)
    q = fam.add_parser("delzant")
    q.add_argument("--polytope", choices=("square", "simplex"), default="square")
    q.add_argument("--size", type=int, default=1)
    q = fam.add_parser("N")
    q.add_argument("--n", type=int, default=2)
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--m", type=int, default=0)
    p.set_defaults(func=cmd_example)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except WindowTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConeError, PolarizingError, PolarizationError, LinAlgError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
