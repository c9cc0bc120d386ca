"""Brute-force verification of the cone decomposition identities.

Ground truth comes only from facet inequalities (``<x, u> >= -c`` for
polytopes, ``<x, v> >= 0`` for cones); the decomposition side comes from
generator-basis membership in :mod:`polarization` or from the edge terms in
:mod:`index_engine`.  The two never share a membership routine.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .cone_model import (
    EdgeFrame,
    MomentCone,
    edges,
    example_N,
    orthant,
    suggest_reeb,
    unit_simplex_cone,
    unit_square_cone,
)
from .exact_linalg import dot, nullspace, primitive_vector
from .index_engine import PLUS, localization_terms, multiplicity_lattice
from .lv_engine import LatticeWindow, section_model, vertex_cones
from .polarization import (
    Mode,
    PolarizedCone,
    PolytopeModel,
    dual_polarized_tangent_cone,
    edge_dual_cone,
    find_polarizing,
    is_polarizing,
    lift_cone,
)


@dataclass
class VerificationReport:
    identity: str
    window: LatticeWindow
    points_checked: int = 0
    mismatches: list[dict] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def verdict(self) -> str:
        return "pass" if not self.mismatches else "fail"

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json(self, max_mismatches: int = 50) -> dict:
        return {
            "identity": self.identity,
            "window": self.window.to_json(),
            "points_checked": self.points_checked,
            "mismatches": self.mismatches[:max_mismatches],
            "mismatch_count": len(self.mismatches),
            "elapsed": round(self.elapsed, 6),
            "verdict": self.verdict,
        }


# -- facet-inequality truth ------------------------------------------------

def in_polytope(facets, x) -> bool:
    return all(dot(x, u) + c >= 0 for u, c in facets)


def in_polytope_interior(facets, x) -> bool:
    return all(dot(x, u) + c > 0 for u, c in facets)


def in_cone(normals, x) -> bool:
    return all(dot(x, v) >= 0 for v in normals)


def in_cone_interior(normals, x) -> bool:
    return all(dot(x, v) > 0 for v in normals)


def in_negative_cone(normals, x) -> bool:
    return all(dot(x, v) <= 0 for v in normals)


def in_negative_cone_interior(normals, x) -> bool:
    return all(dot(x, v) < 0 for v in normals)


# -- corpus ----------------------------------------------------------------

def square_model() -> PolytopeModel:
    return PolytopeModel.from_inequalities([(1, 0), (0, 1), (-1, 0), (0, -1)], [0, 0, 1, 1])


def simplex_model() -> PolytopeModel:
    return PolytopeModel.from_inequalities([(1, 0), (0, 1), (-1, -1)], [0, 0, 1])


def _hull(points):
    pts = sorted(set(points))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_from_vertices(vertices) -> PolytopeModel:
    """Convex lattice polygon from the convex hull of integer points."""
    hull = _hull([tuple(int(a) for a in v) for v in vertices])
    if len(hull) < 3:
        raise ValueError("points do not span a polygon")
    normals, offsets = [], []
    for a, b in zip(hull, hull[1:] + hull[:1]):
        u = primitive_vector((a[1] - b[1], b[0] - a[0]))  # inward for counter-clockwise order
        normals.append(u)
        offsets.append(-dot(a, u))
    return PolytopeModel.from_inequalities(normals, offsets)


def random_lattice_polygon(seed: int, lo: int = -3, hi: int = 4) -> PolytopeModel:
    rng = random.Random(seed)
    while True:
        pts = [(rng.randint(lo, hi), rng.randint(lo, hi)) for _ in range(rng.randint(3, 8))]
        if len(_hull(pts)) >= 3:
            return polygon_from_vertices(pts)


def corpus() -> dict[str, MomentCone]:
    """Default cones, each carrying an admissible Reeb vector."""
    cones = {
        "orthant3": orthant(3),
        "orthant4": orthant(4),
        "square": unit_square_cone(),
        "simplex": unit_simplex_cone(),
    }
    for n, k, m in [(2, 1, 0), (2, 2, 1), (2, 3, 2), (3, 1, 0)]:
        c = example_N(n, k, m)
        cones[f"N{2 * n + 1}_{k}_{m}"] = c.with_reeb(suggest_reeb(c))
    return cones


def _flip(k: int, corrupt) -> int:
    return -1 if k in corrupt else 1


# -- verifications ---------------------------------------------------------

def verify_lv(P: PolytopeModel, xi, window: LatticeWindow, dual: bool = False, corrupt_vertices=()) -> VerificationReport:
    """Signed vertex-cone sum against the polytope (or ``(-1)^n`` times its interior).

    ``corrupt_vertices`` flips the sign of those vertex cones (negative controls).
    """
    if P.facets is None:
        raise ValueError("verify_lv needs a polytope given by facet inequalities")
    if not is_polarizing(P, xi):
        raise ValueError(f"{xi} is not polarizing")
    name = "lv_dual" if dual else "lv"
    report = VerificationReport(name, window)
    start = time.perf_counter()
    cones = vertex_cones(P, tuple(xi), dual=dual)
    sign_n = (-1) ** P.dim
    for x in window.points():
        lhs = sum(_flip(i, corrupt_vertices) * k.sign for i, k in enumerate(cones) if k.contains(x))
        rhs = sign_n * in_polytope_interior(P.facets, x) if dual else int(in_polytope(P.facets, x))
        report.points_checked += 1
        if lhs != rhs:
            report.mismatches.append({"point": list(x), "lhs": lhs, "rhs": rhs})
    report.elapsed = time.perf_counter() - start
    return report


def verify_cone_lift(c: MomentCone, xi, window: LatticeWindow, dual: bool = False) -> VerificationReport:
    """Lifted vertex-cone sums against ``1_C + (-1)^n 1_{-C°}`` (dual: ``(-1)^n 1_{C°} + 1_{-C}``)."""
    report = VerificationReport("cone_S_dual" if dual else "cone_S", window)
    start = time.perf_counter()
    cones = vertex_cones(section_model(c), tuple(xi), dual=dual, lifted=True)
    sign_n = (-1) ** c.n
    for x in window.points():
        lhs = sum(k.sign for k in cones if k.contains(x))
        if dual:
            rhs = sign_n * in_cone_interior(c.normals, x) + in_negative_cone(c.normals, x)
        else:
            rhs = in_cone(c.normals, x) + sign_n * in_negative_cone_interior(c.normals, x)
        report.points_checked += 1
        if lhs != rhs:
            report.mismatches.append({"point": list(x), "lhs": lhs, "rhs": int(rhs)})
    report.elapsed = time.perf_counter() - start
    return report


def verify_index_equality(c: MomentCone, window: LatticeWindow, eps_seeds: Sequence[int] = (0, 1, 2),
                          corrupt_edges=()) -> VerificationReport:
    """Edge-localized multiplicities against the lattice formula, for several
    polarizing vectors, plus agreement between the vectors themselves."""
    report = VerificationReport("index_equality", window)
    start = time.perf_counter()
    model = section_model(c)
    term_sets = [localization_terms(c, find_polarizing(model, s)) for s in eps_seeds]
    for x in window.points():
        lat = multiplicity_lattice(c, x)
        first = None
        for seed, terms in zip(eps_seeds, term_sets):
            loc = sum(_flip(k, corrupt_edges) * t.coefficient(x) for k, t in enumerate(terms))
            report.points_checked += 1
            if loc != lat:
                report.mismatches.append({"point": list(x), "lhs": loc, "rhs": lat, "seed": seed})
            if first is None:
                first = loc
            elif loc != first:
                report.mismatches.append({"point": list(x), "lhs": loc, "rhs": first, "seed": seed,
                                          "cross_seed": True})
    report.elapsed = time.perf_counter() - start
    return report


def shift_by_first_normal(frame: EdgeFrame):
    """Alternative completion ``v_0 + v_1`` (determinant unchanged)."""
    return tuple(a + b for a, b in zip(frame.completion, frame.normals[0]))


def _frame_cone(frame: EdgeFrame, signs) -> PolarizedCone:
    gens = [(w, Mode.POSITIVE if s == PLUS else Mode.NONPOSITIVE) for w, s in zip(frame.weights, signs)]
    gens.append((frame.mu, Mode.FREE))
    return PolarizedCone((0,) * len(frame.mu), tuple(gens), (-1) ** list(signs).count(PLUS))


def verify_completion_independence(c: MomentCone, window: LatticeWindow,
                                   alt_completion_rule: Callable[[EdgeFrame], Sequence[int]] = shift_by_first_normal,
                                   eps=None) -> VerificationReport:
    """Localized multiplicities computed in the dual-basis coordinates of two
    different completions ``v_0`` must agree with each other and with the
    completion-free edge terms."""
    report = VerificationReport("completion_independence", window)
    start = time.perf_counter()
    if eps is None:
        eps = find_polarizing(section_model(c), 0)
    terms = localization_terms(c, eps)
    cones_a = [_frame_cone(t.edge, t.signs) for t in terms]
    cones_b = [_frame_cone(t.edge.with_completion(alt_completion_rule(t.edge)), t.signs) for t in terms]
    for x in window.points():
        a = sum(k.sign for k in cones_a if k.contains(x))
        b = sum(k.sign for k in cones_b if k.contains(x))
        direct = sum(t.coefficient(x) for t in terms)
        report.points_checked += 1
        if not a == b == direct:
            report.mismatches.append({"point": list(x), "lhs": a, "rhs": b, "terms": direct})
    report.elapsed = time.perf_counter() - start
    return report


def wall_vectors(P: PolytopeModel, wall: int):
    """Polarizing-vector triple (below, on, above) around wall ``wall``."""
    walls = P.walls()
    if not isinstance(wall, int) or not 0 <= wall < len(walls):
        raise IndexError(f"wall index {wall!r} out of range (polytope has {len(walls)} walls)")
    d = walls[wall]
    others = [w for ws in P.edge_vectors for w in ws if primitive_vector(w) not in (d, tuple(-a for a in d))]
    kernel = nullspace([d])
    for t in itertools.count(1):
        xi0 = tuple(sum(t**k * b[i] for k, b in enumerate(kernel)) for i in range(len(d)))
        if all(dot(w, xi0) != 0 for w in others):
            break
    bounds = [Fraction(abs(dot(w, xi0)), abs(dot(w, d))) for w in others if dot(w, d) != 0]
    delta = min(bounds) / 2 if bounds else Fraction(1)
    below = tuple(a - delta * b for a, b in zip(xi0, d))
    above = tuple(a + delta * b for a, b in zip(xi0, d))
    return below, xi0, above


def verify_wall_crossing(P: PolytopeModel, wall: int, window: LatticeWindow, lifted: bool = False) -> VerificationReport:
    """Dual vertex-cone sums just below, on and just above one wall.

    The on-wall value replaces each vertex cone at an edge perpendicular to the
    wall by ``(edge cone) - (cone above the wall)`` with the sign from below; it
    equals the below value iff the two vertex cones tile the edge cone, and the
    above value iff the edge cone does not depend on the endpoint it is built at.
    """
    below_xi, on_xi, above_xi = wall_vectors(P, wall)
    report = VerificationReport(f"wall_crossing[{wall}]", window)
    start = time.perf_counter()

    def lift(k, p):
        return lift_cone(k, P.lifts[p]) if lifted else k

    below = [lift(dual_polarized_tangent_cone(P, p, below_xi), p) for p in range(len(P.vertices))]
    above = [lift(dual_polarized_tangent_cone(P, p, above_xi), p) for p in range(len(P.vertices))]
    edge_at = {}
    for p, q in P.edges():
        if dot(P.edge_vector(p, q), on_xi) == 0:
            edge_at[p] = lift(edge_dual_cone(P, (p, q), on_xi), p)
            edge_at[q] = lift(edge_dual_cone(P, (q, p), on_xi), q)
    for x in window.points():
        lo = sum(k.sign for k in below if k.contains(x))
        hi = sum(k.sign for k in above if k.contains(x))
        on = 0
        for p, k in enumerate(below):
            if p in edge_at:
                on += k.sign * (int(edge_at[p].contains(x)) - int(above[p].contains(x)))
            elif k.contains(x):
                on += k.sign
        report.points_checked += 1
        if not lo == on == hi:
            report.mismatches.append({"point": list(x), "lhs": lo, "rhs": hi, "on": on})
    report.elapsed = time.perf_counter() - start
    return report
