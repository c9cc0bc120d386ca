"""Moment cones of toric contact manifolds and their combinatorics.

A cone is stored by its inward primitive facet normals ``v_1..v_d`` in
``Z^{n+1}``; points ``y`` of the cone satisfy ``<y, v_j> >= 0`` for all ``j``.
Covectors (points of the cone, weights) and vectors (normals, Reeb vector) are
both plain tuples paired by the standard dot product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact_linalg import (
    IntVec,
    LinAlgError,
    RatVec,
    complete_to_unimodular,
    determinant,
    dot,
    dual_basis,
    is_primitive,
    nonnegative_combination,
    nullspace,
    primitive_vector,
    rank,
    rational_dual_basis,
    smith_divisors,
)


class ConeError(ValueError):
    pass


def _as_int_vec(v) -> IntVec:
    out = []
    for x in v:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ConeError(f"expected an integer vector, got {v!r}")
            x = x.numerator
        if isinstance(x, bool) or int(x) != x:
            raise ConeError(f"expected an integer vector, got {v!r}")
        out.append(int(x))
    return tuple(out)


@dataclass(frozen=True)
class MomentCone:
    dim: int
    normals: tuple[IntVec, ...]
    reeb: Optional[RatVec] = None

    def __post_init__(self):
        normals = tuple(_as_int_vec(v) for v in self.normals)
        object.__setattr__(self, "normals", normals)
        if self.dim < 1:
            raise ConeError("ambient dimension must be positive")
        if not normals:
            raise ConeError("a cone needs at least one facet normal")
        for v in normals:
            if len(v) != self.dim:
                raise ConeError(f"normal {v} does not live in dimension {self.dim}")
            if not any(v):
                raise ConeError("zero facet normal")
            if not is_primitive(v):
                raise ConeError(f"normal {v} is not primitive")
        for a, b in itertools.combinations(normals, 2):
            if a == b or a == tuple(-x for x in b):
                raise ConeError(f"normals {a} and {b} are parallel")
        if self.reeb is not None:
            reeb = tuple(Fraction(x) for x in self.reeb)
            if len(reeb) != self.dim:
                raise ConeError("Reeb vector has the wrong dimension")
            object.__setattr__(self, "reeb", reeb)
            if not strictly_convex(self):
                raise ConeError("a Reeb vector needs a strictly convex cone")
            ok, _ = is_reeb_admissible(self, reeb)
            if not ok:
                raise ConeError(f"Reeb vector {_fmt(reeb)} is not a positive combination of the normals")

    @property
    def n(self) -> int:
        """Half the contact-distribution rank: ambient dimension minus one."""
        return self.dim - 1

    def with_reeb(self, reeb) -> "MomentCone":
        return MomentCone(self.dim, self.normals, tuple(Fraction(x) for x in reeb))

    def pairings(self, y) -> tuple:
        return tuple(dot(y, v) for v in self.normals)


def _fmt(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def strictly_convex(c: MomentCone) -> bool:
    """The cone contains no line, i.e. its normals span the ambient space."""
    return rank(c.normals) == c.dim


def _require_strictly_convex(c: MomentCone):
    if not strictly_convex(c):
        raise ConeError("cone is not strictly convex (normals do not span)")


def rays(c: MomentCone) -> list[tuple[IntVec, tuple[int, ...]]]:
    """Primitive generators of the 1-dimensional faces with their incident facets.

    Candidates are kernels of every rank-n subset of normals; a candidate is a ray
    when it (or its negative) pairs nonnegatively with every normal.
    """
    _require_strictly_convex(c)
    found: dict[IntVec, tuple[int, ...]] = {}
    for subset in itertools.combinations(range(len(c.normals)), c.dim - 1):
        sub = [c.normals[i] for i in subset]
        if rank(sub) != c.dim - 1:
            continue
        (k,) = nullspace(sub)
        prs = c.pairings(k)
        if all(p >= 0 for p in prs):
            r = k
        elif all(p <= 0 for p in prs):
            r = tuple(-x for x in k)
        else:
            continue
        if r not in found:
            found[r] = tuple(j for j, v in enumerate(c.normals) if dot(r, v) == 0)
    return sorted(found.items(), key=lambda item: item[1])


def is_full_dimensional(c: MomentCone) -> bool:
    """Strictly convex cone with nonempty interior (its rays span)."""
    if not strictly_convex(c):
        return False
    rs = [r for r, _ in rays(c)]
    return bool(rs) and rank(rs) == c.dim


def faces(c: MomentCone) -> list[tuple[tuple[int, ...], int]]:
    """All nonempty proper faces except the apex, as (facet index set, dimension).

    Faces of a pointed cone are spanned by subsets of its rays, so the closed facet
    sets are the intersections of ray incidence sets.  Sorted by (dimension, set).
    """
    ray_list = rays(c)
    sets = {frozenset(z) for _, z in ray_list}
    frontier = set(sets)
    while frontier:
        new = set()
        for a in frontier:
            for b in sets:
                s = a & b
                if s and s not in sets:
                    new.add(s)
        sets |= new
        frontier = new
    out = []
    for s in sets:
        members = [r for r, z in ray_list if s <= set(z)]
        d = rank(members)
        if d + rank([c.normals[j] for j in s]) != c.dim:
            raise ConeError(f"face {sorted(s)} fails the dimension count")
        out.append((tuple(sorted(s)), d))
    out.sort(key=lambda f: (f[1], f[0]))
    return out


@dataclass
class GoodnessReport:
    strictly_convex: bool
    full_dimensional: bool
    primitive: bool
    minimal: bool
    redundant_normals: list[int] = field(default_factory=list)
    face_count_ok: bool = True
    face_count_failures: list[dict] = field(default_factory=list)
    unimodular_ok: bool = True
    divisor_failures: list[dict] = field(default_factory=list)

    @property
    def good(self) -> bool:
        return (
            self.strictly_convex
            and self.full_dimensional
            and self.primitive
            and self.minimal
            and self.face_count_ok
            and self.unimodular_ok
        )

    def to_json(self) -> dict:
        return {
            "good": self.good,
            "axioms": {
                "strictly_convex": self.strictly_convex and self.full_dimensional,
                "primitive_minimal": self.primitive and self.minimal,
                "faces_on_exactly_k_facets": self.face_count_ok,
                "faces_extend_to_basis": self.unimodular_ok,
            },
            "redundant_normals": self.redundant_normals,
            "face_count_failures": self.face_count_failures,
            "divisor_failures": self.divisor_failures,
        }


def is_good(c: MomentCone) -> GoodnessReport:
    """Check the good-cone axioms; failures are recorded, never raised.

    In ambient dimension 2 the apex is the only vertex and is checked too.
    """
    sc = strictly_convex(c)
    report = GoodnessReport(
        strictly_convex=sc,
        full_dimensional=sc and is_full_dimensional(c),
        primitive=all(is_primitive(v) for v in c.normals),
        minimal=True,
    )
    for j, v in enumerate(c.normals):
        others = [w for i, w in enumerate(c.normals) if i != j]
        if others and nonnegative_combination(others, v) is not None:
            report.redundant_normals.append(j)
    report.minimal = not report.redundant_normals
    if not report.full_dimensional:
        report.face_count_ok = report.unimodular_ok = False
        return report

    checked = [(s, d) for s, d in faces(c) if 1 <= c.dim - d <= c.n]
    if c.dim == 2:
        checked.append((tuple(range(len(c.normals))), 0))
    for s, d in checked:
        codim = c.dim - d
        if len(s) != codim:
            report.face_count_ok = False
            report.face_count_failures.append({"facets": list(s), "codim": codim})
        divs = smith_divisors([c.normals[j] for j in s])
        if any(x != 1 for x in divs):
            report.unimodular_ok = False
            report.divisor_failures.append(
                {"facets": list(s), "codim": codim, "divisors": divs,
                 "divisor": next(x for x in divs if x != 1)}
            )
    return report


def is_reeb_admissible(c: MomentCone, r) -> tuple[bool, Optional[RatVec]]:
    """Is ``r`` a strictly positive combination of the normals?

    Returns ``(True, a)`` with a certificate ``a`` (all entries > 0) or
    ``(False, None)``.  The certificate maximises its smallest entry: that
    maximum is ``min over rays of <ray, r> / <ray, sum of normals>``.
    """
    _require_strictly_convex(c)
    r = tuple(Fraction(x) for x in r)
    ray_list = [g for g, _ in rays(c)]
    if not ray_list:
        return False, None
    total = tuple(sum(col) for col in zip(*c.normals))
    shift = None
    for g in ray_list:
        rr, tt = dot(g, r), dot(g, total)
        if rr <= 0 or tt <= 0:
            return False, None
        q = Fraction(rr, 1) / tt
        shift = q if shift is None or q < shift else shift
    rest = tuple(x - shift * t for x, t in zip(r, total))
    b = nonnegative_combination(c.normals, rest)
    if b is None:
        return False, None
    return True, tuple(x + shift for x in b)


def suggest_reeb(c: MomentCone) -> IntVec:
    """Last coordinate vector if admissible, otherwise the primitive sum of normals."""
    e_last = tuple(int(i == c.dim - 1) for i in range(c.dim))
    if is_reeb_admissible(c, e_last)[0]:
        return e_last
    return primitive_vector([sum(col) for col in zip(*c.normals)])


@dataclass(frozen=True)
class EdgeFrame:
    """Lattice frame attached to an edge of a good cone.

    ``(completion, *normals)`` is a Z-basis with determinant +1 and
    ``(mu, *weights)`` is its dual basis; ``mu`` generates the edge ray.
    """

    facet_indices: tuple[int, ...]
    normals: tuple[IntVec, ...]
    completion: IntVec
    mu: IntVec
    weights: tuple[IntVec, ...]
    reeb_pairing: Fraction
    reeb: RatVec

    def __post_init__(self):
        basis = [self.completion, *self.normals]
        if determinant(basis) != 1:
            raise ConeError(f"edge frame basis has determinant {determinant(basis)}, expected +1")
        duals = [self.mu, *self.weights]
        for i, d in enumerate(duals):
            for j, b in enumerate(basis):
                if dot(d, b) != int(i == j):
                    raise ConeError("edge frame covectors are not dual to the basis")
        if self.reeb_pairing <= 0 or dot(self.mu, self.reeb) != self.reeb_pairing:
            raise ConeError("edge generator must pair positively with the Reeb vector")

    @classmethod
    def build(cls, facet_indices, normals, completion, reeb) -> "EdgeFrame":
        normals = tuple(tuple(v) for v in normals)
        completion = tuple(completion)
        mu, *weights = dual_basis([completion, *normals])
        reeb = tuple(Fraction(x) for x in reeb)
        return cls(tuple(facet_indices), normals, completion, mu, tuple(weights), dot(mu, reeb), reeb)

    @property
    def n(self) -> int:
        return len(self.normals)

    def with_completion(self, completion) -> "EdgeFrame":
        return EdgeFrame.build(self.facet_indices, self.normals, completion, self.reeb)

    def section_directions(self) -> list[RatVec]:
        """Dual basis of ``(R, v_1..v_n)`` minus its first element: the edge
        directions of the section polytope at this vertex, unscaled."""
        return rational_dual_basis([self.reeb, *self.normals])[1:]


def edges(c: MomentCone) -> list[EdgeFrame]:
    """One frame per edge of a good cone with a Reeb vector.

    The facet order is ascending, except that the first two normals are swapped
    when that is needed for ``det(v_0, v_1..v_n) = +1`` with the edge generator
    oriented into the cone.
    """
    if c.reeb is None:
        raise ConeError("edges need a Reeb vector")
    if c.dim < 3:
        raise ConeError("edge frames need ambient dimension at least 3")
    report = is_good(c)
    if not report.good:
        raise ConeError(f"cone is not good: {report.to_json()}")
    frames = []
    for ray, facets in rays(c):
        facets = list(facets)
        normals = [c.normals[j] for j in facets]
        (v0,) = complete_to_unimodular(normals)
        mu = dual_basis([v0, *normals])[0]
        if mu != ray:
            # mu = -ray: flip v0 and restore det +1 by swapping two normals
            v0 = tuple(-x for x in v0)
            facets[0], facets[1] = facets[1], facets[0]
            normals[0], normals[1] = normals[1], normals[0]
        frames.append(EdgeFrame.build(facets, normals, v0, c.reeb))
    return frames


@dataclass(frozen=True)
class SectionPolytope:
    vertices: tuple[RatVec, ...]
    vertex_edges: tuple[tuple[IntVec, ...], ...]
    frames: tuple[EdgeFrame, ...]

    def __post_init__(self):
        for p, dirs, fr in zip(self.vertices, self.vertex_edges, self.frames):
            if dot(p, fr.reeb) != 1:
                raise ConeError("section vertex off the characteristic hyperplane")
            if len(dirs) != fr.n or any(dot(d, fr.reeb) != 0 for d in dirs):
                raise ConeError("section edge directions must pair to zero with R")

    def vertex_to_edge(self, i: int) -> EdgeFrame:
        return self.frames[i]


def cross_section(c: MomentCone) -> SectionPolytope:
    """Intersection of the cone with the hyperplane ``<y, R> = 1``."""
    frames = edges(c)
    vertices = tuple(tuple(Fraction(x) / fr.reeb_pairing for x in fr.mu) for fr in frames)
    dirs = tuple(tuple(primitive_vector(d) for d in fr.section_directions()) for fr in frames)
    return SectionPolytope(vertices, dirs, tuple(frames))


def orthant(dim: int) -> MomentCone:
    """Positive orthant with Reeb vector (1, ..., 1)."""
    if dim < 2:
        raise ConeError("orthant needs dimension >= 2")
    return MomentCone(dim, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)), (1,) * dim)


def cone_over_polytope(normals: Sequence[Sequence[int]], offsets: Sequence[int], reeb=None) -> MomentCone:
    """Cone over the polytope ``{x : <x, u_j> >= -c_j}`` placed at height 1.

    Lifted normals are ``(u_j, c_j)``; the default Reeb vector is ``(0, .., 0, 1)``.
    """
    if not normals:
        raise ConeError("polytope needs facets")
    n = len(normals[0])
    if n < 2:
        raise ConeError("polytope dimension must be at least 2")
    if len(offsets) != len(normals):
        raise ConeError("one offset per facet normal")
    lifted = []
    for u, off in zip(normals, offsets):
        v = tuple(int(x) for x in u) + (int(off),)
        if len(v) != n + 1:
            raise ConeError("facet normals of unequal dimension")
        if not any(v) or not is_primitive(v):
            raise ConeError(f"lifted normal {v} is not primitive")
        lifted.append(v)
    if reeb is None:
        reeb = (0,) * n + (1,)
    return MomentCone(n + 1, tuple(lifted), tuple(reeb))


def unit_square_cone() -> MomentCone:
    return cone_over_polytope([(1, 0), (0, 1), (-1, 0), (0, -1)], [0, 0, 1, 1])


def unit_simplex_cone() -> MomentCone:
    return cone_over_polytope([(1, 0), (0, 1), (-1, -1)], [0, 0, 1])


def example_N(n: int, k: int, m: int) -> MomentCone:
    """The cones C(k, m) in dimension n+1 (Reeb vector left unset).

    v_i = e_i + e_{n+1} (i < n), v_n = -(e_1 + .. + e_{n-1}) + m e_n + e_{n+1},
    v_- = k e_n + e_{n+1}, v_+ = -e_n + e_{n+1}.
    """
    if n < 2:
        raise ConeError("n must be at least 2")
    if k < 1:
        raise ConeError("k must be at least 1")
    if not 0 <= m < k * n:
        raise ConeError(f"need 0 <= m < k*n = {k * n}, got m = {m}")

    def e(i):
        return [int(j == i - 1) for j in range(n + 1)]

    def add(*vs):
        return tuple(sum(col) for col in zip(*vs))

    def scale(a, v):
        return [a * x for x in v]

    normals = [add(e(i), e(n + 1)) for i in range(1, n)]
    normals.append(add(*[scale(-1, e(i)) for i in range(1, n)], scale(m, e(n)), e(n + 1)))
    normals.append(add(scale(k, e(n)), e(n + 1)))
    normals.append(add(scale(-1, e(n)), e(n + 1)))
    cone = MomentCone(n + 1, tuple(normals))
    report = is_good(cone)
    if not report.good:
        raise ConeError(f"C(k={k}, m={m}) in dimension {n + 1} is not good: {report.to_json()}")
    return cone
