"""Polarizing vectors and half-open polarized tangent cones.

A ``PolarizedCone`` is ``apex + sum_i c_i * g_i`` where each coefficient ``c_i``
obeys the mode of its generator: strictly positive, nonpositive, or free.
Boundary behaviour is exact; there is no perturbation anywhere.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .cone_model import MomentCone, cross_section
from .exact_linalg import (
    IntVec,
    LinAlgError,
    RatVec,
    dot,
    primitive_vector,
    rank,
    rational_dual_basis,
    solve_rational,
)


class PolarizationError(ValueError):
    pass


class Mode(enum.Enum):
    POSITIVE = "positive"  # coefficient > 0
    NONPOSITIVE = "nonpositive"  # coefficient <= 0
    FREE = "free"

    def admits(self, c: Fraction) -> bool:
        if self is Mode.POSITIVE:
            return c > 0
        if self is Mode.NONPOSITIVE:
            return c <= 0
        return True


def _rat(v) -> RatVec:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class PolarizedCone:
    apex: RatVec
    generators: tuple[tuple[RatVec, Mode], ...]
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "apex", _rat(self.apex))
        gens = tuple((_rat(d), Mode(m)) for d, m in self.generators)
        object.__setattr__(self, "generators", gens)
        if self.sign not in (1, -1):
            raise PolarizationError("sign must be +1 or -1")
        if any(len(d) != len(self.apex) for d, _ in gens):
            raise PolarizationError("generator dimension mismatch")
        if gens and rank([d for d, _ in gens]) != len(gens):
            raise PolarizationError("generators must be linearly independent")

    @property
    def ambient_dim(self) -> int:
        return len(self.apex)

    @cached_property
    def _coordinates(self):
        # Complete the generators to a basis with coordinate vectors; the extra
        # coordinates of x - apex must vanish for membership.
        basis = [d for d, _ in self.generators]
        for i in range(self.ambient_dim):
            if len(basis) == self.ambient_dim:
                break
            e = tuple(Fraction(int(i == j)) for j in range(self.ambient_dim))
            if rank(basis + [e]) > len(basis):
                basis.append(e)
        return rational_dual_basis(basis)

    def coefficients(self, x) -> Optional[RatVec]:
        """Coefficients of ``x - apex`` in the generators, None if outside their span."""
        if len(x) != self.ambient_dim:
            raise PolarizationError("point dimension mismatch")
        diff = [Fraction(a) - b for a, b in zip(x, self.apex)]
        coords = [dot(d, diff) for d in self._coordinates]
        k = len(self.generators)
        if any(coords[k:]):
            return None
        return tuple(coords[:k])

    def contains(self, x) -> bool:
        coeffs = self.coefficients(x)
        if coeffs is None:
            return False
        return all(m.admits(c) for (_, m), c in zip(self.generators, coeffs))


def contains(k: PolarizedCone, x) -> bool:
    return k.contains(x)


@dataclass(frozen=True)
class PolytopeModel:
    """Simple polytope described at its vertices.

    ``edge_vectors[p][i]`` is the edge direction at vertex ``p`` leaving facet
    ``facet_sets[p][i]`` and ``neighbors[p][i]`` is the vertex at its other end.
    ``lifts`` (cross sections only) holds the primitive edge generator of the cone
    through each vertex; ``facets`` (H-described polytopes only) holds the
    inequalities ``<x, u> >= -c`` as ``(u, c)`` pairs.
    """

    vertices: tuple[RatVec, ...]
    facet_sets: tuple[tuple[int, ...], ...]
    edge_vectors: tuple[tuple[IntVec, ...], ...]
    neighbors: tuple[tuple[int, ...], ...]
    lifts: Optional[tuple[IntVec, ...]] = None
    facets: Optional[tuple[tuple[IntVec, int], ...]] = None

    def __post_init__(self):
        n = self.dim
        for p, ws in enumerate(self.edge_vectors):
            if len(ws) != n or len(self.neighbors[p]) != n:
                raise PolarizationError(f"vertex {p} does not have exactly {n} edges")
            for w, q in zip(ws, self.neighbors[p]):
                back = [u for u in self.edge_vectors[q] if primitive_vector(u) == tuple(-x for x in primitive_vector(w))]
                if len(back) != 1:
                    raise PolarizationError(f"edge {p}->{q} is not shared with its neighbour")

    @property
    def dim(self) -> int:
        return len(self.edge_vectors[0]) if self.edge_vectors else 0

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def simple(self) -> bool:
        return True  # enforced at construction

    def edges(self) -> list[tuple[int, int]]:
        return sorted({tuple(sorted((p, q))) for p, qs in enumerate(self.neighbors) for q in qs})

    def edge_vector(self, p: int, q: int) -> IntVec:
        try:
            return self.edge_vectors[p][self.neighbors[p].index(q)]
        except ValueError:
            raise PolarizationError(f"vertices {p} and {q} are not adjacent") from None

    def walls(self) -> list[IntVec]:
        """Distinct edge directions up to sign; wall j is ``{xi : <w_j, xi> = 0}``."""
        out = set()
        for ws in self.edge_vectors:
            for w in ws:
                w = primitive_vector(w)
                out.add(max(w, tuple(-x for x in w)))
        return sorted(out)

    @classmethod
    def from_inequalities(cls, normals: Sequence[Sequence[int]], offsets: Sequence[int]) -> "PolytopeModel":
        """Bounded simple polytope ``{x : <x, u_j> >= -c_j}``."""
        normals = [tuple(int(a) for a in u) for u in normals]
        offsets = [int(c) for c in offsets]
        n = len(normals[0])
        slack = lambda x, j: dot(x, normals[j]) + offsets[j]  # noqa: E731
        found: dict[RatVec, tuple[int, ...]] = {}
        for subset in itertools.combinations(range(len(normals)), n):
            try:
                x = solve_rational([normals[j] for j in subset], [-offsets[j] for j in subset])
            except LinAlgError:
                continue
            if all(slack(x, j) >= 0 for j in range(len(normals))):
                found[x] = tuple(j for j in range(len(normals)) if slack(x, j) == 0)
        if not found:
            raise PolarizationError("polytope is empty or unbounded")
        vertices = sorted(found)
        tight = [found[v] for v in vertices]
        for v, t in zip(vertices, tight):
            if len(t) != n:
                raise PolarizationError(f"vertex {v} lies on {len(t)} facets; polytope is not simple")
        index = {v: i for i, v in enumerate(vertices)}
        edge_vectors, neighbors = [], []
        for v, t in zip(vertices, tight):
            duals = rational_dual_basis([normals[j] for j in t])
            ws, qs = [], []
            for i, d in enumerate(duals):
                steps = [
                    slack(v, j) / -dot(d, normals[j])
                    for j in range(len(normals))
                    if j not in t and dot(d, normals[j]) < 0
                ]
                if not steps:
                    raise PolarizationError("polytope is unbounded")
                q = tuple(a + min(steps) * b for a, b in zip(v, d))
                ws.append(primitive_vector(d))
                qs.append(index[q])
            edge_vectors.append(tuple(ws))
            neighbors.append(tuple(qs))
        facets = tuple(zip(normals, offsets))
        return cls(tuple(vertices), tuple(tight), tuple(edge_vectors), tuple(neighbors), None, facets)

    @classmethod
    def from_cone(cls, cone: MomentCone) -> "PolytopeModel":
        """Section polytope of a good cone, in ambient coordinates, with lifts."""
        sec = cross_section(cone)
        sets = [tuple(fr.facet_indices) for fr in sec.frames]
        neighbors = []
        for p, s in enumerate(sets):
            qs = []
            for i in range(len(s)):
                keep = set(s) - {s[i]}
                (q,) = [q for q, t in enumerate(sets) if q != p and keep <= set(t)]
                qs.append(q)
            neighbors.append(tuple(qs))
        return cls(
            sec.vertices,
            tuple(sets),
            sec.vertex_edges,
            tuple(neighbors),
            tuple(fr.mu for fr in sec.frames),
            None,
        )

    def vertex_index(self, p) -> int:
        if isinstance(p, int):
            if not 0 <= p < len(self.vertices):
                raise PolarizationError(f"no vertex {p}")
            return p
        try:
            return self.vertices.index(_rat(p))
        except ValueError:
            raise PolarizationError(f"{p} is not a vertex") from None


def is_polarizing(P: PolytopeModel, xi) -> bool:
    return all(dot(w, xi) != 0 for ws in P.edge_vectors for w in ws)


def _signed_permutation(dim: int, seed: int) -> tuple[list[int], list[int]]:
    if seed == 0:
        return list(range(dim)), [1] * dim
    rng = random.Random(seed)
    perm = list(range(dim))
    rng.shuffle(perm)
    return perm, [rng.choice((1, -1)) for _ in range(dim)]


def find_polarizing(P: PolytopeModel, seed: int = 0) -> IntVec:
    """Deterministic polarizing integer vector.

    Scans the moment curve ``(1, t, t^2, ...)`` for t = 2, 3, ... after applying
    a seed-dependent signed coordinate permutation (identity for seed 0).  Every
    edge pairing is a nonzero polynomial in t, so the scan terminates.
    """
    dim = P.ambient_dim
    perm, signs = _signed_permutation(dim, seed)
    for t in itertools.count(2):
        curve = [t**k for k in range(dim)]
        xi = [0] * dim
        for k in range(dim):
            xi[perm[k]] = signs[k] * curve[k]
        if is_polarizing(P, xi):
            return tuple(xi)
    raise AssertionError("unreachable")


def _split(P: PolytopeModel, p: int, xi, skip: Optional[int] = None):
    plus, minus = [], []
    for i, w in enumerate(P.edge_vectors[p]):
        if i == skip:
            continue
        s = dot(w, xi)
        if s > 0:
            plus.append(w)
        elif s < 0:
            minus.append(w)
        else:
            raise PolarizationError(f"xi is not polarizing: edge {w} at vertex {p} pairs to zero")
    return plus, minus


def polarized_tangent_cone(P: PolytopeModel, p, xi) -> PolarizedCone:
    """``p + sum_{E+} R_{<0} w + sum_{E-} R_{>=0} w`` with sign ``(-1)^{|E+|}``."""
    p = P.vertex_index(p)
    plus, minus = _split(P, p, xi)
    neg = lambda w: tuple(-x for x in w)  # noqa: E731
    gens = [(neg(w), Mode.POSITIVE) for w in plus] + [(neg(w), Mode.NONPOSITIVE) for w in minus]
    return PolarizedCone(P.vertices[p], tuple(gens), (-1) ** len(plus))


def dual_polarized_tangent_cone(P: PolytopeModel, p, xi) -> PolarizedCone:
    """``p + sum_{E+} R_{>0} w + sum_{E-} R_{<=0} w`` with sign ``(-1)^{|E+|}``."""
    p = P.vertex_index(p)
    plus, minus = _split(P, p, xi)
    gens = [(w, Mode.POSITIVE) for w in plus] + [(w, Mode.NONPOSITIVE) for w in minus]
    return PolarizedCone(P.vertices[p], tuple(gens), (-1) ** len(plus))


def edge_dual_cone(P: PolytopeModel, edge: tuple[int, int], xi) -> PolarizedCone:
    """Dual polarized cone at an edge for ``xi`` on the wall perpendicular to it.

    Built at the first endpoint of ``edge``; the sign counts the flipped
    generators other than the edge itself.
    """
    p, q = (P.vertex_index(v) for v in edge)
    we = P.edge_vector(p, q)
    if dot(we, xi) != 0:
        raise PolarizationError("xi does not lie on the wall perpendicular to this edge")
    for v, other in ((p, q), (q, p)):
        skip = P.neighbors[v].index(other)
        _split(P, v, xi, skip=skip)  # raises if xi sits on a second wall
    plus, minus = _split(P, p, xi, skip=P.neighbors[p].index(q))
    gens = [(we, Mode.FREE)] + [(w, Mode.POSITIVE) for w in plus] + [(w, Mode.NONPOSITIVE) for w in minus]
    return PolarizedCone(P.vertices[p], tuple(gens), (-1) ** len(plus))


def lift_cone(base: PolarizedCone, mu) -> PolarizedCone:
    """Add ``R mu`` to a cone; the sign is unchanged."""
    dirs = [d for d, _ in base.generators]
    if rank(dirs + [_rat(mu)]) != len(dirs) + 1:
        raise PolarizationError("lift direction depends on the cone generators")
    return PolarizedCone(base.apex, base.generators + ((_rat(mu), Mode.FREE),), base.sign)
