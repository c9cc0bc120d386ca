"""Equivariant index multiplicities from the edges of a moment cone.

Each edge contributes ``prod_i (1/(1 - t^{-w_i}))^{s_i} * delta(1 - t^mu)``.
Expanding the ``+`` factor as ``-sum_{k>=1} t^{k w}`` and the ``-`` factor as
``sum_{k>=0} t^{-k w}``, the delta factor contributes every multiple of ``mu``, so
the term is ``(-1)^{#plus}`` times the indicator of

    { x : <x, v_i> > 0 for plus signs, <x, v_i> <= 0 for minus signs }

(no condition along ``mu``).  Summing over edges must reproduce the lattice
formula ``(-1)^n [x in interior C] + [x in -C]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cone_model import ConeError, EdgeFrame, MomentCone, edges, strictly_convex
from .exact_linalg import IntVec, dot, solve_rational, transpose
from .lv_engine import IndexSeries, LatticeWindow

PLUS, MINUS = "+", "-"


class PolarizingError(ValueError):
    pass


@dataclass(frozen=True)
class IndexTerm:
    edge: EdgeFrame
    signs: tuple[str, ...]
    epsilon_pairings: tuple[Fraction, ...]
    twist: tuple[tuple[IntVec, int], ...] = field(default=None)

    def __post_init__(self):
        if self.twist is None:
            object.__setattr__(self, "twist", (((0,) * len(self.edge.mu), 1),))
        if len(self.signs) != self.edge.n or len(self.epsilon_pairings) != self.edge.n:
            raise ValueError("one sign and one pairing per normal")
        for s, e in zip(self.signs, self.epsilon_pairings):
            if e == 0 or s != (PLUS if e > 0 else MINUS):
                raise ValueError("signs must follow the epsilon pairings")

    @property
    def sign(self) -> int:
        return (-1) ** self.signs.count(PLUS)

    @property
    def twisted(self) -> bool:
        return self.twist != (((0,) * len(self.edge.mu), 1),)

    def with_twist(self, weights) -> "IndexTerm":
        """Twist by a weight multiset given as a mapping or as (weight, mult) pairs."""
        items = weights.items() if hasattr(weights, "items") else weights
        merged: dict[IntVec, int] = {}
        for lam, mult in items:
            lam = tuple(int(a) for a in lam)
            if len(lam) != len(self.edge.mu):
                raise ValueError("twist weight has the wrong dimension")
            merged[lam] = merged.get(lam, 0) + int(mult)
        twist = tuple(sorted((k, v) for k, v in merged.items() if v))
        return IndexTerm(self.edge, self.signs, self.epsilon_pairings, twist)

    def in_cone(self, x) -> bool:
        for s, v in zip(self.signs, self.edge.normals):
            p = dot(x, v)
            if (s == PLUS and p <= 0) or (s == MINUS and p > 0):
                return False
        return True

    def coefficient(self, mu) -> int:
        total = 0
        for lam, mult in self.twist:
            if self.in_cone(tuple(a - b for a, b in zip(mu, lam))):
                total += mult
        return self.sign * total


def epsilon_pairings(frame: EdgeFrame, eps) -> tuple[Fraction, ...]:
    """Coordinates of ``eps`` on ``v_1..v_n`` in the basis ``(R, v_1, .., v_n)``."""
    basis = [frame.reeb, *frame.normals]
    coords = solve_rational(transpose(basis), list(eps))
    return coords[1:]


def localization_terms(c: MomentCone, eps) -> list[IndexTerm]:
    """One signed term per edge of the cone for the polarizing vector ``eps``."""
    if len(eps) != c.dim:
        raise PolarizingError("eps has the wrong dimension")
    terms = []
    for k, frame in enumerate(edges(c)):
        pairs = epsilon_pairings(frame, eps)
        zeros = [i for i, e in enumerate(pairs) if e == 0]
        if zeros:
            raise PolarizingError(
                f"eps is not polarizing: edge {k} (facets {list(frame.facet_indices)}) "
                f"has zero pairing at index {zeros[0] + 1}"
            )
        signs = tuple(PLUS if e > 0 else MINUS for e in pairs)
        terms.append(IndexTerm(frame, signs, tuple(pairs)))
    return terms


def expand_term(t: IndexTerm, w: LatticeWindow) -> IndexSeries:
    return IndexSeries(w, {mu: m for mu in w.points() if (m := t.coefficient(mu))})


def multiplicity_localized(terms: Sequence[IndexTerm], mu) -> int:
    return sum(t.coefficient(mu) for t in terms)


def multiplicity_lattice(c: MomentCone, mu) -> int:
    """``(-1)^n [mu in interior C] + [mu in -C]``."""
    if not strictly_convex(c):
        raise ConeError("lattice formula needs a strictly convex cone")
    prs = c.pairings(mu)
    interior = all(p > 0 for p in prs)
    negative = all(p <= 0 for p in prs)
    return (-1) ** c.n * int(interior) + int(negative)


@dataclass
class IndexComparison:
    localized: IndexSeries
    lattice: IndexSeries

    @property
    def equal(self) -> bool:
        return self.localized == self.lattice

    @property
    def first_mismatch(self) -> Optional[IntVec]:
        return self.localized.first_mismatch(self.lattice)

    def to_json(self) -> dict:
        mm = self.first_mismatch
        return {
            "localized": self.localized.to_json(),
            "lattice": self.lattice.to_json(),
            "equal": self.equal,
            "first_mismatch": list(mm) if mm is not None else None,
        }


def index_window(c: MomentCone, eps, w: LatticeWindow, method: str = "both", terms=None):
    """Windowed multiplicity table by ``localized``, ``lattice`` or ``both`` methods."""
    if method not in ("localized", "lattice", "both"):
        raise ValueError(f"unknown method {method!r}")
    if w.dim != c.dim:
        raise ValueError("window dimension does not match the cone")
    w.check_cap()
    lattice = localized = None
    if method in ("lattice", "both"):
        lattice = IndexSeries(w, {mu: m for mu in w.points() if (m := multiplicity_lattice(c, mu))})
    if method in ("localized", "both"):
        if terms is None:
            terms = localization_terms(c, eps)
        if method == "both" and any(t.twisted for t in terms):
            raise ValueError("twisted indices have no lattice counterpart; use method 'localized'")
        localized = IndexSeries(w, {mu: m for mu in w.points() if (m := multiplicity_localized(terms, mu))})
    if method == "both":
        return IndexComparison(localized, lattice)
    return localized if method == "localized" else lattice


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def render_term(t: IndexTerm) -> str:
    factors = [f"(1 - t^-{_vec(w)})^{s}" for w, s in zip(t.edge.weights, t.signs)]
    text = " ".join(factors + [f"δ(1 - t^{_vec(t.edge.mu)})"])
    if t.twisted:
        chi = ", ".join(f"{_vec(lam)}: {mult}" for lam, mult in t.twist)
        text = f"χ = {{{chi}}} " + text
    return text
