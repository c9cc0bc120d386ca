"""Signed sums of polarized cones and their windowed generating series.

Everything is evaluated pointwise; a generating series only ever exists as a
finite table of coefficients over a lattice box.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

from .cone_model import MomentCone
from .exact_linalg import IntVec
from .polarization import (
    PolarizedCone,
    PolytopeModel,
    dual_polarized_tangent_cone,
    is_polarizing,
    lift_cone,
    polarized_tangent_cone,
)

DEFAULT_POINT_CAP = 10**7
CAP_ENV = "TORIC_INDEX_POINT_CAP"


class WindowTooLarge(RuntimeError):
    pass


def point_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_POINT_CAP


@dataclass(frozen=True)
class LatticeWindow:
    """Inclusive integer box ``lower <= x <= upper``."""

    lower: IntVec
    upper: IntVec

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(int(a) for a in self.lower))
        object.__setattr__(self, "upper", tuple(int(b) for b in self.upper))
        if len(self.lower) != len(self.upper) or not self.lower:
            raise ValueError("window bounds must have the same positive dimension")
        if any(a > b for a, b in zip(self.lower, self.upper)):
            raise ValueError(f"empty window: {self.lower} > {self.upper}")

    @classmethod
    def cube(cls, dim: int, lo: int, hi: int) -> "LatticeWindow":
        return cls((lo,) * dim, (hi,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def size(self) -> int:
        n = 1
        for a, b in zip(self.lower, self.upper):
            n *= b - a + 1
        return n

    def __contains__(self, x) -> bool:
        return len(x) == self.dim and all(a <= t <= b for a, t, b in zip(self.lower, x, self.upper))

    def check_cap(self, cap: int | None = None):
        cap = point_cap() if cap is None else cap
        if self.size > cap:
            raise WindowTooLarge(f"window has {self.size} points, cap is {cap} (set {CAP_ENV} to raise it)")

    def points(self) -> Iterator[IntVec]:
        """Lattice points in lexicographic order (after the cap check)."""
        self.check_cap()
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lower, self.upper)))

    def to_json(self) -> list[list[int]]:
        return [[a, b] for a, b in zip(self.lower, self.upper)]


@dataclass
class IndexSeries:
    """Sparse integer coefficients ``m(mu)`` over a window; zeros are not stored."""

    window: LatticeWindow
    coefficients: dict[IntVec, int] = field(default_factory=dict)

    def __post_init__(self):
        for k, v in list(self.coefficients.items()):
            if k not in self.window:
                raise ValueError(f"{k} lies outside the window")
            if v == 0:
                del self.coefficients[k]

    def __getitem__(self, mu) -> int:
        return self.coefficients.get(tuple(mu), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndexSeries):
            return NotImplemented
        return self.window == other.window and self.coefficients == other.coefficients

    def first_mismatch(self, other: "IndexSeries"):
        for mu in sorted(set(self.coefficients) | set(other.coefficients)):
            if self[mu] != other[mu]:
                return mu
        return None

    def to_json(self) -> dict:
        return {
            "box": self.window.to_json(),
            "entries": [{"mu": list(mu), "m": m} for mu, m in sorted(self.coefficients.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IndexSeries":
        box = data["box"]
        w = LatticeWindow(tuple(a for a, _ in box), tuple(b for _, b in box))
        return cls(w, {tuple(e["mu"]): int(e["m"]) for e in data["entries"]})


SignedCone = tuple[int, PolarizedCone]


def generating_window(cones: Iterable[Union[PolarizedCone, SignedCone]], window: LatticeWindow) -> IndexSeries:
    """Coefficient of each lattice point: the signed count of cones containing it.

    Bare cones carry their own sign; ``(sign, cone)`` pairs override it.
    """
    pairs = [(c.sign, c) if isinstance(c, PolarizedCone) else c for c in cones]
    coeffs = {}
    for mu in window.points():
        m = sum(s for s, k in pairs if k.contains(mu))
        if m:
            coeffs[mu] = m
    return IndexSeries(window, coeffs)


@lru_cache(maxsize=256)
def vertex_cones(P: PolytopeModel, xi: tuple, dual: bool = False, lifted: bool = False) -> tuple[PolarizedCone, ...]:
    """The polarized (or dual polarized) cone at every vertex, optionally lifted."""
    if not is_polarizing(P, xi):
        raise ValueError(f"{xi} is not a polarizing vector for this polytope")
    make = dual_polarized_tangent_cone if dual else polarized_tangent_cone
    cones = [make(P, p, xi) for p in range(len(P.vertices))]
    if lifted:
        if P.lifts is None:
            raise ValueError("polytope has no edge generators to lift along")
        cones = [lift_cone(k, mu) for k, mu in zip(cones, P.lifts)]
    return tuple(cones)


def lv_sum(P: PolytopeModel, xi, x) -> int:
    return sum(k.sign for k in vertex_cones(P, tuple(xi)) if k.contains(x))


def lv_dual_sum(P: PolytopeModel, xi, x) -> int:
    return sum(k.sign for k in vertex_cones(P, tuple(xi), dual=True) if k.contains(x))


@lru_cache(maxsize=64)
def section_model(c: MomentCone) -> PolytopeModel:
    return PolytopeModel.from_cone(c)


def _model(c: Union[MomentCone, PolytopeModel]) -> PolytopeModel:
    return section_model(c) if isinstance(c, MomentCone) else c


def cone_S(c: Union[MomentCone, PolytopeModel], xi, x) -> int:
    """Signed count over the lifted polarized cones ``C_p + R mu_p``."""
    return sum(k.sign for k in vertex_cones(_model(c), tuple(xi), lifted=True) if k.contains(x))


def cone_S_dual(c: Union[MomentCone, PolytopeModel], xi, x) -> int:
    """Signed count over the lifted dual polarized cones."""
    return sum(k.sign for k in vertex_cones(_model(c), tuple(xi), dual=True, lifted=True) if k.contains(x))


def lifted_cones(c: Union[MomentCone, PolytopeModel], xi, dual: bool = False) -> Sequence[PolarizedCone]:
    return vertex_cones(_model(c), tuple(xi), dual=dual, lifted=True)
