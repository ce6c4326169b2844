"""Toric Fano models: moment polytope, vertex charts, catalog.

A model is determined by the primitive ray generators of a complete fan
whose rays support the anticanonical polytope P = {u : <u, ray> >= -1}.
Each vertex of P carries a chart.  For a simple vertex the rows of
``chart.dual`` are the rays of its normal cone (sorted lex); on a smooth
chart the exponent vector of a level-k section u in local coordinates is

    a_i(u) = <dual[i], u> + k,

nonnegative integers, zero exactly at the fixed point.  Singular charts
keep their cone rays and index but expose no exponent map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .errors import DegeneratePolytope, NotFano, NotSmoothChart, UnboundedPolytope
from .linalg import Vec, det, dot, invert, lcm_list, primitive, rational_primitive
from .polytope import (RationalPolytope, euclidean_volume, lattice_points,
                       polytope_from_rays)


@dataclass(frozen=True)
class Chart:
    """Local data at one vertex of the moment polytope."""

    vertex: Vec
    simplicial: bool
    index: int
    cone_rays: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, ...], ...] | None

    @property
    def smooth(self) -> bool:
        return self.simplicial and self.index == 1

    @property
    def dual(self) -> tuple[tuple[int, ...], ...]:
        """Rows of the exponent map on a smooth chart (= the cone rays)."""
        if not self.smooth:
            raise NotSmoothChart(f"chart at {self.vertex} has index {self.index}")
        return self.cone_rays

    def exponents(self, u: Sequence, k: int) -> tuple[int, ...]:
        """Local exponent vector of the level-k lattice point u."""
        rows = self.dual
        out = []
        for row in rows:
            val = sum(a * b for a, b in zip(row, u)) + k
            out.append(int(val))
        return tuple(out)

    def kernel_map(self, k: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
        """(matrix rows, shift) for the integer kernels at level k."""
        rows = self.dual
        return rows, tuple([int(k)] * len(rows))


@dataclass(frozen=True)
class ToricFanoModel:
    name: str
    dimension: int
    rays: tuple[tuple[int, ...], ...]
    polytope: RationalPolytope
    r0: int
    charts: tuple[Chart, ...]

    @property
    def all_charts_smooth(self) -> bool:
        return all(c.smooth for c in self.charts)

    def smooth_chart_indices(self) -> list[int]:
        return [i for i, c in enumerate(self.charts) if c.smooth]

    def to_dict(self) -> dict:
        d = self.polytope.to_dict()
        d.update({"name": self.name, "rays": [list(r) for r in self.rays],
                  "r0": self.r0})
        return d


def _build_chart(P: RationalPolytope, vertex: Vec) -> Chart:
    n = P.dimension
    tight = [nr for nr, off in P.inequalities if dot(nr, vertex) == off]
    tight.sort()
    if len(tight) != n:
        return Chart(vertex=vertex, simplicial=False, index=0,
                     cone_rays=tuple(tight), edges=None)
    R = [list(r) for r in tight]
    Rinv = invert(R)
    if Rinv is None:
        return Chart(vertex=vertex, simplicial=False, index=0,
                     cone_rays=tuple(tight), edges=None)
    cols = [tuple(Rinv[i][j] for i in range(n)) for j in range(n)]
    edges = tuple(rational_primitive(c) for c in cols)
    index = abs(int(det([list(e) for e in edges])))
    return Chart(vertex=vertex, simplicial=True, index=index,
                 cone_rays=tuple(tight), edges=edges)


def build_model(dimension: int, rays: Sequence[Sequence[int]], name: str = "") -> ToricFanoModel:
    """Construct the model for the given primitive fan rays.

    Raises NotFano when the rays do not cut out a bounded full-dimensional
    polytope, or when some ray contributes no facet (the data then does
    not come from a Fano polytope).
    """
    rays_t = tuple(tuple(int(x) for x in r) for r in rays)
    if len(set(rays_t)) != len(rays_t):
        raise ValueError("duplicate rays")
    for r in rays_t:
        if primitive(r) != r or all(x == 0 for x in r):
            raise ValueError(f"ray {r} is not primitive")
    try:
        P = polytope_from_rays(dimension, rays_t)
    except (UnboundedPolytope, DegeneratePolytope) as exc:
        raise NotFano(str(exc)) from exc
    facet_normals = {nr for nr, _ in P.inequalities}
    for r in rays_t:
        if r not in facet_normals:
            raise NotFano(f"ray {r} supports no facet of the polytope")
    r0 = lcm_list([x.denominator for v in P.vertices for x in v]) or 1
    charts = tuple(_build_chart(P, v) for v in P.vertices)
    return ToricFanoModel(name=name, dimension=dimension, rays=rays_t,
                          polytope=P, r0=r0, charts=charts)


def anticanonical_volume(X: ToricFanoModel) -> Fraction:
    """Top self-intersection of -K: n! times the Euclidean volume of P."""
    return factorial(X.dimension) * euclidean_volume(X.polytope)


def section_count(X: ToricFanoModel, k) -> int:
    """dim H0 of the k-th anticanonical multiple: lattice points of k*P."""
    return len(lattice_points(X.polytope, k))


CATALOG_RAYS: dict[str, tuple[tuple[int, ...], ...]] = {
    "P1": ((1,), (-1,)),
    "P2": ((1, 0), (0, 1), (-1, -1)),
    "P1xP1": ((1, 0), (-1, 0), (0, 1), (0, -1)),
    "dP6": ((1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)),
    "P3": ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)),
    "P1xP2": ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1), (0, -1, -1)),
    "P112": ((1, 0), (0, 1), (-1, -2)),
}

KE_CATALOG = ("P1", "P2", "P1xP1", "P1xP2", "dP6")


@lru_cache(maxsize=None)
def catalog_model(name: str) -> ToricFanoModel:
    try:
        rays = CATALOG_RAYS[name]
    except KeyError:
        raise KeyError(f"unknown catalog model {name!r}; "
                       f"have {sorted(CATALOG_RAYS)}") from None
    return build_model(len(rays[0]), rays, name=name)


def catalog() -> dict[str, ToricFanoModel]:
    return {name: catalog_model(name) for name in CATALOG_RAYS}
