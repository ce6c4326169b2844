"""Monomial subschemes, Newton polyhedra, and ideal sequences on X x A^1.

A MonomialSubscheme stores one monomial ideal per chart, in that chart's
local exponent coordinates.  Chart indices missing from the mapping carry
the unit ideal; an explicitly empty generator tuple is the zero ideal.
Reduced toric boundary divisors additionally remember their ray, which
lets global valuation routes work even through singular charts where no
exponent coordinates exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

from . import lattice
from .errors import EmptyOrFull, NotSmoothPoint, ZeroIdeal
from .linalg import Vec, dot, invert, matmul_vec, transpose
from .model import Chart, ToricFanoModel
from .polytope import enumerate_basic_feasible, polytope_edges

Gens = tuple[tuple[int, ...], ...]


def _normalize_gens(gens: Sequence[Sequence[int]]) -> Gens | None:
    """Minimalized sorted generators; None signals the unit ideal."""
    cleaned = [tuple(int(x) for x in g) for g in gens]
    if any(all(x == 0 for x in g) for g in cleaned):
        return None
    return tuple(lattice.minimalize(cleaned))


@dataclass(frozen=True)
class MonomialSubscheme:
    label: str
    dimension: int
    chart_gens: Mapping[int, Gens] = field(default_factory=dict)
    boundary_ray: tuple[int, ...] | None = None

    def __post_init__(self):
        norm: dict[int, Gens] = {}
        for idx, gens in self.chart_gens.items():
            if len(gens) == 0:
                norm[int(idx)] = ()
                continue
            g = _normalize_gens(gens)
            if g is not None:
                norm[int(idx)] = g
        object.__setattr__(self, "chart_gens", norm)

    def gens_on(self, chart_index: int) -> Gens | None:
        """Generators on a chart; None means the unit ideal there."""
        return self.chart_gens.get(chart_index)

    @property
    def is_empty(self) -> bool:
        """The unit ideal everywhere: the subscheme is the empty scheme."""
        return not self.chart_gens and self.boundary_ray is None

    @property
    def has_zero_chart(self) -> bool:
        return any(len(g) == 0 for g in self.chart_gens.values())

    def active_chart_indices(self) -> list[int]:
        return sorted(self.chart_gens)

    def require_usable(self) -> None:
        if self.has_zero_chart:
            raise ZeroIdeal(f"{self.label}: zero ideal on a chart")
        if self.is_empty:
            raise EmptyOrFull(f"{self.label}: unit ideal everywhere")

    def power(self, m: int) -> "MonomialSubscheme":
        if m < 1:
            raise ValueError("power must be >= 1")
        new = {}
        for idx, gens in self.chart_gens.items():
            if len(gens) == 0:
                new[idx] = ()
                continue
            acc = gens
            for _ in range(m - 1):
                acc = tuple(lattice.minimalize(lattice.minkowski_sum(acc, gens)))
            new[idx] = acc
        return MonomialSubscheme(label=f"{self.label}^{m}", dimension=self.dimension,
                                 chart_gens=new, boundary_ray=None)


def point_subscheme(X: ToricFanoModel, chart_index: int) -> MonomialSubscheme:
    """Reduced torus-fixed point: the maximal ideal of one smooth chart."""
    chart = X.charts[chart_index]
    if not chart.smooth:
        raise NotSmoothPoint(f"fixed point at {chart.vertex} is singular")
    n = X.dimension
    gens = tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
    return MonomialSubscheme(label=f"point@{chart_index}", dimension=n,
                             chart_gens={chart_index: gens})


def thickened_point_subscheme(X: ToricFanoModel, chart_index: int) -> MonomialSubscheme:
    """Square of the maximal ideal at a smooth fixed point."""
    chart = X.charts[chart_index]
    if not chart.smooth:
        raise NotSmoothPoint(f"fixed point at {chart.vertex} is singular")
    n = X.dimension
    gens = []
    for i, j in combinations_with_replacement(range(n), 2):
        g = [0] * n
        g[i] += 1
        g[j] += 1
        gens.append(tuple(g))
    return MonomialSubscheme(label=f"point2@{chart_index}", dimension=n,
                             chart_gens={chart_index: tuple(gens)})


def boundary_divisor_subscheme(X: ToricFanoModel, ray: Sequence[int]) -> MonomialSubscheme:
    """Reduced toric boundary divisor attached to one fan ray.

    Chart data is recorded on every smooth chart whose cone contains the
    ray; singular charts are covered by the remembered ray itself, which
    global valuation formulas use directly.
    """
    ray_t = tuple(int(x) for x in ray)
    if ray_t not in X.rays:
        raise ValueError(f"{ray_t} is not a ray of {X.name or 'the model'}")
    chart_gens: dict[int, Gens] = {}
    n = X.dimension
    for idx, chart in enumerate(X.charts):
        if not chart.smooth or ray_t not in chart.cone_rays:
            continue
        pos = chart.cone_rays.index(ray_t)
        gen = tuple(1 if j == pos else 0 for j in range(n))
        chart_gens[idx] = (gen,)
    return MonomialSubscheme(label=f"divisor@{ray_t}", dimension=n,
                             chart_gens=chart_gens, boundary_ray=ray_t)


def standard_battery(X: ToricFanoModel) -> list[MonomialSubscheme]:
    """Fixed candidate set: smooth fixed points, boundary divisors, and
    thickened smooth points, in a reproducible order."""
    out: list[MonomialSubscheme] = []
    for idx in X.smooth_chart_indices():
        out.append(point_subscheme(X, idx))
    for ray in X.rays:
        out.append(boundary_divisor_subscheme(X, ray))
    for idx in X.smooth_chart_indices():
        out.append(thickened_point_subscheme(X, idx))
    return out


class NewtonPolyhedron:
    """conv(generators) + nonnegative orthant, with its facet duals.

    ``dual_vertices`` are the vertices of Q = {w >= 0 : <g, w> >= 1 for
    all generators}; a point a >= 0 lies in x*N iff <w, a> >= x for every
    dual vertex w.  Facet inequalities of N are the scaled dual vertices
    plus the coordinate halfspaces.
    """

    __slots__ = ("generators", "dual_vertices", "inequalities")

    def __init__(self, generators: Sequence[Sequence[int]]):
        gens = _normalize_gens(generators)
        if gens is None:
            raise ValueError("unit ideal has no Newton polyhedron here")
        if len(gens) == 0:
            raise ZeroIdeal("zero ideal has empty Newton polyhedron")
        self.generators = gens
        n = len(gens[0])
        rows: list[tuple[tuple, object]] = []
        for i in range(n):
            rows.append((tuple(Fraction(1 if j == i else 0) for j in range(n)),
                         Fraction(0)))
        for g in gens:
            rows.append((tuple(Fraction(x) for x in g), Fraction(1)))
        self.dual_vertices: tuple[Vec, ...] = tuple(
            enumerate_basic_feasible(n, rows))
        ineqs = []
        for w in self.dual_vertices:
            den = 1
            for x in w:
                den = den * x.denominator // _gcd(den, x.denominator)
            ineqs.append((tuple(int(x * den) for x in w), den))
        for i in range(n):
            ineqs.append((tuple(1 if j == i else 0 for j in range(n)), 0))
        self.inequalities = tuple(sorted(set(ineqs)))

    def scaled_contains(self, point: Sequence, x) -> bool:
        """Membership of a rational point in x * (this polyhedron)."""
        x = Fraction(x)
        if any(Fraction(p) < 0 for p in point):
            return False
        return all(dot(w, point) >= x for w in self.dual_vertices)

    def contains(self, point: Sequence) -> bool:
        return self.scaled_contains(point, 1)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def is_integrally_closed(gens: Gens) -> bool:
    """A monomial ideal is integrally closed iff every lattice point of its
    Newton polyhedron already dominates a generator.  Minimal lattice
    points of the polyhedron sit inside the componentwise-max box."""
    if len(gens) == 0:
        return True
    N = NewtonPolyhedron(gens)
    n = len(gens[0])
    hi = [max(g[i] for g in gens) for i in range(n)]
    pts = lattice.enum_points([list(m) for m, b in N.inequalities],
                              [b for m, b in N.inequalities],
                              [0] * n, hi)
    return all(lattice.dominates_any(p, gens) for p in pts)


@dataclass(frozen=True)
class IdealSequenceOnXxA1:
    """I_M <= I_{M-1} <= ... <= I_1 of monomial subschemes on a model,
    encoding the ideal I_M + I_{M-1} t + ... + I_1 t^{M-1} + (t^M)."""

    steps: tuple[MonomialSubscheme, ...]

    def __post_init__(self):
        for j in range(len(self.steps) - 1):
            small, big = self.steps[j + 1], self.steps[j]
            if not _subscheme_contains(big, small):
                raise ValueError(
                    f"step {j + 2} not contained in step {j + 1} chartwise")

    @property
    def M(self) -> int:
        return len(self.steps)

    def step(self, j: int) -> MonomialSubscheme:
        """I_j for 1 <= j <= M; the unit subscheme for j <= 0."""
        if j <= 0:
            return MonomialSubscheme(label="unit", dimension=self.steps[0].dimension)
        return self.steps[j - 1]

    def product_gens(self, chart_index: int) -> tuple[tuple[int, ...], ...]:
        """Generators of the induced (n+1)-variable chart ideal; the last
        coordinate is the t-exponent.  None never occurs: (0, M) is always
        a generator, and unit I_j contribute (0, M-j)."""
        n = self.steps[0].dimension
        out: set[tuple[int, ...]] = {tuple([0] * n + [self.M])}
        for j in range(1, self.M + 1):
            gens = self.step(j).gens_on(chart_index)
            if gens is None:
                out.add(tuple([0] * n + [self.M - j]))
            else:
                for g in gens:
                    out.add(tuple(list(g) + [self.M - j]))
        return tuple(lattice.minimalize(out))

    def power(self, m: int) -> "IdealSequenceOnXxA1":
        """Sequence inducing the m-th power of the induced ideal: the new
        step s collects all products I_{j_1} ... I_{j_m} with sum >= s."""
        if m < 1:
            raise ValueError("power must be >= 1")
        dim = self.steps[0].dimension
        chart_ids = set()
        for s in self.steps:
            chart_ids.update(s.active_chart_indices())
        new_steps = []
        for s in range(1, m * self.M + 1):
            chart_gens: dict[int, Gens] = {}
            for idx in chart_ids:
                gens = self._power_step_chart(idx, s, m)
                if gens is not None:
                    chart_gens[idx] = gens
            new_steps.append(MonomialSubscheme(
                label=f"pow{m}[{s}]", dimension=dim, chart_gens=chart_gens))
        return IdealSequenceOnXxA1(steps=tuple(new_steps))

    def _power_step_chart(self, idx: int, s: int, m: int) -> Gens | None:
        """Generators of sum over j_1+...+j_m = s (0 <= j_i <= M) of the
        product of steps, on one chart; None for the unit ideal."""
        acc: set[tuple[int, ...]] = set()
        unit_hit = False

        def rec(parts_left: int, total_needed: int, current: tuple[int, ...] | None):
            nonlocal unit_hit
            if unit_hit:
                return
            if parts_left == 0:
                if total_needed <= 0:
                    if current is None:
                        unit_hit = True
                    else:
                        acc.add(current)
                return
            lo = max(0, total_needed - (parts_left - 1) * self.M)
            for j in range(lo, self.M + 1):
                gens = self.step(j).gens_on(idx) if j >= 1 else None
                if j >= 1 and gens is not None and len(gens) == 0:
                    continue  # zero ideal kills the product
                if j >= 1 and gens is not None:
                    for g in gens:
                        nxt = g if current is None else tuple(
                            a + b for a, b in zip(current, g))
                        rec(parts_left - 1, total_needed - j, nxt)
                else:
                    rec(parts_left - 1, total_needed - j, current)

        rec(m, s, None)
        if unit_hit:
            return None
        if not acc:
            return ()
        return tuple(lattice.minimalize(acc))


def _subscheme_contains(big: MonomialSubscheme, small: MonomialSubscheme) -> bool:
    """small subset of big, checked generator-wise on every chart."""
    idxs = set(big.active_chart_indices()) | set(small.active_chart_indices())
    for idx in idxs:
        bg = big.gens_on(idx)
        sg = small.gens_on(idx)
        if bg is None:
            continue
        if sg is None:
            return False
        if len(bg) == 0:
            if len(sg) != 0:
                return False
            continue
        for g in sg:
            if not lattice.dominates_any(g, bg):
                return False
    return True


def verify_gluing(X: ToricFanoModel, Z: MonomialSubscheme) -> None:
    """Check chart ideals agree on overlaps of adjacent smooth charts.

    For vertices joined by a polytope edge the overlap inverts exactly one
    coordinate on each side; the localized ideals must coincide under the
    monomial coordinate change.  Raises ValueError on a mismatch; singular
    charts are skipped (they carry no exponent coordinates).
    """
    for i, j in polytope_edges(X.polytope):
        ci, cj = X.charts[i], X.charts[j]
        if not (ci.smooth and cj.smooth):
            continue
        common = [r for r in ci.cone_rays if r in cj.cone_rays]
        if len(common) != X.dimension - 1:
            continue
        inv_i = next(k for k, r in enumerate(ci.cone_rays) if r not in common)
        inv_j = next(k for k, r in enumerate(cj.cone_rays) if r not in common)
        gi = Z.gens_on(i)
        gj = Z.gens_on(j)
        li = _localize(gi, inv_i)
        lj = _localize(gj, inv_j)
        # transported version of chart i's localized gens, in chart j
        # coordinates: exponents map by the transpose of D_i * D_j^{-1}
        E_j = invert([list(r) for r in cj.cone_rays])
        assert E_j is not None
        M_cols = [matmul_vec([list(r) for r in ci.cone_rays], col)
                  for col in transpose(E_j)]
        T = tuple(M_cols)  # columns of D_i E_j as rows = the transpose
        ti = _transport(li, T, inv_j)
        if ti != lj:
            raise ValueError(
                f"{Z.label}: charts {i} and {j} disagree on their overlap: "
                f"{ti} vs {lj}")


def _localize(gens: Gens | None, inverted: int):
    """Canonical localized ideal: None for unit, () for zero, else gens
    with the inverted exponent zeroed and re-minimalized."""
    if gens is None:
        return None
    if len(gens) == 0:
        return ()
    out = [tuple(0 if k == inverted else x for k, x in enumerate(g)) for g in gens]
    norm = _normalize_gens(out)
    return norm


def _transport(local, T, inv_target):
    """Apply the exponent transform T then canonicalize at the target's
    inverted coordinate."""
    if local is None or len(local) == 0:
        return local
    moved = []
    for g in local:
        img = matmul_vec([list(row) for row in T], g)
        img_int = []
        for k, x in enumerate(img):
            frac = Fraction(x)
            if frac.denominator != 1:
                raise ValueError("non-integral exponent transport")
            img_int.append(int(frac))
        moved.append(tuple(0 if k == inv_target else x
                           for k, x in enumerate(img_int)))
    if any(any(x < 0 for x in g) for g in moved):
        raise ValueError("transported generator has a negative exponent")
    return _normalize_gens(moved)