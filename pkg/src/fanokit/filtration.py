"""Filtrations of anticanonical section spaces and their limit slope.

Two kinds are supported.  An ideal-power filtration places a section of
L^r = -r r0 K at level x when its chart exponents lie in the ceil(x)-th
power of a fixed monomial ideal; an explicit filtration reads its level
ideals from a finite table.  Both answer the same queries: F^x V_r as a
tuple of lattice points of r*r0*P, the saturation of a level into a
monomial ideal plus its section closure, and the level ideal itself.

Downstream every number follows one chain.  The step ideals at a fixed r
assemble into a t-graded ideal on X x A^1, its k-th powers produce weight
sums v_r(k) and w_r(k), the stabilised leading coefficient of v_r gives
the sample slope d_r, and for ideal-power filtrations the r -> infinity
limit is evaluated in closed form through the blowup volume profile.

Chart exponent vectors here are ray pairings <rho, u> + level over the
cone rays of each chart.  On smooth charts this is the usual exponent
map; on simplicial singular charts it still converts ideal membership,
products, and containment into componentwise arithmetic, which is all
the saturation and weight routes need.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Mapping, Sequence

from . import lattice
from .errors import CombinatorialBlowup, NoStabilization, R1NotFound, UnsupportedSubscheme
from .model import ToricFanoModel, anticanonical_volume
from .polytope import lattice_points
from .subscheme import (IdealSequenceOnXxA1, MonomialSubscheme,
                        _subscheme_contains)
from .volumes import BlowupVolumeProfile, blowup_volume_profile

IDEAL_POWER = "ideal-power"
EXPLICIT = "explicit"

R1_CAP = 64
GENERATOR_CAP = 20_000

Point = tuple[int, ...]


def _zero_subscheme(X: ToricFanoModel, label: str = "zero") -> MonomialSubscheme:
    return MonomialSubscheme(label=label, dimension=X.dimension,
                             chart_gens={i: () for i in range(len(X.charts))})


def _ray_images(chart, points: Iterable[Point], level: int) -> set[Point]:
    rows = chart.cone_rays
    return {tuple(sum(a * b for a, b in zip(row, u)) + level for row in rows)
            for u in points}


def _ideal_kernel_charts(X: ToricFanoModel, ideal: MonomialSubscheme,
                         level: int) -> list[tuple]:
    """(rows, shift, gens) triples for the lattice kernels, one per active
    chart.  Generator arity must match the chart's ray count; the public
    constructors only produce matching data, so a mismatch means the
    ideal was written for a different fan."""
    charts = []
    for idx in ideal.active_chart_indices():
        chart = X.charts[idx]
        rows = chart.cone_rays
        gens = ideal.chart_gens[idx]
        if any(len(g) != len(rows) for g in gens):
            raise UnsupportedSubscheme(
                f"{ideal.label}: generator arity does not match the "
                f"{len(rows)} cone rays of chart {idx}")
        charts.append((rows, (level,) * len(rows), gens))
    return charts


class FiltrationSpec:
    """Decreasing, multiplicative, linearly bounded filtration of the
    spaces V_r of level-r anticanonical sections.

    Build instances with ideal_power_filtration or explicit_filtration.
    e_plus/e_minus are the integer window used by the weight routes;
    e_min_est/e_max_est are the slope estimates they must bracket.
    """

    def __init__(self, X: ToricFanoModel, kind: str, *,
                 subscheme: MonomialSubscheme | None = None,
                 table: Mapping[int, tuple[tuple[Fraction, MonomialSubscheme | None], ...]] | None = None,
                 e_plus: int, e_minus: int,
                 e_min_est, e_max_est,
                 profile: BlowupVolumeProfile | None = None):
        if kind not in (IDEAL_POWER, EXPLICIT):
            raise ValueError(f"unknown filtration kind {kind!r}")
        self.X = X
        self.kind = kind
        self.subscheme = subscheme
        self.table = table
        self.e_plus = int(e_plus)
        self.e_minus = int(e_minus)
        self.e_min_est = Fraction(e_min_est)
        self.e_max_est = Fraction(e_max_est)
        self.profile = profile
        self._sections: dict[int, tuple[Point, ...]] = {}
        self._powers: dict[int, MonomialSubscheme] = {}
        self._saturations: dict = {}

    def sections(self, r: int) -> tuple[Point, ...]:
        """All lattice points of r*r0*P, cached."""
        r = int(r)
        if r < 1:
            raise ValueError("level r must be positive")
        if r not in self._sections:
            pts = lattice_points(self.X.polytope, r * self.X.r0)
            self._sections[r] = tuple(tuple(int(c) for c in u) for u in pts)
        return self._sections[r]

    def level_ideal(self, r: int, x) -> MonomialSubscheme | None:
        """Defining ideal of F^x V_r; None is the unit ideal."""
        x = Fraction(x)
        if self.kind == IDEAL_POWER:
            m = ceil(x)
            if m <= 0:
                return None
            if m not in self._powers:
                self._powers[m] = (self.subscheme if m == 1
                                   else self.subscheme.power(m))
            return self._powers[m]
        rows = self.table.get(int(r))
        if rows is None:
            raise KeyError(f"filtration table has no row for r={r}")
        for threshold, ideal in rows:
            if x <= threshold:
                return ideal
        return _zero_subscheme(self.X)

    def _level_key(self, r: int, x):
        """Hashable key identifying the step that contains (r, x)."""
        x = Fraction(x)
        if self.kind == IDEAL_POWER:
            return max(0, ceil(x))
        rows = self.table.get(int(r))
        if rows is None:
            raise KeyError(f"filtration table has no row for r={r}")
        for i, (threshold, _) in enumerate(rows):
            if x <= threshold:
                return i
        return len(rows)

    def value(self, r: int, x) -> tuple[Point, ...]:
        """F^x V_r as lattice points of r*r0*P."""
        ideal = self.level_ideal(r, x)
        pts = self.sections(r)
        if ideal is None:
            return pts
        charts = _ideal_kernel_charts(self.X, ideal, int(r) * self.X.r0)
        return tuple(lattice.filter_points_in_ideals(pts, charts))


def ideal_power_filtration(X: ToricFanoModel, Z: MonomialSubscheme) -> FiltrationSpec:
    """Filtration of V_r by vanishing order along Z.

    Level x keeps the sections whose chart exponents lie in the
    ceil(x)-th power of Z's ideal; nonpositive x keeps everything.  The
    slope window defaults to e_minus = -1 and e_plus one past the scaled
    pseudoeffective threshold, which the blowup volume profile provides
    exactly (or as a flagged overestimate on the counting fallback).
    """
    Z.require_usable()
    profile = blowup_volume_profile(X, Z)
    e_max = X.r0 * profile.tau
    return FiltrationSpec(X, IDEAL_POWER, subscheme=Z,
                          e_plus=ceil(e_max) + 1, e_minus=-1,
                          e_min_est=0, e_max_est=e_max, profile=profile)


def explicit_filtration(X: ToricFanoModel,
                        table: Mapping[int, Sequence[tuple]],
                        *, e_plus: int, e_minus: int,
                        e_min_est=None, e_max_est=None) -> FiltrationSpec:
    """Filtration read off a finite table of step ideals.

    ``table[r]`` is a sequence of (threshold, ideal) pairs with strictly
    increasing thresholds; the ideal applies on the half-open interval up
    to and including its threshold, the first entry (which must be the
    unit ideal, spelled None) covers everything below, and past the last
    threshold the filtration is zero.  Ideals must decrease along each
    row.  Slope estimates are read from the table unless supplied.
    """
    norm: dict[int, tuple[tuple[Fraction, MonomialSubscheme | None], ...]] = {}
    for r, rows in table.items():
        r = int(r)
        if r < 1:
            raise ValueError("table rows need positive r")
        entries = [(Fraction(x), ideal) for x, ideal in rows]
        if not entries:
            raise ValueError(f"empty table row for r={r}")
        if entries[0][1] is not None:
            raise ValueError(f"r={r}: first entry must be the unit ideal")
        for (xa, _), (xb, _) in zip(entries, entries[1:]):
            if not xa < xb:
                raise ValueError(f"r={r}: thresholds must increase")
        for (_, a), (_, b) in zip(entries, entries[1:]):
            if a is None:
                continue
            if b is None or not _subscheme_contains(a, b):
                raise ValueError(f"r={r}: entries must decrease")
        norm[r] = tuple(entries)

    if e_min_est is None:
        e_min_est = min(max(x for x, ideal in rows if ideal is None) / r
                        for r, rows in norm.items())
    if e_max_est is None:
        e_max_est = max(rows[-1][0] / r for r, rows in norm.items())
    e_plus, e_minus = int(e_plus), int(e_minus)
    if not Fraction(e_plus) > Fraction(e_max_est):
        raise ValueError(f"e_plus={e_plus} must exceed e_max_est={e_max_est}")
    if not Fraction(e_minus) < Fraction(e_min_est):
        raise ValueError(f"e_minus={e_minus} must sit below e_min_est={e_min_est}")
    return FiltrationSpec(X, EXPLICIT, table=norm, e_plus=e_plus,
                          e_minus=e_minus, e_min_est=e_min_est,
                          e_max_est=e_max_est)


def saturate_points(X: ToricFanoModel, r: int, points: Sequence[Point],
                    label: str = "") -> tuple[MonomialSubscheme, tuple[Point, ...]]:
    """Ideal generated by a set of level-r sections, and its closure.

    The ideal collects the minimal chart exponent vectors of the given
    points on every chart; the closure is all sections of L^r inside the
    ideal.  Saturating the closure again changes nothing.
    """
    sections = tuple(tuple(int(c) for c in u) for u in lattice_points(X.polytope, r * X.r0))
    return _saturate_core(X, int(r), tuple(points), sections,
                          label or f"sat(r={r})")


def _saturate_core(X: ToricFanoModel, r: int, points: tuple[Point, ...],
                   sections: tuple[Point, ...],
                   label: str) -> tuple[MonomialSubscheme, tuple[Point, ...]]:
    level = r * X.r0
    if len(points) == len(sections):
        return MonomialSubscheme(label=label, dimension=X.dimension), sections
    if not points:
        return _zero_subscheme(X, label=label), ()
    chart_gens = {}
    for idx, chart in enumerate(X.charts):
        chart_gens[idx] = tuple(_ray_images(chart, points, level))
    ideal = MonomialSubscheme(label=label, dimension=X.dimension,
                              chart_gens=chart_gens)
    closure = tuple(lattice.filter_points_in_ideals(
        sections, _ideal_kernel_charts(X, ideal, level)))
    return ideal, closure


def saturate(F: FiltrationSpec, r: int, x) -> tuple[MonomialSubscheme, tuple[Point, ...]]:
    """I_(r,x) generated by F^x V_r, plus the saturated value itself."""
    r = int(r)
    key = (r, F._level_key(r, x))
    if key not in F._saturations:
        F._saturations[key] = _saturate_core(
            F.X, r, F.value(r, x), F.sections(r), f"sat(r={r},x={x})")
    return F._saturations[key]


@dataclass(frozen=True)
class SaturatedIdealTable:
    """Saturations over a finite (r, x) grid, in the order requested."""

    entries: tuple[tuple[int, Fraction, MonomialSubscheme, tuple[Point, ...]], ...]

    def ideal(self, r: int, x) -> MonomialSubscheme:
        return self._find(r, x)[2]

    def closure(self, r: int, x) -> tuple[Point, ...]:
        return self._find(r, x)[3]

    def _find(self, r, x):
        r, x = int(r), Fraction(x)
        for row in self.entries:
            if row[0] == r and row[1] == x:
                return row
        raise KeyError(f"no table entry for (r={r}, x={x})")


def build_saturated_table(F: FiltrationSpec,
                          pairs: Sequence[tuple[int, object]]) -> SaturatedIdealTable:
    rows = []
    for r, x in pairs:
        ideal, closure = saturate(F, r, x)
        rows.append((int(r), Fraction(x), ideal, closure))
    return SaturatedIdealTable(entries=tuple(rows))


def find_r1(F: FiltrationSpec, e_minus: int | None = None, cap: int = R1_CAP) -> int:
    """Smallest r1 <= cap with F^{r e_minus} V_r full for all r in [r1, 2 r1].

    Fullness is checked both as a point count and through the saturated
    ideal being the unit ideal.  e_minus must sit strictly below the
    filtration's e_min estimate.
    """
    e_minus = F.e_minus if e_minus is None else int(e_minus)
    if not Fraction(e_minus) < F.e_min_est:
        raise ValueError(
            f"e_minus={e_minus} is not below e_min_est={F.e_min_est}")
    for r1 in range(1, cap + 1):
        good = True
        for r in range(r1, 2 * r1 + 1):
            if len(F.value(r, r * e_minus)) != len(F.sections(r)):
                good = False
                break
            ideal, _ = saturate(F, r, r * e_minus)
            if not ideal.is_empty:
                good = False
                break
        if good:
            return r1
    raise R1NotFound(cap)


def _diffs(seq):
    return [b - a for a, b in zip(seq, seq[1:])]


def _stable_leading_difference(values: Sequence, order: int, budget: int) -> Fraction:
    """Last entry of the order-th finite difference, once stable.

    Stability means the (order+1)-st difference vanishes on its last
    three entries; anything less raises NoStabilization rather than
    extrapolating silently.
    """
    d = [Fraction(v) for v in values]
    for _ in range(order):
        d = _diffs(d)
    tail = _diffs(d)
    if len(tail) < 3 or any(t != 0 for t in tail[-3:]):
        raise NoStabilization(budget)
    return d[-1]


def filtration_volume(F: FiltrationSpec, x) -> Fraction:
    """Volume of the x-slice of the filtration, normalised to L = -r0 K.

    Exact for ideal-power filtrations through the blowup volume profile;
    for explicit tables the value is fitted from the dimensions of
    F^{rx} V_r over the longest consecutive run of table rows ending at
    the largest r, and is only as good as that table.
    """
    x = Fraction(x)
    X = F.X
    n = X.dimension
    scale = Fraction(X.r0) ** n
    if F.kind == IDEAL_POWER:
        if x <= 0:
            return scale * anticanonical_volume(X)
        return scale * F.profile.evaluate(x / X.r0)
    rs = sorted(F.table)
    run = [rs[-1]]
    for r in reversed(rs[:-1]):
        if r == run[0] - 1:
            run.insert(0, r)
        else:
            break
    dims = [len(F.value(r, r * x)) for r in run]
    return _stable_leading_difference(dims, n, run[-1])


@dataclass(frozen=True)
class WeightRecord:
    """One k-slice of a weight series.

    level_dims lists (j, dim of the j-th graded piece at level kr); the
    weight identity w = -k r (e_plus - e_minus) h0 + v holds by
    construction and is cross-checked against the direct quotient count
    in the test suite.
    """

    k: int
    h0: int
    v: int
    w: int
    level_dims: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class WeightSeries:
    r: int
    e_plus: int
    e_minus: int
    records: tuple[WeightRecord, ...]


def compute_weight_series(F: FiltrationSpec, r: int, k_max: int = 10, *,
                          e_plus: int | None = None,
                          e_minus: int | None = None) -> WeightSeries:
    """Weight sums of the k-th powers of the level-r step ideals.

    The t-graded product ideals J(k, j) are built by convolving the step
    table with the previous power, chart by chart, with minimalisation
    after every merge; each section's maximal level is then located by
    bisection in j, which the decreasing property of J makes sound.
    """
    r, k_max = int(r), int(k_max)
    if r < 1 or k_max < 1:
        raise ValueError("r and k_max must be positive")
    e_plus = F.e_plus if e_plus is None else int(e_plus)
    e_minus = F.e_minus if e_minus is None else int(e_minus)
    if e_plus <= e_minus:
        raise ValueError("e_plus must exceed e_minus")
    if len(F.value(r, r * e_minus)) != len(F.sections(r)):
        raise ValueError(
            f"F^x V_r not full at x = {r * e_minus}; r={r} is below r1")
    lo, hi = r * e_minus, r * e_plus
    base = {}
    for j in range(lo, hi + 1):
        ideal, _ = saturate(F, r, j)
        base[j] = dict(ideal.chart_gens)
    universe = sorted(set().union(*(set(d) for d in base.values())))

    records = []
    table = base
    for k in range(1, k_max + 1):
        if k > 1:
            table = _convolve_step(base, table, lo, hi, k, universe)
        records.append(_weight_record(F, r, k, lo, hi, table, universe))
    return WeightSeries(r=r, e_plus=e_plus, e_minus=e_minus,
                        records=tuple(records))


def _convolve_step(base: dict, prev: dict, lo: int, hi: int, k: int,
                   universe: Sequence[int]) -> dict:
    """J(k, .) from J(k-1, .): sum over j' of step[j'] * prev[j - j']."""
    plo, phi = (k - 1) * lo, (k - 1) * hi
    out = {}
    for j in range(k * lo, k * hi + 1):
        terms = [(base[j1], prev[j - j1])
                 for j1 in range(max(lo, j - phi), min(hi, j - plo) + 1)]
        per_chart = {}
        for c in universe:
            acc: list[Point] = []
            unit = False
            for first, second in terms:
                ga = first.get(c)
                gb = second.get(c)
                if ga is None and gb is None:
                    unit = True
                    break
                if ga is None:
                    prod = gb
                elif gb is None:
                    prod = ga
                elif len(ga) == 0 or len(gb) == 0:
                    continue
                else:
                    prod = lattice.minkowski_sum(ga, gb)
                if len(prod) == 0:
                    continue
                acc.extend(prod)
            if unit:
                continue
            gens = lattice.minimalize(acc)
            if len(gens) > GENERATOR_CAP:
                raise CombinatorialBlowup(
                    f"{len(gens)} generators at (k={k}, j={j}) "
                    f"exceed the cap {GENERATOR_CAP}")
            per_chart[c] = tuple(gens)
        out[j] = per_chart
    return out


def _weight_record(F: FiltrationSpec, r: int, k: int, lo: int, hi: int,
                   table: dict, universe: Sequence[int]) -> WeightRecord:
    X = F.X
    pts = F.sections(k * r)
    level = k * r * X.r0
    klo, khi = k * lo, k * hi
    images = {c: [tuple(sum(a * b for a, b in zip(row, u)) + level
                        for row in X.charts[c].cone_rays) for u in pts]
              for c in universe}

    def member(i: int, j: int) -> bool:
        for c, gens in table[j].items():
            if not lattice.dominates_any(images[c][i], gens):
                return False
        return True

    histogram = [0] * (khi - klo + 1)
    for i in range(len(pts)):
        if member(i, khi):
            top = khi
        else:
            a, b = klo, khi
            while b - a > 1:
                mid = (a + b) // 2
                if member(i, mid):
                    a = mid
                else:
                    b = mid
            top = a
        histogram[top - klo] += 1

    dims = []
    running = 0
    for j in range(khi, klo, -1):
        running += histogram[j - klo]
        dims.append((j, running))
    dims.reverse()
    v = sum(d for _, d in dims)
    h0 = len(pts)
    e = (hi - lo) // r
    w = -k * r * e * h0 + v
    return WeightRecord(k=k, h0=h0, v=v, w=w, level_dims=tuple(dims))


@dataclass(frozen=True)
class DInftyReport:
    """Sampled and limiting slopes of one filtration."""

    e_plus: int
    e_minus: int
    r1: int
    a_samples: tuple[tuple[int, Fraction], ...]
    a_limit: Fraction
    d_samples: tuple[tuple[int, Fraction], ...]
    d_infty: Fraction
    approximate: bool


def compute_d_infty(F: FiltrationSpec, e_plus: int | None = None,
                    e_minus: int | None = None,
                    r_list: Sequence[int] = (1, 2, 4, 8),
                    k_max: int = 10) -> DInftyReport:
    """Slope samples d_r over r_list and the limit slope d_infty.

    Each A_r comes from the stabilised leading coefficient of v_r(k); the
    limit value is the exact profile integral for ideal-power filtrations
    and the last sample, flagged approximate, otherwise.
    """
    e_plus = F.e_plus if e_plus is None else int(e_plus)
    e_minus = F.e_minus if e_minus is None else int(e_minus)
    if not Fraction(e_plus) > F.e_max_est:
        raise ValueError(f"e_plus={e_plus} must exceed e_max_est={F.e_max_est}")
    if not Fraction(e_minus) < F.e_min_est:
        raise ValueError(
            f"e_minus={e_minus} must sit below e_min_est={F.e_min_est}")
    X = F.X
    n = X.dimension
    vol = anticanonical_volume(X)
    e = e_plus - e_minus
    r1 = find_r1(F, e_minus)
    a_samples = []
    d_samples = []
    for r in r_list:
        r = int(r)
        if r < r1:
            raise ValueError(f"r={r} is below r1={r1}")
        series = compute_weight_series(F, r, k_max,
                                       e_plus=e_plus, e_minus=e_minus)
        lead = _stable_leading_difference(
            [rec.v for rec in series.records], n + 1, k_max)
        a_r = lead / ((n + 1) * Fraction(r * X.r0) ** (n + 1))
        a_samples.append((r, a_r))
        d_samples.append((r, 1 - Fraction(e, X.r0) + a_r / vol))
    if F.kind == IDEAL_POWER:
        a_limit = -Fraction(e_minus) * vol / X.r0 + F.profile.integral()
        approximate = F.profile.approximate
    else:
        a_limit = a_samples[-1][1]
        approximate = True
    d_infty = 1 - Fraction(e, X.r0) + a_limit / vol
    return DInftyReport(e_plus=e_plus, e_minus=e_minus, r1=r1,
                        a_samples=tuple(a_samples), a_limit=a_limit,
                        d_samples=tuple(d_samples), d_infty=d_infty,
                        approximate=approximate)


def induced_ideal_sequence(F: FiltrationSpec, r: int, *,
                           e_plus: int | None = None,
                           e_minus: int | None = None) -> IdealSequenceOnXxA1:
    """The t-graded ideal on X x A^1 whose powers drive the weight series.

    Step j carries the saturated level ideal at x = r*e_minus + j, so the
    sequence has M = r*(e_plus - e_minus) steps, the early ones unit and
    the late ones zero.  Charts must expose dimension-many cone rays
    (every simplicial chart does); otherwise the sequence's unit markers
    would have the wrong arity.
    """
    r = int(r)
    e_plus = F.e_plus if e_plus is None else int(e_plus)
    e_minus = F.e_minus if e_minus is None else int(e_minus)
    n = F.X.dimension
    steps = []
    for j in range(1, r * (e_plus - e_minus) + 1):
        ideal, _ = saturate(F, r, r * e_minus + j)
        for idx, gens in ideal.chart_gens.items():
            if any(len(g) != n for g in gens):
                raise UnsupportedSubscheme(
                    f"chart {idx} has {len(F.X.charts[idx].cone_rays)} cone "
                    f"rays; sequences need {n}-variable exponent charts")
        steps.append(ideal)
    return IdealSequenceOnXxA1(steps=tuple(steps))
