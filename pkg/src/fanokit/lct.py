"""Log canonical thresholds of monomial data, exactly.

On a smooth chart the threshold of a monomial ideal is the optimum of the
weight LP: minimize the weight sum subject to every generator having
valuation >= 1.  The global value is the minimum over charts carrying a
proper ideal.  Reduced toric boundary divisors short-circuit to 1 through
the global valuation of their ray, which also covers divisors passing
through singular charts.

For ideals on X x A^1 of the form I_M + I_{M-1} t + ... + (t^M) the
routine computes the largest c2 with (X x A^1, ideal^c1 * (t)^c2) sub log
canonical, again chart by chart; the inner minimum over generators is
linearized with one extra LP variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import lattice
from .errors import (EmptyOrFull, FamilyNotGraded, LPInfeasible, LPUnbounded,
                     NotSmoothChart, ZeroIdeal)
from .exactlp import GE, solve_lp
from .model import ToricFanoModel
from .subscheme import IdealSequenceOnXxA1, MonomialSubscheme


def lct_chart(gens: Sequence[Sequence[int]]) -> Fraction | None:
    """Threshold of one chart ideal; None when the chart gives no bound
    (every nonnegative weight has valuation <= 0 on the ideal)."""
    n = len(gens[0])
    objective = [Fraction(1)] * n
    constraints = [(tuple(Fraction(x) for x in g), GE, Fraction(1)) for g in gens]
    try:
        res = solve_lp(objective, constraints)
    except LPInfeasible:
        return None
    return res.value


def lct_monomial(X: ToricFanoModel, Z: MonomialSubscheme, power: int = 1) -> Fraction:
    """lct(X, I_Z^power) for a monomial subscheme with smooth-chart data."""
    if power < 1:
        raise ValueError("power must be >= 1")
    Z.require_usable()
    if Z.boundary_ray is not None:
        # (X, sum of boundary divisors) is log canonical and the ray's own
        # valuation has log discrepancy 1, so the threshold is exactly 1
        return Fraction(1, power)
    best: Fraction | None = None
    for idx in Z.active_chart_indices():
        gens = Z.gens_on(idx)
        assert gens is not None and len(gens) > 0
        chart = X.charts[idx]
        if not chart.smooth:
            raise NotSmoothChart(
                f"{Z.label} lives on the singular chart at {chart.vertex}")
        val = lct_chart(gens)
        if val is not None and (best is None or val < best):
            best = val
    if best is None:
        raise EmptyOrFull(f"{Z.label}: no chart constrains the threshold")
    return best / power


def lct_on_product_with_line(X: ToricFanoModel, S: IdealSequenceOnXxA1,
                             c1) -> Fraction | None:
    """Largest c2 with (X x A^1, induced-ideal^c1 * (t)^c2) sub log canonical.

    Returns None when no finite c2 works (the infimum is -infinity, which
    happens once c1 exceeds the relevant chart threshold).  Requires every
    chart of X to be smooth, since the log discrepancy of a monomial
    valuation is its weight sum only there.
    """
    c1 = Fraction(c1)
    if c1 < 0:
        raise ValueError("c1 must be nonnegative")
    n = X.dimension
    best: Fraction | None = None
    for idx, chart in enumerate(X.charts):
        if not chart.smooth:
            raise NotSmoothChart(f"chart at {chart.vertex} is singular")
        gens = S.product_gens(idx)
        # variables: w_1..w_n, s; minimize sum(w) + 1 - c1*s with
        # s <= <w, g_x> + g_t for every generator
        objective = [Fraction(1)] * n + [-c1]
        constraints = []
        for g in gens:
            row = [Fraction(x) for x in g[:n]] + [Fraction(-1)]
            constraints.append((row, GE, Fraction(-g[n])))
        try:
            res = solve_lp(objective, constraints)
        except LPUnbounded:
            return None
        val = res.value + 1
        if best is None or val < best:
            best = val
    assert best is not None
    return best


@dataclass(frozen=True)
class GradedFamilyReport:
    r_values: tuple[tuple[int, Fraction | None], ...]
    estimate: Fraction | None
    unbounded: bool
    non_decreasing: bool


def graded_family_lct_estimate(X: ToricFanoModel,
                               family: Mapping[int, object],
                               c=1) -> GradedFamilyReport:
    """Threshold estimates along a graded family of ideals.

    ``family`` maps the index r to either a MonomialSubscheme (value is
    lct * r / c) or an IdealSequenceOnXxA1 (value is the product-line c2
    at c1 = c/r).  Pairs r, s with r+s also in the family must satisfy the
    graded inclusion I_r * I_s <= I_{r+s}, checked generator-wise; the
    estimate is the supremum of the values and the report records whether
    they are monotone along increasing r.
    """
    c = Fraction(c)
    r_list = sorted(int(r) for r in family)
    if not r_list or any(r <= 0 for r in r_list):
        raise ValueError("family indices must be positive integers")
    _check_graded(family, r_list)

    values: list[tuple[int, Fraction | None]] = []
    unbounded = False
    for r in r_list:
        member = family[r]
        if isinstance(member, MonomialSubscheme):
            if member.is_empty:
                values.append((r, None))
                unbounded = True
                continue
            values.append((r, lct_monomial(X, member) * r / c))
        elif isinstance(member, IdealSequenceOnXxA1):
            values.append((r, lct_on_product_with_line(X, member, c1=c / r)))
        else:
            raise TypeError(f"unsupported family member type {type(member)!r}")

    finite = [v for _, v in values if v is not None]
    estimate = max(finite) if finite and not unbounded else None
    ordered = [v for _, v in values]
    non_decreasing = all(
        a is None or (b is not None and b >= a)
        for a, b in zip(ordered, ordered[1:]))
    return GradedFamilyReport(r_values=tuple(values), estimate=estimate,
                              unbounded=unbounded, non_decreasing=non_decreasing)


def _check_graded(family: Mapping[int, object], r_list: Sequence[int]) -> None:
    for r in r_list:
        for s in r_list:
            if r > s or (r + s) not in family:
                continue
            a, b, ab = family[r], family[s], family[r + s]
            if isinstance(a, MonomialSubscheme) and isinstance(b, MonomialSubscheme) \
                    and isinstance(ab, MonomialSubscheme):
                if not _product_contained(a, b, ab):
                    raise FamilyNotGraded(f"I_{r} * I_{s} not inside I_{r + s}")
            elif isinstance(a, IdealSequenceOnXxA1) and isinstance(b, IdealSequenceOnXxA1) \
                    and isinstance(ab, IdealSequenceOnXxA1):
                if not _sequence_product_contained(a, b, ab):
                    raise FamilyNotGraded(f"ideal_{r} * ideal_{s} not inside ideal_{r + s}")
            else:
                raise FamilyNotGraded(f"mixed member types at {r}, {s}, {r + s}")


def _product_contained(a: MonomialSubscheme, b: MonomialSubscheme,
                       target: MonomialSubscheme) -> bool:
    idxs = (set(a.active_chart_indices()) | set(b.active_chart_indices())
            | set(target.active_chart_indices()))
    for idx in idxs:
        ga, gb, gt = a.gens_on(idx), b.gens_on(idx), target.gens_on(idx)
        if gt is None:
            continue
        if ga is None and gb is None:
            return False  # unit * unit = unit cannot sit inside a proper ideal
        prod: Sequence[Sequence[int]]
        if ga is None:
            prod = gb if gb is not None else ()
        elif gb is None:
            prod = ga
        else:
            if len(ga) == 0 or len(gb) == 0:
                prod = ()
            else:
                prod = lattice.minkowski_sum(ga, gb)
        if len(gt) == 0:
            if len(prod) != 0:
                return False
            continue
        for g in prod:
            if not lattice.dominates_any(g, gt):
                return False
    return True


def _sequence_product_contained(a: IdealSequenceOnXxA1, b: IdealSequenceOnXxA1,
                                target: IdealSequenceOnXxA1) -> bool:
    idxs = set()
    for seq in (a, b, target):
        for s in seq.steps:
            idxs.update(s.active_chart_indices())
    # charts with no content are unit for every sequence: nothing to check
    for idx in sorted(idxs):
        ga = a.product_gens(idx)
        gb = b.product_gens(idx)
        gt = target.product_gens(idx)
        for g in lattice.minkowski_sum(ga, gb):
            if not lattice.dominates_any(g, gt):
                return False
    return True
