"""Independent cross-check routes.

Everything here recomputes a quantity the main modules produce, using a
deliberately different algorithm: plain enumeration loops instead of the
lattice kernels, combinatorial vertex scans instead of the simplex
solver.  Keep it that way; the whole point is that a bug would have to
occur twice, in two unrelated pieces of code, to slip through.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import SizeCap
from .model import ToricFanoModel, anticanonical_volume
from .piecewise import PiecewisePolynomial, fit_polynomial
from .polytope import enumerate_basic_feasible, lattice_points
from .subscheme import IdealSequenceOnXxA1, MonomialSubscheme

_ORACLE_CAP = 2_000_000

ORACLE_METHODS = ("LATTICE_COUNT", "VALUATION_ENUM", "HAND_FORMULA")


@dataclass(frozen=True)
class OracleResult:
    """One independently recomputed quantity, as stored in golden reports.

    parameters is a sorted tuple of (name, value-string) pairs; together
    with the method it pins the computation down, so equal parameters
    must reproduce the value bit for bit.
    """

    quantity: str
    method: str
    value: Fraction
    parameters: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.method not in ORACLE_METHODS:
            raise ValueError(f"unknown oracle method {self.method!r}")
        object.__setattr__(self, "value", Fraction(self.value))
        object.__setattr__(self, "parameters", tuple(
            (str(k), str(v)) for k, v in sorted(self.parameters)))


def oracle_h0_quotient(X: ToricFanoModel, sequence: IdealSequenceOnXxA1,
                       r: int, k: int) -> int:
    """Dimension of sections of L^{kr} x O(A^1) modulo the k-th ideal power.

    Direct (n+1)-variable enumeration: a monomial section survives in the
    quotient when at least one chart fails to put it inside the power.
    No shared code with the weight-series path; the inner loops are
    written out longhand on purpose.
    """
    if k < 1 or r < 1:
        raise ValueError("k and r must be positive")
    M = sequence.M
    level = k * r * X.r0
    pts = lattice_points(X.polytope, level)
    if len(pts) * k * M > _ORACLE_CAP:
        raise SizeCap(f"oracle refuses {len(pts)} points x {k * M} levels")

    # k-th power of the (x, t)-ideal on each chart, by brute composition
    chart_powers: dict[int, list[tuple[tuple[int, ...], int]] | None] = {}
    for idx in range(len(X.charts)):
        base = _xt_gens(sequence, idx)
        if base is None:            # unit on this chart: power stays unit
            chart_powers[idx] = None
            continue
        power = base
        for _ in range(k - 1):
            power = _xt_product(power, base)
        chart_powers[idx] = power

    survivors = 0
    for u in pts:
        for m in range(k * M):
            for idx, chart in enumerate(X.charts):
                gens = chart_powers[idx]
                if gens is None:
                    continue
                a = chart.exponents(u, level)
                if not any(all(ai >= gi for ai, gi in zip(a, g)) and m >= gm
                           for g, gm in gens):
                    survivors += 1
                    break
    return survivors


def _xt_gens(sequence: IdealSequenceOnXxA1,
             idx: int) -> list[tuple[tuple[int, ...], int]] | None:
    M = sequence.M
    out: list[tuple[tuple[int, ...], int]] = [(tuple([0] * sequence.steps[0].dimension), M)]
    unit = False
    for j, step in enumerate(sequence.steps, start=1):
        gens = step.gens_on(idx)
        if gens is None:
            if M - j == 0:
                unit = True
            out.append((tuple([0] * step.dimension), M - j))
        else:
            out.extend((g, M - j) for g in gens)
    if unit:
        return None
    return _xt_minimal(out)


def _xt_product(a: list[tuple[tuple[int, ...], int]],
                b: list[tuple[tuple[int, ...], int]]) -> list[tuple[tuple[int, ...], int]]:
    summed = {(tuple(x + y for x, y in zip(ga, gb)), ma + mb)
              for ga, ma in a for gb, mb in b}
    return _xt_minimal(list(summed))


def _xt_minimal(gens: list[tuple[tuple[int, ...], int]]) -> list[tuple[tuple[int, ...], int]]:
    out = []
    for g, m in gens:
        keep = True
        for h, mh in gens:
            if (h, mh) != (g, m) and mh <= m and all(hi <= gi for hi, gi in zip(h, g)):
                keep = False
                break
        if keep:
            out.append((g, m))
    return sorted(set(out))


def bruteforce_lct(gens) -> Fraction | None:
    """Log canonical threshold by vertex scan of the dual region.

    Enumerates basic feasible points of {w >= 0, <g, w> >= 1} directly
    and minimizes the coordinate sum, bypassing the simplex code.
    Returns None when no generator constrains anything (unit ideal).
    """
    gens = [g for g in gens if any(g)]
    if not gens:
        return None
    n = len(gens[0])
    rows = [(tuple(Fraction(int(i == j)) for i in range(n)), Fraction(0))
            for j in range(n)]
    rows += [(tuple(Fraction(gi) for gi in g), Fraction(1)) for g in gens]
    verts = enumerate_basic_feasible(n, rows)
    if not verts:
        return None
    return min(sum(v, Fraction(0)) for v in verts)


def counting_profile(X: ToricFanoModel, Z: MonomialSubscheme,
                     k: int = 8) -> "BlowupVolumeProfile":
    """Finite-level counting surrogate for the volume profile.

    Samples normalized section counts of multiples killed to increasing
    ideal powers and joins them piecewise linearly.  Marked approximate:
    the exact engine is reserved for integrally closed chart data.
    """
    from .volumes import BlowupVolumeProfile

    Z.require_usable()
    n = X.dimension
    pts = lattice_points(X.polytope, k)
    if not pts:
        raise SizeCap("no sections at sampling level")
    charts = {idx: X.charts[idx] for idx in Z.active_chart_indices()}

    scale = Fraction(factorial(n), k ** n)
    values = [scale * len(pts)]
    power = None
    j = 0
    while values[-1] > 0:
        j += 1
        power = Z if j == 1 else Z.power(j)
        count = 0
        for u in pts:
            ok = True
            for idx, chart in charts.items():
                gens = power.gens_on(idx)
                if gens is None:
                    continue
                a = chart.exponents(u, k)
                if not any(all(ai >= gi for ai, gi in zip(a, g)) for g in gens):
                    ok = False
                    break
            if ok:
                count += 1
        values.append(scale * count)
        if j > 64 * k:
            raise SizeCap("counting profile failed to reach zero")

    breaks = [Fraction(i, k) for i in range(len(values))]
    pieces = [fit_polynomial([breaks[i], breaks[i + 1]],
                             [values[i], values[i + 1]])
              for i in range(len(values) - 1)]
    pp = PiecewisePolynomial(breaks, pieces, degree_bound=n)
    return BlowupVolumeProfile(subscheme_label=Z.label,
                               total_volume=anticanonical_volume(X),
                               tau=breaks[-1], function=pp, approximate=True)
