"""Independent oracles used by the test suite.

Nothing in here imports computational code from the package beyond plain
data types; every quantity is recomputed with a different algorithm and,
where feasible, different arithmetic (explicit Fraction loops instead of
the integer kernels).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import factorial


def _pseudo_angle(dx: Fraction, dy: Fraction):
    """Exact rational key strictly increasing with the true angle in [0, 2pi)."""
    if dx > 0 and dy >= 0:
        return (0, dy / (dx + dy))
    if dx <= 0 < dy:
        return (1, -dx / (-dx + dy))
    if dx < 0 and dy <= 0:
        return (2, -dy / (-dx - dy))
    return (3, dx / (dx - dy))


def shoelace_area(vertices) -> Fraction:
    """Area of a convex polygon given in any order (sorted internally by angle)."""
    verts = [tuple(Fraction(x) for x in v) for v in vertices]
    cx = sum(v[0] for v in verts) / len(verts)
    cy = sum(v[1] for v in verts) / len(verts)
    ordered = sorted(verts, key=lambda v: _pseudo_angle(v[0] - cx, v[1] - cy))
    s = Fraction(0)
    for (x1, y1), (x2, y2) in zip(ordered, ordered[1:] + ordered[:1]):
        s += x1 * y2 - x2 * y1
    return abs(s) / 2


def box_lattice_count(inequalities, lo, hi) -> int:
    """Count integer points in the box satisfying <normal,u> >= offset rows.

    Fraction arithmetic and reversed iteration order on purpose: this is
    the independent twin of the package's integer kernel.
    """
    rows = [(tuple(Fraction(a) for a in nr), Fraction(off)) for nr, off in inequalities]
    count = 0
    ranges = [range(int(b), int(a) - 1, -1) for a, b in zip(lo, hi)]
    for u in product(*ranges):
        if all(sum(a * x for a, x in zip(nr, u)) >= off for nr, off in rows):
            count += 1
    return count


def finite_difference_leading(values, degree) -> Fraction:
    """Leading coefficient of the degree-d polynomial through values at 0,1,2,...

    Requires len(values) >= degree + 1; uses the first degree+1 entries.
    """
    diffs = [Fraction(v) for v in values]
    for _ in range(degree):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    return diffs[0] / factorial(degree)


def ehrhart_volume(count_at, dim, stride=1) -> Fraction:
    """Volume of a polytope from lattice counts c(stride*k), k = 0..dim.

    The counts grow like vol * (stride*k)^dim, so the dim-th finite
    difference recovers vol * stride^dim * dim! exactly once the counting
    function is polynomial along the stride.
    """
    values = [count_at(stride * k) for k in range(dim + 1)]
    lead = finite_difference_leading(values, dim)
    return lead / Fraction(stride) ** dim


def bruteforce_lct_chart(gens, wmax=6):
    """min (sum w) / (min_g <w,g>) over nonzero integer weights 0 <= w_i <= wmax.

    Returns None when every enumerated weight has valuation 0 on the ideal
    (unit-like within the box).  The box is verified against the LP on the
    fixed seeds used by the suite.
    """
    gens = [tuple(int(x) for x in g) for g in gens]
    if not gens:
        return None
    n = len(gens[0])
    best = None
    for w in product(range(wmax + 1), repeat=n):
        if all(x == 0 for x in w):
            continue
        val = min(sum(a * b for a, b in zip(w, g)) for g in gens)
        if val <= 0:
            continue
        ratio = Fraction(sum(w), val)
        if best is None or ratio < best:
            best = ratio
    return best


def monomial_power_membership(exponent, gens, power) -> bool:
    """Is x^exponent in the power I^power of the monomial ideal with these gens?

    Direct expansion of all ways to write the exponent as a sum of `power`
    generators plus slack; done by recursion so it shares nothing with the
    Minkowski-sum route in the package.
    """
    gens = [tuple(int(x) for x in g) for g in gens]
    exponent = tuple(int(x) for x in exponent)
    if power <= 0:
        return all(e >= 0 for e in exponent)

    def rec(remaining, k):
        if any(e < 0 for e in remaining):
            return False
        if k == 0:
            return True
        for g in gens:
            if rec(tuple(e - x for e, x in zip(remaining, g)), k - 1):
                return True
        return False

    return rec(exponent, power)
