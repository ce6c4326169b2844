"""Piecewise polynomials with exact rational coefficients.

A PiecewisePolynomial is a list of closed-left pieces: piece i is the
polynomial valid on [breakpoints[i], breakpoints[i+1]), except that the
final breakpoint belongs to the last piece.  Coefficients are stored in
ascending degree in the *global* variable x (no per-piece shift), which
makes piece-by-piece comparison against reference polynomials a plain
tuple comparison after trimming trailing zeros.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Sequence

from .errors import OutOfDomain
from .linalg import solve

Poly = tuple[Fraction, ...]


def poly_eval(coeffs: Sequence, x) -> Fraction:
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed([Fraction(v) for v in coeffs]):
        acc = acc * x + c
    return acc


def poly_trim(coeffs: Sequence) -> Poly:
    cs = [Fraction(v) for v in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def poly_antiderivative(coeffs: Sequence) -> Poly:
    return tuple([Fraction(0)] + [Fraction(c) / (i + 1) for i, c in enumerate(coeffs)])


def fit_polynomial(xs: Sequence, ys: Sequence) -> Poly:
    """Exact polynomial of degree < len(xs) through the given points."""
    if len(xs) != len(ys) or not xs:
        raise ValueError("fit_polynomial needs equally many xs and ys")
    n = len(xs)
    rows = [[Fraction(x) ** j for j in range(n)] for x in xs]
    sol = solve(rows, [Fraction(y) for y in ys])
    if sol is None:
        raise ValueError("interpolation nodes are not distinct")
    return tuple(sol)


class PiecewisePolynomial:
    """Continuous piecewise polynomial on [breakpoints[0], breakpoints[-1]]."""

    __slots__ = ("breakpoints", "pieces", "degree_bound")

    def __init__(self, breakpoints: Sequence, pieces: Sequence[Sequence],
                 degree_bound: int | None = None):
        bps = tuple(Fraction(b) for b in breakpoints)
        if len(bps) < 2:
            raise ValueError("need at least two breakpoints")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError(f"breakpoints not strictly increasing: {bps}")
        pcs = tuple(tuple(Fraction(c) for c in p) for p in pieces)
        if len(pcs) != len(bps) - 1:
            raise ValueError(f"{len(pcs)} pieces for {len(bps)} breakpoints")
        for i in range(len(pcs) - 1):
            left = poly_eval(pcs[i], bps[i + 1])
            right = poly_eval(pcs[i + 1], bps[i + 1])
            if left != right:
                raise ValueError(
                    f"discontinuity at {bps[i + 1]}: {left} != {right}")
        deg = max((len(poly_trim(p)) - 1 for p in pcs), default=0)
        deg = max(deg, 0)
        if degree_bound is not None and deg > degree_bound:
            raise ValueError(f"piece degree {deg} exceeds bound {degree_bound}")
        self.breakpoints = bps
        self.pieces = pcs
        self.degree_bound = degree_bound if degree_bound is not None else deg

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    def piece_index(self, x) -> int:
        x = Fraction(x)
        lo, hi = self.domain
        if x < lo or x > hi:
            raise OutOfDomain(f"{x} outside [{lo}, {hi}]")
        if x == hi:
            return len(self.pieces) - 1
        return bisect_right(self.breakpoints, x) - 1

    def evaluate(self, x) -> Fraction:
        return poly_eval(self.pieces[self.piece_index(x)], x)

    __call__ = evaluate

    def integrate(self, a, b, extend_zero: bool = False) -> Fraction:
        """Exact integral over [a, b].

        With extend_zero the function is treated as 0 outside its domain;
        otherwise [a, b] must lie inside it.
        """
        a, b = Fraction(a), Fraction(b)
        if a > b:
            raise ValueError(f"reversed interval [{a}, {b}]")
        lo, hi = self.domain
        if not extend_zero and (a < lo or b > hi):
            raise OutOfDomain(f"[{a}, {b}] outside [{lo}, {hi}]")
        a_eff, b_eff = max(a, lo), min(b, hi)
        if a_eff >= b_eff:
            return Fraction(0)
        total = Fraction(0)
        for i, poly in enumerate(self.pieces):
            left = max(a_eff, self.breakpoints[i])
            right = min(b_eff, self.breakpoints[i + 1])
            if left < right:
                anti = poly_antiderivative(poly)
                total += poly_eval(anti, right) - poly_eval(anti, left)
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewisePolynomial):
            return NotImplemented
        return (self.breakpoints == other.breakpoints
                and tuple(poly_trim(p) for p in self.pieces)
                == tuple(poly_trim(p) for p in other.pieces))

    def __hash__(self):
        return hash((self.breakpoints,
                     tuple(poly_trim(p) for p in self.pieces)))

    def __repr__(self) -> str:
        return (f"PiecewisePolynomial(breakpoints={list(self.breakpoints)}, "
                f"pieces={[list(p) for p in self.pieces]})")
