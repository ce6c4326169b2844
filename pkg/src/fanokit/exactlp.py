"""Exact linear programming over the rationals.

A small dense two-phase simplex with Bland's anti-cycling rule, run
entirely in fractions.Fraction.  Problems in this package have at most a
few dozen rows and columns, so no sparsity or revised-simplex machinery is
warranted; what matters is that the optimum comes back as an exact
rational, because downstream code tests signs and exact equalities on it.

The entry point is :func:`solve_lp` for

    minimize    c . x
    subject to  row . x  (<=|>=|==)  rhs   for each constraint,
                x >= 0.

Raises LPInfeasible / LPUnbounded; otherwise returns an LPResult whose
``value`` and ``x`` are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import LPInfeasible, LPUnbounded

GE = ">="
LE = "<="
EQ = "=="

_FLIP = {GE: LE, LE: GE, EQ: EQ}


@dataclass(frozen=True)
class LPResult:
    x: tuple[Fraction, ...]
    value: Fraction


def _pivot(T: list[list[Fraction]], z: list[Fraction], basis: list[int],
           row: int, col: int) -> None:
    piv = T[row][col]
    T[row] = [v / piv for v in T[row]]
    for i, r in enumerate(T):
        if i != row and r[col]:
            f = r[col]
            T[i] = [a - f * b for a, b in zip(r, T[row])]
    if z[col]:
        f = z[col]
        z[:] = [a - f * b for a, b in zip(z, T[row])]
    basis[row] = col


def _optimize(T: list[list[Fraction]], z: list[Fraction], basis: list[int],
              allowed: Sequence[bool]) -> None:
    """Pivot to optimality under Bland's rule; raises LPUnbounded."""
    ncols = len(z) - 1
    while True:
        col = next((j for j in range(ncols) if allowed[j] and z[j] < 0), None)
        if col is None:
            return
        best_row = None
        best_ratio = None
        for i, r in enumerate(T):
            if r[col] > 0:
                ratio = r[ncols] / r[col]
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[best_row])):
                    best_row, best_ratio = i, ratio
        if best_row is None:
            raise LPUnbounded("objective decreases without bound")
        _pivot(T, z, basis, best_row, col)


def solve_lp(minimize: Sequence, constraints: Sequence[tuple[Sequence, str, object]]) -> LPResult:
    c = [Fraction(v) for v in minimize]
    n = len(c)

    rows: list[tuple[list[Fraction], str, Fraction]] = []
    for coeffs, sense, rhs in constraints:
        coeffs = [Fraction(v) for v in coeffs]
        if len(coeffs) != n:
            raise ValueError(f"constraint arity {len(coeffs)} != {n}")
        if sense not in (GE, LE, EQ):
            raise ValueError(f"unknown sense {sense!r}")
        rhs = Fraction(rhs)
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
            sense = _FLIP[sense]
        rows.append((coeffs, sense, rhs))

    if not rows:
        if any(v < 0 for v in c):
            raise LPUnbounded("no constraints and a negative cost entry")
        return LPResult(tuple(Fraction(0) for _ in range(n)), Fraction(0))

    # Column layout: structural | slack/surplus | artificial.
    ncols = n
    slack_col: dict[int, int] = {}
    for i, (_, sense, _) in enumerate(rows):
        if sense in (LE, GE):
            slack_col[i] = ncols
            ncols += 1
    art_col: dict[int, int] = {}
    for i, (_, sense, _) in enumerate(rows):
        if sense in (GE, EQ):
            art_col[i] = ncols
            ncols += 1
    art_set = set(art_col.values())

    T: list[list[Fraction]] = []
    basis: list[int] = []
    zero = Fraction(0)
    for i, (coeffs, sense, rhs) in enumerate(rows):
        row = [zero] * (ncols + 1)
        row[:n] = coeffs
        if sense == LE:
            row[slack_col[i]] = Fraction(1)
            basis.append(slack_col[i])
        elif sense == GE:
            row[slack_col[i]] = Fraction(-1)
            row[art_col[i]] = Fraction(1)
            basis.append(art_col[i])
        else:
            row[art_col[i]] = Fraction(1)
            basis.append(art_col[i])
        row[ncols] = rhs
        T.append(row)

    if art_set:
        z = [zero] * (ncols + 1)
        for j in art_set:
            z[j] = Fraction(1)
        for i, b in enumerate(basis):
            if b in art_set:
                z = [a - t for a, t in zip(z, T[i])]
        # Artificial columns are barred from entering; they start basic and
        # once pivoted out are never needed again.
        allowed = [j not in art_set for j in range(ncols)]
        _optimize(T, z, basis, allowed)
        if -z[ncols] != 0:
            raise LPInfeasible("phase-1 optimum is positive")
        # Drive leftover zero-level artificials out of the basis.
        for i in range(len(T) - 1, -1, -1):
            if basis[i] in art_set:
                col = next((j for j in range(ncols)
                            if j not in art_set and T[i][j] != 0), None)
                if col is None:
                    del T[i]
                    del basis[i]
                else:
                    _pivot(T, z, basis, i, col)

    z = [zero] * (ncols + 1)
    z[:n] = c
    for i, b in enumerate(basis):
        if z[b]:
            f = z[b]
            z = [a - f * t for a, t in zip(z, T[i])]
    allowed = [j not in art_set for j in range(ncols)]
    _optimize(T, z, basis, allowed)

    x = [zero] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = T[i][len(z) - 1]
    return LPResult(tuple(x), -z[len(z) - 1])
