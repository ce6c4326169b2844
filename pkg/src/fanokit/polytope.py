"""Exact rational polytopes in dimension <= 4.

H-representation rows are (normal, offset) meaning <normal, u> >= offset
with a primitive integer normal.  V-representation is the lex-sorted tuple
of rational vertices.  Construction from either side derives the other, so
a RationalPolytope always carries both and they always describe the same
set.

Sizes here are tiny (at most a dozen facets, a handful of vertices), so
vertex enumeration by n-subsets of inequalities and hull facets by
n-subsets of vertices are entirely adequate and keep every step exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Sequence

from . import lattice
from .errors import DegeneratePolytope, LPInfeasible, LPUnbounded, UnboundedPolytope
from .exactlp import GE, LE, solve_lp
from .linalg import Vec, det, dot, lcm_list, rational_primitive, solve, vsub
from .piecewise import PiecewisePolynomial, fit_polynomial

Ineq = tuple[tuple[int, ...], Fraction]


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def enumerate_basic_feasible(dim: int, rows: Sequence[tuple[Sequence, object]]) -> list[Vec]:
    """Vertices of {u : <normal, u> >= offset for all rows}, lex sorted.

    Rows may have rational normals.  Unbounded directions are not detected
    here; callers that care run a recession-cone check first.
    """
    verts: set[Vec] = set()
    for sub in combinations(range(len(rows)), dim):
        sol = solve([rows[i][0] for i in sub], [rows[i][1] for i in sub])
        if sol is None:
            continue
        if all(dot(nr, sol) >= Fraction(off) for nr, off in rows):
            verts.add(sol)
    return sorted(verts)


def _affine_rank(points: Sequence[Vec]) -> int:
    if not points:
        return -1
    base = points[0]
    diffs = [list(vsub(p, base)) for p in points[1:]]
    rank = 0
    cols = len(base)
    for col in range(cols):
        piv = next((i for i in range(rank, len(diffs)) if diffs[i][col] != 0), None)
        if piv is None:
            continue
        diffs[rank], diffs[piv] = diffs[piv], diffs[rank]
        for i in range(len(diffs)):
            if i != rank and diffs[i][col]:
                f = diffs[i][col] / diffs[rank][col]
                diffs[i] = [a - f * b for a, b in zip(diffs[i], diffs[rank])]
        rank += 1
    return rank


def _hyperplane_normal(points: Sequence[Vec]) -> tuple[int, ...] | None:
    """Primitive integer normal of the hyperplane through dim points, or None."""
    dim = len(points[0])
    diffs = [vsub(p, points[0]) for p in points[1:]]
    normal = []
    idx = list(range(dim))
    for j in range(dim):
        sub = [[row[c] for c in idx if c != j] for row in diffs]
        minor = det(sub) if sub else Fraction(1)
        normal.append(minor if j % 2 == 0 else -minor)
    if all(x == 0 for x in normal):
        return None
    return rational_primitive(normal)


def hull_facets(dim: int, vertices: Sequence[Vec]) -> list[tuple[tuple[int, ...], Fraction, tuple[Vec, ...]]]:
    """Facets of conv(vertices) as (inward normal, offset, member vertices)."""
    if dim == 1:
        xs = sorted(v[0] for v in vertices)
        return [((1,), xs[0], ((xs[0],),)), ((-1,), -xs[-1], ((xs[-1],),))]
    facets: dict[tuple, tuple] = {}
    for sub in combinations(vertices, dim):
        normal = _hyperplane_normal(list(sub))
        if normal is None:
            continue
        offset = dot(normal, sub[0])
        sides = [dot(normal, v) - offset for v in vertices]
        if all(s >= 0 for s in sides):
            pass
        elif all(s <= 0 for s in sides):
            normal = tuple(-x for x in normal)
            offset = -offset
        else:
            continue
        members = tuple(v for v in vertices if dot(normal, v) == offset)
        if _affine_rank(members) == dim - 1:
            facets[(normal, offset)] = (normal, offset, members)
    return sorted(facets.values(), key=lambda f: (f[0], f[1]))


def _volume_rec(dim: int, vertices: Sequence[Vec]) -> Fraction:
    vertices = sorted(set(vertices))
    if _affine_rank(vertices) < dim:
        return Fraction(0)
    if dim == 1:
        xs = [v[0] for v in vertices]
        return max(xs) - min(xs)
    apex = vertices[0]
    total = Fraction(0)
    for normal, offset, members in hull_facets(dim, vertices):
        height = dot(normal, apex) - offset
        if height == 0:
            continue
        j = max(range(dim), key=lambda c: abs(normal[c]))
        proj = [tuple(w[c] for c in range(dim) if c != j) for w in members]
        total += height * _volume_rec(dim - 1, proj) / abs(normal[j])
    return total / dim


class RationalPolytope:
    """Bounded full-dimensional rational polytope with both representations."""

    __slots__ = ("dimension", "vertices", "inequalities")

    def __init__(self, dimension: int, vertices: Sequence[Sequence],
                 inequalities: Sequence[Ineq]):
        self.dimension = dimension
        self.vertices: tuple[Vec, ...] = tuple(
            tuple(Fraction(x) for x in v) for v in vertices)
        self.inequalities: tuple[Ineq, ...] = tuple(
            (tuple(int(a) for a in nr), Fraction(off)) for nr, off in inequalities)
        self._validate()

    def _validate(self) -> None:
        n = self.dimension
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertices")
        for v in self.vertices:
            if len(v) != n:
                raise ValueError(f"vertex arity {len(v)} != {n}")
            tight = sum(1 for nr, off in self.inequalities if dot(nr, v) == off)
            if tight < n:
                raise ValueError(f"vertex {v} tight on only {tight} inequalities")
            if any(dot(nr, v) < off for nr, off in self.inequalities):
                raise ValueError(f"vertex {v} violates an inequality")

    @classmethod
    def from_vertices(cls, dimension: int, vertices: Sequence[Sequence]) -> "RationalPolytope":
        verts = sorted({tuple(Fraction(x) for x in v) for v in vertices})
        if _affine_rank(verts) < dimension:
            raise DegeneratePolytope(
                f"vertex set spans affine dimension {_affine_rank(verts)} < {dimension}")
        facets = hull_facets(dimension, verts)
        ineqs = [(nr, off) for nr, off, _ in facets]
        hull_verts = enumerate_basic_feasible(dimension, ineqs)
        return cls(dimension, hull_verts, ineqs)

    @classmethod
    def from_inequalities(cls, dimension: int, rows: Sequence[tuple[Sequence, object]]) -> "RationalPolytope":
        norm_rows = [(tuple(Fraction(x) for x in nr), Fraction(off)) for nr, off in rows]
        if _recession_cone_nontrivial(dimension, [nr for nr, _ in norm_rows]):
            raise UnboundedPolytope("inequality system has a nonzero recession direction")
        verts = enumerate_basic_feasible(dimension, norm_rows)
        if not verts:
            raise DegeneratePolytope("inequality system is infeasible")
        if _affine_rank(verts) < dimension:
            raise DegeneratePolytope("solution set is not full-dimensional")
        return cls.from_vertices(dimension, verts)

    def bounding_box(self, scale: Fraction = Fraction(1)) -> tuple[list[int], list[int]]:
        lo = [_ceil(scale * min(v[i] for v in self.vertices)) for i in range(self.dimension)]
        hi = [_floor(scale * max(v[i] for v in self.vertices)) for i in range(self.dimension)]
        return lo, hi

    def contains(self, point: Sequence) -> bool:
        return all(dot(nr, point) >= off for nr, off in self.inequalities)

    def to_dict(self) -> dict:
        return {
            "dim": self.dimension,
            "vertices": [list(v) for v in self.vertices],
            "inequalities": [{"normal": list(nr), "offset": off}
                             for nr, off in self.inequalities],
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPolytope):
            return NotImplemented
        return (self.dimension == other.dimension
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.dimension, self.vertices))

    def __repr__(self) -> str:
        return f"RationalPolytope(dim={self.dimension}, vertices={list(self.vertices)})"


def _recession_cone_nontrivial(dim: int, normals: Sequence[Vec]) -> bool:
    """True when {d : <normal, d> >= 0 for all normals} contains d != 0.

    The cone is scale-invariant, so it is nontrivial iff it contains a
    point with some coordinate equal to +1 or -1; that is 2*dim exact LP
    feasibility checks over d = dplus - dminus.
    """
    nvar = 2 * dim
    zero_obj = [Fraction(0)] * nvar
    base: list[tuple[list[Fraction], str, Fraction]] = []
    for nr in normals:
        row = [Fraction(x) for x in nr] + [-Fraction(x) for x in nr]
        base.append((row, GE, Fraction(0)))
    for i in range(dim):
        for sign in (1, -1):
            row = [Fraction(0)] * nvar
            row[i] = Fraction(sign)
            row[dim + i] = Fraction(-sign)
            try:
                solve_lp(zero_obj, base + [(row, GE, Fraction(1))])
                return True
            except LPInfeasible:
                continue
    return False


def polytope_from_rays(dimension: int, rays: Sequence[Sequence[int]]) -> RationalPolytope:
    """The polytope {u : <u, ray> >= -1 for every ray}.

    Raises UnboundedPolytope when the rays do not positively span, and
    DegeneratePolytope when the result is not full-dimensional.
    """
    rows = [(tuple(int(x) for x in ray), Fraction(-1)) for ray in rays]
    for ray, _ in rows:
        if len(ray) != dimension:
            raise ValueError(f"ray arity {len(ray)} != {dimension}")
        if all(x == 0 for x in ray):
            raise ValueError("zero ray")
    return RationalPolytope.from_inequalities(dimension, rows)


def lattice_points(P: RationalPolytope, r) -> list[tuple[int, ...]]:
    """Integer points of r*P in ascending lex order, exactly."""
    r = Fraction(r)
    if r < 0:
        raise ValueError("negative scale")
    if r == 0:
        return [tuple([0] * P.dimension)]
    normals = [nr for nr, _ in P.inequalities]
    offsets = [_ceil(r * off) for _, off in P.inequalities]
    lo, hi = P.bounding_box(r)
    if any(a > b for a, b in zip(lo, hi)):
        return []
    return lattice.enum_points(normals, offsets, lo, hi)


def euclidean_volume(P: RationalPolytope) -> Fraction:
    """Exact Lebesgue volume via a pulling triangulation from the lex-min vertex."""
    return _volume_rec(P.dimension, P.vertices)


def polytope_edges(P: RationalPolytope) -> list[tuple[int, int]]:
    """Index pairs of vertices joined by an edge.

    Two vertices span an edge iff the normals tight at both have rank n-1,
    i.e. the smallest face containing both is one-dimensional.
    """
    n = P.dimension
    tight_sets = []
    for v in P.vertices:
        tight_sets.append([nr for nr, off in P.inequalities if dot(nr, v) == off])
    out = []
    for i in range(len(P.vertices)):
        for j in range(i + 1, len(P.vertices)):
            common = [nr for nr in tight_sets[i]
                      if any(nr == m for m in tight_sets[j])]
            if not common:
                continue
            origin = tuple(Fraction(0) for _ in range(n))
            rank = _affine_rank([origin] + [tuple(Fraction(x) for x in nr)
                                            for nr in common])
            if rank == n - 1:
                out.append((i, j))
    return out


def truncated_volume(P: RationalPolytope, lam_linear: Sequence, lam_offset, x) -> Fraction:
    """Volume of P intersected with {lam_linear . u + lam_offset >= x}."""
    rows: list[tuple[Sequence, object]] = list(P.inequalities)
    rows.append((tuple(Fraction(c) for c in lam_linear), Fraction(x) - Fraction(lam_offset)))
    verts = enumerate_basic_feasible(P.dimension, rows)
    return _volume_rec(P.dimension, verts)


def sliced_volume_function(P: RationalPolytope, lam_linear: Sequence,
                           lam_offset=0) -> PiecewisePolynomial:
    """x -> n! * vol(P ∩ {lam(u) >= x}) as an exact piecewise polynomial.

    Breakpoints are exactly the deduplicated sorted values of lam at the
    vertices of P; between consecutive breakpoints the function is a
    polynomial of degree <= n, recovered by exact interpolation at n+1
    rational sample points.
    """
    n = P.dimension
    lam_linear = tuple(Fraction(c) for c in lam_linear)
    lam_offset = Fraction(lam_offset)
    values = sorted({dot(lam_linear, v) + lam_offset for v in P.vertices})
    if len(values) < 2:
        raise ValueError("slicing functional is constant on the polytope")
    nfact = factorial(n)
    pieces = []
    for a, b in zip(values, values[1:]):
        xs = [a + (b - a) * Fraction(i, n) for i in range(n + 1)] if n >= 1 else [a]
        ys = [nfact * truncated_volume(P, lam_linear, lam_offset, x) for x in xs]
        pieces.append(fit_polynomial(xs, ys))
    return PiecewisePolynomial(values, pieces, degree_bound=n)
