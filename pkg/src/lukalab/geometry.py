"""Exact rational geometry shared by the whole workbench.

Coordinates, coefficients and results are Fractions; every comparison is an
exact equality or exact sign test.  The module provides affine functionals,
half-space polyhedra inside the unit cube, an exact LP front end, flag
simplices of differential valuations with their lexicographic sign data, and
a vertex-tracked convex-cell type used by the piecewise-linear engine.

Integer conventions used throughout the internals:

* a point is ``(den, n1, ..., nn)`` representing ``(n1/den, ..., nn/den)``,
  ``den > 0``, jointly reduced;
* a constraint or linear form is a primitive tuple ``(c0, c1, ..., cn)``
  representing ``c0 + c1 x1 + ... + cn xn`` (constraints mean ``>= 0``);
* ``c0 * den + sum(ci * ni)`` is ``den`` times the form's value at a point,
  so its sign is the sign of the true value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from operator import mul
from typing import Iterable, Sequence

from . import simplex

Rat = Fraction
Point = tuple[Fraction, ...]

OPTIMAL = simplex.OPTIMAL
INFEASIBLE = simplex.INFEASIBLE
UNBOUNDED = simplex.UNBOUNDED


# === rational parsing and formatting ===================================

def rat(text: str | int | Fraction) -> Fraction:
    """Parse 'p/q' or 'p' into an exact rational."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(text.strip())


def format_rat(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_point(text: str) -> Point:
    """Comma-separated rationals, e.g. '1/2, 3/4'."""
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty point")
    return tuple(rat(p) for p in parts)


def format_point(point: Sequence[Fraction]) -> str:
    return ",".join(format_rat(c) for c in point)


def scale_point(point: Sequence[Fraction]) -> tuple[int, ...]:
    """(den, n1..nn) integer form of a rational point."""
    fracs = [Fraction(c) for c in point]
    den = math.lcm(*(c.denominator for c in fracs)) if fracs else 1
    return (den, *(c.numerator * (den // c.denominator) for c in fracs))


def unscale_point(ip: Sequence[int]) -> Point:
    den = ip[0]
    return tuple(Fraction(n, den) for n in ip[1:])


def _reduce_ints(values: Iterable[int]) -> tuple[int, ...]:
    vals = tuple(values)
    g = 0
    for v in vals:
        g = math.gcd(g, v)
    if g > 1:
        vals = tuple(v // g for v in vals)
    return vals


# === affine functionals ================================================

@dataclass(frozen=True)
class AffineFn:
    """c0 + c1 x1 + ... + cn xn with exact rational coefficients."""

    const: Fraction
    coeffs: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != len(self.coeffs):
            raise ValueError(
                f"point of dimension {len(point)} fed to an affine form "
                f"of dimension {len(self.coeffs)}"
            )
        total = self.const
        for c, x in zip(self.coeffs, point):
            total += c * x
        return total

    def gradient_dot(self, direction: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for c, u in zip(self.coeffs, direction):
            total += c * u
        return total

    def scaled(self) -> tuple[int, ...]:
        """Primitive integer tuple (c0, c1..cn) with the same sign behaviour."""
        den = math.lcm(
            self.const.denominator, *(c.denominator for c in self.coeffs)
        ) if self.coeffs else self.const.denominator
        ints = (self.const.numerator * (den // self.const.denominator),) + tuple(
            c.numerator * (den // c.denominator) for c in self.coeffs
        )
        return _reduce_ints(ints)


def affine_from_ints(ints: Sequence[int], den: int = 1) -> AffineFn:
    return AffineFn(
        Fraction(ints[0], den), tuple(Fraction(c, den) for c in ints[1:])
    )


def _dot_h(form: Sequence[int], ipoint: Sequence[int]) -> int:
    """den * value of the integer form at the integer point; sign-exact."""
    total = form[0] * ipoint[0] + sum(map(mul, form[1:], ipoint[1:]))
    return total


# === polyhedra =========================================================

@dataclass(frozen=True)
class Polyhedron:
    """Closed intersection of half-spaces {h >= 0}."""

    dim: int
    constraints: tuple[AffineFn, ...]

    def __post_init__(self) -> None:
        for h in self.constraints:
            if h.dim != self.dim:
                raise ValueError("constraint dimension mismatch")


def contains(region: Polyhedron, point: Sequence[Fraction]) -> bool:
    return all(h(point) >= 0 for h in region.constraints)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: Point | None = None

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def lp_min(objective: AffineFn, region: Polyhedron) -> LPResult:
    """Exact minimum of an affine objective over a closed polyhedron."""
    rows = [h.scaled() for h in region.constraints]
    den = math.lcm(
        objective.const.denominator,
        *(c.denominator for c in objective.coeffs),
    ) if objective.coeffs else objective.const.denominator
    obj = (objective.const.numerator * (den // objective.const.denominator),) + tuple(
        c.numerator * (den // c.denominator) for c in objective.coeffs
    )
    status, value, point = simplex.solve(region.dim, rows, obj)
    if status != OPTIMAL:
        return LPResult(status)
    return LPResult(OPTIMAL, value / den, point)


def feasible_point(region: Polyhedron) -> Point | None:
    rows = [h.scaled() for h in region.constraints]
    return simplex.feasible_point(region.dim, rows)


def cube_faces(n: int) -> list[AffineFn]:
    """The 2n faces of [0,1]^n as constraints: x_i >= 0 and 1 - x_i >= 0."""
    faces = []
    zero, one = Fraction(0), Fraction(1)
    for i in range(n):
        faces.append(AffineFn(zero, tuple(one if j == i else zero for j in range(n))))
        faces.append(AffineFn(one, tuple(-one if j == i else zero for j in range(n))))
    return faces


def unit_cube(n: int) -> Polyhedron:
    return Polyhedron(n, tuple(cube_faces(n)))


def in_cube(point: Sequence[Fraction]) -> bool:
    return all(0 <= c <= 1 for c in point)


def vertices_of(region: Polyhedron) -> list[Point]:
    """All vertices of a polyhedron in dimension <= 3 by exact enumeration
    of constraint subsets.  Meant for small systems."""
    n = region.dim
    if n > 3:
        raise ValueError("vertex enumeration supported for dimension <= 3")
    forms = [h.scaled() for h in region.constraints]
    found: dict[tuple[int, ...], Point] = {}
    for subset in combinations(range(len(forms)), n):
        mat = [forms[i] for i in subset]
        pt = _solve_square(mat, n)
        if pt is None:
            continue
        key = scale_point(pt)
        if key in found:
            continue
        if all(_dot_h(f, key) >= 0 for f in forms):
            found[key] = pt
    return list(found.values())


def _solve_square(rows: list[tuple[int, ...]], n: int) -> Point | None:
    """Solve c0 + c.x = 0 for n rows; None if singular."""
    a = [[Fraction(r[1 + j]) for j in range(n)] + [Fraction(-r[0])] for r in rows]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [v / inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return tuple(a[r][n] for r in range(n))


# === flag simplices and lexicographic signs ============================

@dataclass(frozen=True)
class Simplex:
    """Convex hull of an ordered vertex list."""

    vertices: tuple[Point, ...]

    @property
    def dim(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0


def flag_simplex(valuation, m: int) -> Simplex:
    """T_{U,m}: vertices u0, u0 + u1/m, u0 + u1/m + u2/m^2, ...

    ``valuation`` is anything with ``base`` and ``directions`` attributes.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    verts = [tuple(valuation.base)]
    current = list(valuation.base)
    scale = Fraction(1)
    for u in valuation.directions:
        scale /= m
        current = [c + scale * d for c, d in zip(current, u)]
        verts.append(tuple(current))
    return Simplex(tuple(verts))


def lex_sequence(h: AffineFn, valuation) -> tuple[Fraction, ...]:
    """(h(u0), grad h . u1, ..., grad h . ut)."""
    seq = [h(tuple(valuation.base))]
    for u in valuation.directions:
        seq.append(h.gradient_dot(u))
    return tuple(seq)


def lex_sign(h: AffineFn, valuation) -> int:
    """Sign of the first nonzero entry of the lex sequence; 0 if all vanish.

    This is the eventual sign of h on the flag simplex T_{U,m} as m grows:
    h at the i-th simplex vertex is sum_{k<=i} c_k / m^k, whose sign for all
    large m is decided by the first nonzero coefficient.
    """
    for c in lex_sequence(h, valuation):
        if c != 0:
            return 1 if c > 0 else -1
    return 0


def sign_threshold(h: AffineFn, valuation) -> int:
    """m* such that for every m >= m*, the sign of h at every vertex of
    T_{U,m} equals lex_sign (or h vanishes there exactly).

    With c_j the first nonzero lex coefficient, any m > sum_{k>j}|c_k| / |c_j|
    makes the tail too small to flip the sign; the same bound covers all
    truncated sums, hence all simplex vertices.
    """
    seq = lex_sequence(h, valuation)
    j = None
    for idx, c in enumerate(seq):
        if c != 0:
            j = idx
            break
    if j is None:
        return 1
    tail = sum(abs(c) for c in seq[j + 1:])
    return 1 + math.ceil(tail / abs(seq[j]))


# === vertex-tracked convex cells =======================================

class ConvexCell:
    """Bounded convex polytope carried as constraints plus an exact vertex
    list with ``conv(vertices) == polytope``.

    The vertex list may contain extra non-vertex points of the polytope;
    that is harmless for every use below (emptiness, bounding box, sign
    ranges, redundancy).  Clipping never loses a true vertex: candidate
    edges are all vertex pairs sharing at least n-1 active constraints,
    a superset of the true edge set, and a crossing point computed on a
    spurious pair still lies in the polytope by convexity.
    """

    __slots__ = ("dim", "cons", "verts", "_masks", "_box")

    def __init__(
        self,
        dim: int,
        cons: tuple[tuple[int, ...], ...],
        verts: tuple[tuple[int, ...], ...],
        masks: tuple[int, ...] | None = None,
    ):
        self.dim = dim
        self.cons = cons
        self.verts = verts
        self._masks: tuple[int, ...] | None = masks
        self._box: tuple[tuple[Fraction, Fraction], ...] | None = None

    @staticmethod
    def cube(n: int) -> "ConvexCell":
        cons = []
        for i in range(n):
            lo = [0] * (n + 1)
            lo[1 + i] = 1
            hi = [0] * (n + 1)
            hi[0] = 1
            hi[1 + i] = -1
            cons.append(tuple(lo))
            cons.append(tuple(hi))
        verts = []
        masks = []
        for code in range(1 << n):
            coords = tuple(1 if code >> i & 1 else 0 for i in range(n))
            verts.append((1, *coords))
            m = 0
            for i, c in enumerate(coords):
                m |= 1 << (2 * i + 1 if c else 2 * i)
            masks.append(m)
        return ConvexCell(n, tuple(cons), tuple(verts), tuple(masks))

    @staticmethod
    def from_polyhedron(region: Polyhedron) -> "ConvexCell | None":
        """Clip the unit cube by the region's constraints (the workbench
        only ever handles regions inside the cube)."""
        cell = ConvexCell.cube(region.dim)
        for h in region.constraints:
            cell = cell.clip(h.scaled())
            if cell is None:
                return None
        return cell

    # -- basic views ----------------------------------------------------

    def is_empty(self) -> bool:
        return not self.verts

    def box(self) -> tuple[tuple[Fraction, Fraction], ...]:
        if self._box is None:
            out = []
            for i in range(self.dim):
                lo = hi = None  # (num, den) pairs, compared cross-multiplied
                for v in self.verts:
                    n, d = v[1 + i], v[0]
                    if lo is None:
                        lo = hi = (n, d)
                        continue
                    if n * lo[1] < lo[0] * d:
                        lo = (n, d)
                    elif n * hi[1] > hi[0] * d:
                        hi = (n, d)
                out.append((Fraction(*lo), Fraction(*hi)))
            self._box = tuple(out)
        return self._box

    def box_disjoint(self, other: "ConvexCell") -> bool:
        for (alo, ahi), (blo, bhi) in zip(self.box(), other.box()):
            if ahi < blo or bhi < alo:
                return True
        return False

    def to_polyhedron(self) -> Polyhedron:
        return Polyhedron(
            self.dim, tuple(affine_from_ints(c) for c in self.cons)
        )

    def vertex_points(self) -> list[Point]:
        return [unscale_point(v) for v in self.verts]

    def contains_scaled(self, ipoint: Sequence[int]) -> bool:
        return all(_dot_h(c, ipoint) >= 0 for c in self.cons)

    def sign_range(self, form: Sequence[int]) -> tuple[int, int]:
        """(min sign, max sign) of an affine form over the cell, read off
        the vertex list exactly."""
        lo = hi = None
        for v in self.verts:
            s = _dot_h(form, v)
            s = 0 if s == 0 else (1 if s > 0 else -1)
            lo = s if lo is None else min(lo, s)
            hi = s if hi is None else max(hi, s)
            if lo == -1 and hi == 1:
                break
        return lo, hi

    def minimum(self, form: Sequence[int], den: int = 1) -> tuple[Fraction, Point]:
        """Exact (min, argmin) of (c0 + c.x)/den over the cell."""
        best = None
        best_v = None
        for v in self.verts:
            val = Fraction(_dot_h(form, v), v[0] * den)
            if best is None or val < best:
                best, best_v = val, v
        return best, unscale_point(best_v)

    def full_dim(self) -> bool:
        """True iff the cell has affine dimension equal to the ambient one."""
        if len(self.verts) < self.dim + 1:
            return False
        base = self.verts[0]
        bden = base[0]
        # integer difference vectors; rank is scale-invariant, so the
        # fraction-free row updates below may rescale rows freely
        basis: list[tuple[int, ...]] = []
        leads: list[int] = []
        for v in self.verts[1:]:
            vden = v[0]
            vec = [
                v[1 + i] * bden - base[1 + i] * vden for i in range(self.dim)
            ]
            for b, lead in zip(basis, leads):
                f = vec[lead]
                if f:
                    p = b[lead]
                    vec = [x * p - f * y for x, y in zip(vec, b)]
            lead = next((i for i, c in enumerate(vec) if c), None)
            if lead is not None:
                g = 0
                for c in vec:
                    g = math.gcd(g, c)
                basis.append(tuple(c // g for c in vec))
                leads.append(lead)
                if len(basis) == self.dim:
                    return True
        return False

    # -- clipping -------------------------------------------------------

    def masks(self) -> tuple[int, ...]:
        """Per-vertex bitmask of active (exactly binding) constraints."""
        if self._masks is None:
            out = []
            cons = self.cons
            for v in self.verts:
                den = v[0]
                m = 0
                for bit, c in enumerate(cons):
                    if c[0] * den + sum(map(mul, c[1:], v[1:])) == 0:
                        m |= 1 << bit
                out.append(m)
            self._masks = tuple(out)
        return self._masks

    def clip(self, form: tuple[int, ...]) -> "ConvexCell | None":
        """Intersect with {form >= 0}.  Returns self when the constraint is
        redundant, None when the intersection is empty."""
        if not any(form):
            return None if form[0] < 0 else self
        f0 = form[0]
        rest = form[1:]
        vals = [f0 * v[0] + sum(map(mul, rest, v[1:])) for v in self.verts]
        if all(s >= 0 for s in vals):
            return self
        newbit = 1 << len(self.cons)
        masks = self.masks()
        if all(s <= 0 for s in vals):
            kept = []
            kept_masks = []
            for v, s, m in zip(self.verts, vals, masks):
                if s == 0:
                    kept.append(v)
                    kept_masks.append(m | newbit)
            if not kept:
                return None
            return ConvexCell(
                self.dim, self.cons + (form,), tuple(kept), tuple(kept_masks)
            )
        kept = []
        kept_masks = []
        for v, s, m in zip(self.verts, vals, masks):
            if s >= 0:
                kept.append(v)
                kept_masks.append(m | newbit if s == 0 else m)
        need = self.dim - 1
        # a constraint vanishing at an interior point of a kept segment
        # vanishes on the whole segment, so the propagated activity mask
        # of a crossing (shared bits plus the new cut) is exact
        crossings: dict[tuple[int, ...], int] = {}
        nverts = len(self.verts)
        for i in range(nverts):
            si = vals[i]
            if si <= 0:
                continue
            for j in range(nverts):
                sj = vals[j]
                if sj >= 0:
                    continue
                shared = masks[i] & masks[j]
                if need > 0 and _popcount(shared) < need:
                    continue
                point = _cross_point(self.verts[i], si, self.verts[j], sj)
                crossings[point] = shared | newbit
        new_verts = tuple(kept) + tuple(crossings)
        new_masks = tuple(kept_masks) + tuple(crossings.values())
        return ConvexCell(
            self.dim, self.cons + (form,), new_verts, new_masks
        )

    def intersect(self, other: "ConvexCell") -> "ConvexCell | None":
        """Exact intersection; None when empty."""
        cell: ConvexCell | None = self
        have = set(self.cons)  # shared constraints (cube faces, mostly)
        for form in other.cons:
            if form in have:
                continue
            cell = cell.clip(form)
            if cell is None:
                return None
            have.add(form)
        return cell

    def prune_constraints(self) -> "ConvexCell":
        """Drop duplicate constraints and ones strictly positive on every
        vertex (they cannot support the cell)."""
        seen: dict[tuple[int, ...], int] = {}
        for bit, c in enumerate(self.cons):
            if c in seen:
                continue
            c0 = c[0]
            rest = c[1:]
            for v in self.verts:
                if c0 * v[0] + sum(map(mul, rest, v[1:])) <= 0:
                    seen[c] = bit
                    break
        if len(seen) == len(self.cons):
            return self
        masks = None
        if self._masks is not None:
            old_bits = list(seen.values())
            masks = tuple(
                sum(((m >> ob) & 1) << nb for nb, ob in enumerate(old_bits))
                for m in self._masks
            )
        return ConvexCell(self.dim, tuple(seen), self.verts, masks)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _cross_point(
    vi: Sequence[int], si: int, vj: Sequence[int], sj: int
) -> tuple[int, ...]:
    """Exact intersection of segment (vi, vj) with {form = 0}, given the
    scaled form values si > 0 > sj at the endpoints."""
    deni, denj = vi[0], vj[0]
    # si = den_i * h(vi); parametrise p(t) = vi + t (vj - vi), h(p(t)) = 0
    alpha = si * denj
    beta = sj * deni
    den = deni * denj * (alpha - beta)
    coords = []
    for k in range(1, len(vi)):
        coords.append(alpha * vj[k] * deni - beta * vi[k] * denj)
    g = den
    for c in coords:
        g = math.gcd(g, c)
    if g > 1:
        den //= g
        coords = [c // g for c in coords]
    return (den, *coords)
