"""Compilation of formulas to exact piecewise-linear functions on [0,1]^n.

A compiled function is a finite list of closed cells covering the cube, each
cell a convex polytope with an affine piece; cells may overlap only where
their pieces agree, so evaluation picks the first containing cell.  Binary
connectives overlay the operand complexes (all pairwise intersections, empty
and lower-dimensional ones dropped) and split each overlay cell by the single
decision hyperplane of the connective:

    a + b   split at  a + b = 1      pieces  a+b   / 1
    a * b   split at  a + b = 1      pieces  0     / a+b-1
    a | b   split at  a = b          pieces  b     / a
    a & b   split at  a = b          pieces  a     / b
    a -> b  split at  a = b          pieces  1     / 1-a+b

The "low" side of the split hyperplane is appended first, so cell order is
deterministic.  All coordinates are exact rationals; the hot paths run on
scaled integers (see geometry's conventions).

Identical subterm objects are compiled once, so heavily shared syntax DAGs
compile in time proportional to their number of distinct subterms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from . import formula as fm
from .geometry import (
    INFEASIBLE,
    OPTIMAL,
    AffineFn,
    ConvexCell,
    LPResult,
    Point,
    Polyhedron,
    affine_from_ints,
    cube_faces,
    format_rat,
    lex_sign,
    scale_point,
    sign_threshold,
    _dot_h,
)

# piece representation: (den, c0, c1..cn) for (c0 + c.x) / den, den > 0


def _piece_reduce(den: int, ints: tuple[int, ...]) -> tuple[int, ...]:
    g = den
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        den //= g
        ints = tuple(v // g for v in ints)
    return (den, *ints)


def _piece_neg(p: tuple[int, ...]) -> tuple[int, ...]:
    den = p[0]
    return (den, den - p[1], *(-c for c in p[2:]))


def _piece_sum(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    da, db = a[0], b[0]
    den = math.lcm(da, db)
    fa, fb = den // da, den // db
    return _piece_reduce(
        den, tuple(fa * x + fb * y for x, y in zip(a[1:], b[1:]))
    )


def _piece_shift(p: tuple[int, ...], k: int) -> tuple[int, ...]:
    """p + k (k integer)."""
    return _piece_reduce(p[0], (p[1] + k * p[0], *p[2:]))


def _piece_diff(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return _piece_sum(a, _piece_neg_raw(b))


def _piece_neg_raw(p: tuple[int, ...]) -> tuple[int, ...]:
    """-p (not 1-p)."""
    return (p[0], *(-c for c in p[1:]))


def _form_of_piece(p: tuple[int, ...]) -> tuple[int, ...]:
    """Primitive constraint tuple with the sign behaviour of the piece."""
    ints = p[1:]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = tuple(v // g for v in ints)
    return ints


def _form_neg(form: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-c for c in form)


class Cell:
    """One closed cell with its affine piece."""

    __slots__ = ("body", "piece_int")

    def __init__(self, body: ConvexCell, piece_int: tuple[int, ...]):
        self.body = body
        self.piece_int = piece_int

    @property
    def polyhedron(self) -> Polyhedron:
        return self.body.to_polyhedron()

    @property
    def piece(self) -> AffineFn:
        return affine_from_ints(self.piece_int[1:], self.piece_int[0])

    def piece_at_scaled(self, ipoint: Sequence[int]) -> Fraction:
        return Fraction(
            _dot_h(self.piece_int[1:], ipoint), ipoint[0] * self.piece_int[0]
        )


@dataclass(frozen=True)
class RegionUnion:
    """Finite union of closed polyhedra inside the cube."""

    dim: int
    members: tuple[Polyhedron, ...]

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


class PLFunction:
    """Piecewise-linear function as a flat cell list covering [0,1]^n."""

    __slots__ = ("dim", "cells", "_grid")

    def __init__(self, dim: int, cells: tuple[Cell, ...]):
        self.dim = dim
        self.cells = cells
        self._grid = None

    def as_pairs(self) -> list[tuple[Polyhedron, AffineFn]]:
        return [(c.polyhedron, c.piece) for c in self.cells]


_GRID = 4  # buckets per axis in the point-location index


def _grid_of(F: PLFunction) -> dict[tuple[int, ...], list[Cell]]:
    """Conservative bucket index: each cell is listed in every grid box
    its bounding box touches, so lookups see a superset of candidates."""
    if F._grid is None:
        buckets: dict[tuple[int, ...], list[Cell]] = {}
        for cell in F.cells:
            spans = []
            for lo, hi in cell.body.box():
                i0 = min(_GRID - 1, (lo.numerator * _GRID) // lo.denominator)
                i1 = min(_GRID - 1, (hi.numerator * _GRID) // hi.denominator)
                spans.append(range(i0, i1 + 1))
            for key in product(*spans):
                buckets.setdefault(key, []).append(cell)
        F._grid = buckets
    return F._grid


class DimensionError(ValueError):
    pass


# === direct evaluation of formulas =====================================

def eval_formula(f: fm.Formula, point: Sequence[Fraction]) -> Fraction:
    """Evaluate a formula at a rational point of the cube, exactly.

    Works on a shared integer numerator representation: every connective
    preserves the common denominator of the input coordinates.
    """
    pt = tuple(Fraction(c) for c in point)
    for c in pt:
        if c < 0 or c > 1:
            raise ValueError(f"coordinate {format_rat(c)} outside [0,1]")
    need = fm.top_dimension(f)
    if need > len(pt):
        raise DimensionError(
            f"formula mentions X{need} but the point has dimension {len(pt)}"
        )
    ip = scale_point(pt)
    return Fraction(_eval_scaled(f, ip), ip[0])


# opcode table for the flattened evaluator
_OPCODE = {fm.Var: 0, fm.Neg: 1, fm.Impl: 2, fm.OPlus: 3, fm.OTimes: 4,
           fm.Max: 5, fm.Min: 6}

# id -> (program, root); the root reference keeps ids stable
_PROGRAMS: dict[int, tuple[list[tuple[int, int, int]], fm.Formula]] = {}


def _program_of(f: fm.Formula) -> list[tuple[int, int, int]]:
    """Postorder instruction list over the physical syntax DAG: shared
    subterms evaluate once.  (opcode, a, b): a/b are result slots, except
    for Var where a is the variable offset."""
    got = _PROGRAMS.get(id(f))
    if got is not None and got[1] is f:
        return got[0]
    slot: dict[int, int] = {}
    prog: list[tuple[int, int, int]] = []
    stack: list[tuple[fm.Formula, bool]] = [(f, False)]
    while stack:
        node, ready = stack.pop()
        key = id(node)
        if key in slot:
            continue
        kind = type(node)
        if ready:
            if kind is fm.Var:
                ins = (0, node.index - 1, 0)
            elif kind is fm.Neg:
                ins = (1, slot[id(node.child)], 0)
            else:
                ins = (_OPCODE[kind], slot[id(node.left)], slot[id(node.right)])
            slot[key] = len(prog)
            prog.append(ins)
            continue
        stack.append((node, True))
        if kind is fm.Neg:
            stack.append((node.child, False))
        elif kind is not fm.Var:
            stack.append((node.right, False))
            stack.append((node.left, False))
    _PROGRAMS[id(f)] = (prog, f)
    return prog


def _eval_scaled(f: fm.Formula, ipoint: Sequence[int]) -> int:
    den = ipoint[0]
    nums = ipoint[1:]
    vals: list[int] = []
    append = vals.append
    for code, a, b in _program_of(f):
        if code == 0:
            v = nums[a]
        elif code == 1:
            v = den - vals[a]
        elif code == 2:
            v = den - vals[a] + vals[b]
            v = den if v > den else v
        elif code == 3:
            v = vals[a] + vals[b]
            v = den if v > den else v
        elif code == 4:
            v = vals[a] + vals[b] - den
            v = v if v > 0 else 0
        elif code == 5:
            x, y = vals[a], vals[b]
            v = x if x > y else y
        else:
            x, y = vals[a], vals[b]
            v = y if x > y else x
        append(v)
    return vals[-1]


# === compilation =======================================================

def compile_formula(f: fm.Formula, dim: int | None = None) -> PLFunction:
    """Compile a formula to its piecewise-linear function on [0,1]^dim."""
    need = fm.top_dimension(f)
    if dim is None:
        dim = need
    if dim < need:
        raise DimensionError(
            f"formula mentions X{need}, cannot compile into dimension {dim}"
        )
    if dim < 1:
        raise DimensionError("dimension must be at least 1")
    memo: dict[int, tuple[fm.Formula, PLFunction]] = {}

    def walk(node: fm.Formula) -> PLFunction:
        key = id(node)
        got = memo.get(key)
        if got is not None:
            return got[1]
        kind = type(node)
        if kind is fm.Var:
            piece = (1, 0, *(1 if j == node.index - 1 else 0 for j in range(dim)))
            out = PLFunction(dim, (Cell(ConvexCell.cube(dim), piece),))
        elif kind is fm.Neg:
            child = walk(node.child)
            out = PLFunction(
                dim,
                tuple(Cell(c.body, _piece_neg(c.piece_int)) for c in child.cells),
            )
        else:
            op = {
                fm.OPlus: "oplus",
                fm.OTimes: "otimes",
                fm.Max: "max",
                fm.Min: "min",
                fm.Impl: "impl",
            }[kind]
            out = combine(walk(node.left), walk(node.right), op)
        memo[key] = (node, out)
        return out

    return walk(f)


def combine(F: PLFunction, G: PLFunction, op: str) -> PLFunction:
    """Pointwise connective applied to two compiled functions.

    ``op`` is one of oplus, otimes, max, min, impl, tminus; tminus is the
    truncated difference max(0, F - G).
    """
    if F.dim != G.dim:
        raise DimensionError("operands compiled in different dimensions")
    n = F.dim
    one = (1, 1, *([0] * n))
    zero = (1, 0, *([0] * n))
    cells: list[Cell] = []
    for a in F.cells:
        abody = a.body
        for b in G.cells:
            if abody.box_disjoint(b.body):
                continue
            inter = abody.intersect(b.body)
            if inter is None or not inter.full_dim():
                continue
            pa, pb = a.piece_int, b.piece_int
            if op == "oplus":
                split = _form_of_piece(_piece_shift(_piece_sum(pa, pb), -1))
                low, high = _piece_sum(pa, pb), one
            elif op == "otimes":
                split = _form_of_piece(_piece_shift(_piece_sum(pa, pb), -1))
                low, high = zero, _piece_shift(_piece_sum(pa, pb), -1)
            elif op == "max":
                split = _form_of_piece(_piece_diff(pa, pb))
                low, high = pb, pa
            elif op == "min":
                split = _form_of_piece(_piece_diff(pa, pb))
                low, high = pa, pb
            elif op == "impl":
                split = _form_of_piece(_piece_diff(pa, pb))
                low, high = one, _piece_sum(_piece_neg(pa), pb)
            elif op == "tminus":
                split = _form_of_piece(_piece_diff(pa, pb))
                low, high = zero, _piece_diff(pa, pb)
            else:
                raise ValueError(f"unknown connective {op!r}")
            lo_sign, hi_sign = inter.sign_range(split)
            if hi_sign <= 0:
                cells.append(Cell(inter.prune_constraints(), low))
            elif lo_sign >= 0:
                cells.append(Cell(inter.prune_constraints(), high))
            else:
                below = inter.clip(_form_neg(split))
                if below is not None and below.full_dim():
                    cells.append(Cell(below.prune_constraints(), low))
                above = inter.clip(split)
                if above is not None and above.full_dim():
                    cells.append(Cell(above.prune_constraints(), high))
    if n == 1:
        return PLFunction(1, _compact_1d(cells))
    return PLFunction(n, tuple(cells))


def _interval_cell(lo: Fraction, hi: Fraction) -> ConvexCell:
    vlo, vhi = scale_point((lo,)), scale_point((hi,))
    c_lo = _reduce_form((-lo.numerator, lo.denominator))
    c_hi = _reduce_form((hi.numerator, -hi.denominator))
    # cube faces lead, cuts follow, matching the clip pipeline's order
    cons = (c_hi, c_lo) if lo != 0 and hi == 1 else (c_lo, c_hi)
    masks = tuple(
        sum(1 << i for i, c in enumerate(cons) if _dot_h(c, v) == 0)
        for v in (vlo, vhi)
    )
    return ConvexCell(1, cons, (vlo, vhi), masks)


def _compact_1d(cells: Iterable[Cell]) -> tuple[Cell, ...]:
    """Merge touching interval cells that carry the same piece.

    Overlays keep every historical breakpoint, so one-variable complexes
    accumulate spurious subdivisions; without merging, nested constructions
    grow linearly in depth instead of staying at their natural cell count.
    """
    items = []
    for c in cells:
        ((lo, hi),) = c.body.box()
        items.append([lo, hi, c.piece_int])
    items.sort(key=lambda t: (t[0], t[1]))
    merged: list[list] = []
    for lo, hi, piece in items:
        if merged and merged[-1][2] == piece and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi, piece])
    return tuple(Cell(_interval_cell(lo, hi), piece) for lo, hi, piece in merged)


# === evaluation of compiled functions ==================================

def eval_pl(F: PLFunction, point: Sequence[Fraction]) -> Fraction:
    """Value of a compiled function at a cube point: first containing cell."""
    pt = tuple(Fraction(c) for c in point)
    if len(pt) != F.dim:
        raise DimensionError(f"expected a point of dimension {F.dim}")
    for c in pt:
        if c < 0 or c > 1:
            raise ValueError(f"coordinate {format_rat(c)} outside [0,1]")
    ip = scale_point(pt)
    val = eval_pl_scaled(F, ip)
    if val is None:
        raise RuntimeError("cell complex fails to cover the point")
    return val


def eval_pl_scaled(F: PLFunction, ipoint: Sequence[int]) -> Fraction | None:
    den = ipoint[0]
    key = tuple(
        min(_GRID - 1, (n * _GRID) // den) for n in ipoint[1:]
    )
    for cell in _grid_of(F).get(key, ()):
        if cell.body.contains_scaled(ipoint):
            return cell.piece_at_scaled(ipoint)
    return None


def negate(F: PLFunction) -> PLFunction:
    """1 - F on the same cells."""
    return PLFunction(
        F.dim, tuple(Cell(c.body, _piece_neg(c.piece_int)) for c in F.cells)
    )


# === germ cells and derivatives ========================================

def germ_cell(F: PLFunction, valuation) -> Cell:
    """First cell whose closure contains the flag simplex T_{U,m} for all
    large m: every defining constraint must have nonnegative lex sign.

    A constraint with an all-zero lex prefix vanishes exactly on the
    corresponding simplex vertices, which therefore sit on the cell's
    boundary; positivity of the first nonzero entry settles the rest.
    """
    base_ip = scale_point(tuple(valuation.base))
    dir_ips = [scale_point(tuple(u)) for u in valuation.directions]
    if len(valuation.base) != F.dim:
        raise DimensionError("valuation dimension does not match the function")
    for cell in F.cells:
        if all(_lex_sign_int(c, base_ip, dir_ips) >= 0 for c in cell.body.cons):
            return cell
    raise RuntimeError("no germ cell found; is the valuation valid?")


def _lex_sign_int(
    form: tuple[int, ...],
    base_ip: Sequence[int],
    dir_ips: Sequence[Sequence[int]],
) -> int:
    v = _dot_h(form, base_ip)
    if v:
        return 1 if v > 0 else -1
    for d in dir_ips:
        g = 0
        for c, nu in zip(form[1:], d[1:]):
            g += c * nu
        if g:
            return 1 if g > 0 else -1
    return 0


class _Flag:
    __slots__ = ("base", "directions")

    def __init__(self, base, directions):
        self.base = base
        self.directions = directions


def dir_deriv(
    F: PLFunction, point: Sequence[Fraction], direction: Sequence[Fraction]
) -> Fraction:
    """One-sided directional derivative of F at `point` along `direction`.

    The direction must keep some initial segment [point, point + eps*u]
    inside the cube; the derivative is the gradient of the germ cell's piece
    times the direction.
    """
    pt = tuple(Fraction(c) for c in point)
    u = tuple(Fraction(c) for c in direction)
    if len(pt) != F.dim or len(u) != F.dim:
        raise DimensionError(f"expected dimension {F.dim}")
    for c in pt:
        if c < 0 or c > 1:
            raise ValueError("point outside the cube")
    if all(c == 0 for c in u):
        raise ValueError("zero direction")
    flag = _Flag(pt, (u,))
    for face in cube_faces(F.dim):
        if lex_sign(face, flag) < 0:
            raise ValueError("direction leaves the cube at the point")
    cell = germ_cell(F, flag)
    return cell.piece.gradient_dot(u)


def stable_step(F: PLFunction, point, direction) -> Fraction:
    """A step h so small that [point, point + h*u] stays inside the germ
    cell: half of 1/m* maximised over every cell constraint and cube face."""
    flag = _Flag(tuple(point), (tuple(direction),))
    worst = 1
    for face in cube_faces(F.dim):
        worst = max(worst, sign_threshold(face, flag))
    for cell in F.cells:
        for c in cell.body.cons:
            worst = max(worst, sign_threshold(affine_from_ints(c), flag))
    return Fraction(1, 2 * worst)


# === one-sets and minima ===============================================

def one_set_cells(F: PLFunction) -> list[ConvexCell]:
    """Cells of {x : F(x) = 1}, possibly lower-dimensional, order-stable."""
    out = []
    for cell in F.cells:
        den, c0, *rest = cell.piece_int
        ge_one = _reduce_form((c0 - den, *rest))
        body = cell.body.clip(ge_one)
        if body is None:
            continue
        body = body.clip(_form_neg(ge_one))
        if body is None:
            continue
        out.append(body.prune_constraints())
    return out


def _reduce_form(ints: tuple[int, ...]) -> tuple[int, ...]:
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = tuple(v // g for v in ints)
    return ints


def one_set(F: PLFunction) -> RegionUnion:
    """The set {x : F(x) = 1} as a finite union of closed polyhedra."""
    return RegionUnion(
        F.dim, tuple(c.to_polyhedron() for c in one_set_cells(F))
    )


def min_over_cells(
    F: PLFunction, regions: Iterable[ConvexCell]
) -> LPResult:
    best: Fraction | None = None
    best_pt: Point | None = None
    for member in regions:
        for cell in F.cells:
            if cell.body.box_disjoint(member):
                continue
            inter = cell.body.intersect(member)
            if inter is None:
                continue
            val, pt = inter.minimum(cell.piece_int[1:], cell.piece_int[0])
            if best is None or val < best:
                best, best_pt = val, pt
    if best is None:
        return LPResult(INFEASIBLE)
    return LPResult(OPTIMAL, best, best_pt)


def min_over_region(F: PLFunction, region: RegionUnion) -> LPResult:
    """Exact minimum (with argmin) of F over a finite union of polyhedra.

    Each member is intersected with each cell; minima of affine pieces over
    the bounded intersections are read off their vertex sets exactly.
    """
    if region.dim != F.dim:
        raise DimensionError("region dimension does not match the function")
    members = []
    for poly in region.members:
        cell = ConvexCell.from_polyhedron(poly)
        if cell is not None:
            members.append(cell)
    return min_over_cells(F, members)


def difference_min(F: PLFunction, G: PLFunction) -> tuple[Fraction, Point]:
    """Exact minimum of F - G over the cube (for inequality checks)."""
    if F.dim != G.dim:
        raise DimensionError("operands compiled in different dimensions")
    best = None
    best_pt = None
    for a in F.cells:
        for b in G.cells:
            if a.body.box_disjoint(b.body):
                continue
            inter = a.body.intersect(b.body)
            if inter is None:
                continue
            diff = _piece_diff(a.piece_int, b.piece_int)
            val, pt = inter.minimum(diff[1:], diff[0])
            if best is None or val < best:
                best, best_pt = val, pt
    assert best is not None, "cells always cover the cube"
    return best, best_pt


# === dump ==============================================================

def dump_pl(F: PLFunction) -> str:
    """One line per cell: CELL {constraints} PIECE {affine}, with affine
    data as space-separated rationals c0 c1 ... cn (constraints mean >= 0)."""
    lines = []
    for cell in F.cells:
        cons = "; ".join(
            " ".join(str(c) for c in form) for form in cell.body.cons
        )
        piece = cell.piece
        coeffs = [format_rat(piece.const)] + [format_rat(c) for c in piece.coeffs]
        lines.append("CELL {" + cons + "} PIECE {" + " ".join(coeffs) + "}")
    return "\n".join(lines)
