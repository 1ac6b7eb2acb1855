"""Differential valuations: flags of directions refining point evaluation.

A differential valuation U = (u0; u1, ..., ut) is a cube point u0 together
with pairwise-orthogonal nonzero rational directions.  It determines the
shrinking simplexes T_{U,m} with vertices u0, u0 + u1/m, u0 + u1/m + u2/m^2,
... and through them a prime ideal of piecewise-linear functions: the ones
vanishing on T_{U,m} for all large m.  Membership is decided exactly on the
germ cell: the function's piece there must vanish at u0 and have zero
gradient against every direction.

U satisfies a formula when 1 - (the formula's function) lies in the ideal;
order-0 valuations recover ordinary evaluation to value 1.

``dominates`` compares valuations across nested variable sets: V (over K)
dominates U (over H, a subset of K) when V's projection to the H
coordinates, after discarding zero vectors and orthogonalising, is U up to
positive scaling of each direction.  A family of coordinate-distance probe
functions cross-checks the geometry; any probe disagreement wins and forces
the answer to False.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import pl_engine as pl
from .formula import Formula, Neg
from .geometry import (
    ConvexCell,
    Point,
    cube_faces,
    flag_simplex,
    format_point,
    lex_sign,
    sign_threshold,
)


@dataclass(frozen=True)
class DifferentialValuation:
    """Base point plus an ordered tuple of direction vectors."""

    base: Point
    directions: tuple[Point, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.base)

    @property
    def order(self) -> int:
        return len(self.directions)

    def describe(self) -> str:
        dirs = "; ".join(format_point(u) for u in self.directions)
        return f"({format_point(self.base)}; {dirs})" if dirs else f"({format_point(self.base)})"


def make_valuation(
    base: Sequence[Fraction | int | str],
    *directions: Sequence[Fraction | int | str],
) -> DifferentialValuation:
    conv = lambda xs: tuple(Fraction(x) for x in xs)
    return DifferentialValuation(conv(base), tuple(conv(u) for u in directions))


@dataclass(frozen=True)
class Validity:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate(valuation: DifferentialValuation) -> Validity:
    """Check the three defining conditions; never raises.

    1. u0 lies in the cube;
    2. directions are nonzero and pairwise orthogonal;
    3. the flag simplex eventually stays in the cube: every cube face has
       nonnegative lex sign, certified at the threshold index m+ (the
       maximum m* over the 2n faces), whose simplex contains all later ones.
    """
    u0 = valuation.base
    n = valuation.dim
    if n == 0:
        return Validity(False, "empty base point")
    for c in u0:
        if c < 0 or c > 1:
            return Validity(False, f"base point coordinate {c} outside [0,1]")
    dirs = valuation.directions
    if len(dirs) > n:
        return Validity(False, f"more than {n} directions in dimension {n}")
    for i, u in enumerate(dirs):
        if len(u) != n:
            return Validity(False, f"direction {i + 1} has wrong dimension")
        if all(c == 0 for c in u):
            return Validity(False, f"direction {i + 1} is zero")
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            dot = sum(a * b for a, b in zip(dirs[i], dirs[j]))
            if dot != 0:
                return Validity(
                    False, f"directions {i + 1} and {j + 1} are not orthogonal"
                )
    faces = cube_faces(n)
    for face in faces:
        if lex_sign(face, valuation) < 0:
            return Validity(False, "flag simplex leaves the cube")
    m_dagger = max(sign_threshold(face, valuation) for face in faces)
    for vertex in flag_simplex(valuation, m_dagger).vertices:
        for c in vertex:
            if c < 0 or c > 1:
                return Validity(
                    False,
                    f"simplex vertex {format_point(vertex)} outside the cube "
                    f"at the certified index {m_dagger}",
                )
    return Validity(True)


def in_ideal(F: pl.PLFunction, valuation: DifferentialValuation) -> bool:
    """Does F vanish on T_{U,m} for all large m?

    Exactly when the germ cell's piece l has l(u0) = 0 and grad l . u_i = 0
    for every direction.
    """
    check = validate(valuation)
    if not check:
        raise ValueError(f"invalid differential valuation: {check.reason}")
    if valuation.dim != F.dim:
        raise pl.DimensionError("valuation and function dimensions differ")
    cell = pl.germ_cell(F, valuation)
    piece = cell.piece
    if piece(valuation.base) != 0:
        return False
    return all(piece.gradient_dot(u) == 0 for u in valuation.directions)


def satisfies(
    valuation: DifferentialValuation, f: Formula, dim: int | None = None
) -> bool:
    """U satisfies f iff 1 - f's function lies in the ideal of U."""
    if dim is None:
        dim = valuation.dim
    return in_ideal(pl.compile_formula(Neg(f), dim), valuation)


# === domination across variable sets ===================================

@dataclass(frozen=True)
class DominationReport:
    geometric: bool
    probe_agrees: bool
    verdict: bool
    detail: str


def _project(point: Sequence[Fraction], positions: Sequence[int]) -> Point:
    return tuple(point[i] for i in positions)


def _gram_schmidt(vectors: list[Point]) -> list[Point]:
    """Orthogonalise in order over the rationals, dropping zero vectors."""
    out: list[Point] = []
    for v in vectors:
        w = list(v)
        for b in out:
            bb = sum(c * c for c in b)
            coef = sum(x * y for x, y in zip(w, b)) / bb
            w = [x - coef * y for x, y in zip(w, b)]
        if any(c != 0 for c in w):
            out.append(tuple(w))
    return out


def _positive_multiple(a: Point, b: Point) -> bool:
    """Is a = lambda * b for some rational lambda > 0?"""
    lam = None
    for x, y in zip(a, b):
        if y == 0:
            if x != 0:
                return False
            continue
        ratio = x / y
        if lam is None:
            lam = ratio
        elif ratio != lam:
            return False
    if lam is None:
        return all(x == 0 for x in a) and all(y == 0 for y in b)
    return lam > 0


def coordinate_probe(dim: int, axis: int, value: Fraction) -> pl.PLFunction:
    """Clipped distance-to-value function min(1, |q x_axis - p|) for
    value = p/q: a piecewise-linear function vanishing exactly on the
    hyperplane {x_axis = value}, with integer pieces."""
    value = Fraction(value)
    p, q = value.numerator, value.denominator
    cells = []
    cube = ConvexCell.cube(dim)

    def axis_form(c0: int, caxis: int) -> tuple[int, ...]:
        form = [c0] + [0] * dim
        form[1 + axis] = caxis
        return tuple(form)

    def clipped(lo_form, piece):
        body = cube
        for f in lo_form:
            body = body.clip(f)
            if body is None:
                return
        if body.full_dim():
            cells.append(pl.Cell(body.prune_constraints(), piece))

    # left saturation |q x - p| >= 1, descending piece, ascending piece,
    # right saturation; empty parts drop out via clipping
    one = (1, 1, *([0] * dim))
    down = (1, p, *(0 if j != axis else -q for j in range(dim)))
    up = (1, -p, *(0 if j != axis else q for j in range(dim)))
    clipped([axis_form(p - 1, -q)], one)                       # q x <= p - 1
    clipped([axis_form(1 - p, q), axis_form(p, -q)], down)     # p - 1 <= q x <= p
    clipped([axis_form(-p, q), axis_form(p + 1, -q)], up)      # p <= q x <= p + 1
    clipped([axis_form(-p - 1, q)], one)                       # q x >= p + 1
    return pl.PLFunction(dim, tuple(cells))


def _lift_probe(
    probe: pl.PLFunction, positions: Sequence[int], big_dim: int
) -> pl.PLFunction:
    """Reinterpret a probe over the H coordinates as a function of the K
    coordinates (constant along the new ones)."""
    cells = []
    for cell in probe.cells:
        cons = []
        for form in cell.body.cons:
            out = [form[0]] + [0] * big_dim
            for small_i, big_i in enumerate(positions):
                out[1 + big_i] = form[1 + small_i]
            cons.append(tuple(out))
        for j in range(big_dim):
            if j in positions:
                continue
            lo = [0] * (big_dim + 1)
            lo[1 + j] = 1
            hi = [0] * (big_dim + 1)
            hi[0] = 1
            hi[1 + j] = -1
            cons.append(tuple(lo))
            cons.append(tuple(hi))
        den, c0, *rest = cell.piece_int
        piece = [den, c0] + [0] * big_dim
        for small_i, big_i in enumerate(positions):
            piece[2 + big_i] = rest[small_i]
        body = ConvexCell.cube(big_dim)
        for form in cons:
            body = body.clip(form)
            assert body is not None
        cells.append(pl.Cell(body.prune_constraints(), tuple(piece)))
    return pl.PLFunction(big_dim, tuple(cells))


def dominates_report(
    big: DifferentialValuation,
    big_vars: Sequence[int],
    small: DifferentialValuation,
    small_vars: Sequence[int],
    probes: Sequence[pl.PLFunction] = (),
) -> DominationReport:
    """Does `big` (over variable set K = big_vars) induce `small` (over
    H = small_vars, a subset of K)?

    Geometric rule: project big's base and directions to the H coordinates,
    orthogonalise, drop zeros; domination requires the same base, the same
    order, and each remaining direction a positive multiple of small's.
    Probe rule: every probe over H must land in both ideals or neither;
    a disagreement overrides the geometry to False.  Extra probes over H
    may be supplied on top of the coordinate-distance defaults.
    """
    K = sorted(big_vars)
    H = sorted(small_vars)
    if not set(H) <= set(K):
        raise ValueError("small variable set must be contained in the big one")
    if len(K) != big.dim or len(H) != small.dim:
        raise ValueError("variable set sizes must match valuation dimensions")
    for val, name in ((big, "big"), (small, "small")):
        check = validate(val)
        if not check:
            raise ValueError(f"invalid {name} valuation: {check.reason}")
    positions = [K.index(h) for h in H]

    geometric = True
    detail = "projection matches"
    if _project(big.base, positions) != small.base:
        geometric = False
        detail = "projected base point differs"
    else:
        projected = [_project(u, positions) for u in big.directions]
        ortho = _gram_schmidt([p for p in projected if any(c != 0 for c in p)])
        if len(ortho) != small.order:
            geometric = False
            detail = (
                f"projected flag has order {len(ortho)}, "
                f"expected {small.order}"
            )
        else:
            for w, u in zip(ortho, small.directions):
                if not _positive_multiple(w, u):
                    geometric = False
                    detail = "projected direction is not a positive multiple"
                    break

    probe_list = [
        coordinate_probe(small.dim, axis, small.base[axis])
        for axis in range(small.dim)
    ]
    probe_list.extend(probes)
    probe_agrees = True
    for probe in probe_list:
        lifted = _lift_probe(probe, positions, big.dim)
        small_side = in_ideal(probe, small)
        big_side = in_ideal(lifted, big)
        if small_side != big_side:
            probe_agrees = False
            detail = "probe family disagrees with the geometric rule"
            break

    verdict = geometric and probe_agrees
    return DominationReport(geometric, probe_agrees, verdict, detail)


def dominates(
    big: DifferentialValuation,
    big_vars: Sequence[int],
    small: DifferentialValuation,
    small_vars: Sequence[int],
    probes: Sequence[pl.PLFunction] = (),
) -> bool:
    return dominates_report(big, big_vars, small, small_vars, probes).verdict
