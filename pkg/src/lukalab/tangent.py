"""Bouligand-Severi tangent analysis for closed subsets of the cube.

A unit direction u is a tangent of X at x when points of X other than x
enter every cone C(x, u, 1/m, 1/m²) with apex x, axis u, height 1/m and
vertex half-angle 1/m².  The angle comparison is replaced throughout by
the exact rational surrogate

    orthogonal offset  <=  (1/m²) × axial length,

a tangent-of-the-angle bound.  The two families of cones interleave (for
every angle bound there is a smaller tangent bound inside it and vice
versa), so the limit quantification "for every m" defines the same set of
tangent directions; only individual cone memberships differ.  All tests
here are comparisons of rational squares, hence fully exact.

A tangent u is outgoing when for some λ > 0 the open segment from x to
x + λu misses X.  Closed sets are described either as finite unions of
rational polyhedra (within the cube) or as an explicitly listed rational
point sequence with its limit.  Sequence-based refutations are always
relative to the listed prefix and say so; only certifications are
quotable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .geometry import ConvexCell, Point, in_cube, scale_point
from .pl_engine import RegionUnion

REFUTATION_CAVEAT = (
    "refutation is relative to the listed prefix of the sequence"
)


@dataclass(frozen=True)
class PolyhedralSet:
    """A closed set given as a finite union of polyhedra in the cube."""

    region: RegionUnion

    @property
    def dim(self) -> int:
        return self.region.dim


@dataclass(frozen=True)
class PointSequence:
    """A convergent rational sequence listed up to a finite prefix."""

    limit: Point
    points: tuple[Point, ...]
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "limit", tuple(Fraction(c) for c in self.limit))
        object.__setattr__(
            self,
            "points",
            tuple(tuple(Fraction(c) for c in p) for p in self.points),
        )
        if not in_cube(self.limit):
            raise ValueError("the limit point must lie in the cube")
        for p in self.points:
            if len(p) != len(self.limit):
                raise ValueError("sequence points must share the limit's dimension")
            if not in_cube(p):
                raise ValueError("sequence points must lie in the cube")
            if p == self.limit:
                raise ValueError("sequence points must differ from the limit")

    @property
    def dim(self) -> int:
        return len(self.limit)


ClosedSetDescription = Union[PolyhedralSet, PointSequence]


@dataclass(frozen=True)
class TangentReport:
    verdict: str
    evidence: tuple[tuple[int, int | None], ...] = ()
    outgoing: bool | None = None
    outgoing_lambda: Fraction | None = None
    caveat: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict.startswith("certified")


def _vec(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """b - a componentwise."""
    return tuple(Fraction(q) - Fraction(p) for p, q in zip(a, b))


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def cone_contains(
    x: Sequence[Fraction],
    u: Sequence[Fraction],
    m: int,
    y: Sequence[Fraction],
) -> bool:
    """Is y inside the m-th cone at x with axis u (apex excluded)?

    With d = y - x and axial coefficient a = (d·u)/(u·u), requires a > 0,
    ‖d‖ <= 1/m and ‖d - a·u‖ <= (1/m²)·a·‖u‖, all compared on squares.
    """
    x = tuple(Fraction(c) for c in x)
    u = tuple(Fraction(c) for c in u)
    y = tuple(Fraction(c) for c in y)
    if len(x) != len(u) or len(x) != len(y):
        raise ValueError("point and direction dimensions disagree")
    uu = _dot(u, u)
    if uu == 0:
        raise ValueError("the axis direction must be nonzero")
    if m < 1:
        raise ValueError("the cone index m must be a positive integer")
    d = _vec(x, y)
    a = _dot(d, u) / uu
    if a <= 0:
        return False
    if _dot(d, d) * m * m > 1:
        return False
    orth = tuple(dc - a * uc for dc, uc in zip(d, u))
    bound = Fraction(1, m * m) ** 2 * a * a * uu
    return _dot(orth, orth) <= bound


def certify_tangent_sequence(
    X: ClosedSetDescription, u: Sequence[Fraction], M: int
) -> TangentReport:
    """Search the listed points for a member of each of the first M cones.

    Certification means every cone m = 1..M contains a listed point;
    refutation at the first failing m is relative to the listed prefix.
    """
    if not isinstance(X, PointSequence):
        raise TypeError(
            "tangent sequences need a point-sequence description; "
            "use tangent_cone_polyhedral for polyhedral sets"
        )
    u = tuple(Fraction(c) for c in u)
    if all(c == 0 for c in u):
        raise ValueError("the direction must be nonzero")
    if M < 1:
        raise ValueError("the cone bound M must be a positive integer")
    evidence: list[tuple[int, int | None]] = []
    for m in range(1, M + 1):
        hit = None
        for i, y in enumerate(X.points, start=1):
            if cone_contains(X.limit, u, m, y):
                hit = i
                break
        if hit is None:
            evidence.append((m, None))
            return TangentReport(
                f"refuted-at-{m}", tuple(evidence), caveat=REFUTATION_CAVEAT
            )
        evidence.append((m, hit))
    return TangentReport(f"certified-up-to-{M}", tuple(evidence))


def _member_cells(region: RegionUnion) -> list[ConvexCell]:
    # cube-clipped; empty members drop out
    cells = []
    for P in region:
        cell = ConvexCell.from_polyhedron(P)
        if cell is not None and not cell.is_empty():
            cells.append(cell)
    return cells


def _segment_meets_cell(
    cell: ConvexCell, x: Point, step: tuple[Fraction, ...]
) -> bool:
    """Does {x + s·step : 0 < s < 1} meet the cell?

    Each constraint restricts s to a rational interval; the open segment
    meets the cell unless the resulting interval is empty or a single
    endpoint s ∈ {0, 1}.
    """
    lo, hi = Fraction(0), Fraction(1)
    for form in cell.cons:
        const = form[0] + sum(c * xc for c, xc in zip(form[1:], x))
        slope = sum(c * sc for c, sc in zip(form[1:], step))
        if slope == 0:
            if const < 0:
                return False
        elif slope > 0:
            lo = max(lo, -const / slope)
        else:
            hi = min(hi, -const / slope)
        if lo > hi:
            return False
    if lo < hi:
        return True
    return 0 < lo < 1


def certify_outgoing(
    X: ClosedSetDescription,
    x: Sequence[Fraction],
    u: Sequence[Fraction],
    lam: Fraction | int | str,
) -> bool:
    """Is the open segment from x to x + λu disjoint from X?"""
    x = tuple(Fraction(c) for c in x)
    u = tuple(Fraction(c) for c in u)
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("λ must be positive")
    if all(c == 0 for c in u):
        raise ValueError("the direction must be nonzero")
    if len(x) != X.dim or len(u) != X.dim:
        raise ValueError("point and direction must match the set's dimension")
    tip = tuple(a + lam * b for a, b in zip(x, u))
    if not in_cube(tip):
        raise ValueError("x + λu must stay in the cube")
    step = tuple(lam * c for c in u)
    if isinstance(X, PolyhedralSet):
        return not any(
            _segment_meets_cell(cell, x, step)
            for cell in _member_cells(X.region)
        )
    for y in (*X.points, X.limit):
        # y sits on the open segment iff y = x + s·step with 0 < s < 1
        k = next((i for i, c in enumerate(step) if c != 0))
        s = (y[k] - x[k]) / step[k]
        if 0 < s < 1 and all(
            yc == xc + s * sc for yc, xc, sc in zip(y, x, step)
        ):
            return False
    return True


def tangent_cone_polyhedral(
    X: RegionUnion | PolyhedralSet, x: Sequence[Fraction]
) -> tuple[tuple[int, ...], ...]:
    """Generators of the feasible-direction cone of X at x.

    For each member containing x, the cone {u : ∇h·u >= 0 for every
    constraint h active at x}, computed by double description: start from
    the spanning set ±e_i and cut by one active constraint at a time,
    keeping nonnegative-side generators and sign-crossing combinations.
    Generators are primitive integer vectors; the union over members may
    contain redundant (non-extreme) directions, which is harmless for
    membership purposes.
    """
    region = X.region if isinstance(X, PolyhedralSet) else X
    x = tuple(Fraction(c) for c in x)
    if len(x) != region.dim:
        raise ValueError("point dimension disagrees with the set")
    ip = scale_point(x)
    out: dict[tuple[int, ...], None] = {}
    found = False
    for cell in _member_cells(region):
        if not cell.contains_scaled(ip):
            continue
        found = True
        active = [
            form
            for form in cell.cons
            if form[0] * ip[0] + sum(c * n for c, n in zip(form[1:], ip[1:])) == 0
        ]
        for gen in _cone_generators(active, region.dim):
            out[gen] = None
    if not found:
        raise ValueError("the point does not belong to the set")
    return tuple(out)


def _cone_generators(
    active: list[tuple[int, ...]], dim: int
) -> list[tuple[int, ...]]:
    gens: list[tuple[int, ...]] = []
    for i in range(dim):
        e = [0] * dim
        e[i] = 1
        gens.append(tuple(e))
        gens.append(tuple(-v for v in e))
    for form in active:
        grad = form[1:]
        pos, zero, neg = [], [], []
        for g in gens:
            s = sum(a * b for a, b in zip(grad, g))
            (pos if s > 0 else zero if s == 0 else neg).append((g, s))
        nxt = [g for g, _ in pos] + [g for g, _ in zero]
        for p, sp in pos:
            for q, sq in neg:
                w = tuple(sp * qc - sq * pc for pc, qc in zip(p, q))
                g = 0
                for v in w:
                    g = math.gcd(g, v)
                if g:
                    nxt.append(tuple(v // g for v in w))
        seen: dict[tuple[int, ...], None] = {}
        for g in nxt:
            seen[g] = None
        gens = list(seen)
    return gens


@dataclass(frozen=True)
class SSSReport:
    """Outcome of the strong-semisimplicity criterion."""

    verdict: str
    basis: str  # "theorem" in dimension 2, "heuristic" otherwise
    witnesses: tuple[tuple[Point, Point, TangentReport], ...] = ()
    notes: tuple[str, ...] = ()


def sss_check(
    X: ClosedSetDescription,
    candidates: Sequence[tuple[Sequence[Fraction], Sequence[Fraction]]] = (),
    M: int = 10,
) -> SSSReport:
    """Strong semisimplicity via outgoing rational tangents.

    In dimension 2 the geometric criterion is exact: the algebra of a
    theory is strongly semisimple iff its model set has no outgoing
    rational tangent at a rational point.  Polyhedral sets never have
    outgoing tangents at their own points, so they pass unconditionally.
    For sequence sets each candidate (point, direction) pair is tested by
    certifying the tangent up to M cones and probing outgoing segments
    at λ = 1/2, 1/4, ...; dimensions other than 2 get the same check with
    a heuristic label (the tangent-implies-failure direction survives,
    the converse is only proven in the plane).
    """
    basis = "theorem" if X.dim == 2 else "heuristic"
    notes: list[str] = []
    if basis == "heuristic":
        notes.append(
            "the exact criterion is two-dimensional; this verdict is heuristic"
        )
    if isinstance(X, PolyhedralSet):
        notes.append(
            "polyhedral sets admit no outgoing tangent at their own points"
        )
        return SSSReport("strongly-semisimple", basis, (), tuple(notes))
    witnesses: list[tuple[Point, Point, TangentReport]] = []
    for point, direction in candidates:
        point = tuple(Fraction(c) for c in point)
        direction = tuple(Fraction(c) for c in direction)
        if point != X.limit:
            notes.append(
                f"candidate at {point}: only the sequence limit can carry a "
                "certified tangent; skipped"
            )
            continue
        report = certify_tangent_sequence(X, direction, M)
        if not report.certified:
            continue
        for k in range(1, 9):
            lam = Fraction(1, 2**k)
            tip = tuple(a + lam * b for a, b in zip(point, direction))
            if not in_cube(tip):
                continue
            if certify_outgoing(X, point, direction, lam):
                report = TangentReport(
                    report.verdict,
                    report.evidence,
                    outgoing=True,
                    outgoing_lambda=lam,
                    caveat=report.caveat,
                )
                witnesses.append((point, direction, report))
                break
        else:
            notes.append(
                f"tangent certified at {point} but no sampled λ made it outgoing"
            )
    if witnesses:
        return SSSReport(
            "not-strongly-semisimple-witnessed",
            basis,
            tuple(witnesses),
            tuple(notes),
        )
    return SSSReport(
        f"no-witness-found-up-to-{M}", basis, (), tuple(notes)
    )
