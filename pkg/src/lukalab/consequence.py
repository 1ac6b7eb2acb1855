"""Semantic and stable consequence over [0,1]-valued Łukasiewicz semantics.

Semantic consequence: theory entails a query when the query's function is
identically 1 on the theory's model set Mod(T), the intersection of the
members' one-sets; decided exactly by minimising the query over Mod(T) and
certified by a countermodel point otherwise.

Stable consequence refines satisfaction through differential valuations.
On finite theories the two relations coincide (the Hay-Wójcicki collapse:
finitely axiomatised quotients are strongly semisimple), so the verdict is
the semantic one; a bounded search over differential valuations assembled
from the overlaid complexes (order up to 2) then cross-checks soundness and
raises if it ever finds a witness contradicting a positive verdict.

The non-compactness machinery lives in ``formula_from_interval``: for a
rational a in (0,1) it synthesises a one-variable formula whose one-set is
exactly [0,a], strictly decreasing just right of a, by composing the
doubling identities  F+F = clip(2f)  and  F*F = clip(2f-1)  with the
descent  clip(qx-p) = clip((q-1)x-(p-1)) * (X + clip((q-1)x-p)); shared
subterms keep the syntax DAG logarithmic in the denominator for halving
families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import formula as fm
from . import pl_engine as pl
from .diffval import DifferentialValuation, validate
from .geometry import ConvexCell, Point, format_rat, unscale_point

COLLAPSE_NOTE = (
    "finite theory: stable consequence coincides with semantic consequence "
    "(Hay-Wojcicki collapse)"
)

WITNESS_PROVISO = (
    "a differential witness refutes stable consequence; on finite "
    "subtheories the collapse makes that a semantic refutation as well"
)


class InternalSoundnessError(RuntimeError):
    """A differential witness contradicted a positive verdict."""


@dataclass(frozen=True)
class Theory:
    """Finite list of formulas, with optional family metadata."""

    formulas: tuple[fm.Formula, ...]
    name: str = ""
    index_range: tuple[int, int] | None = None

    def __len__(self) -> int:
        return len(self.formulas)

    def __iter__(self):
        return iter(self.formulas)

    def dimension(self) -> int:
        return max((fm.top_dimension(f) for f in self.formulas), default=0)


@dataclass(frozen=True)
class ConsequenceReport:
    mode: str  # "semantic" | "stable"
    verdict: str  # "holds" | "fails"
    minimum: Fraction | None
    countermodel: Point | DifferentialValuation | None
    notes: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


def _compile_all(
    theory: Theory, query: fm.Formula, dim: int | None
) -> tuple[int, list[pl.PLFunction], pl.PLFunction]:
    need = max(theory.dimension(), fm.top_dimension(query), 1)
    if dim is None:
        dim = need
    if dim < need:
        raise pl.DimensionError(
            f"need dimension at least {need} for this theory and query"
        )
    compiled = [pl.compile_formula(f, dim) for f in theory.formulas]
    return dim, compiled, pl.compile_formula(query, dim)


def _model_cells(
    compiled: Sequence[pl.PLFunction], dim: int
) -> list[ConvexCell]:
    """Cells of Mod(T) = intersection of one-sets, distributed over unions.

    Lower-dimensional cells are kept: model sets are often thin."""
    acc: list[ConvexCell] = [ConvexCell.cube(dim)]
    for F in compiled:
        ones = pl.one_set_cells(F)
        nxt: list[ConvexCell] = []
        for r in acc:
            for s in ones:
                if r.box_disjoint(s):
                    continue
                inter = r.intersect(s)
                if inter is not None:
                    nxt.append(inter)
        acc = _absorb(nxt)
        if not acc:
            break
    return [c.prune_constraints() for c in acc]


def _contained_in(small: ConvexCell, big: ConvexCell) -> bool:
    for (slo, shi), (blo, bhi) in zip(small.box(), big.box()):
        if slo < blo or shi > bhi:
            return False
    return all(big.contains_scaled(v) for v in small.verts)


def _absorb(cells: list[ConvexCell]) -> list[ConvexCell]:
    """Drop cells contained in another cell of the list.

    The union is unchanged, and the union is all the model set is; without
    this the distributed product can retain exponentially many fragments of
    the same region.  The test is quadratic, so very long lists pass through
    untouched."""
    if len(cells) < 2 or len(cells) > 600:
        return cells
    kept: list[ConvexCell] = []
    for c in sorted(cells, key=lambda c: len(c.verts), reverse=True):
        if not any(_contained_in(c, k) for k in kept):
            kept.append(c)
    return kept


def _verify_countermodel(
    theory: Theory, query: fm.Formula, point: Point
) -> None:
    """Re-evaluate the candidate countermodel with the direct evaluator
    (an independent route from the compiled complexes)."""
    for i, f in enumerate(theory.formulas):
        if pl.eval_formula(f, point) != 1:
            raise InternalSoundnessError(
                f"countermodel fails theory member {i + 1} on re-evaluation"
            )
    if pl.eval_formula(query, point) >= 1:
        raise InternalSoundnessError(
            "countermodel satisfies the query on re-evaluation"
        )


def semantic_consequence(
    theory: Theory, query: fm.Formula, dim: int | None = None
) -> ConsequenceReport:
    """Does every model of the theory give the query value 1?"""
    dim, compiled, query_fn = _compile_all(theory, query, dim)
    mod = _model_cells(compiled, dim)
    if not mod:
        return ConsequenceReport(
            "semantic",
            "holds",
            None,
            None,
            ("theory has no models in the cube; consequence holds vacuously",),
        )
    result = pl.min_over_cells(query_fn, mod)
    assert result.ok
    if result.value == 1:
        return ConsequenceReport("semantic", "holds", result.value, None)
    _verify_countermodel(theory, query, result.point)
    return ConsequenceReport("semantic", "fails", result.value, result.point)


def semantic_over_set(
    region: pl.RegionUnion, query: fm.Formula, dim: int | None = None
) -> ConsequenceReport:
    """Is the query identically 1 on an explicitly given closed set?"""
    if dim is None:
        dim = region.dim
    if dim != region.dim:
        raise pl.DimensionError("region dimension disagrees")
    query_fn = pl.compile_formula(query, dim)
    result = pl.min_over_region(query_fn, region)
    if not result.ok:
        return ConsequenceReport(
            "semantic",
            "holds",
            None,
            None,
            ("the given set is empty; consequence holds vacuously",),
        )
    if result.value == 1:
        return ConsequenceReport("semantic", "holds", result.value, None)
    if pl.eval_formula(query, result.point) >= 1:
        raise InternalSoundnessError(
            "countermodel satisfies the query on re-evaluation"
        )
    return ConsequenceReport("semantic", "fails", result.value, result.point)


# === stable consequence ================================================

def _overlay_cells(
    fns: Sequence[pl.PLFunction], dim: int
) -> list[ConvexCell]:
    acc = [ConvexCell.cube(dim)]
    for F in fns:
        nxt = []
        for r in acc:
            for cell in F.cells:
                if r.box_disjoint(cell.body):
                    continue
                inter = r.intersect(cell.body)
                if inter is not None and inter.full_dim():
                    nxt.append(inter)
        acc = nxt
    return acc


def _candidate_directions(
    cells: Sequence[ConvexCell], dim: int
) -> list[Point]:
    """Edge directions of the overlaid complex plus the coordinate axes,
    both orientations, as primitive integer vectors."""
    prims: dict[tuple[int, ...], None] = {}
    for i in range(dim):
        e = [0] * dim
        e[i] = 1
        prims[tuple(e)] = None
        prims[tuple(-v for v in e)] = None
    need = dim - 1
    for cell in cells:
        masks = cell.masks()
        verts = cell.verts
        for i in range(len(verts)):
            for j in range(i + 1, len(verts)):
                if need > 0 and bin(masks[i] & masks[j]).count("1") < need:
                    continue
                vi, vj = verts[i], verts[j]
                vec = tuple(
                    vj[1 + k] * vi[0] - vi[1 + k] * vj[0] for k in range(dim)
                )
                g = 0
                for v in vec:
                    g = math.gcd(g, v)
                if g == 0:
                    continue
                vec = tuple(v // g for v in vec)
                prims[vec] = None
                prims[tuple(-v for v in vec)] = None
    return [tuple(Fraction(v) for v in vec) for vec in prims]


def _in_ideal_fast(F: pl.PLFunction, flag: DifferentialValuation) -> bool:
    """Ideal membership for an already-validated valuation."""
    cell = pl.germ_cell(F, flag)
    piece = cell.piece
    if piece(flag.base) != 0:
        return False
    return all(piece.gradient_dot(u) == 0 for u in flag.directions)


def _differential_witness_search(
    theory: Theory,
    compiled: Sequence[pl.PLFunction],
    query_fn: pl.PLFunction,
    dim: int,
) -> tuple[DifferentialValuation | None, int]:
    """Bounded search for a flag satisfying the theory but not the query.

    Candidate bases are the vertices of the overlaid complex that model the
    theory; directions come from that complex's edges and the axes; flags
    have order at most 2 with orthogonal directions.  Returns (witness or
    None, number of flags examined).
    """
    neg_theory = [pl.negate(F) for F in compiled]
    neg_query = pl.negate(query_fn)
    overlay = _overlay_cells(list(compiled) + [query_fn], dim)
    bases: dict[tuple[int, ...], None] = {}
    for cell in overlay:
        for v in cell.verts:
            bases[v] = None
    models: list[Point] = []
    for iv in bases:
        if all(pl.eval_pl_scaled(F, iv) == 1 for F in compiled):
            models.append(unscale_point(iv))
    dirs = _candidate_directions(overlay, dim)
    examined = 0

    def check(flag: DifferentialValuation) -> DifferentialValuation | None:
        nonlocal examined
        examined += 1
        if not all(_in_ideal_fast(nf, flag) for nf in neg_theory):
            return None
        if _in_ideal_fast(neg_query, flag):
            return None
        return flag

    for base in models:
        flag0 = DifferentialValuation(base)
        if check(flag0) is not None:
            return flag0, examined
        sat_order1: list[DifferentialValuation] = []
        for u in dirs:
            flag1 = DifferentialValuation(base, (u,))
            if not validate(flag1):
                continue
            examined += 1
            if not all(_in_ideal_fast(nf, flag1) for nf in neg_theory):
                continue
            if not _in_ideal_fast(neg_query, flag1):
                return flag1, examined
            sat_order1.append(flag1)
        for flag1 in sat_order1:
            u1 = flag1.directions[0]
            for u2 in dirs:
                if sum(a * b for a, b in zip(u1, u2)) != 0:
                    continue
                flag2 = DifferentialValuation(base, (u1, u2))
                if not validate(flag2):
                    continue
                if check(flag2) is not None:
                    return flag2, examined
    return None, examined


def stable_consequence(
    theory: Theory, query: fm.Formula, dim: int | None = None
) -> ConsequenceReport:
    """Consequence under differential refinement of satisfaction.

    For finite theories the verdict is the semantic one; the bounded
    witness search never silently disagrees: a witness against a positive
    verdict raises InternalSoundnessError.
    """
    dim, compiled, query_fn = _compile_all(theory, query, dim)
    sem = semantic_consequence(theory, query, dim)
    witness, examined = _differential_witness_search(
        theory, compiled, query_fn, dim
    )
    notes = [COLLAPSE_NOTE]
    if sem.holds:
        if witness is not None:
            raise InternalSoundnessError(
                "stable consequence reported to hold, but the differential "
                f"valuation {witness.describe()} satisfies the theory and "
                "refutes the query"
            )
        notes.append(
            f"differential witness search examined {examined} flags, none "
            "contradicts the verdict"
        )
        return ConsequenceReport(
            "stable", "holds", sem.minimum, None, tuple(notes)
        )
    countermodel: DifferentialValuation | Point
    if witness is not None:
        countermodel = witness
        notes.append("differential countermodel found by the bounded search")
    else:
        assert sem.countermodel is not None
        countermodel = DifferentialValuation(tuple(sem.countermodel))
        notes.append("order-0 countermodel taken from the semantic argmin")
    return ConsequenceReport(
        "stable", "fails", sem.minimum, countermodel, tuple(notes)
    )


# === witness verification =============================================

@dataclass(frozen=True)
class WitnessReport:
    ok: bool
    valid_valuation: bool
    failing_members: tuple[int, ...]
    refutes_query: bool
    proviso: str
    reason: str | None = None


def witness_verify(
    theory: Theory,
    query: fm.Formula,
    valuation: DifferentialValuation,
    dim: int | None = None,
) -> WitnessReport:
    """Check a claimed differential countermodel: the valuation must
    satisfy every theory member and must not satisfy the query.

    Failing members are reported 1-based, matching theory-file line order."""
    check = validate(valuation)
    if not check:
        raise ValueError(f"invalid differential valuation: {check.reason}")
    need = max(theory.dimension(), fm.top_dimension(query))
    if dim is None:
        dim = max(valuation.dim, need)
    if valuation.dim != dim or dim < need:
        raise pl.DimensionError(
            f"valuation dimension {valuation.dim} does not fit the problem"
        )
    failing = []
    for i, f in enumerate(theory.formulas):
        neg = pl.compile_formula(fm.Neg(f), dim)
        if not _in_ideal_fast(neg, valuation):
            failing.append(i + 1)
    refutes = not _in_ideal_fast(
        pl.compile_formula(fm.Neg(query), dim), valuation
    )
    ok = not failing and refutes
    return WitnessReport(
        ok, True, tuple(failing), refutes, WITNESS_PROVISO, None
    )


# === interval formulas =================================================

def formula_from_interval(a: Fraction | int | str) -> fm.Formula:
    """A one-variable formula whose one-set is exactly [0, a], strictly
    decreasing immediately to the right of a; requires 0 < a < 1.

    The result is verified against the compiled one-set before returning.
    """
    a = Fraction(a)
    if not 0 < a < 1:
        raise ValueError("the interval endpoint must satisfy 0 < a < 1")
    p, q = a.numerator, a.denominator
    theta = fm.Neg(_clip_formula(q, p))
    _verify_interval_formula(theta, a)
    return theta


def _clip_formula(q: int, p: int) -> fm.Formula:
    """Formula computing clip(q x - p) = min(1, max(0, q x - p)) on [0,1]."""
    cache: dict[tuple[int, int], fm.Formula] = {}

    def build(q: int, p: int) -> fm.Formula:
        got = cache.get((q, p))
        if got is not None:
            return got
        if p >= q:
            out: fm.Formula = fm.Neg(fm.Impl(fm.Var(1), fm.Var(1)))
        elif p == 0:
            out = _oplus_power(q)
        elif q % 2 == 0 and p % 2 == 0:
            f = build(q // 2, p // 2)
            out = fm.OPlus(f, f)
        elif q % 2 == 0:
            f = build(q // 2, (p - 1) // 2)
            out = fm.OTimes(f, f)
        else:
            f = build(q - 1, p - 1)
            g = build(q - 1, p)
            out = fm.OTimes(f, fm.OPlus(fm.Var(1), g))
        cache[(q, p)] = out
        return out

    return build(q, p)


def _oplus_power(k: int) -> fm.Formula:
    if k == 1:
        return fm.Var(1)
    half = _oplus_power(k // 2)
    doubled = fm.OPlus(half, half)
    return fm.OPlus(doubled, fm.Var(1)) if k % 2 else doubled


def _verify_interval_formula(theta: fm.Formula, a: Fraction) -> None:
    F = pl.compile_formula(theta, 1)
    ones = pl.one_set_cells(F)
    intervals = sorted(
        (cell.box()[0] for cell in ones), key=lambda iv: (iv[0], iv[1])
    )
    merged: list[list[Fraction]] = []
    for lo, hi in intervals:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    if len(merged) != 1 or merged[0][0] != 0 or merged[0][1] != a:
        raise RuntimeError(
            f"interval synthesis failed verification for a = {format_rat(a)}"
        )
    slope = pl.dir_deriv(F, (a,), (Fraction(1),))
    if slope >= 0:
        raise RuntimeError(
            f"interval synthesis is not decreasing right of a = {format_rat(a)}"
        )
