"""Semantic and stable consequence, witnesses, and interval formulas."""

import random
from fractions import Fraction

import pytest

from lukalab import (
    RegionUnion,
    Theory,
    compile_formula,
    eval_formula,
    formula_from_interval,
    make_valuation,
    one_set,
    parse,
    semantic_consequence,
    semantic_over_set,
    stable_consequence,
    to_text,
    witness_verify,
)
from lukalab.consequence import DifferentialValuation
from lukalab.geometry import AffineFn, Polyhedron
import lukalab.pl_engine as pl
from conftest import random_formula

F = Fraction


def interval_region(lo, hi):
    return RegionUnion(
        1, (Polyhedron(1, (AffineFn(-F(lo), (F(1),)), AffineFn(F(hi), (F(-1),)))),)
    )


def test_semantic_examples():
    r = semantic_consequence(Theory((parse("X1"),)), parse("X1 + X1"))
    assert r.verdict == "holds" and r.minimum == 1
    r = semantic_consequence(Theory((parse("!(X1 * X1)"),)), parse("!X1"))
    assert r.verdict == "fails"
    assert r.minimum == F(1, 2) and r.countermodel == (F(1, 2),)
    r = semantic_consequence(Theory(()), parse("X1 -> X1"), dim=1)
    assert r.verdict == "holds"


def test_semantic_countermodels_check_out():
    rng = random.Random(451)
    for _ in range(60):
        n = rng.randint(1, 2)
        th = Theory(tuple(random_formula(rng, n, 6) for _ in range(rng.randint(1, 3))))
        q = random_formula(rng, n, 6)
        r = semantic_consequence(th, q, dim=n)
        if r.verdict == "fails":
            v = r.countermodel
            assert all(eval_formula(t, v) == 1 for t in th)
            assert eval_formula(q, v) < 1
            assert r.minimum == eval_formula(q, v)


def test_semantic_with_unsatisfiable_theory():
    th = Theory((parse("X1"), parse("!X1")))
    r = semantic_consequence(th, parse("X2"), dim=2)
    assert r.verdict == "holds"
    assert any("vacuous" in note for note in r.notes)


def test_over_set_examples():
    hat = parse("!(X1 * X1)")
    assert semantic_over_set(interval_region(0, F(1, 2)), hat).verdict == "holds"
    r = semantic_over_set(interval_region(0, F(1, 2)), parse("!X1"))
    assert r.verdict == "fails" and r.countermodel == (F(1, 2),)
    empty = RegionUnion(
        1, (Polyhedron(1, (AffineFn(F(-1), (F(1),)), AffineFn(F(0), (F(-1),)))),)
    )
    assert semantic_over_set(empty, parse("!X1")).verdict == "holds"


def test_stable_examples():
    r = stable_consequence(Theory((parse("!(X1 * X1)"),)), parse("!X1"))
    assert r.verdict == "fails"
    assert stable_consequence(Theory((parse("X1"),)), parse("X1 + X1")).holds
    assert stable_consequence(Theory(()), parse("X1 -> X1"), dim=1).holds


def test_stable_matches_semantic_on_finite_theories():
    rng = random.Random(452)
    for _ in range(40):
        n = rng.randint(1, 2)
        th = Theory(tuple(random_formula(rng, n, 6) for _ in range(rng.randint(1, 4))))
        q = random_formula(rng, n, 6)
        sem = semantic_consequence(th, q, dim=n)
        stab = stable_consequence(th, q, dim=n)
        assert sem.verdict == stab.verdict
        if not stab.holds:
            assert stab.countermodel is not None


def test_stable_failure_reports_a_valuation():
    r = stable_consequence(Theory((parse("!(X1 * X1)"),)), parse("!X1"))
    assert isinstance(r.countermodel, DifferentialValuation)
    # the reported valuation satisfies the theory and not the query
    from lukalab import satisfies

    u = r.countermodel
    assert satisfies(u, parse("!(X1 * X1)"))
    assert not satisfies(u, parse("!X1"))


def test_witness_verify_examples():
    thetas = tuple(formula_from_interval(F(1, 2) + F(1, 2**k)) for k in range(3, 11))
    hat = parse("!(X1 * X1)")
    u = make_valuation((F(1, 2),), (F(1),))
    rep = witness_verify(Theory(thetas), hat, u)
    assert rep.ok and rep.valid_valuation
    assert rep.failing_members == ()
    assert rep.refutes_query
    # a valuation satisfying the query is no witness
    rep = witness_verify(Theory((parse("X1"),)), parse("X1"), make_valuation((F(1),)))
    assert not rep.ok and not rep.refutes_query
    # a valuation failing a member is no witness
    rep = witness_verify(
        Theory((parse("!X1"),)), parse("!(X1 + X1)"), make_valuation((F(0),), (F(1),))
    )
    assert not rep.ok and rep.failing_members == (1,)


def test_witness_verify_rejects_invalid_valuation():
    with pytest.raises(ValueError):
        witness_verify(
            Theory((parse("X1"),)), parse("X1"), make_valuation((F(1),), (F(1),))
        )


def test_formula_from_interval():
    assert to_text(formula_from_interval(F(2, 3))) == "!(X1 * X1 * (X1 + !(X1 -> X1)))"
    for a in (F(1, 2), F(2, 3), F(5, 8), F(1, 7), F(13, 16), F(3, 5)):
        theta = formula_from_interval(a)
        Fn = compile_formula(theta, 1)
        # one-set is exactly [0, a]
        cells = pl.one_set_cells(Fn)
        lo = min(c.box()[0][0] for c in cells)
        hi = max(c.box()[0][1] for c in cells)
        assert lo == 0 and hi == a
        for x in (F(0), a / 2, a):
            assert eval_formula(theta, (x,)) == 1
        step = (1 - a) / 7
        for k in range(1, 8):
            assert eval_formula(theta, (a + k * step,)) < 1
    with pytest.raises(ValueError):
        formula_from_interval(F(0))
    with pytest.raises(ValueError):
        formula_from_interval(F(1))


def test_variable_padding_keeps_verdicts():
    rng = random.Random(453)
    for _ in range(40):
        n = rng.randint(1, 2)
        th = Theory(tuple(random_formula(rng, n, 6) for _ in range(rng.randint(1, 3))))
        q = random_formula(rng, n, 6)
        a = semantic_consequence(th, q, dim=n)
        b = semantic_consequence(th, q, dim=n + 1)
        assert a.verdict == b.verdict
        assert a.minimum == b.minimum


def test_theory_helpers():
    th = Theory((parse("X1"), parse("X2 + X1")), name="pair")
    assert len(th) == 2
    assert th.dimension() == 2
    assert [to_text(f) for f in th] == ["X1", "X2 + X1"]
    with pytest.raises(pl.DimensionError):
        semantic_consequence(th, parse("X3"), dim=2)
