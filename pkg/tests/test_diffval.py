"""Differential valuations, ideal membership, and domination."""

import random
from fractions import Fraction

import pytest

from lukalab import (
    compile_formula,
    dominates,
    dominates_report,
    eval_formula,
    in_ideal,
    make_valuation,
    parse,
    satisfies,
    validate,
)
from lukalab.geometry import (
    affine_from_ints,
    cube_faces,
    flag_simplex,
    sign_threshold,
)
import lukalab.pl_engine as pl
from conftest import in_hull, random_formula, random_point, random_valuation

F = Fraction


def test_validity_examples():
    assert not validate(make_valuation((F(1),), (F(1),))).ok
    assert validate(make_valuation((F(1),), (F(-1),))).ok
    assert validate(
        make_valuation((F(1, 2), F(1, 2)), (F(1), F(0)), (F(0), F(1)))
    ).ok


def test_validity_rejects_broken_flags():
    # base outside the cube
    assert not validate(make_valuation((F(2),), (F(-1),))).ok
    # non-orthogonal directions
    bad = make_valuation((F(1, 2), F(1, 2)), (F(1), F(0)), (F(1), F(1)))
    assert not validate(bad).ok
    # zero direction
    assert not validate(make_valuation((F(1, 2),), (F(0),))).ok


def test_in_ideal_examples():
    u = make_valuation((F(0),), (F(1),))
    assert not in_ideal(compile_formula(parse("X1"), 1), u)
    assert in_ideal(compile_formula(parse("X1 * X1"), 1), u)
    contradiction = compile_formula(parse("!(X1 -> X1)"), 1)
    for val in (u, make_valuation((F(1, 2),)), make_valuation((F(1),), (F(-1),))):
        assert in_ideal(contradiction, val)


def test_in_ideal_matches_direct_definition():
    rng = random.Random(441)
    for _ in range(150):
        n = rng.randint(1, 2)
        u = random_valuation(rng, n)
        Fn = compile_formula(random_formula(rng, n, 10), n)
        # threshold covering the cube faces and every cell constraint
        worst = 1
        for h in cube_faces(n):
            worst = max(worst, sign_threshold(h, u))
        for cell in Fn.cells:
            for con in cell.body.cons:
                worst = max(worst, sign_threshold(affine_from_ints(con), u))
        for m in (worst, 2 * worst):
            verts = flag_simplex(u, m).vertices
            k = len(verts)
            bary = tuple(sum(v[i] for v in verts) / k for i in range(n))
            vanishes = all(
                pl.eval_pl(Fn, v) == 0 for v in verts
            ) and pl.eval_pl(Fn, bary) == 0
            assert vanishes == in_ideal(Fn, u)


def test_satisfies_examples():
    hat = parse("!(X1 * X1)")
    assert not satisfies(make_valuation((F(1, 2),), (F(1),)), hat)
    assert satisfies(make_valuation((F(1, 2),), (F(-1),)), hat)
    assert satisfies(make_valuation((F(1),)), parse("X1"))


def test_order_zero_reduction():
    rng = random.Random(442)
    for _ in range(200):
        n = rng.randint(1, 3)
        f = random_formula(rng, n, 10)
        v = random_point(rng, n, den=16)
        expect = eval_formula(f, v) == 1
        assert satisfies(make_valuation(v), f) == expect


def test_positive_scaling_invariance():
    rng = random.Random(443)
    for _ in range(100):
        n = rng.randint(1, 2)
        u = random_valuation(rng, n)
        if u.order == 0:
            continue
        Fn = compile_formula(random_formula(rng, n, 10), n)
        c = F(rng.randint(1, 5), rng.randint(1, 5))
        k = rng.randrange(u.order)
        dirs = list(u.directions)
        dirs[k] = tuple(c * d for d in dirs[k])
        scaled = make_valuation(u.base, *dirs)
        assert validate(scaled).ok
        assert in_ideal(Fn, scaled) == in_ideal(Fn, u)


def test_simplex_nestedness():
    rng = random.Random(444)
    for _ in range(40):
        u = random_valuation(rng, rng.randint(1, 3))
        for m in range(1, 8):
            big = flag_simplex(u, m).vertices
            for v in flag_simplex(u, m + 1).vertices:
                assert in_hull(v, big)


def test_prime_ideal_laws():
    rng = random.Random(445)
    for _ in range(100):
        n = rng.randint(1, 2)
        u = random_valuation(rng, n)
        A = compile_formula(random_formula(rng, n, 8), n)
        B = compile_formula(random_formula(rng, n, 8), n)
        d1 = pl.combine(A, B, "tminus")
        d2 = pl.combine(B, A, "tminus")
        i1, i2 = in_ideal(d1, u), in_ideal(d2, u)
        assert i1 or i2  # primality
        w = d1 if i1 else d2
        # downward closure: min(w, B) <= w
        assert in_ideal(pl.combine(w, B, "min"), u)
        if i1 and i2:
            assert in_ideal(pl.combine(d1, d2, "oplus"), u)


def test_dominates_examples():
    u = make_valuation((F(1, 2),), (F(1),))
    v_good = make_valuation((F(1, 2), F(0)), (F(1), F(0)))
    v_bad = make_valuation((F(1, 2), F(0)), (F(0), F(1)))
    assert dominates(v_good, (1, 2), u, (1,))
    assert not dominates(v_bad, (1, 2), u, (1,))
    assert dominates(u, (1,), u, (1,))


def test_dominates_reflexive_and_probe_consistent():
    rng = random.Random(446)
    for _ in range(60):
        n = rng.randint(1, 2)
        u = random_valuation(rng, n)
        varset = tuple(range(1, n + 1))
        rep = dominates_report(u, varset, u, varset)
        assert rep.verdict and rep.geometric and rep.probe_agrees
    # the probe family must never contradict a geometric yes
    for _ in range(80):
        u1 = random_valuation(rng, 1, max_order=1)
        big = random_valuation(rng, 2)
        rep = dominates_report(big, (1, 2), u1, (1,))
        if rep.geometric:
            assert rep.probe_agrees, rep.detail


def test_dominates_rejects_bad_variable_sets():
    u = make_valuation((F(1, 2),))
    v = make_valuation((F(1, 2), F(1, 2)))
    with pytest.raises(ValueError):
        dominates(v, (1, 2), u, (3,))
