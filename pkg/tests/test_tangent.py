"""Tangent cones, tangent sequences, and strong-semisimplicity checks."""

import random
from fractions import Fraction

import pytest

from lukalab import (
    AffineFn,
    PointSequence,
    PolyhedralSet,
    Polyhedron,
    RegionUnion,
    certify_outgoing,
    certify_tangent_sequence,
    compile_formula,
    cone_contains,
    one_set,
    parse,
    sss_check,
    tangent_cone_polyhedral,
)
from lukalab.geometry import ConvexCell, contains, unit_cube
from conftest import random_region

F = Fraction


def parabola_sequence(count=200):
    return PointSequence(
        (F(0), F(0)), tuple((F(1, i), F(1, i * i)) for i in range(1, count + 1))
    )


def test_cone_contains_examples():
    x, u = (F(0), F(0)), (F(1), F(0))
    assert cone_contains(x, u, 1, (F(1, 2), F(1, 8)))
    assert not cone_contains(x, u, 3, (F(1, 2), F(1, 8)))
    # apex itself is never inside (no positive axial component)
    assert not cone_contains(x, u, 1, x)


def test_cone_monotone_and_scale_invariant():
    rng = random.Random(461)
    for _ in range(300):
        n = rng.randint(1, 3)
        x = tuple(F(rng.randint(0, 8), 8) for _ in range(n))
        u = tuple(F(rng.randint(-3, 3)) for _ in range(n))
        if not any(u):
            continue
        y = tuple(F(rng.randint(0, 16), 16) for _ in range(n))
        for m in range(1, 5):
            if cone_contains(x, u, m + 1, y):
                assert cone_contains(x, u, m, y)
        c = F(rng.randint(1, 6), rng.randint(1, 6))
        cu = tuple(c * d for d in u)
        for m in (1, 2, 5):
            assert cone_contains(x, u, m, y) == cone_contains(x, cu, m, y)


def test_certify_sequence():
    seq = parabola_sequence()
    r = certify_tangent_sequence(seq, (F(1), F(0)), 10)
    assert r.verdict == "certified-up-to-10" and r.certified
    # each certificate names a sequence point inside the matching cone
    for m, idx in r.evidence:
        assert cone_contains(seq.limit, (F(1), F(0)), m, seq.points[idx])
    r = certify_tangent_sequence(seq, (F(0), F(1)), 3)
    assert r.verdict.startswith("refuted-at")
    assert "prefix" in r.caveat


def test_certify_single_point_prefix_limitation():
    seq = PointSequence((F(0), F(0)), ((F(3, 4), F(0)),))
    r = certify_tangent_sequence(seq, (F(1), F(0)), 2)
    assert r.verdict == "refuted-at-2"  # height 1/2 excludes the lone point


def test_certify_rejects_polyhedral_input():
    with pytest.raises(TypeError):
        certify_tangent_sequence(
            PolyhedralSet(RegionUnion(2, (unit_cube(2),))), (F(1), F(0)), 3
        )


def test_outgoing_examples():
    seq = parabola_sequence()
    assert certify_outgoing(seq, (F(0), F(0)), (F(1), F(0)), F(1, 2))
    square = PolyhedralSet(RegionUnion(2, (unit_cube(2),)))
    assert not certify_outgoing(square, (F(0), F(0)), (F(1), F(0)), F(1, 2))
    edge = PolyhedralSet(
        RegionUnion(
            2,
            (
                Polyhedron(
                    2,
                    (
                        AffineFn(F(0), (F(1), F(0))),
                        AffineFn(F(0), (F(-1), F(0))),
                        AffineFn(F(0), (F(0), F(1))),
                        AffineFn(F(1), (F(0), F(-1))),
                    ),
                ),
            ),
        )
    )
    assert certify_outgoing(edge, (F(0), F(0)), (F(1), F(0)), F(1, 2))


def test_outgoing_validates_input():
    square = PolyhedralSet(RegionUnion(2, (unit_cube(2),)))
    with pytest.raises(ValueError):
        certify_outgoing(square, (F(0), F(0)), (F(-1), F(0)), F(1, 2))
    with pytest.raises(ValueError):
        certify_outgoing(square, (F(0), F(0)), (F(1), F(0)), F(0))


def test_tangent_cone_examples():
    square = RegionUnion(2, (unit_cube(2),))
    assert set(tangent_cone_polyhedral(square, (F(0), F(0)))) == {
        (F(1), F(0)),
        (F(0), F(1)),
    }
    half = RegionUnion(
        1, (Polyhedron(1, (AffineFn(F(0), (F(1),)), AffineFn(F(1, 2), (F(-1),)))),)
    )
    assert set(tangent_cone_polyhedral(half, (F(1, 2),))) == {(F(-1),)}
    assert set(tangent_cone_polyhedral(square, (F(1, 2), F(1, 2)))) == {
        (F(1), F(0)),
        (F(-1), F(0)),
        (F(0), F(1)),
        (F(0), F(-1)),
    }
    with pytest.raises(ValueError):
        tangent_cone_polyhedral(square, (F(2), F(0)))


def test_polyhedral_sets_have_no_outgoing_generators():
    rng = random.Random(462)
    for _ in range(30):
        X = random_region(rng, 2)
        for member in X:
            cell = ConvexCell.from_polyhedron(member)
            for v in cell.verts:
                x = tuple(F(num, v[0]) for num in v[1:])
                for u in tangent_cone_polyhedral(X, x):
                    for lam in (F(1, 4), F(1, 16), F(1, 64), F(1, 256)):
                        tip = tuple(a + lam * b for a, b in zip(x, u))
                        if not all(0 <= c <= 1 for c in tip):
                            continue
                        # both endpoints in one member: the segment stays in X
                        if not any(
                            contains(m, x) and contains(m, tip) for m in X
                        ):
                            continue
                        assert not certify_outgoing(PolyhedralSet(X), x, u, lam)


def test_sss_check_examples():
    seq = parabola_sequence()
    r = sss_check(seq, candidates=(((F(0), F(0)), (F(1), F(0))),), M=10)
    assert r.verdict == "not-strongly-semisimple-witnessed"
    assert r.basis == "theorem"
    assert r.witnesses
    point, direction, cert = r.witnesses[0]
    assert point == (F(0), F(0)) and direction == (F(1), F(0))
    assert cert.certified
    r = sss_check(seq, candidates=(((F(0), F(0)), (F(0), F(1))),), M=10)
    assert r.verdict == "no-witness-found-up-to-10"
    theory_set = one_set(compile_formula(parse("!(X1 * X1 + X2 * X2)"), 2))
    assert sss_check(PolyhedralSet(theory_set)).verdict == "strongly-semisimple"


def test_sss_flags_non_planar_input_as_heuristic():
    seq = PointSequence(
        (F(0), F(0), F(0)), tuple((F(1, i), F(1, i * i), F(0)) for i in range(2, 40))
    )
    r = sss_check(seq, candidates=(((F(0), F(0), F(0)), (F(1), F(0), F(0))),), M=5)
    assert r.basis == "heuristic"
