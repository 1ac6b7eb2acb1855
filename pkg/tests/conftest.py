"""Shared random generators for the test suite.

Everything is driven by an explicit random.Random instance so each test
seeds its own stream and stays reproducible in isolation.
"""

from fractions import Fraction

from lukalab import AffineFn, Polyhedron, RegionUnion, make_valuation, validate
from lukalab.formula import Impl, Max, Min, Neg, OPlus, OTimes, Var
from lukalab.geometry import ConvexCell, feasible_point, unit_cube

BINARY = (Impl, OPlus, OTimes, Max, Min)


def random_formula(rng, n_vars, budget):
    """Random AST using at most `budget` connectives."""
    if budget <= 0 or rng.random() < 0.15:
        return Var(rng.randint(1, n_vars))
    if rng.random() < 0.25:
        return Neg(random_formula(rng, n_vars, budget - 1))
    left = rng.randint(0, budget - 1)
    a = random_formula(rng, n_vars, left)
    b = random_formula(rng, n_vars, budget - 1 - left)
    return rng.choice(BINARY)(a, b)


def random_point(rng, n, den=64):
    return tuple(Fraction(rng.randint(0, den), den) for _ in range(n))


def interior_point(rng, n, den=64):
    return tuple(Fraction(rng.randint(1, den - 1), den) for _ in range(n))


def random_direction(rng, n, span=3):
    while True:
        u = tuple(Fraction(rng.randint(-span, span)) for _ in range(n))
        if any(u):
            return u


def random_valuation(rng, n, max_order=2, interior=None):
    """A valid differential valuation of order <= min(n, max_order).

    Orthogonality is arranged by construction (second direction is a
    rotation of the first); validity is rechecked and failures retried,
    which only happens for boundary bases with outward directions.
    """
    while True:
        if interior or (interior is None and rng.random() < 0.7):
            base = tuple(Fraction(rng.randint(1, 15), 16) for _ in range(n))
        else:
            base = tuple(Fraction(rng.randint(0, 16), 16) for _ in range(n))
        order = rng.randint(0, min(n, max_order))
        dirs = []
        if order >= 1:
            dirs.append(random_direction(rng, n, span=2))
        if order >= 2 and n >= 2:
            a, b = dirs[0][0], dirs[0][1]
            v = (-b, a) if rng.random() < 0.5 else (b, -a)
            v = tuple(v) + tuple(Fraction(0) for _ in range(n - 2))
            if any(v):
                dirs.append(v)
        val = make_valuation(base, *dirs)
        if validate(val).ok:
            return val


def random_polyhedron(rng, n=2, cuts=3, den=2):
    """The cube clipped by a few random half-planes; may be empty."""
    cons = list(unit_cube(n).constraints)
    for _ in range(rng.randint(1, cuts)):
        coeffs = tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))
        if not any(coeffs):
            continue
        cons.append(AffineFn(Fraction(rng.randint(-2, 2 * den), den), coeffs))
    return Polyhedron(n, tuple(cons))


def random_region(rng, n=2, members=3):
    """A nonempty union of random polyhedra (empty candidates dropped)."""
    kept = []
    for _ in range(rng.randint(1, members)):
        p = random_polyhedron(rng, n)
        if ConvexCell.from_polyhedron(p) is not None:
            kept.append(p)
    if not kept:
        return random_region(rng, n, members)
    return RegionUnion(n, tuple(kept))


def in_hull(point, verts):
    """LP certificate that `point` is a convex combination of `verts`.

    Feasibility problem in the combination weights: lambda_i >= 0 summing
    to one with the weighted vertices matching the point coordinatewise.
    """
    t = len(verts) - 1
    if t == 0:
        return tuple(point) == tuple(verts[0])
    n = len(point)
    zero, one = Fraction(0), Fraction(1)
    cons = [
        AffineFn(zero, tuple(one if j == i else zero for j in range(t)))
        for i in range(t)
    ]
    cons.append(AffineFn(one, tuple(-one for _ in range(t))))
    for j in range(n):
        coeffs = tuple(verts[i + 1][j] - verts[0][j] for i in range(t))
        rhs = point[j] - verts[0][j]
        cons.append(AffineFn(-rhs, coeffs))
        cons.append(AffineFn(rhs, tuple(-c for c in coeffs)))
    return feasible_point(Polyhedron(t, tuple(cons))) is not None
