"""Exact rational linear programming.

Dense two-phase tableau simplex with Bland's rule.  The tableau is kept in
integers with one shared positive denominator ("fraction-free" pivoting): a
pivot on row r, column c maps every other row i to

    T[i][j]  <-  (T[i][j] * T[r][c] - T[i][c] * T[r][j]) // det

leaves row r untouched, and the new denominator is the old pivot entry
T[r][c].  Every division is exact (the entries are Cramer subdeterminants of
the integer input), pivot entries are always positive so integer signs equal
true signs, and no Fraction is built until the answer is read off.

Problem form.  ``solve(n, rows, objective)`` minimises ``a0 + a . x`` over
``{x in R^n : r0 + r . x >= 0 for every row}``.  Free variables are split as
x = x+ - x-.  Bland's rule (always the lowest-index eligible column, lowest
basic index on ratio ties) rules out cycling.
"""

from __future__ import annotations

from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class _Tableau:
    def __init__(self, num_vars: int, rows: list[tuple[int, ...]]):
        n, m = num_vars, len(rows)
        self.n = n
        self.m = m
        flips = [row[0] < 0 for row in rows]
        n_art = sum(flips)
        self.slack0 = 2 * n
        self.art0 = 2 * n + m
        self.rhs = self.art0 + n_art
        self.det = 1
        self.body: list[list[int]] = []
        self.basis: list[int] = []
        art = self.art0
        for i, row in enumerate(rows):
            a0, coeffs = row[0], row[1:]
            line = [0] * (self.rhs + 1)
            sign = -1 if flips[i] else 1
            for j, c in enumerate(coeffs):
                # a0 + c.x >= 0  becomes  -c.(x+ - x-) + s = a0
                line[j] = -c * sign
                line[n + j] = c * sign
            line[self.slack0 + i] = sign
            line[self.rhs] = a0 * sign
            if flips[i]:
                line[art] = 1
                self.basis.append(art)
                art += 1
            else:
                self.basis.append(self.slack0 + i)
            self.body.append(line)

    def priced_objective(self, cost: list[int]) -> list[int]:
        """Objective row with basic columns eliminated: entries are
        det * (reduced cost), and -row[rhs]/det is the objective value."""
        row = [c * self.det for c in cost] + [0]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                body = self.body[i]
                for j in range(self.rhs + 1):
                    row[j] -= cb * body[j]
        return row

    def pivot(self, r: int, c: int, obj: list[int]) -> None:
        det = self.det
        piv = self.body[r][c]
        assert piv > 0
        prow = self.body[r]
        width = self.rhs + 1
        for i, line in enumerate(self.body):
            if i == r:
                continue
            f = line[c]
            if f:
                for j in range(width):
                    line[j] = (line[j] * piv - f * prow[j]) // det
            elif piv != det:
                for j in range(width):
                    line[j] = line[j] * piv // det
        f = obj[c]
        for j in range(width):
            obj[j] = (obj[j] * piv - f * prow[j]) // det
        self.basis[r] = c
        self.det = piv

    def ratio_row(self, c: int) -> int | None:
        """Leaving row by the minimum-ratio test, Bland tie-break."""
        best = None
        for i, line in enumerate(self.body):
            t = line[c]
            if t <= 0:
                continue
            if best is None:
                best = i
                continue
            bl = self.body[best]
            # compare rhs_i / t_i  with  rhs_best / t_best by cross product
            lhs = line[self.rhs] * bl[c]
            rhs = bl[self.rhs] * t
            if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                best = i
        return best

    def run(self, obj: list[int], allowed: range | None = None) -> str:
        hi = self.rhs if allowed is None else allowed.stop
        lo = 0 if allowed is None else allowed.start
        while True:
            enter = None
            for j in range(lo, hi):
                if obj[j] < 0:
                    enter = j
                    break
            if enter is None:
                return OPTIMAL
            r = self.ratio_row(enter)
            if r is None:
                return UNBOUNDED
            self.pivot(r, enter, obj)

    def drop_artificials(self) -> None:
        """After a zero phase-1 optimum, force artificials out of the basis
        and slice the artificial columns away."""
        dummy = [0] * (self.rhs + 1)
        for r in range(self.m - 1, -1, -1):
            if self.basis[r] < self.art0:
                continue
            piv_col = None
            for j in range(self.art0):
                if self.body[r][j]:
                    piv_col = j
                    break
            if piv_col is None:
                # 0 = 0 row: redundant constraint
                del self.body[r]
                del self.basis[r]
                continue
            if self.body[r][piv_col] < 0:
                self.body[r] = [-v for v in self.body[r]]
            self.pivot(r, piv_col, dummy)
        self.m = len(self.body)
        keep = list(range(self.art0)) + [self.rhs]
        self.body = [[line[j] for j in keep] for line in self.body]
        self.rhs = self.art0

    def solution(self) -> tuple[Fraction, ...]:
        n = self.n
        vals = [Fraction(0)] * (2 * n)
        for i, b in enumerate(self.basis):
            if b < 2 * n:
                vals[b] = Fraction(self.body[i][self.rhs], self.det)
        return tuple(vals[k] - vals[n + k] for k in range(n))


def solve(
    num_vars: int,
    rows: list[tuple[int, ...]],
    objective: tuple[int, ...],
) -> tuple[str, Fraction | None, tuple[Fraction, ...] | None]:
    """Minimise ``objective`` over the rows' intersection; all integer input.

    Returns (status, value, point); value and point are None unless optimal.
    """
    tab = _Tableau(num_vars, rows)
    if tab.rhs > tab.art0:
        cost = [0] * tab.rhs
        for j in range(tab.art0, tab.rhs):
            cost[j] = 1
        obj1 = tab.priced_objective(cost)
        status = tab.run(obj1)
        assert status == OPTIMAL, "phase 1 is bounded below by zero"
        if obj1[tab.rhs] != 0:
            return INFEASIBLE, None, None
        tab.drop_artificials()
    cost = [0] * tab.rhs
    for k in range(num_vars):
        cost[k] = objective[1 + k]
        cost[num_vars + k] = -objective[1 + k]
    obj2 = tab.priced_objective(cost)
    status = tab.run(obj2)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    value = Fraction(-obj2[tab.rhs], tab.det) + objective[0]
    return OPTIMAL, value, tab.solution()


def feasible_point(
    num_vars: int, rows: list[tuple[int, ...]]
) -> tuple[Fraction, ...] | None:
    """A point of the rows' intersection, or None if it is empty."""
    tab = _Tableau(num_vars, rows)
    if tab.rhs > tab.art0:
        cost = [0] * tab.rhs
        for j in range(tab.art0, tab.rhs):
            cost[j] = 1
        obj1 = tab.priced_objective(cost)
        tab.run(obj1)
        if obj1[tab.rhs] != 0:
            return None
        tab.drop_artificials()
    return tab.solution()
