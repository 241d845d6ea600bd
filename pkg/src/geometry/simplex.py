"""Exact phase-1 simplex with Bland's rule.

One LP core answers every feasibility question of the library: positive-hull
membership, ``0 in conv S`` and emptiness of polyhedra.
"""
from fractions import Fraction
from typing import Sequence

import structlog

from src.geometry.exceptions import InvariantBreachError

logger = structlog.get_logger(__name__)


class SimplexTableau:
    """Phase-1 tableau for {x >= 0 : Ax = b} with one artificial per row.

    Columns ``0..n-1`` are the original variables, ``n..n+m-1`` the
    artificials. Row ``i`` of ``rows`` holds the constraint coefficients
    followed by the right-hand side. ``cost`` holds the reduced costs of the
    phase-1 objective (sum of artificials) and, last, minus its value.
    """

    def __init__(self, a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
        self.m = len(a)
        self.n = len(a[0]) if a else 0
        width = self.n + self.m
        self.rows: list[list[Fraction]] = []
        for i, (row, rhs) in enumerate(zip(a, b)):
            sign = -1 if rhs < 0 else 1
            line = [sign * Fraction(x) for x in row]
            line += [Fraction(1 if j == i else 0) for j in range(self.m)]
            line.append(sign * Fraction(rhs))
            self.rows.append(line)
        self.basis = list(range(self.n, width))
        self.cost = [Fraction(0)] * (width + 1)
        for line in self.rows:
            for j in range(self.n):
                self.cost[j] -= line[j]
            self.cost[width] -= line[width]

    @property
    def width(self) -> int:
        return self.n + self.m

    def pivot(self, i: int, j: int) -> None:
        piv = self.rows[i][j]
        self.rows[i] = [x / piv for x in self.rows[i]]
        pivot_row = self.rows[i]
        for k in range(self.m):
            if k == i:
                continue
            f = self.rows[k][j]
            if f != 0:
                self.rows[k] = [x - f * y for x, y in zip(self.rows[k], pivot_row)]
        f = self.cost[j]
        if f != 0:
            self.cost = [x - f * y for x, y in zip(self.cost, pivot_row)]
        self.basis[i] = j

    def bland_step(self) -> str:
        """One pivot under Bland's rule: lowest entering index, lowest leaving basic index."""
        entering = next((j for j in range(self.width) if self.cost[j] < 0), None)
        if entering is None:
            return "optimal"
        rhs = self.width
        candidates = [
            (self.rows[i][rhs] / self.rows[i][entering], self.basis[i], i)
            for i in range(self.m)
            if self.rows[i][entering] > 0
        ]
        if not candidates:
            # the phase-1 objective is bounded below by zero
            raise InvariantBreachError("Unbounded phase-1 problem")
        _, _, leaving = min(candidates)
        self.pivot(leaving, entering)
        return "go_on"

    def solve(self) -> None:
        steps = 0
        while self.bland_step() != "optimal":
            steps += 1
        logger.debug("simplex: optimal", pivots=steps, rows=self.m, cols=self.n)

    @property
    def infeasibility(self) -> Fraction:
        return -self.cost[self.width]

    def primal_solution(self) -> list[Fraction]:
        x = [Fraction(0)] * self.n
        for i, var in enumerate(self.basis):
            if var < self.n:
                x[var] = self.rows[i][self.width]
        return x


def find_nonnegative_solution(
    a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> list[Fraction] | None:
    """Return x >= 0 with Ax = b, or None when no such x exists.

    Args:
        a: Constraint matrix as a list of rows (m rows, n columns)
        b: Right-hand side of length m

    Returns:
        An exact basic feasible solution, or None for an infeasible system.
    """
    if not a:
        return []
    n = len(a[0])
    if n == 0:
        return [] if all(x == 0 for x in b) else None
    tableau = SimplexTableau(a, b)
    tableau.solve()
    if tableau.infeasibility != 0:
        return None
    x = tableau.primal_solution()
    for row, rhs in zip(a, b):
        if sum((c * v for c, v in zip(row, x)), Fraction(0)) != rhs:
            raise InvariantBreachError("Simplex solution does not satisfy Ax = b")
    return x
