"""Brute-force oracles that share no code path with the LP engine.

Used by tests and the self-test to cross-check ``lineality_space`` and
``pos_membership`` on small sets.
"""
from fractions import Fraction
from itertools import combinations

from src.geometry.cone import VectorSet
from src.geometry.ratlin import Subspace, Vector, is_zero, kernel_basis, rank, rref, span, transpose

Row = tuple[Fraction, ...]


def _is_positive_circuit(vectors: list[Vector], d: int) -> bool:
    if len(vectors) == 1:
        return is_zero(vectors[0])
    if rank(vectors) != len(vectors) - 1:
        return False
    dependence = kernel_basis(transpose(vectors, d), len(vectors))
    if dependence.dim != 1:
        return False
    g = dependence.basis[0]
    return all(c > 0 for c in g) or all(c < 0 for c in g)


def lineality_by_circuits(vectors: VectorSet) -> Subspace:
    """Span of every circuit of A carrying a strictly positive dependence.

    A generator lies in lpos A iff it lies on such a circuit (conformal
    decomposition of a positive dependence), so this is lpos A.
    """
    d = vectors.ambient_dim
    vs = list(vectors)
    members: set[int] = set()
    for size in range(1, min(len(vs), d + 1) + 1):
        for indices in combinations(range(len(vs)), size):
            if members.issuperset(indices):
                continue
            if _is_positive_circuit([vs[i] for i in indices], d):
                members.update(indices)
    return span((vs[i] for i in sorted(members)), d)


def _normalized(row: Row) -> Row:
    lead = next((abs(c) for c in row[:-1] if c != 0), None)
    if lead is None:
        return row
    return tuple(c / lead for c in row)


def _eliminate(rows: set[Row], j: int) -> set[Row]:
    upper = [r for r in rows if r[j] > 0]
    lower = [r for r in rows if r[j] < 0]
    result = {r for r in rows if r[j] == 0}
    for p in upper:
        for n in lower:
            combined = tuple(-n[j] * a + p[j] * b for a, b in zip(p, n))
            result.add(_normalized(combined))
    return result


def pos_membership_by_elimination(vectors: VectorSet, v: Vector) -> bool:
    """Decide v in pos A by Fourier-Motzkin elimination.

    The equations A lambda = v fix the pivot variables in terms of the free
    ones; the inequalities lambda >= 0 are then projected onto nothing. Each
    row (q, c) stands for <q, t> + c >= 0 over the free variables t.
    """
    d = vectors.ambient_dim
    n = len(vectors)
    if n == 0:
        return is_zero(v)
    augmented = [tuple(a[j] for a in vectors) + (v[j],) for j in range(d)]
    reduced, pivots = rref(augmented, n + 1)
    if n in pivots:
        return False
    free = [f for f in range(n) if f not in pivots]
    rows: set[Row] = set()
    for f_index, f in enumerate(free):
        rows.add(tuple(Fraction(1 if g == f_index else 0) for g in range(len(free))) + (Fraction(0),))
    for row, p in zip(reduced, pivots):
        rows.add(_normalized(tuple(-row[f] for f in free) + (row[n],)))
    for j in range(len(free)):
        rows = _eliminate(rows, j)
    return all(r[-1] >= 0 for r in rows)


def lineality_by_elimination(vectors: VectorSet) -> Subspace:
    """Span of the generators whose negatives lie in pos A, decided by elimination."""
    inside = [a for a in vectors if pos_membership_by_elimination(vectors, tuple(-c for c in a))]
    return span(inside, vectors.ambient_dim)
