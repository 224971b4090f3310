"""Exact rational linear algebra.

Everything here runs over ``fractions.Fraction`` (or Python ints, which are
promoted), so results are exact and reproducible bit for bit.  The dense
functions implement the small contract surface (RREF, nullspace, span
membership, span intersection); :class:`IntKernelEchelon` is the incremental
fraction-free accumulator used by the heavier kernel computations, which feeds
the same canonical kernel convention as the dense path.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]


def _as_fraction_rows(matrix: Iterable[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(entry) for entry in row] for row in matrix]


def rref(matrix: Iterable[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with pivots normalized to 1.

    Returns ``(rows, pivot_columns)``; pivot columns are strictly increasing.
    The input is not modified.
    """
    rows = _as_fraction_rows(matrix)
    if not rows:
        return [], []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [entry * inv for entry in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def kernel_basis(matrix: Iterable[Sequence], ncols: int | None = None) -> list[Vector]:
    """Canonical basis of the right nullspace {v : M v = 0}.

    One basis vector per free column, in increasing column order, with the
    free variable set to 1 (the RREF free-variable convention).
    """
    rows = _as_fraction_rows(matrix)
    if ncols is None:
        if not rows:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(rows[0])
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        basis.append(tuple(v))
    return basis


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    """True iff ``v`` lies in the rational span of ``basis``."""
    vec = [Fraction(entry) for entry in v]
    if any(len(b) != len(vec) for b in basis):
        raise ValueError("vector length mismatch")
    if not basis:
        return all(entry == 0 for entry in vec)
    reduced, pivots = rref(basis)
    for i, p in enumerate(pivots):
        if vec[p] != 0:
            factor = vec[p]
            vec = [a - factor * b for a, b in zip(vec, reduced[i])]
    return all(entry == 0 for entry in vec)


def span_basis(vectors: Sequence[Sequence]) -> list[Vector]:
    """Canonical (RREF-row) basis of the span of ``vectors``."""
    if not vectors:
        return []
    reduced, pivots = rref(vectors)
    return [tuple(reduced[i]) for i in range(len(pivots))]


def intersect(b1: Sequence[Sequence], b2: Sequence[Sequence]) -> list[Vector]:
    """Canonical basis of span(b1) ∩ span(b2)."""
    if not b1 or not b2:
        return []
    length = len(b1[0])
    if any(len(v) != length for v in list(b1) + list(b2)):
        raise ValueError("vector length mismatch")
    # Solve sum_i a_i u_i - sum_j c_j w_j = 0; columns are (a, c).
    stacked = [
        [Fraction(u[row]) for u in b1] + [-Fraction(w[row]) for w in b2]
        for row in range(length)
    ]
    members = []
    for coeffs in kernel_basis(stacked, ncols=len(b1) + len(b2)):
        vec = [Fraction(0)] * length
        for a, u in zip(coeffs[: len(b1)], b1):
            if a:
                vec = [entry + a * Fraction(x) for entry, x in zip(vec, u)]
        members.append(vec)
    return span_basis(members) if members else []


def _normalize_int_row(row: dict[int, int]) -> dict[int, int]:
    """Divide through by the gcd and make the lowest-index entry positive."""
    g = 0
    for value in row.values():
        g = gcd(g, value)
    if g == 0:
        return {}
    lead = row[min(row)]
    if lead < 0:
        g = -g
    return {c: v // g for c, v in row.items()}


class IntKernelEchelon:
    """Incremental integer row echelon over columns 0..ncols-1.

    Rows are inserted one at a time as sparse {column: int} maps (or anything
    rational: denominators are cleared first).  Elimination is fraction-free
    cross-multiplication with per-row gcd reduction.  Once the rank reaches
    ``ncols`` the kernel is trivially zero and callers can stop feeding rows.

    ``kernel()`` returns the same canonical nullspace basis as
    :func:`kernel_basis` applied to the inserted rows.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._pivot_rows: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self._pivot_rows)

    @property
    def full_rank(self) -> bool:
        return len(self._pivot_rows) == self.ncols

    def insert(self, row: dict[int, Fraction | int]) -> bool:
        """Reduce ``row`` against the echelon; returns True if the rank grew."""
        denom_lcm = 1
        for value in row.values():
            f = Fraction(value)
            denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
        work = {c: int(Fraction(v) * denom_lcm) for c, v in row.items() if v}
        while work:
            lead = min(work)
            pivot = self._pivot_rows.get(lead)
            if pivot is None:
                self._pivot_rows[lead] = _normalize_int_row(work)
                return True
            a, b = pivot[lead], work[lead]
            merged: dict[int, int] = {}
            for c in set(work) | set(pivot):
                value = a * work.get(c, 0) - b * pivot.get(c, 0)
                if value:
                    merged[c] = value
            work = _normalize_int_row(merged)
        return False

    def _reduced_rows(self) -> list[tuple[int, dict[int, int]]]:
        # Full back-substitution so every pivot column is zero elsewhere.
        order = sorted(self._pivot_rows)
        rows = {p: dict(self._pivot_rows[p]) for p in order}
        for p in reversed(order):
            prow = rows[p]
            for q in order:
                if q >= p:
                    break
                target = rows[q]
                if p in target:
                    a, b = prow[p], target[p]
                    merged = {}
                    for c in set(target) | set(prow):
                        value = a * target.get(c, 0) - b * prow.get(c, 0)
                        if value:
                            merged[c] = value
                    rows[q] = _normalize_int_row(merged)
        return [(p, rows[p]) for p in order]

    def kernel(self) -> list[Vector]:
        """Canonical basis of the joint nullspace of all inserted rows."""
        reduced = self._reduced_rows()
        pivot_set = set(self._pivot_rows)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for p, row in reduced:
                if f in row:
                    v[p] = Fraction(-row[f], row[p])
            basis.append(tuple(v))
        return basis
