"""Exact dense row reduction over an arbitrary field.

Scalars must support +, -, *, /, unary -, == and truthiness (zero is falsy).
Everything here is deterministic: pivots are chosen as the first nonzero
entry in column order, rows are processed in the order given.
"""

from __future__ import annotations


def rref(rows, ncols, one):
    """Reduced row echelon form.

    rows: list of lists of scalars (not mutated).
    Returns (echelon_rows, pivot_cols); echelon rows have leading 1s.
    """
    work = [list(r) for r in rows]
    pivots = []
    basis = []
    for r in work:
        # eliminate against existing basis
        for prow, pcol in zip(basis, pivots):
            c = r[pcol]
            if c:
                for j in range(pcol, ncols):
                    r[j] = r[j] - c * prow[j]
        lead = None
        for j in range(ncols):
            if r[j]:
                lead = j
                break
        if lead is None:
            continue
        inv = one / r[lead]
        r = [x * inv for x in r]
        # back-eliminate new pivot from earlier basis rows
        for brow in basis:
            c = brow[lead]
            if c:
                for j in range(ncols):
                    brow[j] = brow[j] - c * r[j]
        # insert keeping pivot columns sorted
        pos = 0
        while pos < len(pivots) and pivots[pos] < lead:
            pos += 1
        basis.insert(pos, r)
        pivots.insert(pos, lead)
    return basis, pivots


def rank(rows, ncols, one) -> int:
    return len(rref(rows, ncols, one)[0])


def solve_unique(rows, rhs, ncols, field_zero, one):
    """Solve A x = b.  Returns the solution when the system is consistent and
    the solution is unique, None when inconsistent; raises on underdetermined
    consistent systems (callers here never produce them)."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ech, pivots = rref(aug, ncols + 1, one)
    for row, pcol in zip(ech, pivots):
        if pcol == ncols:
            return None  # 0 = 1 row: inconsistent
    if len([p for p in pivots if p < ncols]) < ncols:
        raise ValueError("underdetermined system")
    x = [field_zero] * ncols
    for row, pcol in zip(ech, pivots):
        x[pcol] = row[ncols]
    return x


def kernel_basis(rows, ncols, field_zero, one):
    """Basis of the right kernel {x : A x = 0}, deterministic order."""
    ech, pivots = rref(rows, ncols, one)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    out = []
    for fcol in free:
        vec = [field_zero] * ncols
        vec[fcol] = one
        for row, pcol in zip(ech, pivots):
            vec[pcol] = -row[fcol]
        out.append(vec)
    return out
