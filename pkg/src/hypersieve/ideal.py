"""Graded pieces of homogeneous ideals and the certificates built on them:
degree-d vanishing spaces, stabilization degree, a Macaulay-bound projective
emptiness test, Hilbert-function dimension estimates, and restriction of
forms to finite point sets.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import comb

from . import linalg
from .gf import FieldDesc, FieldElem, embed_into, extension_of, relative_coordinates
from .homog import (HomogPoly, ProjPoint, embed_poly, monomials, num_monomials,
                    poly_eval)


def point_enum_cap() -> int:
    """Cap on (q^r)^(n+1) for point enumeration; env HYPERSIEVE_POINT_CAP."""
    return int(os.environ.get("HYPERSIEVE_POINT_CAP", 2 ** 26))


def projective_points(F: FieldDesc, n: int):
    """All normalized points of P^n(F), leading coordinate 1, deterministic."""
    if F.q ** (n + 1) > point_enum_cap():
        raise RuntimeError(
            f"point enumeration q^(n+1) = {F.q ** (n + 1)} exceeds cap "
            "(set HYPERSIEVE_POINT_CAP to raise)")
    one = F.one()
    zero = F.zero()
    for lead in range(n + 1):
        tail = n - lead
        for v in range(F.q ** tail):
            coords = [zero] * lead + [one]
            rest = v
            for _ in range(tail):
                rest, digit = divmod(rest, F.q)
                coords.append(F.elem(digit))
            yield ProjPoint(F, coords)


def frobenius_point(P: ProjPoint, q: int) -> ProjPoint:
    """Coordinatewise x -> x^q (the arithmetic Frobenius over F_q)."""
    return ProjPoint(P.field, [c ** q for c in P.coords])


def closed_point_degree(P: ProjPoint, base_q: int) -> int:
    """Size of the Frobenius orbit of P over F_{base_q}."""
    Q = frobenius_point(P, base_q)
    r = 1
    while Q != P:
        Q = frobenius_point(Q, base_q)
        r += 1
    return r


class SubschemeSpec:
    """Closed subscheme of P^n: homogeneous generators, or a reduced finite
    set of closed points given by one representative each (possibly over an
    extension field)."""

    def __init__(self, field: FieldDesc, n: int, gens=None, points=None):
        self.field = field
        self.n = n
        self.gens = [g for g in (gens or []) if not g.is_zero()]
        for g in self.gens:
            if g.field != field or g.n != n or g.d < 1:
                raise ValueError("generators must be forms of degree >= 1 "
                                 "over the ambient field")
        self.points = list(points) if points is not None else None
        if self.points is not None:
            for P in self.points:
                if P.field.p != field.p or P.field.s % field.s != 0:
                    raise ValueError("point field is not an extension of the base")

    @classmethod
    def empty(cls, field, n):
        return cls(field, n, points=[])

    @classmethod
    def whole_space(cls, field, n):
        return cls(field, n, gens=[])

    def is_point_set(self):
        return self.points is not None

    def is_empty_scheme(self):
        return self.points is not None and len(self.points) == 0

    def point_degrees(self):
        return [closed_point_degree(P, self.field.q) for P in self.points]

    def __repr__(self):
        if self.points is not None:
            return f"SubschemeSpec(points={self.points!r})"
        return f"SubschemeSpec(gens={self.gens!r})"


class GradedPiece:
    """Echelonized basis of a subspace of S_d (row-reduced, pivot columns
    deterministic)."""

    def __init__(self, field, n, d, rows):
        self.field = field
        self.n = n
        self.d = d
        ncols = num_monomials(n, d)
        ech, pivots = linalg.rref(rows, ncols, field.one())
        self.rows = ech
        self.pivots = pivots

    @property
    def rank(self):
        return len(self.rows)

    def ambient_dim(self):
        return num_monomials(self.n, self.d)

    def basis_polys(self):
        return [HomogPoly(self.field, self.n, self.d, r) for r in self.rows]

    def reduce(self, f: HomogPoly):
        """Remainder of f modulo this subspace (zero iff f is a member)."""
        vec = list(f.coeffs)
        for row, pcol in zip(self.rows, self.pivots):
            c = vec[pcol]
            if c:
                for j in range(pcol, len(vec)):
                    vec[j] = vec[j] - c * row[j]
        return HomogPoly(self.field, self.n, self.d, vec)

    def contains(self, f: HomogPoly) -> bool:
        return self.reduce(f).is_zero()

    def member_count(self) -> int:
        return self.field.q ** self.rank


def full_piece(field, n, d) -> GradedPiece:
    one = field.one()
    zero = field.zero()
    N = num_monomials(n, d)
    rows = [[one if j == i else zero for j in range(N)] for i in range(N)]
    return GradedPiece(field, n, d, rows)


def graded_piece(gens, field, n, d) -> GradedPiece:
    """Degree-d piece of the ideal generated by gens: span of m*g over
    monomials m of degree d - deg g."""
    rows = []
    for g in gens:
        if g.d > d:
            continue
        for m in monomials(n, d - g.d):
            shifted = HomogPoly.from_terms(field, n, d - g.d,
                                           [(m, field.one())])
            rows.append(list((shifted * g).coeffs))
    return GradedPiece(field, n, d, rows)


def evaluation_rows(field, n, d, points):
    """F_q-linear conditions 'f vanishes at each listed closed point'.

    One representative point over F_{q^r} yields r rows (coordinates of the
    monomial values over the F_q-power basis), which cut out vanishing at the
    whole Frobenius orbit.
    """
    rows = []
    mons = monomials(n, d)
    for P in points:
        big = P.field
        one = big.one()
        pows = []
        for c in P.coords:
            col = [one]
            for _ in range(d):
                col.append(col[-1] * c)
            pows.append(col)
        vals = []
        for exps in mons:
            v = one
            for i, e in enumerate(exps):
                if e:
                    v = v * pows[i][e]
            vals.append(v)
        coords = [relative_coordinates(v, field) for v in vals]
        r = len(coords[0])
        for j in range(r):
            rows.append([coords[m][j] for m in range(len(mons))])
    return rows


def vanishing_piece(Z: SubschemeSpec, d: int) -> GradedPiece:
    """Degree-d forms vanishing on Z.

    Point-set Z: exact (kernel of the evaluation map S_d -> sum of residue
    fields).  Ideal form: the degree-d piece of the generated ideal, which
    matches the saturated space from the stabilization degree onward; callers
    gate censuses on stabilization_degree for that reason.
    """
    field, n = Z.field, Z.n
    if Z.is_point_set():
        if not Z.points:
            return full_piece(field, n, d)
        rows = evaluation_rows(field, n, d, Z.points)
        z = field.zero()
        kern = linalg.kernel_basis(rows, num_monomials(n, d), z, field.one())
        return GradedPiece(field, n, d, kern)
    return graded_piece(Z.gens, field, n, d)


def multiply_by_linear(piece: GradedPiece) -> GradedPiece:
    """Span of S_1 * piece inside degree d+1."""
    field, n, d = piece.field, piece.n, piece.d
    rows = []
    for b in piece.basis_polys():
        for m in monomials(n, 1):
            x = HomogPoly.from_terms(field, n, 1, [(m, field.one())])
            rows.append(list((x * b).coeffs))
    return GradedPiece(field, n, d + 1, rows)


def stabilization_degree(Z: SubschemeSpec, d_max: int = 8):
    """Least c with S_1 * I^Z_d = I^Z_{d+1} for all tested d in [c, d_max];
    None when even d_max itself fails."""
    pieces = [vanishing_piece(Z, d) for d in range(d_max + 2)]
    ok = [multiply_by_linear(pieces[d]).rank == pieces[d + 1].rank
          for d in range(d_max + 1)]
    c = d_max + 1
    while c > 0 and ok[c - 1]:
        c -= 1
    return None if c == d_max + 1 else c


@dataclass
class EmptinessVerdict:
    status: str                 # "empty" | "nonempty" | "inconclusive"
    witness: ProjPoint | None
    macaulay_degree: int
    hilbert_value: int

    def is_empty(self):
        return self.status == "empty"

    def is_nonempty(self):
        return self.status == "nonempty"

    def is_inconclusive(self):
        return self.status == "inconclusive"


def macaulay_degree(degs, n: int) -> int:
    """sum (d_i - 1) + 1 over the min(r, n+1) largest generator degrees: if
    the locus is empty, the ideal fills this degree entirely (the classical
    effective graded Nullstellensatz bound)."""
    degs = sorted(degs, reverse=True)[:n + 1]
    return sum(e - 1 for e in degs) + 1


def is_empty_projective(gens, field, n,
                        r_cap: int | None = None) -> EmptinessVerdict:
    """Certified projective emptiness of V(gens).

    HF(D*) = 0 certifies empty.  Otherwise a witness point is searched over
    F_{q^r} for r = 1..r_cap; no witness yields "inconclusive" (never a
    guess).  Over non-enumerable coefficient fields only the certificate
    route is available.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        one = field.one()
        zero = field.zero()
        w = ProjPoint(field, [one] + [zero] * n) if isinstance(field, FieldDesc) else None
        return EmptinessVerdict("nonempty", w, 0, num_monomials(n, 0))
    dstar = macaulay_degree([g.d for g in gens], n)
    piece = graded_piece(gens, field, n, dstar)
    hf = num_monomials(n, dstar) - piece.rank
    if hf == 0:
        return EmptinessVerdict("empty", None, dstar, 0)
    if not isinstance(field, FieldDesc):
        return EmptinessVerdict("inconclusive", None, dstar, hf)
    if r_cap is None:
        r_cap = max(4, sum(g.d for g in gens))  # desk-scale heuristic
    for r in range(1, r_cap + 1):
        big = extension_of(field, r)
        if big.q ** (n + 1) > point_enum_cap():
            break
        embedded = [embed_poly(g, big) for g in gens]
        for P in projective_points(big, n):
            if all(not poly_eval(g, P) for g in embedded):
                return EmptinessVerdict("nonempty", P, dstar, hf)
    return EmptinessVerdict("inconclusive", None, dstar, hf)


def hilbert_function(gens, field, n, d) -> int:
    return num_monomials(n, d) - graded_piece(gens, field, n, d).rank


def hilbert_dim(gens, field, n, window=None):
    """Projective dimension of V(gens) from the polynomial growth of the
    Hilbert function on a degree window (-1 for empty, None inconclusive)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return n
    if window is None:
        start = max(g.d for g in gens) + 1
        window = range(start, start + 6)
    vals = [hilbert_function(gens, field, n, d) for d in window]
    if all(v == 0 for v in vals):
        return -1
    # successive differences; dimension = degree of the eventual polynomial
    row = vals
    k = 0
    while len(row) >= 2:
        nxt = [b - a for a, b in zip(row, row[1:])]
        if all(v == 0 for v in nxt):
            return k
        row = nxt
        k += 1
    return None


def restrict_to_finite(f: HomogPoly, Y: SubschemeSpec):
    """Values of x_j^{-d} f at the stored representative of each closed point
    of Y (j = the representative's leading-coordinate index; representatives
    are normalized so this is plain evaluation)."""
    if not Y.is_point_set():
        raise ValueError("restriction needs a finite point-set subscheme")
    return tuple(poly_eval(f, P) for P in Y.points)


def sum_rank(a: GradedPiece, b: GradedPiece) -> int:
    """Rank of a + b (for dimension counting of intersections)."""
    rows = [list(r) for r in a.rows] + [list(r) for r in b.rows]
    return GradedPiece(a.field, a.n, a.d, rows).rank


def intersection_rank(a: GradedPiece, b: GradedPiece) -> int:
    return a.rank + b.rank - sum_rank(a, b)
