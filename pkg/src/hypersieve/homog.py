"""Dense homogeneous polynomial algebra over an exact field.

Monomials of degree d in n+1 variables are ordered graded-lex (exponent
vectors lexicographically decreasing, so x0^d is rank 0) and polynomials are
dense coefficient vectors of length C(d+n, n) in that order.  The scalar
field only needs exact arithmetic, so the same code runs over F_q and over
rational function fields.
"""

from __future__ import annotations

import os
from functools import lru_cache
from math import comb

from . import linalg
from .gf import FieldDesc, FieldElem, embed_into, extension_of


def census_cap() -> int:
    """Longest allowed enumeration stream; override with HYPERSIEVE_CENSUS_CAP."""
    return int(os.environ.get("HYPERSIEVE_CENSUS_CAP", 2 ** 28))


class CapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# monomial indexing

@lru_cache(maxsize=None)
def monomials(n: int, d: int):
    """Exponent tuples of degree d in n+1 variables, lex decreasing."""
    if n == 0:
        return ((d,),)
    out = []
    for e0 in range(d, -1, -1):
        for rest in monomials(n - 1, d - e0):
            out.append((e0,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_index(n: int, d: int):
    return {m: i for i, m in enumerate(monomials(n, d))}


def num_monomials(n: int, d: int) -> int:
    return comb(d + n, n)


def monomial_rank(exps, n: int, d: int) -> int:
    if sum(exps) != d:
        raise ValueError(f"exponents {exps} do not sum to degree {d}")
    return _monomial_index(n, d)[tuple(exps)]


def monomial_unrank(i: int, n: int, d: int):
    return monomials(n, d)[i]


# ---------------------------------------------------------------------------

class HomogPoly:
    """Homogeneous polynomial of degree d in n+1 variables (immutable)."""

    __slots__ = ("field", "n", "d", "coeffs")

    def __init__(self, field, n: int, d: int, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != num_monomials(n, d):
            raise ValueError("coefficient vector has wrong length")
        self.field = field
        self.n = n
        self.d = d
        self.coeffs = coeffs

    @classmethod
    def zero(cls, field, n, d):
        z = field.zero()
        return cls(field, n, d, [z] * num_monomials(n, d))

    @classmethod
    def from_terms(cls, field, n, d, terms):
        """terms: iterable of (exponent tuple, scalar)."""
        z = field.zero()
        co = [z] * num_monomials(n, d)
        for exps, c in terms:
            co[monomial_rank(exps, n, d)] = co[monomial_rank(exps, n, d)] + c
        return cls(field, n, d, co)

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        return (isinstance(other, HomogPoly) and self.field == other.field
                and self.n == other.n and self.d == other.d
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.n, self.d, self.coeffs))

    def __add__(self, other):
        self._compat(other)
        return HomogPoly(self.field, self.n, self.d,
                         [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._compat(other)
        return HomogPoly(self.field, self.n, self.d,
                         [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c):
        return HomogPoly(self.field, self.n, self.d,
                         [c * a for a in self.coeffs])

    def _compat(self, other):
        if self.n != other.n or self.d != other.d or self.field != other.field:
            raise ValueError("incompatible polynomials")

    def __mul__(self, other):
        if self.n != other.n or self.field != other.field:
            raise ValueError("incompatible polynomials")
        n, d1, d2 = self.n, self.d, other.d
        prod_rank = _product_ranks(n, d1, d2)
        z = self.field.zero()
        out = [z] * num_monomials(n, d1 + d2)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            row = prod_rank[i]
            for j, b in enumerate(other.coeffs):
                if b:
                    k = row[j]
                    out[k] = out[k] + a * b
        return HomogPoly(self.field, n, d1 + d2, out)

    def __repr__(self):
        return format_poly(self)


@lru_cache(maxsize=None)
def _product_ranks(n, d1, d2):
    idx = _monomial_index(n, d1 + d2)
    m2 = monomials(n, d2)
    table = []
    for e1 in monomials(n, d1):
        table.append(tuple(idx[tuple(x + y for x, y in zip(e1, e2))]
                           for e2 in m2))
    return table


class ProjPoint:
    """Point of P^n with coordinates normalized so the first nonzero one is 1."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        coords = list(coords)
        if not any(coords):
            raise ValueError("projective point needs a nonzero coordinate")
        lead = next(i for i, c in enumerate(coords) if c)
        inv = field.one() / coords[lead]
        self.field = field
        self.coords = tuple(inv * c for c in coords)

    @property
    def n(self):
        return len(self.coords) - 1

    def lead_index(self):
        return next(i for i, c in enumerate(self.coords) if c)

    def __eq__(self, other):
        return (isinstance(other, ProjPoint) and self.field == other.field
                and self.coords == other.coords)

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "[" + ":".join(repr(c) for c in self.coords) + "]"


def point_from_ints(field: FieldDesc, vals) -> ProjPoint:
    return ProjPoint(field, [field.elem(v) for v in vals])


# ---------------------------------------------------------------------------
# evaluation and calculus

def embed_poly(f: HomogPoly, F: FieldDesc) -> HomogPoly:
    """Coefficientwise embedding into a compatible extension field."""
    if f.field == F:
        return f
    return HomogPoly(F, f.n, f.d, [embed_into(c, F) for c in f.coeffs])


def poly_eval(f: HomogPoly, P: ProjPoint):
    """f(P) with f's coefficients embedded into P's field first.

    Points are normalized, so vanishing is representative-independent and
    the value agrees with the chart-normalized restriction of f.
    """
    F = P.field
    if isinstance(f.field, FieldDesc) and f.field != F:
        f = embed_poly(f, F)
    pows = []
    one = F.one()
    for c in P.coords:
        row = [one]
        for _ in range(f.d):
            row.append(row[-1] * c)
        pows.append(row)
    acc = F.zero()
    for exps, c in zip(monomials(f.n, f.d), f.coeffs):
        if not c:
            continue
        term = c
        for i, e in enumerate(exps):
            if e:
                term = term * pows[i][e]
        acc = acc + term
    return acc


def poly_diff(f: HomogPoly, i: int) -> HomogPoly:
    """Formal partial derivative; exponents act as scalars mod p."""
    if f.d == 0:
        raise ValueError("derivative would have negative degree")
    n, d = f.n, f.d
    z = f.field.zero()
    out = [z] * num_monomials(n, d - 1)
    idx = _monomial_index(n, d - 1)
    for exps, c in zip(monomials(n, d), f.coeffs):
        e = exps[i]
        if e == 0 or not c:
            continue
        scalar = f.field.from_int(e)
        if not scalar:
            continue
        tgt = list(exps)
        tgt[i] -= 1
        k = idx[tuple(tgt)]
        out[k] = out[k] + scalar * c
    return HomogPoly(f.field, n, d - 1, out)


def jacobian(f: HomogPoly):
    return [poly_diff(f, i) for i in range(f.n + 1)]


def poly_divides(g: HomogPoly, f: HomogPoly):
    """Quotient q with f = g*q, or None.  Decided by solving the linear
    system in the unknown coefficients of q (no reduction machinery)."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero form")
    if f.n != g.n or f.field != g.field:
        raise ValueError("incompatible polynomials")
    e, d = g.d, f.d
    if e > d or e < 1:
        raise ValueError("divisor degree must satisfy 1 <= e <= deg f")
    if f.is_zero():
        return HomogPoly.zero(f.field, f.n, d - e)
    n = f.n
    ncols = num_monomials(n, d - e)
    prod_rank = _product_ranks(n, e, d - e)
    z = f.field.zero()
    # rows indexed by degree-d monomials: sum_j g_i q_j [m_i*m_j = m_k]
    rows = [[z] * ncols for _ in range(num_monomials(n, d))]
    for i, gc in enumerate(g.coeffs):
        if not gc:
            continue
        row = prod_rank[i]
        for j in range(ncols):
            k = row[j]
            rows[k][j] = rows[k][j] + gc
    sol = linalg.solve_unique(rows, list(f.coeffs), ncols, z, f.field.one())
    if sol is None:
        return None
    return HomogPoly(f.field, n, d - e, sol)


# ---------------------------------------------------------------------------
# enumeration

def enumerate_forms(field: FieldDesc, n: int, d: int, basis=None,
                    start: int = 0, stop: int | None = None):
    """All forms in the span of `basis` (default: full S_d), each exactly
    once, in coefficient-vector lexicographic order over the basis.

    start/stop select an index window, which is how a census stream is
    partitioned by coefficient prefix for parallel evaluation.
    """
    if basis is None:
        basis = [HomogPoly.from_terms(field, n, d, [(m, field.one())])
                 for m in monomials(n, d)]
    q = field.q
    total = q ** len(basis)
    if total > census_cap():
        raise CapExceeded(
            f"census of size {total} exceeds cap {census_cap()}; "
            "lower d or q, or set HYPERSIEVE_CENSUS_CAP")
    if stop is None:
        stop = total
    for index in range(start, stop):
        yield form_from_index(field, n, d, basis, index)


def form_from_index(field, n, d, basis, index):
    """index written base q, most significant digit = first basis vector."""
    q = field.q
    f = HomogPoly.zero(field, n, d)
    for b in reversed(basis):
        index, digit = divmod(index, q)
        if digit:
            f = f + b.scale(field.elem(digit))
    return f


# ---------------------------------------------------------------------------
# text format: terms joined by " + ", each "c*x0^a0*x1^a1*..."; unit
# coefficients and ^1 may be omitted; extension-field scalars print as g^k
# (powers of the field generator).

def _format_scalar(c: FieldElem) -> str:
    own = c.owner
    if own.s == 1:
        return str(c.val)
    k = own._log[c.val]
    if k == 0:
        return "1"
    if k == 1:
        return "g"
    return f"g^{k}"


def format_poly(f: HomogPoly) -> str:
    terms = []
    for exps, c in zip(monomials(f.n, f.d), f.coeffs):
        if not c:
            continue
        parts = []
        cs = _format_scalar(c) if isinstance(c, FieldElem) else repr(c)
        vars_ = []
        for i, e in enumerate(exps):
            if e == 1:
                vars_.append(f"x{i}")
            elif e > 1:
                vars_.append(f"x{i}^{e}")
        if not vars_:
            parts.append(cs)
        else:
            if cs != "1":
                parts.append(cs)
            parts.extend(vars_)
        terms.append("*".join(parts))
    return " + ".join(terms) if terms else "0"


def parse_poly(text: str, field: FieldDesc, n: int, d: int | None = None) -> HomogPoly:
    """Inverse of format_poly.  Degree is inferred unless given."""
    text = text.strip()
    terms = []
    if text and text != "0":
        for chunk in text.split("+"):
            chunk = chunk.strip()
            exps = [0] * (n + 1)
            coeff = None
            for factor in chunk.split("*"):
                factor = factor.strip()
                if factor.startswith("x"):
                    var, _, e = factor.partition("^")
                    i = int(var[1:])
                    if i > n:
                        raise ValueError(f"variable {var} out of range for n={n}")
                    exps[i] += int(e) if e else 1
                elif factor == "g" or factor.startswith("g^"):
                    _, _, k = factor.partition("^")
                    c = field.generator() ** (int(k) if k else 1)
                    coeff = c if coeff is None else coeff * c
                else:
                    c = field.from_int(int(factor))
                    coeff = c if coeff is None else coeff * c
            if coeff is None:
                coeff = field.one()
            terms.append((tuple(exps), coeff))
    if d is None:
        if not terms:
            raise ValueError("cannot infer degree of the zero polynomial")
        d = sum(terms[0][0])
    for exps, _ in terms:
        if sum(exps) != d:
            raise ValueError("text is not homogeneous of a single degree")
    return HomogPoly.from_terms(field, n, d, terms)
