"""Exact arithmetic over the discrete valuation ring A = F_q[t] localized at
(t), and the constructive lifting layer built on it: the specialization map
from the generic to the special fiber, the explicit fiber parametrization
over a rational point, flatness certificates for degree-d pieces of ideals
over A, and a search that lifts good special-fiber hypersurface sections to
hypersurfaces over A with certified generic fibers.

Elements are honest rational functions num/den with den(0) != 0, so every
generic-fiber statement is certified by exact linear algebra over F_q(t);
truncated power series could not do that.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .gf import FieldDesc, FieldElem
from .homog import (HomogPoly, ProjPoint, format_poly, monomials,
                    num_monomials, poly_eval)
from .ideal import (GradedPiece, SubschemeSpec, graded_piece,
                    is_empty_projective, vanishing_piece)


# ---------------------------------------------------------------------------
# univariate polynomials over F_q

class PolyT:
    """Dense polynomial in t over a finite field, low coefficients first."""

    __slots__ = ("base", "coeffs")

    def __init__(self, base: FieldDesc, coeffs):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.base = base
        self.coeffs = tuple(coeffs)

    @classmethod
    def const(cls, base, value: FieldElem):
        return cls(base, [value])

    @classmethod
    def from_ints(cls, base, ints):
        return cls(base, [base.elem(v) for v in ints])

    @classmethod
    def t(cls, base):
        return cls(base, [base.zero(), base.one()])

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for zero

    def valuation(self):
        """t-adic order; None for the zero polynomial."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def at_zero(self) -> FieldElem:
        return self.coeffs[0] if self.coeffs else self.base.zero()

    def lead(self) -> FieldElem:
        return self.coeffs[-1]

    def __eq__(self, other):
        return (isinstance(other, PolyT) and self.base == other.base
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(tuple(c.val for c in self.coeffs))

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        z = self.base.zero()
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return PolyT(self.base, out)

    def __neg__(self):
        return PolyT(self.base, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return PolyT(self.base, [])
        z = self.base.zero()
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return PolyT(self.base, out)

    def scale(self, c: FieldElem):
        return PolyT(self.base, [c * a for a in self.coeffs])

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        q = [self.base.zero()] * max(0, len(rem) - len(other.coeffs) + 1)
        dl = other.degree
        inv = other.lead().inverse()
        for i in range(len(rem) - 1, dl - 1, -1):
            c = rem[i]
            if not c:
                continue
            factor = c * inv
            q[i - dl] = factor
            for j, oc in enumerate(other.coeffs):
                rem[i - dl + j] = rem[i - dl + j] - factor * oc
        return PolyT(self.base, q), PolyT(self.base, rem)

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.lead().inverse())

    def shift(self, k: int):
        """Multiply by t^k."""
        return PolyT(self.base, [self.base.zero()] * k + list(self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = repr(c)
            if i == 0:
                terms.append(cs)
            else:
                var = "t" if i == 1 else f"t^{i}"
                terms.append(var if cs == "1" else f"{cs}*{var}")
        return " + ".join(terms)


def poly_gcd(a: PolyT, b: PolyT) -> PolyT:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


# ---------------------------------------------------------------------------
# the rational function field K = F_q(t)

class FqtField:
    """Scalar-field descriptor for F_q(t); interchangeable with FieldDesc in
    the polynomial and linear algebra layers."""

    def __init__(self, base: FieldDesc):
        self.base = base

    def zero(self):
        return RatFunc(self, PolyT(self.base, []), PolyT.const(self.base, self.base.one()))

    def one(self):
        return RatFunc(self, PolyT.const(self.base, self.base.one()),
                       PolyT.const(self.base, self.base.one()))

    def from_int(self, n: int):
        return RatFunc(self, PolyT.const(self.base, self.base.from_int(n)),
                       PolyT.const(self.base, self.base.one()))

    def from_poly(self, p: PolyT):
        return RatFunc(self, p, PolyT.const(self.base, self.base.one()))

    def t(self):
        return self.from_poly(PolyT.t(self.base))

    def __eq__(self, other):
        return isinstance(other, FqtField) and self.base == other.base

    def __hash__(self):
        return hash(("Fqt", self.base.p, self.base.s))

    def __repr__(self):
        return f"{self.base}(t)"


class RatFunc:
    """num/den over F_q[t], gcd-reduced with monic denominator.  Elements of
    the local ring A = F_q[t]_(t) are exactly those with den(0) != 0."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: FqtField, num: PolyT, den: PolyT):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if not g.is_zero() and g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lead_inv = den.lead().inverse()
        if den.lead().val != 1:
            num = num.scale(lead_inv)
            den = den.scale(lead_inv)
        self.field = field
        self.num = num
        self.den = den

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_regular_at_zero(self):
        return bool(self.den.at_zero())

    def valuation(self):
        """t-adic valuation; None for zero."""
        vn = self.num.valuation()
        if vn is None:
            return None
        vd = self.den.valuation() or 0
        return vn - vd

    def at_zero(self) -> FieldElem:
        """Reduction modulo t (requires regularity at 0)."""
        if not self.is_regular_at_zero():
            raise ZeroDivisionError("element has a pole at t = 0")
        return self.num.at_zero() / self.den.at_zero()

    def __eq__(self, other):
        return (isinstance(other, RatFunc) and self.field == other.field
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        return RatFunc(self.field,
                       self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __neg__(self):
        return RatFunc(self.field, -self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RatFunc(self.field, self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.field, self.num * other.den, self.den * other.num)

    def inverse(self):
        return self.field.one() / self

    def __repr__(self):
        if self.den.degree == 0:
            return repr(self.num)
        return f"({self.num})/({self.den})"


def dvr_elem(field: FqtField, num: PolyT, den: PolyT | None = None) -> RatFunc:
    """Element of A = F_q[t]_(t): den(0) must be a unit."""
    if den is None:
        den = PolyT.const(field.base, field.base.one())
    x = RatFunc(field, num, den)
    if not x.is_regular_at_zero():
        raise ValueError("denominator vanishes at t = 0: not in the local ring")
    return x


# ---------------------------------------------------------------------------
# points and specialization

@dataclass(frozen=True)
class DvrPoint:
    """Point of P^n(K) with coordinates in A, not all zero."""
    coords: tuple

    def __post_init__(self):
        if not any(self.coords):
            raise ValueError("projective point needs a nonzero coordinate")
        for c in self.coords:
            if not c.is_regular_at_zero():
                raise ValueError("coordinates must lie in the local ring")

    @property
    def field(self):
        return self.coords[0].field

    def __repr__(self):
        return "[" + " : ".join(repr(c) for c in self.coords) + "]"


def specialize_point(P: DvrPoint) -> ProjPoint:
    """Reduction of the closure of the K-point to the special fiber: divide
    by t^l (l the minimum valuation) and reduce mod t.  Unit rescaling of
    the point does not change the result."""
    vals = [c.valuation() for c in P.coords if not c.is_zero()]
    l = min(vals)
    K = P.field
    if l > 0:
        tl = K.from_poly(PolyT(K.base, [K.base.zero()] * l + [K.base.one()]))
        scaled = [c / tl for c in P.coords]
    else:
        scaled = list(P.coords)
    residues = [c.at_zero() for c in scaled]
    return ProjPoint(K.base, residues)


def constant_lift(K: FqtField, x: ProjPoint) -> DvrPoint:
    """The deterministic lift with constant coordinates."""
    if x.field != K.base:
        raise ValueError("point must be rational over the residue field")
    return DvrPoint(tuple(K.from_poly(PolyT.const(K.base, c))
                          for c in x.coords))


def psi_x(x: ProjPoint, c) -> DvrPoint:
    """Explicit parametrization of the specialization fiber over x: the
    designated unit coordinate (the leading 1 of the normalized x) is kept
    constant and every other coordinate is perturbed by t * c_i.  The map is
    injective in c, and specialize_point inverts it onto x."""
    K = c[0].field if c else None
    base = x.field
    lead = x.lead_index()
    n = len(x.coords) - 1
    if len(c) != n:
        raise ValueError(f"need {n} fiber parameters, got {len(c)}")
    if K is None:
        raise ValueError("empty parameter vector")
    for ci in c:
        if not ci.is_regular_at_zero():
            raise ValueError("fiber parameters must lie in the local ring")
    t = K.from_poly(PolyT.t(base))
    coords = []
    ci_iter = iter(c)
    for i, a in enumerate(x.coords):
        const = K.from_poly(PolyT.const(base, a))
        if i == lead:
            coords.append(const)
        else:
            coords.append(const + t * next(ci_iter))
    return DvrPoint(tuple(coords))


# ---------------------------------------------------------------------------
# hypersurfaces over A

@dataclass(frozen=True)
class DvrHypersurface:
    """Degree-d hypersurface of P^n over A: coefficients in the local ring,
    not all divisible by t."""
    n: int
    d: int
    coeffs: tuple  # RatFunc per monomial, graded-lex order

    def __post_init__(self):
        if len(self.coeffs) != num_monomials(self.n, self.d):
            raise ValueError("coefficient vector has wrong length")
        for c in self.coeffs:
            if not c.is_regular_at_zero():
                raise ValueError("coefficients must lie in the local ring")
        if all(c.is_zero() or c.valuation() >= 1 for c in self.coeffs):
            raise ValueError("all coefficients lie in (t): the special fiber "
                             "would be everything, not a hypersurface")

    @property
    def field(self):
        return self.coeffs[0].field

    def generic_fiber(self) -> HomogPoly:
        return HomogPoly(self.field, self.n, self.d, self.coeffs)

    def special_fiber(self) -> HomogPoly:
        base = self.field.base
        return HomogPoly(base, self.n, self.d,
                         [c.at_zero() for c in self.coeffs])


def fiberwise(H: DvrHypersurface):
    """(generic fiber over F_q(t), special fiber over F_q)."""
    return H.generic_fiber(), H.special_fiber()


def lift_form_constant(K: FqtField, f: HomogPoly) -> HomogPoly:
    """Constant-coefficient lift of a special-fiber form to A."""
    return HomogPoly(K, f.n, f.d,
                     [K.from_poly(PolyT.const(K.base, c)) for c in f.coeffs])


def reduce_form(f: HomogPoly) -> HomogPoly:
    """Reduction mod t of a form with coefficients in A."""
    K = f.field
    return HomogPoly(K.base, f.n, f.d, [c.at_zero() for c in f.coeffs])


# ---------------------------------------------------------------------------
# degree-d pieces of ideals over A

@dataclass
class ModuleBasis:
    """Triangular A-basis of the degree-d piece of an ideal over A, from
    valuation-pivot elimination.  pivot_vals[i] is the t-adic valuation of
    the i-th pivot; unit pivots (all zero) certify m I_d = m S'_d cap I_d."""
    d: int
    rows: list          # lists of RatFunc (length = num monomials)
    pivot_cols: list
    pivot_vals: list

    @property
    def rank(self):
        return len(self.rows)

    def unit_pivots(self):
        return all(v == 0 for v in self.pivot_vals)


def module_piece(gens, K: FqtField, n: int, d: int) -> ModuleBasis:
    """A-module basis of the degree-d piece of the ideal generated by gens
    (forms over A of degree <= d; degree-0 generators are scalars like t).

    Elimination pivots on minimum-valuation entries so that all multipliers
    stay in the local ring; a positive-valuation pivot signals rank drop
    modulo t and is reported, never silently tolerated.
    """
    N = num_monomials(n, d)
    rows = []
    for g in gens:
        if g.is_zero():
            continue
        if g.d > d:
            continue
        for m in monomials(n, d - g.d):
            shifted = HomogPoly.from_terms(K, n, d - g.d, [(m, K.one())])
            rows.append(list((shifted * g).coeffs))
    basis_rows = []
    pivot_cols = []
    pivot_vals = []
    work = [list(r) for r in rows]
    while work:
        # globally minimum-valuation entry (ties: smallest column, first row)
        best = None
        for i, r in enumerate(work):
            for col in range(N):
                c = r[col]
                if c.is_zero():
                    continue
                v = c.valuation()
                if best is None or (v, col, i) < best:
                    best = (v, col, i)
        if best is None:
            break
        v, col, i = best
        prow = work.pop(i)
        pc = prow[col]
        for r in work:
            if not r[col].is_zero():
                factor = r[col] / pc  # valuation >= 0 by pivot minimality
                for j in range(N):
                    r[j] = r[j] - factor * prow[j]
        basis_rows.append(prow)
        pivot_cols.append(col)
        pivot_vals.append(v)
        work = [r for r in work if any(not c.is_zero() for c in r)]
    return ModuleBasis(d, basis_rows, pivot_cols, pivot_vals)


def check_flat_restriction(gens, K: FqtField, n: int, degrees,
                           special: SubschemeSpec | None = None) -> dict:
    """For each degree d: compute the A-basis of I_d, verify that every
    pivot is a unit (equivalently t I_d = t S'_d cap I_d: with a positive
    pivot valuation e the element t^e u lies in t S'_d cap I_d but not in
    t I_d), and verify that the reductions mod t span the degree-d piece of
    the special fiber's ideal.

    The caller certifies that no component of V(gens) is vertical; running
    the vertical control anyway simply fails the unit-pivot check.
    """
    base = K.base
    if special is None:
        reduced = [reduce_form(g) for g in gens]
        reduced = [g for g in reduced if not g.is_zero() and g.d >= 1]
        special = SubschemeSpec(base, n, gens=reduced)
    out = {}
    for d in degrees:
        mb = module_piece(gens, K, n, d)
        red_rows = []
        for row in mb.rows:
            if all(c.is_regular_at_zero() for c in row):
                red = [c.at_zero() for c in row]
                if any(red):
                    red_rows.append(red)
        red_piece = GradedPiece(base, n, d, red_rows)
        spec_piece = vanishing_piece(special, d)
        matches = (mb.unit_pivots()
                   and red_piece.rank == mb.rank == spec_piece.rank)
        out[d] = {
            "module_rank": mb.rank,
            "pivot_valuations": list(mb.pivot_vals),
            "unit_pivots": mb.unit_pivots(),
            "special_rank": spec_piece.rank,
            "reduced_rank": red_piece.rank,
            "ok": bool(matches),
        }
    return out


def module_solve(mb: ModuleBasis, target: HomogPoly):
    """Coefficients in A expressing target in the basis (requires unit
    pivots); None when target is not in the A-span."""
    K = target.field
    vec = list(target.coeffs)
    coeffs = []
    for row, col in zip(mb.rows, mb.pivot_cols):
        c = vec[col] / row[col]
        if not c.is_zero() and not c.is_regular_at_zero():
            return None
        coeffs.append(c)
        for j in range(len(vec)):
            vec[j] = vec[j] - c * row[j]
    if any(not v.is_zero() for v in vec):
        return None
    return coeffs


# ---------------------------------------------------------------------------
# the lifting search

@dataclass
class LiftCertificate:
    special_form: HomogPoly          # over F_q
    hypersurface: DvrHypersurface
    perturbation: list               # PolyT per basis vector
    special_flags: dict
    generic_flags: dict
    notes: dict = dc_field(default_factory=dict)

    def to_json_dict(self):
        return {
            "special_form": format_poly(self.special_form),
            "lift_coefficients": [repr(c.num) + ("" if c.den.degree == 0
                                                 else f" / {c.den!r}")
                                  for c in self.hypersurface.coeffs],
            "perturbation": [repr(p) for p in self.perturbation],
            "special_flags": self.special_flags,
            "generic_flags": self.generic_flags,
            "notes": self.notes,
        }


@dataclass
class LiftProblem:
    """X over A (generators with coefficients in A; empty = P^n), expected
    relative dimension m, optional containment ideal Z over A with its
    special fiber, and the requested predicate battery."""
    K: FqtField
    n: int
    m: int
    x_gens: list = dc_field(default_factory=list)       # HomogPoly over K
    z_gens: list = dc_field(default_factory=list)       # HomogPoly over K
    z_special: SubschemeSpec | None = None
    predicates: tuple = ("special_smooth", "generic_smooth")
    box_degree: int = 2
    lift_budget: int = 200


def _special_problem(lp: LiftProblem):
    from .scheme import SectionProblem
    base = lp.K.base
    xs = [reduce_form(g) for g in lp.x_gens]
    xs = [g for g in xs if not g.is_zero()]
    X = SubschemeSpec(base, lp.n, gens=xs)
    return SectionProblem(X=X, Z=lp.z_special or SubschemeSpec.empty(base, lp.n),
                          T=SubschemeSpec.empty(base, lp.n), m=lp.m)


def _generic_smooth(lp: LiftProblem, f_K: HomogPoly):
    """Exact smoothness certificate for the generic fiber over F_q(t)."""
    from .scheme import smooth_section_ideal
    gens, const_minors = smooth_section_ideal(lp.x_gens, f_K)
    if any(not m.is_zero() for m in const_minors):
        return True
    verdict = is_empty_projective(gens, lp.K, lp.n)
    if verdict.is_empty():
        return True
    return None if verdict.is_inconclusive() else False


def _special_cartier(lp: LiftProblem, f_s: HomogPoly) -> bool:
    """f_s is a nonzerodivisor on X_s: it does not vanish identically on any
    component; for the integral special fibers used here, membership of f_s
    in the degree-d piece of X_s's ideal is the whole test."""
    if f_s.is_zero():
        return False
    base = f_s.field
    xs = [reduce_form(g) for g in lp.x_gens]
    xs = [g for g in xs if not g.is_zero()]
    if not xs:
        return True
    piece = graded_piece(xs, base, lp.n, f_s.d)
    return not piece.contains(f_s)


def enumerate_box(K: FqtField, length: int, box_degree: int, budget: int):
    """Perturbation vectors (PolyT of degree <= box_degree per basis
    element) in lexicographic order, the all-zero vector first."""
    base = K.base
    q = base.q
    per = q ** (box_degree + 1)
    total = per ** length
    count = min(total, budget)
    for index in range(count):
        digits = []
        rest = index
        for _ in range(length):
            rest, dig = divmod(rest, per)
            digits.append(dig)
        digits.reverse()  # first basis coefficient varies slowest
        vec = []
        for dig in digits:
            ints = []
            rr = dig
            for _ in range(box_degree + 1):
                rr, v = divmod(rr, q)
                ints.append(v)
            vec.append(PolyT.from_ints(base, ints))
        yield vec


def lift_search(lp: LiftProblem, d: int, count: int = 5):
    """Constructive lifting: (i) census the special fiber for sections
    passing the special battery, (ii) enumerate lifts of each inside the
    degree-d piece of the ideal over A by t-perturbations of a fixed lift,
    (iii) certify the generic fiber exactly over F_q(t).  Returns the first
    `count` certificates in deterministic order plus stage diagnostics.
    """
    from .homog import enumerate_forms, form_from_index
    from .scheme import is_smooth_section
    base = lp.K.base
    diagnostics = {"special_rejected": 0, "generic_rejected": 0,
                   "inconclusive": 0, "lifts_tried": 0}
    sprob = _special_problem(lp)

    # ideal piece over A in which lifts must stay
    if lp.z_gens:
        mb = module_piece(lp.z_gens, lp.K, lp.n, d)
        if not mb.unit_pivots():
            raise RuntimeError(
                "degree-d piece of the containment ideal drops rank mod t "
                f"(pivot valuations {mb.pivot_vals}); lifting is obstructed")
        basis_K = [HomogPoly(lp.K, lp.n, d, row) for row in mb.rows]
        special_piece = vanishing_piece(
            lp.z_special, d) if lp.z_special else GradedPiece(
                base, lp.n, d, [[c.at_zero() for c in row] for row in mb.rows])
    else:
        mons = monomials(lp.n, d)
        basis_K = [HomogPoly.from_terms(lp.K, lp.n, d, [(m, lp.K.one())])
                   for m in mons]
        special_piece = None

    certificates = []
    size = base.q ** (special_piece.rank if special_piece is not None
                      else num_monomials(lp.n, d))
    sp_basis = (special_piece.basis_polys() if special_piece is not None
                else None)
    for idx in range(size):
        if len(certificates) >= count:
            break
        f_s = (form_from_index(base, lp.n, d, sp_basis, idx)
               if sp_basis is not None
               else form_from_index(
                   base, lp.n, d,
                   [HomogPoly.from_terms(base, lp.n, d, [(m, base.one())])
                    for m in monomials(lp.n, d)], idx))
        if f_s.is_zero():
            continue
        special_flags = {}
        ok = True
        if "special_smooth" in lp.predicates:
            v, _ = is_smooth_section(sprob, f_s, mode="exact")
            special_flags["smooth"] = v
            if v is not True:
                ok = False
        if "flat" in lp.predicates:
            cart = _special_cartier(lp, f_s)
            special_flags["cartier_on_special_fiber"] = cart
            if not cart:
                ok = False
        if not ok:
            diagnostics["special_rejected"] += 1
            continue

        # fixed lift of f_s inside the A-piece
        if lp.z_gens:
            lam = _solve_special(special_piece, mb, f_s, lp.K)
            if lam is None:
                diagnostics["special_rejected"] += 1
                continue
            f0 = _combine(basis_K, [lp.K.from_poly(PolyT.const(base, c))
                                    for c in lam])
        else:
            f0 = lift_form_constant(lp.K, f_s)

        found_for_this = _try_lifts(lp, d, f_s, f0, basis_K, special_flags,
                                    certificates, count, diagnostics)
        if len(certificates) >= count:
            break
    if len(certificates) < count:
        raise RuntimeError(
            f"lift search found only {len(certificates)} of {count} "
            f"requested certificates; diagnostics: {diagnostics}")
    return certificates, diagnostics


def _solve_special(special_piece: GradedPiece, mb: ModuleBasis,
                   f_s: HomogPoly, K: FqtField):
    """F_q-coordinates of f_s over the reductions of the A-basis (the unit
    pivots make the reductions a basis of the special piece)."""
    base = f_s.field
    vec = list(f_s.coeffs)
    lam = []
    for row, col in zip(mb.rows, mb.pivot_cols):
        red = [c.at_zero() for c in row]
        c = vec[col] / red[col]
        lam.append(c)
        for j in range(len(vec)):
            vec[j] = vec[j] - c * red[j]
    if any(vec):
        return None
    return lam


def _combine(basis_K, scalars):
    out = None
    for b, s in zip(basis_K, scalars):
        term = b.scale(s)
        out = term if out is None else out + term
    return out


def _try_lifts(lp, d, f_s, f0, basis_K, special_flags, certificates, count,
               diagnostics):
    base = lp.K.base
    t = lp.K.t()
    for vec in enumerate_box(lp.K, len(basis_K), lp.box_degree,
                             lp.lift_budget):
        if len(certificates) >= count:
            return
        diagnostics["lifts_tried"] += 1
        f_K = f0
        for b, p in zip(basis_K, vec):
            if p.is_zero():
                continue
            f_K = f_K + b.scale(t * lp.K.from_poly(p))
        try:
            H = DvrHypersurface(lp.n, d, tuple(f_K.coeffs))
        except ValueError:
            continue
        if not reduce_form(f_K) == f_s:
            raise AssertionError("lift does not specialize to f_s")
        generic_flags = {}
        notes = {}
        good = True
        if "generic_smooth" in lp.predicates:
            v = _generic_smooth(lp, f_K)
            generic_flags["smooth"] = v
            if v is not True:
                good = False
                diagnostics["generic_rejected" if v is False
                            else "inconclusive"] += 1
        if good and "contains_z" in lp.predicates and lp.z_gens:
            generic_flags["contains_z"] = True  # constructed inside the piece
            notes["contains_z"] = ("lift built from an A-basis of the "
                                   "degree-d piece of the ideal of Z")
        if good and "flat" in lp.predicates:
            generic_flags["flat_over_A"] = True
            notes["flat_over_A"] = (
                "special fiber section is an effective Cartier divisor on "
                "the integral special fiber and X is flat over A")
        if good and generic_flags.get("smooth"):
            generic_flags["reduced"] = True
            notes["reduced"] = "smooth implies reduced"
            if lp.n == 2 and not lp.x_gens:
                generic_flags["integral"] = True
                notes["integral"] = ("a smooth plane curve is connected, "
                                     "hence integral")
        if good:
            certificates.append(LiftCertificate(
                f_s, H, vec, dict(special_flags), generic_flags, notes))
