"""Exact arithmetic in small finite fields F_p and extension towers F_{p^s}.

Elements of F_{p^s} are residues of F_p[x] modulo a fixed monic irreducible,
packed into a single integer whose base-p digits are the polynomial
coefficients (constant digit least significant).  All choices (modulus,
primitive element, embedding roots) are deterministic so that repeated runs
are bit-for-bit reproducible.
"""

from __future__ import annotations

import os


def field_order_cap() -> int:
    """Largest allowed field order; override with HYPERSIEVE_FIELD_CAP."""
    return int(os.environ.get("HYPERSIEVE_FIELD_CAP", 2 ** 20))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (coefficient tuples, low degree first)

def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _poly_mod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(dm):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    while len(a) > dm:
        a.pop()
    while len(a) < dm:
        a.append(0)
    return a


def _val_to_digits(v, p, s):
    out = []
    for _ in range(s):
        v, r = divmod(v, p)
        out.append(r)
    return out


def _digits_to_val(digits, p):
    v = 0
    for d in reversed(digits):
        v = v * p + d
    return v


def _least_irreducible(p, s):
    """Monic irreducible of degree s over F_p whose non-leading coefficients,
    read as a little-endian base-p integer, are smallest.  Irreducibility by
    trial division against all monic polynomials of lower degree."""
    if s == 1:
        return (0, 1)  # x itself; never used for reduction
    lower = []
    for e in range(1, s // 2 + 1):
        for v in range(p ** e):
            lower.append(_val_to_digits(v, p, e) + [1])
    for v in range(p ** s):
        cand = _val_to_digits(v, p, s) + [1]
        if cand[0] == 0:
            continue  # divisible by x
        ok = True
        for g in lower:
            if not any(_poly_mod(cand, g, p)):
                ok = False
                break
        if ok:
            return tuple(cand)
    raise ArithmeticError(f"no irreducible of degree {s} over F_{p}")


class FieldError(ValueError):
    pass


class FieldDesc:
    """Description of F_{p^s}: immutable after construction, shareable.

    Use make_field() rather than constructing directly.
    """

    def __init__(self, p: int, s: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if s < 1:
            raise FieldError("extension degree must be >= 1")
        q = p ** s
        if q > field_order_cap():
            raise FieldError(
                f"field order {q} exceeds cap {field_order_cap()} "
                "(set HYPERSIEVE_FIELD_CAP to raise)")
        self.p = p
        self.s = s
        self.q = q
        self.modulus = _least_irreducible(p, s)
        self._log = None
        self._exp = None
        if s > 1:
            self._build_tables()
        # target FieldDesc -> image of our generator there (embedding data)
        self._gen_images = {}

    # -- raw arithmetic on packed values -----------------------------------

    def _raw_mul(self, a, b):
        if self.s == 1:
            return (a * b) % self.p
        da = _val_to_digits(a, self.p, self.s)
        db = _val_to_digits(b, self.p, self.s)
        return _digits_to_val(_poly_mod(_poly_mul(da, db, self.p),
                                        self.modulus, self.p), self.p)

    def _build_tables(self):
        # discrete-log tables from the least primitive element
        q = self.q
        for g in range(2, q):
            seen = 1
            acc = g
            order = 1
            while acc != 1:
                acc = self._raw_mul(acc, g)
                order += 1
                if order > q:
                    raise ArithmeticError("order computation ran away")
            if order == q - 1:
                exp = [0] * (2 * (q - 1))
                log = [0] * q
                acc = 1
                for i in range(q - 1):
                    exp[i] = acc
                    exp[i + q - 1] = acc
                    log[acc] = i
                    acc = self._raw_mul(acc, g)
                self._exp = exp
                self._log = log
                self.generator_val = g
                return
        raise ArithmeticError("no primitive element found")

    def add_val(self, a, b):
        if self.s == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da = _val_to_digits(a, self.p, self.s)
        db = _val_to_digits(b, self.p, self.s)
        return _digits_to_val([(x + y) % self.p for x, y in zip(da, db)], self.p)

    def neg_val(self, a):
        if self.s == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        da = _val_to_digits(a, self.p, self.s)
        return _digits_to_val([(-x) % self.p for x in da], self.p)

    def mul_val(self, a, b):
        if self.s == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv_val(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if self.s == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1) - self._log[a]]

    def pow_val(self, a, e):
        if e < 0:
            return self.pow_val(self.inv_val(a), -e)
        if a == 0:
            return 0 if e else 1
        if self.s == 1:
            return pow(a, e, self.p)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    # -- element construction ----------------------------------------------

    def zero(self):
        return FieldElem(self, 0)

    def one(self):
        return FieldElem(self, 1)

    def elem(self, v: int) -> "FieldElem":
        """Element from packed value (base-p digits = polynomial coeffs)."""
        return FieldElem(self, v % self.q)

    def from_int(self, n: int) -> "FieldElem":
        """Image of the integer n (i.e. n * 1) in this field."""
        return FieldElem(self, n % self.p)

    def generator(self) -> "FieldElem":
        """Class of x modulo the defining polynomial (s >= 2)."""
        if self.s == 1:
            raise FieldError("prime field has no extension generator")
        return FieldElem(self, self.p)  # the polynomial 'x'

    def elements(self):
        """All q elements in packed-value (coefficient-lexicographic) order."""
        for v in range(self.q):
            yield FieldElem(self, v)

    def __eq__(self, other):
        return (isinstance(other, FieldDesc)
                and self.p == other.p and self.s == other.s)

    def __hash__(self):
        return hash((self.p, self.s))

    def __repr__(self):
        return f"F_{self.q}" if self.s > 1 else f"F_{self.p}"


class FieldElem:
    """Element of a FieldDesc; plain immutable value data."""

    __slots__ = ("owner", "val")

    def __init__(self, owner: FieldDesc, val: int):
        self.owner = owner
        self.val = val

    def _check(self, other):
        if not isinstance(other, FieldElem):
            raise TypeError(f"expected FieldElem, got {type(other).__name__}")
        if other.owner != self.owner:
            raise FieldError(f"element of {other.owner} used in {self.owner}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElem(self.owner, self.owner.add_val(self.val, other.val))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElem(self.owner,
                         self.owner.add_val(self.val,
                                            self.owner.neg_val(other.val)))

    def __neg__(self):
        return FieldElem(self.owner, self.owner.neg_val(self.val))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElem(self.owner, self.owner.mul_val(self.val, other.val))

    def __truediv__(self, other):
        other = self._check(other)
        return FieldElem(self.owner,
                         self.owner.mul_val(self.val,
                                            self.owner.inv_val(other.val)))

    def inverse(self):
        return FieldElem(self.owner, self.owner.inv_val(self.val))

    def __pow__(self, e: int):
        return FieldElem(self.owner, self.owner.pow_val(self.val, e))

    def frobenius(self):
        """x -> x^p, the absolute Frobenius."""
        return self ** self.owner.p

    def is_zero(self):
        return self.val == 0

    def __bool__(self):
        return self.val != 0

    def __eq__(self, other):
        return (isinstance(other, FieldElem) and self.owner == other.owner
                and self.val == other.val)

    def __hash__(self):
        return hash((self.owner.p, self.owner.s, self.val))

    def __repr__(self):
        own = self.owner
        if own.s == 1:
            return str(self.val)
        digits = _val_to_digits(self.val, own.p, own.s)
        terms = []
        for i, c in enumerate(digits):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c) + "*"
                terms.append(f"{head}g" if i == 1 else f"{head}g^{i}")
        return "+".join(terms) if terms else "0"


_FIELD_CACHE: dict[tuple[int, int], FieldDesc] = {}


def make_field(p: int, s: int = 1) -> FieldDesc:
    """F_{p^s} with the deterministic least irreducible modulus (cached)."""
    key = (p, s)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FieldDesc(p, s)
    return _FIELD_CACHE[key]


def extension_of(F: FieldDesc, r: int) -> FieldDesc:
    """The tower F_{q^r}, constructed over the prime field directly."""
    return make_field(F.p, F.s * r)


def _embedding_root(src: FieldDesc, tgt: FieldDesc) -> int:
    """Packed value of the image of src's generator inside tgt.

    Prime-field embeddings are canonical.  Otherwise the image is the least
    root of src's modulus in tgt, except that a previously recorded chain
    src -> M -> tgt forces the composite value (keeping towers coherent);
    conflicting recorded chains raise FieldError.
    """
    if src.s == 1:
        raise FieldError("prime field needs no embedding root")
    if tgt.s % src.s != 0:
        raise FieldError(f"{src} does not embed in {tgt}")
    if tgt in src._gen_images:
        return src._gen_images[tgt]

    # a previously recorded two-step chain src -> mid -> tgt forces the value
    forced = None
    for mid, img_in_mid in list(src._gen_images.items()):
        if tgt.s % mid.s != 0 or mid.s == tgt.s:
            continue
        if tgt in mid._gen_images:
            comp = _apply_embedding(mid, tgt, img_in_mid)
            if forced is not None and forced != comp:
                raise FieldError(f"incompatible tower {src} -> {tgt}")
            forced = comp
    if forced is not None:
        src._gen_images[tgt] = forced
        return forced

    mod = src.modulus
    for v in range(tgt.q):
        acc = 0
        # evaluate modulus at v, Horner from the leading coefficient
        for c in reversed(mod):
            acc = tgt.add_val(tgt.mul_val(acc, v), c % tgt.p)
        if acc == 0:
            src._gen_images[tgt] = v
            return v
    raise FieldError(f"incompatible tower: {src} has no root in {tgt}")


def _apply_embedding(src: FieldDesc, tgt: FieldDesc, val: int) -> int:
    if src.s == 1:
        return val % tgt.p
    root = _embedding_root(src, tgt)
    digits = _val_to_digits(val, src.p, src.s)
    acc = 0
    for c in reversed(digits):
        acc = tgt.add_val(tgt.mul_val(acc, root), c)
    return acc


def embed(a: FieldElem, r: int) -> FieldElem:
    """Ring embedding of a in F_q into the tower F_{q^r}."""
    if r == 1:
        return a
    tgt = extension_of(a.owner, r)
    return FieldElem(tgt, _apply_embedding(a.owner, tgt, a.val))


def embed_into(a: FieldElem, tgt: FieldDesc) -> FieldElem:
    """Embedding of a into an explicitly given compatible extension."""
    if tgt == a.owner:
        return a
    if tgt.p != a.owner.p or tgt.s % a.owner.s != 0:
        raise FieldError(f"{a.owner} does not embed in {tgt}")
    return FieldElem(tgt, _apply_embedding(a.owner, tgt, a.val))


def enumerate_field(F: FieldDesc):
    """Deterministic stream of all q elements (alias of F.elements())."""
    return F.elements()


_REL_COORD_CACHE: dict[tuple, list] = {}


def relative_coordinates(x: FieldElem, base: FieldDesc):
    """Coordinates of x in F_{q^r} over the F_q-basis 1, G, ..., G^{r-1},
    where G is the big field's own generator (which has degree r over F_q).

    Returns a list of r elements of `base`.  Used to turn one condition over
    F_{q^r} into r linear conditions over F_q.
    """
    big = x.owner
    if big == base:
        return [x]
    if big.p != base.p or big.s % base.s != 0:
        raise FieldError(f"{base} is not a subfield of {big}")
    p, s = base.p, base.s
    r = big.s // base.s
    key = (base.p, base.s, big.s)
    inv = _REL_COORD_CACHE.get(key)
    if inv is None:
        # columns: F_p-digit vectors of embed(g^k) * G^j for j < r, k < s
        from . import linalg
        Fp = make_field(p)
        cols = []
        for j in range(r):
            Gj = FieldElem(big, big.p) ** j if big.s > 1 else big.one()
            for k in range(s):
                gk = (FieldElem(base, p) ** k if s > 1 else base.one())
                v = (embed_into(gk, big) * Gj).val
                cols.append(_val_to_digits(v, p, big.s))
        # solve M y = digits(x): store the RREF of [M | I]
        m = big.s
        aug = []
        for i in range(m):
            row = [Fp.elem(cols[j][i]) for j in range(m)]
            row += [Fp.one() if t == i else Fp.zero() for t in range(m)]
            aug.append(row)
        ech, pivots = linalg.rref(aug, 2 * m, Fp.one())
        if pivots[:m] != list(range(m)):
            raise ArithmeticError("relative basis is singular")
        inv = [[ech[i][m + t].val for t in range(m)] for i in range(m)]
        _REL_COORD_CACHE[key] = inv
    digits = _val_to_digits(x.val, p, big.s)
    y = []
    for i in range(big.s):
        acc = 0
        for t in range(big.s):
            acc = (acc + inv[i][t] * digits[t]) % p
        y.append(acc)
    return [base.elem(_digits_to_val(y[j * s:(j + 1) * s], p)) for j in range(r)]
