"""Vectorized bulk evaluation of census predicates over F_2.

The exhaustive censuses (|S_5| = 2^21 forms and up) cannot afford a
per-form geometric predicate, so the decisions are flipped to run over
points and factor candidates instead:

* Smoothness: "V(f) is singular at the point x" is a linear condition on
  the coefficients of f, so the singular forms at x form a subspace L_x of
  the census domain.  Marking the union of L_x over all closed points x of
  degree <= D(d) classifies every form exactly, where for plane curves
  D(d) = max(1, d(d-1)/2):

  - if f is not squarefree over the algebraic closure, some F_q-irreducible
    h with h^2 | f exists (conjugate repeated factors multiply into an
    F_q-form), deg h <= d/2; every point of V(h) is singular, and cutting
    V(h) with a rational line yields a singular closed point of degree
    <= d/2 (or a rational one if the line lies in V(h));
  - if f is squarefree, its geometric components of degrees e_i carry at
    most (e_i-1)(e_i-2)/2 singular points each plus e_i*e_j pairwise
    intersections, in total (d^2-3d+2k)/2 <= d(d-1)/2 geometric singular
    points, so a Galois orbit of them has at most that size.

* Reducibility / geometric splitting / repeated factors: the offending
  forms are images of explicit multiplication maps (g*S_{d-e}, conjugate
  norm products, w^2*S_{d-2e}), which are enumerated forwards and marked.

Census indices follow the coefficient-lex encoding of enumerate_forms:
index = sum c_j q^(K-1-j), so over F_2 coefficient j sits at bit K-1-j.
"""

from __future__ import annotations

import numpy as np

from .gf import make_field
from .homog import HomogPoly, monomials, num_monomials, _product_ranks
from .ideal import GradedPiece


def singular_search_depth(d: int) -> int:
    """Largest residue degree a singular closed point of a degree-d plane
    curve can have (see module docstring)."""
    return max(1, d * (d - 1) // 2)


# ---------------------------------------------------------------------------
# encoding helpers

def _revbits(mask: int, width: int) -> int:
    out = 0
    for j in range(width):
        if mask >> j & 1:
            out |= 1 << (width - 1 - j)
    return out


def piece_rank_masks(piece: GradedPiece):
    """Echelon basis rows of a GradedPiece over F_2 as integer masks with
    bit j = coefficient of monomial rank j."""
    if piece.field.q != 2:
        raise ValueError("bitmask paths require q = 2")
    out = []
    for row in piece.rows:
        m = 0
        for j, c in enumerate(row):
            if c:
                m |= 1 << j
        out.append(m)
    return out


def poly_rank_mask(f: HomogPoly) -> int:
    m = 0
    for j, c in enumerate(f.coeffs):
        if c:
            m |= 1 << j
    return m


def census_index_of_mask(mask: int, N: int) -> int:
    """Census index of the form with monomial-rank mask `mask` in full S_d."""
    return _revbits(mask, N)


def span_census_indices(rank_masks, N, dtype=None):
    """Census indices of every member of the F_2-span of rank_masks, ordered
    so that position i is the member with basis-coefficient bits of i
    (coefficient j of basis vector j at bit len-1-j: the census encoding of
    the subspace's own index space)."""
    K = len(rank_masks)
    if dtype is None:
        dtype = np.uint32 if N <= 32 else np.uint64
    arr = np.zeros(1, dtype=dtype)
    for j in range(K - 1, -1, -1):
        v = dtype(census_index_of_mask(rank_masks[j], N))
        arr = np.concatenate([arr, arr ^ v])
    return arr


# ---------------------------------------------------------------------------
# GF(2^r) vectorized arithmetic

def _tables(r: int):
    F = make_field(2, r) if r > 1 else None
    if r == 1:
        exp = np.array([1, 1], dtype=np.int64)
        log = np.array([0, 0], dtype=np.int64)
        return exp, log
    return (np.array(F._exp, dtype=np.int64),
            np.array(F._log, dtype=np.int64))


def _vec_mul(a, b, exp, log):
    out = exp[log[a] + log[b]]
    out[(a == 0) | (b == 0)] = 0
    return out


def _vec_pow_int(a, e, exp, log, q):
    """a^e elementwise (e a plain int >= 1)."""
    out = exp[(log[a] * e) % (q - 1)]
    out[a == 0] = 0
    return out


def _points_exact_degree(r: int, n: int):
    """Coordinates of all normalized points of P^n(F_{2^r}) whose Frobenius
    orbit over F_2 has size exactly r.  Returns (n+1) int64 arrays."""
    q = 2 ** r
    exp, log = _tables(r)
    cols = []
    blocks = []
    for lead in range(n + 1):
        tail = n - lead
        size = q ** tail
        block = [np.zeros(size, dtype=np.int64) for _ in range(lead)]
        block.append(np.ones(size, dtype=np.int64))
        idx = np.arange(size, dtype=np.int64)
        for t in range(tail):
            block.append((idx // (q ** t)) % q)
        blocks.append(block)
    coords = [np.concatenate([b[i] for b in blocks]) for i in range(n + 1)]
    if r == 1:
        return coords
    keep = np.ones(coords[0].shape, dtype=bool)
    for p in _prime_divisors(r):
        e = r // p
        fixed = np.ones(coords[0].shape, dtype=bool)
        for c in coords:
            ce = c.copy()
            for _ in range(e):
                ce = _vec_mul(ce, ce, exp, log)
            fixed &= ce == c
        keep &= ~fixed
    return [c[keep] for c in coords]


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# the smoothness sieve

def _condition_columns(r: int, n: int, d: int, coords):
    """Packed singularity conditions at each point, one uint64 per monomial:
    bits [0,r) value, then r bits per homogeneous partial.  4r <= 64 bits
    for every plane-curve depth used here."""
    q = 2 ** r
    exp, log = _tables(r)
    mons = monomials(n, d)
    npts = coords[0].shape[0]
    if (n + 2) * r > 64:
        raise ValueError("packed condition exceeds 64 bits")
    # coordinate powers up to d
    pows = []
    for c in coords:
        row = [np.ones(npts, dtype=np.int64), c.copy()]
        for e in range(2, d + 1):
            row.append(_vec_mul(row[-1], c, exp, log))
        pows.append(row)
    columns = np.zeros((len(mons), npts), dtype=np.uint64)
    for j, exps in enumerate(mons):
        val = np.ones(npts, dtype=np.int64)
        for i, e in enumerate(exps):
            if e:
                val = _vec_mul(val, pows[i][e], exp, log)
        packed = val.astype(np.uint64)
        for i in range(n + 1):
            e = exps[i]
            if e == 0 or e % 2 == 0:
                continue  # char 2 kills even exponents
            dval = np.ones(npts, dtype=np.int64)
            for t, et in enumerate(exps):
                ee = et - 1 if t == i else et
                if ee:
                    dval = _vec_mul(dval, pows[t][ee], exp, log)
            packed |= dval.astype(np.uint64) << np.uint64((i + 1) * r)
        columns[j] = packed
    return columns


def _fold_columns(columns, basis_masks):
    """XOR-fold monomial columns into census-domain columns."""
    K = len(basis_masks)
    npts = columns.shape[1]
    out = np.zeros((K, npts), dtype=np.uint64)
    for j, mask in enumerate(basis_masks):
        acc = np.zeros(npts, dtype=np.uint64)
        i = 0
        m = mask
        while m:
            if m & 1:
                acc ^= columns[i]
            m >>= 1
            i += 1
        out[j] = acc
    return out


def _kernel_masks_python(colvals, K):
    """Kernel of the packed columns as census-index masks (coefficient j at
    bit K-1-j); plain-int elimination for one point."""
    basis = {}
    kernel = []
    for j, v in enumerate(colvals):
        m = 1 << (K - 1 - j)
        v = int(v)
        while v:
            hb = v.bit_length() - 1
            if hb in basis:
                bv, bm = basis[hb]
                v ^= bv
                m ^= bm
            else:
                basis[hb] = (v, m)
                break
        if v == 0:
            kernel.append(m)
    return kernel


def smooth_singular_bitmap(n, d, basis_masks, excluded_keys=(),
                           threads: int = 1, progress=None):
    """Boolean array over the census domain marking forms whose section is
    singular somewhere on P^n minus the excluded rational points (q = 2,
    plane curves n = 2).

    basis_masks: monomial-rank masks of the domain basis (len K <= 28).
    excluded_keys: normalized coordinate triples (ints) to skip at r = 1.
    """
    if n != 2:
        raise ValueError("the smoothness sieve is implemented for n = 2")
    K = len(basis_masks)
    bitmap = np.zeros(1 << K, dtype=bool)
    bitmap[0] = True  # the zero form defines no hypersurface
    units = _sieve_units(d)
    if threads > 1:
        from .parallel import run_units
        results = run_units(_smooth_unit_worker,
                            [(n, d, tuple(basis_masks), tuple(excluded_keys),
                              u) for u in units], threads)
        for idxs in results:
            bitmap[idxs] = True
    else:
        for u in units:
            idxs = _smooth_unit_worker((n, d, tuple(basis_masks),
                                        tuple(excluded_keys), u))
            bitmap[idxs] = True
            if progress:
                progress(u)
    return bitmap


def _sieve_units(d: int):
    """Work units (degree, chunk, nchunks); large degrees are split."""
    units = []
    for r in range(1, singular_search_depth(d) + 1):
        nchunks = 1 if r <= 7 else 4
        for c in range(nchunks):
            units.append((r, c, nchunks))
    return units


def _smooth_unit_worker(args):
    n, d, basis_masks, excluded_keys, (r, chunk, nchunks) = args
    K = len(basis_masks)
    coords = _points_exact_degree(r, n)
    if r == 1 and excluded_keys:
        drop = np.zeros(coords[0].shape, dtype=bool)
        for key in excluded_keys:
            hit = np.ones(coords[0].shape, dtype=bool)
            for c, k in zip(coords, key):
                hit &= c == k
            drop |= hit
        coords = [c[~drop] for c in coords]
    npts = coords[0].shape[0]
    lo = npts * chunk // nchunks
    hi = npts * (chunk + 1) // nchunks
    coords = [c[lo:hi] for c in coords]
    if coords[0].shape[0] == 0:
        return np.zeros(0, dtype=np.uint32)
    columns = _condition_columns(r, n, d, coords)
    folded = _fold_columns(columns, basis_masks)
    npts = folded.shape[1]
    marks = []
    if 4 * r >= K + 4 and npts > 512:
        # kernels are rare: batch-filter by rank first
        kdim = _batched_rank_deficiency(folded)
        cand = np.nonzero(kdim > 0)[0]
    else:
        cand = np.arange(npts)
    for t in cand:
        kmasks = _kernel_masks_python(folded[:, t], K)
        if kmasks:
            marks.append(_span_from_masks(kmasks))
    if not marks:
        return np.zeros(0, dtype=np.uint32)
    return np.unique(np.concatenate(marks))


def _span_from_masks(kmasks):
    arr = np.zeros(1, dtype=np.uint32)
    for m in kmasks:
        arr = np.concatenate([arr, arr ^ np.uint32(m)])
    return arr


def _batched_rank_deficiency(cols):
    """K minus rank of the packed columns, per point (vectorized)."""
    K, npts = cols.shape
    slots = np.zeros((64, npts), dtype=np.uint64)
    deficiency = np.zeros(npts, dtype=np.int64)
    pidx = np.arange(npts)
    for j in range(K):
        c = cols[j].copy()
        zero_now = c == 0
        deficiency[zero_now] += 1
        active = ~zero_now
        while active.any():
            ai = pidx[active]
            cv = c[ai]
            hb = np.floor(np.log2(cv.astype(np.float64))).astype(np.int64)
            sv = slots[hb, ai]
            empty = sv == 0
            if empty.any():
                slots[hb[empty], ai[empty]] = cv[empty]
                c[ai[empty]] = 0
            rest = ~empty
            if rest.any():
                red = cv[rest] ^ sv[rest]
                c[ai[rest]] = red
                newly_zero = ai[rest][red == 0]
                deficiency[newly_zero] += 1
            active = c != 0
    return deficiency


# ---------------------------------------------------------------------------
# forward product marking (reducible / repeated-factor / conjugate-split)

def _normalized_masks(n: int, e: int):
    """Rank masks of all nonzero degree-e forms over F_2 with leading
    coefficient 1 (one per scalar class; over F_2 that is every nonzero)."""
    N = num_monomials(n, e)
    for lead in range(N):
        base = 1 << lead
        for v in range(1 << (N - lead - 1)):
            yield base | (v << (lead + 1))


def _image_masks(gmask: int, n: int, e: int, d: int):
    """Rank masks over S_d of g*m for each degree-(d-e) monomial m."""
    table = _product_ranks(n, e, d - e)
    out = []
    for j in range(num_monomials(n, d - e)):
        m = 0
        i = 0
        g = gmask
        while g:
            if g & 1:
                m ^= 1 << table[i][j]
            g >>= 1
            i += 1
        out.append(m)
    return out


def _mark_image(bitmap, gmask, n, e, d, N):
    idxs = span_census_indices(_image_masks(gmask, n, e, d), N)
    bitmap[idxs] = True


def reducible_bitmap(n: int, d: int, threads: int = 1):
    """Marks forms in S_d over F_2 with a proper factor over F_2 (a factor
    of degree <= d/2 always exists in a factorization)."""
    N = num_monomials(n, d)
    bitmap = np.zeros(1 << N, dtype=bool)
    bitmap[0] = True
    for e in range(1, d // 2 + 1):
        for gmask in _normalized_masks(n, e):
            _mark_image(bitmap, gmask, n, e, d, N)
    return bitmap


def nonsquarefree_bitmap(n: int, d: int):
    """Marks forms with a repeated geometric factor: equivalently w^2 | f
    for some F_2-form w (the conjugates of a repeated geometric factor
    multiply into an F_q-form that appears squared)."""
    N = num_monomials(n, d)
    bitmap = np.zeros(1 << N, dtype=bool)
    bitmap[0] = True
    for e in range(1, d // 2 + 1):
        for wmask in _normalized_masks(n, e):
            sq = _square_mask(wmask, n, e)
            idxs = span_census_indices(_image_masks_from(sq, n, 2 * e, d), N)
            bitmap[idxs] = True
    return bitmap


def _square_mask(wmask: int, n: int, e: int) -> int:
    table = _product_ranks(n, e, e)
    out = 0
    bits = [i for i in range(num_monomials(n, e)) if wmask >> i & 1]
    for i in bits:
        for j in bits:
            out ^= 1 << table[i][j]
    return out


def _image_masks_from(gmask: int, n: int, e: int, d: int):
    if e == d:
        return [gmask]
    return _image_masks(gmask, n, e, d)


def norm_split_bitmap(field, n: int, d: int):
    """Marks the conjugate norm products: for every divisor r >= 2 of d and
    every form g of degree d/r over F_{2^r}, the product of the r Frobenius
    conjugates of g (an F_2-form).  An F_2-irreducible form is geometrically
    reducible exactly when it is such a product."""
    from .gf import extension_of
    from .homog import HomogPoly
    N = num_monomials(n, d)
    bitmap = np.zeros(1 << N, dtype=bool)
    for r in range(2, d + 1):
        if d % r != 0:
            continue
        e = d // r
        F = extension_of(field, r)
        q = field.q
        for gmask_vals in _normalized_forms_vals(F, n, e):
            g = HomogPoly(F, n, e, [F.elem(v) for v in gmask_vals])
            prod = g
            conj = g
            for _ in range(r - 1):
                conj = HomogPoly(F, n, conj.d,
                                 [c ** q for c in conj.coeffs])
                prod = prod * conj
            mask = 0
            ok = True
            for j, c in enumerate(prod.coeffs):
                if c.val == 1:
                    mask |= 1 << j
                elif c.val != 0:
                    ok = False  # not an F_2 form: not Galois-stable (skip)
                    break
            if ok and mask:
                bitmap[census_index_of_mask(mask, N)] = True
    return bitmap


def _normalized_forms_vals(F, n, e):
    N = num_monomials(n, e)
    q = F.q
    for lead in range(N):
        for v in range(q ** (N - lead - 1)):
            vals = [0] * lead + [1]
            rest = v
            for _ in range(N - lead - 1):
                rest, digit = divmod(rest, q)
                vals.append(digit)
            yield vals
