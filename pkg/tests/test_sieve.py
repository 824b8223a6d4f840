"""Cross-validation of the bulk census paths against the per-form oracles.

The sieve and the product/norm markings are independent routes to the same
predicates; these tests pin them against exhaustive per-form evaluation on
full small censuses and seeded samples at the next degree up.
"""

import random

import numpy as np

from hypersieve.gf import make_field
from hypersieve.homog import enumerate_forms, num_monomials
from hypersieve.ideal import SubschemeSpec, full_piece, vanishing_piece
from hypersieve.scheme import (SectionProblem, is_irreducible_section,
                               is_reduced_section, is_smooth_section)
from hypersieve.sieve import (census_index_of_mask, nonsquarefree_bitmap,
                              norm_split_bitmap, piece_rank_masks,
                              poly_rank_mask, reducible_bitmap,
                              singular_search_depth, smooth_singular_bitmap,
                              span_census_indices)

F2 = make_field(2)


def plane_problem():
    e = SubschemeSpec.empty(F2, 2)
    return SectionProblem(X=SubschemeSpec.whole_space(F2, 2), Z=e, T=e, m=2)


def test_search_depth_bound():
    assert [singular_search_depth(d) for d in (1, 2, 3, 4, 5, 6)] \
        == [1, 1, 3, 6, 10, 15]


def test_index_encoding_matches_enumeration():
    # census index of a form's rank mask agrees with its position in
    # enumerate_forms
    for d in (1, 2):
        N = num_monomials(2, d)
        for idx, f in enumerate(enumerate_forms(F2, 2, d)):
            assert census_index_of_mask(poly_rank_mask(f), N) == idx


def test_span_indices_match_subspace_enumeration():
    from hypersieve.homog import form_from_index
    Z = SubschemeSpec(F2, 2, points=[_pt(0, 0, 1)])
    piece = vanishing_piece(Z, 2)
    masks = piece_rank_masks(piece)
    N = num_monomials(2, 2)
    idxs = span_census_indices(masks, N)
    basis = piece.basis_polys()
    for i, full_idx in enumerate(idxs):
        f = form_from_index(F2, 2, 2, basis, i)
        assert census_index_of_mask(poly_rank_mask(f), N) == int(full_idx)


def _pt(*vals):
    from hypersieve.homog import point_from_ints
    return point_from_ints(F2, list(vals))


def test_smooth_sieve_agrees_with_oracle_full_census():
    prob = plane_problem()
    for d in (1, 2, 3):
        N = num_monomials(2, d)
        bm = smooth_singular_bitmap(2, d, [1 << j for j in range(N)])
        for idx, f in enumerate(enumerate_forms(F2, 2, d)):
            if f.is_zero():
                assert bm[idx]
                continue
            ok, _ = is_smooth_section(prob, f, mode="exact")
            assert ok is not None
            assert bool(bm[idx]) == (not ok), f"disagree at {f}"


def test_smooth_sieve_agrees_on_quartic_sample():
    prob = plane_problem()
    N = num_monomials(2, 4)
    bm = smooth_singular_bitmap(2, 4, [1 << j for j in range(N)])
    rng = random.Random(2024)
    from hypersieve.homog import form_from_index
    basis = full_piece(F2, 2, 4).basis_polys()
    for _ in range(250):
        idx = rng.randrange(1, 1 << N)
        f = form_from_index(F2, 2, 4, basis, idx)
        ok, _ = is_smooth_section(prob, f, mode="exact")
        assert ok is not None
        assert bool(bm[idx]) == (not ok)


def test_smooth_sieve_excluded_point():
    # excluding a rational point must only un-mark forms whose singular
    # locus meets nothing else
    N = num_monomials(2, 2)
    masks = [1 << j for j in range(N)]
    base = smooth_singular_bitmap(2, 2, masks)
    excl = smooth_singular_bitmap(2, 2, masks,
                                  excluded_keys=((1, 0, 0),))
    assert (excl & ~base).sum() == 0  # exclusion can only clear marks
    assert excl.sum() < base.sum()
    # oracle: forms singular exactly at [1:0:0] and nowhere else
    prob = plane_problem()
    from hypersieve.scheme import _singular_point_over
    for idx, f in enumerate(enumerate_forms(F2, 2, 2)):
        if f.is_zero():
            continue
        if base[idx] and not excl[idx]:
            ok, _ = is_smooth_section(prob, f, mode="exact")
            assert ok is False  # singular somewhere...
            w = _singular_point_over([], f, 1)
            assert w == _pt(1, 0, 0)  # ...namely only at the excluded point


def test_factor_bitmaps_agree_with_oracle_cubics():
    d = 3
    red = reducible_bitmap(2, d)
    nsq = nonsquarefree_bitmap(2, d)
    norm = norm_split_bitmap(F2, 2, d)
    for idx, f in enumerate(enumerate_forms(F2, 2, d)):
        if f.is_zero():
            assert red[idx] and nsq[idx]
            continue
        irr = is_irreducible_section(f)
        geom = is_irreducible_section(f, geometric=True)
        sqf = is_reduced_section(f)
        assert bool(red[idx]) == (not irr)
        assert bool(nsq[idx]) == (not sqf)
        assert geom == ((not red[idx]) and (not norm[idx]))


def test_factor_bitmaps_agree_on_quartic_sample():
    d = 4
    red = reducible_bitmap(2, d)
    norm = norm_split_bitmap(F2, 2, d)
    nsq = nonsquarefree_bitmap(2, d)
    N = num_monomials(2, d)
    rng = random.Random(99)
    from hypersieve.homog import form_from_index
    basis = full_piece(F2, 2, d).basis_polys()
    for _ in range(120):
        idx = rng.randrange(1, 1 << N)
        f = form_from_index(F2, 2, d, basis, idx)
        assert bool(red[idx]) == (not is_irreducible_section(f))
        assert bool(nsq[idx]) == (not is_reduced_section(f))
        assert is_irreducible_section(f, geometric=True) \
            == ((not red[idx]) and (not norm[idx]))


def test_sieve_thread_determinism():
    N = num_monomials(2, 3)
    masks = [1 << j for j in range(N)]
    b1 = smooth_singular_bitmap(2, 3, masks, threads=1)
    b2 = smooth_singular_bitmap(2, 3, masks, threads=2)
    b8 = smooth_singular_bitmap(2, 3, masks, threads=8)
    assert np.array_equal(b1, b2) and np.array_equal(b1, b8)
