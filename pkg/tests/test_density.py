from fractions import Fraction

import pytest

from hypersieve.gf import make_field
from hypersieve.homog import ProjPoint, parse_poly, point_from_ints
from hypersieve.ideal import SubschemeSpec, vanishing_piece
from hypersieve.scheme import SectionProblem
from hypersieve.density import (Experiment, compare_report, run_census)

F2 = make_field(2)
F4 = make_field(2, 2)
P2 = SubschemeSpec.whole_space(F2, 2)
EMPTY = SubschemeSpec.empty(F2, 2)


def prob(T=None, Z=None):
    return SectionProblem(X=P2, Z=Z or EMPTY, T=T or EMPTY, m=2)


def exp(kind, d_lo, d_hi, **kw):
    return Experiment(kind, kw.pop("problem", prob()), d_lo, d_hi, **kw)


def test_validation():
    with pytest.raises(ValueError):
        run_census(exp("nonsense", 1, 2))
    with pytest.raises(ValueError):
        run_census(exp("avoidance", 2, 1))


def test_avoidance_exact_linear_functional():
    W = SubschemeSpec(F2, 2, points=[point_from_ints(F2, [1, 1, 1])])
    rep = run_census(exp("avoidance", 2, 4, problem=prob(T=W)))
    for r in rep.rows:
        assert r.empirical == Fraction(1, 2)
        assert r.size == 2 ** vanishing_piece(EMPTY, r.d).rank


def test_avoidance_rank_count_matches_per_form():
    # the rank-arithmetic count equals brute-force evaluation at small d
    from hypersieve.density import predicate_callable
    from hypersieve.homog import enumerate_forms
    P = ProjPoint(F4, [F4.zero(), F4.one(), F4.generator()])
    W = SubschemeSpec(F2, 2, points=[point_from_ints(F2, [1, 1, 1]), P])
    e = exp("avoidance", 2, 3, problem=prob(T=W))
    rep = run_census(e)
    pred = predicate_callable(e)
    for row in rep.rows:
        brute = sum(1 for f in enumerate_forms(F2, 2, row.d)
                    if not f.is_zero() and pred(f))
        assert row.hits == brute
        assert row.empirical == Fraction(3, 8)


def test_containment_closed_form():
    line = SubschemeSpec(F2, 2, gens=[parse_poly("x0", F2, 2)])
    rep = run_census(exp("containment", 1, 6, options={"target": line}))
    for r in rep.rows:
        assert r.empirical == Fraction(1, 2 ** (r.d + 1))
    devs = [r.abs_dev for r in rep.rows]
    assert all(a > b for a, b in zip(devs, devs[1:]))  # strictly decreasing


def test_containment_matches_filtering():
    # restricting to I^Z_d vs filtering S_d for containment: same hit set
    from hypersieve.homog import enumerate_forms
    line = SubschemeSpec(F2, 2, gens=[parse_poly("x0", F2, 2)])
    rep = run_census(exp("containment", 2, 3, options={"target": line}))
    for row in rep.rows:
        piece = vanishing_piece(line, row.d)
        brute = sum(1 for f in enumerate_forms(F2, 2, row.d)
                    if piece.contains(f))
        assert row.hits == brute


def test_constant_predicate_density_one():
    rep = run_census(exp("constant_density", 1, 3))
    for r in rep.rows:
        assert r.empirical == 1


def test_smooth_census_small_degrees():
    rep = run_census(exp("smooth_density", 2, 3))
    by_d = {r.d: r for r in rep.rows}
    assert by_d[2].hits == 28          # verified against the exact oracle
    assert by_d[3].hits == 336
    assert by_d[3].empirical == Fraction(21, 64)


def test_smooth_census_matches_per_form_path():
    # same experiment through the generic per-form engine (q=3 has no bulk)
    F3 = make_field(3)
    P2_3 = SubschemeSpec.whole_space(F3, 2)
    e3 = SubschemeSpec.empty(F3, 2)
    rep = run_census(Experiment("smooth_density",
                                SectionProblem(X=P2_3, Z=e3, T=e3, m=2),
                                1, 2))
    # lines in P^2 are all smooth; quadrics: smooth iff rank 3
    assert rep.rows[0].hits == 3 ** 3 - 1
    assert 0 < rep.rows[1].hits < 3 ** 6


def test_taylor_census_domain_and_exclusion():
    y = [point_from_ints(F2, [1, 1, 1])]
    e = exp("taylor_density", 3, 3,
            options={"taylor_points": y, "taylor_values": [[0]]})
    rep = run_census(e)
    row = rep.rows[0]
    # the restriction is part of the predicate: the denominator stays |I^Z_d|
    assert row.size == 2 ** 10
    # oracle: forms vanishing at y whose singular points (enumerated over
    # F_{2^r}, r <= 3, the degree bound for singular cubics) are all equal
    # to y itself; note y reappears inside every P^2(F_{2^r})
    from hypersieve.gf import embed_into, extension_of
    from hypersieve.homog import (embed_poly, enumerate_forms, jacobian,
                                  poly_eval, ProjPoint)
    from hypersieve.ideal import projective_points
    hits = 0
    for f in enumerate_forms(F2, 2, 3):
        if f.is_zero() or not poly_eval(f, y[0]).is_zero():
            continue
        bad = False
        for r in (1, 2, 3):
            big = extension_of(F2, r)
            fe = embed_poly(f, big)
            jac = [embed_poly(g, big) for g in jacobian(f)]
            y_embedded = ProjPoint(big, [embed_into(c, big)
                                         for c in y[0].coords])
            for P in projective_points(big, 2):
                if P == y_embedded:
                    continue
                if poly_eval(fe, P).is_zero() \
                        and all(poly_eval(j, P).is_zero() for j in jac):
                    bad = True
                    break
            if bad:
                break
        if not bad:
            hits += 1
    assert row.hits == hits


def test_irreducibility_census_monotone():
    Z = SubschemeSpec(F2, 2, points=[point_from_ints(F2, [0, 0, 1])])
    rep = run_census(exp("irreducibility_density", 3, 4, problem=prob(Z=Z)))
    fr = [float(r.empirical) for r in rep.rows]
    assert fr[0] < fr[1]
    geo = run_census(exp("irreducibility_density", 3, 4, problem=prob(Z=Z),
                         options={"geometric": True}))
    for a, b in zip(geo.rows, rep.rows):
        assert a.hits <= b.hits


def test_inclusion_exclusion_bound_on_real_censuses():
    # #(P and P' in I_d) >= #(P) + #(P') - |I_d| for intersecting predicates
    Z = SubschemeSpec(F2, 2, points=[point_from_ints(F2, [0, 0, 1])])
    irred = run_census(exp("irreducibility_density", 3, 4, problem=prob(Z=Z)))
    red = run_census(exp("reduced_density", 3, 4, problem=prob(Z=Z)))
    both = run_census(exp("integrality_density", 3, 4, problem=prob(Z=Z)))
    for r_i, r_r, r_b in zip(irred.rows, red.rows, both.rows):
        assert r_b.hits >= r_i.hits + r_r.hits - r_i.size
        assert r_b.hits <= min(r_i.hits, r_r.hits)


def test_parallel_width_determinism():
    Z = SubschemeSpec(F2, 2, points=[point_from_ints(F2, [0, 0, 1])])
    reps = [run_census(exp("irreducibility_density", 3, 3, problem=prob(Z=Z),
                           threads=w)) for w in (1, 2, 8)]
    assert len({tuple((r.d, r.hits) for r in rep.rows)
                for rep in reps}) == 1
    reps2 = [run_census(exp("smooth_density", 3, 3, threads=w))
             for w in (1, 2, 8)]
    assert len({rep.rows[0].hits for rep in reps2}) == 1


def test_subsample_mode_reports_half_width():
    e = exp("smooth_density", 3, 3, subsample=200, seed=11)
    rep = run_census(e)
    row = rep.rows[0]
    assert row.half_width is not None and 0 < row.half_width < 0.1
    rep2 = run_census(exp("smooth_density", 3, 3, subsample=200, seed=11))
    assert rep2.rows[0].hits == row.hits  # seeded determinism


def test_compare_report():
    rep = run_census(exp("smooth_density", 4, 5, threads=2))
    verdict = compare_report(rep, 0.05)
    assert verdict["all_ok"]
    tight = compare_report(rep, {4: 1e-9, 5: 0.05})
    assert not tight["per_degree"][4]


def test_stabilization_gate():
    # a fat-point ideal stabilizes late: degree 1 must be rejected
    Z = SubschemeSpec(F2, 2, gens=[parse_poly("x0^2", F2, 2),
                                   parse_poly("x0*x1", F2, 2),
                                   parse_poly("x1^2", F2, 2)])
    from hypersieve.ideal import stabilization_degree
    c = stabilization_degree(Z, 6)
    assert c == 2
    with pytest.raises(ValueError):
        run_census(Experiment("containment", prob(Z=Z), 1, 3,
                              options={"target": Z}))
