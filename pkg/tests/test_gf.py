import random

import pytest

from hypersieve.gf import (FieldError, embed, embed_into, enumerate_field,
                           extension_of, make_field, relative_coordinates)


def brute_irreducible_quadratics_over_f2():
    # independent oracle: monic quadratics without a root in F_2
    out = []
    for c1 in (0, 1):
        for c0 in (0, 1):
            if all((x * x + c1 * x + c0) % 2 != 0 for x in (0, 1)):
                out.append((c0, c1, 1))
    return out


def test_make_field_basics():
    F2 = make_field(2)
    assert F2.q == 2 and F2.s == 1
    F4 = make_field(2, 2)
    assert F4.q == 4
    # the unique irreducible monic quadratic over F_2 is x^2 + x + 1
    assert brute_irreducible_quadratics_over_f2() == [(1, 1, 1)]
    assert F4.modulus == (1, 1, 1)


def test_composite_characteristic_rejected():
    with pytest.raises(FieldError):
        make_field(4)
    with pytest.raises(FieldError):
        make_field(1)


def test_field_order_cap(monkeypatch):
    monkeypatch.setenv("HYPERSIEVE_FIELD_CAP", "100")
    from hypersieve.gf import FieldDesc
    with pytest.raises(FieldError):
        FieldDesc(2, 7)  # 128 > 100


def test_arithmetic_examples():
    F4 = make_field(2, 2)
    a = F4.generator()
    assert a * a == a + F4.one()          # reduce a^2 by a^2+a+1
    F3 = make_field(3)
    assert F3.elem(2).inverse() == F3.elem(2)   # 2*2 = 4 = 1 mod 3
    for F in (F3, F4, make_field(5)):
        for x in enumerate_field(F):
            assert x + F.zero() == x


def test_inverse_and_division():
    for (p, s) in ((2, 1), (3, 1), (2, 2), (3, 2), (2, 3)):
        F = make_field(p, s)
        for a in enumerate_field(F):
            if a.is_zero():
                with pytest.raises(ZeroDivisionError):
                    a.inverse()
                continue
            assert a * a.inverse() == F.one()
            assert (a / a) == F.one()


def test_commutativity_associativity_random():
    rng = random.Random(7)
    for (p, s) in ((2, 3), (3, 2), (5, 1), (7, 1)):
        F = make_field(p, s)
        for _ in range(60):
            a, b, c = (F.elem(rng.randrange(F.q)) for _ in range(3))
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c


def test_frobenius_additive_exhaustive():
    # (a+b)^p = a^p + b^p for all pairs in fields of order <= 81
    for (p, s) in ((2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3),
                   (5, 1), (7, 1), (2, 6), (3, 4)):
        F = make_field(p, s)
        if F.q > 81:
            continue
        els = list(enumerate_field(F))
        for a in els:
            for b in els:
                assert (a + b).frobenius() == a.frobenius() + b.frobenius()


def test_pow_by_q_fixes_field():
    for (p, s) in ((2, 2), (3, 2), (2, 4)):
        F = make_field(p, s)
        for a in enumerate_field(F):
            assert a ** F.q == a


def test_fixed_field_of_relative_frobenius():
    # inside F_{q^r} the fixed points of x -> x^q are exactly q elements
    for (q_desc, r) in (((2, 1), 2), ((2, 1), 3), ((2, 2), 2),
                        ((2, 2), 3), ((2, 1), 8), ((3, 1), 4)):
        p, s = q_desc
        F = make_field(p, s)
        big = extension_of(F, r)
        if big.q > 256:
            continue
        fixed = sum(1 for x in enumerate_field(big) if x ** F.q == x)
        assert fixed == F.q


def test_embedding_examples():
    F2 = make_field(2)
    assert embed(F2.one(), 2).val == 1
    a = make_field(2, 2).generator()
    assert embed(a, 1) is a
    # image of F_2 in F_4: solutions of x^2 = x
    F4 = make_field(2, 2)
    img = {embed(x, 2).val for x in enumerate_field(F2)}
    assert img == {x.val for x in enumerate_field(F4) if x * x == x}


def test_embedding_is_ring_hom():
    for (p, s, r) in ((2, 1, 3), (2, 2, 2), (3, 1, 2), (3, 2, 2)):
        F = make_field(p, s)
        big = extension_of(F, r)
        els = list(enumerate_field(F))
        for a in els:
            for b in els:
                assert embed(a + b, r) == embed(a, r) + embed(b, r)
                assert embed(a * b, r) == embed(a, r) * embed(b, r)
        assert embed(F.one(), r) == big.one()


def test_embedding_tower_composition():
    # F_q -> F_{q^2} -> F_{q^4} agrees with the direct embedding
    for (p, s) in ((2, 1), (2, 2), (3, 1)):
        F = make_field(p, s)
        mid = extension_of(F, 2)
        big = extension_of(F, 4)
        if big.q > 2 ** 16:
            continue
        for a in enumerate_field(F):
            two_step = embed_into(embed_into(a, mid), big)
            assert two_step == embed_into(a, big)


def test_owner_mismatch_rejected():
    F2, F3 = make_field(2), make_field(3)
    with pytest.raises(FieldError):
        F2.one() + F3.one()


def test_enumeration_deterministic_and_complete():
    F2 = make_field(2)
    assert [x.val for x in enumerate_field(F2)] == [0, 1]
    F4 = make_field(2, 2)
    els = list(enumerate_field(F4))
    assert len(els) == 4 and els[0].is_zero()
    F9 = make_field(3, 2)
    vals = [x.val for x in enumerate_field(F9)]
    assert len(vals) == 9 and len(set(vals)) == 9


def test_relative_coordinates_roundtrip():
    for (p, s, r) in ((2, 1, 2), (2, 1, 3), (2, 2, 2), (3, 1, 2)):
        base = make_field(p, s)
        big = extension_of(base, r)
        G = big.generator() if big.s > 1 else big.one()
        powers = [big.one()]
        for _ in range(r - 1):
            powers.append(powers[-1] * G)
        for x in enumerate_field(big):
            coords = relative_coordinates(x, base)
            assert len(coords) == r
            acc = big.zero()
            for c, gp in zip(coords, powers):
                acc = acc + embed_into(c, big) * gp
            assert acc == x
