"""Permutation tests, enumeration, families, counting."""

import math

import numpy as np
import pytest

from binomgroup.backend import kernels
from binomgroup.binomial import (
    any_odd_class_binomial,
    block_preserved_divisors,
    class_count,
    count_N,
    count_T,
    enumerate_generators,
    family_additive,
    family_tz,
    is_perm_bruteforce,
    is_perm_reduced,
    iter_class_binomials,
    keyprop_count,
    make_binomial,
    realizable_gap_gcds,
)
from binomgroup.errors import (
    BadCongruence,
    BadDivisor,
    BadFieldShape,
    BadGcd,
    DegreeOverflow,
    ExponentRange,
)
from binomgroup.ffield import ZERO, build_field, from_encoding, neg
from binomgroup.intmath import divisors, prime_powers_between

from oracles import naive_parity, oracle_all_perm_binomials, oracle_field, oracle_is_perm


def F(p, e=1):
    return build_field(p, e)


# ---------------------------------------------------------------------------
# single-binomial tests


def test_f7_hand_example():
    ctx = F(7)
    a = from_encoding(ctx, 3)
    assert is_perm_bruteforce(ctx, a, 0, 1, 4)  # 3x + x^4 hits 4,1,6,2,3,5
    b = make_binomial(ctx, a, 1, 4)
    assert (b.k, b.s, b.d, b.t) == (3, 3, 2, 1)
    assert is_perm_reduced(ctx, b)


def test_f5_even_function_collides():
    ctx = F(5)
    one_ = from_encoding(ctx, 1)
    assert not is_perm_bruteforce(ctx, one_, one_, 2, 4)


def test_f8_has_no_permutation_binomials():
    ctx = F(2, 3)  # 2^3 - 1 = 7 prime: every gap is coprime to q-1
    for m in range(1, 8):
        for n in range(m + 1, 8):
            for a in range(7):
                for b in range(7):
                    assert not is_perm_bruteforce(ctx, a, b, m, n)
    assert len(enumerate_generators(ctx)) == 0
    assert class_count(ctx) == 0


def test_gap_coprime_never_permutes():
    # gcd(n-m, q-1) = 1 means the gap-th root of -a goes to 0
    ctx = F(11)
    for m, n in [(1, 2), (2, 5), (3, 10)]:
        b = make_binomial(ctx, 4, m, n)
        if b.s == 1:
            assert not is_perm_reduced(ctx, b)
            assert not is_perm_bruteforce(ctx, 4, 0, m, n)


def test_gap_gcd_sharing_m_fails():
    ctx = F(13)
    for m in (2, 4):  # k = 4, s = 4, gcd(m, s) > 1
        for a in range(12):
            b = make_binomial(ctx, a, m, m + 4)
            assert not is_perm_reduced(ctx, b)
            assert not is_perm_bruteforce(ctx, a, 0, m, m + 4)


def test_exponent_validation():
    ctx = F(7)
    with pytest.raises(ExponentRange):
        is_perm_bruteforce(ctx, 1, 1, 3, 3)
    with pytest.raises(ExponentRange):
        is_perm_bruteforce(ctx, 1, 1, 0, 4)
    with pytest.raises(ExponentRange):
        make_binomial(ctx, 1, 2, 9)
    with pytest.raises(ValueError):
        make_binomial(ctx, ZERO, 1, 4)


# ---------------------------------------------------------------------------
# oracle equivalence


@pytest.mark.parametrize("p,e", [(p, e) for (_, p, e) in prime_powers_between(3, 64)])
def test_reduced_equals_bruteforce_exhaustive(p, e):
    """Reduced test == brute force == independent oracle on every binomial."""
    ctx = F(p, e)
    q = ctx.q
    field = oracle_field(p, e, ctx.spec.modulus)
    pw = field.pow_table(q - 1)
    for m in range(1, q - 1):
        for n in range(m + 1, q):
            for a in range(q - 1):
                b = make_binomial(ctx, a, m, n)
                fast = is_perm_reduced(ctx, b)
                slow = is_perm_bruteforce(ctx, a, 0, m, n)
                assert fast == slow, (q, a, m, n)
                truth = oracle_is_perm(field, int(ctx.exp[a]), 1, m, n, pw)
                assert fast == truth, (q, a, m, n)


def test_reduced_equals_bruteforce_random_midrange():
    """Spot version of the 10^5-random sweep (acceptance runs it in full)."""
    for (q, p, e) in prime_powers_between(65, 128):
        ctx = F(p, e)
        bad, ba, bm, bn = kernels.random_equiv_trials(ctx.zech, ctx.n1, 2000, q)
        assert bad == 0, (q, ba, bm, bn)


def test_general_coefficient_bruteforce_matches_oracle():
    ctx = F(3, 2)
    field = oracle_field(3, 2, ctx.spec.modulus)
    pw = field.pow_table(9)
    for a in range(8):
        for b in range(8):
            for m in range(1, 8):
                for n in range(m + 1, 9):
                    got = is_perm_bruteforce(ctx, a, b, m, n)
                    want = oracle_is_perm(
                        field, int(ctx.exp[a]), int(ctx.exp[b]), m, n, pw
                    )
                    assert got == want


# ---------------------------------------------------------------------------
# enumeration


def test_enumerate_f5_empty_f7_nonempty():
    assert len(enumerate_generators(F(5))) == 0
    gs = enumerate_generators(F(7))
    assert len(gs) > 0
    pairs = {(b.m, b.n) for b in gs.binomials()}
    assert (1, 4) in pairs  # the 3x + x^4 class


def test_enumerated_classes_match_literal_sweep():
    """Class representatives reproduce the brute-force sweep exactly:
    a literal (a, m, n) permutes iff its class representative is listed."""
    for (q, p, e) in prime_powers_between(3, 32):
        ctx = F(p, e)
        field = oracle_field(p, e, ctx.spec.modulus)
        literal = oracle_all_perm_binomials(field)
        classes = {(b.a % b.s, b.m, b.n) for b in iter_class_binomials(ctx)}
        collapsed = set()
        for (a_enc, m, n) in literal:
            a = from_encoding(ctx, a_enc)
            s = math.gcd(n - m, ctx.n1)
            collapsed.add((a % s, m, n))
        assert classes == collapsed, q
        assert class_count(ctx) == len(classes)


def test_no_class_binomial_induces_identity():
    for (q, p, e) in prime_powers_between(3, 64):
        ctx = F(p, e)
        ident = np.arange(ctx.n1)
        for b in iter_class_binomials(ctx):
            ok, images = kernels.binomial_images(ctx.zech, ctx.n1, b.a, b.m, b.n)
            assert ok
            assert not np.array_equal(images, ident), (q, b)


def test_distinct_classes_induce_distinct_permutations():
    for (q, p, e) in prime_powers_between(3, 32):
        ctx = F(p, e)
        seen = set()
        for b in iter_class_binomials(ctx):
            key = kernels.binomial_images(ctx.zech, ctx.n1, b.a, b.m, b.n)[1].tobytes()
            assert key not in seen
            seen.add(key)


def test_scalar_equivalence_soundness():
    """a and a*c^(-k) produce permutations simultaneously."""
    rng = np.random.default_rng(7)
    for (q, p, e) in prime_powers_between(7, 81):
        ctx = F(p, e)
        n1 = ctx.n1
        for _ in range(20):
            m = int(rng.integers(1, n1 - 1))
            n = int(rng.integers(m + 1, n1 + 1))
            a = int(rng.integers(0, n1))
            c = int(rng.integers(0, n1))
            b1 = make_binomial(ctx, a, m, n)
            b2 = make_binomial(ctx, (a - c * b1.k) % n1, m, n)
            assert is_perm_reduced(ctx, b1) == is_perm_reduced(ctx, b2)


# ---------------------------------------------------------------------------
# families


def test_family_additive_f9_counts():
    ctx = F(3, 2)
    valid = [a for a in range(8) if family_additive(ctx, 3, a) is not None]
    assert len(valid) == 4  # q - 1 - (q-1)/(r-1) = 8 - 4
    one_ = from_encoding(ctx, 1)
    assert family_additive(ctx, 3, one_) is None  # 1^4 = 1
    for a in valid:
        b = family_additive(ctx, 3, a)
        assert b.m == 1 and b.n == 3
        assert b.a == neg(ctx, a)
        assert is_perm_bruteforce(ctx, b.a, 0, b.m, b.n)


def test_family_additive_f4_empty():
    ctx = F(2, 2)
    assert all(family_additive(ctx, 2, a) is None for a in range(3))


def test_family_additive_bad_shape():
    with pytest.raises(BadFieldShape):
        family_additive(F(7), 7, 1)
    with pytest.raises(BadFieldShape):
        family_additive(F(3, 2), 2, 1)


@pytest.mark.parametrize("r", [2, 3, 4, 5, 7])
def test_family_additive_completeness_small(r):
    """x^r - a*x permutes iff a^((q-1)/(r-1)) != 1, both directions."""
    from binomgroup.ffield import one, pow_
    from binomgroup.intmath import prime_power_decompose

    p0, j = prime_power_decompose(r)
    k = 2
    while r**k <= 343:
        ctx = build_field(p0, j * k)
        q = ctx.q
        crit = (q - 1) // (r - 1)
        expected = {a for a in range(q - 1) if pow_(ctx, a, crit) != one(ctx)}
        got = {a for a in range(q - 1) if family_additive(ctx, r, a) is not None}
        assert got == expected
        assert len(got) == q - 1 - (q - 1) // (r - 1)
        for a in got:
            fb = family_additive(ctx, r, a)
            assert is_perm_bruteforce(ctx, fb.a, 0, fb.m, fb.n)
        # other direction: no rejected coefficient permutes
        for a in set(range(q - 1)) - got:
            nb = make_binomial(ctx, neg(ctx, a), 1, r)
            assert not is_perm_reduced(ctx, nb)
        k += 1


def test_family_tz_f25_counts():
    ctx = F(5, 2)
    valid = [a for a in range(24) if family_tz(ctx, a) is not None]
    assert len(valid) == 2 * (5 - 1)
    one_ = from_encoding(ctx, 1)
    assert family_tz(ctx, one_) is None
    for a in valid:
        b = family_tz(ctx, a)
        assert (b.m, b.n) == (1, 7)
        assert is_perm_bruteforce(ctx, a, 0, 1, 7)


def test_family_tz_validation():
    with pytest.raises(BadFieldShape):
        family_tz(F(5), 1)
    with pytest.raises(BadCongruence):
        family_tz(F(7, 2), 1)  # 7 = 1 mod 3
    with pytest.raises(DegreeOverflow):
        family_tz(F(2, 2), 1)


# ---------------------------------------------------------------------------
# counting


def test_count_T_f9():
    ctx = F(3, 2)
    res = count_T(ctx, 1, 3)
    # 4 nonzero coefficients (the additive family for r = 3) plus a = 0,
    # which leaves the cube map, a bijection of F_9
    assert res.count == 5
    assert res.s == (ctx.q - 1) // math.gcd(2, ctx.q - 1)


def test_count_T_matches_bruteforce():
    for (q, p, e) in prime_powers_between(7, 49):
        ctx = F(p, e)
        n1 = ctx.n1
        for (m, n) in [(1, 1 + n1 // s) for s in divisors(n1) if 1 < s <= 8]:
            if not (0 < m < n < q):
                continue
            if math.gcd(math.gcd(m, n), n1) != 1:
                continue
            brute = sum(
                1 for a in range(n1) if is_perm_bruteforce(ctx, a, 0, m, n)
            ) + (1 if math.gcd(n, n1) == 1 else 0)
            assert count_T(ctx, m, n).count == brute, (q, m, n)


def test_count_T_bad_gcd():
    ctx = F(7)
    with pytest.raises(BadGcd):
        count_T(ctx, 2, 4)


def test_count_N_examples():
    assert count_N(F(7), 2) >= 1
    assert count_N(F(5), 2) == 0
    assert count_N(F(5, 2), 8) == 0  # no gap-3 binomial over F_25
    with pytest.raises(BadDivisor):
        count_N(F(7), 4)


def test_keyprop_examples():
    ctx = F(13)
    res = keyprop_count(ctx, 4, 3)
    assert 0 <= res.count <= 4
    res7 = keyprop_count(F(7), 3, 2)
    assert res7.count <= 3
    with pytest.raises(BadDivisor):
        keyprop_count(ctx, 4, 4)  # d | k rejected
    with pytest.raises(BadDivisor):
        keyprop_count(ctx, 4, 5)  # k must divide q-1


def test_keyprop_against_bruteforce():
    from binomgroup.ffield import add, mul, pow_

    for (q, p, e) in prime_powers_between(7, 64):
        ctx = F(p, e)
        n1 = ctx.n1
        for d in divisors(n1):
            if d == 1 or d == n1:
                continue
            for k in divisors(n1):
                if k == n1 or k % d == 0:
                    continue
                s = n1 // d
                mu = [j * s for j in range(d)]
                brute = 0
                for a in range(n1):
                    cosets = set()
                    good = True
                    for z in mu:
                        v = add(ctx, pow_(ctx, z, k + 1), mul(ctx, a, z))
                        if v == ZERO:
                            good = False
                            break
                        cosets.add(v % s)
                    if good and len(cosets) == 1:
                        brute += 1
                res = keyprop_count(ctx, d, k)
                assert res.count == brute, (q, d, k)
                assert res.count <= d


# ---------------------------------------------------------------------------
# block scan and parity scan


def test_block_scan_matches_permutation_level():
    """Signature-level block scan == checking every literal binomial."""
    from binomgroup.permgroup import preserves_mod_classes

    for (q, p, e) in prime_powers_between(7, 49):
        ctx = F(p, e)
        field = oracle_field(p, e, ctx.spec.modulus)
        literal = oracle_all_perm_binomials(field)
        if not literal:
            continue
        n1 = ctx.n1
        perms = []
        for (a_enc, m, n) in literal:
            a = from_encoding(ctx, a_enc)
            perms.append(kernels.binomial_images(ctx.zech, n1, a, m, n)[1])
        scan = block_preserved_divisors(ctx)
        for dd in divisors(n1):
            e_cls = n1 // dd
            expected = all(
                preserves_mod_classes(pm, e_cls)[0] for pm in perms
            )
            assert (dd in scan.preserved) == expected, (q, dd)


def test_parity_scan_matches_literal_sweep():
    for (q, p, e) in prime_powers_between(7, 49):
        ctx = F(p, e)
        field = oracle_field(p, e, ctx.spec.modulus)
        literal = oracle_all_perm_binomials(field)
        if not literal:
            continue
        any_odd = False
        for (a_enc, m, n) in literal:
            a = from_encoding(ctx, a_enc)
            images = kernels.binomial_images(ctx.zech, ctx.n1, a, m, n)[1]
            if naive_parity(images) == 1:
                any_odd = True
                break
        assert any_odd_class_binomial(ctx) == any_odd, q


def test_realizable_gap_gcds_f7():
    ctx = F(7)
    assert realizable_gap_gcds(ctx) == [3]
    assert realizable_gap_gcds(ctx, stop_at_first=True) == [3]
