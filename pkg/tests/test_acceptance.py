"""Acceptance criteria, one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s``.  Two criteria are
expected red on current mathematics and are documented as source-data
defects (see the repository notes): the headline symmetric-group count
below 5000 is 23, not 18 (the quoted figure matches the odd-q subset
exactly), and the staged primitivity replay cannot finish for r in
{5, 11} because no binomial with the required gap exists over F_25 or
F_121.  Everything else must pass.
"""

import math

import numpy as np
import pytest

from binomgroup.backend import kernels
from binomgroup.binomial import (
    check_count_lower_bound,
    class_count,
    count_N,
    enumerate_generators,
    family_additive,
    family_tz,
    is_perm_bruteforce,
    is_perm_reduced,
    iter_class_binomials,
    keyprop_count,
    make_binomial,
)
from binomgroup.classify import (
    SYMMETRIC,
    TRIVIAL,
    UNDETERMINED,
    decide_group,
    full_group_order,
    mz_scan,
    survey,
    verify_prim_pipeline,
)
from binomgroup.ffield import build_field
from binomgroup.intmath import divisors, prime_power_decompose, prime_powers_between
from binomgroup.permgroup import perm_from_binomial, scalar_cycle

from oracles import bfs_closure


def report(num: int, ok: bool, detail: str) -> bool:
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


# ---------------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_01_vr18_count():
    """Exactly 18 prime powers 3 <= q < 5000 with the full symmetric group;
    no Undetermined verdicts."""
    records = survey(3, 4999, jobs=2)
    hits = sorted(r.q for r in records if r.verdict == SYMMETRIC)
    undetermined = [r.q for r in records if r.verdict == UNDETERMINED]
    trivial_bad = [r.q for r in records if r.verdict == TRIVIAL and r.generator_classes]
    detail = (
        f"{len(hits)} symmetric-group values below 5000: {hits}; "
        f"{len(undetermined)} undetermined"
    )
    ok_und = report(1, not undetermined, "no q resolved as Undetermined")
    assert ok_und, undetermined
    assert not trivial_bad
    odd_hits = [q for q in hits if q % 2 == 1]
    ok = report(1, len(hits) == 18, detail)
    assert ok, (
        f"expected exactly 18, found {len(hits)}: {hits}. The odd-q subset has "
        f"exactly {len(odd_hits)} entries ({odd_hits}); the five extras are the "
        f"characteristic-2 fields, each independently certified (see notes)."
    )


def test_criterion_02_mersenne_trivial():
    counts = {q: class_count(build_field(*prime_power_decompose(q))) for q in (8, 32)}
    ok = report(2, counts == {8: 0, 32: 0}, f"binomial counts over F_8/F_32: {counts}")
    assert ok


def test_criterion_03_additive_family_complete():
    from binomgroup.ffield import neg, one, pow_

    checked = 0
    for r in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17):
        pe = prime_power_decompose(r)
        k = 2
        while r**k <= 343:
            ctx = build_field(pe[0], pe[1] * k)
            q = ctx.q
            want = {
                a for a in range(q - 1) if pow_(ctx, a, (q - 1) // (r - 1)) != one(ctx)
            }
            got = {a for a in range(q - 1) if family_additive(ctx, r, a) is not None}
            assert got == want, (r, k)
            assert len(got) == q - 1 - (q - 1) // (r - 1), (r, k)
            for a in got:
                fb = family_additive(ctx, r, a)
                assert is_perm_bruteforce(ctx, fb.a, 0, fb.m, fb.n)
            for a in sorted(set(range(q - 1)) - got):
                # x^r - a*x with a rejected: must not permute
                assert not is_perm_reduced(ctx, make_binomial(ctx, neg(ctx, a), 1, r))
            checked += 1
            k += 1
    ok = report(3, True, f"{checked} fields r^k <= 343, both directions exact")
    assert ok


def test_criterion_04_order6_family_complete():
    total = {}
    for r in (5, 11, 17, 23, 29):
        ctx = build_field(r, 2)
        valid = [a for a in range(ctx.n1) if family_tz(ctx, a) is not None]
        for a in valid:
            assert is_perm_bruteforce(ctx, a, 0, 1, r + 2)
        # completeness: no other coefficient works for the (1, r+2) pair
        for a in set(range(ctx.n1)) - set(valid):
            assert not is_perm_reduced(ctx, make_binomial(ctx, a, 1, r + 2))
        total[r] = len(valid)
    want = {r: 2 * (r - 1) for r in total}
    ok = report(4, total == want, f"valid coefficient counts {total}")
    assert ok


def test_criterion_05_small_gap_counts_and_bound():
    failures = []
    for (q, p, e) in prime_powers_between(7, 2000):
        if q % 2 == 0:
            continue
        if count_N(build_field(p, e), 2) < 1:
            failures.append(q)
    assert not failures, failures
    bound_failures = []
    for (q, p, e) in prime_powers_between(4, 2048):
        ctx = build_field(p, e)
        for s in (2, 4, 8):
            if (q - 1) % s != 0:
                continue
            ok, lhs, rhs = check_count_lower_bound(ctx, 1, 1 + (q - 1) // s)
            if not ok:
                bound_failures.append((q, s, lhs, rhs))
    ok = report(
        5,
        not failures and not bound_failures,
        "count_N(q,2) >= 1 for odd 7 <= q <= 2000; analytic floor holds to 1e-6 "
        "for q <= 2048 at s in {2,4,8}",
    )
    assert ok, bound_failures


def test_criterion_06_coset_trap_bound():
    checked = 0
    for (q, p, e) in prime_powers_between(3, 121):
        ctx = build_field(p, e)
        n1 = ctx.n1
        for d in divisors(n1):
            if d == 1 or d == n1:
                continue
            for k in divisors(n1):
                if k == n1 or k % d == 0:
                    continue
                res = keyprop_count(ctx, d, k)
                assert res.count <= d, (q, d, k)
                checked += 1
    ok = report(6, True, f"{checked} (q, d, k) triples, trap count <= d throughout")
    assert ok


def test_criterion_07_staged_primitivity():
    results = {}
    for r in (5, 11, 29):
        rep = verify_prim_pipeline(r)
        s1, s2, s3 = rep.stages
        assert all((r - 1) % dd == 0 for dd in s1.survivors), r
        assert all(2 % dd == 0 for dd in s2.survivors), r
        results[r] = rep.final_survivors
    detail = f"final survivors {results} (stage-1 | r-1 and stage-2 | 2 hold)"
    ok = report(7, all(v == (1,) for v in results.values()), detail)
    assert ok, (
        f"final survivors {results}: no gap-(q-1)/8 binomial exists over F_25 or "
        f"F_121 (count_N(q, 8) = 0, verified independently), so the replay cannot "
        f"eliminate the 2-element-coset partition for r in {{5, 11}}; r = 29 "
        f"completes. See notes."
    )


@pytest.mark.slow
def test_criterion_08_oracle_equivalence():
    # exhaustive below 64
    mism = 0
    for (q, p, e) in prime_powers_between(3, 64):
        ctx = build_field(p, e)
        n1 = ctx.n1
        for m in range(1, n1):
            for n in range(m + 1, n1 + 1):
                for a in range(n1):
                    b = make_binomial(ctx, a, m, n)
                    if is_perm_reduced(ctx, b) != is_perm_bruteforce(ctx, a, 0, m, n):
                        mism += 1
    assert mism == 0
    # 1e5 pseudo-random binomials per prime power up to 512
    for (q, p, e) in prime_powers_between(65, 512):
        ctx = build_field(p, e)
        bad, ba, bm, bn = kernels.random_equiv_trials(ctx.zech, ctx.n1, 100_000, q)
        assert bad == 0, (q, ba, bm, bn)
        mism += int(bad)
    ok = report(8, mism == 0, "reduced == brute force, exhaustive <= 64 and 1e5 random per q <= 512")
    assert ok


def test_criterion_09_closure_ground_truth():
    expectations = {}
    for q in (3, 4, 5, 7, 8, 9, 11, 13):
        pe = prime_power_decompose(q)
        ctx = build_field(*pe)
        verdict = decide_group(q)
        perms = [perm_from_binomial(ctx, b) for b in iter_class_binomials(ctx)]
        if not perms:
            assert verdict.kind == TRIVIAL, q
            expectations[q] = 1
            continue
        size, complete = bfs_closure(perms + [scalar_cycle(ctx)], cap=10**7)
        order, exact = full_group_order(ctx)
        assert exact
        if complete:
            assert order == size, (q, order, size)
        else:
            assert order > 10**7, q
        assert verdict.evidence.order == order, q
        n1 = q - 1
        if verdict.kind == SYMMETRIC:
            assert order == math.factorial(n1), q
        else:
            assert order < math.factorial(n1), q
        expectations[q] = order
    ok = report(9, True, f"closure orders match: {expectations}")
    assert ok


def test_criterion_10_sieve_consistency():
    from binomgroup.sieve import (
        congruence_primes_by_crt,
        congruence_primes_by_sieve,
        repunit_tail_count,
        square_is_repunit_free,
    )

    a = congruence_primes_by_sieve(10**6)
    b = congruence_primes_by_crt(10**6)
    assert a.tolist() == b.tolist()
    qa = [int(r) for r in a if square_is_repunit_free(int(r))]
    qb = [int(r) for r in b if square_is_repunit_free(int(r))]
    assert qa == qb
    for N in (16, 100, 10**4, 10**6, 10**8):
        count, bound = repunit_tail_count(N)
        assert count <= bound, N
    ok = report(
        10,
        True,
        f"both qualifying-prime routes agree on {len(a)} congruence primes to 1e6; "
        f"tail counts below the ceiling through 1e8",
    )
    assert ok


@pytest.mark.slow
def test_criterion_11_minimum_gap_threshold():
    rep = mz_scan(2000)
    bad = [row for row in rep.rows if row.p >= 7 and not row.ok]
    none_found = [row.p for row in rep.rows if row.p >= 7 and row.min_gap_gcd is None]
    ok = report(
        11,
        not bad,
        f"min gap gcd exceeds p/(2 ln p) for every prime 7 <= p <= 2000 "
        f"({len(rep.rows)} primes, {len(none_found)} without binomials)",
    )
    assert ok, [(row.p, row.min_gap_gcd, row.threshold) for row in bad]
