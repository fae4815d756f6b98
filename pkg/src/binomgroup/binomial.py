"""Permutation binomials a*x^m + x^n over a tabulated field.

A binomial with both exponents in (0, q) fixes 0, so when it permutes the
field it also permutes the multiplicative group, and that permutation is
what the rest of the engine consumes.  The trailing coefficient is
normalized to 1 throughout: b*(a'*x^m + x^n) differs from the normalized
map by the scalar map x -> b*x, which lies in the generated group as soon
as any binomial permutation exists at all (quotients of a binomial pair by
itself scaled yield every scalar map).

Reduction data stored with each binomial, for gap k = n - m:

* ``s = gcd(k, q-1)``   index of the subgroup (x^k lands in s-th powers),
* ``d = (q-1) // s``    size of the subgroup of s-th powers,
* ``t = k // s``        the unit part of the gap, gcd(t, d) = 1.

The permutation criterion then reads: gcd(m, s) = 1 and
``z -> z^M (a + z)^s`` bijects the d-element subgroup, with
``M = m * t^(-1) mod d``.  Its cost is O(d) instead of O(q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import (
    BadCongruence,
    BadDivisor,
    BadFieldShape,
    BadGcd,
    DegreeOverflow,
    ExponentRange,
    NotAPermutation,
)
from .ffield import ZERO, FieldCtx, element_order, neg, one, pow_
from .intmath import divisors, factorize, prime_power_decompose


@dataclass(frozen=True)
class Binomial:
    """The map a*x^m + x^n in log coordinates (a = log of the coefficient),
    together with its gap reduction data k, s, d, t."""

    a: int
    m: int
    n: int
    k: int
    s: int
    d: int
    t: int

    def exponent_pair(self) -> tuple[int, int]:
        return self.m, self.n


def make_binomial(ctx: FieldCtx, a: int, m: int, n: int) -> Binomial:
    """Validate exponents and attach reduction data."""
    q = ctx.q
    if not (0 < m < n < q):
        raise ExponentRange(f"need 0 < m < n < q, got m={m}, n={n}, q={q}")
    if a == ZERO:
        raise ValueError("binomial coefficient must be nonzero")
    n1 = ctx.n1
    k = n - m
    s = math.gcd(k, n1)
    d = n1 // s
    return Binomial(a=a % n1, m=m, n=n, k=k, s=s, d=d, t=k // s)


@dataclass(frozen=True, eq=False)
class GenSet:
    """Deduplicated generating permutations for one field: one literal
    binomial witness per passing (subgroup split, exponent residue,
    coefficient class) signature."""

    field: FieldCtx
    gens: tuple[tuple[Binomial, np.ndarray], ...]
    includes_scalar: bool = False

    def perms(self) -> list[np.ndarray]:
        return [p for _, p in self.gens]

    def binomials(self) -> list[Binomial]:
        return [b for b, _ in self.gens]

    def __len__(self) -> int:
        return len(self.gens)


# ---------------------------------------------------------------------------
# permutation tests


def is_perm_bruteforce(ctx: FieldCtx, a: int, b: int, m: int, n: int) -> bool:
    """Direct bijectivity check of a*x^m + b*x^n over all of F_q."""
    if not (0 < m < n < ctx.q):
        raise ExponentRange(f"need 0 < m < n < q, got m={m}, n={n}")
    if a == ZERO or b == ZERO:
        raise ValueError("coefficients must be nonzero")
    return bool(kernels.bruteforce_perm_check(ctx.zech, ctx.n1, a, b, m, n))


def is_perm_reduced(ctx: FieldCtx, binom: Binomial) -> bool:
    """Subgroup-sized permutation test; agrees with is_perm_bruteforce."""
    if binom.s == 1:
        # gap coprime to q-1: the k-th root of -a maps to 0, colliding with 0
        return False
    if math.gcd(binom.m, binom.s) != 1:
        return False
    M = (binom.m * pow(binom.t, -1, binom.d)) % binom.d
    return bool(
        kernels.unit_subgroup_test(ctx.zech, ctx.n1, binom.s, binom.d, binom.a, M)
    )


def binomial_perm(ctx: FieldCtx, binom: Binomial) -> np.ndarray:
    """Log-coordinate permutation induced on the nonzero elements."""
    ok, images = kernels.binomial_images(ctx.zech, ctx.n1, binom.a, binom.m, binom.n)
    if not ok:
        raise NotAPermutation(f"{binom} does not induce a permutation")
    perm = images.astype(np.int32)
    perm.setflags(write=False)
    return perm


# ---------------------------------------------------------------------------
# enumeration


def _witness_exponents(n1: int, d: int, s: int, M: int, shared_primes) -> tuple[int, int] | None:
    """Smallest literal (t, m) realizing a passing signature.

    Needs gcd(t, d) = 1, m ≡ M*t (mod d), gcd(m, s) = 1 and m + s*t <= n1.
    Returns None when no literal exponent pair exists (the signature then
    corresponds to no actual binomial and is dropped).
    """
    for t in range(1, d):
        if math.gcd(t, d) != 1:
            continue
        c = (M * t) % d
        # primes dividing both s and d pin m mod them to c; reject early
        if any(c % ell == 0 for ell in shared_primes):
            continue
        k = s * t
        m = c if c else d
        while m + k <= n1:
            if math.gcd(m, s) == 1:
                return t, m
            m += d
    return None


def _signature_witnesses(ctx: FieldCtx) -> list[Binomial]:
    """One literal binomial per passing signature, canonically ordered.

    Signatures are triples (d, M, alpha): the divisor split d*s = q-1, the
    reduced exponent M on the d-element subgroup, and the coefficient class
    a = g^alpha modulo s-th powers.  The subgroup test is invariant on
    coefficient classes and sees the exponents only through (d, M), so this
    witness list touches every signature exactly once.  It is a compact
    sample of the binomial permutations, not a generating set of their
    group: distinct literal exponent pairs with the same signature can
    genuinely enlarge the group, which is why group-exact computations
    stream ``iter_class_binomials`` instead.
    """
    n1 = ctx.n1
    out: list[Binomial] = []
    for d in divisors(n1):
        s = n1 // d
        if d < 2 or s < 2:
            continue
        passing = kernels.scan_signatures(ctx.zech, n1, s, d)
        if not passing.any():
            continue
        shared = [ell for ell in factorize(s) if d % ell == 0]
        for alpha in range(s):
            for M in np.nonzero(passing[alpha])[0]:
                tw = _witness_exponents(n1, d, s, int(M), shared)
                if tw is None:
                    continue
                t, m = tw
                k = s * t
                out.append(Binomial(a=alpha, m=m, n=m + k, k=k, s=s, d=d, t=t))
    out.sort(key=lambda b: (b.k, b.m, b.a))
    return out


def enumerate_generators(ctx: FieldCtx) -> GenSet:
    """Signature-representative binomial permutations of F_q*.

    Empty iff no binomial permutes the field at all.  Every listed entry is
    a genuine permutation (asserted); no two entries induce the same
    permutation of the nonzero elements.  See ``_signature_witnesses`` for
    what the list does and does not guarantee.
    """
    if ctx.q < 3:
        raise ValueError("enumeration needs q >= 3")
    gens: list[tuple[Binomial, np.ndarray]] = []
    seen: set[bytes] = set()
    for b in _signature_witnesses(ctx):
        perm = binomial_perm(ctx, b)
        key = perm.tobytes()
        if key in seen:  # distinct (a, m, n) never collide; guard anyway
            continue
        seen.add(key)
        gens.append((b, perm))
    return GenSet(field=ctx, gens=tuple(gens), includes_scalar=False)


def iter_class_binomials(ctx: FieldCtx):
    """Every permutation binomial up to scalar equivalence, lazily.

    Two binomials are scalar-equivalent when they differ by scalar maps on
    both sides; that keeps the literal exponents (m, n) and moves the
    coefficient within its class modulo s-th powers, so the stream yields
    one coefficient-class representative for every literal exponent pair.
    Together with the scalar cycle the streamed permutations generate the
    full binomial permutation group; the count can reach millions on
    divisor-rich fields, hence a generator.
    """
    n1 = ctx.n1
    for d in divisors(n1):
        s = n1 // d
        if d < 2 or s < 2:
            continue
        passing = kernels.scan_signatures(ctx.zech, n1, s, d)
        if not passing.any():
            continue
        for alpha in range(s):
            for M in np.nonzero(passing[alpha])[0]:
                M = int(M)
                for t in range(1, d):
                    if math.gcd(t, d) != 1:
                        continue
                    k = s * t
                    c = (M * t) % d
                    m = c if c > 0 else d
                    while m + k <= n1:
                        if math.gcd(m, s) == 1:
                            yield Binomial(a=alpha, m=m, n=m + k, k=k, s=s, d=d, t=t)
                        m += d


def class_count(ctx: FieldCtx) -> int:
    """Number of scalar-equivalence classes of permutation binomials."""
    n1 = ctx.n1
    total = 0
    for d in divisors(n1):
        s = n1 // d
        if d < 2 or s < 2:
            continue
        passing = kernels.scan_signatures(ctx.zech, n1, s, d)
        if passing.any():
            total += int(kernels.count_class_triples_split(n1, s, d, passing))
    return total


@dataclass(frozen=True)
class BlockScan:
    """Coset partitions preserved by every permutation binomial (the scalar
    cycle preserves all of them, so these are the group-invariant ones)."""

    degree: int
    preserved: tuple[int, ...]
    breakers: dict[int, tuple[int, int]]  # divisor -> (a_log, k) witness


def block_preserved_divisors(ctx: FieldCtx) -> BlockScan:
    """Exact invariant-partition scan over all realizable (a-class, gap)
    pairs.

    A binomial x^m (a + x^k) maps the class of i mod E to the class of
    i*m + log(a + g^(i*k)), so whether the partition into classes mod E
    survives depends only on (a, k): the scan never needs the m values.
    Coefficients are tested per class (replacing a by a*c^(-k) shifts the
    argument of the class function and adds a constant, preserving
    class-constancy).
    """
    n1 = ctx.n1
    alphas: list[int] = []
    ks: list[int] = []
    for d in divisors(n1):
        s = n1 // d
        if d < 2 or s < 2:
            continue
        passing = kernels.scan_signatures(ctx.zech, n1, s, d)
        if not passing.any():
            continue
        pairs = kernels.realizable_block_pairs_split(n1, s, d, passing)
        for alpha, t in zip(*np.nonzero(pairs)):
            alphas.append(int(alpha))
            ks.append(s * int(t))
    a_arr = np.asarray(alphas, dtype=np.int64)
    k_arr = np.asarray(ks, dtype=np.int64)
    preserved = [1]
    breakers: dict[int, tuple[int, int]] = {}
    for dd in divisors(n1):
        if dd == 1 or dd == n1:
            continue
        idx = int(kernels.block_break_scan(ctx.zech, n1, n1 // dd, a_arr, k_arr))
        if idx == -2:
            raise NotAPermutation("zero value on a realizable class; kernel bug")
        if idx >= 0:
            breakers[dd] = (int(a_arr[idx]), int(k_arr[idx]))
        else:
            preserved.append(dd)
    preserved.append(n1)
    return BlockScan(degree=n1, preserved=tuple(sorted(set(preserved))), breakers=breakers)


def any_odd_class_binomial(ctx: FieldCtx) -> bool:
    """Does some class-representative binomial induce an odd permutation?

    Conjugating by scalar maps preserves parity, so for odd degree this
    decides whether the whole binomial group sits inside the alternating
    group.  Scans every class; exits on the first odd one.
    """
    n1 = ctx.n1
    for d in divisors(n1):
        s = n1 // d
        if d < 2 or s < 2:
            continue
        passing = kernels.scan_signatures(ctx.zech, n1, s, d)
        if not passing.any():
            continue
        res = int(kernels.parity_scan_split(ctx.zech, n1, s, d, passing))
        if res == -2:
            raise NotAPermutation("zero value on a passing signature; kernel bug")
        if res == 1:
            return True
    return False


def realizable_gap_gcds(ctx: FieldCtx, stop_at_first: bool = False) -> list[int]:
    """Sorted values of gcd(n-m, q-1) over all permutation binomials.

    Scans divisor splits in increasing s; with ``stop_at_first`` returns as
    soon as the smallest realizable s is known.
    """
    n1 = ctx.n1
    out = []
    for s in divisors(n1):
        d = n1 // s
        if s < 2 or d < 2:
            continue
        passing = kernels.scan_signatures(ctx.zech, n1, s, d)
        if not passing.any():
            continue
        if kernels.realizable_block_pairs_split(n1, s, d, passing).any():
            out.append(s)
            if stop_at_first:
                return out
    return out


# ---------------------------------------------------------------------------
# explicit families


def family_additive(ctx: FieldCtx, r: int, a: int) -> Binomial | None:
    """x^r - a*x on F_{r^k}: a permutation iff a is not an (r-1)-th power,
    i.e. a^((q-1)/(r-1)) != 1.  Returns None for invalid a."""
    if a == ZERO:
        raise ValueError("a must be nonzero")
    p, e, q = ctx.spec.p, ctx.spec.e, ctx.q
    rp = prime_power_decompose(r) if r >= 2 else None
    if rp is None or rp[0] != p or e % rp[1] != 0 or r >= q:
        raise BadFieldShape(f"q = {q} is not a proper power of r = {r}")
    if pow_(ctx, a, (q - 1) // (r - 1)) == one(ctx):
        return None  # a is an (r-1)-th power, the kernel of x^r - a*x is nontrivial
    return make_binomial(ctx, neg(ctx, a), 1, r)


def family_tz(ctx: FieldCtx, a: int) -> Binomial | None:
    """x^(r+2) + a*x on F_{r^2} for r = 2 mod 3: a permutation iff
    a^(r-1) has multiplicative order 6/gcd(r, 2).  None for invalid a."""
    if a == ZERO:
        raise ValueError("a must be nonzero")
    p, e, q = ctx.spec.p, ctx.spec.e, ctx.q
    if e % 2 != 0:
        raise BadFieldShape(f"q = {q} is not a square")
    r = p ** (e // 2)
    if r % 3 != 2:
        raise BadCongruence(f"r = {r} is not 2 mod 3")
    if r == 2:
        raise DegreeOverflow("r = 2 puts the top exponent at q")
    if element_order(ctx, pow_(ctx, a, r - 1)) != 6 // math.gcd(r, 2):
        return None
    return make_binomial(ctx, a, 1, r + 2)


# ---------------------------------------------------------------------------
# counting


@dataclass(frozen=True)
class CoefficientCount:
    """Number of coefficients a making a*x^m + x^n a permutation, together
    with s = (q-1)/gcd(n-m, q-1), the count's natural scale."""

    count: int
    s: int


def count_T(ctx: FieldCtx, m: int, n: int) -> CoefficientCount:
    """Exact count of a in F_q (zero included) with a*x^m + x^n a
    permutation of F_q; requires gcd(m, n, q-1) = 1."""
    if not (0 < m < n):
        raise ExponentRange(f"need 0 < m < n, got {m}, {n}")
    n1 = ctx.n1
    if math.gcd(math.gcd(m, n), n1) != 1:
        raise BadGcd("count requires gcd(m, n, q-1) = 1")
    gap_gcd = math.gcd(n - m, n1)
    s_paper = n1 // gap_gcd
    # a = 0 leaves the monomial x^n
    count = 1 if math.gcd(n, n1) == 1 else 0
    d = s_paper  # subgroup size for this gap
    sub_index = gap_gcd
    if math.gcd(m, sub_index) == 1:
        t = (n - m) // sub_index
        M = (m * pow(t, -1, d)) % d
        per_class = 0
        for alpha in range(sub_index):
            if kernels.unit_subgroup_test(ctx.zech, n1, sub_index, d, alpha, M):
                per_class += 1
        # the test is invariant on coefficient classes of size d
        count += d * per_class
    return CoefficientCount(count=count, s=s_paper)


def count_N(ctx: FieldCtx, s: int) -> int:
    """Count of nonzero a with x*(a + x^((q-1)/s)) a permutation."""
    n1 = ctx.n1
    if s < 1 or n1 % s != 0:
        raise BadDivisor(f"s = {s} does not divide q-1 = {n1}")
    if s == n1:  # gap would be 1; never a permutation
        return 0
    total = count_T(ctx, 1, 1 + n1 // s)
    monomial = 1 if math.gcd(1 + n1 // s, n1) == 1 else 0
    return total.count - monomial


def prop3_lower_bound(q: int, s: int) -> float:
    """Floating-point lower bound for T/(s-1)! at the given s."""
    rq = math.sqrt(q)
    return (q - 2.0 * rq + 1.0) / s ** (s - 1) - (s - 3.0) * rq - 2.0


def check_count_lower_bound(ctx: FieldCtx, m: int, n: int, slack: float = 1e-6):
    """Compare the exact coefficient count against its analytic floor.

    Returns (ok, lhs, rhs); ok means T/(s-1)! >= rhs - slack.
    """
    res = count_T(ctx, m, n)
    lhs = res.count / float(math.factorial(res.s - 1))
    rhs = prop3_lower_bound(ctx.q, res.s)
    return lhs >= rhs - slack, lhs, rhs


@dataclass(frozen=True)
class CosetTrapCount:
    """Coefficients a for which x^(k+1) + a*x squeezes the whole d-element
    subgroup into a single coset (at most d of them can exist)."""

    count: int
    a_values: tuple[int, ...]


def keyprop_count(ctx: FieldCtx, d: int, k: int) -> CosetTrapCount:
    n1 = ctx.n1
    if d < 1 or n1 % d != 0 or k < 1 or n1 % k != 0:
        raise BadDivisor(f"d = {d} and k = {k} must divide q-1 = {n1}")
    if k % d == 0:
        raise BadDivisor(f"d = {d} divides k = {k}")
    hits = np.empty(n1, dtype=np.int64)
    cnt = int(kernels.keyprop_scan(ctx.zech, n1, d, k, hits))
    assert cnt <= d, f"coset trap count {cnt} exceeds d = {d}"
    return CosetTrapCount(count=cnt, a_values=tuple(int(a) for a in hits[:cnt]))
