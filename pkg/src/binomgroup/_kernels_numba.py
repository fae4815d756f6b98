"""Hot inner loops, numba-compiled.

All kernels work in discrete-log coordinates.  ``zech`` is the addition
table of the field: ``zech[i] = log(1 + g^i)`` with ``-1`` marking
``1 + g^i = 0``; ``n1 = q - 1``.  A nonzero field element is its log in
``[0, n1)``.

The binomial ``a*x^m + x^n`` is handled as ``x^m * (a + x^k)`` with
``k = n - m``, ``s = gcd(k, n1)``, ``d = n1 // s``.  It permutes the field
iff ``gcd(m, s) = 1`` and ``z -> z^M * (a + z)^s`` is a bijection of the
d-element subgroup ``{g^(j*s)}``, where ``M = m * t^-1 mod d`` and
``t = k // s``.  (Write f(x) = x^m h(x^s) with h(y) = a + y^t.  For c with
c^s = 1, f(cx) = c^m f(x), so f is injective within s-th-power cosets iff
gcd(m, s) = 1, and across cosets iff y -> y^m h(y)^s bijects the d-th
roots of unity; substituting y -> y^(t^-1 mod d) gives the form above.)
"""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = [
    "scan_signatures",
    "unit_subgroup_test",
    "bruteforce_perm_check",
    "binomial_images",
    "enumerate_all_binomials",
    "keyprop_scan",
    "random_equiv_trials",
    "count_class_triples_split",
    "realizable_block_pairs_split",
    "block_break_scan",
    "parity_scan_split",
    "perm_parity",
]


@njit(cache=True)
def scan_signatures(zech, n1, s, d):
    """Test every (a-class, reduced exponent) pair for one divisor split.

    Returns a uint8 matrix ``out[alpha, M]`` that is 1 iff
    ``z -> z^M * (g^alpha + z)^s`` bijects the d-element subgroup.
    """
    out = np.empty((s, d), dtype=np.uint8)
    shift = np.empty(d, dtype=np.int64)
    stamp = np.zeros(d, dtype=np.int64)
    for alpha in range(s):
        # shift[j] = log(g^alpha + g^(j*s)) reduced mod d, shared by all M
        anyzero = False
        for j in range(d):
            z = zech[(j * s - alpha) % n1]
            if z < 0:
                anyzero = True
                break
            shift[j] = (alpha + z) % d
        if anyzero:
            # a + z = 0 for some subgroup element: fails for every M
            for M in range(d):
                out[alpha, M] = 0
            continue
        for M in range(d):
            tag = alpha * d + M + 1
            ok = True
            for j in range(d):
                w = (shift[j] + M * j) % d
                if stamp[w] == tag:
                    ok = False
                    break
                stamp[w] = tag
            out[alpha, M] = 1 if ok else 0
    return out


@njit(cache=True)
def unit_subgroup_test(zech, n1, s, d, a_log, M):
    """Single bijectivity test of z -> z^M * (a + z)^s on the subgroup."""
    stamp = np.zeros(d, dtype=np.uint8)
    for j in range(d):
        z = zech[(j * s - a_log) % n1]
        if z < 0:
            return False
        w = ((a_log + z) % d + M * j) % d
        if stamp[w]:
            return False
        stamp[w] = 1
    return True


@njit(cache=True)
def bruteforce_perm_check(zech, n1, a_log, b_log, m, n):
    """Evaluate a*x^m + b*x^n at every nonzero point; True iff bijective.

    A zero value anywhere means a collision with the fixed point 0.
    """
    seen = np.zeros(n1, dtype=np.uint8)
    for i in range(n1):
        u = (a_log + i * m) % n1
        v = (b_log + i * n) % n1
        z = zech[(v - u) % n1]
        if z < 0:
            return False
        w = (u + z) % n1
        if seen[w]:
            return False
        seen[w] = 1
    return True


@njit(cache=True)
def binomial_images(zech, n1, a_log, m, n):
    """Log-coordinate permutation table of a*x^m + x^n on the nonzero field.

    Returns (ok, images); ok is False when the map hits zero or collides.
    """
    images = np.empty(n1, dtype=np.int64)
    seen = np.zeros(n1, dtype=np.uint8)
    ok = True
    for i in range(n1):
        u = (a_log + i * m) % n1
        v = (i * n) % n1
        z = zech[(v - u) % n1]
        if z < 0:
            ok = False
            images[i] = -1
            continue
        w = (u + z) % n1
        images[i] = w
        if seen[w]:
            ok = False
        seen[w] = 1
    return ok, images


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _invmod(t, d):
    # modular inverse for gcd(t, d) = 1, extended Euclid
    r0, r1 = d, t % d
    x0, x1 = 0, 1
    while r1:
        qt = r0 // r1
        r0, r1 = r1, r0 - qt * r1
        x0, x1 = x1, x0 - qt * x1
    return x0 % d


@njit(cache=True)
def _reduced_perm_check(zech, n1, a_log, m, n):
    k = n - m
    s = _gcd(k, n1)
    if s == 1:
        return False  # the k-th root of -a collides with 0
    if _gcd(m, s) != 1:
        return False
    d = n1 // s
    t = k // s
    M = (m * _invmod(t, d)) % d
    return unit_subgroup_test(zech, n1, s, d, a_log, M)


@njit(cache=True)
def enumerate_all_binomials(zech, n1, out):
    """Fill ``out`` with every (a_log, m, n) such that a*x^m + x^n permutes.

    Intended for small fields (ground-truth sweeps); returns the count, or
    -1 if ``out`` is too small.
    """
    cap = out.shape[0]
    cnt = 0
    for m in range(1, n1):
        for n in range(m + 1, n1 + 1):
            for a_log in range(n1):
                if bruteforce_perm_check(zech, n1, a_log, 0, m, n):
                    if cnt >= cap:
                        return -1
                    out[cnt, 0] = a_log
                    out[cnt, 1] = m
                    out[cnt, 2] = n
                    cnt += 1
    return cnt


@njit(cache=True)
def keyprop_scan(zech, n1, d, k, hits):
    """Count a with x^(k+1) + a*x mapping the d-subgroup into one coset.

    Cosets of the d-element subgroup are log residues mod s = n1/d; a zero
    value disqualifies (no coset contains 0).  The a-logs found are written
    to ``hits``; returns their number.
    """
    s = n1 // d
    cnt = 0
    for a_log in range(n1):
        coset = -1
        ok = True
        for j in range(d):
            u = ((k + 1) * j * s) % n1  # log of z^(k+1), z = g^(j*s)
            v = (a_log + j * s) % n1  # log of a*z
            z = zech[(v - u) % n1]
            if z < 0:
                ok = False
                break
            c = (u + z) % s
            if coset < 0:
                coset = c
            elif c != coset:
                ok = False
                break
        if ok:
            hits[cnt] = a_log
            cnt += 1
    return cnt


@njit(cache=True)
def count_class_triples_split(n1, s, d, passing):
    """Number of (coefficient class, m, n) triples of permutation binomials
    in one divisor split, given the signature pass matrix."""
    total = 0
    for alpha in range(s):
        for M in range(d):
            if passing[alpha, M] == 0:
                continue
            for t in range(1, d):
                if _gcd(t, d) != 1:
                    continue
                c = (M * t) % d
                k = s * t
                m = c if c > 0 else d
                while m + k <= n1:
                    if _gcd(m, s) == 1:
                        total += 1
                    m += d
    return total


@njit(cache=True)
def realizable_block_pairs_split(n1, s, d, passing):
    """Which (coefficient class alpha, gap unit t) pairs carry an actual
    binomial: out[alpha, t] = 1 iff some signature (alpha, M) passes and a
    literal exponent m exists for (M, t)."""
    out = np.zeros((s, d), dtype=np.uint8)
    for t in range(1, d):
        if _gcd(t, d) != 1:
            continue
        k = s * t
        for M in range(d):
            c = (M * t) % d
            m = c if c > 0 else d
            found = False
            while m + k <= n1:
                if _gcd(m, s) == 1:
                    found = True
                    break
                m += d
            if not found:
                continue
            for alpha in range(s):
                if passing[alpha, M]:
                    out[alpha, t] = 1
    return out


@njit(cache=True)
def block_break_scan(zech, n1, E, alphas, ks):
    """First candidate (a = g^alpha, gap k) whose map x^m (a + x^k) breaks
    the partition into log-residue classes mod E, or -1 if all preserve it.

    Whether classes are preserved does not depend on m: the image class of
    [i] is [i*m + psi(i)] with psi(i) = log(a + g^(i*k)), and i*m is
    class-periodic, so preservation is exactly class-constancy of psi
    mod E.  Returns -2 if a + g^(i*k) = 0 ever occurs, which is impossible
    for candidates that carry a permutation binomial.
    """
    ref = np.empty(E, dtype=np.int64)
    for idx in range(len(alphas)):
        alpha = alphas[idx]
        k = ks[idx]
        for i in range(n1):
            z = zech[(i * k - alpha) % n1]
            if z < 0:
                return -2
            val = (alpha + z) % E
            if i < E:
                ref[i] = val
            elif ref[i % E] != val:
                return idx
    return -1


@njit(cache=True)
def parity_scan_split(zech, n1, s, d, passing):
    """1 if some class-representative binomial in this split induces an odd
    permutation, 0 when all are even, -2 on a zero value (impossible)."""
    images = np.empty(n1, dtype=np.int64)
    visited = np.full(n1, -1, dtype=np.int64)
    stamp = 0
    for alpha in range(s):
        for M in range(d):
            if passing[alpha, M] == 0:
                continue
            for t in range(1, d):
                if _gcd(t, d) != 1:
                    continue
                c = (M * t) % d
                k = s * t
                m = c if c > 0 else d
                while m + k <= n1:
                    if _gcd(m, s) != 1:
                        m += d
                        continue
                    n = m + k
                    for i in range(n1):
                        u = (alpha + i * m) % n1
                        v = (i * n) % n1
                        z = zech[(v - u) % n1]
                        if z < 0:
                            return -2
                        images[i] = (u + z) % n1
                    cycles = 0
                    for i in range(n1):
                        if visited[i] == stamp:
                            continue
                        cycles += 1
                        j = i
                        while visited[j] != stamp:
                            visited[j] = stamp
                            j = images[j]
                    stamp += 1
                    if (n1 - cycles) % 2 == 1:
                        return 1
                    m += d
    return 0


@njit(cache=True)
def perm_parity(images):
    """Parity of a permutation table: 0 even, 1 odd."""
    n = len(images)
    visited = np.zeros(n, dtype=np.uint8)
    cycles = 0
    for i in range(n):
        if visited[i]:
            continue
        cycles += 1
        j = i
        while not visited[j]:
            visited[j] = 1
            j = images[j]
    return (n - cycles) % 2


@njit(cache=True)
def _xorshift(state):
    state ^= state >> np.uint64(12)
    state ^= state << np.uint64(25)
    state ^= state >> np.uint64(27)
    draw = np.int64((state * np.uint64(0x2545F4914F6CDD1D)) >> np.uint64(16))
    return state, draw


@njit(cache=True)
def random_equiv_trials(zech, n1, trials, seed):
    """Compare the reduced and brute-force permutation tests on random
    (a, m, n); returns (#mismatches, first bad a, first bad m, first bad n).
    """
    state = np.uint64(seed if seed > 0 else 1)
    bad = 0
    ba = np.int64(-1)
    bm = np.int64(-1)
    bn = np.int64(-1)
    for _ in range(trials):
        state, r0 = _xorshift(state)
        state, r1 = _xorshift(state)
        state, r2 = _xorshift(state)
        a_log = r0 % n1
        m = 1 + r1 % (n1 - 1)  # 1 <= m <= n1 - 1
        n = m + 1 + r2 % (n1 - m)  # m < n <= n1
        fast = _reduced_perm_check(zech, n1, a_log, m, n)
        slow = bruteforce_perm_check(zech, n1, a_log, 0, m, n)
        if fast != slow:
            if bad == 0:
                ba, bm, bn = a_log, m, n
            bad += 1
    return bad, ba, bm, bn
