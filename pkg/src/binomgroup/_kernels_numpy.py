"""Pure-numpy fallbacks for the hot kernels.

Same call signatures and results as ``_kernels_numba``; used when numba is
unavailable or disabled via ``BINOMGROUP_NUMBA=0``.  Vectorized where it
pays, plain loops elsewhere; correctness over speed.
"""

from __future__ import annotations

import math

import numpy as np

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

# Cap on the M-block so the (block x d) work matrix stays small.
_BLOCK_CELLS = 1 << 22


def scan_signatures(zech, n1, s, d):
    out = np.zeros((s, d), dtype=np.uint8)
    j = np.arange(d, dtype=np.int64)
    base = np.arange(d, dtype=np.int64)
    for alpha in range(s):
        z = zech[(j * s - alpha) % n1]
        if (z < 0).any():
            continue
        shift = (alpha + z) % d
        block = max(1, min(d, _BLOCK_CELLS // d))
        for lo in range(0, d, block):
            ms = np.arange(lo, min(lo + block, d), dtype=np.int64)
            psi = (shift[None, :] + ms[:, None] * j[None, :]) % d
            psi.sort(axis=1)
            out[alpha, ms] = (psi == base[None, :]).all(axis=1)
    return out


def unit_subgroup_test(zech, n1, s, d, a_log, M):
    j = np.arange(d, dtype=np.int64)
    z = zech[(j * s - a_log) % n1]
    if (z < 0).any():
        return False
    psi = ((a_log + z) % d + M * j) % d
    return np.bincount(psi, minlength=d).max() == 1


def bruteforce_perm_check(zech, n1, a_log, b_log, m, n):
    i = np.arange(n1, dtype=np.int64)
    u = (a_log + i * m) % n1
    v = (b_log + i * n) % n1
    z = zech[(v - u) % n1]
    if (z < 0).any():
        return False
    w = (u + z) % n1
    return np.bincount(w, minlength=n1).max() == 1


def binomial_images(zech, n1, a_log, m, n):
    i = np.arange(n1, dtype=np.int64)
    u = (a_log + i * m) % n1
    v = (i * n) % n1
    z = zech[(v - u) % n1]
    images = np.where(z < 0, -1, (u + z) % n1)
    ok = bool((z >= 0).all()) and np.bincount(
        np.maximum(images, 0), minlength=n1
    ).max() == 1
    return ok, images


def enumerate_all_binomials(zech, n1, out):
    cap = out.shape[0]
    cnt = 0
    i = np.arange(n1, dtype=np.int64)
    a = np.arange(n1, dtype=np.int64)
    for m in range(1, n1):
        for n in range(m + 1, n1 + 1):
            # rows: candidate a-logs, columns: evaluation points
            u = (a[:, None] + i[None, :] * m) % n1
            z = zech[((i * n)[None, :] - u) % n1]
            w = (u + z) % n1
            good = (z >= 0).all(axis=1)
            for a_log in np.nonzero(good)[0]:
                if np.bincount(w[a_log], minlength=n1).max() == 1:
                    if cnt >= cap:
                        return -1
                    out[cnt, 0] = a_log
                    out[cnt, 1] = m
                    out[cnt, 2] = n
                    cnt += 1
    return cnt


def keyprop_scan(zech, n1, d, k, hits):
    s = n1 // d
    j = np.arange(d, dtype=np.int64)
    u = ((k + 1) * j * s) % n1
    a = np.arange(n1, dtype=np.int64)
    v = (a[:, None] + (j * s)[None, :]) % n1
    z = zech[(v - u[None, :]) % n1]
    c = (u[None, :] + z) % s
    ok = (z >= 0).all(axis=1) & (c == c[:, :1]).all(axis=1)
    found = np.nonzero(ok)[0]
    hits[: found.size] = found
    return int(found.size)


def count_class_triples_split(n1, s, d, passing):
    total = 0
    for alpha in range(s):
        for M in np.nonzero(passing[alpha])[0]:
            M = int(M)
            for t in range(1, d):
                if math.gcd(t, d) != 1:
                    continue
                c = (M * t) % d
                k = s * t
                start = c if c > 0 else d
                if start + k > n1:
                    continue
                ms = np.arange(start, n1 - k + 1, d, dtype=np.int64)
                total += int((np.gcd(ms, s) == 1).sum())
    return total


def realizable_block_pairs_split(n1, s, d, passing):
    out = np.zeros((s, d), dtype=np.uint8)
    for t in range(1, d):
        if math.gcd(t, d) != 1:
            continue
        k = s * t
        for M in range(d):
            c = (M * t) % d
            start = c if c > 0 else d
            if start + k > n1:
                continue
            ms = np.arange(start, n1 - k + 1, d, dtype=np.int64)
            if not (np.gcd(ms, s) == 1).any():
                continue
            out[passing[:, M] == 1, t] = 1
    return out


def block_break_scan(zech, n1, E, alphas, ks):
    i = np.arange(n1, dtype=np.int64)
    cls = i % E
    for idx in range(len(alphas)):
        alpha = int(alphas[idx])
        k = int(ks[idx])
        z = zech[(i * k - alpha) % n1]
        if (z < 0).any():
            return -2
        val = (alpha + z) % E
        if (val != val[cls]).any():
            return idx
    return -1


def perm_parity(images):
    n = len(images)
    visited = np.zeros(n, dtype=bool)
    cycles = 0
    for i in range(n):
        if visited[i]:
            continue
        cycles += 1
        j = i
        while not visited[j]:
            visited[j] = True
            j = int(images[j])
    return (n - cycles) % 2


def parity_scan_split(zech, n1, s, d, passing):
    i = np.arange(n1, dtype=np.int64)
    for alpha in range(s):
        for M in np.nonzero(passing[alpha])[0]:
            M = int(M)
            for t in range(1, d):
                if math.gcd(t, d) != 1:
                    continue
                c = (M * t) % d
                k = s * t
                m = c if c > 0 else d
                while m + k <= n1:
                    if math.gcd(m, s) != 1:
                        m += d
                        continue
                    u = (alpha + i * m) % n1
                    z = zech[((i * (m + k)) - u) % n1]
                    if (z < 0).any():
                        return -2
                    if perm_parity((u + z) % n1) == 1:
                        return 1
                    m += d
    return 0


def _reduced_perm_check(zech, n1, a_log, m, n):
    k = n - m
    s = math.gcd(k, n1)
    if s == 1 or math.gcd(m, s) != 1:
        return False
    d = n1 // s
    t = k // s
    M = (m * pow(t, -1, d)) % d
    return unit_subgroup_test(zech, n1, s, d, a_log, M)


def random_equiv_trials(zech, n1, trials, seed):
    state = np.uint64(seed if seed > 0 else 1)
    mult = np.uint64(0x2545F4914F6CDD1D)
    bad = 0
    ba = bm = bn = -1

    def draw():
        nonlocal state
        with np.errstate(over="ignore"):
            state ^= state >> np.uint64(12)
            state ^= state << np.uint64(25)
            state ^= state >> np.uint64(27)
            return int((state * mult) >> np.uint64(16))

    for _ in range(trials):
        a_log = draw() % n1
        m = 1 + draw() % (n1 - 1)
        n = m + 1 + draw() % (n1 - m)
        fast = _reduced_perm_check(zech, n1, a_log, m, n)
        slow = bruteforce_perm_check(zech, n1, a_log, 0, m, n)
        if fast != slow:
            if bad == 0:
                ba, bm, bn = a_log, m, n
            bad += 1
    return bad, ba, bm, bn
