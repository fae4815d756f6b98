"""Exact integer arithmetic helpers: primality, prime powers, divisors.

Everything here is deterministic and exact.  Primality uses the fixed
Miller-Rabin witness set that is known to be correct for all inputs below
3.3e24, far above anything this package handles.
"""

from __future__ import annotations

import math
from functools import reduce

import numpy as np

# Deterministic Miller-Rabin witnesses, valid for n < 3.317e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, as an int64 array (Eratosthenes, chunked)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_comp = np.zeros(limit + 1, dtype=bool)
    is_comp[:2] = True
    for p in range(2, math.isqrt(limit) + 1):
        if not is_comp[p]:
            is_comp[p * p :: p] = True
    return np.nonzero(~is_comp)[0].astype(np.int64)


def iroot(n: int, k: int) -> int:
    """Floor of the exact k-th root of n (n >= 0, k >= 1)."""
    if n < 0 or k < 1:
        raise ValueError("iroot requires n >= 0 and k >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    x = int(round(n ** (1.0 / k))) + 2
    while x > 1 and x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def prime_power_decompose(n: int):
    """Return (p, e) with n = p^e and p prime, or None."""
    if n < 2:
        return None
    for e in range(1, n.bit_length()):
        r = iroot(n, e)
        if r**e == n and is_prime(r):
            return r, e
    return None


def is_prime_power(n: int) -> bool:
    return prime_power_decompose(n) is not None


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine for the sizes used here."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Sorted list of all positive divisors of n."""
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def prime_powers_between(lo: int, hi: int) -> list[tuple[int, int, int]]:
    """All (q, p, e) with q = p^e a prime power and lo <= q <= hi."""
    out = []
    for q in range(max(lo, 2), hi + 1):
        pe = prime_power_decompose(q)
        if pe is not None:
            out.append((q, pe[0], pe[1]))
    return out


def lcm_all(values) -> int:
    return reduce(math.lcm, values, 1)


def gcd_all(values) -> int:
    return reduce(math.gcd, values, 0)
