"""Congruence-class prime sieve with repunit exclusion.

Qualifying primes r satisfy four congruences (2 mod 3, +-3 mod 8, +-3
mod 7, +-6 mod 17) and have r^2 - 1 not of the form 1 + l + ... + l^(d-1)
for any prime power l and d >= 2.  Squares of qualifying primes are
exactly the fields the staged primitivity argument covers, so the sieve's
density against sqrt(N)/(48 ln N) is the desk-scale view of how common
those fields are.

The length-2 exclusion is computed directly (is r^2 - 2 a prime power?);
the congruences force 7*17 | r^2 - 2, which makes it vacuous for
congruence-passing r, and that shortcut is verified as a property in the
tests rather than relied on here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classify import decide_group, repunit_representations, repunit_value
from .errors import BoundTooLarge
from .ffield import DEFAULT_FIELD_CEILING
from .intmath import is_prime, is_prime_power, sieve_primes

# (modulus, allowed residues)
CONGRUENCES = ((3, (2,)), (8, (3, 5)), (7, (3, 4)), (17, (6, 11)))
CRT_MODULUS = 3 * 8 * 7 * 17  # 2856

_SIEVE_LIMIT = 10**7  # primes up to sqrt(N) <= 1e7, i.e. N <= 1e14


def congruence_classes() -> list[int]:
    """The residues mod 2856 compatible with all four congruences."""
    out = [
        c
        for c in range(CRT_MODULUS)
        if all(c % mod in allowed for mod, allowed in CONGRUENCES)
    ]
    assert len(out) == 8, "the congruence system admits 1*2*2*2 classes"
    return out


def passes_congruences(r: int) -> bool:
    return all(r % mod in allowed for mod, allowed in CONGRUENCES)


def congruence_primes_by_sieve(limit: int) -> np.ndarray:
    """Primes <= limit passing the congruences, via a full prime sieve."""
    primes = sieve_primes(limit)
    keep = np.ones(len(primes), dtype=bool)
    for mod, allowed in CONGRUENCES:
        res = primes % mod
        ok = np.zeros(len(primes), dtype=bool)
        for a in allowed:
            ok |= res == a
        keep &= ok
    return primes[keep]


def congruence_primes_by_crt(limit: int) -> np.ndarray:
    """Same set, via arithmetic progressions over the 8 residue classes."""
    out = []
    for c in congruence_classes():
        out.extend(
            n for n in range(c, limit + 1, CRT_MODULUS) if n >= 2 and is_prime(n)
        )
    return np.array(sorted(out), dtype=np.int64)


def square_is_repunit_free(r: int) -> bool:
    """True when r^2 - 1 has no repunit representation at all.

    Length 2 is decided directly by prime-power-testing r^2 - 2; longer
    representations come from the complete search.  For odd r the degree
    r^2 - 1 is even, which forces any representation length to be even;
    that parity claim is re-checked here instead of assumed.
    """
    n = r * r - 1
    if is_prime_power(n - 1):
        return False
    reps = [w for w in repunit_representations(n) if w.d >= 3]
    if r % 2 == 1:
        assert all(w.d % 2 == 0 for w in reps), f"odd-length repunit for n={n}"
    return not reps


@dataclass(frozen=True)
class SieveReport:
    bound: int
    sqrt_bound: int
    qualifying: tuple[int, ...]
    congruence_count: int
    repunit_excluded: int
    expected: float
    ratio: float
    alarm: bool
    tail_pairs: int
    tail_bound: float

    @property
    def count(self) -> int:
        return len(self.qualifying)


def qualifying_primes(N: int, *, alarm_tolerance: float = 0.25) -> SieveReport:
    """Qualifying primes r <= sqrt(N), with density bookkeeping.

    The alarm flags |count/expected - 1| > alarm_tolerance; at desk scale
    that is a bug detector, not a mathematical statement.
    """
    if N < 4:
        raise ValueError("N must be at least 4")
    limit = math.isqrt(N)
    if limit > _SIEVE_LIMIT:
        raise BoundTooLarge(f"sqrt(N) = {limit} exceeds {_SIEVE_LIMIT}")
    cong = congruence_primes_by_sieve(limit)
    qual = tuple(int(r) for r in cong if square_is_repunit_free(int(r)))
    expected = math.sqrt(N) / (48.0 * math.log(N))
    ratio = len(qual) / expected if expected > 0 else float("inf")
    tail_pairs, tail_bound = repunit_tail_count(N)
    return SieveReport(
        bound=N,
        sqrt_bound=limit,
        qualifying=qual,
        congruence_count=len(cong),
        repunit_excluded=len(cong) - len(qual),
        expected=expected,
        ratio=ratio,
        alarm=abs(ratio - 1.0) > alarm_tolerance,
        tail_pairs=tail_pairs,
        tail_bound=tail_bound,
    )


def repunit_tail_count(N: int) -> tuple[int, float]:
    """Exact count of (l, d) with l a prime power, d >= 4 and the length-d
    base-l repunit <= N, next to its analytic ceiling log2(N) * N^(1/3).
    The count is 0 below N = 15, the smallest length-4 repunit."""
    if N < 2:
        raise ValueError("tail count needs N >= 2")
    count = 0
    for d in range(4, N.bit_length() + 1):
        ell = 2
        while repunit_value(ell, d) <= N:
            if is_prime_power(ell):
                count += 1
            ell += 1
    bound = math.log2(N) * N ** (1.0 / 3.0)
    assert count <= bound, f"tail count {count} above its bound {bound}"
    return count, bound


@dataclass(frozen=True)
class DensityRow:
    p: int
    verdict: str
    passes_congruences: bool


@dataclass(frozen=True)
class DensityReport:
    p_max: int
    rows: tuple[DensityRow, ...]
    symmetric_count: int
    prime_count: int
    congruence_count: int

    @property
    def fraction(self) -> float:
        return self.symmetric_count / self.prime_count if self.prime_count else 0.0


def density_check(p_max: int = 71, *, field_ceiling: int | None = None) -> DensityReport:
    """Classify F_{p^2} for every prime p <= p_max and report the running
    fraction of full symmetric groups.  No asymptotic claim is made; the
    fraction is emitted for inspection."""
    ceiling = field_ceiling if field_ceiling is not None else DEFAULT_FIELD_CEILING
    rows = []
    for p in map(int, sieve_primes(p_max)):
        verdict = decide_group(p * p, field_ceiling=ceiling)
        rows.append(
            DensityRow(
                p=p,
                verdict=verdict.kind,
                passes_congruences=(p % 3 == 2 and p % 8 in (3, 5)),
            )
        )
    sym = sum(1 for r in rows if r.verdict == "SymmetricGroup")
    return DensityReport(
        p_max=p_max,
        rows=tuple(rows),
        symmetric_count=sym,
        prime_count=len(rows),
        congruence_count=sum(1 for r in rows if r.passes_congruences),
    )
