"""Tabulated finite fields with discrete-log arithmetic.

A field of order q = p^e is built once into three integer tables indexed by
the discrete log of a fixed generator g:

* ``exp[i]``  : the canonical encoding of g^i (polynomial coefficients in
  base p, low degree in the low digit),
* ``log[enc]``: the inverse map for nonzero encodings,
* ``zech[i]`` : log(1 + g^i), with ``-1`` where 1 + g^i = 0.

Nonzero elements are then handled purely as logs, so an element value is a
plain int: a log in ``[0, q-2]``, or ``ZERO = -1``.  Multiplication is
index addition mod q-1 and addition costs one zech lookup, which is what
makes the binomial sweeps cheap.

Construction is fully deterministic: the modulus is the lexicographically
smallest monic irreducible (coefficients compared low degree first) and the
generator is the smallest encoding of full multiplicative order, so two
runs always build bit-identical tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import (
    DivisionByZero,
    NoIrreducibleFound,
    NotPrime,
    TooLarge,
)
from .intmath import factorize, is_prime

ZERO = -1

DEFAULT_FIELD_CEILING = 1 << 20


@dataclass(frozen=True)
class FieldSpec:
    """Construction parameters: q = p^e, modulus (monic, coefficient tuple
    low degree first, length e+1) and the generator's encoding."""

    p: int
    e: int
    q: int
    modulus: tuple[int, ...]
    g: int


@dataclass(frozen=True, eq=False)
class FieldCtx:
    spec: FieldSpec
    exp: np.ndarray  # int64[q-1], log -> encoding
    log: np.ndarray  # int64[q], encoding -> log (entry 0 unused, -1)
    zech: np.ndarray  # int64[q-1], log(1 + g^i), -1 sentinel

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def n1(self) -> int:
        """Order of the multiplicative group, q - 1."""
        return self.spec.q - 1


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (dense coefficient tuples, low degree first)


def _poly_mulmod(a, b, modulus, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_rem(out, modulus, p)


def _poly_rem(poly, modulus, p):
    poly = list(poly)
    dm = len(modulus) - 1
    for i in range(len(poly) - 1, dm - 1, -1):
        c = poly[i]
        if c:
            poly[i] = 0
            for j in range(dm):
                poly[i - dm + j] = (poly[i - dm + j] - c * modulus[j]) % p
    while len(poly) > dm:
        poly.pop()
    while len(poly) < dm:
        poly.append(0)
    return poly


def _poly_powmod(a, k, modulus, p):
    result = [1] + [0] * (len(modulus) - 2)
    base = _poly_rem(a, modulus, p)
    while k:
        if k & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        k >>= 1
    return result


def _poly_mod_small(big, small, p):
    """Remainder of ``big`` by monic ``small`` (both low-first lists)."""
    rem = list(big)
    ds = len(small) - 1
    while len(rem) > ds:
        c = rem[-1]
        if c:
            off = len(rem) - 1 - ds
            for j in range(ds + 1):
                rem[off + j] = (rem[off + j] - c * small[j]) % p
        rem.pop()
    return rem


def _is_irreducible(poly, p):
    """Trial division by every monic polynomial of degree <= deg/2."""
    e = len(poly) - 1
    if poly[0] == 0:
        return e == 1  # divisible by x
    for deg in range(1, e // 2 + 1):
        for tail in product(range(p), repeat=deg):
            small = list(tail) + [1]
            if not any(_poly_mod_small(poly, small, p)):
                return False
    return True


def _find_modulus(p, e):
    if e == 1:
        return (0, 1)
    # lexicographic over (c_0, ..., c_{e-1}), constant term first
    for tail in product(range(p), repeat=e):
        poly = list(tail) + [1]
        if _is_irreducible(poly, p):
            return tuple(poly)
    raise NoIrreducibleFound(f"no irreducible of degree {e} over F_{p}")


def _encode(coeffs, p) -> int:
    enc = 0
    for c in reversed(coeffs):
        enc = enc * p + c
    return enc


def _decode(enc, p, e):
    out = []
    for _ in range(e):
        out.append(enc % p)
        enc //= p
    return out


# ---------------------------------------------------------------------------
# construction


def _multiplicative_order_full(elem, p, e, modulus, n1, prime_divs) -> bool:
    if e == 1:
        return all(pow(elem[0], n1 // ell, p) != 1 for ell in prime_divs)
    one = [1] + [0] * (e - 1)
    return all(
        _poly_powmod(elem, n1 // ell, modulus, p) != one for ell in prime_divs
    )


def build_field(p: int, e: int = 1, *, ceiling: int = DEFAULT_FIELD_CEILING) -> FieldCtx:
    """Construct F_{p^e} with its exp/log/zech tables.

    Deterministic: smallest irreducible modulus, smallest full-order
    generator.  Raises NotPrime / TooLarge on bad input.
    """
    if p < 2 or not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be positive")
    q = p**e
    if q > ceiling:
        raise TooLarge(f"q = {q} exceeds the ceiling {ceiling}")
    n1 = q - 1
    modulus = _find_modulus(p, e)

    prime_divs = list(factorize(n1)) if n1 > 1 else []
    g_enc = None
    for enc in range(1, q):
        if _multiplicative_order_full(_decode(enc, p, e), p, e, modulus, n1, prime_divs):
            g_enc = enc
            break
    if g_enc is None:  # cannot happen: the group is cyclic
        raise NoIrreducibleFound("no generator found; table construction bug")

    exp = np.empty(max(n1, 1), dtype=np.int64)
    if e == 1:
        cur = 1
        for i in range(n1):
            exp[i] = cur
            cur = cur * g_enc % p
    else:
        g_poly = _decode(g_enc, p, e)
        cur = [1] + [0] * (e - 1)
        for i in range(n1):
            exp[i] = _encode(cur, p)
            cur = _poly_mulmod(cur, g_poly, modulus, p)

    log = np.full(q, -1, dtype=np.int64)
    log[exp[:n1]] = np.arange(n1, dtype=np.int64)
    if n1 > 0 and np.count_nonzero(log >= 0) != n1:
        raise NoIrreducibleFound("exp table is not a bijection; construction bug")

    # zech[i] = log(1 + g^i); adding one only touches the constant digit
    enc_plus_one = exp[:n1] - exp[:n1] % p + (exp[:n1] % p + 1) % p
    zech = np.where(enc_plus_one == 0, -1, log[enc_plus_one])

    exp.setflags(write=False)
    log.setflags(write=False)
    zech.setflags(write=False)
    return FieldCtx(FieldSpec(p, e, q, modulus, g_enc), exp, log, zech)


# ---------------------------------------------------------------------------
# element operations (elements are logs, ZERO = -1)


def from_encoding(ctx: FieldCtx, enc: int) -> int:
    if enc == 0:
        return ZERO
    return int(ctx.log[enc])


def encoding(ctx: FieldCtx, x: int) -> int:
    if x == ZERO:
        return 0
    return int(ctx.exp[x])


def one(ctx: FieldCtx) -> int:
    return 0


def generator(ctx: FieldCtx) -> int:
    """The fixed generator as an element (log 1); log 0 for q = 2."""
    return 1 % ctx.n1 if ctx.n1 > 1 else 0


def mul(ctx: FieldCtx, x: int, y: int) -> int:
    if x == ZERO or y == ZERO:
        return ZERO
    return (x + y) % ctx.n1


def add(ctx: FieldCtx, x: int, y: int) -> int:
    if x == ZERO:
        return y
    if y == ZERO:
        return x
    z = ctx.zech[(y - x) % ctx.n1]
    if z < 0:
        return ZERO
    return (x + int(z)) % ctx.n1


def neg(ctx: FieldCtx, x: int) -> int:
    if x == ZERO or ctx.spec.p == 2:
        return x
    return (x + ctx.n1 // 2) % ctx.n1


def sub(ctx: FieldCtx, x: int, y: int) -> int:
    return add(ctx, x, neg(ctx, y))


def inv(ctx: FieldCtx, x: int) -> int:
    if x == ZERO:
        raise DivisionByZero("inverse of zero")
    return (-x) % ctx.n1


def pow_(ctx: FieldCtx, x: int, k: int) -> int:
    if x == ZERO:
        if k < 0:
            raise DivisionByZero("negative power of zero")
        return 0 if k == 0 else ZERO
    return (x * k) % ctx.n1


def element_order(ctx: FieldCtx, x: int) -> int:
    """Multiplicative order of a nonzero element."""
    if x == ZERO:
        raise DivisionByZero("zero has no multiplicative order")
    return ctx.n1 // math.gcd(x, ctx.n1)
