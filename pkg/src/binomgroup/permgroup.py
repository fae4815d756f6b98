"""Permutations of the nonzero field elements in log coordinates.

A permutation is an int32 numpy array ``p`` with ``p[i]`` the image of i.
In log coordinates the scalar map x -> g*x is the shift i -> i+1, so the
group always contains an (n)-cycle once any binomial permutation exists,
and a partition into cosets of the d-element subgroup becomes the residue
classes mod e = n/d.  Those two facts drive the block analysis here: only
coset partitions can be invariant when the scalar cycle is present, so
primitivity testing is a per-divisor residue check instead of a generic
block-system search.

Exact group orders come from a deterministic incremental Schreier-Sims
construction (base and strong generating set); after every added generator
the chain is complete, so prefixes give certified subgroup orders.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import binomial as _binomial
from .errors import (
    BadDivisor,
    DegreeMismatch,
    DegreeTooLarge,
    MissingScalar,
)
from .ffield import FieldCtx
from .intmath import divisors

DEFAULT_BSGS_DEGREE_CEILING = 8192


# ---------------------------------------------------------------------------
# elementary operations


def identity_perm(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int32)


def compose(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """The permutation applying p2 first, then p1."""
    if len(p1) != len(p2):
        raise DegreeMismatch(f"degree {len(p1)} vs {len(p2)}")
    return p1[p2]


def inverse(p: np.ndarray) -> np.ndarray:
    out = np.empty_like(p)
    out[p] = np.arange(len(p), dtype=p.dtype)
    return out


def is_identity(p: np.ndarray) -> bool:
    return bool((p == np.arange(len(p), dtype=p.dtype)).all())


def cycle_type(p: np.ndarray) -> tuple[int, ...]:
    """Multiset of cycle lengths, sorted ascending (fixed points included)."""
    n = len(p)
    seen = np.zeros(n, dtype=bool)
    out = []
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = int(p[j])
            length += 1
        out.append(length)
    return tuple(sorted(out))


def parity(p: np.ndarray) -> int:
    """0 for even permutations, 1 for odd."""
    return (len(p) - len(cycle_type(p))) % 2


def perm_order(p: np.ndarray) -> int:
    return math.lcm(*cycle_type(p))


def is_full_cycle(p: np.ndarray) -> bool:
    return cycle_type(p) == (len(p),)


def scalar_cycle(ctx: FieldCtx) -> np.ndarray:
    """The shift i -> i+1: multiplication by the field generator."""
    if ctx.q < 3:
        raise ValueError("scalar cycle needs q >= 3")
    n = ctx.n1
    out = (np.arange(n, dtype=np.int32) + 1) % n
    out.setflags(write=False)
    return out


def perm_from_binomial(ctx: FieldCtx, binom: _binomial.Binomial) -> np.ndarray:
    """Permutation table of a binomial that passes the reduced test."""
    return _binomial.binomial_perm(ctx, binom)


# ---------------------------------------------------------------------------
# invariant coset partitions


def preserves_mod_classes(p: np.ndarray, e: int):
    """Does p map residue classes mod e to residue classes mod e?

    Returns (True, None) or (False, (i, j)) with i = j (mod e) but
    p[i] != p[j] (mod e).
    """
    n = len(p)
    if e < 1 or n % e != 0:
        raise BadDivisor(f"e = {e} does not divide the degree {n}")
    classes = (np.asarray(p) % e).reshape(n // e, e)
    bad = np.nonzero(classes != classes[0])
    if bad[0].size == 0:
        return True, None
    row, col = int(bad[0][0]), int(bad[1][0])
    return False, (col, row * e + col)


@dataclass(frozen=True)
class BlockReport:
    """Divisors d of the degree whose coset partition every generator
    preserves, plus one witness per broken d."""

    degree: int
    preserved: tuple[int, ...]
    witnesses: dict[int, tuple[int, int, int]] = field(default_factory=dict)


def invariant_divisors(gens: list[np.ndarray], degree: int | None = None) -> BlockReport:
    """Test every coset partition against every generator.

    The generator list must contain the scalar cycle: with all scalar maps
    in the group, any invariant partition consists of the cosets of a
    subgroup (the part containing 1 is closed under multiplication), so
    checking coset partitions is exhaustive.  Raises MissingScalar
    otherwise, since for an arbitrary generator set the reduction would be
    unsound.
    """
    if not gens:
        raise ValueError("need at least one generator")
    n = degree if degree is not None else len(gens[0])
    for g in gens:
        if len(g) != n:
            raise DegreeMismatch("generators of mixed degree")
    shift = (np.arange(n, dtype=np.int64) + 1) % n
    if not any(np.array_equal(np.asarray(g, dtype=np.int64), shift) for g in gens):
        raise MissingScalar("generator list lacks the scalar cycle")
    preserved = []
    witnesses: dict[int, tuple[int, int, int]] = {}
    for dd in divisors(n):
        e = n // dd
        ok_all = True
        for gi, g in enumerate(gens):
            ok, wit = preserves_mod_classes(g, e)
            if not ok:
                witnesses[dd] = (gi, wit[0], wit[1])
                ok_all = False
                break
        if ok_all:
            preserved.append(dd)
    return BlockReport(degree=n, preserved=tuple(preserved), witnesses=witnesses)


# ---------------------------------------------------------------------------
# exact order: deterministic incremental Schreier-Sims


class _Level:
    __slots__ = ("base", "gen_idx", "tree_gens", "tree", "depth")

    def __init__(self, base: int):
        self.base = base
        self.gen_idx: list[int] = []  # indices into the owner's strong list
        self.tree_gens: list[tuple[np.ndarray, np.ndarray]] = []
        self.tree: dict[int, tuple[int, int] | None] = {base: None}
        self.depth: dict[int, int] = {base: 0}


class SchreierSims:
    """Deterministic base/strong-generating-set chain.

    The chain is complete after every ``add_generator`` call, so ``order``
    is always the exact order of the group generated by the permutations
    added so far.  Transversals are Schreier vectors; points deeper than
    ``max_tree_depth`` get a materialized coset representative promoted to
    a tree-only generator, bounding sift cost.
    """

    def __init__(self, degree: int, max_tree_depth: int = 32):
        self.n = degree
        self.max_tree_depth = max_tree_depth
        self.levels: list[_Level] = []
        self.strong: list[tuple[np.ndarray, np.ndarray, int]] = []  # (g, ginv, level)
        self._identity = np.arange(degree, dtype=np.int32)
        self._work: deque[tuple[int, int, int]] = deque()  # (level, point, strong idx)

    # -- public ------------------------------------------------------------

    def order(self) -> int:
        out = 1
        for lv in self.levels:
            out *= len(lv.tree)
        return out

    def add_generator(self, g: np.ndarray) -> None:
        g = np.asarray(g, dtype=np.int32)
        if len(g) != self.n:
            raise DegreeMismatch(f"degree {len(g)} vs {self.n}")
        self._consume(g.copy())
        while self._work:
            li, pt, si = self._work.popleft()
            self._process_schreier(li, pt, si)

    def base(self) -> list[int]:
        return [lv.base for lv in self.levels]

    # -- internals ----------------------------------------------------------

    def _consume(self, p: np.ndarray) -> None:
        stuck = self._sift(0, p)
        if stuck is not None:
            self._install(*stuck)

    def _sift(self, li: int, p: np.ndarray):
        """Strip p through the chain from level li; None when it reduces to
        the identity, else (residue, level index where it stops)."""
        while True:
            if (p == self._identity).all():
                return None
            if li >= len(self.levels):
                return p, li
            lv = self.levels[li]
            gamma = int(p[lv.base])
            if gamma == lv.base:
                li += 1
                continue
            if gamma not in lv.tree:
                return p, li
            u = self._transversal(lv, gamma)
            p = inverse(u)[p]  # u^-1 o p fixes the base
            li += 1

    def _transversal(self, lv: _Level, pt: int) -> np.ndarray:
        """Tree element u with u[base] = pt."""
        path = []
        while True:
            edge = lv.tree[pt]
            if edge is None:
                break
            idx, direction = edge
            g = lv.tree_gens[idx][direction]
            path.append(g)
            pt = int(lv.tree_gens[idx][1 - direction][pt])  # step to parent
        u = self._identity
        for g in reversed(path):
            u = g[u]
        return u

    def _install(self, p: np.ndarray, li: int) -> None:
        """Register a residue as a new strong generator at level li."""
        if li == len(self.levels):
            moved = int(np.nonzero(p != self._identity)[0][0])
            self.levels.append(_Level(moved))
        lv = self.levels[li]
        si = len(self.strong)
        self.strong.append((p, inverse(p), li))
        # the new generator acts on every level at or above its own
        for i in range(li + 1):
            up = self.levels[i]
            up.gen_idx.append(si)
            tg_idx = len(up.tree_gens)
            up.tree_gens.append((self.strong[si][0], self.strong[si][1]))
            existing = list(up.tree.keys())
            new_pts = self._grow_orbit(i, seeds=existing, gen_subset=[tg_idx])
            for pt in existing:
                self._work.append((i, pt, si))
            for pt in new_pts:
                for sj in up.gen_idx:
                    self._work.append((i, pt, sj))

    def _grow_orbit(self, li: int, seeds: list[int], gen_subset: list[int]) -> list[int]:
        """Incremental orbit BFS; returns newly reached points.

        Seeds are expanded with ``gen_subset`` tree generators only; points
        discovered along the way are expanded with every tree generator.
        """
        lv = self.levels[li]
        new_pts: list[int] = []
        queue = deque((s, idx) for s in seeds for idx in gen_subset)
        while queue:
            pt, idx = queue.popleft()
            for direction in (0, 1):
                img = int(lv.tree_gens[idx][direction][pt])
                if img in lv.tree:
                    continue
                depth = lv.depth[pt] + 1
                lv.tree[img] = (idx, direction)
                if depth > self.max_tree_depth:
                    u = self._transversal(lv, img)
                    promo = len(lv.tree_gens)
                    lv.tree_gens.append((u, inverse(u)))
                    lv.tree[img] = (promo, 0)
                    depth = 1
                lv.depth[img] = depth
                new_pts.append(img)
                for idx2 in range(len(lv.tree_gens)):
                    queue.append((img, idx2))
        return new_pts

    def _process_schreier(self, li: int, pt: int, si: int) -> None:
        lv = self.levels[li]
        g, ginv, _ = self.strong[si]
        u_pt = self._transversal(lv, pt)
        gamma = int(g[pt])
        u_gamma_inv = inverse(self._transversal(lv, gamma))
        sg = u_gamma_inv[g[u_pt]]
        stuck = self._sift(li + 1, sg)
        if stuck is not None:
            self._install(*stuck)


def bsgs_order(
    gens: list[np.ndarray],
    *,
    degree_ceiling: int = DEFAULT_BSGS_DEGREE_CEILING,
    stop_above: int | None = None,
) -> int:
    """Exact order of the group generated by ``gens``.

    Generators are fed one at a time, so the running value is always the
    exact order of the prefix subgroup.  Two early exits: the full
    symmetric order (nothing can grow further, result still exact), and
    ``stop_above`` (the result is then a certified lower bound on the full
    group order, not the exact order).
    """
    if not gens:
        return 1
    n = len(gens[0])
    if n > degree_ceiling:
        raise DegreeTooLarge(f"degree {n} exceeds the ceiling {degree_ceiling}")
    full = math.factorial(n)
    ss = SchreierSims(n)
    for g in gens:
        ss.add_generator(g)
        o = ss.order()
        if o == full:
            break
        if stop_above is not None and o > stop_above:
            break
    return ss.order()
