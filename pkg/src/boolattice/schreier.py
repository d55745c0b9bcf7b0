"""Stabilizer chains (bases and strong generating sets) over numpy image arrays.

Permutations inside this module are 1-d ``np.intp`` arrays ``g`` with
``g[i]`` the image of ``i``.  Composition "x then y" is ``y[x]``.

Each level stores its strong generators, the basic orbit and a Schreier
vector (``label[q]`` is the index of the generator that first reached
``q``).  Coset representatives are stored explicitly when the level is small
enough, otherwise they are rebuilt by walking the Schreier tree.
"""

from __future__ import annotations

import random
from math import prod

import numpy as np

# Explicit transversals are kept while degree * orbit length stays below this.
EXPLICIT_LIMIT = 1 << 16

ROOT = -2
ABSENT = -1


def identity_array(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.intp)


def invert(g: np.ndarray) -> np.ndarray:
    inv = np.empty_like(g)
    inv[g] = np.arange(len(g), dtype=g.dtype)
    return inv


def first_moved(g: np.ndarray) -> int:
    moved = np.flatnonzero(g != np.arange(len(g)))
    return int(moved[0]) if len(moved) else -1


class Level:
    __slots__ = ("point", "n", "gens", "invs", "label", "orbit", "reps", "rep_invs", "checked")

    def __init__(self, point: int, n: int):
        self.point = point
        self.n = n
        self.gens: list[np.ndarray] = []
        self.invs: list[np.ndarray] = []
        self.label = np.full(n, ABSENT, dtype=np.intp)
        self.label[point] = ROOT
        self.orbit = [point]
        ident = identity_array(n)
        self.reps: dict[int, np.ndarray] | None = {point: ident}
        self.rep_invs: dict[int, np.ndarray] | None = {point: ident}
        self.checked: set[tuple[int, int]] = set()

    def copy(self) -> "Level":
        new = object.__new__(Level)
        new.point = self.point
        new.n = self.n
        new.gens = list(self.gens)
        new.invs = list(self.invs)
        new.label = self.label.copy()
        new.orbit = list(self.orbit)
        new.reps = None if self.reps is None else dict(self.reps)
        new.rep_invs = None if self.rep_invs is None else dict(self.rep_invs)
        new.checked = set(self.checked)
        return new

    def add_gens(self, gens: list[np.ndarray], invs: list[np.ndarray]) -> bool:
        """Append generators and extend the orbit; True if the orbit grew."""
        start = len(self.gens)
        self.gens.extend(gens)
        self.invs.extend(invs)
        label = self.label
        queue: list[int] = []
        orbit_arr = np.fromiter(self.orbit, dtype=np.intp, count=len(self.orbit))
        for gi in range(start, len(self.gens)):
            imgs = self.gens[gi][orbit_arr]
            fresh = np.flatnonzero(label[imgs] == ABSENT)
            for k in fresh:
                q = int(imgs[k])
                if label[q] == ABSENT:
                    label[q] = gi
                    self._new_point(q, int(orbit_arr[k]), gi)
                    queue.append(q)
        while queue:
            nxt: list[int] = []
            for p in queue:
                for gi, s in enumerate(self.gens):
                    q = int(s[p])
                    if label[q] == ABSENT:
                        label[q] = gi
                        self._new_point(q, p, gi)
                        nxt.append(q)
            queue = nxt
        if self.reps is not None and self.n * len(self.orbit) > EXPLICIT_LIMIT:
            self.reps = None
            self.rep_invs = None
        return len(self.orbit) > len(orbit_arr)

    def _new_point(self, q: int, p: int, gi: int) -> None:
        self.orbit.append(q)
        if self.reps is not None:
            s, si = self.gens[gi], self.invs[gi]
            self.reps[q] = s[self.reps[p]]
            self.rep_invs[q] = self.rep_invs[p][si]

    def _path(self, q: int) -> list[int]:
        """Generator indices from ``q`` back to the root (last applied first)."""
        path = []
        label = self.label
        while True:
            gi = int(label[q])
            if gi == ROOT:
                return path
            path.append(gi)
            q = int(self.invs[gi][q])

    def rep(self, q: int) -> np.ndarray:
        """Coset representative ``u`` with ``u[point] == q``."""
        if self.reps is not None:
            return self.reps[q]
        x = identity_array(self.n)
        for gi in reversed(self._path(q)):
            x = self.gens[gi][x]
        return x

    def rep_inv(self, q: int) -> np.ndarray:
        if self.rep_invs is not None:
            return self.rep_invs[q]
        return self.strip(identity_array(self.n), q)

    def strip(self, g: np.ndarray, q: int) -> np.ndarray:
        """``g`` followed by the inverse of the representative for ``q``."""
        if self.rep_invs is not None:
            return self.rep_invs[q][g]
        label = self.label
        while True:
            gi = int(label[q])
            if gi == ROOT:
                return g
            si = self.invs[gi]
            g = si[g]
            q = int(si[q])


class StabChain:
    """A base and strong generating set for a permutation group of degree ``n``."""

    def __init__(self, n: int):
        self.n = n
        self.levels: list[Level] = []
        self.ident = identity_array(n)

    # ------------------------------------------------------------ basic data
    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def order(self) -> int:
        return prod(len(lv.orbit) for lv in self.levels)

    def strong_generators(self) -> list[np.ndarray]:
        seen = set()
        out = []
        for lv in self.levels:
            for g in lv.gens:
                key = g.tobytes()
                if key not in seen:
                    seen.add(key)
                    out.append(g)
        return out

    def copy(self) -> "StabChain":
        new = StabChain(self.n)
        new.levels = [lv.copy() for lv in self.levels]
        return new

    def is_identity(self, g: np.ndarray) -> bool:
        return bool(np.array_equal(g, self.ident))

    # ------------------------------------------------------------ sifting
    def sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        """Strip ``g`` through levels ``start..``; return residue and failing level."""
        levels = self.levels
        for i in range(start, len(levels)):
            lv = levels[i]
            q = int(g[lv.point])
            if lv.label[q] == ABSENT:
                return g, i
            g = lv.strip(g, q)
        return g, len(levels)

    def contains(self, g: np.ndarray) -> bool:
        h, j = self.sift(g)
        return j == len(self.levels) and self.is_identity(h)

    def partial_ok(self, images: list[int]) -> bool:
        """Is there an element mapping the first base points to ``images``?"""
        g = None
        for i, target in enumerate(images):
            lv = self.levels[i]
            q = target if g is None else int(g[target])
            if lv.label[q] == ABSENT:
                return False
            u_inv = lv.rep_inv(q)
            g = u_inv if g is None else u_inv[g]
        return True

    # ------------------------------------------------------------ growth
    def _insert(self, h: np.ndarray, lo: int, hi: int) -> None:
        """Add ``h`` to levels ``lo..hi``; ``hi == len(levels)`` opens a new level."""
        if hi == len(self.levels):
            pt = self._new_base_point(h)
            self.levels.append(Level(pt, self.n))
        hinv = invert(h)
        for k in range(lo, hi + 1):
            self.levels[k].add_gens([h], [hinv])

    def _new_base_point(self, h: np.ndarray) -> int:
        used = set(self.base)
        for p in np.flatnonzero(h != self.ident):
            if int(p) not in used:
                return int(p)
        raise AssertionError("element fixes every base point yet is not the identity")

    def add_generators(self, gens: list[np.ndarray]) -> None:
        """Seed the top levels with new generators (no completion)."""
        for g in gens:
            if self.is_identity(g):
                continue
            j = 0
            while j < len(self.levels) and int(g[self.levels[j].point]) == self.levels[j].point:
                j += 1
            self._insert(g, 0, j)

    def ensure_base_prefix(self, prefix: list[int]) -> None:
        if self.levels:
            raise ValueError("base prefix must be set on an empty chain")
        for pt in prefix:
            self.levels.append(Level(pt, self.n))

    def random_schreier_sims(self, gens: list[np.ndarray], rng: random.Random,
                             target: int | None = None, patience: int = 40,
                             max_rounds: int | None = None) -> None:
        """Grow the chain from random elements.

        Stops once ``order() >= target`` (when a certified upper bound is
        known) or after ``patience`` consecutive random elements sift to the
        identity.  The order is always a lower bound on the true group order.
        """
        pr = ProductReplacement(gens, rng)
        streak = 0
        rounds = 0
        while True:
            if target is not None and self.order() >= target:
                return
            if streak >= patience:
                return
            if max_rounds is not None and rounds >= max_rounds:
                return
            rounds += 1
            g = pr.next()
            h, j = self.sift(g)
            if j == len(self.levels) and self.is_identity(h):
                streak += 1
                continue
            streak = 0
            self._insert(h, 0, j)

    def schreier_sims(self) -> None:
        """Deterministic completion: every Schreier generator sifts to the identity."""
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            jump = None
            for p in list(lv.orbit):
                for gi in range(len(lv.gens)):
                    if (p, gi) in lv.checked:
                        continue
                    lv.checked.add((p, gi))
                    s = lv.gens[gi]
                    q = int(s[p])
                    sg = lv.rep_inv(q)[s[lv.rep(p)]]
                    if self.is_identity(sg):
                        continue
                    h, j = self.sift(sg, i + 1)
                    if j == len(self.levels) and self.is_identity(h):
                        continue
                    self._insert(h, i + 1, j)
                    jump = j
                    break
                if jump is not None:
                    break
            if jump is None:
                i -= 1
            else:
                i = min(jump, len(self.levels) - 1)


class ProductReplacement:
    """Product replacement random elements (seeded, hence reproducible)."""

    def __init__(self, gens: list[np.ndarray], rng: random.Random, slots: int = 10, warmup: int = 60):
        if not gens:
            raise ValueError("need at least one generator")
        n = len(gens[0])
        self.rng = rng
        self.state = [gens[i % len(gens)].copy() for i in range(max(slots, len(gens)))]
        self.acc = identity_array(n)
        for _ in range(warmup):
            self.next()

    def next(self) -> np.ndarray:
        st = self.state
        i, j = self.rng.sample(range(len(st)), 2)
        other = st[j] if self.rng.random() < 0.5 else invert(st[j])
        if self.rng.random() < 0.5:
            st[i] = other[st[i]]
        else:
            st[i] = st[i][other]
        self.acc = st[i][self.acc]
        return self.acc
