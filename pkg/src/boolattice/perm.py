"""Permutations of {0, ..., n-1}.

Composition convention: ``p * q`` (and :func:`compose`) applies ``p`` first,
then ``q``; ``(p * q)(i) == q(p(i))``.  Points are 0-indexed internally and
1-indexed only in cycle notation.
"""

from __future__ import annotations

import json
import re
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence


class Permutation:
    """Immutable permutation stored as its image tuple."""

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        n = len(images)
        if n == 0:
            raise ValueError("permutation degree must be positive")
        if sorted(images) != list(range(n)):
            raise ValueError(f"not a permutation of range({n}): {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def _trusted(cls, images: tuple) -> "Permutation":
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    def __setattr__(self, name, value):
        if name == "images":
            raise AttributeError("Permutation is immutable")
        object.__setattr__(self, name, value)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], n: int) -> "Permutation":
        """Build from 0-indexed cycles."""
        img = list(range(n))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 0 <= a < n or a in seen:
                    raise ValueError(f"bad cycle {cyc} for degree {n}")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls._trusted(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __getitem__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Non-trivial cycles, each starting at its smallest point."""
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i] or self.images[i] == i:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return tuple(out)

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self.images) if i != x]

    def order(self) -> int:
        from math import lcm

        return lcm(1, *(len(c) for c in self.cycles))

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)}, n={self.degree})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply ``p`` first, then ``q``."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} != {q.degree}")
    return Permutation._trusted(tuple(map(q.images.__getitem__, p.images)))


def parity(p: Permutation) -> int:
    """Sign of ``p``: +1 for even, -1 for odd, from the cycle type."""
    transpositions = sum(len(c) - 1 for c in p.cycles)
    return -1 if transpositions % 2 else 1


def pair_index(n: int) -> dict[tuple[int, int], int]:
    """Lexicographic index of the sorted pairs of {0..n-1}."""
    return {pair: k for k, pair in enumerate(combinations(range(n), 2))}


def induced_pair_action(p: Permutation) -> Permutation:
    """Action of ``p`` on the C(n,2) unordered pairs, pairs indexed lexicographically."""
    n = p.degree
    if n < 2:
        raise ValueError("induced pair action needs degree >= 2")
    index = pair_index(n)
    img = [0] * len(index)
    for (a, b), k in index.items():
        x, y = p.images[a], p.images[b]
        img[k] = index[(x, y) if x < y else (y, x)]
    return Permutation._trusted(tuple(img))


# ---------------------------------------------------------------- text formats

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """Parse 1-indexed cycle notation such as ``"(1 2)(3 4 5)"``; ``"()"`` is the identity."""
    text = text.strip()
    if _CYCLE_RE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        pts = [int(tok) - 1 for tok in re.split(r"[\s,]+", body.strip()) if tok]
        if len(pts) > 1:
            cycles.append(pts)
    return Permutation.from_cycles(cycles, n)


def format_cycles(p: Permutation) -> str:
    """1-indexed cycle notation; the identity prints as ``"()"``."""
    if not p.cycles:
        return "()"
    return "".join("(" + " ".join(str(a + 1) for a in c) + ")" for c in p.cycles)


def parse_images(text: str) -> Permutation:
    """Parse 0-indexed image-list notation such as ``"[1,0,3,4,2]"``."""
    return Permutation(json.loads(text))


def format_images(p: Permutation) -> str:
    return "[" + ",".join(map(str, p.images)) + "]"


def parse_perm(text: str, n: int | None = None) -> Permutation:
    """Accept either notation; cycle notation needs the degree ``n``."""
    text = text.strip()
    if text.startswith("["):
        p = parse_images(text)
        if n is not None and p.degree != n:
            raise ValueError(f"expected degree {n}, got {p.degree}")
        return p
    if n is None:
        raise ValueError("cycle notation needs an explicit degree")
    return parse_cycles(text, n)
