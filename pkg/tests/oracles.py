"""Brute-force oracles that share no code with the group engine.

``SymOracle(n)`` lists the n! permutations, tabulates multiplication and
finds every subgroup as an element bitmask: one representative per
conjugacy class is grown by adjoining single elements, and each new class
is spread out by conjugation.  Every subgroup ``J`` has a maximal subgroup
``K`` with ``J = <K, c>``, so this reaches all classes.
"""

from __future__ import annotations

from functools import cached_property
from itertools import permutations

import numpy as np

from boolattice.groups import GroupHandle, build_group
from boolattice.perm import Permutation


class SymOracle:
    def __init__(self, n: int):
        self.n = n
        self.elements = list(permutations(range(n)))
        self.index = {p: i for i, p in enumerate(self.elements)}
        N = len(self.elements)
        arr = np.array(self.elements, dtype=np.intp)
        # mult[i, j]: apply element i, then element j
        self.mult = np.empty((N, N), dtype=np.intp)
        for j, q in enumerate(arr):
            comp = q[arr]
            self.mult[:, j] = [self.index[tuple(r)] for r in comp.tolist()]
        self.inv = np.argmax(self.mult == 0, axis=1)
        # conj[x, i]: index of x^-1 * e_i * x
        self.conj = np.array([self.mult[self.mult[self.inv[x]], x] for x in range(N)])

    @property
    def size(self) -> int:
        return len(self.elements)

    def closure(self, gens) -> np.ndarray:
        """Boolean mask of the subgroup generated by element indices ``gens``."""
        mask = np.zeros(self.size, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        gens = np.asarray(list(gens), dtype=np.intp)
        while frontier.size and gens.size:
            nxt = np.unique(self.mult[np.ix_(frontier, gens)].ravel())
            nxt = nxt[~mask[nxt]]
            mask[nxt] = True
            frontier = nxt
        return mask

    @staticmethod
    def key(mask: np.ndarray) -> int:
        return int.from_bytes(np.packbits(mask).tobytes(), "big")

    @cached_property
    def subgroups(self) -> list[np.ndarray]:
        found: dict[int, np.ndarray] = {}
        reps: list[np.ndarray] = []

        def add_class(mask: np.ndarray) -> None:
            reps.append(mask)
            for x in range(self.size):
                m = np.zeros(self.size, dtype=bool)
                m[self.conj[x][mask]] = True
                found.setdefault(self.key(m), m)

        add_class(self.closure([]))
        i = 0
        while i < len(reps):
            K = reps[i]
            i += 1
            for c in range(self.size):
                if K[c]:
                    continue
                J = self.closure(list(np.flatnonzero(K)) + [c]) if K.sum() <= 1 else \
                    self.closure(self._gens_of(K) + [c])
                if self.key(J) not in found:
                    add_class(J)
        self._class_reps = reps
        return sorted(found.values(), key=lambda m: (int(m.sum()), self.key(m)))

    @property
    def class_reps(self) -> list[np.ndarray]:
        """One subgroup per conjugacy class."""
        self.subgroups
        return self._class_reps

    def _gens_of(self, mask: np.ndarray) -> list[int]:
        """A small generating set of the subgroup ``mask``."""
        gens: list[int] = []
        cur = self.closure([])
        for e in np.flatnonzero(mask):
            if not cur[e]:
                gens.append(int(e))
                cur = self.closure(gens)
                if cur.sum() == mask.sum():
                    break
        return gens

    def handle(self, mask: np.ndarray) -> GroupHandle:
        gens = [Permutation(self.elements[e]) for e in self._gens_of(mask)]
        return build_group(gens, degree=self.n, order=int(mask.sum()))

    def mask_of(self, K: GroupHandle) -> np.ndarray:
        m = np.zeros(self.size, dtype=bool)
        for g in K.elements():
            m[self.index[tuple(g.images)]] = True
        return m

    def interval(self, G: np.ndarray, H: np.ndarray) -> list[np.ndarray]:
        """Every subgroup ``K`` with ``H <= K <= G``."""
        return [K for K in self.subgroups if not (H & ~K).any() and not (K & ~G).any()]


def literal_generated(H: GroupHandle, g: Permutation) -> GroupHandle:
    """Subgroup generated by every element of the coset ``H g``."""
    return build_group([h * g for h in H.elements()], degree=H.degree)


def literal_coset_count(G: GroupHandle, H: GroupHandle) -> int:
    """Cosets ``H g`` generating ``G``, by listing the elements of ``G``."""
    seen: set = set()
    count = 0
    Hel = list(H.elements())
    for g in G.elements():
        coset = frozenset(tuple((h * g).images) for h in Hel)
        if coset in seen:
            continue
        seen.add(coset)
        if build_group([Permutation(x) for x in coset], degree=G.degree).order == G.order:
            count += 1
    return count
