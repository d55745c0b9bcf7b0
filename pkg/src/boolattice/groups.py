"""Permutation groups given by generators, with exact order and membership.

A :class:`GroupHandle` wraps a stabilizer chain (see :mod:`boolattice.schreier`).
Construction is deterministic: the random Schreier-Sims phase uses a seeded
generator, and the result is either certified against a caller-supplied
order bound or completed by the deterministic Schreier-Sims algorithm.
"""

from __future__ import annotations

import random
from collections import deque
from functools import cached_property
from math import factorial
from typing import Iterable, Iterator, Sequence

import numpy as np

from .perm import Permutation, parity
from .schreier import StabChain, identity_array, invert

DEFAULT_INDEX_CAP = 600_000
DEFAULT_DEGREE_CAP = 16
# up to this degree the deterministic completion alone is cheaper than a random phase
SMALL_DEGREE = 24


class GroupError(Exception):
    pass


class IndexCapExceeded(GroupError):
    def __init__(self, index: int, cap: int):
        super().__init__(f"index {index} exceeds the coset cap {cap}")
        self.index = index
        self.cap = cap


class DegreeCapExceeded(GroupError):
    def __init__(self, degree: int, cap: int):
        super().__init__(f"degree {degree} exceeds the backtrack cap {cap}")
        self.degree = degree
        self.cap = cap


class NotASubgroup(GroupError):
    pass


class OrderMismatch(GroupError):
    pass


def _arr(p: Permutation) -> np.ndarray:
    return np.asarray(p.images, dtype=np.intp)


def _perm(a: np.ndarray) -> Permutation:
    return Permutation._trusted(tuple(a.tolist()))


def _check_degree(a: "GroupHandle", b: "GroupHandle") -> None:
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} != {b.degree}")


class GroupHandle:
    """Immutable permutation group with a base and strong generating set."""

    def __init__(self, degree: int, generators: Sequence[Permutation], chain: StabChain,
                 name: str | None = None):
        self._degree = degree
        self._generators = tuple(generators)
        self._chain = chain
        self.name = name

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return self._generators

    @property
    def chain(self) -> StabChain:
        return self._chain

    @cached_property
    def base(self) -> tuple[int, ...]:
        return tuple(self._chain.base)

    @cached_property
    def strong_generators(self) -> tuple[Permutation, ...]:
        return tuple(_perm(g) for g in self._chain.strong_generators())

    @cached_property
    def basic_orbits(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(lv.orbit) for lv in self._chain.levels)

    def transversal(self, level: int) -> dict[int, Permutation]:
        """Orbit map of one base point: orbit point -> element taking the base point there."""
        lv = self._chain.levels[level]
        return {q: _perm(lv.rep(q)) for q in lv.orbit}

    @property
    def transversals(self) -> list[dict[int, Permutation]]:
        return [self.transversal(i) for i in range(len(self._chain.levels))]

    @cached_property
    def order(self) -> int:
        return self._chain.order()

    def __repr__(self) -> str:
        label = f"{self.name}, " if self.name else ""
        return f"GroupHandle({label}degree={self.degree}, order={self.order})"

    # ------------------------------------------------------------- queries
    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise ValueError(f"degree mismatch: {p.degree} != {self.degree}")
        return self._chain.contains(_arr(p))

    __contains__ = contains

    def contains_array(self, a: np.ndarray) -> bool:
        return self._chain.contains(a)

    def is_subgroup_of(self, other: "GroupHandle") -> bool:
        return is_subgroup(self, other)

    def same_group(self, other: "GroupHandle") -> bool:
        """Equal order plus mutual generator membership."""
        return (self.degree == other.degree and self.order == other.order
                and is_subgroup(self, other))

    def is_trivial(self) -> bool:
        return self.order == 1

    def all_even(self) -> bool:
        return all(parity(g) == 1 for g in self._generators)

    def random_element(self, rng: random.Random) -> Permutation:
        """Uniform random element, from a random choice in each transversal."""
        x = identity_array(self.degree)
        for lv in reversed(self._chain.levels):
            q = lv.orbit[rng.randrange(len(lv.orbit))]
            x = lv.rep(q)[x]
        return _perm(x)

    def elements(self, limit: int = 200_000) -> Iterator[Permutation]:
        """Every element (for small groups only)."""
        if self.order > limit:
            raise GroupError(f"refusing to list {self.order} elements (limit {limit})")
        for a in self.element_arrays():
            yield _perm(a)

    def element_arrays(self) -> Iterator[np.ndarray]:
        levels = self._chain.levels

        def rec(i: int, x: np.ndarray):
            if i < 0:
                yield x
                return
            lv = levels[i]
            for q in lv.orbit:
                yield from rec(i - 1, lv.rep(q)[x])

        yield from rec(len(levels) - 1, identity_array(self.degree))

    def orbits(self) -> list[list[int]]:
        return orbits(self.degree, self._generators)

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def minimal_block(self, points: Iterable[int]) -> list[list[int]]:
        return minimal_block_system(self.degree, self._generators, points)

    def is_primitive(self) -> bool:
        if not self.is_transitive():
            return False
        for b in range(1, self.degree):
            if len(self.minimal_block([0, b])) != 1:
                return False
        return True


# ------------------------------------------------------------------ building

def _completed_chain(n: int, gens: list[np.ndarray], chain: StabChain, order: int | None,
                     seed: int, strict: bool = True) -> StabChain:
    rng = random.Random(seed)
    if not gens:
        return chain
    if order is not None:
        if n > SMALL_DEGREE:
            chain.random_schreier_sims(gens, rng, target=order, patience=200 + 4 * n)
        got = chain.order()
        if got > order:
            raise OrderMismatch(f"generated group has order at least {got} > bound {order}")
        if got == order:
            return chain
        chain.schreier_sims()
        got = chain.order()
        if got != order and (strict or got > order):
            raise OrderMismatch(f"generated group has order {got}, expected {order}")
        return chain
    if n > SMALL_DEGREE:
        chain.random_schreier_sims(gens, rng, patience=30)
    chain.schreier_sims()
    return chain


def build_group(gens: Sequence[Permutation], *, degree: int | None = None, order: int | None = None,
                order_bound: int | None = None, base: Sequence[int] | None = None, seed: int = 0,
                name: str | None = None) -> GroupHandle:
    """Group generated by ``gens``.

    ``order``, when given, must be a certified upper bound on the group order
    (for instance a closed-form stabilizer order): construction stops as soon
    as the chain reaches it, and :class:`OrderMismatch` is raised if the
    generated group turns out smaller or larger.  ``order_bound`` is the same
    kind of bound but the group may turn out smaller.  ``degree`` is needed
    only for the trivial group given by an empty generator list.
    """
    gens = list(gens)
    if not gens:
        if degree is None:
            raise ValueError("empty generator list")
        gens = [Permutation.identity(degree)]
    n = gens[0].degree
    if degree is not None and degree != n:
        raise ValueError(f"degree mismatch: {n} != {degree}")
    for g in gens:
        if g.degree != n:
            raise ValueError(f"degree mismatch: {g.degree} != {n}")
    arrays = [_arr(g) for g in gens if not g.is_identity()]
    chain = StabChain(n)
    if base:
        chain.ensure_base_prefix(list(base))
    chain.add_generators(arrays)
    if order is not None:
        _completed_chain(n, arrays, chain, order, seed)
    else:
        _completed_chain(n, arrays, chain, order_bound, seed, strict=False)
    return GroupHandle(n, gens, chain, name)


def trivial_group(n: int) -> GroupHandle:
    return build_group([], degree=n, name=f"1:{n}")


def _cycle(points: Sequence[int], n: int) -> Permutation:
    return Permutation.from_cycles([list(points)], n)


def sym_generators(points: Sequence[int], n: int) -> list[Permutation]:
    """Two generators of Sym(points) inside Sym(n) (transposition and long cycle)."""
    points = list(points)
    if len(points) < 2:
        return []
    if len(points) == 2:
        return [_cycle(points, n)]
    return [_cycle(points[:2], n), _cycle(points, n)]


def alt_generators(points: Sequence[int], n: int) -> list[Permutation]:
    points = list(points)
    m = len(points)
    if m < 3:
        return []
    if m == 3:
        return [_cycle(points, n)]
    first = _cycle(points[:3], n)
    long = _cycle(points, n) if m % 2 else _cycle(points[1:], n)
    return [first, long]


def _known_chain(n: int, level_gens: list[list[Permutation]]) -> StabChain:
    chain = StabChain(n)
    chain.ensure_base_prefix(list(range(len(level_gens))))
    for lv, gens in zip(chain.levels, level_gens):
        arrs = [_arr(g) for g in gens]
        lv.add_gens(arrs, [invert(a) for a in arrs])
    return chain


def symmetric_group(n: int) -> GroupHandle:
    if n < 1:
        raise ValueError("degree must be positive")
    if n == 1:
        return build_group([], degree=1, name="sym:1")
    # Level k is Sym({k..n-1}); the chain is known, so no sifting is needed.
    chain = _known_chain(n, [sym_generators(range(k, n), n) for k in range(n - 1)])
    assert chain.order() == factorial(n)
    return GroupHandle(n, sym_generators(range(n), n), chain, f"sym:{n}")


def alternating_group(n: int) -> GroupHandle:
    if n < 1:
        raise ValueError("degree must be positive")
    if n < 3:
        return build_group([], degree=n, name=f"alt:{n}")
    chain = _known_chain(n, [alt_generators(range(k, n), n) for k in range(n - 2)])
    assert chain.order() == factorial(n) // 2
    return GroupHandle(n, alt_generators(range(n), n), chain, f"alt:{n}")


# ------------------------------------------------------------------ relations

def contains(G: GroupHandle, p: Permutation) -> bool:
    return G.contains(p)


def is_subgroup(A: GroupHandle, B: GroupHandle) -> bool:
    """True iff every generator of ``A`` lies in ``B``."""
    _check_degree(A, B)
    if A.order > B.order or B.order % A.order:
        return False
    return all(B.contains(g) for g in A.generators)


def join(ambient_degree: int, A: GroupHandle, B: GroupHandle, *, order: int | None = None,
         seed: int = 0) -> GroupHandle:
    """Group generated by the generators of ``A`` and ``B``.

    Grows ``A``'s chain in place of a rebuild.  ``order`` is an optional
    certified upper bound, as in :func:`build_group`.
    """
    _check_degree(A, B)
    if A.degree != ambient_degree:
        raise ValueError(f"degree mismatch: {A.degree} != {ambient_degree}")
    if is_subgroup(B, A):
        return A
    if is_subgroup(A, B):
        return B
    extra = [g for g in B.generators if not A.contains(g)]
    chain = A.chain.copy()
    arrays = [_arr(g) for g in extra]
    chain.add_generators(arrays)
    all_arrays = [_arr(g) for g in A.generators if not g.is_identity()] + arrays
    _completed_chain(A.degree, all_arrays, chain, order, seed)
    return GroupHandle(A.degree, tuple(A.generators) + tuple(extra), chain)


def join_all(ambient_degree: int, groups: Sequence[GroupHandle]) -> GroupHandle:
    it = iter(groups)
    acc = next(it)
    for g in it:
        acc = join(ambient_degree, acc, g)
    return acc


def generated_with(H: GroupHandle, extra: Sequence[Permutation], *, order: int | None = None) -> GroupHandle:
    """⟨H, extra⟩, reusing ``H``'s chain."""
    extra = [g for g in extra if not H.contains(g)]
    if not extra:
        return H
    chain = H.chain.copy()
    arrays = [_arr(g) for g in extra]
    chain.add_generators(arrays)
    all_arrays = [_arr(g) for g in H.generators if not g.is_identity()] + arrays
    _completed_chain(H.degree, all_arrays, chain, order, 0)
    return GroupHandle(H.degree, tuple(H.generators) + tuple(extra), chain)


def rebase(A: GroupHandle, base: Sequence[int]) -> GroupHandle:
    """Same group, with a chain whose base starts with ``base``."""
    chain = StabChain(A.degree)
    chain.ensure_base_prefix(list(base))
    arrays = [_arr(g) for g in A.generators if not g.is_identity()]
    chain.add_generators(arrays)
    _completed_chain(A.degree, arrays, chain, A.order, 0)
    return GroupHandle(A.degree, A.generators, chain, A.name)


# ------------------------------------------------------------------ cosets

class CosetKeyer:
    """Canonical keys for right cosets ``H*g`` (``h`` applied first, then ``g``).

    Within ``H*g`` the element with lexicographically least images of ``H``'s
    base points is unique; its image array is the key.
    """

    def __init__(self, H: GroupHandle):
        self.levels = []
        for lv in H.chain.levels:
            orb = np.asarray(lv.orbit, dtype=np.intp)
            reps = np.stack([lv.rep(q) for q in lv.orbit])
            self.levels.append((orb, reps))

    def canonical(self, g: np.ndarray) -> np.ndarray:
        for orb, reps in self.levels:
            k = int(np.argmin(g[orb]))
            if k:
                g = g[reps[k]]
        return g

    def key(self, g: np.ndarray) -> bytes:
        return self.canonical(g).tobytes()


def index(G: GroupHandle, H: GroupHandle) -> int:
    if G.order % H.order:
        raise NotASubgroup("order of H does not divide order of G")
    return G.order // H.order


def coset_representatives_arrays(G: GroupHandle, H: GroupHandle,
                                 cap: int = DEFAULT_INDEX_CAP) -> tuple[list[np.ndarray], dict[bytes, int]]:
    """Breadth-first right-coset enumeration; returns representatives and the key table."""
    _check_degree(G, H)
    if not is_subgroup(H, G):
        raise NotASubgroup("H is not a subgroup of G")
    idx = G.order // H.order
    if idx > cap:
        raise IndexCapExceeded(idx, cap)
    keyer = CosetKeyer(H)
    gens = [_arr(s) for s in G.generators]
    start = identity_array(G.degree)
    reps = [start]
    table = {keyer.key(start): 0}
    head = 0
    while head < len(reps) and len(reps) < idx:
        g = reps[head]
        head += 1
        for s in gens:
            x = s[g]
            k = keyer.key(x)
            if k not in table:
                table[k] = len(reps)
                reps.append(x)
    if len(reps) != idx:
        raise GroupError(f"coset enumeration found {len(reps)} cosets, expected {idx}")
    return reps, table


def coset_representatives(G: GroupHandle, H: GroupHandle, cap: int = DEFAULT_INDEX_CAP) -> list[Permutation]:
    reps, _ = coset_representatives_arrays(G, H, cap)
    return [_perm(r) for r in reps]


def double_coset_classes(G: GroupHandle, H: GroupHandle, cap: int = DEFAULT_INDEX_CAP
                         ) -> tuple[list[np.ndarray], list[int]]:
    """Right cosets of ``H`` grouped into ``H``-orbits (double cosets ``HgH``).

    Returns the coset representatives and, for each, the id of its double
    coset (the index of the first coset of that orbit in BFS order).
    """
    reps, table = coset_representatives_arrays(G, H, cap)
    keyer = CosetKeyer(H)
    hgens = [_arr(h) for h in H.generators if not h.is_identity()]
    cls = [-1] * len(reps)
    for i in range(len(reps)):
        if cls[i] >= 0:
            continue
        cls[i] = i
        stack = [i]
        while stack:
            j = stack.pop()
            for h in hgens:
                k = table[keyer.key(h[reps[j]])]
                if cls[k] < 0:
                    cls[k] = i
                    stack.append(k)
    return reps, cls


# ------------------------------------------------------------------ intersection

def intersect(A: GroupHandle, B: GroupHandle, degree_cap: int = DEFAULT_DEGREE_CAP) -> GroupHandle:
    """Exact ``A ∩ B`` by backtrack over ``A``'s stabilizer chain.

    Generators of the intersection are found level by level from the bottom
    of the chain; at each level only images outside the orbit of the part
    already found are searched, and every partial base image is pruned by
    membership in ``B`` (whose chain is rebuilt on ``A``'s base).
    """
    _check_degree(A, B)
    n = A.degree
    if n > degree_cap:
        raise DegreeCapExceeded(n, degree_cap)
    if is_subgroup(A, B):
        return A
    if is_subgroup(B, A):
        return B
    base = list(A.base)
    if not base:
        return A
    Bc = rebase(B, base).chain
    Ac = A.chain
    m = len(base)
    found: list[np.ndarray] = []
    K = StabChain(n)
    K.ensure_base_prefix(base)
    ident = identity_array(n)
    base_arr = np.asarray(base, dtype=np.intp)

    def search(j: int, x: np.ndarray) -> np.ndarray | None:
        # x is the product u_{j-1} .. u_i (deeper choices still to make)
        if j == m:
            return x if Bc.contains(x) else None
        lv = Ac.levels[j]
        for q in lv.orbit:
            y = x[lv.rep(q)]
            if not Bc.partial_ok(y[base_arr[: j + 1]].tolist()):
                continue
            r = search(j + 1, y)
            if r is not None:
                return r
        return None

    for i in range(m - 1, -1, -1):
        lv = Ac.levels[i]
        for gamma in lv.orbit:
            if gamma == base[i]:
                continue
            if K.levels[i].label[gamma] != -1:
                continue
            x = lv.rep(gamma)
            if not Bc.partial_ok(x[base_arr[: i + 1]].tolist()):
                continue
            g = search(i + 1, x)
            if g is None:
                continue
            found.append(g)
            K.add_generators([g])
            K.schreier_sims()
    gens = [_perm(g) for g in found] or [Permutation.identity(n)]
    return GroupHandle(n, gens, K)


# ------------------------------------------------------------------ sign kernel

def even_part(A: GroupHandle) -> GroupHandle:
    """Kernel of the sign map on ``A``.

    With an odd generator ``t`` the transversal is ``{1, t}``; the Schreier
    generators are ``s`` and ``t s t⁻¹`` for even ``s``, ``s t⁻¹`` and ``t s``
    for odd ``s``.
    """
    signs = [parity(g) for g in A.generators]
    if all(s == 1 for s in signs):
        return A
    t = A.generators[signs.index(-1)]
    ti = t.inverse()
    gens = []
    for s, sg in zip(A.generators, signs):
        if sg == 1:
            gens += [s, t * s * ti]
        else:
            gens += [s * ti, t * s]
    gens = list(dict.fromkeys(g for g in gens if not g.is_identity()))
    return build_group(gens, degree=A.degree, order=A.order // 2, base=A.base)


# ------------------------------------------------------------------ orbits and blocks

class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def classes(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), []).append(x)
        return sorted(out.values())


def orbits(n: int, gens: Sequence[Permutation]) -> list[list[int]]:
    uf = _UnionFind(n)
    for g in gens:
        for i, x in enumerate(g.images):
            uf.union(i, x)
    return uf.classes()


def minimal_block_system(n: int, gens: Sequence[Permutation], points: Iterable[int]) -> list[list[int]]:
    """Finest block system (for a transitive group) in which ``points`` share a block.

    Atkinson's merging procedure.
    """
    points = list(points)
    uf = _UnionFind(n)
    queue = deque()
    for p in points[1:]:
        if uf.union(points[0], p):
            queue.append((points[0], p))
    imgs = [g.images for g in gens]
    while queue:
        a, b = queue.popleft()
        for im in imgs:
            x, y = uf.find(im[a]), uf.find(im[b])
            if x != y:
                uf.union(x, y)
                queue.append((x, y))
    return uf.classes()


def is_block(n: int, gens: Sequence[Permutation], block: Iterable[int]) -> bool:
    block = frozenset(block)
    for g in gens:
        img = frozenset(g.images[b] for b in block)
        if img != block and img & block:
            return False
    return True


def point_stabilizer(G: GroupHandle, point: int) -> GroupHandle:
    """Stabilizer of ``point``, read off a chain based at that point."""
    R = G if G.base[:1] == (point,) else rebase(G, [point])
    chain = R.chain.copy()
    chain.levels = chain.levels[1:]
    gens = [_perm(g) for g in chain.strong_generators()] or [Permutation.identity(G.degree)]
    return GroupHandle(G.degree, gens, chain)
