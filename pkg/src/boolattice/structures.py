"""Regular partitions, regular product structures and their stabilizers.

Partition chains use a decreasing divisor ladder ``n = n_0 > n_1 > ... > n_l >
n_{l+1} = 1``; ``Sigma_j`` is the ``(n/n_j, n_j)``-regular partition into
contiguous blocks, so the ``Sigma_j`` are nested and ``Sigma_j`` gets coarser
as ``j`` grows.  ``M_j`` is the stabilizer of ``Sigma_j`` and ``M_I`` the
intersection over ``I``.  (Labelling the partitions by increasing block size
instead gives the same lattice with the index set reversed.)

Product chains use ``b = b_1 ... b_l``, ``d_r = b_r ... b_l`` and ``c_r = b /
d_r``.  ``M_r`` is the stabilizer of the ``(a^{c_r}, d_r)``-product structure
obtained by grouping the ``b`` base-``a`` digits of a point into ``d_r``
consecutive super-digits, so ``M_I`` for ``I = {r_1 < ... < r_s}`` is
``Sym(a^{c_{r_1}}) wr Z`` in product action, with ``Z`` the imprimitive tower
``Sym(b_{r_1}..b_{r_2-1}) wr ... wr Sym(b_{r_s}..b_l)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import factorial, prod
from typing import Iterable, Literal, Sequence

from .groups import (GroupHandle, build_group, even_part, sym_generators, symmetric_group,
                     alternating_group)
from .perm import Permutation, parity

Ambient = Literal["sym", "alt"]


class UnsupportedParameters(ValueError):
    pass


def _check_ambient(ambient: str) -> None:
    if ambient not in ("sym", "alt"):
        raise ValueError(f"ambient must be 'sym' or 'alt', got {ambient!r}")


def ambient_group(n: int, ambient: Ambient) -> GroupHandle:
    _check_ambient(ambient)
    return symmetric_group(n) if ambient == "sym" else alternating_group(n)


def _restrict(gens: list[Permutation], n: int, sym_order: int, ambient: Ambient,
              name: str | None = None) -> GroupHandle:
    """Group from ``gens`` certified at ``sym_order``, then cut to Alt if asked."""
    G = build_group(gens, degree=n, order=sym_order, name=name)
    if ambient == "alt":
        E = even_part(G)
        E.name = name
        return E
    return G


# ---------------------------------------------------------------- partitions

@dataclass(frozen=True)
class RegularPartition:
    n: int
    blocks: tuple[tuple[int, ...], ...]
    regular: bool = field(default=True, compare=False)

    def __post_init__(self):
        pts = sorted(p for b in self.blocks for p in b)
        if pts != list(range(self.n)):
            raise ValueError("blocks must partition {0..n-1}")
        if self.regular and len({len(b) for b in self.blocks}) > 1:
            raise ValueError("blocks of a regular partition must have equal size")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None,
                    regular: bool = True) -> "RegularPartition":
        bl = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        if n is None:
            n = sum(len(b) for b in bl)
        return cls(n, bl, regular)

    @classmethod
    def contiguous(cls, n: int, a: int) -> "RegularPartition":
        """``(a, n/a)``-partition into consecutive blocks."""
        if a < 1 or n % a:
            raise ValueError(f"block size {a} does not divide {n}")
        return cls(n, tuple(tuple(range(i, i + a)) for i in range(0, n, a)))

    @property
    def a(self) -> int:
        return len(self.blocks[0])

    @property
    def b(self) -> int:
        return len(self.blocks)

    def is_trivial(self) -> bool:
        return self.a == 1 or self.b == 1

    def block_of(self) -> list[int]:
        out = [0] * self.n
        for i, blk in enumerate(self.blocks):
            for p in blk:
                out[p] = i
        return out

    def image(self, g: Permutation) -> "RegularPartition":
        return RegularPartition.from_blocks(([g[p] for p in b] for b in self.blocks), self.n, self.regular)

    def is_normalized_by(self, gens: Sequence[Permutation]) -> bool:
        return all(self.image(g) == self for g in gens)

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


def refines(S1: RegularPartition, S2: RegularPartition) -> bool:
    """``S1 <= S2``: every block of ``S1`` is a union of blocks of ``S2``."""
    if S1.n != S2.n:
        raise ValueError(f"domain mismatch: {S1.n} != {S2.n}")
    where = S1.block_of()
    return all(len({where[p] for p in blk}) == 1 for blk in S2.blocks)


def partition_generators(S: RegularPartition) -> list[Permutation]:
    """Sym of one block, a swap of the first two blocks and a cycle of all blocks."""
    n, blocks = S.n, S.blocks
    gens = sym_generators(blocks[0], n)
    if S.b >= 2:
        gens.append(_block_map(blocks, [1, 0] + list(range(2, S.b)), n))
    if S.b >= 3:
        gens.append(_block_map(blocks, list(range(1, S.b)) + [0], n))
    return gens


def _block_map(blocks, target, n) -> Permutation:
    img = list(range(n))
    for i, j in enumerate(target):
        for x, y in zip(blocks[i], blocks[j]):
            img[x] = y
    return Permutation(img)


def partition_stabilizer(S: RegularPartition, ambient: Ambient = "sym") -> GroupHandle:
    _check_ambient(ambient)
    if not S.regular:
        raise ValueError("stabilizers are defined for regular partitions only")
    if S.is_trivial():
        return ambient_group(S.n, ambient)
    order = factorial(S.b) * factorial(S.a) ** S.b
    return _restrict(partition_generators(S), S.n, order, ambient, f"N({S.a},{S.b})")


def subset_stabilizer(gamma: Iterable[int], n: int, ambient: Ambient = "sym") -> GroupHandle:
    gamma = sorted(set(gamma))
    if not gamma or len(gamma) >= n:
        raise ValueError("subset must be non-empty and proper")
    if any(not 0 <= x < n for x in gamma):
        raise ValueError("subset point out of range")
    rest = [x for x in range(n) if x not in set(gamma)]
    gens = sym_generators(gamma, n) + sym_generators(rest, n)
    order = factorial(len(gamma)) * factorial(len(rest))
    return _restrict(gens, n, order, ambient, f"N(subset {len(gamma)})")


def regular_partitions(n: int, a: int) -> Iterable[RegularPartition]:
    """All ``(a, n/a)``-regular partitions of ``{0..n-1}`` (small ``n`` only)."""
    if n % a:
        return

    def rec(remaining: tuple[int, ...]):
        if not remaining:
            yield ()
            return
        first, rest = remaining[0], remaining[1:]
        for comb in combinations(rest, a - 1):
            blk = (first,) + comb
            left = tuple(x for x in rest if x not in comb)
            for tail in rec(left):
                yield (blk,) + tail

    for blocks in rec(tuple(range(n))):
        yield RegularPartition(n, blocks)


# ---------------------------------------------------------------- chains of partitions

@dataclass(frozen=True)
class PartitionChainSpec:
    n: int
    ladder: tuple[int, ...]
    ambient: Ambient = "sym"

    def __post_init__(self):
        _check_ambient(self.ambient)
        if len(self.ladder) < 1:
            raise ValueError("the ladder needs at least one entry")
        full = self.full_ladder
        for hi, lo in zip(full, full[1:]):
            if lo >= hi or hi % lo or hi // lo < 2:
                raise ValueError(f"invalid divisor ladder {full}")

    @property
    def full_ladder(self) -> tuple[int, ...]:
        """``(n_0, n_1, ..., n_l, n_{l+1}) = (n, ..., 1)``."""
        return (self.n,) + tuple(self.ladder) + (1,)

    @property
    def rank(self) -> int:
        return len(self.ladder)

    def partition(self, j: int) -> RegularPartition:
        """``Sigma_j``: ``n_j`` contiguous blocks of size ``n/n_j``."""
        self._check_index(j)
        return RegularPartition.contiguous(self.n, self.n // self.full_ladder[j])

    def _check_index(self, j: int) -> None:
        if not 1 <= j <= self.rank:
            raise IndexError(f"index {j} outside 1..{self.rank}")


def tower_generators(factors: Sequence[int], n: int, offset: int = 0) -> list[Permutation]:
    """Generators of ``Sym(e_1) wr ... wr Sym(e_t)`` on contiguous nested blocks.

    ``e_1`` is the innermost factor.  The tower acts on ``prod(factors)``
    points starting at ``offset``; each level contributes a swap and a cycle of
    the sub-blocks inside the first parent block.
    """
    gens: list[Permutation] = []
    size = 1
    for e in factors:
        if e >= 2:
            subs = [list(range(offset + i * size, offset + (i + 1) * size)) for i in range(e)]
            gens.append(_block_map(subs, [1, 0] + list(range(2, e)), n))
            if e >= 3:
                gens.append(_block_map(subs, list(range(1, e)) + [0], n))
        size *= e
    return gens


def tower_order(factors: Sequence[int]) -> int:
    order = 1
    for e in factors:
        order = order ** e * factorial(e)
    return order


def partition_chain_factors(spec: PartitionChainSpec, I: Iterable[int]) -> list[int]:
    """Wreath factors (innermost first) of the stabilizer of ``{Sigma_i : i in I}``."""
    idx = sorted(set(I))
    for j in idx:
        spec._check_index(j)
    full = spec.full_ladder
    counts = [spec.n] + [full[j] for j in idx] + [1]
    return [counts[t] // counts[t + 1] for t in range(len(counts) - 1)]


def partition_chain_order(spec: PartitionChainSpec, I: Iterable[int]) -> int:
    """Order of ``M_I`` inside Sym(n)."""
    return tower_order(partition_chain_factors(spec, I))


def partition_chain_subgroup(spec: PartitionChainSpec, I: Iterable[int], ambient: Ambient | None = None
                             ) -> GroupHandle:
    """``M_I``: stabilizer of every ``Sigma_i``, ``i`` in ``I``, in the ambient group."""
    ambient = ambient or spec.ambient
    I = sorted(set(I))
    factors = partition_chain_factors(spec, I)
    name = "M" + ("{" + ",".join(map(str, I)) + "}")
    if not I:
        return ambient_group(spec.n, ambient)
    gens = tower_generators(factors, spec.n)
    return _restrict(gens, spec.n, tower_order(factors), ambient, name)


# ---------------------------------------------------------------- product structures

@dataclass(frozen=True)
class ProductStructure:
    m: int
    k: int
    partitions: tuple[RegularPartition, ...]

    def __post_init__(self):
        if self.m < 5 or self.k < 2:
            raise ValueError("a regular product structure needs m >= 5 and k >= 2")
        self._validate()

    def _validate(self) -> None:
        n = self.m ** self.k
        if len(self.partitions) != self.k:
            raise ValueError("need exactly k partitions")
        for P in self.partitions:
            if P.n != n or P.b != self.m or P.a != self.m ** (self.k - 1):
                raise ValueError("each partition needs m blocks of size m^(k-1)")
        if len(set(self.chambers())) != n:
            raise ValueError("chamber map is not injective")

    @classmethod
    def relaxed(cls, m: int, k: int, partitions: Sequence[RegularPartition]) -> "ProductStructure":
        """Skip the ``m >= 5`` bound (small affine examples); other checks still apply."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "m", m)
        object.__setattr__(obj, "k", k)
        object.__setattr__(obj, "partitions", tuple(partitions))
        obj._validate()
        return obj

    @property
    def n(self) -> int:
        return self.m ** self.k

    def chambers(self) -> list[tuple[int, ...]]:
        """``F(w)``: the tuple of block indices containing ``w``."""
        maps = [P.block_of() for P in self.partitions]
        return [tuple(mp[w] for mp in maps) for w in range(self.m ** self.k)]

    def image(self, g: Permutation) -> frozenset:
        return frozenset(P.image(g) for P in self.partitions)

    def is_normalized_by(self, gens: Sequence[Permutation]) -> bool:
        mine = frozenset(self.partitions)
        return all(self.image(g) == mine for g in gens)

    def to_json(self) -> list[list[list[int]]]:
        return [P.to_json() for P in self.partitions]


def digit_partition(n: int, m: int, position: int) -> RegularPartition:
    """Points grouped by base-``m`` digit number ``position``."""
    blocks: list[list[int]] = [[] for _ in range(m)]
    for x in range(n):
        blocks[(x // m ** position) % m].append(x)
    return RegularPartition.from_blocks(blocks, n)


def standard_product_structure(m: int, k: int, relaxed: bool = False) -> ProductStructure:
    n = m ** k
    parts = [digit_partition(n, m, i) for i in range(k)]
    return ProductStructure.relaxed(m, k, parts) if relaxed else ProductStructure(m, k, parts)


def product_action_generators(alphabet_gens: Sequence[Sequence[int]], m: int,
                              coord_gens: Sequence[Permutation], k: int) -> list[Permutation]:
    """Wreath product in product action on ``m^k`` points.

    A point is ``sum x_i m^i``.  ``alphabet_gens`` (image lists on ``m``
    letters) act on coordinate 0; each coordinate permutation ``pi`` sends
    ``x`` to ``y`` with ``y[pi(i)] = x[i]``.
    """
    n = m ** k
    powers = [m ** i for i in range(k)]
    gens = []
    for a in alphabet_gens:
        img = [x - x % m + a[x % m] for x in range(n)]
        gens.append(Permutation(img))
    for pi in coord_gens:
        img = []
        for x in range(n):
            y = 0
            for i in range(k):
                y += ((x // powers[i]) % m) * powers[pi[i]]
            img.append(y)
        gens.append(Permutation(img))
    return gens


def _sym_letter_gens(m: int) -> list[list[int]]:
    return [list(g.images) for g in sym_generators(range(m), m)]


def _relabel(gens: list[Permutation], chambers: list[tuple[int, ...]], m: int) -> list[Permutation]:
    """Move generators from the digit encoding onto the points named by ``chambers``."""
    code = [sum(c * m ** i for i, c in enumerate(ch)) for ch in chambers]
    point_of = {c: w for w, c in enumerate(code)}
    return [Permutation([point_of[g[code[w]]] for w in range(len(code))]) for g in gens]


def product_stabilizer(F: ProductStructure, ambient: Ambient = "sym") -> GroupHandle:
    """``N(F) = Sym(m) wr Sym(k)`` in product action (cut to Alt if asked)."""
    _check_ambient(ambient)
    coord = sym_generators(range(F.k), F.k)
    gens = product_action_generators(_sym_letter_gens(F.m), F.m, coord, F.k)
    gens = _relabel(gens, F.chambers(), F.m)
    order = factorial(F.k) * factorial(F.m) ** F.k
    return _restrict(gens, F.n, order, ambient, f"N(F {F.m},{F.k})")


def product_kernel(F: ProductStructure) -> GroupHandle:
    """Kernel ``Sym(m)^k`` of the action of ``N(F)`` on the set of partitions."""
    gens = []
    for i in range(F.k):
        pi = list(range(F.k))
        pi[0], pi[i] = pi[i], pi[0]
        swap = product_action_generators([], F.m, [Permutation(pi)], F.k)[0] if i else None
        for a in _sym_letter_gens(F.m):
            g = product_action_generators([a], F.m, [], F.k)[0]
            gens.append(swap * g * swap if swap is not None else g)
    gens = _relabel(gens, F.chambers(), F.m)
    return build_group(gens, degree=F.n, order=factorial(F.m) ** F.k)


def product_order_leq(F: ProductStructure, F2: ProductStructure) -> bool:
    """``F <= F2``: ``F2`` has ``k s`` coordinates, grouped by some ``(s, k)``-partition
    of its index set so that each partition of ``F`` refines the ones in its group."""
    if F.n != F2.n:
        raise ValueError(f"domain mismatch: {F.n} != {F2.n}")
    if F2.k % F.k:
        return False
    s = F2.k // F.k
    # ok[i][j]: Omega_i of F refines Omega~_j of F2
    ok = [[refines(F2.partitions[j], F.partitions[i]) for j in range(F2.k)] for i in range(F.k)]

    def assign(i: int, free: frozenset) -> bool:
        if i == F.k:
            return True
        cands = [j for j in free if ok[i][j]]
        for group in combinations(sorted(cands), s):
            if assign(i + 1, free - set(group)):
                return True
        return False

    return assign(0, frozenset(range(F2.k)))


# ---------------------------------------------------------------- chains of product structures

@dataclass(frozen=True)
class ProductChainSpec:
    a: int
    bs: tuple[int, ...]
    ambient: Ambient = "sym"
    relaxed: bool = False

    def __post_init__(self):
        if not self.bs:
            raise ValueError("need at least one branching factor")
        if any(b < 2 for b in self.bs):
            raise ValueError("branching factors must be >= 2")
        if not self.relaxed and (self.a < 5 or self.a % 2 == 0):
            raise ValueError("a must be odd and >= 5")
        if self.a < 2:
            raise ValueError("a must be >= 2")
        if self.ambient != "sym":
            raise ValueError("product chains use the symmetric ambient group")

    @property
    def rank(self) -> int:
        return len(self.bs)

    @property
    def b(self) -> int:
        return prod(self.bs)

    @property
    def n(self) -> int:
        return self.a ** self.b

    def d(self, r: int) -> int:
        """``d_r = b_r ... b_l`` (1-based ``r``; ``d_{l+1} = 1``)."""
        return prod(self.bs[r - 1:])

    def c(self, r: int) -> int:
        return self.b // self.d(r)

    def _check_index(self, j: int) -> None:
        if not 1 <= j <= self.rank:
            raise IndexError(f"index {j} outside 1..{self.rank}")

    def structure(self, r: int, relaxed: bool = False) -> ProductStructure:
        """The ``(a^{c_r}, d_r)``-product structure by super-digits."""
        self._check_index(r)
        m = self.a ** self.c(r)
        k = self.d(r)
        parts = [digit_partition(self.n, m, i) for i in range(k)]
        if relaxed or self.relaxed:
            return ProductStructure.relaxed(m, k, parts)
        return ProductStructure(m, k, parts)

    def tower(self, I: Iterable[int]) -> tuple[int, list[int]]:
        """``(c_{r_1}, factors)`` with ``factors`` the imprimitive tower on ``d_{r_1}`` points."""
        idx = sorted(set(I))
        for j in idx:
            self._check_index(j)
        if not idx:
            return self.b, []
        cuts = idx + [self.rank + 1]
        factors = [prod(self.bs[cuts[t] - 1: cuts[t + 1] - 1]) for t in range(len(idx))]
        return self.c(idx[0]), factors


def product_chain_order(spec: ProductChainSpec, I: Iterable[int]) -> int:
    c, factors = spec.tower(I)
    letters = spec.a ** c
    if not factors:
        return factorial(letters)
    return factorial(letters) ** prod(factors) * tower_order(factors)


def _product_tower_gens(letter_gens: list[list[int]], letters: int, factors: list[int]) -> list[Permutation]:
    k = prod(factors)
    coord = tower_generators(factors, k)
    return product_action_generators(letter_gens, letters, coord, k)


def product_chain_subgroup(spec: ProductChainSpec, I: Iterable[int]) -> GroupHandle:
    I = sorted(set(I))
    c, factors = spec.tower(I)
    letters = spec.a ** c
    name = "M" + "{" + ",".join(map(str, I)) + "}"
    if not factors:
        return symmetric_group(letters)
    gens = _product_tower_gens(_sym_letter_gens(letters), letters, factors)
    return build_group(gens, degree=spec.n, order=product_chain_order(spec, I), name=name)


# ---------------------------------------------------------------- affine groups

AGL_DESK_LIMIT = 81


def agl_order(k: int, p: int) -> int:
    q = p ** k
    return q * prod(q - p ** i for i in range(k))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def _primitive_root(p: int) -> int:
    for w in range(1, p):
        if len({pow(w, e, p) for e in range(1, p)}) == p - 1:
            return w
    raise ValueError(p)


def agl_letter_generators(k: int, p: int) -> list[list[int]]:
    """AGL_k(p) on ``p^k`` vectors, vector ``v`` encoded as ``sum v_i p^i``."""
    q = p ** k
    vecs = [[(x // p ** i) % p for i in range(k)] for x in range(q)]

    def enc(v):
        return sum(c * p ** i for i, c in enumerate(v))

    gens = []
    # translation by e_0
    gens.append([enc([(v[0] + 1) % p] + v[1:]) for v in vecs])
    w = _primitive_root(p) if p > 2 else 1
    if w != 1:
        gens.append([enc([(v[0] * w) % p] + v[1:]) for v in vecs])
    for i in range(k):
        for j in range(k):
            if i != j:
                def tv(v, i=i, j=j):
                    u = list(v)
                    u[i] = (u[i] + u[j]) % p
                    return u
                gens.append([enc(tv(v)) for v in vecs])
    return gens


def agl_group(k: int, p: int) -> GroupHandle:
    if not _is_prime(p):
        raise UnsupportedParameters(f"{p} is not prime")
    if p ** k > AGL_DESK_LIMIT:
        raise UnsupportedParameters(f"AGL_{k}({p}) exceeds the desk-scale limit")
    gens = [Permutation(g) for g in agl_letter_generators(k, p)]
    return build_group(gens, order=agl_order(k, p), name=f"agl:{k}:{p}")


def agl_chain_order(spec: ProductChainSpec, dprime: int, p: int, I: Iterable[int]) -> int:
    c, factors = spec.tower(I)
    block = agl_order(dprime * c, p)
    if not factors:
        return block
    return block ** prod(factors) * tower_order(factors)


def agl_chain_subgroup(spec: ProductChainSpec, I: Iterable[int], p: int | None = None) -> GroupHandle:
    """``AGL_{d' c_{r_1}}(p) wr Z`` in product action, the trace of ``M_I`` on AGL_d(p)."""
    a = spec.a
    if p is None:
        p = next(q for q in range(2, a + 1) if a % q == 0)
    dprime = 0
    x = a
    while x % p == 0:
        x //= p
        dprime += 1
    if x != 1 or not _is_prime(p):
        raise UnsupportedParameters(f"a = {a} is not a power of the prime {p}")
    if spec.n > AGL_DESK_LIMIT:
        raise UnsupportedParameters(f"degree {spec.n} exceeds the desk-scale limit")
    I = sorted(set(I))
    c, factors = spec.tower(I)
    k = dprime * c
    letters = p ** k
    letter_gens = agl_letter_generators(k, p)
    order = agl_chain_order(spec, dprime, p, I)
    if not factors:
        gens = [Permutation(g) for g in letter_gens]
    else:
        gens = _product_tower_gens(letter_gens, letters, factors)
    return build_group(gens, degree=spec.n, order=order, name=f"AGL-M{{{','.join(map(str, I))}}}")


# ---------------------------------------------------------------- atom indices

def atom_index_formula(spec: PartitionChainSpec | ProductChainSpec, j: int) -> int:
    """``|A_j : H|`` with ``A_j = M_{{1..l} minus {j}}``, from the closed forms."""
    spec._check_index(j)
    if isinstance(spec, PartitionChainSpec):
        nn = spec.full_ladder
        lo, mid, hi = nn[j - 1], nn[j], nn[j + 1]
        top = factorial(lo // hi)
        bottom = factorial(lo // mid) ** (mid // hi) * factorial(mid // hi)
        return (top // bottom) ** hi
    bs = spec.bs
    tail = prod(bs[j:])
    if j == 1:
        top = factorial(spec.a ** bs[0])
        bottom = factorial(spec.a) ** bs[0] * factorial(bs[0])
    else:
        bp, bj = bs[j - 2], bs[j - 1]
        top = factorial(bp * bj)
        bottom = factorial(bp) ** bj * factorial(bj)
    return (top // bottom) ** tail


def product_parity_flags(m: int, k: int) -> dict[str, bool]:
    """Which of ``K`` (kernel) and ``M = N(F)`` lie in Alt, by generator parity."""
    coord = sym_generators(range(k), k)
    letters = _sym_letter_gens(m)
    kernel = product_action_generators(letters, m, [], k)
    top = product_action_generators([], m, coord, k)
    kernel_even = all(parity(g) == 1 for g in kernel)
    return {"kernel_even": kernel_even,
            "stabilizer_even": kernel_even and all(parity(g) == 1 for g in top)}
