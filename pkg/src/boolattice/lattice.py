"""Overgroup intervals ``O_G(H)``: enumeration, structure and Boolean certificates.

Enumeration uses the fact that every ``K`` with ``H <= K <= G`` is the join of
the subgroups ``<H, g>`` for ``g`` in ``K``, so the interval is the
join-closure of the family ``{<H, g>}``.  Since ``<H, h g h'> = <H, g>``, one
``g`` per double coset ``H g H`` suffices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .groups import (DEFAULT_INDEX_CAP, GroupHandle, IndexCapExceeded, NotASubgroup, build_group, coset_representatives_arrays,
                     double_coset_classes, generated_with, intersect, is_subgroup, join, _perm)
from .perm import Permutation


class LatticeError(Exception):
    pass


class LatticeNotBoolean(LatticeError):
    pass


def _group_key(K: GroupHandle) -> tuple:
    return (K.order, tuple(tuple(o) for o in K.orbits()))


class _GroupPool:
    """Distinct subgroups, identified by order and orbits then mutual membership."""

    def __init__(self):
        self.groups: list[GroupHandle] = []
        self.buckets: dict[tuple, list[int]] = {}

    def find(self, K: GroupHandle) -> int | None:
        for i in self.buckets.get(_group_key(K), []):
            if is_subgroup(K, self.groups[i]):
                return i
        return None

    def add(self, K: GroupHandle) -> tuple[int, bool]:
        i = self.find(K)
        if i is not None:
            return i, False
        self.buckets.setdefault(_group_key(K), []).append(len(self.groups))
        self.groups.append(K)
        return len(self.groups) - 1, True


@dataclass
class IntervalLattice:
    """A finite interval of subgroups with its order relation.

    Elements are sorted by increasing order, so element 0 is the bottom and
    the last element is the top; ``leq[i][j]`` means element ``i`` is
    contained in element ``j``.
    """

    degree: int
    orders: list[int]
    leq: list[list[bool]]
    provenance: list[str]
    names: list[str]
    generators: list[list[list[int]]]
    groups: list[GroupHandle | None] = field(default_factory=list)
    certification: str = "enumerate"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.orders)
        if not self.groups:
            self.groups = [None] * n
        if not (len(self.leq) == len(self.provenance) == len(self.names) == n):
            raise LatticeError("inconsistent lattice data")
        self._check_partial_order()

    # ------------------------------------------------------------ basics
    def __len__(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        return len(self.orders)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.orders) - 1

    @property
    def H(self) -> GroupHandle | None:
        return self.groups[self.bottom]

    @property
    def G(self) -> GroupHandle | None:
        return self.groups[self.top]

    def _check_partial_order(self) -> None:
        n = len(self.orders)
        A = np.array(self.leq, dtype=bool).reshape(n, n)
        if not A.diagonal().all():
            raise LatticeError("leq is not reflexive")
        if n and not (A[0].all() and A[:, n - 1].all()):
            raise LatticeError("bottom or top is not extremal")
        if (A & A.T & ~np.eye(n, dtype=bool)).any():
            raise LatticeError("leq is not antisymmetric")
        for i, j in zip(*np.nonzero(A)):
            if self.orders[j] % self.orders[i]:
                raise LatticeError("containment violates Lagrange")
        F = A.astype(np.float32)
        if ((F @ F > 0) & ~A).any():
            raise LatticeError("leq is not transitive")

    def index_of(self, i: int) -> int:
        """``|G : K_i|``."""
        return self.orders[self.top] // self.orders[i]

    def index(self, i: int, j: int) -> int:
        """``|K_j : K_i|`` for ``K_i <= K_j``."""
        if not self.leq[i][j]:
            raise LatticeError(f"{i} is not below {j}")
        return self.orders[j] // self.orders[i]

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq[i][j]

    def upper_bounds(self, i: int, j: int) -> list[int]:
        return [k for k in range(self.size) if self.leq[i][k] and self.leq[j][k]]

    def lower_bounds(self, i: int, j: int) -> list[int]:
        return [k for k in range(self.size) if self.leq[k][i] and self.leq[k][j]]

    def join(self, i: int, j: int) -> int:
        ub = self.upper_bounds(i, j)
        least = [k for k in ub if all(self.leq[k][u] for u in ub)]
        if len(least) != 1:
            raise LatticeError(f"no join for {i}, {j}")
        return least[0]

    def meet(self, i: int, j: int) -> int:
        lb = self.lower_bounds(i, j)
        great = [k for k in lb if all(self.leq[u][k] for u in lb)]
        if len(great) != 1:
            raise LatticeError(f"no meet for {i}, {j}")
        return great[0]

    def join_many(self, ids: Iterable[int]) -> int:
        acc = self.bottom
        for i in ids:
            acc = self.join(acc, i)
        return acc

    def is_lattice(self) -> bool:
        try:
            for i, j in combinations(range(self.size), 2):
                self.join(i, j)
                self.meet(i, j)
        except LatticeError:
            return False
        return True

    def _cover_matrix(self) -> np.ndarray:
        cache = self.__dict__.get("_covers")
        if cache is None:
            n = self.size
            S = np.array(self.leq, dtype=bool).reshape(n, n) & ~np.eye(n, dtype=bool)
            F = S.astype(np.float32)
            cache = S & ~(F @ F > 0)
            self.__dict__["_covers"] = cache
        return cache

    def covers(self, i: int) -> list[int]:
        """Elements covering ``i``."""
        return [int(k) for k in np.flatnonzero(self._cover_matrix()[i])]

    @property
    def hasse_edges(self) -> list[tuple[int, int]]:
        return [(i, k) for i in range(self.size) for k in self.covers(i)]

    @property
    def atoms(self) -> list[int]:
        return self.covers(self.bottom) if self.size > 1 else []

    @property
    def coatoms(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self._cover_matrix()[:, self.top])]

    def sub_interval(self, lo: int, hi: int) -> "IntervalLattice":
        """The interval ``[lo, hi]`` as a lattice of its own."""
        ids = [k for k in range(self.size) if self.leq[lo][k] and self.leq[k][hi]]
        return IntervalLattice(
            degree=self.degree,
            orders=[self.orders[k] for k in ids],
            leq=[[self.leq[a][b] for b in ids] for a in ids],
            provenance=[self.provenance[k] for k in ids],
            names=[self.names[k] for k in ids],
            generators=[self.generators[k] for k in ids],
            groups=[self.groups[k] for k in ids],
            certification=self.certification,
            meta={"parent_ids": ids},
        )

    def find_group(self, K: GroupHandle) -> int | None:
        for i, g in enumerate(self.groups):
            if g is not None and g.order == K.order and is_subgroup(K, g):
                return i
        return None

    # ------------------------------------------------------------ Moebius
    def moebius_table(self) -> list[list[int]]:
        cache = self.__dict__.get("_mu")
        if cache is not None:
            return cache
        n = self.size
        mu = [[0] * n for _ in range(n)]
        for x in range(n):
            mu[x][x] = 1
            for y in range(x + 1, n):
                if self.lt(x, y):
                    mu[x][y] = -sum(mu[x][z] for z in range(x, y) if self.leq[x][z] and self.lt(z, y))
        self.__dict__["_mu"] = mu
        return mu

    def moebius(self, x: int, y: int) -> int:
        if not self.leq[x][y]:
            raise LatticeError(f"elements {x} and {y} are not comparable as x <= y")
        return self.moebius_table()[x][y]

    # ------------------------------------------------------------ chains
    def maximal_chain_lengths(self) -> set[int]:
        memo: dict[int, set[int]] = {}

        def lengths(i: int) -> set[int]:
            if i == self.top:
                return {1}
            if i not in memo:
                memo[i] = {1 + l for c in self.covers(i) for l in lengths(c)}
            return memo[i]

        return lengths(self.bottom)

    # ------------------------------------------------------------ serialization
    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "certification": self.certification,
            "elements": [
                {"id": i, "name": self.names[i], "order": str(self.orders[i]),
                 "index": str(self.index_of(i)), "provenance": self.provenance[i],
                 "generators": self.generators[i]}
                for i in range(self.size)
            ],
            "leq": [[i, j] for i in range(self.size) for j in range(self.size) if self.leq[i][j]],
            "hasse": [list(e) for e in self.hasse_edges],
            "meta": {k: v for k, v in self.meta.items() if _jsonable(v)},
        }

    @classmethod
    def from_dict(cls, data: dict, rebuild: bool = False) -> "IntervalLattice":
        els = sorted(data["elements"], key=lambda e: e["id"])
        n = len(els)
        leq = [[False] * n for _ in range(n)]
        for i, j in data["leq"]:
            leq[i][j] = True
        gens = [e["generators"] for e in els]
        orders = [int(e["order"]) for e in els]
        groups: list[GroupHandle | None] = [None] * n
        if rebuild:
            groups = [build_group([Permutation(g) for g in gs], degree=data["degree"], order=o)
                      for gs, o in zip(gens, orders)]
        return cls(degree=data["degree"], orders=orders, leq=leq,
                   provenance=[e["provenance"] for e in els], names=[e["name"] for e in els],
                   generators=gens, groups=groups, certification=data.get("certification", "enumerate"),
                   meta=dict(data.get("meta", {})))

    def to_json(self, **extra) -> str:
        d = self.to_dict()
        d.update(extra)
        return json.dumps(d, indent=1)

    def to_dot(self) -> str:
        lines = ["digraph interval {", "  rankdir=BT;", "  node [shape=box];"]
        for i in range(self.size):
            label = f"{self.names[i]}\\n|K| = {self.orders[i]}"
            lines.append(f'  n{i} [label="{label}"];')
        for a, b in self.hasse_edges:
            lines.append(f"  n{a} -> n{b} [arrowhead=none];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _jsonable(v) -> bool:
    try:
        json.dumps(v)
        return True
    except TypeError:
        return False


def _gens_of(K: GroupHandle) -> list[list[int]]:
    return [list(g.images) for g in K.generators if not g.is_identity()]


def lattice_from_groups(groups: Sequence[GroupHandle], provenance: str | Sequence[str],
                        names: Sequence[str] | None = None, certification: str = "enumerate",
                        leq: list[list[bool]] | None = None, meta: dict | None = None) -> IntervalLattice:
    """Sort by order and record containment (computed by sifting unless given)."""
    n = len(groups)
    prov = [provenance] * n if isinstance(provenance, str) else list(provenance)
    names = list(names) if names is not None else [K.name or "" for K in groups]
    order = sorted(range(n), key=lambda i: (groups[i].order, i))
    gs = [groups[i] for i in order]
    if leq is None:
        L = [[i == j or (gs[i].order < gs[j].order and is_subgroup(gs[i], gs[j])) for j in range(n)]
             for i in range(n)]
    else:
        L = [[leq[order[i]][order[j]] for j in range(n)] for i in range(n)]
    nm = [names[i] or f"K{k}" for k, i in enumerate(order)]
    return IntervalLattice(
        degree=gs[0].degree, orders=[K.order for K in gs], leq=L,
        provenance=[prov[i] for i in order], names=nm, generators=[_gens_of(K) for K in gs],
        groups=gs, certification=certification, meta=dict(meta or {}, input_order=order),
    )


EXPLICIT_ORDER_LIMIT = 2520
EXPLICIT_DEGREE_LIMIT = 15


class _ElementTable:
    """The elements of a small group ``G`` with a full multiplication table.

    Subgroups of ``G`` become boolean masks over the element list, so
    membership is a lookup and deduplication is a dictionary hit.
    """

    def __init__(self, G: GroupHandle):
        n = G.degree
        E = np.array(list(G.element_arrays()), dtype=np.int64).reshape(-1, n)
        self.weights = n ** np.arange(n, dtype=np.int64)
        codes = E @ self.weights
        order = np.argsort(codes)
        self.E = E[order]
        self.codes = codes[order]
        self.N = len(self.E)
        # mult[i, j]: apply element i, then element j
        self.mult = np.empty((self.N, self.N), dtype=np.int32)
        for j in range(self.N):
            self.mult[:, j] = np.searchsorted(self.codes, self.E[j][self.E] @ self.weights)
        self.identity = int(np.searchsorted(self.codes, np.arange(n, dtype=np.int64) @ self.weights))

    def index(self, g: np.ndarray) -> int:
        return int(np.searchsorted(self.codes, np.asarray(g, dtype=np.int64) @ self.weights))

    def closure(self, gens: Sequence[int], start: np.ndarray | None = None) -> np.ndarray:
        """Mask of the subgroup generated by ``gens`` (and the subgroup ``start``)."""
        mask = np.zeros(self.N, dtype=bool)
        if start is None:
            mask[self.identity] = True
            frontier = np.array([self.identity])
        else:
            mask |= start
            frontier = np.flatnonzero(start)
        g = np.asarray(gens, dtype=np.intp)
        if not g.size:
            return mask
        while frontier.size:
            nxt = self.mult[frontier[:, None], g].ravel()
            nxt = nxt[~mask[nxt]]
            if not nxt.size:
                break
            fresh = np.zeros(self.N, dtype=bool)
            fresh[nxt] = True
            mask |= fresh
            frontier = np.flatnonzero(fresh)
        return mask

    def double_coset(self, K: np.ndarray, g: int) -> np.ndarray:
        k = np.flatnonzero(K)
        mask = np.zeros(self.N, dtype=bool)
        mask[self.mult[self.mult[k, g][:, None], k].ravel()] = True
        return mask


def _enumerate_explicit(G: GroupHandle, H: GroupHandle) -> tuple[list[GroupHandle], dict]:
    T = _ElementTable(G)
    hgens = [T.index(h.images) for h in H.generators if not h.is_identity()]
    hmask = T.closure(hgens)
    if hmask.sum() != H.order:
        raise LatticeError("explicit element table disagrees with the order of H")
    # join-irreducibles <H, g>, one g per double coset HgH
    irreducible: list[int] = []
    covered = hmask.copy()
    for g in range(T.N):
        if not covered[g]:
            irreducible.append(g)
            covered |= T.double_coset(hmask, g)
    # upward closure: K v <H, g> = <K, g>; within one K, elements of an
    # already used double coset KgK give the same join
    masks = [hmask]
    gens = [hgens]
    seen = {hmask.tobytes(): 0}
    cyclic = set()
    q = 0
    while q < len(masks):
        K = masks[q]
        covered = K.copy()
        for g in irreducible:
            if covered[g]:
                continue
            covered |= T.double_coset(K, g)
            M = T.closure(gens[q] + [g])
            key = M.tobytes()
            if key not in seen:
                seen[key] = len(masks)
                masks.append(M)
                gens.append(gens[q] + [g])
            if q == 0:
                cyclic.add(seen[key])
        q += 1
    groups = []
    for M, gs in zip(masks, gens):
        perms = [_perm(T.E[i]) for i in gs] or [Permutation.identity(G.degree)]
        groups.append(build_group(perms, degree=G.degree, order=int(M.sum())))
    A = np.array(masks, dtype=np.float32)
    sizes = A.sum(axis=1)
    leq = (A @ A.T) == sizes[:, None]
    meta = {"cosets": T.N // H.order, "generating_reps": len(irreducible), "cyclic_over_H": len(cyclic) + 1,
            "double_cosets": True, "explicit": True}
    return groups, {"leq": leq.tolist(), "meta": meta}


def enumerate_interval(G: GroupHandle, H: GroupHandle, cap: int = DEFAULT_INDEX_CAP,
                       double_cosets: bool = True, explicit: bool | None = None) -> IntervalLattice:
    """All subgroups between ``H`` and ``G``.

    Computes ``<H, g>`` for one ``g`` per double coset (or per right coset
    when ``double_cosets`` is false), then closes under joins with these
    generators.  For small ``G`` (``explicit``, automatic by default) the
    same closure runs on element masks over a multiplication table.
    """
    if G.degree != H.degree:
        raise ValueError(f"degree mismatch: {G.degree} != {H.degree}")
    if not is_subgroup(H, G):
        raise NotASubgroup("H is not a subgroup of G")
    if explicit is None:
        explicit = double_cosets and G.order <= EXPLICIT_ORDER_LIMIT and G.degree <= EXPLICIT_DEGREE_LIMIT
    if explicit:
        if G.order // H.order > cap:
            raise IndexCapExceeded(G.order // H.order, cap)
        groups, extra = _enumerate_explicit(G, H)
        L = lattice_from_groups(groups, "enumerated", leq=extra["leq"], meta=extra["meta"])
        if L.orders[-1] != G.order or L.orders[0] != H.order:
            raise LatticeError("enumeration lost the top or bottom")
        return L
    if double_cosets:
        reps, cls = double_coset_classes(G, H, cap)
        firsts = [i for i in range(len(reps)) if cls[i] == i]
    else:
        reps, _ = coset_representatives_arrays(G, H, cap)
        firsts = list(range(len(reps)))
    pool = _GroupPool()
    pool.add(H)
    irreducible: list[Permutation] = []
    for i in firsts[1:]:
        g = _perm(reps[i])
        _, new = pool.add(generated_with(H, [g]))
        if new:
            irreducible.append(g)
    n_generated = len(pool.groups)
    # upward closure: K v <H, g> = <K, g>
    q = 1
    while q < len(pool.groups):
        K = pool.groups[q]
        for g in irreducible:
            if not K.contains(g):
                pool.add(generated_with(K, [g]))
        q += 1
    if pool.find(G) is None:
        pool.add(G)
    meta = {"cosets": len(reps), "generating_reps": len(firsts),
            "cyclic_over_H": n_generated, "double_cosets": double_cosets}
    L = lattice_from_groups(pool.groups, "enumerated", meta=meta)
    if L.orders[-1] != G.order or L.orders[0] != H.order:
        raise LatticeError("enumeration lost the top or bottom")
    return L


def is_maximal(G: GroupHandle, M: GroupHandle, cap: int = DEFAULT_INDEX_CAP) -> bool:
    if M.order == G.order:
        raise ValueError("M must be a proper subgroup")
    return enumerate_interval(G, M, cap).size == 2


def maximal_chain_lengths(L: IntervalLattice) -> set[int]:
    return L.maximal_chain_lengths()


def moebius(L: IntervalLattice, x: int, y: int) -> int:
    return L.moebius(x, y)


# ---------------------------------------------------------------- Boolean certificates

@dataclass
class BooleanCertificate:
    rank: int
    atoms: list[int]
    coatoms: list[int]
    complement: dict[int, int]
    atom_indices: list[int]
    subsets: dict[int, frozenset]
    guarantee: str

    def to_dict(self) -> dict:
        return {
            "rank": self.rank, "atoms": self.atoms, "coatoms": self.coatoms,
            "complement": {str(k): v for k, v in self.complement.items()},
            "atom_indices": [str(a) for a in self.atom_indices],
            "guarantee": self.guarantee,
        }


@dataclass
class NotBoolean:
    reason: str
    witness: tuple = ()

    def __bool__(self) -> bool:
        return False

    def to_dict(self) -> dict:
        return {"boolean": False, "reason": self.reason, "witness": list(self.witness)}


def boolean_certificate(L: IntervalLattice) -> BooleanCertificate | NotBoolean:
    atoms = L.atoms
    rank = len(atoms)
    if L.size != 2 ** rank:
        return NotBoolean(f"{L.size} elements but {rank} atoms", (L.size, rank))
    subsets: dict[int, frozenset] = {}
    for r in range(rank + 1):
        for S in combinations(range(rank), r):
            try:
                k = L.join_many(atoms[s] for s in S)
            except LatticeError as exc:
                return NotBoolean(str(exc))
            if k in subsets:
                return NotBoolean("two atom subsets have the same join", (sorted(subsets[k]), list(S)))
            subsets[k] = frozenset(S)
    for x in range(L.size):
        for y in range(L.size):
            if L.leq[x][y] != (subsets[x] <= subsets[y]):
                return NotBoolean("order is not inclusion of atom subsets", (x, y))
    by_subset = {S: k for k, S in subsets.items()}
    full = frozenset(range(rank))
    complement = {k: by_subset[full - S] for k, S in subsets.items()}
    for k, c in complement.items():
        if L.meet(k, c) != L.bottom or L.join(k, c) != L.top:
            return NotBoolean("complement check failed", (k, c))
    if L.maximal_chain_lengths() != {rank + 1}:
        return NotBoolean("maximal chains of unequal length", sorted(L.maximal_chain_lengths()))
    # coatom M_i is the complement of atom A_i
    coatoms = [complement[a] for a in atoms]
    return BooleanCertificate(
        rank=rank, atoms=atoms, coatoms=coatoms, complement=complement,
        atom_indices=[L.index(L.bottom, a) for a in atoms], subsets=subsets,
        guarantee=L.certification,
    )


# ---------------------------------------------------------------- constructed intervals

def constructed_interval(members: dict[frozenset, GroupHandle], expected_orders: dict[frozenset, int],
                         degree_cap: int = 16, certification: str = "formula",
                         label: str = "M") -> IntervalLattice:
    """Lattice of the subgroups ``M_I`` indexed by subsets ``I``.

    ``members[I]`` must be ``M_I``; containment is reverse inclusion of index
    sets.  Certifies orders against ``expected_orders``, containments by
    sifting, joins ``M_I v M_J = M_{I & J}`` by generated-group order, and meets
    ``M_I ^ M_J = M_{I | J}`` by backtrack intersection when the degree allows.
    """
    keys = sorted(members, key=lambda I: (-len(I), sorted(I)))
    for I in keys:
        if members[I].order != expected_orders[I]:
            raise LatticeError(f"order of {label}{sorted(I)} differs from its closed form")
    for I in keys:
        for J in keys:
            if I >= J and I != J and not is_subgroup(members[I], members[J]):
                raise LatticeError(f"{label}{sorted(I)} is not inside {label}{sorted(J)}")
    joins = meets = 0
    for I, J in combinations(keys, 2):
        if I <= J or J <= I:
            continue
        A, B = members[I], members[J]
        top = members[I & J]
        Jn = join(A.degree, A, B, order=top.order)
        if Jn.order != top.order:
            raise LatticeError("join order differs from the closed form")
        joins += 1
        if A.degree <= degree_cap:
            M = intersect(A, B, degree_cap)
            if not M.same_group(members[I | J]):
                raise LatticeError("backtrack meet differs from the constructed subgroup")
            meets += 1
    n = len(keys)
    leq = [[keys[j] <= keys[i] for j in range(n)] for i in range(n)]
    names = [label + "{" + ",".join(map(str, sorted(I))) + "}" for I in keys]
    groups = [members[I] for I in keys]
    L = lattice_from_groups(groups, "constructed", names=names, certification=certification, leq=leq,
                            meta={"joins_certified": joins, "meets_by_backtrack": meets,
                                  "index_sets": [sorted(I) for I in keys]})
    return L


def same_elements(L1: IntervalLattice, L2: IntervalLattice) -> bool:
    """Element-for-element agreement (groups needed on both sides)."""
    if L1.size != L2.size:
        return False
    used = set()
    for K in L1.groups:
        hit = [i for i, K2 in enumerate(L2.groups)
               if i not in used and K2.order == K.order and is_subgroup(K, K2)]
        if not hit:
            return False
        used.add(hit[0])
    return True
