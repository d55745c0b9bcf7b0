"""Constructed lattices ``{M_I}`` for partition chains and product chains.

With ``with_alt`` a partition chain in Sym(n) gains the extra index ``l+1``
whose stabilizer is Alt(n); ``M_I`` for ``I`` containing ``l+1`` is then the
even part of ``M_{I - {l+1}}``.
"""

from __future__ import annotations

from itertools import chain, combinations

from .groups import DEFAULT_DEGREE_CAP, GroupHandle, even_part
from .lattice import IntervalLattice, constructed_interval
from .structures import (PartitionChainSpec, ProductChainSpec, partition_chain_order,
                         partition_chain_subgroup, product_chain_order, product_chain_subgroup)


def index_sets(rank: int) -> list[frozenset]:
    idx = range(1, rank + 1)
    return [frozenset(c) for c in chain.from_iterable(combinations(idx, r) for r in range(rank + 1))]


def partition_chain_members(spec: PartitionChainSpec, with_alt: bool = False
                            ) -> tuple[dict[frozenset, GroupHandle], dict[frozenset, int]]:
    """``(members, expected_orders)`` over all index sets."""
    if with_alt and spec.ambient != "sym":
        raise ValueError("with_alt needs the symmetric ambient group")
    l = spec.rank
    members: dict[frozenset, GroupHandle] = {}
    orders: dict[frozenset, int] = {}
    halve = spec.ambient == "alt"
    for I in index_sets(l):
        members[I] = partition_chain_subgroup(spec, I)
        orders[I] = partition_chain_order(spec, I) // (2 if halve else 1)
    if with_alt:
        alt = l + 1
        for I in index_sets(l):
            J = I | {alt}
            E = even_part(members[I])
            E.name = "M{" + ",".join(map(str, sorted(J))) + "}"
            members[J] = E
            orders[J] = orders[I] // 2
    return members, orders


def partition_chain_lattice(spec: PartitionChainSpec, with_alt: bool = False,
                            degree_cap: int = DEFAULT_DEGREE_CAP) -> IntervalLattice:
    members, orders = partition_chain_members(spec, with_alt)
    L = constructed_interval(members, orders, degree_cap=degree_cap)
    L.meta.update({"flavor": "partition-chain", "n": spec.n, "ladder": list(spec.ladder),
                   "ambient": spec.ambient, "with_alt": with_alt})
    return L


def product_chain_members(spec: ProductChainSpec
                          ) -> tuple[dict[frozenset, GroupHandle], dict[frozenset, int]]:
    members = {I: product_chain_subgroup(spec, I) for I in index_sets(spec.rank)}
    orders = {I: product_chain_order(spec, I) for I in members}
    return members, orders


def product_chain_lattice(spec: ProductChainSpec, degree_cap: int = DEFAULT_DEGREE_CAP) -> IntervalLattice:
    members, orders = product_chain_members(spec)
    L = constructed_interval(members, orders, degree_cap=degree_cap)
    L.meta.update({"flavor": "product-chain", "a": spec.a, "bs": list(spec.bs), "n": spec.n})
    return L
