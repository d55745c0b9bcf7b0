import random
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boolattice.groups import (DegreeCapExceeded, IndexCapExceeded, NotASubgroup, OrderMismatch,
                               alternating_group, build_group, coset_representatives,
                               double_coset_classes, even_part, generated_with, index, intersect,
                               is_block, is_subgroup, join, minimal_block_system, orbits,
                               point_stabilizer, symmetric_group, trivial_group)
from boolattice.perm import Permutation, parity


def brute_closure(gens, n):
    """Element set of <gens> by naive closure, independent of the chain."""
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g.images) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def gen_sets(max_n=6, max_gens=3):
    return st.integers(2, max_n).flatmap(
        lambda n: st.lists(st.permutations(list(range(n))).map(Permutation), min_size=1, max_size=max_gens))


@pytest.mark.parametrize("n", range(1, 9))
def test_symmetric_and_alternating_orders(n):
    assert symmetric_group(n).order == factorial(n)
    assert alternating_group(n).order == max(1, factorial(n) // 2)


def test_build_group_generic_orders():
    m = [Permutation.from_cycles([(0, 1, 2, 3, 4)], 5), Permutation.from_cycles([(0, 1)], 5)]
    assert build_group(m).order == 120
    d = [Permutation.from_cycles([(0, 1, 2, 3)], 4), Permutation.from_cycles([(0, 2)], 4)]
    assert build_group(d).order == 8
    assert trivial_group(6).order == 1


def test_order_bound_mismatch_raises():
    gens = [Permutation.from_cycles([(0, 1, 2, 3)], 4), Permutation.from_cycles([(0, 2)], 4)]
    with pytest.raises(OrderMismatch):
        build_group(gens, order=24)
    assert build_group(gens, order_bound=24).order == 8


def test_empty_generators_need_degree():
    with pytest.raises(ValueError):
        build_group([])


@settings(max_examples=60, deadline=None)
@given(gen_sets())
def test_order_and_membership_match_brute_force(gens):
    n = gens[0].degree
    G = build_group(gens)
    elems = brute_closure(gens, n)
    assert G.order == len(elems)
    assert {tuple(g.images) for g in G.elements()} == elems
    rng = random.Random(1)
    for _ in range(10):
        p = list(range(n))
        rng.shuffle(p)
        assert G.contains(Permutation(p)) == (tuple(p) in elems)


@settings(max_examples=40, deadline=None)
@given(gen_sets(), gen_sets())
def test_intersection_matches_brute_force(a, b):
    if a[0].degree != b[0].degree:
        b = [Permutation(tuple(range(a[0].degree)))]
    n = a[0].degree
    A, B = build_group(a), build_group(b)
    expected = brute_closure(a, n) & brute_closure(b, n)
    C = intersect(A, B)
    assert {tuple(g.images) for g in C.elements()} == expected


@settings(max_examples=40, deadline=None)
@given(gen_sets())
def test_even_part_is_sign_kernel(gens):
    n = gens[0].degree
    A = build_group(gens)
    E = even_part(A)
    expected = {p for p in brute_closure(gens, n) if parity(Permutation(p)) == 1}
    assert {tuple(g.images) for g in E.elements()} == expected


@settings(max_examples=40, deadline=None)
@given(gen_sets(max_gens=2), gen_sets(max_gens=2))
def test_join_matches_brute_force(a, b):
    if a[0].degree != b[0].degree:
        return
    n = a[0].degree
    J = join(n, build_group(a), build_group(b))
    assert J.order == len(brute_closure(a + b, n))
    assert generated_with(build_group(a), b).order == J.order


def test_intersect_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        intersect(symmetric_group(17), alternating_group(17), degree_cap=16)
    with pytest.raises(DegreeCapExceeded):
        intersect(symmetric_group(6), alternating_group(6), degree_cap=5)


def test_intersect_stabilisers():
    S6 = symmetric_group(6)
    A = point_stabilizer(S6, 0)
    B = point_stabilizer(S6, 1)
    assert intersect(A, B).order == 24


def test_cosets_and_index():
    S5 = symmetric_group(5)
    A5 = alternating_group(5)
    S4 = point_stabilizer(S5, 4)
    assert index(S5, S4) == 5
    reps = coset_representatives(S5, S4)
    assert len(reps) == 5
    # distinct right cosets: S4 r_i r_j^-1 membership
    for i, x in enumerate(reps):
        for y in reps[i + 1:]:
            assert not S4.contains(x * y.inverse())
    assert len(coset_representatives(S5, A5)) == 2


def test_coset_cap_and_non_subgroup():
    S8 = symmetric_group(8)
    with pytest.raises(IndexCapExceeded) as info:
        coset_representatives(S8, trivial_group(8), cap=1000)
    assert info.value.index == 40320
    C = build_group([Permutation.from_cycles([(0, 1, 2)], 5)])
    D = build_group([Permutation.from_cycles([(0, 1)], 5)])
    with pytest.raises(NotASubgroup):
        coset_representatives(C, D)


def test_double_coset_counts():
    S4 = symmetric_group(4)
    S3 = point_stabilizer(S4, 3)
    _, cls = double_coset_classes(S4, S3)
    assert len(set(cls)) == 2
    S2 = build_group([Permutation.from_cycles([(0, 1)], 4)])
    _, cls = double_coset_classes(S4, S2)
    # brute force: double cosets S2 g S2
    els = list(S4.elements())
    h = list(S2.elements())
    seen = set()
    for g in els:
        seen.add(frozenset(tuple((a * g * b).images) for a in h for b in h))
    assert len(set(cls)) == len(seen)


def test_subgroup_relation():
    assert is_subgroup(alternating_group(5), symmetric_group(5))
    assert not is_subgroup(symmetric_group(5), alternating_group(5))


def test_orbits_and_blocks():
    g = [Permutation.from_cycles([(0, 1), (2, 3)], 6)]
    assert orbits(6, g) == [[0, 1], [2, 3], [4], [5]]
    c = [Permutation.from_cycles([(0, 1, 2, 3, 4, 5)], 6)]
    assert is_block(6, c, [0, 3])
    assert not is_block(6, c, [0, 1])
    blocks = minimal_block_system(6, c, [0, 2])
    assert sorted(map(sorted, blocks)) == [[0, 2, 4], [1, 3, 5]]


def test_elements_arrays_agree():
    G = alternating_group(4)
    a = {tuple(x.tolist()) for x in G.element_arrays()}
    b = {tuple(g.images) for g in G.elements()}
    assert a == b and len(a) == 12
    assert all(isinstance(x, np.ndarray) for x in G.element_arrays())


def test_product_formula_on_s4(s4_oracle):
    o = s4_oracle
    subs = o.subgroups
    handles = [o.handle(m) for m in subs]
    equal = 0
    for i, A in enumerate(subs):
        for j, B in enumerate(subs):
            AvB = join(4, handles[i], handles[j])
            AnB = intersect(handles[i], handles[j])
            assert AvB.order % handles[i].order == 0 and handles[i].order % AnB.order == 0
            lhs = handles[i].order * handles[j].order
            assert lhs <= AvB.order * AnB.order
            prod = np.zeros(o.size, dtype=bool)
            prod[np.unique(o.mult[np.ix_(np.flatnonzero(A), np.flatnonzero(B))])] = True
            assert (lhs == AvB.order * AnB.order) == (int(prod.sum()) == AvB.order)
            equal += lhs == AvB.order * AnB.order
    assert 0 < equal < len(subs) ** 2


@given(gen_sets(7, 3))
@settings(max_examples=40, deadline=None)
def test_even_part_index_and_generators(gens):
    G = build_group(gens)
    E = even_part(G)
    assert G.order // E.order in (1, 2) and E.all_even()
    assert all(E.contains(g) for g in gens if parity(g) == 1)
