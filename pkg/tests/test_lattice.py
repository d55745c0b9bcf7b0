import json
import random
from collections import Counter

import pytest

from boolattice.chains import partition_chain_lattice
from boolattice.groups import (IndexCapExceeded, NotASubgroup, alternating_group, build_group,
                               point_stabilizer, symmetric_group, trivial_group)
from boolattice.lattice import (IntervalLattice, LatticeError, NotBoolean, boolean_certificate,
                                constructed_interval, enumerate_interval, is_maximal,
                                lattice_from_groups, same_elements)
from boolattice.perm import Permutation
from boolattice.structures import PartitionChainSpec


def cyc(n, *cycles):
    return Permutation.from_cycles(list(cycles), n)


def naive_moebius(leq, x, y):
    """mu(x, y) by the defining recursion over the elements strictly between."""
    memo = {}

    def mu(a):
        if a == x:
            return 1
        if a not in memo:
            memo[a] = -sum(mu(z) for z in range(len(leq)) if z != a and leq[x][z] and leq[z][a])
        return memo[a]

    return mu(y) if leq[x][y] else 0


def oracle_summary(oracle, G, H):
    ks = oracle.interval(G, H)
    return Counter(int(K.sum()) for K in ks), ks


def lattice_summary(L):
    return Counter(L.orders)


@pytest.fixture(scope="module")
def s3_interval():
    return enumerate_interval(symmetric_group(3), trivial_group(3))


def test_small_interval_facts(s3_interval):
    L = s3_interval
    assert L.size == 6
    assert L.orders == [1, 2, 2, 2, 3, 6]
    assert L.bottom == 0 and L.top == 5
    assert sorted(L.orders[a] for a in L.atoms) == [2, 2, 2, 3]
    assert L.coatoms == L.atoms
    assert L.maximal_chain_lengths() == {3}
    assert L.moebius(L.bottom, L.top) == 3


def test_singleton_and_rank_one():
    G = symmetric_group(4)
    L = enumerate_interval(G, G)
    assert L.size == 1 and L.bottom == L.top == 0
    assert L.moebius(0, 0) == 1
    cert = boolean_certificate(L)
    assert cert and cert.rank == 0
    M = point_stabilizer(G, 0)
    L1 = enumerate_interval(G, M)
    cert = boolean_certificate(L1)
    assert cert and cert.rank == 1 and cert.atom_indices == [4]


def test_not_boolean(s3_interval):
    nb = boolean_certificate(s3_interval)
    assert isinstance(nb, NotBoolean) and not nb
    assert "atoms" in nb.reason
    assert nb.to_dict()["boolean"] is False


def test_boolean_cyclic_six():
    # C6 = <(0 1)(2 3 4)> inside S5, interval [1, C6] is B_2
    G = build_group([cyc(5, (0, 1), (2, 3, 4))])
    L = enumerate_interval(G, trivial_group(5))
    cert = boolean_certificate(L)
    assert cert.rank == 2
    assert sorted(cert.atom_indices) == [2, 3]
    assert {L.orders[c] for c in cert.coatoms} == {2, 3}
    for k, c in cert.complement.items():
        assert L.meet(k, c) == L.bottom and L.join(k, c) == L.top
    d = cert.to_dict()
    assert d["rank"] == 2 and d["guarantee"] == "enumerate"


@pytest.mark.parametrize("G,value", [(alternating_group(4), 4), (alternating_group(5), -60)])
def test_known_moebius_values(G, value):
    L = enumerate_interval(G, trivial_group(G.degree))
    assert L.moebius(L.bottom, L.top) == value


def test_moebius_matches_recursion():
    L = enumerate_interval(symmetric_group(4), trivial_group(4))
    for x in range(L.size):
        for y in range(L.size):
            if L.leq[x][y]:
                assert L.moebius(x, y) == naive_moebius(L.leq, x, y)
    with pytest.raises(LatticeError):
        L.moebius(L.top, L.bottom)


def test_chain_lengths_and_maximality():
    S4 = symmetric_group(4)
    assert enumerate_interval(S4, trivial_group(4)).maximal_chain_lengths() == {4, 5}
    assert is_maximal(S4, alternating_group(4))
    d8 = build_group([cyc(4, (0, 1, 2, 3)), cyc(4, (0, 2))])
    assert is_maximal(S4, d8)
    v4 = build_group([cyc(4, (0, 1), (2, 3)), cyc(4, (0, 2), (1, 3))])
    assert not is_maximal(S4, v4)
    assert is_maximal(symmetric_group(5), point_stabilizer(symmetric_group(5), 0))
    with pytest.raises(ValueError):
        is_maximal(S4, S4)


def test_enumeration_errors():
    with pytest.raises(IndexCapExceeded):
        enumerate_interval(symmetric_group(8), trivial_group(8), cap=1000)
    with pytest.raises(NotASubgroup):
        enumerate_interval(alternating_group(4), build_group([cyc(4, (0, 1))]))


def test_all_s4_intervals_match_oracle(s4_oracle):
    subs = s4_oracle.subgroups
    handles = [s4_oracle.handle(m) for m in subs]
    for gi, G in enumerate(subs):
        for hi, H in enumerate(subs):
            if (H & ~G).any():
                continue
            expected, ks = oracle_summary(s4_oracle, G, H)
            L = enumerate_interval(handles[gi], handles[hi])
            assert lattice_summary(L) == expected
            # the order relation agrees too
            masks = [s4_oracle.mask_of(K) for K in L.groups]
            for i in range(L.size):
                for j in range(L.size):
                    assert L.leq[i][j] == (not (masks[i] & ~masks[j]).any())


@pytest.mark.parametrize("mode", ["explicit", "generic", "right-cosets"])
def test_s5_sample_matches_oracle(s5_oracle, mode):
    subs = s5_oracle.subgroups
    rng = random.Random(5)
    pairs = []
    while len(pairs) < 12:
        G = subs[rng.randrange(len(subs))]
        below = [H for H in subs if not (H & ~G).any()]
        pairs.append((G, below[rng.randrange(len(below))]))
    pairs.append((subs[-1], subs[0]))
    for G, H in pairs:
        Gh, Hh = s5_oracle.handle(G), s5_oracle.handle(H)
        if mode == "explicit":
            L = enumerate_interval(Gh, Hh, explicit=True)
        elif mode == "generic":
            L = enumerate_interval(Gh, Hh, explicit=False)
        else:
            L = enumerate_interval(Gh, Hh, double_cosets=False)
        expected, _ = oracle_summary(s5_oracle, G, H)
        assert lattice_summary(L) == expected


def test_explicit_and_generic_agree():
    G = symmetric_group(5)
    H = build_group([cyc(5, (0, 1))])
    a = enumerate_interval(G, H, explicit=True)
    b = enumerate_interval(G, H, explicit=False)
    assert a.meta.get("explicit") and not b.meta.get("explicit")
    assert same_elements(a, b)
    assert a.orders == b.orders


def test_json_round_trip(s3_interval):
    L = s3_interval
    text = L.to_json(note="x")
    data = json.loads(text)
    assert data["note"] == "x"
    R = IntervalLattice.from_dict(data)
    assert R.orders == L.orders and R.leq == L.leq and R.names == L.names
    assert R.moebius(R.bottom, R.top) == 3
    R2 = IntervalLattice.from_dict(data, rebuild=True)
    assert [K.order for K in R2.groups] == L.orders


def test_bad_order_rejected(s3_interval):
    data = s3_interval.to_dict()
    data["leq"].append([5, 0])
    with pytest.raises(LatticeError):
        IntervalLattice.from_dict(data)


def test_dot_export(s3_interval):
    dot = s3_interval.to_dot()
    assert dot.startswith("digraph")
    assert dot.count("->") == len(s3_interval.hasse_edges) == 8


def test_lattice_ops(s3_interval):
    L = s3_interval
    a, b = L.atoms[:2]
    assert L.join(a, b) == L.top
    assert L.meet(a, b) == L.bottom
    sub = L.sub_interval(L.atoms[0], L.top)
    assert sub.size == 2
    assert L.find_group(symmetric_group(3)) == L.top


def test_lattice_from_groups_sorts():
    S4 = symmetric_group(4)
    L = lattice_from_groups([S4, alternating_group(4), trivial_group(4)], "given")
    assert L.orders == [1, 12, 24]
    assert L.leq[0][2] and L.leq[1][2] and not L.leq[2][1]


def test_constructed_matches_enumerated():
    spec = PartitionChainSpec(8, (4, 2))
    C = partition_chain_lattice(spec)
    assert C.certification == "formula"
    assert C.orders == [128, 384, 1152, 40320]
    E = enumerate_interval(symmetric_group(8), C.groups[0])
    assert same_elements(C, E)
    assert boolean_certificate(C).rank == boolean_certificate(E).rank == 2


def test_constructed_interval_checks_orders():
    S4 = symmetric_group(4)
    A4 = alternating_group(4)
    members = {frozenset(): S4, frozenset({1}): A4}
    good = constructed_interval(members, {frozenset(): 24, frozenset({1}): 12})
    assert good.size == 2
    with pytest.raises(LatticeError):
        constructed_interval(members, {frozenset(): 24, frozenset({1}): 8})
