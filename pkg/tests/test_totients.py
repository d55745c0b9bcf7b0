import random

import pytest

from boolattice.groups import build_group, point_stabilizer, symmetric_group, trivial_group
from boolattice.lattice import boolean_certificate, enumerate_interval
from boolattice.perm import Permutation
from boolattice.totients import (coset_generation_count, coset_subgroup, dual_euler_totient,
                                 euler_totient, literal_coset_subgroup,
                                 reduced_euler_characteristic, totient_report)

from oracles import literal_coset_count, literal_generated


def test_cyclic_six():
    G = build_group([Permutation.from_cycles([(0, 1), (2, 3, 4)], 5)])
    L = enumerate_interval(G, trivial_group(5))
    assert euler_totient(L) == 2
    assert dual_euler_totient(L) == 2
    # -(mu(1,G) 6 + mu(C2,G) 3 + mu(C3,G) 2 + 1)
    assert reduced_euler_characteristic(L) == -(6 - 3 - 2 + 1)


def test_singleton_interval():
    G = symmetric_group(3)
    L = enumerate_interval(G, G)
    assert (euler_totient(L), dual_euler_totient(L), reduced_euler_characteristic(L)) == (1, 1, -1)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_rank_one(n):
    G = symmetric_group(n)
    L = enumerate_interval(G, point_stabilizer(G, 0))
    assert euler_totient(L) == dual_euler_totient(L) == reduced_euler_characteristic(L) == n - 1


def test_totient_counts_generating_elements(s4_oracle):
    # phi(1, G) is the number of g with <g> = G
    for mask in s4_oracle.subgroups:
        G = s4_oracle.handle(mask)
        L = enumerate_interval(G, trivial_group(4))
        count = sum(1 for e in map(int, mask.nonzero()[0])
                    if s4_oracle.closure([e]).sum() == mask.sum())
        assert euler_totient(L) == count


def test_totient_is_coset_count_in_s4(s4_oracle):
    subs = s4_oracle.subgroups
    handles = [s4_oracle.handle(m) for m in subs]
    for gi, G in enumerate(subs):
        for hi, H in enumerate(subs):
            if (H & ~G).any():
                continue
            L = enumerate_interval(handles[gi], handles[hi])
            phi = euler_totient(L)
            assert phi == literal_coset_count(handles[gi], handles[hi])
            assert phi == coset_generation_count(handles[gi], handles[hi])


def test_boolean_dual_totient_by_subsets(s4_oracle):
    subs = s4_oracle.subgroups
    handles = [s4_oracle.handle(m) for m in subs]
    seen = 0
    for gi, G in enumerate(subs):
        for hi, H in enumerate(subs):
            if (H & ~G).any():
                continue
            L = enumerate_interval(handles[gi], handles[hi])
            cert = boolean_certificate(L)
            if not cert:
                continue
            seen += 1
            alt = sum((-1) ** len(S) * L.index_of(k) for k, S in cert.subsets.items())
            assert dual_euler_totient(L) == alt > 0
    assert seen > 50


def test_coset_subgroup_matches_literal():
    rng = random.Random(7)
    S6 = symmetric_group(6)
    for _ in range(25):
        H = build_group([S6.random_element(rng) for _ in range(rng.randrange(1, 3))])
        if H.order > 720 // 2:
            continue
        g = S6.random_element(rng)
        K = coset_subgroup(H, g)
        assert K.same_group(literal_generated(H, g))
        assert K.same_group(literal_coset_subgroup(H, g))


def test_report_serialises():
    G = symmetric_group(4)
    rep = totient_report(enumerate_interval(G, trivial_group(4)))
    d = rep.to_dict()
    assert d["phi"] == str(rep.phi)
    assert len(d["table"]) == 30
    assert rep.phi == 0


def s4_intervals(oracle):
    subs = oracle.subgroups
    handles = [oracle.handle(m) for m in subs]
    for gi, G in enumerate(subs):
        for hi, H in enumerate(subs):
            if not (H & ~G).any():
                yield enumerate_interval(handles[gi], handles[hi])


def test_boolean_sign_identity(s4_oracle):
    seen = 0
    for L in s4_intervals(s4_oracle):
        cert = boolean_certificate(L)
        if not cert:
            continue
        for k, S in cert.subsets.items():
            assert L.moebius(L.bottom, k) == (-1) ** len(S)
            assert L.moebius(k, L.top) == (-1) ** (cert.rank - len(S))
        chi, phi_hat = reduced_euler_characteristic(L), dual_euler_totient(L)
        assert chi == (-1) ** (cert.rank + 1) * phi_hat
        seen += 1
    assert seen > 50


def is_distributive(L):
    n = L.size
    return all(L.meet(a, L.join(b, c)) == L.join(L.meet(a, b), L.meet(a, c))
               for a in range(n) for b in range(n) for c in range(n))


def test_distributive_intervals_have_positive_totient(s4_oracle):
    seen = 0
    for L in s4_intervals(s4_oracle):
        if is_distributive(L):
            assert euler_totient(L) > 0
            seen += 1
    assert seen > 50
