"""Euler totient, dual Euler totient and reduced Euler characteristic of an interval.

With ``mu`` the Moebius function of ``O_G(H)``::

    phi(H, G)     =  sum_K mu(K, G) |K : H|
    phi_hat(H, G) =  sum_K mu(H, K) |G : K|
    chi(H, G)     = -sum_K mu(K, G) |G : K|

Everything is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import DEFAULT_INDEX_CAP, GroupHandle, build_group, coset_representatives_arrays, _perm
from .lattice import IntervalLattice


@dataclass
class TotientReport:
    phi: int
    phi_hat: int
    chi: int
    table: list[dict]

    def to_dict(self) -> dict:
        return {
            "phi": str(self.phi), "phi_hat": str(self.phi_hat), "chi": str(self.chi),
            "table": [{k: str(v) if isinstance(v, int) else v for k, v in row.items()} for row in self.table],
        }


def euler_totient(L: IntervalLattice) -> int:
    b, t = L.bottom, L.top
    return sum(L.moebius(k, t) * L.index(b, k) for k in range(L.size))


def dual_euler_totient(L: IntervalLattice) -> int:
    b = L.bottom
    return sum(L.moebius(b, k) * L.index_of(k) for k in range(L.size))


def reduced_euler_characteristic(L: IntervalLattice) -> int:
    t = L.top
    return -sum(L.moebius(k, t) * L.index_of(k) for k in range(L.size))


def totient_report(L: IntervalLattice) -> TotientReport:
    b, t = L.bottom, L.top
    table = [{"id": k, "name": L.names[k], "mu_HK": L.moebius(b, k), "mu_KG": L.moebius(k, t),
              "index_GK": L.index_of(k), "index_KH": L.index(b, k)} for k in range(L.size)]
    return TotientReport(euler_totient(L), dual_euler_totient(L), reduced_euler_characteristic(L), table)


def coset_subgroup(H: GroupHandle, g) -> GroupHandle:
    """``<Hg>``, generated by ``h_i g`` over the generators ``h_i`` of ``H`` together with ``g``.

    These elements lie in ``Hg`` and generate every ``h_i = (h_i g) g^-1``,
    so the result is the subgroup generated by the set ``Hg``.
    """
    gens = [h * g for h in H.generators] + [g]
    return build_group(gens, degree=H.degree)


def literal_coset_subgroup(H: GroupHandle, g) -> GroupHandle:
    """The subgroup generated by every element of ``Hg`` (small ``H`` only)."""
    return build_group([h * g for h in H.elements()], degree=H.degree)


def coset_generation_count(G: GroupHandle, H: GroupHandle, cap: int = DEFAULT_INDEX_CAP) -> int:
    """Number of right cosets ``Hg`` of ``H`` in ``G`` with ``<Hg> = G``.

    Each coset is tested separately.  A generated subgroup is only trusted to
    be proper once its chain is complete; proper subgroups found this way are
    kept, and a later coset whose generators all lie in one of them is
    counted as non-generating without rebuilding.
    """
    reps, _ = coset_representatives_arrays(G, H, cap)
    proper: list[GroupHandle] = []
    count = 0
    for r in reps:
        g = _perm(r)
        gens = [h * g for h in H.generators] + [g]
        if any(all(P.contains(x) for x in gens) for P in proper):
            continue
        K = build_group(gens, degree=G.degree, order_bound=G.order)
        if K.order == G.order:
            count += 1
        else:
            proper.append(K)
    return count

