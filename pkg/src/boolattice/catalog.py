"""Shipped generator data, a small group registry and the named cases.

Generator data lives in ``boolattice/data`` (override with the
``BOOLATTICE_DATA_DIR`` environment variable); each file is checked against
its recorded order when loaded.  Expectations for the named cases live in
``cases.json`` next to the generator data, each tagged with its source
(``paper``, ``trivial`` or ``derived``).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable

from .bounds import AuditFailure, BoundReport, verify_theorem_bound
from .groups import (DEFAULT_INDEX_CAP, GroupHandle, alternating_group, build_group, intersect,
                     point_stabilizer, symmetric_group)
from .lattice import BooleanCertificate, IntervalLattice, NotBoolean, boolean_certificate, enumerate_interval
from .perm import Permutation
from .structures import (PartitionChainSpec, RegularPartition, agl_group, partition_chain_subgroup,
                         partition_stabilizer, subset_stabilizer)
from .totients import TotientReport, coset_generation_count, totient_report

DATA_ENV = "BOOLATTICE_DATA_DIR"
SOURCES = ("paper", "trivial", "derived")


class UnknownGroup(KeyError):
    pass


class UnknownCase(KeyError):
    pass


class DataError(ValueError):
    pass


# ---------------------------------------------------------------- generator data

def data_dir() -> Path:
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else Path(__file__).resolve().parent / "data"


def group_from_spec(data: dict, name: str | None = None) -> GroupHandle:
    """Group from a spec dict ``{"degree", "generators": [images...], "order"?}``."""
    try:
        degree = int(data["degree"])
        gens = [Permutation(g) for g in data["generators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed group spec: {exc}") from exc
    order = int(data["order"]) if data.get("order") is not None else None
    return build_group(gens, degree=degree, order=order, name=name or data.get("name"))


def load_group_file(path: str | Path) -> GroupHandle:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return group_from_spec(data, name=data.get("name", path.stem))


@lru_cache(maxsize=None)
def _load_shipped(directory: str, name: str) -> GroupHandle:
    path = Path(directory) / f"{name}.json"
    if not path.exists():
        raise UnknownGroup(f"unknown group {name!r}")
    return load_group_file(path)


def load_group(name: str) -> GroupHandle:
    """A shipped group (``m12``, ``m11``, ``psl27_deg7``, ``psl27_deg8``, ``psl2_11``, ``agl_3_2``)."""
    return _load_shipped(str(data_dir()), name)


ALIASES = {"psl27": "psl27_deg8", "psl32": "psl27_deg7", "agl32": "agl_3_2"}


def resolve_group(text: str) -> GroupHandle:
    """Group from a short name: ``sym:n``, ``alt:n``, ``agl:d:p``, a shipped
    name (or alias), or a path to a group spec JSON file."""
    parts = text.split(":")
    try:
        if parts[0] == "sym" and len(parts) == 2:
            return symmetric_group(int(parts[1]))
        if parts[0] == "alt" and len(parts) == 2:
            return alternating_group(int(parts[1]))
        if parts[0] == "agl" and len(parts) == 3:
            return agl_group(int(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise UnknownGroup(f"{text}: {exc}") from exc
    if text.endswith(".json") or os.sep in text:
        return load_group_file(text)
    return load_group(ALIASES.get(text, text))


# ---------------------------------------------------------------- case builders

def _perm_cycles(cycles, n) -> Permutation:
    return Permutation.from_cycles(cycles, n)


def fig1_subgroup() -> GroupHandle:
    """Even part of Sym(2) wr Sym(2) wr Sym(2) on 8 points."""
    return partition_chain_subgroup(PartitionChainSpec(8, (4, 2), "alt"), (1, 2))


def alt6_sylow2() -> GroupHandle:
    gens = [_perm_cycles([(0, 1), (2, 3)], 6), _perm_cycles([(0, 2), (1, 3)], 6),
            _perm_cycles([(0, 1), (4, 5)], 6)]
    return build_group(gens, order=8, name="D8")


def fano_borel() -> tuple[GroupHandle, GroupHandle]:
    """PSL(3,2) on the Fano plane and the stabilizer of a point-line flag.

    Point ``v - 1`` is the nonzero vector ``v`` of F_2^3, so ``{0, 1, 2}`` is
    the line spanned by the first two basis vectors.
    """
    G = load_group("psl27_deg7")
    P = point_stabilizer(G, 0)
    B = intersect(P, subset_stabilizer([0, 1, 2], 7))
    B.name = "B"
    return G, B


def ore_pair(ell: int) -> tuple[GroupHandle, GroupHandle]:
    """``S_1 x S_2^ell`` inside ``S_2 x S_3^ell`` on ``2 + 3 ell`` points."""
    n = 2 + 3 * ell
    g_gens = [_perm_cycles([(0, 1)], n)]
    h_gens: list[Permutation] = []
    for i in range(ell):
        a, b, c = 2 + 3 * i, 3 + 3 * i, 4 + 3 * i
        g_gens += [_perm_cycles([(a, b)], n), _perm_cycles([(a, b, c)], n)]
        h_gens.append(_perm_cycles([(a, b)], n))
    G = build_group(g_gens, order=2 * 6 ** ell, name=f"S2xS3^{ell}")
    H = build_group(h_gens, degree=n, order=2 ** ell, name=f"S1xS2^{ell}")
    return G, H


def fact2_partition() -> RegularPartition:
    """The (2,4)-regular partition into consecutive pairs."""
    return RegularPartition.contiguous(8, 2)


# ---------------------------------------------------------------- analysis

@dataclass
class IntervalAnalysis:
    label: str
    lattice: IntervalLattice
    certificate: BooleanCertificate | NotBoolean
    totients: TotientReport
    bounds: BoundReport | None = None
    coset_count: int | None = None
    audit_error: str | None = None

    def facts(self) -> dict[str, Any]:
        L, c = self.lattice, self.certificate
        out: dict[str, Any] = {
            "size": L.size,
            "orders": L.orders,
            "boolean": bool(c),
            "chain_lengths": sorted(L.maximal_chain_lengths()),
            "phi": self.totients.phi,
            "phi_hat": self.totients.phi_hat,
            "chi": self.totients.chi,
            "maximal": L.size == 2,
            "intermediate_orders": L.orders[1:-1],
        }
        if c:
            out["rank"] = c.rank
            out["coatom_orders"] = sorted(L.orders[m] for m in c.coatoms)
            out["coatom_indices"] = sorted(L.index_of(m) for m in c.coatoms)
            out["atom_indices"] = sorted(c.atom_indices)
        if self.bounds is not None:
            out["verdict"] = self.bounds.verdict
        out["audit_passed"] = self.audit_error is None
        if self.coset_count is not None:
            out["coset_count"] = self.coset_count
        return out

    def to_dict(self) -> dict:
        d = {"label": self.label, "lattice": self.lattice.to_dict(),
             "certificate": self.certificate.to_dict(), "totients": self.totients.to_dict()}
        if self.bounds is not None:
            d["bounds"] = self.bounds.to_dict()
        if self.audit_error is not None:
            d["audit_error"] = self.audit_error
        if self.coset_count is not None:
            d["coset_count"] = str(self.coset_count)
        return d


def analyse(L: IntervalLattice, label: str = "", coset_count: int | None = None) -> IntervalAnalysis:
    """Certificate, totients and (when Boolean) the full lemma audit."""
    cert = boolean_certificate(L)
    A = IntervalAnalysis(label, L, cert, totient_report(L), coset_count=coset_count)
    if cert:
        try:
            A.bounds = verify_theorem_bound(L, cert, label)
        except AuditFailure as exc:
            A.audit_error = str(exc)
    return A


def analyse_pair(G: GroupHandle, H: GroupHandle, label: str, cap: int = DEFAULT_INDEX_CAP,
                 count_cosets: bool = False, double_cosets: bool = True) -> IntervalAnalysis:
    L = enumerate_interval(G, H, cap, double_cosets=double_cosets)
    L.meta["name"] = label
    count = coset_generation_count(G, H, cap) if count_cosets else None
    return analyse(L, label, count)


# ---------------------------------------------------------------- named cases

@dataclass
class Check:
    interval: str
    key: str
    expected: Any
    actual: Any
    source: str
    op: str = "eq"

    @property
    def ok(self) -> bool:
        if self.actual is None:
            return False
        if self.op == "eq":
            return self.actual == self.expected
        if self.op == "ge":
            return self.actual >= self.expected
        if self.op == "contains":
            return self.expected in self.actual
        if self.op == "eq_key":
            return self.actual == self.expected
        raise DataError(f"unknown comparison {self.op!r}")

    def to_dict(self) -> dict:
        return {"interval": self.interval, "key": self.key, "op": self.op, "source": self.source,
                "expected": _plain(self.expected), "actual": _plain(self.actual), "ok": self.ok}


def _plain(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return v if abs(v) < 2 ** 53 else str(v)
    if isinstance(v, list):
        return [_plain(x) for x in v]
    return v


@dataclass
class CaseReport:
    name: str
    description: str
    params: dict
    analyses: dict[str, IntervalAnalysis]
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def rank(self) -> int | None:
        main = next(iter(self.analyses.values()))
        return main.certificate.rank if main.certificate else None

    def to_dict(self) -> dict:
        return {"case": self.name, "description": self.description, "params": self.params,
                "ok": self.ok, "rank": self.rank,
                "checks": [c.to_dict() for c in self.checks],
                "intervals": {k: a.to_dict() for k, a in self.analyses.items()}}

    def summary(self) -> str:
        lines = [f"case {self.name}: {'ok' if self.ok else 'FAILED'}"]
        for label, a in self.analyses.items():
            L, c = a.lattice, a.certificate
            shape = f"Boolean rank {c.rank}" if c else f"not Boolean ({c.reason})"
            lines.append(f"  [{label}] {L.size} elements, {shape}, orders {L.orders}")
            lines.append(f"  [{label}] phi {a.totients.phi}, phi_hat {a.totients.phi_hat}, chi {a.totients.chi}")
        for ch in self.checks:
            mark = "ok  " if ch.ok else "FAIL"
            lines.append(f"  {mark} {ch.interval}.{ch.key} {ch.op} {ch.expected!r} "
                         f"(got {ch.actual!r}) [{ch.source}]")
        return "\n".join(lines)


@dataclass
class NamedCase:
    name: str
    builder: Callable[..., dict[str, IntervalAnalysis]]
    params: dict = field(default_factory=dict)


def _case_fig1(cap: int) -> dict[str, IntervalAnalysis]:
    return {"main": analyse_pair(alternating_group(8), fig1_subgroup(), "fig1-alt8", cap)}


def _case_m12(cap: int) -> dict[str, IntervalAnalysis]:
    return {"main": analyse_pair(symmetric_group(12), load_group("m12"), "m12-chain", cap,
                                 count_cosets=True)}


def _case_fact2(cap: int) -> dict[str, IntervalAnalysis]:
    S = fact2_partition()
    return {"alt": analyse_pair(alternating_group(8), partition_stabilizer(S, "alt"), "fact2-alt8", cap),
            "sym": analyse_pair(symmetric_group(8), partition_stabilizer(S, "sym"), "fact2-sym8", cap)}


def _case_alt6(cap: int) -> dict[str, IntervalAnalysis]:
    return {"main": analyse_pair(alternating_group(6), alt6_sylow2(), "alt6-rank2", cap)}


def _case_octal(cap: int) -> dict[str, IntervalAnalysis]:
    H = load_group("psl27_deg8")
    return {"alt": analyse_pair(alternating_group(8), H, "octal-alt8", cap),
            "sym": analyse_pair(symmetric_group(8), H, "octal-sym8", cap)}


def _case_borel(cap: int) -> dict[str, IntervalAnalysis]:
    G, B = fano_borel()
    return {"main": analyse_pair(G, B, "borel-psl32", cap, count_cosets=True)}


def _case_ore(cap: int, ell: int = 3) -> dict[str, IntervalAnalysis]:
    if not 1 <= ell <= 3:
        raise ValueError("ell must be 1, 2 or 3")
    G, H = ore_pair(ell)
    return {"main": analyse_pair(G, H, f"ore-family-{ell}", cap, count_cosets=True)}


CASES: dict[str, NamedCase] = {
    "fig1-alt8": NamedCase("fig1-alt8", _case_fig1),
    "m12-chain": NamedCase("m12-chain", _case_m12),
    "fact2-exception": NamedCase("fact2-exception", _case_fact2),
    "alt6-rank2": NamedCase("alt6-rank2", _case_alt6),
    "octal": NamedCase("octal", _case_octal),
    "borel-psl32": NamedCase("borel-psl32", _case_borel),
    "ore-family": NamedCase("ore-family", _case_ore, {"ell": 3}),
}


def case_expectations() -> dict:
    path = data_dir() / "cases.json"
    if not path.exists():
        path = Path(__file__).resolve().parent / "data" / "cases.json"
    data = json.loads(path.read_text())
    for name, entry in data.items():
        for e in entry.get("expect", []) + [x for v in entry.get("by_param", {}).values() for x in v]:
            if e.get("source") not in SOURCES:
                raise DataError(f"{name}: expectation {e.get('key')} lacks a source tag")
    return data


def run_case(name: str, cap: int = DEFAULT_INDEX_CAP, **params) -> CaseReport:
    if name not in CASES:
        raise UnknownCase(f"unknown case {name!r}")
    case = CASES[name]
    p = dict(case.params)
    p.update({k: v for k, v in params.items() if v is not None})
    analyses = case.builder(cap, **p)
    entry = case_expectations().get(name, {})
    expect = list(entry.get("expect", []))
    for key, value in p.items():
        expect += entry.get("by_param", {}).get(f"{key}={value}", [])
    report = CaseReport(name, entry.get("description", ""), p, analyses)
    for e in expect:
        label = e.get("interval", "main")
        facts = analyses[label].facts()
        report.checks.append(Check(label, e["key"], e["value"], facts.get(e["key"]), e["source"],
                                   e.get("op", "eq")))
    for label, a in analyses.items():
        if a.certificate:
            report.checks.append(Check(label, "audit_passed", True, a.audit_error is None, "derived"))
    return report
