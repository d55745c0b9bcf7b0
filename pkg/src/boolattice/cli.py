"""Command-line interface.

Exit codes: 0 success, 1 a mathematical expectation or certification check
failed, 2 usage error (bad arguments, unknown names, caps exceeded).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import (CASES, DataError, IntervalAnalysis, UnknownCase, UnknownGroup, analyse, analyse_pair,
                      resolve_group, run_case)
from .chains import partition_chain_lattice, product_chain_lattice
from .groups import DEFAULT_DEGREE_CAP, DEFAULT_INDEX_CAP, GroupError, IndexCapExceeded, NotASubgroup
from .lattice import IntervalLattice, LatticeError, boolean_certificate, enumerate_interval, same_elements
from .structures import PartitionChainSpec, ProductChainSpec, UnsupportedParameters
from .totients import coset_generation_count, totient_report


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--max-index", type=int, default=DEFAULT_INDEX_CAP,
                   help="largest coset index enumerated (default %(default)s)")
    p.add_argument("--max-degree-backtrack", type=int, default=DEFAULT_DEGREE_CAP,
                   help="largest degree for backtrack intersections (default %(default)s)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    return p


def _pair_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--G", dest="G", required=required,
                   help="ambient group: sym:n, alt:n, agl:d:p, a shipped name or a JSON file")
    p.add_argument("--H", dest="H", required=required, help="bottom group, same syntax")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="boolattice", description="Overgroup intervals in finite permutation groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interval", parents=[common], help="enumerate the interval between H and G")
    _pair_args(p)
    p.add_argument("--literal-cosets", action="store_true",
                   help="generate from every coset instead of one coset per double coset")
    p.add_argument("--count-cosets", action="store_true", help="also count generating cosets")

    p = sub.add_parser("boolean-check", parents=[common], help="Boolean certificate of an interval")
    _pair_args(p, required=False)
    p.add_argument("--lattice", type=Path, help="lattice dump JSON instead of --G/--H")

    p = sub.add_parser("totient", parents=[common], help="phi, phi_hat and chi of an interval")
    _pair_args(p, required=False)
    p.add_argument("--lattice", type=Path, help="lattice dump JSON instead of --G/--H")
    p.add_argument("--count-cosets", action="store_true", help="also count generating cosets directly")

    p = sub.add_parser("construct", help="constructed chain lattices")
    csub = p.add_subparsers(dest="flavor", required=True)
    pc = csub.add_parser("partition-chain", parents=[common], help="stabilizers of a nested partition chain")
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--ladder", type=_int_list, required=True, help="block counts n_1,...,n_l")
    pc.add_argument("--ambient", choices=("sym", "alt"), default="sym")
    pc.add_argument("--with-alt", action="store_true", help="add Alt(n) as an extra coatom (sym ambient)")
    pc.add_argument("--enumerate", action="store_true", help="cross-check by enumeration")
    pc.add_argument("--certify", choices=("enumerate", "formula"), default=None)
    pr = csub.add_parser("product-chain", parents=[common], help="stabilizers of a product-structure chain")
    pr.add_argument("--a", type=int, required=True)
    pr.add_argument("--bs", type=_int_list, required=True, help="branching factors b_1,...,b_l")
    pr.add_argument("--certify", choices=("enumerate", "formula"), default="formula")

    p = sub.add_parser("case", parents=[common], help="run a named case")
    p.add_argument("name")
    p.add_argument("--ell", type=int, default=None, help="family parameter (ore-family)")

    sub.add_parser("list-cases", parents=[common], help="list the named cases")

    p = sub.add_parser("export", parents=[common], help="export a Hasse diagram")
    p.add_argument("--dot", type=Path, required=True, help="output DOT file")
    _pair_args(p, required=False)
    p.add_argument("--lattice", type=Path, help="lattice dump JSON")
    p.add_argument("--case", dest="case_name", help="named case (its first interval)")
    return ap


# ---------------------------------------------------------------- helpers

def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=1))
    else:
        print(text)


def _load_lattice(path: Path) -> IntervalLattice:
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read lattice dump {path}: {exc}")
    return IntervalLattice.from_dict(data.get("lattice", data))


def _lattice_from_args(args) -> IntervalLattice:
    if getattr(args, "lattice", None) is not None:
        return _load_lattice(args.lattice)
    if not (args.G and args.H):
        raise UsageError("give --G and --H, or --lattice")
    return enumerate_interval(resolve_group(args.G), resolve_group(args.H), args.max_index)


def _describe(a: IntervalAnalysis) -> str:
    L, c, t = a.lattice, a.certificate, a.totients
    lines = [f"{L.size} elements ({L.certification}), degree {L.degree}"]
    for i in range(L.size):
        lines.append(f"  {i:>3} {L.names[i]:<14} order {L.orders[i]}  index {L.index_of(i)}  [{L.provenance[i]}]")
    lines.append(f"maximal chain lengths: {sorted(L.maximal_chain_lengths())}")
    if c:
        lines.append(f"Boolean of rank {c.rank}; atom indices {c.atom_indices}")
    else:
        lines.append(f"not Boolean: {c.reason}")
    lines.append(f"phi {t.phi}  phi_hat {t.phi_hat}  chi {t.chi}")
    if a.coset_count is not None:
        lines.append(f"generating cosets {a.coset_count}")
    if a.bounds is not None:
        lines.append(a.bounds.table())
    if a.audit_error:
        lines.append(f"AUDIT FAILURE: {a.audit_error}")
    return "\n".join(lines)


# ---------------------------------------------------------------- commands

def cmd_interval(args) -> int:
    G, H = resolve_group(args.G), resolve_group(args.H)
    a = analyse_pair(G, H, f"{args.H} in {args.G}", args.max_index, count_cosets=args.count_cosets,
                     double_cosets=not args.literal_cosets)
    _emit(args, a.to_dict(), _describe(a))
    return 1 if a.audit_error else 0


def cmd_boolean_check(args) -> int:
    L = _lattice_from_args(args)
    c = boolean_certificate(L)
    d = c.to_dict()
    if c:
        d["boolean"] = True
        text = (f"Boolean of rank {c.rank}; atoms {c.atoms}, coatoms {c.coatoms}, "
                f"atom indices {c.atom_indices} ({c.guarantee})")
    else:
        text = f"not Boolean: {c.reason} {list(c.witness)}"
    _emit(args, d, text)
    return 0


def cmd_totient(args) -> int:
    L = _lattice_from_args(args)
    t = totient_report(L)
    d = t.to_dict()
    text = f"phi {t.phi}\nphi_hat {t.phi_hat}\nchi {t.chi}"
    status = 0
    if args.count_cosets:
        if getattr(args, "lattice", None) is not None:
            raise UsageError("--count-cosets needs --G and --H")
        count = coset_generation_count(resolve_group(args.G), resolve_group(args.H), args.max_index)
        d["coset_count"] = str(count)
        text += f"\ngenerating cosets {count}"
        if count != t.phi:
            text += "\nMISMATCH between phi and the coset count"
            status = 1
    _emit(args, d, text)
    return status


def cmd_partition_chain(args) -> int:
    try:
        spec = PartitionChainSpec(args.n, tuple(args.ladder), args.ambient)
    except (ValueError, IndexError) as exc:
        raise UsageError(str(exc))
    if args.with_alt and args.ambient != "sym":
        raise UsageError("--with-alt needs --ambient sym")
    enumerate_too = args.enumerate or args.certify == "enumerate"
    L = partition_chain_lattice(spec, args.with_alt, args.max_degree_backtrack)
    extra: dict = {}
    status = 0
    text_extra = ""
    if enumerate_too:
        E = enumerate_interval(L.G, L.H, args.max_index)
        agree = same_elements(E, L)
        ec = boolean_certificate(E)
        extra["enumeration"] = {"size": E.size, "orders": [str(o) for o in E.orders], "agrees": agree,
                                "boolean_rank": ec.rank if ec else None}
        if agree:
            L.certification = "enumerate"
            L.provenance = ["enumerated"] * L.size
            text_extra = f"\nenumeration cross-check: {E.size} elements, element sets agree"
        else:
            status = 1
            shape = f"Boolean rank {ec.rank}" if ec else "not Boolean"
            text_extra = (f"\nenumeration cross-check FAILED: the interval has {E.size} elements "
                          f"({shape}), orders {E.orders}")
    a = analyse(L, f"partition-chain n={spec.n} ladder={','.join(map(str, spec.ladder))}")
    d = a.to_dict()
    d.update(extra)
    d["rank"] = a.certificate.rank if a.certificate else None
    _emit(args, d, _describe(a) + text_extra)
    return 1 if a.audit_error else status


def cmd_product_chain(args) -> int:
    try:
        spec = ProductChainSpec(args.a, tuple(args.bs))
    except (ValueError, UnsupportedParameters) as exc:
        raise UsageError(str(exc))
    if args.certify == "enumerate":
        raise UsageError(f"enumeration is out of reach on {spec.n} points; use --certify formula")
    L = product_chain_lattice(spec, args.max_degree_backtrack)
    a = analyse(L, f"product-chain a={spec.a} bs={','.join(map(str, spec.bs))}")
    d = a.to_dict()
    d["rank"] = a.certificate.rank if a.certificate else None
    _emit(args, d, _describe(a))
    return 1 if a.audit_error else 0


def cmd_case(args) -> int:
    params = {"ell": args.ell} if args.ell is not None else {}
    if args.name not in CASES:
        raise UnknownCase(f"unknown case {args.name!r}")
    if params and "ell" not in CASES[args.name].params:
        raise UsageError(f"case {args.name} takes no --ell")
    r = run_case(args.name, args.max_index, **params)
    _emit(args, r.to_dict(), r.summary())
    return 0 if r.ok else 1


def cmd_list_cases(args) -> int:
    from .catalog import case_expectations
    exp = case_expectations()
    rows = [(name, exp.get(name, {}).get("description", "")) for name in CASES]
    _emit(args, {"cases": [{"name": n, "description": d} for n, d in rows]},
          "\n".join(f"{n:<16} {d}" for n, d in rows))
    return 0


def cmd_export(args) -> int:
    sources = [args.lattice is not None, bool(args.G or args.H), args.case_name is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --lattice, --G/--H or --case")
    if args.case_name is not None:
        r = run_case(args.case_name, args.max_index)
        L = next(iter(r.analyses.values())).lattice
    else:
        L = _lattice_from_args(args)
    args.dot.write_text(L.to_dot())
    _emit(args, {"dot": str(args.dot), "elements": L.size}, f"wrote {args.dot} ({L.size} elements)")
    return 0


COMMANDS = {
    "interval": cmd_interval,
    "boolean-check": cmd_boolean_check,
    "totient": cmd_totient,
    "case": cmd_case,
    "list-cases": cmd_list_cases,
    "export": cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "construct":
        fn = cmd_partition_chain if args.flavor == "partition-chain" else cmd_product_chain
    else:
        fn = COMMANDS[args.command]
    try:
        return fn(args)
    except (UsageError, UnknownGroup, UnknownCase, DataError, IndexCapExceeded, NotASubgroup,
            UnsupportedParameters, ValueError) as exc:
        # ValueError here means inconsistent input, such as groups of different degrees
        print(f"boolattice: error: {exc}", file=sys.stderr)
        return 2
    except (GroupError, LatticeError) as exc:
        print(f"boolattice: check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
