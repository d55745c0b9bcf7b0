"""Sweep every divisor ladder for small n and compare constructed and enumerated intervals.

For each ladder the constructed lattice ``{M_I}`` is built in the chosen
ambient groups; when the index ``|G : H|`` is within ``enumerate_cap`` the
interval is also enumerated and the element sets compared.  One JSON line is
written per (n, ladder, ambient).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Iterator

from boolattice.chains import partition_chain_lattice
from boolattice.lattice import LatticeError, boolean_certificate, enumerate_interval, same_elements
from boolattice.structures import PartitionChainSpec
from boolattice.totients import dual_euler_totient


@dataclass
class Config:
    min_n: int = 4
    max_n: int = 12
    ambients: tuple[str, ...] = ("sym", "alt")
    enumerate_cap: int = 50_000
    out: str | None = None
    extra: dict = field(default_factory=dict)


def ladders(n: int) -> Iterator[tuple[int, ...]]:
    """Decreasing divisor chains ``n > n_1 > ... > n_l > 1`` with ``n_{j+1} | n_j``."""
    def rec(hi: int, acc: tuple[int, ...]):
        if acc:
            yield acc
        for lo in range(hi - 1, 1, -1):
            if hi % lo == 0:
                yield from rec(lo, acc + (lo,))

    yield from rec(n, ())


def sweep_one(n: int, ladder: tuple[int, ...], ambient: str, cfg: Config) -> dict:
    spec = PartitionChainSpec(n, ladder, ambient)
    start = time.perf_counter()
    row: dict = {"n": n, "ladder": list(ladder), "ambient": ambient, "rank": spec.rank}
    try:
        C = partition_chain_lattice(spec)
    except LatticeError as exc:
        row["constructed_error"] = str(exc)
        return row
    cert = boolean_certificate(C)
    row["constructed_boolean"] = bool(cert)
    row["phi_hat"] = str(dual_euler_totient(C))
    row["bound"] = 2 ** (spec.rank - 1)
    row["index"] = str(C.index_of(C.bottom))
    if C.index_of(C.bottom) <= cfg.enumerate_cap:
        E = enumerate_interval(C.G, C.H, cfg.enumerate_cap)
        ec = boolean_certificate(E)
        row["enumerated_size"] = E.size
        row["enumerated_rank"] = ec.rank if ec else None
        row["same_elements"] = same_elements(C, E)
    row["seconds"] = round(time.perf_counter() - start, 3)
    return row


def main(argv: list[str] | None = None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--min-n", type=int, default=Config.min_n)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    ap.add_argument("--ambient", action="append", choices=("sym", "alt"))
    ap.add_argument("--enumerate-cap", type=int, default=Config.enumerate_cap)
    ap.add_argument("--out", default=None, help="JSON-lines file (default stdout)")
    args = ap.parse_args(argv)
    cfg = Config(min_n=args.min_n, max_n=args.max_n, ambients=tuple(args.ambient or Config.ambients),
                 enumerate_cap=args.enumerate_cap, out=args.out)
    sink = open(cfg.out, "w") if cfg.out else sys.stdout
    try:
        for n in range(cfg.min_n, cfg.max_n + 1):
            for ladder in ladders(n):
                for ambient in cfg.ambients:
                    sink.write(json.dumps(sweep_one(n, ladder, ambient, cfg)) + "\n")
                    sink.flush()
    finally:
        if sink is not sys.stdout:
            sink.close()


if __name__ == "__main__":
    main()
