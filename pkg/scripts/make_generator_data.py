"""Regenerate the shipped generator data in src/boolattice/data.

Every group is built from an explicit construction, its order is certified
by Schreier-Sims and written next to the generators (as image lists).
"""

from __future__ import annotations

import argparse
import json
import random
from dataclasses import dataclass
from pathlib import Path

from boolattice.groups import build_group, point_stabilizer
from boolattice.perm import Permutation
from boolattice.structures import agl_letter_generators, agl_order

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "boolattice" / "data"


@dataclass
class Config:
    out: Path = DEFAULT_OUT
    seed: int = 1


def projective_line_gens(p: int, extra: bool = False) -> list[Permutation]:
    """PSL(2,p) on ``F_p u {inf}`` (``inf`` is point ``p``); ``extra`` adds the M12 element for p=11."""
    inf = p
    squares = {x * x % p for x in range(1, p)}
    root = next(r for r in range(2, p) if len({pow(r, k, p) for k in range(1, p)}) == p - 1)
    sq_gen = root * root % p

    def inv(x: int) -> int:
        return pow(x, p - 2, p)

    def mk(f) -> Permutation:
        return Permutation([f(x) for x in range(p + 1)])

    gens = [
        mk(lambda x: inf if x == inf else (x + 1) % p),
        mk(lambda x: inf if x == inf else sq_gen * x % p),
        mk(lambda x: 0 if x == inf else (inf if x == 0 else -inv(x) % p)),
    ]
    if extra:
        gens.append(mk(lambda x: x if x in (0, inf) else
                       (x ** 3 % p if x in squares else 9 * x ** 3 % p)))
    return gens


def fano_gens() -> list[Permutation]:
    """GL(3,2) on the 7 nonzero vectors of F_2^3 (vector ``v`` is point ``v - 1``)."""
    def apply(rows, v):
        bits = [(v >> i) & 1 for i in range(3)]
        return sum((sum(r[j] * bits[j] for j in range(3)) % 2) << i for i, r in enumerate(rows))

    companion = [[0, 0, 1], [1, 0, 1], [0, 1, 0]]
    transvection = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    return [Permutation([apply(M, v) - 1 for v in range(1, 8)]) for M in (companion, transvection)]


def relabel_without(g: Permutation, point: int) -> Permutation:
    keep = [x for x in range(g.degree) if x != point]
    pos = {x: i for i, x in enumerate(keep)}
    return Permutation([pos[g(x)] for x in keep])


def small_generating_set(G, rng: random.Random, tries: int = 200) -> list[Permutation]:
    for _ in range(tries):
        gens = [G.random_element(rng) for _ in range(2)]
        if build_group(gens, order_bound=G.order).order == G.order:
            return gens
    return list(G.strong_generators)


def entries(cfg: Config) -> list[dict]:
    rng = random.Random(cfg.seed)
    m12 = build_group(projective_line_gens(11, extra=True), order=95040)
    stab = point_stabilizer(m12, 11)
    m11_gens = [relabel_without(g, 11) for g in small_generating_set(stab, rng)]
    k, p = 3, 2
    agl = [Permutation(g) for g in agl_letter_generators(k, p)]
    return [
        {"name": "m12", "order": 95040, "gens": projective_line_gens(11, extra=True),
         "note": "PSL(2,11) on the projective line over F_11 plus x -> x^3 (squares), 9x^3 (non-squares)"},
        {"name": "m11", "order": 7920, "gens": m11_gens,
         "note": "stabilizer of infinity in m12, relabelled to 11 points"},
        {"name": "psl27_deg7", "order": 168, "gens": fano_gens(),
         "note": "GL(3,2) on the nonzero vectors of F_2^3"},
        {"name": "psl27_deg8", "order": 168, "gens": projective_line_gens(7),
         "note": "PSL(2,7) on the projective line over F_7"},
        {"name": "psl2_11", "order": 660, "gens": projective_line_gens(11),
         "note": "PSL(2,11) on the projective line over F_11"},
        {"name": "agl_3_2", "order": agl_order(k, p), "gens": agl,
         "note": "translations, a diagonal generator and transvections on F_2^3"},
    ]


def main(argv: list[str] | None = None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Config.out)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args(argv)
    cfg = Config(out=args.out, seed=args.seed)
    cfg.out.mkdir(parents=True, exist_ok=True)
    for e in entries(cfg):
        G = build_group(e["gens"], order=e["order"])
        data = {"name": e["name"], "degree": G.degree, "order": str(G.order), "note": e["note"],
                "generators": [list(g.images) for g in e["gens"]]}
        path = cfg.out / f"{e['name']}.json"
        path.write_text(json.dumps(data, indent=1) + "\n")
        print(f"{path.name}: degree {G.degree}, order {G.order}")


if __name__ == "__main__":
    main()
