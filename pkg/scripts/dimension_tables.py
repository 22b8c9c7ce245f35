"""Basis, torus and E2 dimension tables for a grid of (n, m, D, d).

    python3 scripts/dimension_tables.py --out results/dims.csv
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from itertools import product
from typing import List

from dolbeault.classes import Context, Truncation, dim_table
from dolbeault.torus import e2_dim_table, torus_dim_table


@dataclass
class DimConfig:
    ns: List[int] = field(default_factory=lambda: [1, 2])
    ms: List[int] = field(default_factory=lambda: [2, 3])
    Ds: List[int] = field(default_factory=lambda: [0, 1, 2])
    ds: List[int] = field(default_factory=lambda: [0, 1])


def rows(cfg: DimConfig):
    for n, m, D in product(cfg.ns, cfg.ms, cfg.Ds):
        top = range(n * m + 1)
        torus = torus_dim_table(n, m, D, top, top)
        e2 = e2_dim_table(n, m, D, top, top)
        for d in cfg.ds:
            affine = dim_table(Context(n, m), Truncation(D, d), top, top)
            for p, q in product(top, top):
                yield {"n": n, "m": m, "D": D, "d": d, "p": p, "q": q, "affine": affine[(p, q)],
                       "torus": torus[(p, q)], "e2": e2[(p, q)]}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=None)
    ap.add_argument("--m", type=int, nargs="+", default=None)
    ap.add_argument("--D", type=int, nargs="+", default=None)
    ap.add_argument("--d", type=int, nargs="+", default=None)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)
    cfg = DimConfig()
    for name, attr in (("n", "ns"), ("m", "ms"), ("D", "Ds"), ("d", "ds")):
        if getattr(args, name) is not None:
            setattr(cfg, attr, getattr(args, name))
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.DictWriter(fh, ["n", "m", "D", "d", "p", "q", "affine", "torus", "e2"])
    writer.writeheader()
    mismatch = 0
    for row in rows(cfg):
        writer.writerow(row)
        mismatch += row["torus"] != row["e2"]
    if fh is not sys.stdout:
        fh.close()
    print(f"torus/E2 mismatches: {mismatch}", file=sys.stderr)
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
