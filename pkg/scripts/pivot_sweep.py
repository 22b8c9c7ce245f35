"""Build full relation windows and report rank, provenance and pivot discipline.

    python3 scripts/pivot_sweep.py --n 1 2 --m 3 --D 0 1 2 --d 0 1 2
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from itertools import product
from typing import List, Optional

from dolbeault.classes import Context, Truncation
from dolbeault.engine import Window, build_relation_space


@dataclass
class SweepConfig:
    ns: List[int] = field(default_factory=lambda: [1, 2])
    ms: List[int] = field(default_factory=lambda: [2, 3])
    Ds: List[int] = field(default_factory=lambda: [0, 1, 2])
    ds: List[int] = field(default_factory=lambda: [0, 1, 2])
    k_max: Optional[int] = None


def sweep(cfg: SweepConfig) -> bool:
    ok = True
    print("n m D d  ambient    rank  split  arnold  inadmissible-pivots  seconds")
    for n, m, D, d in product(cfg.ns, cfg.ms, cfg.Ds, cfg.ds):
        t0 = time.perf_counter()
        rs = build_relation_space(Context(n, m), Window(Truncation(D, d), k_max=cfg.k_max))
        good = rs.inadmissible_pivots_only()
        ok &= good
        prov = rs.provenance
        print(f"{n} {m} {D} {d} {len(rs.ambient):8d} {rs.rank:7d} {prov.get('split', 0):6d} "
              f"{prov.get('arnold', 0):7d}  {str(good):>19}  {time.perf_counter() - t0:7.1f}", flush=True)
    return ok


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=None)
    ap.add_argument("--m", type=int, nargs="+", default=None)
    ap.add_argument("--D", type=int, nargs="+", default=None)
    ap.add_argument("--d", type=int, nargs="+", default=None)
    ap.add_argument("--k-max", type=int, default=None, help="largest number of kernel factors")
    args = ap.parse_args(argv)
    cfg = SweepConfig(k_max=args.k_max)
    for name, attr in (("n", "ns"), ("m", "ms"), ("D", "Ds"), ("d", "ds")):
        if getattr(args, name) is not None:
            setattr(cfg, attr, getattr(args, name))
    return 0 if sweep(cfg) else 1


if __name__ == "__main__":
    sys.exit(main())
