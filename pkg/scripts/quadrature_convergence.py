"""Error of the sphere and contour integrals as the grid is refined.

    python3 scripts/quadrature_convergence.py --sizes 8 16 32 64
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from typing import List, Tuple

from dolbeault.quadrature import (
    QuadratureGrid, coordinate_change_check_n1, lie_derivative_check, sphere_residue_numeric,
)


@dataclass
class ConvergenceConfig:
    sizes: List[int] = field(default_factory=lambda: [8, 16, 32, 64])
    indices: List[Tuple[int, int]] = field(default_factory=lambda: [(0, 0), (1, 0), (1, 1), (2, 0)])
    radius: float = 1.0
    contour: List[complex] = field(default_factory=lambda: [1, 0.3, 0.1])
    contour_radius: float = 0.5


def run(cfg: ConvergenceConfig):
    header = ["N"] + [f"I={I}" for I in cfg.indices] + ["lie j=1", "contour"]
    print("  ".join(f"{h:>12}" for h in header))
    for N in cfg.sizes:
        g = QuadratureGrid.cube(N)
        errs = [abs(sphere_residue_numeric(2, I, g, radius=cfg.radius) - (1 if not any(I) else 0)) for I in cfg.indices]
        errs.append(abs(lie_derivative_check(2, 1, g)))
        errs.append(abs(coordinate_change_check_n1(cfg.contour, cfg.contour_radius, g)))
        print(f"{N:>12}  " + "  ".join(f"{e:12.3e}" for e in errs))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=None)
    ap.add_argument("--radius", type=float, default=1.0)
    args = ap.parse_args(argv)
    cfg = ConvergenceConfig(radius=args.radius)
    if args.sizes:
        cfg.sizes = args.sizes
    run(cfg)


if __name__ == "__main__":
    main()
