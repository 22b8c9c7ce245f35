"""Ground truth for n = 1: classes are rational functions on Conf_m(C).

``d^J_{z^b} w_ab`` evaluates to ``J! (z^a - z^b)^{-(J+1)}``; everything is
exact rational arithmetic, so agreement means equality.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Optional, Sequence, Tuple

from .classes import CohClass, Context


@dataclass(frozen=True)
class PointConfig:
    """m pairwise distinct exact points, as Fractions or Gaussian pairs."""

    points: Tuple

    def __post_init__(self):
        pts = tuple(self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("points of a configuration must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    @property
    def m(self) -> int:
        return len(self.points)

    @classmethod
    def random(cls, m: int, rng: random.Random, bound: int = 1000) -> "PointConfig":
        while True:
            pts = tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(m))
            if len(set(pts)) == m:
                return cls(pts)


def eval_class(x: CohClass, P: PointConfig):
    """Exact value of the rational function represented by ``x``."""
    ctx = x.ctx
    if ctx.n != 1 or ctx.torus:
        raise ValueError("rational evaluation needs an affine n=1 class")
    if P.m != ctx.m:
        raise ValueError(f"configuration has {P.m} points, context has {ctx.m}")
    z = (None,) + P.points
    inv: Dict[Tuple[int, int], Fraction] = {}
    total = Fraction(0)
    for mono, c in x.items():
        if mono.ext:
            raise ValueError("exterior generators have no rational value")
        t = c
        for (a, _), e in mono.poly:
            t *= z[a] ** e
        for f in mono.factors:
            key = (f.a, f.b)
            if key not in inv:
                inv[key] = 1 / (z[f.a] - z[f.b])
            J = f.J[0]
            t *= factorial(J) * inv[key] ** (J + 1)
        total += t
    return total


def check_product(x: CohClass, y: CohClass, trials: int = 20, seed: int = 0):
    """Compare multiply(x, y) with the product of values at random points.

    Returns ``(True, None)`` or ``(False, counterexample)``.
    """
    from .engine import multiply
    xy = multiply(x, y)
    rng = random.Random(seed)
    for _ in range(trials):
        P = PointConfig.random(x.ctx.m, rng)
        lhs = eval_class(xy, P)
        rhs = eval_class(x, P) * eval_class(y, P)
        if lhs != rhs:
            return False, {"points": P.points, "engine": lhs, "direct": rhs}
    return True, None


def check_equal(x: CohClass, y: CohClass, trials: int = 20, seed: int = 0) -> bool:
    rng = random.Random(seed)
    return all(eval_class(x, P) == eval_class(y, P)
               for P in (PointConfig.random(x.ctx.m, rng) for _ in range(trials)))
