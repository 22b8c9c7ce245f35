"""Numerical integrals of the Bochner-Martinelli kernel over spheres and circles.

For n = 2 the sphere of radius R is parametrized by
``z1 = R cos(t) e^{i p1}``, ``z2 = R sin(t) e^{i p2}`` with t in [0, pi/2]
(Gauss-Legendre) and p1, p2 in [0, 2 pi) (trapezoid). Forms are pulled
back by evaluating them on the coordinate tangent vectors; the sign of
the chart relative to the outward boundary orientation is computed once
from a 4x4 determinant. Floating point stays inside this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial, pi
from typing import Optional, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class QuadratureGrid:
    """Node counts: ``n_theta`` Gauss-Legendre nodes and ``n_phi`` trapezoid nodes per angle."""

    n_theta: int = 64
    n_phi: int = 64

    def __post_init__(self):
        if self.n_theta < 8 or self.n_phi < 8:
            raise ValueError("quadrature grids need at least 8 nodes per direction")

    @classmethod
    def cube(cls, N: int) -> "QuadratureGrid":
        return cls(N, N)

    def doubled(self) -> "QuadratureGrid":
        return QuadratureGrid(2 * self.n_theta, 2 * self.n_phi)


def kernel_constant(n: int) -> complex:
    """Prefactor of the (0, n-1) kernel: (-1)^{n(n-1)/2+1} (n-1)! / (2 pi i)^n."""
    return (-1) ** (n * (n - 1) // 2 + 1) * factorial(n - 1) / (2j * pi) ** n


def _falling(s: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= s - t
    return out


def _s3_nodes(grid: QuadratureGrid, radius: float):
    x, wx = np.polynomial.legendre.leggauss(grid.n_theta)
    t = (x + 1) * (pi / 4)
    wt = wx * (pi / 4)
    p = np.arange(grid.n_phi) * (2 * pi / grid.n_phi)
    wp = np.full(grid.n_phi, 2 * pi / grid.n_phi)
    T, P1, P2 = np.meshgrid(t, p, p, indexing="ij")
    W = wt[:, None, None] * wp[None, :, None] * wp[None, None, :]
    z1 = radius * np.cos(T) * np.exp(1j * P1)
    z2 = radius * np.sin(T) * np.exp(1j * P2)
    # tangent vectors d/dt, d/dp1, d/dp2 applied to (z1, z2)
    dz1 = (-radius * np.sin(T) * np.exp(1j * P1), 1j * z1, np.zeros_like(z1))
    dz2 = (radius * np.cos(T) * np.exp(1j * P2), np.zeros_like(z2), 1j * z2)
    return z1, z2, dz1, dz2, W


def _chart_sign() -> int:
    """Orientation of (t, p1, p2) against the outward-normal boundary orientation."""
    t, p1, p2 = 0.3, 0.7, 1.1
    def real4(a, b):
        return [a.real, a.imag, b.real, b.imag]
    c, s = np.cos(t), np.sin(t)
    e1, e2 = np.exp(1j * p1), np.exp(1j * p2)
    normal = real4(c * e1, s * e2)
    vt = real4(-s * e1, c * e2)
    v1 = real4(1j * c * e1, 0j)
    v2 = real4(0j, 1j * s * e2)
    return int(np.sign(np.linalg.det(np.array([normal, vt, v1, v2]))))


def _det3(r0, r1, r2):
    return (r0[0] * (r1[1] * r2[2] - r1[2] * r2[1])
            - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
            + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]))


def _kernel_coefficients(z1, z2, J: Tuple[int, int]):
    """Coefficients of dzb1 and dzb2 in d^J of the n = 2 kernel.

    The kernel is c |z|^{-4} (zb2 dzb1 - zb1 dzb2), and holomorphic
    derivatives only see |z|^{-4}: d^J |z|^{-4} = (-2)_{|J|} zb^J |z|^{-4-2|J|}.
    """
    c = kernel_constant(2)
    k = J[0] + J[1]
    r2 = (z1 * z1.conjugate() + z2 * z2.conjugate()).real
    radial = _falling(-2, k) * z1.conjugate() ** J[0] * z2.conjugate() ** J[1] * r2 ** (-2 - k)
    return c * radial * z2.conjugate(), -c * radial * z1.conjugate()


def sphere_residue_numeric(n: int, I: Sequence[int], grid: QuadratureGrid, J: Optional[Sequence[int]] = None,
                           radius: float = 1.0, scale: complex = 1.0) -> complex:
    """Integral over the sphere of dz_1...dz_n z^I d^J(omega), times ``scale``."""
    I = tuple(I)
    J = tuple(J) if J is not None else (0,) * n
    if len(I) != n or len(J) != n:
        raise ValueError("multi-index length must equal n")
    if n == 1:
        N = grid.n_phi
        phi = np.arange(N) * (2 * pi / N)
        z = radius * np.exp(1j * phi)
        # d^J (1 / (2 pi i z)) with respect to z; dz = i z dphi
        dj = (-1) ** J[0] * factorial(J[0]) * z ** (-(J[0] + 1)) / (2j * pi)
        vals = z ** I[0] * dj * 1j * z
        return complex(scale * vals.sum() * (2 * pi / N))
    if n != 2:
        raise ValueError("sphere quadrature is implemented for n in {1, 2}")
    z1, z2, dz1, dz2, W = _s3_nodes(grid, radius)
    g1, g2 = _kernel_coefficients(z1, z2, J)
    dzb1 = tuple(v.conjugate() for v in dz1)
    dzb2 = tuple(v.conjugate() for v in dz2)
    form = g1 * _det3(dz1, dz2, dzb1) + g2 * _det3(dz1, dz2, dzb2)
    vals = z1 ** I[0] * z2 ** I[1] * form
    return complex(scale * _chart_sign() * np.sum(vals * W))


def lie_derivative_check(n: int, j: int, grid: QuadratureGrid, scale: complex = 1.0) -> complex:
    """Integral of dz_1 dz_2 d_j(omega) over the unit sphere; zero up to quadrature error."""
    if n != 2 or j not in (1, 2):
        raise ValueError("lie_derivative_check covers n = 2, j in {1, 2}")
    J = (1, 0) if j == 1 else (0, 1)
    return sphere_residue_numeric(2, (0, 0), grid, J, scale=scale)


def _poly(coeffs: Sequence[complex], z):
    return sum(c * z ** (k + 1) for k, c in enumerate(coeffs))


def _dpoly(coeffs: Sequence[complex], z):
    return sum((k + 1) * c * z ** k for k, c in enumerate(coeffs))


def _segments_cross(pts: np.ndarray) -> bool:
    """True if the closed polygon through ``pts`` has two crossing non-adjacent edges."""
    a = pts
    b = np.roll(pts, -1)
    N = len(pts)
    d = b - a

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    i, k = np.triu_indices(N, 2)
    keep = ~((i == 0) & (k == N - 1))
    i, k = i[keep], k[keep]
    s1 = cross(d[i], a[k] - a[i])
    s2 = cross(d[i], b[k] - a[i])
    s3 = cross(d[k], a[i] - a[k])
    s4 = cross(d[k], b[i] - a[k])
    return bool(np.any((s1 * s2 < 0) & (s3 * s4 < 0)))


def is_injective_on_disk(coeffs: Sequence[complex], radius: float, samples: int = 256) -> bool:
    """Sampled injectivity test for w(z) = sum c_k z^k on the closed disk.

    A holomorphic map that is injective on the boundary circle is injective
    on the disk, so the test checks that the sampled image of the circle is
    a simple polygon and that w' does not vanish on a sample of the disk.
    """
    if abs(coeffs[0]) == 0:
        return False
    phi = np.arange(samples) * (2 * pi / samples)
    boundary = _poly(coeffs, radius * np.exp(1j * phi))
    if _segments_cross(boundary):
        return False
    r = np.linspace(0, radius, 33)[:, None]
    inner = _dpoly(coeffs, r * np.exp(1j * phi[None, ::4]))
    return bool(np.all(np.abs(inner) > 0))


def coordinate_change_check_n1(coeffs: Sequence[complex], radius: float, grid: QuadratureGrid) -> complex:
    """(1/2 pi i) of the contour integral of dw/w minus that of dz/z over |z| = radius.

    ``coeffs`` lists c_1, c_2, ... in w(z) = c_1 z + c_2 z^2 + ...
    """
    coeffs = list(coeffs)
    if not coeffs or not is_injective_on_disk(coeffs, radius):
        raise ValueError("coordinate change is not injective on the disk (or w'(0) = 0)")
    N = grid.n_phi
    z = radius * np.exp(1j * np.arange(N) * (2 * pi / N))
    # (1/2 pi i) * integral f dz with dz = i z dphi is the mean of z f; for
    # f = w'/w the factor z cancels against w(z) = z * (c_1 + c_2 z + ...)
    num = sum((k + 1) * c * z ** k for k, c in enumerate(coeffs))
    den = sum(c * z ** k for k, c in enumerate(coeffs))
    w_term = np.mean(num / den)
    z_term = np.mean(np.ones_like(z))
    return complex(w_term - z_term)
