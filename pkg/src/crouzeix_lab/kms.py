"""KMS matrices A_k and the geometry of their numerical ranges.

The boundary of W(A_k) is the arc ``phi_k(theta)``, ``|theta| <= 2 pi / k``,
of the curve ``phi_k(theta) = (1/k) sum_{j=1}^{k-1} j exp(i (k-j) theta)``
closed by the vertical segment on ``Re z = -1/2``.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq

from .linalg import hermitian_eigs

OMEGA_GRID = 720


class BadDimension(ValueError):
    pass


class DegenerateDirection(ValueError):
    pass


class TooCoarse(ValueError):
    pass


def build_kms(n: int) -> np.ndarray:
    """The n x n matrix with ones strictly above the diagonal."""
    if n < 2:
        raise BadDimension(f"n must be >= 2, got {n}")
    return np.triu(np.ones((n, n), dtype=complex), 1)


def boundary_point(k: int, theta):
    """Point(s) ``phi_k(theta)`` on the algebraic part of the boundary."""
    theta = np.asarray(theta, dtype=float)
    z = sum((k - j) * np.exp(1j * j * theta) for j in range(1, k)) / k
    return z[()] if z.ndim == 0 else z


def segment_half_height(k: int) -> float:
    return 0.5 / math.tan(math.pi / k)


def horizontal_tangent_angles(k: int) -> np.ndarray:
    """theta_j = (2j - 1) pi / k, j = 1..k, where the outer normal is vertical."""
    return np.array([(2 * j - 1) * math.pi / k for j in range(1, k + 1)])


def _speed(k: int, theta: float) -> float:
    # k e^{i theta} phi_k'(theta) / i = e^{i k theta / 2} * speed
    return sum(j * (k - j) * math.cos((k - 2 * j) * theta / 2) for j in range(1, k))


def cusp_angles(k: int) -> np.ndarray:
    """Angles in (0, 2 pi) where the tangent of the full curve reverses.

    There are k - 2 of them, one next to each (2j - 1) pi / k, j = 2..k-1.
    They coincide with those angles only at theta = pi.
    """
    grid = np.linspace(0, 2 * np.pi, 64 * k + 1)[1:-1]
    vals = np.array([_speed(k, t) for t in grid])
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]:
        roots.append(brentq(lambda t: _speed(k, t), grid[i], grid[i + 1], xtol=1e-15))
    return np.array(roots)


def flat_points(k: int) -> np.ndarray:
    """Points of the algebraic curve lying on the line Re z = -1/2."""
    return np.array([-0.5 + 0.5j / math.tan(j * math.pi / k) for j in range(1, k)])


def tangential_poly(k: int, u: float, v: float, w: float) -> float:
    """Evaluate T_k(u, v, w) = det(u B + v C + w I) by the three-term recursion.

    The difference quotient ``(X^m - Y^m) / (i v)`` with
    ``X, Y = w - (u +- i v)/2`` is expanded as ``-sum X^j Y^(m-1-j)``, which
    has no cancellation and is exact at v = 0.
    """
    if k < 1:
        raise BadDimension("k must be >= 1")
    if u == 0 and v == 0:
        raise DegenerateDirection("direction (u, v) = (0, 0)")
    x = w - complex(u, v) / 2
    y = w - complex(u, -v) / 2
    scale = (u * u + v * v) / 4
    t = complex(w)
    for m in range(1, k):
        quotient = -sum(x**j * y ** (m - 1 - j) for j in range(m))
        t = w * t + quotient * scale
    mag = max(1.0, abs(u), abs(v), abs(w)) ** k
    if abs(t.imag) > 1e-12 * mag:
        raise ArithmeticError(f"T_{k} has imaginary residue {t.imag:.3g}")
    return t.real


def tangential_closed_form(k: int, phi: float, w: float) -> float:
    """T_k(cos phi, sin phi, w) = ((-1)^(k+1) / sin phi) Im(e^{-i phi} (e^{i phi}/2 - w)^k).

    Needs sin phi != 0. The sign is the one that matches det(uB + vC + wI).
    """
    return (-1) ** (k + 1) / math.sin(phi) * (np.exp(-1j * phi) * (np.exp(1j * phi) / 2 - w) ** k).imag


def cardioid_p(z):
    """27|z|^4 - 18|z|^2 - 8 Re z - 1, negative inside the A_3 cardioid."""
    z = np.asarray(z, dtype=complex)
    r2 = (z * z.conj()).real
    p = 27 * r2**2 - 18 * r2 - 8 * z.real - 1
    return p[()] if p.ndim == 0 else p


def support_function(a, omega: float) -> float:
    """max Re(exp(-i omega) z) over z in W(a)."""
    b = np.exp(-1j * omega) * np.asarray(a, dtype=complex)
    return float(hermitian_eigs((b + b.conj().T) / 2)[-1])


def support_profile(a, n_omega: int = OMEGA_GRID):
    omegas = 2 * np.pi * np.arange(n_omega) / n_omega
    return omegas, np.array([support_function(a, om) for om in omegas])


def support_excess(a, points, n_omega: int = OMEGA_GRID) -> np.ndarray:
    """Per point, max over the omega grid of Re(e^{-i omega} z) - h(omega).

    Non-positive values mean the point passes the outer membership test;
    values near zero mean it touches a supporting line.
    """
    omegas, h = support_profile(a, n_omega)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    proj = (np.exp(-1j * omegas)[None, :] * pts[:, None]).real
    return np.max(proj - h[None, :], axis=1)


@dataclass
class BoundaryDiscretization:
    """Closed counter-clockwise polyline on the boundary of W(A_k).

    ``nodes[0]`` is the right extreme point (k-1)/2. Indices ``0..n`` hold the
    upper algebraic arc, the next ``n_segment`` nodes walk down the segment,
    and the rest is the mirror image of indices ``1..n + n_segment``.
    """

    k: int
    n: int
    n_segment: int
    step: float
    nodes: np.ndarray
    parts: list = field(repr=False)

    @property
    def nn(self) -> int:
        return len(self.nodes)


def _segment_count(k: int, n: int) -> tuple[int, float]:
    th = 2 * np.pi * np.array([n - 1, n]) / (n * k)
    z_prev, z_end = boundary_point(k, th)
    h0 = abs(z_end - z_prev)
    n2 = math.trunc(z_end.imag / h0 - 0.5)
    return n2, z_end.imag / (n2 + 0.5)


def discretize_boundary(k: int, n: int) -> BoundaryDiscretization:
    """Nodes phi_k(2 pi j / (k n)), j = 0..n, plus an evenly spaced segment.

    The segment step is the algebraic end step rounded so that the segment
    nodes sit at odd multiples of h/2 from the real axis. For coarse n the
    segment may get no interior node at all.
    """
    if k < 3:
        raise BadDimension("need k >= 3")
    if n < 4:
        raise TooCoarse("need n >= 4 nodes on the upper arc")
    n2, h = _segment_count(k, n)
    upper = boundary_point(k, 2 * np.pi * np.arange(n + 1) / (n * k))
    seg = upper[n] - 1j * h * np.arange(1, n2 + 1)
    half = np.concatenate([upper, seg])
    nodes = np.concatenate([half, half[:0:-1].conj()])
    half_parts = ["algebraic"] * (n + 1) + ["segment"] * n2
    parts = half_parts + half_parts[:0:-1]
    return BoundaryDiscretization(k, n, n2, h, nodes, parts)


def node_count(k: int, n: int) -> int:
    n2, _ = _segment_count(k, n)
    return 2 * (n + 1 + n2) - 1


def discretize_total(k: int, nn: int) -> BoundaryDiscretization:
    """Discretization whose total node count is closest to ``nn``.

    Ties go to the smaller count; an exact match is always preferred.
    """
    best = None
    n = 4
    while True:
        count = node_count(k, n)
        key = (abs(count - nn), count)
        if best is None or key < best[0]:
            best = (key, n)
        # counts grow with n up to small rounding wobbles
        if count - nn > best[0][0] + 8:
            break
        n += 1
        if n > 4 * nn + 16:
            break
    if best is None:
        raise TooCoarse(f"no valid discretization near {nn} nodes for k={k}")
    return discretize_boundary(k, best[1])


def boundary_rows(disc: BoundaryDiscretization):
    """CSV rows ``(index, re, im, part)`` for a discretization."""
    return [(i, z.real, z.imag, part) for i, (z, part) in enumerate(zip(disc.nodes, disc.parts))]
