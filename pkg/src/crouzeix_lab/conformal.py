"""Riemann map of W(A_k) onto the unit disk by a log-kernel integral equation.

Writing g(z) = z exp(u + i v) with u = -log|z| on the boundary, u is the
logarithmic potential of a density q on the boundary nodes. q is found by
collocation at the nodes with the periodic log-singularity split off, and
the Taylor coefficients of g at 0 follow from the potential's derivatives.

All node sums use the quadrature weight 2 pi / nn folded into q.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import kms
from .linalg import RSystem, factor, solve_sym

COND_THRESHOLD = 1e4
WINDING_TOL = 1e-6
COINCIDENT_TOL = 1e-15


class CoincidentNodes(ValueError):
    pass


class OriginOutside(ValueError):
    pass


def fourier_log_coeffs(nn: int) -> np.ndarray:
    """c(m) = sum_{p=1}^{n} cos(2 pi m p / nn) / p for m = 0..nn-1, nn = 2n+1."""
    n = (nn - 1) // 2
    p = np.arange(1, n + 1)
    tau = 2 * np.pi * np.arange(nn) / nn
    return (np.cos(np.outer(np.arange(nn), tau[1 : n + 1])) / p).sum(axis=1)


def spectral_speed(nodes) -> np.ndarray:
    """|sigma'(tau_j)| from the trigonometric interpolant in the index parameter.

    d(m) = (2/nn) sum_p p sin(2 pi m p / nn) is the derivative of the
    Dirichlet kernel; sigma'(tau_j) = sum_m sigma_m d(m - j).
    """
    z = np.asarray(nodes, dtype=complex)
    nn = len(z)
    n = (nn - 1) // 2
    p = np.arange(1, n + 1)
    tau = 2 * np.pi * np.arange(nn) / nn
    d = 2 * (np.sin(np.outer(np.arange(nn), tau[1 : n + 1])) * p).sum(axis=1) / nn
    idx = (np.arange(nn)[None, :] - np.arange(nn)[:, None]) % nn
    return np.abs(d[idx] @ z)


def assemble_system(nodes) -> RSystem:
    """Collocation matrix and right-hand side -log|sigma_j|."""
    z = np.asarray(nodes, dtype=complex)
    nn = len(z)
    if nn % 2 == 0 or nn < 3:
        raise ValueError(f"need an odd number of nodes >= 3, got {nn}")
    w = np.exp(2j * np.pi * np.arange(nn) / nn)
    dz = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(dz, 1.0)
    if dz.min() < COINCIDENT_TOL:
        raise CoincidentNodes("two boundary nodes coincide")
    dw = np.abs(w[:, None] - w[None, :])
    np.fill_diagonal(dw, 1.0)
    kernel = np.log(dz / dw)
    # symmetrize: the two triangles differ by rounding only
    kernel = (kernel + kernel.T) / 2
    np.fill_diagonal(kernel, np.log(spectral_speed(z)))
    c = fourier_log_coeffs(nn)
    i = np.arange(nn)
    matrix = kernel - c[np.abs(i[:, None] - i[None, :])]
    return RSystem(matrix, -np.log(np.abs(z)))


@dataclass
class DensitySolution:
    nodes: np.ndarray
    q: np.ndarray
    sigma_prime_abs: np.ndarray
    translated: bool
    cond_estimate: float
    residual: float = field(default=0.0)

    @property
    def nn(self) -> int:
        return len(self.nodes)

    @property
    def kernel_shift(self) -> float:
        """log(lambda): 0 for the plain kernel, 1 when translated (lambda = e)."""
        return 1.0 if self.translated else 0.0


def solve_density(sys: RSystem, nodes, force_translate: bool = False) -> DensitySolution:
    """Solve for q, switching to the kernel scale lambda = e when ill-conditioned.

    With lambda = e the matrix becomes M - E (E all ones) and the right-hand
    side is unchanged; u then picks up the same -1 shift in its kernel.
    """
    fac = factor(sys.matrix)
    translated = force_translate or fac.cond_estimate > COND_THRESHOLD
    cond = fac.cond_estimate
    matrix = sys.matrix
    if translated:
        matrix = sys.matrix - 1.0
        sys = RSystem(matrix, sys.rhs)
        fac = factor(matrix)
    q = solve_sym(sys, fac)
    residual = float(np.max(np.abs(matrix @ q - sys.rhs)))
    nodes = np.asarray(nodes, dtype=complex)
    return DensitySolution(nodes, q, spectral_speed(nodes), translated, cond, residual)


def winding_number(nodes) -> float:
    z = np.asarray(nodes, dtype=complex)
    return float(np.sum(np.angle(np.roll(z, -1) / z)) / (2 * np.pi))


def u_derivs_at_zero(sol: DensitySolution) -> tuple[np.ndarray, float]:
    """(u(0), u'(0), ..., u''''(0)) and the largest discarded imaginary part."""
    z = sol.nodes
    if abs(winding_number(z) - 1) > WINDING_TOL:
        raise OriginOutside("the boundary does not wind once around 0")
    out = [float(sol.q @ (np.log(np.abs(z)) - sol.kernel_shift))]
    imag = 0.0
    for m in range(1, 5):
        s = -math.factorial(m - 1) * np.sum(sol.q / z**m)
        out.append(s.real)
        imag = max(imag, abs(s.imag))
    return np.array(out), imag


def g_derivs(u) -> np.ndarray:
    """g'(0)..g^(5)(0) for g(z) = z exp(U(z)) with U real on the real axis."""
    u0, u1, u2, u3, u4 = u
    gp = math.exp(u0)
    return np.array(
        [
            gp,
            2 * gp * u1,
            3 * gp * (u1**2 + u2),
            4 * gp * (u1**3 + 3 * u1 * u2 + u3),
            5 * gp * (u1**4 + 6 * u1**2 * u2 + 4 * u1 * u3 + 3 * u2**2 + u4),
        ]
    )


def g_of_A(a, g) -> np.ndarray:
    """sum_m g^(m)(0)/m! a^m for nilpotent a, using as many terms as it needs."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if len(g) < n - 1:
        raise ValueError(f"need {n - 1} derivatives, got {len(g)}")
    out = np.zeros_like(a)
    power = np.eye(n, dtype=complex)
    for m in range(1, min(len(g), n - 1) + 1):
        power = power @ a
        out = out + g[m - 1] / math.factorial(m) * power
    return out


@dataclass
class ConformalData:
    k: int
    n: int
    nn: int
    u0: float
    u_derivs: np.ndarray
    g_derivs: np.ndarray
    M: np.ndarray
    translated: bool
    cond_estimate: float
    imag_residue: float
    residual: float

    @property
    def entries(self) -> np.ndarray:
        """First row of M past the diagonal: a, b, c, ..."""
        return self.M[0, 1:].real.copy()

    @property
    def a(self) -> float:
        return float(self.M[0, 1].real)

    @property
    def b(self) -> float:
        return float(self.M[0, 2].real)

    def to_record(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "nn": self.nn,
            "translated": self.translated,
            "cond_estimate": self.cond_estimate,
            "g_derivs": list(self.g_derivs),
            "M": list(self.entries),
        }


def map_from_nodes(nodes, force_translate: bool = False):
    """Density, u-derivatives and g-derivatives for an arbitrary node ring."""
    sys = assemble_system(nodes)
    sol = solve_density(sys, nodes, force_translate)
    u, imag = u_derivs_at_zero(sol)
    return sol, u, imag, g_derivs(u)


def conformal_map(k: int, n_disc: int = 1205) -> ConformalData:
    """M = g(A_k) using the discretization with about ``n_disc`` nodes."""
    disc = kms.discretize_total(k, n_disc)
    sol, u, imag, g = map_from_nodes(disc.nodes)
    m = g_of_A(kms.build_kms(k), g)
    return ConformalData(
        k, disc.n, disc.nn, u[0], u[1:], g, m, sol.translated, sol.cond_estimate, imag, sol.residual
    )


def circle_nodes(nn: int, radius: float = 1.0) -> np.ndarray:
    return radius * np.exp(2j * np.pi * np.arange(nn) / nn)


@dataclass
class ConvergenceRow:
    n: int
    a: float
    b: float
    g2: float
    a_ratio: float
    b_ratio: float
    g2_ratio: float


def convergence_study(k: int, n_list) -> list[ConvergenceRow]:
    """a(n), b(n), g''(0)(n) against the finest count in ``n_list``.

    Ratios are (a_ref - a(n)) n^4, (b(n) - b_ref) n^4 and
    (g''(n) - g''_ref) n^4; the reference row has ratios 0.
    """
    counts = sorted(set(int(n) for n in n_list))
    data = {}
    for nn in counts:
        cd = conformal_map(k, nn)
        if cd.nn != nn:
            raise ValueError(f"no discretization of W(A_{k}) with exactly {nn} nodes")
        data[nn] = (cd.a, cd.b if k > 2 else float("nan"), float(cd.g_derivs[1]))
    ra, rb, rg = data[counts[-1]]
    return [
        ConvergenceRow(nn, a, b, g2, (ra - a) * nn**4, (b - rb) * nn**4, (g2 - rg) * nn**4)
        for nn, (a, b, g2) in data.items()
    ]


def convergence_slope(rows: list[ConvergenceRow]) -> float:
    """Least-squares slope of log|a(n) - a_ref| against log n, reference excluded."""
    ref = rows[-1]
    pts = [(math.log(r.n), math.log(abs(r.a - ref.a))) for r in rows[:-1] if r.a != ref.a]
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])
