"""Two-sided bounds on psi_D(M) for nilpotent upper triangular Toeplitz M.

Lower bounds come from ||b(M)|| for a Blaschke product b of order n-1;
upper bounds from cond(H) for a similarity with H^-1 M H equal to the
nilpotent Jordan block, whose norm is 1.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular
from scipy.optimize import minimize

from .linalg import cond2, shift_matrix, spectral_norm

ROOT_MARGIN = 1e-12
SEARCH_CLAMP = 1 - 1e-6
SIMPLEX_STEP = 1e-3
MAX_ITER = 2000
JORDAN_GUARD = 1e-8
CONTRACTION_TOL = 1e-9

# Toeplitz entries (a, b, c, ...) of g(A_n) as printed with the published bounds.
PUBLISHED_M_ENTRIES = {
    3: (1.360374515, 0.710915425),
    4: (1.1888506, 0.3742134, 0.3443362),
    5: (1.1170233, 0.2325756, 0.2187502, 0.1895824),
    6: (1.0798634, 0.1590093, 0.1519169, 0.1359021, 0.1161184),
}

PUBLISHED_ROOTS = {
    3: (-0.5470208, 0.1465739),
    4: (-0.4560323 + 0.3891911j, -0.4560323 - 0.3891911j, 0.2474013),
    5: (-0.2583004 + 0.60451151j, -0.2583004 - 0.60451151j, -0.6247827, 0.3295365),
    6: (
        -0.5859775 + 0.3199164j,
        -0.5859775 - 0.3199164j,
        -0.0604565 + 0.70030221j,
        -0.0604565 - 0.70030221j,
        0.3972632,
    ),
}
# The A_6 list is printed with a sixth value repeated from the A_5 list.
PUBLISHED_ROOTS_6_PRINTED = PUBLISHED_ROOTS[6] + (0.3295365,)

PUBLISHED_FREE = {
    3: (),
    4: (-0.0735033, -0.0231366),
    5: (-0.0194597, -0.0384976, -0.1091772, -0.2503045),
    6: (-0.0163999, -0.0248879, -0.0578414, -0.1294105, -0.243031),
}

PUBLISHED_LOWER = {3: 1.9956978, 4: 1.9938003, 5: 1.9929216, 6: 1.9924447}
PUBLISHED_COND_H = {3: 1.995697855, 4: 1.9938002, 5: 1.9929216, 6: 1.9924445}
PUBLISHED_BRACKETS = {
    3: (1.9956978, 1.9956979),
    4: (1.993800, 1.993801),
    5: (1.992921, 1.992922),
    6: (1.992444, 1.992445),
}


class RootOnCircle(ValueError):
    pass


class BadFreeLength(ValueError):
    pass


def toeplitz_upper(entries) -> np.ndarray:
    """Nilpotent upper triangular Toeplitz matrix with first row (0, *entries)."""
    n = len(entries) + 1
    m = np.zeros((n, n), dtype=complex)
    for j, e in enumerate(entries, start=1):
        m += e * np.eye(n, k=j)
    return m


@dataclass
class BlaschkeProduct:
    roots: tuple

    def __post_init__(self):
        self.roots = tuple(complex(r) for r in self.roots)
        bad = [r for r in self.roots if abs(r) > 1 - ROOT_MARGIN]
        if bad:
            raise RootOnCircle(f"roots must lie strictly inside the unit disk: {bad}")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for r in self.roots:
            out = out * (z - r) / (1 - np.conj(r) * z)
        return out

    def is_conjugate_symmetric(self, tol: float = 1e-6) -> bool:
        rest = list(self.roots)
        for r in self.roots:
            if r not in rest:
                continue
            rest.remove(r)
            if abs(r.imag) <= tol:
                continue
            match = min(rest, key=lambda s: abs(s - r.conjugate()), default=None)
            if match is None or abs(match - r.conjugate()) > tol:
                return False
            rest.remove(match)
        return True


def blaschke_factor(m, r: complex) -> np.ndarray:
    """(m - r I)(I - conj(r) m)^-1 by triangular solve."""
    n = m.shape[0]
    eye = np.eye(n, dtype=complex)
    # X (I - r* m) = (m - r I)  <=>  (I - r* m)^T X^T = (m - r I)^T
    left = (eye - np.conj(r) * m).T
    return solve_triangular(left, (m - r * eye).T, lower=True).T


def blaschke_apply(m, b: BlaschkeProduct) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if np.any(np.abs(np.tril(m)) > 0):
        raise ValueError("blaschke_apply expects a strictly upper triangular matrix")
    out = np.eye(m.shape[0], dtype=complex)
    for r in b.roots:
        out = out @ blaschke_factor(m, r)
    return out


def _pack(roots) -> np.ndarray:
    return np.array([[r.real, r.imag] for r in roots]).ravel()


def _unpack(x) -> list:
    roots = []
    for re, im in np.asarray(x).reshape(-1, 2):
        r = complex(re, im)
        if abs(r) > SEARCH_CLAMP:
            r *= SEARCH_CLAMP / abs(r)
        roots.append(r)
    return roots


def _simplex(x0) -> np.ndarray:
    return np.vstack([x0] + [x0 + SIMPLEX_STEP * e for e in np.eye(len(x0))])


def lower_bound_search(m, init: BlaschkeProduct) -> tuple[BlaschkeProduct, float]:
    """Nelder-Mead on root coordinates maximizing ||b(m)||; never worse than ``init``."""
    m = np.asarray(m, dtype=complex)
    start = spectral_norm(blaschke_apply(m, init))
    x0 = _pack(init.roots)

    def objective(x):
        return -spectral_norm(blaschke_apply(m, BlaschkeProduct(_unpack(x))))

    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": _simplex(x0),
            "maxiter": MAX_ITER,
            "xatol": 1e-12,
            "fatol": 1e-15,
        },
    )
    found = BlaschkeProduct(_unpack(res.x))
    value = spectral_norm(blaschke_apply(m, found))
    if value < start:
        return init, start
    return found, value


@dataclass
class SimilarityH:
    n: int
    H: np.ndarray
    free_params: tuple = ()


def _free_len(n: int) -> int:
    return len(PUBLISHED_FREE[n])


def build_H(n: int, entries, free=()) -> SimilarityH:
    """Upper triangular H with H^-1 M H = J for M = toeplitz_upper(entries).

    Entries follow the explicit constructions used for n = 3..6. For n = 4 the
    (3, 4) entry is -x/a; the transposed value -x a does not give a Jordan
    block.
    """
    if n not in PUBLISHED_FREE:
        raise ValueError(f"n must be in 3..6, got {n}")
    free = tuple(float(f) for f in free)
    if len(free) != _free_len(n):
        raise BadFreeLength(f"n={n} takes {_free_len(n)} free parameters, got {len(free)}")
    if len(entries) < n - 1:
        raise ValueError(f"need {n - 1} Toeplitz entries, got {len(entries)}")
    a, b, *rest = [float(e) for e in entries[: n - 1]]

    if n == 3:
        h = [
            [a, b / (2 * a), -(b**2) / (8 * a**3)],
            [0, 1, -b / (2 * a**2)],
            [0, 0, 1 / a],
        ]
    elif n == 4:
        (c,) = rest
        z, t = free
        x = b / a**1.5
        y = a * z - b * x / a + c / a**1.5
        h = [
            [a**1.5, x * a, y, t],
            [0, a**0.5, 0, z],
            [0, 0, a**-0.5, -x / a],
            [0, 0, 0, a**-1.5],
        ]
    elif n == 5:
        c, d = rest
        u, w, hg, hh = free
        f = a * hh + b * a**-2
        v = a * hg + b * hh + c * a**-2
        z = a * f + b / a
        t = a * w + b * hg + c * hh + d * a**-2
        y = a * v + b * f + c / a
        x = a * z + b
        h = [
            [a**2, x, y, t, u],
            [0, a, z, v, w],
            [0, 0, 1, f, hg],
            [0, 0, 0, 1 / a, hh],
            [0, 0, 0, 0, a**-2],
        ]
    else:
        c, d, e = rest
        y1, y2, y3, y4, y5 = free
        x9 = a * y5 + b * a**-2.5
        x8 = a * y4 + b * y5 + c * a**-2.5
        x7 = a * x9 + b * a**-1.5
        x6 = a * y3 + b * y4 + c * y5 + d * a**-2.5
        x5 = a * x8 + b * x9 + c * a**-1.5
        x4 = a * x7 + b * a**-0.5
        x3 = a * y2 + b * y3 + c * y4 + d * y5 + e * a**-2.5
        x2 = a * x6 + b * x8 + c * x9 + d * a**-1.5
        x1 = a * x5 + b * x7 + c * a**-0.5
        x0 = a * x4 + b * a**0.5
        h = [
            [a**2.5, x0, x1, x2, x3, y1],
            [0, a**1.5, x4, x5, x6, y2],
            [0, 0, a**0.5, x7, x8, y3],
            [0, 0, 0, a**-0.5, x9, y4],
            [0, 0, 0, 0, a**-1.5, y5],
            [0, 0, 0, 0, 0, a**-2.5],
        ]
    return SimilarityH(n, np.array(h, dtype=complex), free)


def krylov_H(m, last_column) -> np.ndarray:
    """H = [m^(n-1) v, ..., m v, v], the general solution of m H = H J."""
    m = np.asarray(m, dtype=complex)
    cols = [np.asarray(last_column, dtype=complex)]
    for _ in range(m.shape[0] - 1):
        cols.append(m @ cols[-1])
    return np.column_stack(cols[::-1])


def verify_jordan(h: SimilarityH, m) -> tuple[float, float]:
    """(max |H^-1 M H - J|, ||H^-1 M H||)."""
    hm = h.H
    conj = solve_triangular(hm, np.asarray(m, dtype=complex) @ hm)
    residual = float(np.max(np.abs(conj - shift_matrix(h.n))))
    return residual, spectral_norm(conj)


def upper_bound_search(m, init_free, n: int) -> tuple[SimilarityH, float]:
    """Nelder-Mead over the free entries of H minimizing cond(H)."""
    m = np.asarray(m, dtype=complex)
    entries = m[0, 1:].real
    init = build_H(n, entries, init_free)
    start = cond2(init.H)
    if not init.free_params:
        return init, start

    def objective(x):
        h = build_H(n, entries, x)
        if verify_jordan(h, m)[0] > JORDAN_GUARD:
            return np.inf
        return cond2(h.H)

    x0 = np.array(init.free_params)
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": _simplex(x0),
            "maxiter": MAX_ITER,
            "xatol": 1e-12,
            "fatol": 1e-15,
        },
    )
    found = build_H(n, entries, res.x)
    value = cond2(found.H)
    if not value < start:
        return init, start
    return found, value


@dataclass
class BoundReport:
    n: int
    lower: float
    lower_roots: tuple
    upper: float
    free_params: tuple
    jordan_residual: float
    contraction_norm: float
    bracket_valid: bool
    published_lower: float = float("nan")
    published_upper: float = float("nan")
    roots_conjugate_symmetric: bool = True
    variants: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "lower": self.lower,
            "lower_roots": [[r.real, r.imag] for r in self.lower_roots],
            "upper": self.upper,
            "free_params": list(self.free_params),
            "jordan_residual": self.jordan_residual,
            "contraction_norm": self.contraction_norm,
            "bracket_valid": self.bracket_valid,
            "published_lower": self.published_lower,
            "published_upper": self.published_upper,
            "roots_conjugate_symmetric": self.roots_conjugate_symmetric,
            "variants": self.variants,
        }


def bracket(n: int, m, search: bool = True) -> BoundReport:
    """Lower and upper bound for psi_D(m), starting from the published data."""
    if n not in PUBLISHED_ROOTS:
        raise ValueError(f"n must be in 3..6, got {n}")
    m = np.asarray(m, dtype=complex)
    init = BlaschkeProduct(PUBLISHED_ROOTS[n])
    if search:
        blaschke, lower = lower_bound_search(m, init)
        h, upper = upper_bound_search(m, PUBLISHED_FREE[n], n)
    else:
        blaschke, lower = init, spectral_norm(blaschke_apply(m, init))
        h = build_H(n, m[0, 1:].real, PUBLISHED_FREE[n])
        upper = cond2(h.H)
    residual, contraction = verify_jordan(h, m)
    variants = {"published_roots": spectral_norm(blaschke_apply(m, init))}
    if n == 6:
        printed = BlaschkeProduct(PUBLISHED_ROOTS_6_PRINTED)
        variants["published_roots_six_values"] = spectral_norm(blaschke_apply(m, printed))
    valid = contraction <= 1 + CONTRACTION_TOL and lower <= upper + CONTRACTION_TOL
    return BoundReport(
        n,
        lower,
        blaschke.roots,
        upper,
        h.free_params,
        residual,
        contraction,
        bool(valid),
        PUBLISHED_BRACKETS[n][0],
        PUBLISHED_BRACKETS[n][1],
        blaschke.is_conjugate_symmetric(),
        variants,
    )
