"""Small dense linear algebra helpers.

Complex matrices are plain ``numpy`` arrays; the helpers here add the
validation and error reporting the rest of the package relies on.
"""

from dataclasses import dataclass
import logging
import warnings

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

log = logging.getLogger(__name__)

PIVOT_FLOOR = 1e-300
COND_REPORT = 1e12
HERMITIAN_TOL = 1e-13


class SingularSystem(ArithmeticError):
    pass


class SingularMatrix(ArithmeticError):
    pass


class NotHermitian(ValueError):
    pass


def cmatrix(entries) -> np.ndarray:
    """Validate and copy ``entries`` into a finite 2-D complex array."""
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


@dataclass
class RSystem:
    """Real symmetric linear system ``matrix @ x = rhs``."""

    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        n = self.matrix.shape[0]
        if self.matrix.shape != (n, n) or self.rhs.shape != (n,) or n < 1:
            raise ValueError("RSystem needs an n x n matrix and a length-n rhs")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass
class Factorization:
    lu: np.ndarray
    piv: np.ndarray
    cond_estimate: float


def factor(matrix) -> Factorization:
    """LU with partial pivoting plus a 1-norm condition estimate."""
    a = np.asarray(matrix, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=True)
    if np.min(np.abs(np.diag(lu))) < PIVOT_FLOOR:
        raise SingularSystem("pivot magnitude below 1e-300")
    rcond, info = lapack.dgecon(lu, np.linalg.norm(a, 1), norm="1")
    cond = np.inf if rcond == 0 else 1.0 / rcond
    return Factorization(lu, piv, float(cond))


def solve_sym(sys: RSystem, fac: Factorization | None = None) -> np.ndarray:
    """Solve the symmetric system by Gaussian elimination with partial pivoting."""
    fac = fac or factor(sys.matrix)
    if fac.cond_estimate > COND_REPORT:
        log.warning("system is badly conditioned: cond ~ %.3g", fac.cond_estimate)
    return sla.lu_solve((fac.lu, fac.piv), sys.rhs)


def spectral_norm(m) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(cmatrix(m), 2))


def inverse(m) -> np.ndarray:
    m = cmatrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("inverse of a non-square matrix")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        try:
            lu, piv = sla.lu_factor(m)
        except ValueError as exc:
            raise SingularMatrix(str(exc)) from exc
    if np.min(np.abs(np.diag(lu))) < PIVOT_FLOOR:
        raise SingularMatrix("pivot magnitude below 1e-300")
    return sla.lu_solve((lu, piv), np.eye(m.shape[0], dtype=complex))


def cond2(m) -> float:
    """Spectral condition number ``||m|| * ||m^-1||``."""
    return spectral_norm(m) * spectral_norm(inverse(m))


def hermitian_eigs(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in ascending order."""
    m = cmatrix(m)
    if m.shape[0] != m.shape[1] or np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise NotHermitian("matrix is not Hermitian within 1e-13")
    return np.linalg.eigvalsh(m)


def shift_matrix(n: int) -> np.ndarray:
    """Nilpotent Jordan block with ones on the superdiagonal."""
    return np.eye(n, k=1, dtype=complex)
