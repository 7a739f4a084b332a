"""Tridiagonal solvers for the Crank-Nicolson linear systems.

thomas() is the textbook forward-elimination / back-substitution recurrence,
kept as the plain-Python reference. solve() routes to scipy's banded LAPACK
driver, which runs the same elimination in compiled code; the two are
cross-checked in the test suite. The Cayley matrices solved here are
strictly diagonally dominant (unit real part on the diagonal, purely
imaginary off-diagonal), so elimination without pivoting is stable.
"""

import numpy as np
import scipy.linalg

from .errors import NumericalFailureError


def thomas(lower: np.ndarray, diag: np.ndarray, upper: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve the tridiagonal system with sub/main/super diagonals lower/diag/upper.

    lower[0] and upper[-1] are ignored. Raises NumericalFailureError on a
    zero pivot.
    """
    n = len(diag)
    c = np.empty(n, dtype=np.complex128)   # modified superdiagonal
    d = np.empty(n, dtype=np.complex128)   # modified rhs
    if diag[0] == 0:
        raise NumericalFailureError("zero pivot at row 0")
    c[0] = upper[0] / diag[0]
    d[0] = rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - lower[i] * c[i - 1]
        if denom == 0:
            raise NumericalFailureError(f"zero pivot at row {i}")
        if i < n - 1:
            c[i] = upper[i] / denom
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom
    u = np.empty(n, dtype=np.complex128)
    u[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        u[i] = d[i] - c[i] * u[i + 1]
    return u


def solve(lower: np.ndarray, diag: np.ndarray, upper: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Fast path: same system as thomas(), via scipy.linalg.solve_banded."""
    n = len(diag)
    ab = np.zeros((3, n), dtype=np.complex128)
    ab[0, 1:] = upper[:-1]
    ab[1, :] = diag
    ab[2, :-1] = lower[1:]
    try:
        return scipy.linalg.solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - dominant systems
        raise NumericalFailureError(f"banded solve failed: {exc}") from exc
