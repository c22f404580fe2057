"""Toeplitz windows of a coefficient sequence and the dense linear algebra
used on them: pivoted-LU log-determinants, condition estimates and the
normalized denominator solve.

Index conventions (a_l = 0 for l < 0 throughout):

* ``C`` is (m+1) x (n+1) with C[i][j] = a_{i-j}         (numerator product)
* ``T`` is  n    x (n+1) with T[i][j] = a_{m+1+i-j}     (order conditions)
* ``A`` is  n    x  n    with A[i][j] = a_{m+i-j}, i.e. columns 2..n+1 of T

The denominator solve fixes q_0 = 1 and solves
A (q_1..q_n)^T = -(a_{m+1}, ..., a_{m+n})^T, which is exactly T q = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import lapack

from .errors import DegenerateSystem, InsufficientCoefficients

COND_CAP_DOUBLE = 1e12
COND_CAP_EXTENDED = 1e28


@dataclass(frozen=True)
class ToeplitzTriple:
    m: int
    n: int
    C: np.ndarray
    T: np.ndarray
    A: np.ndarray


@dataclass(frozen=True)
class DetResult:
    """log|det| with sign/phase, singularity flag and 1-norm condition.

    ``log_abs`` is -inf exactly when ``singular``; ``sign_or_phase`` is a
    unit scalar (+-1 for real input) and 0 when singular.
    """

    log_abs: float
    sign_or_phase: complex
    singular: bool
    condition_estimate: float


def _as_coeff_array(coeffs) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(coeffs))
    if arr.dtype.kind not in "fc":
        arr = arr.astype(float)
    return arr


def _window(arr: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """arr[idx] with negative indices reading as zero."""
    out = np.zeros(idx.shape, dtype=arr.dtype)
    mask = idx >= 0
    out[mask] = arr[idx[mask]]
    return out


def assoc_matrix(coeffs, m: int, k: int) -> np.ndarray:
    """The k x k window matrix with entries a_{m+i-j}; needs len >= m+k."""
    arr = _as_coeff_array(coeffs)
    if k == 0:
        return np.zeros((0, 0), dtype=arr.dtype)
    if len(arr) < m + k:
        raise InsufficientCoefficients(
            f"need at least {m + k} coefficients for the {k}x{k} window at m={m}, got {len(arr)}"
        )
    i = np.arange(k)[:, None]
    j = np.arange(k)[None, :]
    return _window(arr, m + i - j)


def build_triple(coeffs, m: int, n: int) -> ToeplitzTriple:
    """Build the C, T, A windows for the [m, n] problem."""
    arr = _as_coeff_array(coeffs)
    if m < 0 or n < 0:
        raise ValueError("m and n must be >= 0")
    if len(arr) < m + n + 1:
        raise InsufficientCoefficients(
            f"need at least m+n+1 = {m + n + 1} coefficients, got {len(arr)}"
        )
    i_c = np.arange(m + 1)[:, None]
    j_c = np.arange(n + 1)[None, :]
    C = _window(arr, i_c - j_c)
    i_t = np.arange(n)[:, None]
    T = _window(arr, m + 1 + i_t - j_c)
    A = T[:, 1:].copy() if n > 0 else np.zeros((0, 0), dtype=arr.dtype)
    return ToeplitzTriple(m=m, n=n, C=C, T=T, A=A)


def _getrf(M: np.ndarray):
    if M.dtype.kind == "c":
        return lapack.zgetrf(M)
    return lapack.dgetrf(M)


def _gecon(lu: np.ndarray, anorm: float):
    if lu.dtype.kind == "c":
        rcond, _ = lapack.zgecon(lu, anorm, norm="1")
    else:
        rcond, _ = lapack.dgecon(lu, anorm, norm="1")
    return rcond


def _getrs(lu: np.ndarray, piv: np.ndarray, b: np.ndarray):
    if lu.dtype.kind == "c":
        x, _ = lapack.zgetrs(lu, piv, b)
    else:
        x, _ = lapack.dgetrs(lu, piv, b)
    return x


def log_abs_det(M) -> DetResult:
    """Partial-pivot LU determinant in log form, with a 1-norm condition
    estimate from the same factorization.  det of the 0x0 matrix is 1."""
    M = np.atleast_2d(np.asarray(M))
    if M.dtype.kind not in "fc":
        M = M.astype(float)
    r, c = M.shape
    if r != c:
        raise ValueError("log_abs_det needs a square matrix")
    if r == 0:
        return DetResult(log_abs=0.0, sign_or_phase=1.0, singular=False, condition_estimate=1.0)
    anorm = float(np.abs(M).sum(axis=0).max())
    lu, piv, info = _getrf(M)
    diag = np.diagonal(lu)
    singular = bool(info > 0) or bool(np.any(diag == 0))
    if singular:
        return DetResult(
            log_abs=-math.inf, sign_or_phase=0.0, singular=True, condition_estimate=math.inf
        )
    log_abs = float(np.sum(np.log(np.abs(diag))))
    swaps = int(np.sum(piv != np.arange(r)))
    phase = complex(np.prod(diag / np.abs(diag))) * (-1.0) ** swaps
    if M.dtype.kind != "c":
        phase = float(np.real(phase))
    rcond = _gecon(lu, anorm)
    cond = float(1.0 / rcond) if rcond > 0 else math.inf
    return DetResult(log_abs=log_abs, sign_or_phase=phase, singular=singular, condition_estimate=cond)


def _solve_normalized(A: np.ndarray, rhs: np.ndarray, cond_cap: float):
    """Solve A x = rhs under the degeneracy cap; returns (x, logdet, cond)."""
    nn = A.shape[0]
    if nn == 0:
        return rhs[:0], 0.0, 1.0
    anorm = float(np.abs(A).sum(axis=0).max())
    lu, piv, info = _getrf(A)
    diag = np.diagonal(lu)
    if info > 0 or np.any(diag == 0):
        raise DegenerateSystem("denominator window matrix is singular")
    rcond = _gecon(lu, anorm)
    cond = float(1.0 / rcond) if rcond > 0 else math.inf
    if cond > cond_cap:
        raise DegenerateSystem(
            f"denominator window matrix condition {cond:.3e} exceeds cap {cond_cap:.1e}"
        )
    x = _getrs(lu, piv, rhs)
    logdet = float(np.sum(np.log(np.abs(diag))))
    return x, logdet, cond


def _solve_normalized_extended(A: np.ndarray, rhs: np.ndarray, cond_cap: float, dps: int = 30):
    """mpmath route: LU solve at >= 30 significant digits, exact 1-norm
    condition via the inverse (sizes here are small), rounded back to double."""
    import mpmath as mp

    nn = A.shape[0]
    if nn == 0:
        return rhs[:0], 0.0, 1.0
    complex_field = A.dtype.kind == "c"
    with mp.workdps(dps):
        Am = mp.matrix([[mp.mpc(complex(v)) if complex_field else mp.mpf(float(v)) for v in row] for row in A])
        bm = mp.matrix([mp.mpc(complex(v)) if complex_field else mp.mpf(float(v)) for v in rhs])
        try:
            x = mp.lu_solve(Am, bm)
            Ainv = Am ** -1
        except ZeroDivisionError as exc:
            raise DegenerateSystem("denominator window matrix is singular") from exc
        det = mp.det(Am)
        if det == 0:
            raise DegenerateSystem("denominator window matrix is singular")
        norm1 = max(sum(abs(Am[i, j]) for i in range(nn)) for j in range(nn))
        inv1 = max(sum(abs(Ainv[i, j]) for i in range(nn)) for j in range(nn))
        cond = float(norm1 * inv1)
        if cond > cond_cap:
            raise DegenerateSystem(
                f"denominator window matrix condition {cond:.3e} exceeds cap {cond_cap:.1e}"
            )
        logdet = float(mp.log(abs(det)))
        if complex_field:
            out = np.array([complex(v) for v in x], dtype=complex)
        else:
            out = np.array([float(v) for v in x], dtype=float)
    return out, logdet, cond


def solve_denominator(
    triple: ToeplitzTriple,
    cond_cap: Optional[float] = None,
    precision: str = "double",
) -> np.ndarray:
    """Denominator coefficients q (length n+1, q_0 = 1) solving T q = 0.

    Raises DegenerateSystem when A is singular or its condition estimate
    exceeds the cap (1e12 double, 1e28 extended).
    """
    if cond_cap is None:
        cond_cap = COND_CAP_EXTENDED if precision == "extended" else COND_CAP_DOUBLE
    n = triple.n
    dtype = triple.A.dtype if n > 0 else triple.T.dtype
    q = np.zeros(n + 1, dtype=dtype)
    q[0] = 1.0
    if n == 0:
        return q
    rhs = -triple.T[:, 0]
    if precision == "extended":
        tail, _, _ = _solve_normalized_extended(triple.A, rhs, cond_cap)
    elif precision == "double":
        tail, _, _ = _solve_normalized(triple.A, rhs, cond_cap)
    else:
        raise ValueError("precision must be 'double' or 'extended'")
    q[1:] = tail
    return q
