"""Band-stored matrices and a direct banded LU solver.

Storage follows the LAPACK ``gb`` convention: entry ``A[i, j]`` of an
``n x n`` matrix with ``kl`` sub- and ``ku`` super-diagonals lives at
``data[ku + i - j, j]``.  Factorisation works on a copy padded with ``kl``
extra super-diagonals to absorb pivoting fill, so a factor-solve pair costs
O(n * kl * (kl + ku)) regardless of n.

The elimination kernels are compiled with numba; the interleaved
Kuramoto-Sivashinsky systems are re-factored every time step, so this loop
is the hot path of the whole solver.
"""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = [
    "BandedMatrix",
    "BandedFactorization",
    "SingularMatrixError",
    "lu_factor",
    "solve",
    "dense_solve_oracle",
]


class SingularMatrixError(ValueError):
    """Raised when elimination meets a pivot below the tolerance."""

    def __init__(self, row: int, message: str | None = None):
        self.row = row
        super().__init__(message or f"singular matrix: zero pivot at row {row}")


class BandedMatrix:
    """Square matrix stored by diagonals.

    Reads outside the band return exactly 0; writes outside the band raise.
    """

    def __init__(self, n: int, kl: int, ku: int, data: np.ndarray | None = None):
        if n < 1 or kl < 0 or ku < 0:
            raise ValueError("invalid banded matrix shape")
        self.n = n
        self.kl = kl
        self.ku = ku
        if data is None:
            data = np.zeros((kl + ku + 1, n))
        else:
            data = np.asarray(data, dtype=float)
            if data.shape != (kl + ku + 1, n):
                raise ValueError(
                    f"band data shape {data.shape} != {(kl + ku + 1, n)}"
                )
        self.data = data

    @classmethod
    def from_dense(cls, dense: np.ndarray, kl: int, ku: int) -> "BandedMatrix":
        dense = np.asarray(dense, dtype=float)
        n = dense.shape[0]
        if dense.shape != (n, n):
            raise ValueError("dense matrix must be square")
        out = cls(n, kl, ku)
        for i in range(n):
            lo = max(0, i - kl)
            hi = min(n, i + ku + 1)
            for j in range(lo, hi):
                out.data[ku + i - j, j] = dense[i, j]
            # verify nothing was dropped
            if np.any(dense[i, : lo]) or np.any(dense[i, hi:]):
                raise ValueError(f"row {i} has entries outside the ({kl},{ku}) band")
        return out

    def _inside(self, i: int, j: int) -> bool:
        return 0 <= i < self.n and 0 <= j < self.n and -self.kl <= j - i <= self.ku

    def __getitem__(self, idx):
        i, j = idx
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"index {(i, j)} out of range")
        if not -self.kl <= j - i <= self.ku:
            return 0.0
        return float(self.data[self.ku + i - j, j])

    def __setitem__(self, idx, value):
        i, j = idx
        if not self._inside(i, j):
            raise IndexError(f"write outside the band at {(i, j)}")
        self.data[self.ku + i - j, j] = value

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for off in range(-self.kl, self.ku + 1):
            lo = max(0, -off)
            hi = self.n - max(0, off)
            idx = np.arange(lo, hi)
            out[idx, idx + off] = self.data[self.ku - off, idx + off]
        return out

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"vector length {x.shape} != {self.n}")
        y = np.zeros(self.n)
        for off in range(-self.kl, self.ku + 1):
            lo = max(0, -off)
            hi = self.n - max(0, off)
            y[lo:hi] += self.data[self.ku - off, lo + off : hi + off] * x[lo + off : hi + off]
        return y

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    def copy(self) -> "BandedMatrix":
        return BandedMatrix(self.n, self.kl, self.ku, self.data.copy())


@njit(cache=True)
def _gbtrf(ab, n, kl, ku, pivot, tol):
    """In-place banded LU; ab has 2*kl+ku+1 rows with the diagonal at kl+ku.

    Returns (ipiv, info): info is the row of a failing pivot, or -1.
    """
    d = kl + ku
    ipiv = np.empty(n, dtype=np.int64)
    for k in range(n):
        lk = min(kl, n - 1 - k)
        p = 0
        if pivot:
            amax = abs(ab[d, k])
            for i in range(1, lk + 1):
                v = abs(ab[d + i, k])
                if v > amax:
                    amax = v
                    p = i
        ipiv[k] = k + p
        if p != 0:
            jmax = min(k + ku + kl, n - 1)
            for j in range(k, jmax + 1):
                tmp = ab[d + k - j, j]
                ab[d + k - j, j] = ab[d + k + p - j, j]
                ab[d + k + p - j, j] = tmp
        piv = ab[d, k]
        if abs(piv) < tol:
            return ipiv, k
        if lk > 0:
            for i in range(1, lk + 1):
                ab[d + i, k] /= piv
            jmax = min(k + ku + kl, n - 1)
            for j in range(k + 1, jmax + 1):
                ukj = ab[d + k - j, j]
                if ukj != 0.0:
                    for i in range(1, lk + 1):
                        ab[d + k + i - j, j] -= ab[d + i, k] * ukj
    return ipiv, -1


@njit(cache=True)
def _gbtrs(ab, n, kl, ku, ipiv, b):
    """Solve using the output of _gbtrf; b is overwritten with the solution."""
    d = kl + ku
    for k in range(n):
        p = ipiv[k]
        if p != k:
            tmp = b[k]
            b[k] = b[p]
            b[p] = tmp
        lk = min(kl, n - 1 - k)
        for i in range(1, lk + 1):
            b[k + i] -= ab[d + i, k] * b[k]
    for k in range(n - 1, -1, -1):
        jmax = min(k + ku + kl, n - 1)
        s = b[k]
        for j in range(k + 1, jmax + 1):
            s -= ab[d + k - j, j] * b[j]
        b[k] = s / ab[d, k]


class BandedFactorization:
    """PA = LU factors of a banded matrix; immutable once created."""

    def __init__(self, n, kl, ku, ab, ipiv, pivoting):
        self.n = n
        self.kl = kl
        self.ku = ku
        self.ab = ab
        self.ipiv = ipiv
        self.pivoting = pivoting

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape != (self.n,):
            raise ValueError(f"rhs length {rhs.shape} != {self.n}")
        x = rhs.copy()
        _gbtrs(self.ab, self.n, self.kl, self.ku, self.ipiv, x)
        return x

    def factors_dense(self):
        """Dense (perm, L, U) with A[perm] = L @ U; for small-matrix tests."""
        n, kl, ku = self.n, self.kl, self.ku
        d = kl + ku
        L = np.eye(n)
        U = np.zeros((n, n))
        for k in range(n):
            for i in range(k + 1, min(k + kl, n - 1) + 1):
                L[i, k] = self.ab[d + i - k, k]
            for j in range(k, min(k + ku + kl, n - 1) + 1):
                U[k, j] = self.ab[d + k - j, j]
        perm = np.arange(n)
        for k in range(n):
            p = self.ipiv[k]
            if p != k:
                perm[[k, p]] = perm[[p, k]]
        return perm, L, U


def lu_factor(m: BandedMatrix, pivoting: str = "partial", pivot_tol: float = 1e-13) -> BandedFactorization:
    """Factor a banded matrix.

    Parameters
    ----------
    m : BandedMatrix
    pivoting : {"partial", "none"}
        Row pivoting strategy.  "none" mirrors the classic Thomas-style
        sweep and fails as soon as a pivot drops below the tolerance.
    pivot_tol : float
        A pivot counts as singular when its magnitude is below
        ``pivot_tol * max|entry|``.

    Raises
    ------
    SingularMatrixError
        Reporting the row index of the failing pivot.
    """
    if pivoting not in ("partial", "none"):
        raise ValueError(f"unknown pivoting mode {pivoting!r}")
    amax = m.max_abs()
    if amax == 0.0:
        raise SingularMatrixError(0, "singular matrix: all entries zero")
    ab = np.zeros((2 * m.kl + m.ku + 1, m.n))
    ab[m.kl :, :] = m.data
    ipiv, info = _gbtrf(ab, m.n, m.kl, m.ku, pivoting == "partial", pivot_tol * amax)
    if info >= 0:
        raise SingularMatrixError(int(info))
    return BandedFactorization(m.n, m.kl, m.ku, ab, ipiv, pivoting)


def solve(f: BandedFactorization, rhs: np.ndarray) -> np.ndarray:
    """Solve ``A x = rhs`` given a factorization of ``A``."""
    return f.solve(rhs)


def dense_solve_oracle(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Reference Gaussian elimination with partial pivoting (tests only).

    Kept independent of the banded path so the two can check each other.
    """
    A = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,):
        raise ValueError("incompatible shapes")
    scale = np.max(np.abs(A))
    if scale == 0.0:
        raise SingularMatrixError(0, "singular matrix: all entries zero")
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) < 1e-13 * scale:
            raise SingularMatrixError(k)
        if p != k:
            A[[k, p]] = A[[p, k]]
            b[[k, p]] = b[[p, k]]
        mult = A[k + 1 :, k] / A[k, k]
        A[k + 1 :, k:] -= np.outer(mult, A[k, k:])
        b[k + 1 :] -= mult * b[k]
    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - A[k, k + 1 :] @ x[k + 1 :]) / A[k, k]
    return x
