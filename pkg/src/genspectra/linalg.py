"""Dense real matrices and vectors, plus the shared matrix predicates.

numpy arrays are used as storage and for elementwise arithmetic only.
Everything with cubic cost (products, determinants, inverses) is written
out explicitly, either here or in :mod:`genspectra.kernels`.

Conventions used throughout the package:

* matrices are immutable once constructed and always hold finite floats;
* ``SymMatrix`` symmetrizes its input to ``(M + M') / 2`` after checking
  that the asymmetry is within tolerance, so downstream code can rely on
  exact symmetry;
* data matrices place one sample per column.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    NonFiniteEntry,
    NotSymmetric,
    SingularMatrix,
)

# Relative asymmetry accepted by SymMatrix: max |M - M'| over
# sym_tol * max(1, max |entry|).
SYM_TOL = 1e-9

# |det| <= SINGULAR_TOL * max|entry| means "numerically singular".
SINGULAR_TOL = 1e-12


def _as_2d(entries) -> np.ndarray:
    try:
        arr = np.array(entries, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise DimensionMismatch(f"not a rectangular numeric array: {exc}") from exc
    if arr.ndim != 2:
        raise DimensionMismatch(f"matrix needs 2 dimensions, got {arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch("matrix needs at least one row and one column")
    if not np.isfinite(arr).all():
        raise NonFiniteEntry("matrix entries must be finite")
    return arr


class Matrix:
    """Immutable rows x cols matrix of finite floats."""

    __slots__ = ("_data",)

    def __init__(self, entries):
        arr = _as_2d(entries)
        arr.setflags(write=False)
        self._data = arr

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the underlying storage."""
        return self._data

    @property
    def T(self) -> "Matrix":
        return transpose(self)

    def col(self, j: int) -> "Vector":
        return Vector(self._data[:, j])

    def __getitem__(self, idx) -> float:
        return float(self._data[idx])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    def __repr__(self):
        return f"{type(self).__name__}({self._data.tolist()!r})"


class SymMatrix(Matrix):
    """Square symmetric matrix; stores the symmetrized part of its input.

    Construction fails with ``NotSymmetric`` when the asymmetry exceeds
    ``sym_tol * max(1, max|entry|)``.
    """

    __slots__ = ()

    def __init__(self, entries, sym_tol: float = SYM_TOL):
        arr = _as_2d(entries)
        if arr.shape[0] != arr.shape[1]:
            raise NotSymmetric(f"symmetric matrix must be square, got {arr.shape}")
        scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
        asym = float(np.max(np.abs(arr - arr.T)))
        if asym > sym_tol * scale:
            raise NotSymmetric(
                f"asymmetry {asym:.3e} exceeds tolerance {sym_tol * scale:.3e}"
            )
        sym = (arr + arr.T) / 2.0
        sym.setflags(write=False)
        self._data = sym

    @property
    def dim(self) -> int:
        return self._data.shape[0]


class Vector:
    """Immutable vector of finite floats."""

    __slots__ = ("_data",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.float64)
        if arr.ndim != 1:
            raise DimensionMismatch(f"vector needs 1 dimension, got {arr.ndim}")
        if arr.shape[0] < 1:
            raise DimensionMismatch("vector needs at least one entry")
        if not np.isfinite(arr).all():
            raise NonFiniteEntry("vector entries must be finite")
        arr.setflags(write=False)
        self._data = arr

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._data

    def norm(self) -> float:
        return math.sqrt(float(np.dot(self._data, self._data)))

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, i: int) -> float:
        return float(self._data[i])

    def __repr__(self):
        return f"Vector({self._data.tolist()!r})"


# ---------------------------------------------------------------------------
# operations


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product through the active kernel backend."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return Matrix(kernels.matmul(a.array, b.array))


def matvec(a: Matrix, v: Vector) -> Vector:
    """Matrix-vector product ``A v``."""
    if a.cols != v.dim:
        raise DimensionMismatch(f"cannot apply {a.shape} to vector of dim {v.dim}")
    return Vector(kernels.matmul(a.array, v.array.reshape(-1, 1)).ravel())


def transpose(a: Matrix) -> Matrix:
    return Matrix(a.array.T)


def trace(a: Matrix) -> float:
    if a.rows != a.cols:
        raise DimensionMismatch(f"trace needs a square matrix, got {a.shape}")
    return float(np.sum(np.diag(a.array)))


def frobenius_norm_sq(a: Matrix) -> float:
    return float(np.sum(a.array * a.array))


def frobenius_norm(a: Matrix) -> float:
    return math.sqrt(frobenius_norm_sq(a))


def dot(u: Vector, v: Vector) -> float:
    if u.dim != v.dim:
        raise DimensionMismatch(f"dot of dims {u.dim} and {v.dim}")
    return float(np.dot(u.array, v.array))


def determinant(a: Matrix) -> float:
    """Determinant via cofactor expansion (d <= 4) or pivoted LU."""
    if a.rows != a.cols:
        raise DimensionMismatch(f"determinant needs a square matrix, got {a.shape}")
    m = a.array.tolist()
    if a.rows <= 4:
        return _cofactor_det(m)
    return _lu_det(m)


def inverse(a: Matrix, singular_tol: float | None = None) -> Matrix:
    """Inverse by Gauss-Jordan elimination with partial pivoting.

    Raises ``SingularMatrix`` when ``|det|`` is at or below
    ``singular_tol`` (default ``SINGULAR_TOL * max|entry|``). A symmetric
    input yields a ``SymMatrix`` result.
    """
    if a.rows != a.cols:
        raise DimensionMismatch(f"inverse needs a square matrix, got {a.shape}")
    if singular_tol is None:
        singular_tol = SINGULAR_TOL * float(np.max(np.abs(a.array)))
    det = determinant(a)
    if abs(det) <= singular_tol:
        raise SingularMatrix(
            f"|det| = {abs(det):.3e} is within tolerance {singular_tol:.3e} of zero"
        )
    inv = _gauss_jordan(a.array.tolist())
    if inv is None:
        raise SingularMatrix("elimination hit an exactly zero pivot")
    arr = np.array(inv, dtype=np.float64)
    if isinstance(a, SymMatrix):
        return SymMatrix((arr + arr.T) / 2.0)
    return Matrix(arr)


def identity(n: int) -> SymMatrix:
    if n < 1:
        raise DimensionMismatch("identity needs n >= 1")
    return SymMatrix(np.eye(n))


def centering_matrix(n: int) -> SymMatrix:
    """The projector ``I - (1/n) 11'`` that removes the mean."""
    if n < 1:
        raise DimensionMismatch("centering matrix needs n >= 1")
    return SymMatrix(np.eye(n) - 1.0 / n)


def is_psd(a: SymMatrix, tol: float = 1e-9) -> bool:
    """True when the smallest eigenvalue is at least ``-tol``."""
    from .eigen import eig_sym  # deferred to avoid an import cycle

    dec = eig_sym(a)
    return min(dec.eigenvalues) >= -tol


# ---------------------------------------------------------------------------
# list-level helpers


def _cofactor_det(m: list) -> float:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    det = 0.0
    sign = 1.0
    for j in range(n):
        if m[0][j] != 0.0:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            det += sign * m[0][j] * _cofactor_det(minor)
        sign = -sign
    return det


def _lu_det(m: list) -> float:
    """Determinant from LU with partial pivoting; mutates its copy."""
    n = len(m)
    m = [row[:] for row in m]
    det = 1.0
    for k in range(n):
        piv = max(range(k, n), key=lambda r: abs(m[r][k]))
        if m[piv][k] == 0.0:
            return 0.0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        pivot = m[k][k]
        det *= pivot
        for r in range(k + 1, n):
            f = m[r][k] / pivot
            if f != 0.0:
                row_r = m[r]
                row_k = m[k]
                for c in range(k + 1, n):
                    row_r[c] -= f * row_k[c]
                row_r[k] = 0.0
    return det


def _gauss_jordan(m: list):
    """Invert via row reduction of [M | I]; None on an exact zero pivot."""
    n = len(m)
    aug = [m[i][:] + [1.0 if j == i else 0.0 for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(aug[r][c]))
        if aug[piv][c] == 0.0:
            return None
        if piv != c:
            aug[c], aug[piv] = aug[piv], aug[c]
        inv_p = 1.0 / aug[c][c]
        row_c = aug[c]
        for j in range(2 * n):
            row_c[j] *= inv_p
        for r in range(n):
            if r != c and aug[r][c] != 0.0:
                f = aug[r][c]
                row_r = aug[r]
                for j in range(2 * n):
                    row_r[j] -= f * row_c[j]
    return [row[n:] for row in aug]
