"""Rayleigh-quotient optimization forms.

Every form here is a quadratic objective under a quadratic constraint, and
every one of them is solved exactly by an eigendecomposition:

* form 1: extremize u'Au subject to u'Bu = 1 (one direction);
* form 2: extremize tr(Phi'APhi) subject to Phi'BPhi = I (p directions);
* forms 3/4: minimize the reconstruction error ||X - Phi Phi' X||_F^2,
  which is form 2 on A = XX'.

``check_stationarity`` verifies the shared first-order condition
(A - lambda B) u = 0 with lambda the Rayleigh quotient at u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DegenerateDenominator,
    DimensionMismatch,
    NonOrthonormalBasis,
    ZeroVector,
)
from .eigen import eig_sym
from .linalg import Matrix, SymMatrix, Vector
from .pencil import Pencil, solve_rigorous

_DIRECTIONS = ("maximize", "minimize")

# Orthonormality slack accepted by reconstruction_objective.
ORTHO_TOL = 1e-8


@dataclass(frozen=True)
class QuadraticForm:
    """The objective u'Au (or tr(Phi'APhi)) with optional metric B.

    ``b`` is the identity when absent. ``subspace_dim`` is the number of
    directions the form ranges over; form-1 solvers require 1.
    """

    a: SymMatrix
    b: SymMatrix | None = None
    direction: str = "maximize"
    subspace_dim: int = 1

    def __post_init__(self):
        if self.direction not in _DIRECTIONS:
            raise ValueError(f"direction must be one of {_DIRECTIONS}, got {self.direction!r}")
        if self.b is not None and self.b.dim != self.a.dim:
            raise DimensionMismatch(
                f"form matrices must share a dimension, got {self.a.dim} and {self.b.dim}"
            )
        if not 1 <= self.subspace_dim <= self.a.dim:
            raise DimensionMismatch(
                f"subspace_dim must lie in [1, {self.a.dim}], got {self.subspace_dim}"
            )


@dataclass(frozen=True)
class StationarityReport:
    """First-order-condition audit at a point u.

    ``multiplier`` is the Rayleigh quotient, ``residual`` the 2-norm of
    (A - multiplier*B) u, and ``constraint_violation`` is |u'Bu - 1|.
    """

    residual: float
    multiplier: float
    constraint_violation: float


def rayleigh_quotient(u: Vector, a: SymMatrix, b: SymMatrix | None = None) -> float:
    """The fraction u'Au / u'Bu, with B = I when absent.

    Scale-invariant in u. Raises ``ZeroVector`` for u = 0 and
    ``DegenerateDenominator`` when |u'Bu| < 1e-14 * ||u||^2.
    """
    if u.dim != a.dim:
        raise DimensionMismatch(f"vector dim {u.dim} does not match matrix dim {a.dim}")
    if b is not None and b.dim != a.dim:
        raise DimensionMismatch(f"metric dim {b.dim} does not match matrix dim {a.dim}")
    uu = float(np.dot(u.array, u.array))
    if uu == 0.0:
        raise ZeroVector("the Rayleigh quotient is undefined at u = 0")
    num = _quad(a, u)
    den = uu if b is None else _quad(b, u)
    if abs(den) < 1e-14 * uu:
        raise DegenerateDenominator(
            f"u'Bu = {den:.3e} is degenerate next to ||u||^2 = {uu:.3e}"
        )
    return num / den


def solve_form1(q: QuadraticForm) -> tuple[Vector, float]:
    """One extremal direction of u'Au subject to u'Bu = 1.

    Maximizing returns the eigenpair with the largest eigenvalue of the
    (generalized) problem, minimizing the smallest.
    """
    if q.subspace_dim != 1:
        raise DimensionMismatch(f"form 1 needs subspace_dim = 1, got {q.subspace_dim}")
    phi, lams = _extremal_pairs(q.a, q.b, 1, q.direction)
    return phi.col(0), lams[0]


def solve_form2(q: QuadraticForm, p: int) -> tuple[Matrix, list[float]]:
    """A p-dimensional extremal frame of tr(Phi'APhi) under Phi'BPhi = I.

    Maximizing returns the top p eigenpairs sorted descending; minimizing
    the bottom p sorted ascending. The achieved trace equals the sum of
    the returned eigenvalues.
    """
    if not 1 <= p <= q.a.dim:
        raise DimensionMismatch(f"p must lie in [1, {q.a.dim}], got {p}")
    return _extremal_pairs(q.a, q.b, p, q.direction)


def reconstruction_objective(x: Matrix, phi: Matrix | Vector) -> float:
    """The squared reconstruction error ||X - Phi Phi' X||_F^2.

    ``phi`` must have orthonormal columns (within 1e-8 in max norm); a
    plain vector is treated as a single column.
    """
    if isinstance(phi, Vector):
        phi = Matrix(phi.array.reshape(-1, 1))
    if phi.rows != x.rows:
        raise DimensionMismatch(
            f"basis has {phi.rows} rows but the data has {x.rows}"
        )
    parr = phi.array
    gram = kernels.matmul(np.ascontiguousarray(parr.T), parr)
    dev = float(np.max(np.abs(gram - np.eye(phi.cols))))
    if dev > ORTHO_TOL:
        raise NonOrthonormalBasis(
            f"basis columns deviate from orthonormality by {dev:.3e}"
        )
    coords = kernels.matmul(np.ascontiguousarray(parr.T), x.array)
    resid = x.array - kernels.matmul(parr, coords)
    return float(np.sum(resid * resid))


def solve_form3_4(x: Matrix, p: int, b: SymMatrix | None = None) -> tuple[Matrix, list[float]]:
    """Best p-dimensional reconstruction basis for the columns of X.

    Minimizing ||X - Phi Phi' X||_F^2 over orthonormal Phi is the same as
    maximizing tr(Phi' XX' Phi), so this returns the top-p (generalized)
    eigenpairs of A = XX'.
    """
    if not 1 <= p <= x.rows:
        raise DimensionMismatch(f"p must lie in [1, {x.rows}], got {p}")
    xa = x.array
    prod = kernels.matmul(xa, np.ascontiguousarray(xa.T))
    a = SymMatrix((prod + prod.T) / 2.0)
    return _extremal_pairs(a, b, p, "maximize")


def check_stationarity(
    u: Vector, a: SymMatrix, b: SymMatrix | None = None
) -> StationarityReport:
    """Audit the first-order condition (A - lambda B) u = 0 at u.

    ``lambda`` is taken as the Rayleigh quotient at u; for a true
    (generalized) eigenvector the residual vanishes up to roundoff.
    """
    lam = rayleigh_quotient(u, a, b)
    ua = u.array
    au = kernels.matmul(a.array, ua.reshape(-1, 1)).ravel()
    bu = ua if b is None else kernels.matmul(b.array, ua.reshape(-1, 1)).ravel()
    resid = au - lam * bu
    ubu = float(np.dot(ua, bu))
    return StationarityReport(
        residual=math.sqrt(float(np.dot(resid, resid))),
        multiplier=lam,
        constraint_violation=abs(ubu - 1.0),
    )


# ---------------------------------------------------------------------------


def _quad(m: SymMatrix, u: Vector) -> float:
    mu = kernels.matmul(m.array, u.array.reshape(-1, 1)).ravel()
    return float(np.dot(u.array, mu))


def _extremal_pairs(
    a: SymMatrix, b: SymMatrix | None, p: int, direction: str
) -> tuple[Matrix, list[float]]:
    order = "descending" if direction == "maximize" else "ascending"
    if b is None:
        dec = eig_sym(a, order=order)
        phi = dec.phi.array[:, :p]
        lams = list(dec.eigenvalues[:p])
    else:
        sol, _ = solve_rigorous(Pencil(a, b), order=order)
        phi = sol.phi.array[:, :p]
        lams = list(sol.eigenvalues[:p])
    return Matrix(phi), lams
