"""Dimensionality-reduction applications built on the eigensolvers.

Three classics, each reduced to the eigenproblem it really is:

* PCA: top eigenvectors of the centered second-moment matrix S = XcXc'
  (no 1/n factor, so eigenvalues scale with the sample count);
* Fisher discriminant analysis: top generalized eigenvectors of the
  scatter pencil (S_B, S_W);
* kernel supervised PCA: top generalized eigenvectors of
  (K_x H K_y H K_x, K_x) with H the centering projector.

Data matrices are d x n with one sample per column.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, InputError, MissingLabels, SingleClass
from .eigen import eig_sym
from .linalg import Matrix, SymMatrix, Vector, centering_matrix
from .pencil import Pencil, solve_rigorous

_KERNEL_KINDS = ("linear", "rbf", "polynomial", "delta")


@dataclass(frozen=True)
class LabeledDataset:
    """A d x n data matrix with one sample per column, plus optional labels."""

    x: Matrix
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(int(v) for v in self.labels))
            if len(self.labels) != self.x.cols:
                raise DimensionMismatch(
                    f"{len(self.labels)} labels for {self.x.cols} samples"
                )

    @property
    def n(self) -> int:
        return self.x.cols

    @property
    def d(self) -> int:
        return self.x.rows


@dataclass(frozen=True)
class ScatterPair:
    """Between-class and within-class scatter matrices of a labeled set."""

    s_b: SymMatrix
    s_w: SymMatrix

    def __post_init__(self):
        if self.s_b.dim != self.s_w.dim:
            raise DimensionMismatch(
                f"scatter dims differ: {self.s_b.dim} and {self.s_w.dim}"
            )


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice and hyperparameters.

    Kinds: ``linear``, ``rbf`` (gamma defaults to 1/d), ``polynomial``
    (degree, coef0), and ``delta`` (1 when the two columns are identical,
    else 0; the usual label kernel for classification).
    """

    kind: str = "rbf"
    gamma: float | None = None
    degree: int = 3
    coef0: float = 1.0

    def __post_init__(self):
        if self.kind not in _KERNEL_KINDS:
            raise ValueError(f"kernel kind must be one of {_KERNEL_KINDS}, got {self.kind!r}")
        if self.gamma is not None and not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.degree < 1:
            raise ValueError(f"degree must be a positive integer, got {self.degree}")


@dataclass(frozen=True)
class EmbeddingModel:
    """A fitted projection.

    ``projection`` holds d x p directions for pca/fda or n x p dual
    coefficients for kspca; ``eigenvalues`` match its columns. The
    remaining fields carry whatever the transform step needs: the training
    mean for pca, kernel specs and training data for kspca.
    """

    method: str
    projection: Matrix
    eigenvalues: tuple[float, ...]
    mean: Vector | None = None
    kernel_x: KernelSpec | None = None
    kernel_y: KernelSpec | None = None
    training_x: Matrix | None = None
    epsilon_used: float = 0.0

    @property
    def p(self) -> int:
        return self.projection.cols


# ---------------------------------------------------------------------------
# PCA


def covariance(x: Matrix) -> SymMatrix:
    """Centered second-moment matrix S = Xc Xc' (no 1/n normalization)."""
    xc, _ = _center_columns(x)
    prod = kernels.matmul(xc, np.ascontiguousarray(xc.T))
    return SymMatrix((prod + prod.T) / 2.0)


def pca_fit(x: Matrix, p: int) -> EmbeddingModel:
    """Top-p principal directions of the columns of x.

    The directions are the leading eigenvectors of the centered
    second-moment matrix; the eigenvalue of direction k equals the
    projected variance u_k' S u_k.
    """
    if not 1 <= p <= x.rows:
        raise DimensionMismatch(f"p must lie in [1, {x.rows}], got {p}")
    xc, mean = _center_columns(x)
    prod = kernels.matmul(xc, np.ascontiguousarray(xc.T))
    s = SymMatrix((prod + prod.T) / 2.0)
    dec = eig_sym(s, order="descending")
    return EmbeddingModel(
        method="pca",
        projection=Matrix(dec.phi.array[:, :p]),
        eigenvalues=dec.eigenvalues[:p],
        mean=Vector(mean),
    )


def pca_transform(model: EmbeddingModel, x_new: Matrix) -> Matrix:
    """Project new columns: U' (x - training mean), giving p x m scores."""
    if model.method != "pca":
        raise InputError(f"pca_transform needs a pca model, got {model.method!r}")
    if x_new.rows != model.projection.rows:
        raise DimensionMismatch(
            f"data has {x_new.rows} features, model was fit on {model.projection.rows}"
        )
    centered = x_new.array - model.mean.array.reshape(-1, 1)
    u_t = np.ascontiguousarray(model.projection.array.T)
    return Matrix(kernels.matmul(u_t, centered))


# ---------------------------------------------------------------------------
# Fisher discriminant analysis


def scatter_matrices(ds: LabeledDataset) -> ScatterPair:
    """Between-class and within-class scatters of a labeled dataset.

    S_B sums (mu_j - mu_t)(mu_j - mu_t)' over classes j (unweighted);
    S_W sums (x - mu_j)(x - mu_j)' over the samples of each class. Their
    sum differs from the total scatter only by the class-size weighting
    that S_B deliberately omits.
    """
    if ds.labels is None:
        raise MissingLabels("scatter matrices need class labels")
    classes = sorted(set(ds.labels))
    if len(classes) < 2:
        raise SingleClass(f"need at least 2 classes, got {len(classes)}")
    xa = ds.x.array
    d = ds.d
    mu_t = xa.mean(axis=1)
    s_b = np.zeros((d, d))
    s_w = np.zeros((d, d))
    for cls in classes:
        idx = [i for i, lab in enumerate(ds.labels) if lab == cls]
        block = xa[:, idx]
        mu_j = block.mean(axis=1)
        dmu = mu_j - mu_t
        s_b += dmu.reshape(-1, 1) * dmu.reshape(1, -1)
        dev = block - mu_j.reshape(-1, 1)
        s_w += kernels.matmul(dev, np.ascontiguousarray(dev.T))
    return ScatterPair(
        s_b=SymMatrix((s_b + s_b.T) / 2.0),
        s_w=SymMatrix((s_w + s_w.T) / 2.0),
    )


def fda_fit(ds: LabeledDataset, p: int, epsilon: float | None = None) -> EmbeddingModel:
    """Top-p discriminant directions: the scatter pencil (S_B, S_W).

    Solved rigorously, so the directions satisfy w' S_W w = 1 whenever
    S_W is nonsingular; a singular S_W (e.g. within-class spread confined
    to a subspace) engages the eps regularization and the normalization
    then holds in the slightly perturbed metric, with the eps reported on
    the model. S_B has rank at most c - 1, so directions beyond that carry
    no discriminative signal; asking for them only earns a warning.
    """
    if ds.labels is None:
        raise MissingLabels("FDA needs class labels")
    if not 1 <= p <= ds.d:
        raise DimensionMismatch(f"p must lie in [1, {ds.d}], got {p}")
    c = len(set(ds.labels))
    if p > c - 1:
        warnings.warn(
            f"FDA with p = {p} directions, but the between-class scatter of "
            f"{c} classes has rank at most {c - 1}",
            stacklevel=2,
        )
    pair = scatter_matrices(ds)
    sol, _ = solve_rigorous(Pencil(pair.s_b, pair.s_w), epsilon=epsilon)
    return EmbeddingModel(
        method="fda",
        projection=Matrix(sol.phi.array[:, :p]),
        eigenvalues=sol.eigenvalues[:p],
        epsilon_used=sol.epsilon_used,
    )


# ---------------------------------------------------------------------------
# kernels and kernel supervised PCA


def kernel_matrix(x1: Matrix, x2: Matrix, spec: KernelSpec) -> Matrix:
    """Gram matrix K[i, j] = k(column i of x1, column j of x2)."""
    if x1.rows != x2.rows:
        raise DimensionMismatch(
            f"kernel inputs need equal feature dims, got {x1.rows} and {x2.rows}"
        )
    a1 = x1.array
    a2 = x2.array
    if spec.kind == "linear":
        return Matrix(kernels.matmul(np.ascontiguousarray(a1.T), a2))
    if spec.kind == "polynomial":
        gram = kernels.matmul(np.ascontiguousarray(a1.T), a2)
        return Matrix((gram + spec.coef0) ** spec.degree)
    if spec.kind == "rbf":
        gamma = spec.gamma if spec.gamma is not None else 1.0 / x1.rows
        gram = kernels.matmul(np.ascontiguousarray(a1.T), a2)
        sq1 = np.sum(a1 * a1, axis=0).reshape(-1, 1)
        sq2 = np.sum(a2 * a2, axis=0).reshape(1, -1)
        dist_sq = np.maximum(sq1 + sq2 - 2.0 * gram, 0.0)
        return Matrix(np.exp(-gamma * dist_sq))
    # delta: exact column equality
    eq = np.ones((x1.cols, x2.cols))
    for i in range(x1.cols):
        for j in range(x2.cols):
            if not np.array_equal(a1[:, i], a2[:, j]):
                eq[i, j] = 0.0
    return Matrix(eq)


def kspca_fit(
    ds: LabeledDataset,
    p: int,
    kx: KernelSpec | None = None,
    ky: KernelSpec | None = None,
    epsilon: float | None = None,
) -> EmbeddingModel:
    """Kernel supervised PCA: top-p dual directions Theta.

    Solves the pencil (K_x H K_y H K_x, K_x) rigorously, so
    Theta' K_x Theta = I holds on the returned block (in the eps-perturbed
    metric when K_x is singular, which is common for smooth kernels;
    ``epsilon`` overrides the default strength). ``kx`` defaults to rbf
    and ``ky`` to the delta kernel on the labels.
    """
    if ds.labels is None:
        raise MissingLabels("kernel supervised PCA needs labels (or numeric targets)")
    n = ds.n
    if not 1 <= p <= n:
        raise DimensionMismatch(f"p must lie in [1, {n}], got {p}")
    kx = kx if kx is not None else KernelSpec(kind="rbf")
    ky = ky if ky is not None else KernelSpec(kind="delta")

    labels_row = Matrix(np.array(ds.labels, dtype=np.float64).reshape(1, -1))
    k_x = kernel_matrix(ds.x, ds.x, kx).array
    k_y = kernel_matrix(labels_row, labels_row, ky).array
    h = centering_matrix(n).array

    hkh = kernels.matmul(h, kernels.matmul(k_y, h))
    m = kernels.matmul(k_x, kernels.matmul(hkh, k_x))
    pencil = Pencil(SymMatrix((m + m.T) / 2.0), SymMatrix((k_x + k_x.T) / 2.0))
    sol, _ = solve_rigorous(pencil, epsilon=epsilon)
    return EmbeddingModel(
        method="kspca",
        projection=Matrix(sol.phi.array[:, :p]),
        eigenvalues=sol.eigenvalues[:p],
        kernel_x=kx,
        kernel_y=ky,
        training_x=ds.x,
        epsilon_used=sol.epsilon_used,
    )


def kspca_transform(model: EmbeddingModel, x_new: Matrix) -> Matrix:
    """Embed new columns through the dual map: Theta' k(X_train, x_new)."""
    if model.method != "kspca":
        raise InputError(f"kspca_transform needs a kspca model, got {model.method!r}")
    if x_new.rows != model.training_x.rows:
        raise DimensionMismatch(
            f"data has {x_new.rows} features, model was fit on {model.training_x.rows}"
        )
    k_new = kernel_matrix(model.training_x, x_new, model.kernel_x)
    theta_t = np.ascontiguousarray(model.projection.array.T)
    return Matrix(kernels.matmul(theta_t, k_new.array))


# ---------------------------------------------------------------------------


def _center_columns(x: Matrix) -> tuple[np.ndarray, np.ndarray]:
    mean = x.array.mean(axis=1)
    return x.array - mean.reshape(-1, 1), mean
