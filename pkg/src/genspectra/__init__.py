"""genspectra: symmetric and generalized eigensolvers with applications.

The package solves the symmetric eigenvalue problem and the generalized
problem A phi = lambda B phi (two routes: a quick reduction through the
inverse of B and a rigorous metric-whitening decomposition), exposes the
Rayleigh-quotient optimization forms these problems solve, and builds
PCA, Fisher discriminant analysis, and kernel supervised PCA on top.
"""

from .apps import (
    EmbeddingModel,
    KernelSpec,
    LabeledDataset,
    ScatterPair,
    covariance,
    fda_fit,
    kernel_matrix,
    kspca_fit,
    kspca_transform,
    pca_fit,
    pca_transform,
    scatter_matrices,
)
from .eigen import EigenDecomposition, char_poly_eig, eig_sym, eigvec_for, spectral_reconstruct
from .errors import (
    ConvergenceFailure,
    DegenerateDenominator,
    DimensionMismatch,
    DuplicateColumn,
    EmptyFile,
    GenSpectraError,
    IndefiniteB,
    InputError,
    MissingLabelColumn,
    MissingLabels,
    NoNullSpace,
    NonFiniteEntry,
    NonNumericCell,
    NonOrthonormalBasis,
    NotSymmetric,
    NumericalError,
    RaggedRows,
    SingleClass,
    SingularAfterRegularization,
    SingularMatrix,
    UnsupportedDimension,
    ZeroVector,
)
from .linalg import (
    Matrix,
    SymMatrix,
    Vector,
    centering_matrix,
    determinant,
    dot,
    frobenius_norm,
    frobenius_norm_sq,
    identity,
    inverse,
    is_psd,
    matmul,
    matvec,
    trace,
    transpose,
)
from .pencil import (
    GenEigenSolution,
    Pencil,
    WhiteningIntermediates,
    default_epsilon,
    pencil_residual,
    solve_quick_dirty,
    solve_rigorous,
)
from .rayleigh import (
    QuadraticForm,
    StationarityReport,
    check_stationarity,
    rayleigh_quotient,
    reconstruction_objective,
    solve_form1,
    solve_form2,
    solve_form3_4,
)

__version__ = "0.1.0"

__all__ = [
    "EigenDecomposition",
    "EmbeddingModel",
    "GenEigenSolution",
    "KernelSpec",
    "LabeledDataset",
    "Matrix",
    "Pencil",
    "QuadraticForm",
    "ScatterPair",
    "StationarityReport",
    "SymMatrix",
    "Vector",
    "WhiteningIntermediates",
    "centering_matrix",
    "char_poly_eig",
    "check_stationarity",
    "covariance",
    "default_epsilon",
    "determinant",
    "dot",
    "eig_sym",
    "eigvec_for",
    "fda_fit",
    "frobenius_norm",
    "frobenius_norm_sq",
    "identity",
    "inverse",
    "is_psd",
    "kernel_matrix",
    "kspca_fit",
    "kspca_transform",
    "matmul",
    "matvec",
    "pca_fit",
    "pca_transform",
    "pencil_residual",
    "rayleigh_quotient",
    "reconstruction_objective",
    "scatter_matrices",
    "solve_form1",
    "solve_form2",
    "solve_form3_4",
    "solve_quick_dirty",
    "solve_rigorous",
    "spectral_reconstruct",
    "trace",
    "transpose",
    # errors
    "GenSpectraError",
    "InputError",
    "NumericalError",
    "ConvergenceFailure",
    "DegenerateDenominator",
    "DimensionMismatch",
    "DuplicateColumn",
    "EmptyFile",
    "IndefiniteB",
    "MissingLabelColumn",
    "MissingLabels",
    "NoNullSpace",
    "NonFiniteEntry",
    "NonNumericCell",
    "NonOrthonormalBasis",
    "NotSymmetric",
    "RaggedRows",
    "SingleClass",
    "SingularAfterRegularization",
    "SingularMatrix",
    "UnsupportedDimension",
    "ZeroVector",
]
