"""Batch command line interface.

Reads matrices and datasets from CSV, runs a solver or application, and
emits a machine-readable result document (JSON by default, CSV on
request) with residual diagnostics.

Commands: eig, geig, pca, fda, kspca, rayleigh. Exit codes: 0 on
success, 1 for input or configuration problems, 2 when the numerics fail
on structurally valid input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .apps import (
    KernelSpec,
    LabeledDataset,
    fda_fit,
    kernel_matrix,
    kspca_fit,
    pca_fit,
    scatter_matrices,
)
from .eigen import eig_sym
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DuplicateColumn,
    EmptyFile,
    GenSpectraError,
    MissingLabelColumn,
    NonNumericCell,
    NumericalError,
    RaggedRows,
)
from .linalg import SYM_TOL, Matrix, SymMatrix, Vector, centering_matrix
from .pencil import Pencil, _residual_arrays, solve_quick_dirty, solve_rigorous
from .rayleigh import check_stationarity

_ORDER_MAP = {"desc": "descending", "asc": "ascending"}


@dataclass
class RunConfig:
    """Everything one invocation needs; mirrors the command line flags."""

    command: str
    matrix_path: str | None = None
    a_path: str | None = None
    b_path: str | None = None
    u_path: str | None = None
    data_path: str | None = None
    label_column: str = "label"
    method: str = "rigorous"
    p: int = 1
    epsilon: float | None = None
    kernel: str = "rbf"
    gamma: float | None = None
    degree: int = 3
    coef0: float = 1.0
    kernel_y: str = "delta"
    order: str = "desc"
    sym_tol: float = SYM_TOL
    resid_tol: float | None = None
    output: str = "-"
    format: str = "json"
    timing: bool = False


# ---------------------------------------------------------------------------
# CSV input


def _cell_value(cell: str) -> float | None:
    try:
        return float(cell)
    except ValueError:
        return None


def _read_rows(path: str) -> list[tuple[int, list[str]]]:
    """Non-blank CSV rows with their 1-based file line numbers."""
    with open(path, newline="", encoding="utf-8-sig") as fh:
        raw = list(csv.reader(fh))
    rows = []
    for lineno, row in enumerate(raw, start=1):
        cells = [c.strip() for c in row]
        if any(cells):
            rows.append((lineno, cells))
    return rows


def _split_header(rows):
    """Apply the header rule: a first row with any non-numeric cell."""
    first = rows[0][1]
    if any(_cell_value(c) is None for c in first):
        return first, rows[1:]
    return None, rows


def _check_rectangular(data_rows):
    width = len(data_rows[0][1])
    for lineno, cells in data_rows:
        if len(cells) != width:
            raise RaggedRows(
                f"row {lineno} has {len(cells)} fields, expected {width}"
            )
    return width


def _parse_float_cell(cell: str, lineno: int, col: int) -> float:
    val = _cell_value(cell)
    if val is None or not math.isfinite(val):
        raise NonNumericCell(
            f"row {lineno} column {col + 1}: {cell!r} is not a finite number"
        )
    return val


def parse_matrix_csv(path: str) -> Matrix:
    """Read a rectangular numeric CSV into a Matrix (rows = file rows).

    A first row containing any non-numeric cell is treated as a header
    and skipped. Errors carry the offending row/column location.
    """
    rows = _read_rows(path)
    if not rows:
        raise EmptyFile(f"{path} has no data rows")
    _, data_rows = _split_header(rows)
    if not data_rows:
        raise EmptyFile(f"{path} has a header but no data rows")
    _check_rectangular(data_rows)
    entries = [
        [_parse_float_cell(cell, lineno, j) for j, cell in enumerate(cells)]
        for lineno, cells in data_rows
    ]
    return Matrix(entries)


def parse_labeled_csv(path: str, label_column: str = "label") -> LabeledDataset:
    """Read a one-sample-per-row CSV with a label column.

    ``label_column`` is a header name, or a 0-based column index when
    numeric (the only option for headerless files). Labels must be
    integer class ids; the remaining columns become the d x n data
    matrix, transposed so samples sit in columns.
    """
    rows = _read_rows(path)
    if not rows:
        raise EmptyFile(f"{path} has no data rows")
    header, data_rows = _split_header(rows)
    if not data_rows:
        raise EmptyFile(f"{path} has a header but no data rows")
    width = _check_rectangular(data_rows)

    if header is not None:
        dup = {name for name in header if header.count(name) > 1}
        if dup:
            raise DuplicateColumn(f"duplicate header names: {sorted(dup)}")
        if label_column in header:
            label_idx = header.index(label_column)
        elif _is_index(label_column):
            label_idx = int(label_column)
        else:
            raise MissingLabelColumn(
                f"no column named {label_column!r}; header has {header}"
            )
    else:
        if not _is_index(label_column):
            raise MissingLabelColumn(
                f"file has no header row, so the label column must be a "
                f"0-based index, got {label_column!r}"
            )
        label_idx = int(label_column)
    if not 0 <= label_idx < width:
        raise MissingLabelColumn(
            f"label column index {label_idx} out of range for {width} columns"
        )

    labels = []
    feature_rows = []
    for lineno, cells in data_rows:
        val = _parse_float_cell(cells[label_idx], lineno, label_idx)
        if val != int(val):
            raise NonNumericCell(
                f"row {lineno} column {label_idx + 1}: label {cells[label_idx]!r} "
                "is not an integer class id"
            )
        labels.append(int(val))
        feature_rows.append(
            [
                _parse_float_cell(cell, lineno, j)
                for j, cell in enumerate(cells)
                if j != label_idx
            ]
        )
    if not feature_rows or not feature_rows[0]:
        raise EmptyFile(f"{path} has no feature columns besides the label")
    x = Matrix(np.array(feature_rows, dtype=np.float64).T)
    return LabeledDataset(x=x, labels=tuple(labels))


def _is_index(s: str) -> bool:
    try:
        int(s)
    except ValueError:
        return False
    return True


def write_matrix_csv(m: Matrix, path: str):
    """Write a matrix as plain comma-separated rows.

    Entries are serialized with 17 significant digits, enough for an
    exact float64 round trip through ``parse_matrix_csv``.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for i in range(m.rows):
            fh.write(",".join(_fmt(v) for v in m.array[i, :]) + "\n")


# ---------------------------------------------------------------------------
# result documents


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _columns(phi: np.ndarray) -> list[list[float]]:
    return [[float(v) for v in phi[:, j]] for j in range(phi.shape[1])]


def _orthonormality_dev(phi: np.ndarray, b: np.ndarray | None) -> float:
    bphi = phi if b is None else kernels.matmul(b, phi)
    gram = kernels.matmul(np.ascontiguousarray(phi.T), bphi)
    return float(np.max(np.abs(gram - np.eye(phi.shape[1]))))


def _eigen_doc(command, lams, phi, residual, b_orth, method, eps_used, dims):
    return {
        "command": command,
        "eigenvalues": [float(v) for v in lams],
        "vectors": _columns(phi),
        "diagnostics": {
            "residual": float(residual),
            "b_orthonormality": float(b_orth),
            "method": method,
            "epsilon_used": float(eps_used),
        },
        "meta": {"dims": dims},
    }


def _gate_residual(residual: float, cfg: RunConfig):
    if cfg.resid_tol is not None and residual > cfg.resid_tol:
        raise ConvergenceFailure(
            f"residual {residual:.6e} exceeds --resid-tol {cfg.resid_tol:.6e}"
        )


# ---------------------------------------------------------------------------
# command implementations


def _run_eig(cfg: RunConfig) -> dict:
    a = SymMatrix(parse_matrix_csv(cfg.matrix_path).array, sym_tol=cfg.sym_tol)
    dec = eig_sym(a, order=_ORDER_MAP[cfg.order])
    phi = dec.phi.array
    eye = np.eye(a.dim)
    residual = _residual_arrays(a.array, eye, phi, list(dec.eigenvalues))
    _gate_residual(residual, cfg)
    return _eigen_doc(
        "eig", dec.eigenvalues, phi, residual,
        _orthonormality_dev(phi, None), "jacobi", 0.0, [a.dim],
    )


def _run_geig(cfg: RunConfig) -> dict:
    a = SymMatrix(parse_matrix_csv(cfg.a_path).array, sym_tol=cfg.sym_tol)
    b = SymMatrix(parse_matrix_csv(cfg.b_path).array, sym_tol=cfg.sym_tol)
    pencil = Pencil(a, b)
    order = _ORDER_MAP[cfg.order]
    if cfg.method == "quick_dirty":
        sol = solve_quick_dirty(pencil, epsilon=cfg.epsilon, order=order)
    else:
        sol, _ = solve_rigorous(pencil, epsilon=cfg.epsilon, order=order)
    _gate_residual(sol.residual, cfg)
    phi = sol.phi.array
    return _eigen_doc(
        "geig", sol.eigenvalues, phi, sol.residual,
        _orthonormality_dev(phi, b.array), sol.method, sol.epsilon_used,
        [pencil.dim],
    )


def _run_pca(cfg: RunConfig) -> dict:
    samples = parse_matrix_csv(cfg.data_path)
    x = Matrix(samples.array.T)
    model = pca_fit(x, cfg.p)
    u = model.projection.array
    # Residual of the truncated decomposition against the covariance.
    xc = x.array - model.mean.array.reshape(-1, 1)
    s = kernels.matmul(xc, np.ascontiguousarray(xc.T))
    residual = _residual_arrays(s, np.eye(x.rows), u, list(model.eigenvalues))
    _gate_residual(residual, cfg)
    if cfg.order == "asc":
        model = _flip_model(model)
        u = model.projection.array
    return _eigen_doc(
        "pca", model.eigenvalues, u, residual,
        _orthonormality_dev(u, None), "jacobi", 0.0, [x.rows, x.cols],
    )


def _run_fda(cfg: RunConfig) -> dict:
    ds = parse_labeled_csv(cfg.data_path, cfg.label_column)
    model = fda_fit(ds, cfg.p, epsilon=cfg.epsilon)
    pair = scatter_matrices(ds)
    w = model.projection.array
    residual = _residual_arrays(pair.s_b.array, pair.s_w.array, w, list(model.eigenvalues))
    _gate_residual(residual, cfg)
    if cfg.order == "asc":
        model = _flip_model(model)
        w = model.projection.array
    return _eigen_doc(
        "fda", model.eigenvalues, w, residual,
        _orthonormality_dev(w, pair.s_w.array), "rigorous", model.epsilon_used,
        [ds.d, ds.n],
    )


def _run_kspca(cfg: RunConfig) -> dict:
    ds = parse_labeled_csv(cfg.data_path, cfg.label_column)
    kx = KernelSpec(kind=cfg.kernel, gamma=cfg.gamma, degree=cfg.degree, coef0=cfg.coef0)
    ky = KernelSpec(kind=cfg.kernel_y, gamma=cfg.gamma, degree=cfg.degree, coef0=cfg.coef0)
    model = kspca_fit(ds, cfg.p, kx=kx, ky=ky, epsilon=cfg.epsilon)
    theta = model.projection.array

    k_x = kernel_matrix(ds.x, ds.x, kx).array
    labels_row = np.array(ds.labels, dtype=np.float64).reshape(1, -1)
    k_y = kernel_matrix(Matrix(labels_row), Matrix(labels_row), ky).array
    h = centering_matrix(ds.n).array
    m = kernels.matmul(k_x, kernels.matmul(h, kernels.matmul(k_y, kernels.matmul(h, k_x))))
    residual = _residual_arrays(m, k_x, theta, list(model.eigenvalues))
    _gate_residual(residual, cfg)
    if cfg.order == "asc":
        model = _flip_model(model)
        theta = model.projection.array
    return _eigen_doc(
        "kspca", model.eigenvalues, theta, residual,
        _orthonormality_dev(theta, k_x), "rigorous", model.epsilon_used,
        [ds.d, ds.n],
    )


def _run_rayleigh(cfg: RunConfig) -> dict:
    a = SymMatrix(parse_matrix_csv(cfg.a_path).array, sym_tol=cfg.sym_tol)
    u = _parse_vector_csv(cfg.u_path)
    b = None
    if cfg.b_path is not None:
        b = SymMatrix(parse_matrix_csv(cfg.b_path).array, sym_tol=cfg.sym_tol)
    report = check_stationarity(u, a, b)
    return {
        "command": "rayleigh",
        "quotient": report.multiplier,
        "stationarity": {
            "residual": report.residual,
            "multiplier": report.multiplier,
            "constraint_violation": report.constraint_violation,
        },
        "meta": {"dims": [a.dim]},
    }


def _parse_vector_csv(path: str) -> Vector:
    m = parse_matrix_csv(path)
    if m.rows == 1:
        return Vector(m.array[0, :])
    if m.cols == 1:
        return Vector(m.array[:, 0])
    raise DimensionMismatch(
        f"vector file must be a single row or column, got {m.rows}x{m.cols}"
    )


def _flip_model(model):
    from dataclasses import replace

    proj = model.projection.array[:, ::-1]
    return replace(
        model,
        projection=Matrix(np.ascontiguousarray(proj)),
        eigenvalues=tuple(reversed(model.eigenvalues)),
    )


_COMMANDS = {
    "eig": _run_eig,
    "geig": _run_geig,
    "pca": _run_pca,
    "fda": _run_fda,
    "kspca": _run_kspca,
    "rayleigh": _run_rayleigh,
}


# ---------------------------------------------------------------------------
# output and dispatch


def _doc_to_csv(doc: dict) -> str:
    lines = []
    if "eigenvalues" in doc:
        for lam, col in zip(doc["eigenvalues"], doc["vectors"]):
            lines.append(",".join([_fmt(lam)] + [_fmt(v) for v in col]))
    else:  # rayleigh
        st = doc["stationarity"]
        lines.append(
            ",".join(
                _fmt(v)
                for v in (doc["quotient"], st["residual"], st["constraint_violation"])
            )
        )
    return "\n".join(lines) + "\n"


def _write_output(doc: dict, cfg: RunConfig):
    text = (
        json.dumps(doc, indent=2) + "\n" if cfg.format == "json" else _doc_to_csv(doc)
    )
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(config: RunConfig) -> int:
    """Execute one configured command; returns the process exit code."""
    try:
        start = time.perf_counter()
        doc = _COMMANDS[config.command](config)
        if config.timing:
            doc["meta"]["runtime_ms"] = round((time.perf_counter() - start) * 1e3, 3)
        _write_output(doc, config)
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (GenSpectraError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits with code 1 on usage errors.

    The default exit code 2 is reserved here for numerical failures.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _nonneg_float(text: str) -> float:
    val = float(text)
    if val < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return val


def _positive_float(text: str) -> float:
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return val


def _positive_int(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return val


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", choices=("desc", "asc"), default="desc",
                        help="eigenvalue sort order in the output (default desc)")
    common.add_argument("--sym-tol", type=_nonneg_float, default=SYM_TOL,
                        help="relative symmetry tolerance for input matrices "
                             f"(default {SYM_TOL:g})")
    common.add_argument("--resid-tol", type=_nonneg_float, default=None,
                        help="fail with exit code 2 when the solution residual "
                             "exceeds this bound (default: no gate)")
    common.add_argument("--output", default="-",
                        help="output path, or - for standard output (default -)")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="output format (default json)")
    common.add_argument("--timing", action="store_true",
                        help="include runtime_ms in the output metadata "
                             "(off by default so identical runs are byte-identical)")

    eps_help = ("regularization strength used when B is singular "
                "(default 1e-5, scaled by max|B| when that exceeds 1)")

    parser = _Parser(
        prog="genspectra",
        description="Symmetric and generalized eigensolvers, Rayleigh-quotient "
                    "diagnostics, and the PCA / FDA / kernel-supervised-PCA "
                    "reductions, over CSV inputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eig = sub.add_parser("eig", parents=[common],
                           help="eigendecompose a symmetric matrix")
    p_eig.add_argument("matrix", help="CSV file holding the symmetric matrix")

    p_geig = sub.add_parser("geig", parents=[common],
                            help="solve the generalized problem A phi = lambda B phi")
    p_geig.add_argument("a", help="CSV file holding A")
    p_geig.add_argument("b", help="CSV file holding B")
    p_geig.add_argument("--method", choices=("rigorous", "quick_dirty"),
                        default="rigorous",
                        help="solution route (default rigorous)")
    p_geig.add_argument("--epsilon", type=_nonneg_float, default=None, help=eps_help)

    p_pca = sub.add_parser("pca", parents=[common],
                           help="principal component analysis of a sample-per-row CSV")
    p_pca.add_argument("data", help="CSV file, one sample per row")
    p_pca.add_argument("-p", type=_positive_int, default=1,
                       help="number of directions (default 1)")

    p_fda = sub.add_parser("fda", parents=[common],
                           help="Fisher discriminant analysis of a labeled CSV")
    p_fda.add_argument("data", help="CSV file, one sample per row plus a label column")
    p_fda.add_argument("-p", type=_positive_int, default=1,
                       help="number of directions (default 1)")
    p_fda.add_argument("--label-column", default="label",
                       help="label column name, or 0-based index (default 'label')")
    p_fda.add_argument("--epsilon", type=_nonneg_float, default=None, help=eps_help)

    p_kspca = sub.add_parser("kspca", parents=[common],
                             help="kernel supervised PCA of a labeled CSV")
    p_kspca.add_argument("data", help="CSV file, one sample per row plus a label column")
    p_kspca.add_argument("-p", type=_positive_int, default=1,
                         help="number of directions (default 1)")
    p_kspca.add_argument("--label-column", default="label",
                         help="label column name, or 0-based index (default 'label')")
    p_kspca.add_argument("--kernel", choices=("linear", "rbf", "polynomial"),
                         default="rbf", help="data kernel (default rbf)")
    p_kspca.add_argument("--gamma", type=_positive_float, default=None,
                         help="rbf width (default 1/d)")
    p_kspca.add_argument("--degree", type=_positive_int, default=3,
                         help="polynomial degree (default 3)")
    p_kspca.add_argument("--coef0", type=float, default=1.0,
                         help="polynomial offset (default 1)")
    p_kspca.add_argument("--kernel-y", choices=("delta", "linear", "rbf", "polynomial"),
                         default="delta", help="label kernel (default delta)")
    p_kspca.add_argument("--epsilon", type=_nonneg_float, default=None, help=eps_help)

    p_ray = sub.add_parser("rayleigh", parents=[common],
                           help="evaluate the Rayleigh quotient and stationarity of u")
    p_ray.add_argument("a", help="CSV file holding A")
    p_ray.add_argument("u", help="CSV file holding the vector (single row or column)")
    p_ray.add_argument("--b", dest="b", default=None,
                       help="optional CSV file holding the metric B")

    return parser


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    cfg.order = ns.order
    cfg.sym_tol = ns.sym_tol
    cfg.resid_tol = ns.resid_tol
    cfg.output = ns.output
    cfg.format = ns.format
    cfg.timing = ns.timing
    if ns.command == "eig":
        cfg.matrix_path = ns.matrix
    elif ns.command == "geig":
        cfg.a_path = ns.a
        cfg.b_path = ns.b
        cfg.method = ns.method
        cfg.epsilon = ns.epsilon
    elif ns.command in ("pca", "fda", "kspca"):
        cfg.data_path = ns.data
        cfg.p = ns.p
        if ns.command != "pca":
            cfg.label_column = ns.label_column
            cfg.epsilon = ns.epsilon
        if ns.command == "kspca":
            cfg.kernel = ns.kernel
            cfg.gamma = ns.gamma
            cfg.degree = ns.degree
            cfg.coef0 = ns.coef0
            cfg.kernel_y = ns.kernel_y
    else:  # rayleigh
        cfg.a_path = ns.a
        cfg.u_path = ns.u
        cfg.b_path = ns.b
    return cfg


def main(argv=None) -> int:
    ns = make_parser().parse_args(argv)
    return run(_config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
