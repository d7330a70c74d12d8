"""Shared helpers for the test suite.

Random matrix generators are built on top of the package's own Jacobi
eigendecomposition so that test fixtures (orthonormal frames, SPD
matrices with chosen spectra) do not depend on an external eigensolver.
Brute-force oracles inside the tests use plain loops and, where an
independent cross-check is wanted, numpy.
"""

import numpy as np
import pytest

from genspectra import Matrix, SymMatrix, eig_sym

# ---------------------------------------------------------------------------
# acceptance reporting
#
# test_acceptance.py registers one (label, ok, detail) record per criterion
# through the ``acceptance`` fixture.  The terminal-summary hook below prints
# one PASS/FAIL line per criterion at the end of the run so the outcome is
# visible even though pytest captures per-test stdout.
# ---------------------------------------------------------------------------

_ACCEPTANCE_RECORDS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RECORDS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE_RECORDS:
        status = "PASS" if ok else "FAIL"
        line = f"{status} {label}"
        if detail:
            line += f" [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    """Recorder fixture: call with (label, ok, detail) and it asserts ok."""

    def record(label: str, ok: bool, detail: str = ""):
        _ACCEPTANCE_RECORDS.append((label, bool(ok), detail))
        status = "PASS" if ok else "FAIL"
        line = f"{status} {label}"
        if detail:
            line += f" [{detail}]"
        print(line)
        assert ok, line

    return record


# ---------------------------------------------------------------------------
# random fixture generators
# ---------------------------------------------------------------------------


def random_sym(rng: np.random.RandomState, d: int, scale: float = 1.0) -> SymMatrix:
    """Random dense symmetric matrix with entries O(scale)."""
    g = rng.standard_normal((d, d)) * scale
    return SymMatrix((g + g.T) / 2.0)


def random_orthonormal(rng: np.random.RandomState, d: int) -> np.ndarray:
    """Orthonormal basis obtained from the package's own eigensolver.

    Eigenvectors of a random symmetric matrix form an orthonormal set, so
    this avoids depending on an external QR.
    """
    dec = eig_sym(random_sym(rng, d))
    return dec.phi.array.copy()


def random_spd(
    rng: np.random.RandomState, d: int, lo: float = 1.0, hi: float = 100.0
) -> SymMatrix:
    """Random SPD matrix with eigenvalues drawn uniformly from [lo, hi]."""
    q = random_orthonormal(rng, d)
    lam = rng.uniform(lo, hi, size=d)
    return SymMatrix((q * lam) @ q.T)


def random_unit(rng: np.random.RandomState, d: int) -> np.ndarray:
    v = rng.standard_normal(d)
    return v / np.sqrt(v @ v)


def gram_schmidt(cols: np.ndarray, metric: np.ndarray | None = None) -> np.ndarray:
    """Orthonormalize the columns of ``cols`` in the given inner product.

    ``metric`` is an SPD matrix B; columns come out B-orthonormal
    (plain orthonormal when metric is None).  Written out longhand so the
    tests do not lean on the code under test.
    """
    d, p = cols.shape
    b = np.eye(d) if metric is None else metric
    out = np.zeros((d, p))
    for j in range(p):
        v = cols[:, j].astype(float).copy()
        for k in range(j):
            v -= (out[:, k] @ (b @ v)) * out[:, k]
        nrm = np.sqrt(v @ (b @ v))
        if nrm < 1e-12:
            raise ValueError("rank-deficient frame in test fixture")
        out[:, j] = v / nrm
    return out


def as_matrix(rows) -> Matrix:
    return Matrix(rows)


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0
