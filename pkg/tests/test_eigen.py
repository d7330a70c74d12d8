"""Symmetric eigendecomposition: Jacobi path, closed-form roots, null spaces."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genspectra import (
    ConvergenceFailure,
    NoNullSpace,
    SymMatrix,
    UnsupportedDimension,
    Vector,
    char_poly_eig,
    eig_sym,
    eigvec_for,
    frobenius_norm,
    identity,
    spectral_reconstruct,
)

from conftest import random_spd, random_sym


# ---------------------------------------------------------------------------
# eig_sym: worked examples
# ---------------------------------------------------------------------------


def test_eig_identity():
    dec = eig_sym(identity(2))
    assert dec.eigenvalues == (1.0, 1.0)
    assert np.array_equal(dec.phi.array, np.eye(2))


def test_eig_diagonal_orders_descending():
    dec = eig_sym(SymMatrix([[3.0, 0.0], [0.0, 1.0]]))
    assert dec.eigenvalues == (3.0, 1.0)
    assert np.allclose(np.abs(dec.phi.array), np.eye(2), atol=0)


def test_eig_two_by_two_worked_example():
    # [[2,1],[1,2]]: eigenvalues 3 and 1 with eigenvectors (1,1)/sqrt2, (1,-1)/sqrt2
    dec = eig_sym(SymMatrix([[2.0, 1.0], [1.0, 2.0]]))
    assert dec.eigenvalues[0] == pytest.approx(3.0, abs=1e-12)
    assert dec.eigenvalues[1] == pytest.approx(1.0, abs=1e-12)
    s = 1.0 / math.sqrt(2.0)
    assert np.allclose(dec.phi.array[:, 0], [s, s], atol=1e-12)
    assert np.allclose(np.abs(dec.phi.array[:, 1]), [s, s], atol=1e-12)


def test_eig_ascending_order():
    dec = eig_sym(SymMatrix([[3.0, 0.0], [0.0, 1.0]]), order="ascending")
    assert dec.eigenvalues == (1.0, 3.0)
    assert dec.order == "ascending"


def test_eig_rejects_unknown_order():
    with pytest.raises(ValueError):
        eig_sym(identity(2), order="sideways")


# ---------------------------------------------------------------------------
# eig_sym: invariants
# ---------------------------------------------------------------------------


def test_eig_invariants_on_random_matrices():
    rng = np.random.RandomState(21)
    for d in (2, 3, 5, 8, 12):
        a = random_sym(rng, d, scale=2.0)
        dec = eig_sym(a)
        phi = dec.phi.array
        lam = np.asarray(dec.eigenvalues)
        # unit columns
        assert np.allclose(np.sum(phi * phi, axis=0), 1.0, atol=1e-10)
        # orthonormality
        assert np.abs(phi.T @ phi - np.eye(d)).max() < 1e-8
        # diagonalization residual
        resid = np.abs(a.array @ phi - phi * lam).max()
        assert resid <= 1e-10 * max(1.0, np.abs(a.array).max()) * d
        # descending order
        assert all(lam[i] >= lam[i + 1] for i in range(d - 1))


def test_eig_trace_preserved():
    rng = np.random.RandomState(22)
    for d in (2, 4, 9):
        a = random_sym(rng, d)
        dec = eig_sym(a)
        tr = float(np.trace(a.array))
        assert abs(sum(dec.eigenvalues) - tr) <= 1e-9 * max(1.0, abs(tr))


def test_eig_gram_matrix_is_nonnegative():
    rng = np.random.RandomState(23)
    x = rng.standard_normal((5, 9))
    dec = eig_sym(SymMatrix(x @ x.T))
    assert min(dec.eigenvalues) >= -1e-9


def test_eig_sign_convention_is_deterministic():
    rng = np.random.RandomState(24)
    a = random_sym(rng, 6)
    d1 = eig_sym(a)
    d2 = eig_sym(a)
    assert np.array_equal(d1.phi.array, d2.phi.array)
    # largest-magnitude entry of every column is positive
    for j in range(6):
        col = d1.phi.array[:, j]
        assert col[int(np.argmax(np.abs(col)))] > 0.0


def test_eig_convergence_failure_when_sweeps_exhausted():
    rng = np.random.RandomState(25)
    a = random_sym(rng, 7)
    with pytest.raises(ConvergenceFailure):
        eig_sym(a, max_sweeps=1)


def test_spectral_reconstruct_roundtrip():
    rng = np.random.RandomState(26)
    for d in (2, 5, 10):
        a = random_sym(rng, d)
        rec = spectral_reconstruct(eig_sym(a))
        scale = max(1.0, frobenius_norm(a))
        assert np.abs(rec.array - a.array).max() <= 1e-9 * scale


def test_spectral_reconstruct_identity():
    rec = spectral_reconstruct(eig_sym(identity(3)))
    assert np.allclose(rec.array, np.eye(3), atol=1e-14)


# ---------------------------------------------------------------------------
# characteristic-polynomial route
# ---------------------------------------------------------------------------


def test_char_poly_tiny_cases():
    assert char_poly_eig(SymMatrix([[0.0]])) == [0.0]
    assert char_poly_eig(SymMatrix([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx([3.0, 1.0])


def test_char_poly_repeated_roots():
    got = char_poly_eig(SymMatrix(np.diag([5.0, 2.0, 2.0])))
    assert got == pytest.approx([5.0, 2.0, 2.0], abs=1e-12)


def test_char_poly_agrees_with_jacobi():
    rng = np.random.RandomState(27)
    for d in (2, 3, 4):
        for _ in range(10):
            a = random_sym(rng, d, scale=3.0)
            roots = char_poly_eig(a)
            lam = eig_sym(a).eigenvalues
            scale = max(1.0, max(abs(x) for x in lam))
            assert max(abs(r - l) for r, l in zip(roots, lam)) <= 1e-7 * scale


def test_char_poly_d4_with_multiplicity():
    a = SymMatrix(np.diag([7.0, 7.0, 1.0, 0.0]))
    got = char_poly_eig(a)
    assert got == pytest.approx([7.0, 7.0, 1.0, 0.0], abs=1e-9)


def test_char_poly_unsupported_dimension():
    with pytest.raises(UnsupportedDimension):
        char_poly_eig(SymMatrix(np.eye(5)))


# ---------------------------------------------------------------------------
# eigvec_for
# ---------------------------------------------------------------------------


def test_eigvec_for_diagonal():
    v = eigvec_for(SymMatrix([[3.0, 0.0], [0.0, 1.0]]), 3.0)
    assert np.allclose(np.abs(v.array), [1.0, 0.0], atol=1e-12)


def test_eigvec_for_degenerate_eigenvalue_picks_first_basis_vector():
    v = eigvec_for(identity(2), 1.0)
    assert np.allclose(v.array, [1.0, 0.0], atol=0)


def test_eigvec_for_worked_example():
    v = eigvec_for(SymMatrix([[2.0, 1.0], [1.0, 2.0]]), 3.0)
    s = 1.0 / math.sqrt(2.0)
    assert np.allclose(np.abs(v.array), [s, s], atol=1e-9)
    assert isinstance(v, Vector)


def test_eigvec_for_residual_on_random_matrix():
    rng = np.random.RandomState(28)
    a = random_sym(rng, 5)
    lam = eig_sym(a).eigenvalues[0]
    v = eigvec_for(a, lam)
    resid = np.linalg.norm(a.array @ v.array - lam * v.array)
    assert resid <= 1e-6 * max(1.0, frobenius_norm(a))
    assert v.norm() == pytest.approx(1.0, abs=1e-12)


def test_eigvec_for_rejects_non_eigenvalue():
    with pytest.raises(NoNullSpace):
        eigvec_for(SymMatrix([[3.0, 0.0], [0.0, 1.0]]), 100.0)


# ---------------------------------------------------------------------------
# property-based checks
# ---------------------------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6))
def test_eig_reconstruction_property(seed, d):
    rng = np.random.RandomState(seed)
    a = random_sym(rng, d)
    dec = eig_sym(a)
    rec = spectral_reconstruct(dec)
    scale = max(1.0, np.abs(a.array).max())
    assert np.abs(rec.array - a.array).max() <= 1e-9 * scale


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4))
def test_char_poly_matches_jacobi_property(seed, d):
    rng = np.random.RandomState(seed)
    a = random_sym(rng, d, scale=5.0)
    roots = char_poly_eig(a)
    lam = eig_sym(a).eigenvalues
    scale = max(1.0, max(abs(x) for x in lam))
    assert max(abs(r - l) for r, l in zip(roots, lam)) <= 1e-7 * scale
