import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qotcoh import linalg
from qotcoh.random import rand_density_matrix, rand_pure_state


def test_kron_and_trace_of_basis_states():
    e0, e1 = np.eye(2)[0], np.eye(2)[1]
    out = linalg.kron(np.outer(e0, e0), np.outer(e1, e1))
    expected = np.zeros((4, 4))
    expected[1, 1] = 1.0  # |01> sits at index 0*2 + 1
    assert np.array_equal(out, expected)
    assert np.trace(out) == 1.0


def test_partial_trace_of_bell_state():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = np.outer(phi, phi)
    assert np.allclose(linalg.partial_trace(rho, "A"), np.eye(2) / 2, atol=1e-15)
    assert np.allclose(linalg.partial_trace(rho, "B"), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_of_product(rng):
    a = rand_density_matrix(3, rng)
    b = rand_density_matrix(3, rng)
    ab = np.kron(a, b)
    assert linalg.allclose(linalg.partial_trace(ab, "B"), a, 1e-14)
    assert linalg.allclose(linalg.partial_trace(ab, "A"), b, 1e-14)


def test_partial_trace_rejects_bad_label():
    with pytest.raises(ValueError):
        linalg.partial_trace(np.eye(4), "C")


def test_swap_action_and_spectrum():
    s = linalg.swap_operator(3)
    for i in range(3):
        for j in range(3):
            ket = np.zeros(9)
            ket[i * 3 + j] = 1
            out = s @ ket
            assert out[j * 3 + i] == 1 and out.sum() == 1
    w = np.sort(np.linalg.eigvalsh(linalg.swap_operator(2)))
    assert np.allclose(w, [-1, 1, 1, 1])


@pytest.mark.parametrize("d", [2, 3, 4])
def test_projectors(d):
    ps, pa = linalg.sym_projector(d), linalg.asym_projector(d)
    assert linalg.allclose(ps @ ps, ps, 1e-14)
    assert linalg.allclose(pa @ pa, pa, 1e-14)
    assert linalg.allclose(ps + pa, np.eye(d * d), 1e-14)
    assert np.max(np.abs(ps @ pa)) < 1e-14
    assert np.isclose(np.trace(ps).real, d * (d + 1) / 2)
    assert np.isclose(np.trace(pa).real, d * (d - 1) / 2)


def test_antisymmetric_projector_is_singlet():
    singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
    assert linalg.allclose(linalg.asym_projector(2), np.outer(singlet, singlet), 1e-15)


def test_eig_matches_quadratic_formula():
    a, c, b = 0.7, -0.2, 0.3 + 0.4j
    m = np.array([[a, b], [np.conj(b), c]])
    disc = np.sqrt((a - c) ** 2 + 4 * abs(b) ** 2)
    w, v = linalg.eig_hermitian(m)
    assert np.allclose(w, [(a + c + disc) / 2, (a + c - disc) / 2], atol=1e-14)
    assert np.allclose(m @ v, v * w, atol=1e-14)


def test_eig_rejects_non_hermitian():
    with pytest.raises(linalg.NotHermitianError, match="Hermitian"):
        linalg.eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_check_density_matrix_messages():
    with pytest.raises(linalg.InvalidStateError, match="trace"):
        linalg.check_density_matrix(np.eye(2))
    with pytest.raises(linalg.InvalidStateError, match="negative|PSD|positive"):
        linalg.check_density_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(linalg.InvalidStateError, match="Hermitian"):
        linalg.check_density_matrix(np.array([[0.5, 0.5], [0.0, 0.5]]))


def test_check_pure_state():
    with pytest.raises(linalg.InvalidStateError):
        linalg.check_pure_state(np.array([1.0, 1.0]))
    psi = linalg.check_pure_state(np.array([0.6, 0.8j]))
    assert psi.dtype == np.complex128


def test_numerical_rank_and_support(rng):
    rho = rand_density_matrix(4, rng, rank=2)
    assert linalg.numerical_rank(rho) == 2
    w = linalg.support(rho)
    assert w.shape == (4, 2)
    assert linalg.allclose(w @ w.conj().T @ rho, rho, 1e-12)


def test_factor_rank_one_marginal(rng):
    phi = linalg.projector(rand_pure_state(3, rng))
    other = rand_density_matrix(3, rng)
    xa, xb, res = linalg.factor_rank_one_marginal(0.4 * np.kron(phi, other))
    assert res < 1e-12
    assert np.isclose(np.trace(xa).real, 0.4) and np.isclose(np.trace(xb).real, 0.4)


def test_factor_rejects_entangled():
    phi = np.eye(3).reshape(-1) / np.sqrt(3)
    with pytest.raises(linalg.RankConditionError):
        linalg.factor_rank_one_marginal(linalg.projector(phi))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_hermitian_basis_is_orthonormal(d):
    basis = linalg.hermitian_basis(d)
    assert basis.shape == (d * d, d, d)
    gram = np.einsum("aij,bij->ab", basis.conj(), basis)
    assert np.allclose(gram, np.eye(d * d), atol=1e-14)
    for b in basis:
        assert linalg.hermitian_residual(b) == 0


@settings(max_examples=40, deadline=None)
@given(da=st.integers(1, 6), db=st.integers(1, 6), seed=st.integers(0, 2 ** 32 - 1))
def test_partial_trace_preserves_trace_and_psd(da, db, seed):
    rho = rand_density_matrix(da * db, seed)
    for which in "AB":
        red = linalg.partial_trace(rho, which, dims=(da, db))
        assert abs(np.trace(red) - 1) < 1e-12
        assert linalg.is_psd(red)


@settings(max_examples=30, deadline=None)
@given(d=st.integers(2, 5), seed=st.integers(0, 2 ** 32 - 1))
def test_swap_conjugation_exchanges_factors(d, seed):
    rng = np.random.default_rng(seed)
    a, b = rand_density_matrix(d, rng), rand_density_matrix(d, rng)
    s = linalg.swap_operator(d)
    assert linalg.allclose(s @ np.kron(a, b) @ s, np.kron(b, a), 1e-13)


@settings(max_examples=30, deadline=None)
@given(d=st.integers(2, 5), seed=st.integers(0, 2 ** 32 - 1))
def test_eigendecomposition_reconstructs(d, seed):
    rho = rand_density_matrix(d, seed)
    w, v = linalg.eig_hermitian(rho)
    assert np.all(np.diff(w) <= 1e-15)
    assert linalg.allclose((v * w) @ v.conj().T, rho, 1e-13)
