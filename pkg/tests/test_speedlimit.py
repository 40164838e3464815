import numpy as np
import pytest

from qotcoh import coherence, speedlimit
from qotcoh.linalg import hermitian_residual
from qotcoh.random import rand_pure_state

PLUS = np.array([1, 1]) / np.sqrt(2)


def test_plus_state_time():
    rep = speedlimit.tau_to_incoherent(PLUS, 1.0)
    assert abs(rep.tau - np.pi / 4) < 1e-12
    assert rep.target_index == 0  # tie broken towards the lower index
    assert rep.fidelity_at_tau >= 1 - 1e-12


def test_time_scales_with_omega():
    assert abs(speedlimit.tau_to_incoherent(PLUS, 2.0).tau - np.pi / 8) < 1e-12


def test_basis_state_needs_no_time():
    rep = speedlimit.tau_to_incoherent(np.array([0, 1.0, 0]))
    assert rep.tau == 0.0 and rep.target_index == 1 and rep.fidelity_at_tau == 1.0


def test_identity_with_coherence(rng):
    for _ in range(20):
        d = int(rng.integers(2, 7))
        psi = rand_pure_state(d, rng)
        omega = float(rng.uniform(0.3, 3))
        rep = speedlimit.tau_to_incoherent(psi, omega)
        assert abs(rep.tau - speedlimit.tau_from_coherence(coherence.tilde_t_pure(psi), omega)) < 1e-12
        assert rep.fidelity_at_tau >= 1 - 1e-7
        assert abs(rep.tau - rep.bound_rhs) < 1e-10


def test_optimal_hamiltonian(rng):
    psi, phi = rand_pure_state(3, rng), rand_pure_state(3, rng)
    spec = speedlimit.optimal_hamiltonian(psi, phi, 1.5)
    assert hermitian_residual(spec.hamiltonian) < 1e-15
    assert abs(speedlimit.energy_spread(spec.psi, spec.hamiltonian) - 1.5) < 1e-12
    t = speedlimit.tau_between(psi, phi, 1.5)
    assert abs(abs(np.vdot(phi, speedlimit.evolve(spec.psi, spec, t))) - 1) < 1e-12


def test_mandelstam_tamm_bound():
    zero, one = np.array([1.0, 0]), np.array([0, 1.0])
    assert abs(speedlimit.mt_bound(zero, one, 1.0) - np.pi / 2) < 1e-15
    with pytest.raises(ValueError):
        speedlimit.mt_bound(zero, one, 0.0)


def test_identical_states_rejected():
    with pytest.raises(ValueError, match="coincide"):
        speedlimit.optimal_hamiltonian(PLUS, 1j * PLUS)


@pytest.mark.parametrize("value", [-0.1, 0.6])
def test_coherence_value_out_of_range(value):
    with pytest.raises(ValueError):
        speedlimit.tau_from_coherence(value)


def test_bad_omega():
    with pytest.raises(ValueError):
        speedlimit.tau_to_incoherent(PLUS, 0.0)


def test_tau_pure():
    assert abs(speedlimit.tau_pure(PLUS) - np.pi / 4) < 1e-12
