"""Evolution time from a pure state to the nearest incoherent state (hbar = 1)."""
from dataclasses import dataclass

import numpy as np

from .coherence import tilde_t_pure
from .linalg import check_pure_state, hermitian_residual

# below this |<phi|psi>|^2 deficit the two states are treated as identical
IDENTICAL_TOL = 1e-14


@dataclass
class EvolutionSpec:
    omega: float
    hamiltonian: np.ndarray
    # psi after the global-phase fix that makes <phi|psi> real and nonnegative
    psi: np.ndarray = None
    hbar: float = 1.0

    def __post_init__(self):
        if hermitian_residual(self.hamiltonian) > 1e-10:
            raise ValueError("Hamiltonian is not Hermitian")


@dataclass
class SpeedLimitReport:
    tau: float
    target: np.ndarray
    target_index: int
    fidelity_at_tau: float
    bound_rhs: float

    def to_dict(self):
        return {"tau": self.tau, "target_index": self.target_index, "fidelity_at_tau": self.fidelity_at_tau}


def energy_spread(psi, hamiltonian):
    """``sqrt(<H^2> - <H>^2)`` on ``psi``."""
    h_psi = hamiltonian @ psi
    mean = np.vdot(psi, h_psi).real
    second = np.vdot(h_psi, h_psi).real
    return float(np.sqrt(max(second - mean ** 2, 0.0)))


def mt_bound(phi1, phi2, avg_energy_variance):
    """Mandelstam-Tamm lower bound ``arccos(|<phi1|phi2>|) / Delta H``."""
    if not avg_energy_variance > 0:
        raise ValueError("energy spread must be positive; the bound is undefined otherwise")
    overlap = min(1.0, abs(np.vdot(check_pure_state(phi1), check_pure_state(phi2))))
    return float(np.arccos(overlap) / avg_energy_variance)


def optimal_hamiltonian(psi, phi, omega=1.0):
    """Time-independent Hamiltonian rotating ``psi`` into ``phi`` at the speed limit.

    ``H = -i omega (|psi><psibar| - |psibar><psi|)`` where ``psibar`` is the
    normalised component of ``phi`` orthogonal to ``psi``.
    """
    psi = check_pure_state(psi)
    phi = check_pure_state(phi)
    if not omega > 0:
        raise ValueError("omega must be positive")
    ov = np.vdot(phi, psi)
    if abs(ov) > 0:
        psi = psi * np.conj(ov) / abs(ov)
    c = float(np.vdot(psi, phi).real)
    deficit = 1.0 - c * c
    if deficit <= IDENTICAL_TOL:
        raise ValueError("states coincide up to a phase; the rotation axis is undefined")
    psibar = (phi - c * psi) / np.sqrt(deficit)
    h = -1j * omega * (np.outer(psi, psibar.conj()) - np.outer(psibar, psi.conj()))
    return EvolutionSpec(omega=omega, hamiltonian=0.5 * (h + h.conj().T), psi=psi)


def evolve(psi, spec, t):
    """``exp(-i H t) psi`` via the eigendecomposition of ``H``."""
    assert t >= 0
    w, v = np.linalg.eigh(spec.hamiltonian)
    return v @ (np.exp(-1j * w * t) * (v.conj().T @ psi))


def tau_to_incoherent(psi, omega=1.0):
    """Minimal time to rotate ``psi`` onto its closest basis state.

    The target is the basis state of largest weight (lowest index on ties);
    the time is checked by evolving under :func:`optimal_hamiltonian`.
    """
    psi = check_pure_state(psi)
    if not omega > 0:
        raise ValueError("omega must be positive")
    weights = np.abs(psi) ** 2
    idx = int(np.argmax(weights))
    target = np.zeros_like(psi)
    target[idx] = 1
    tau = float(np.arcsin(np.sqrt(max(0.0, 1.0 - weights[idx]))) / omega)
    if 1.0 - weights[idx] <= IDENTICAL_TOL:
        return SpeedLimitReport(tau, target, idx, 1.0, 0.0)
    spec = optimal_hamiltonian(psi, target, omega)
    fidelity = float(abs(evolve(psi, spec, tau)[idx]))
    bound = mt_bound(psi, target, energy_spread(spec.psi, spec.hamiltonian))
    return SpeedLimitReport(tau, target, idx, fidelity, bound)


def tau_from_coherence(t_value, omega=1.0):
    """``arcsin(sqrt(2 T)) / omega`` for a pure-state coherence value ``T``."""
    if not 0.0 <= t_value <= 0.5:
        raise ValueError(f"coherence value {t_value} outside [0, 1/2]")
    if not omega > 0:
        raise ValueError("omega must be positive")
    return float(np.arcsin(np.sqrt(2.0 * t_value)) / omega)


def tau_between(psi, phi, omega=1.0):
    """``arccos(<phi|psi>) / omega`` after the phase fix."""
    c = min(1.0, abs(np.vdot(check_pure_state(phi), check_pure_state(psi))))
    return float(np.arccos(c) / omega)


def tau_pure(psi, omega=1.0):
    return tau_from_coherence(tilde_t_pure(psi), omega)
