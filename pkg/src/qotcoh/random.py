"""Random states and unitaries for tests and verification suites."""
import numpy as np


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def rand_pure_state(dim, seed=None):
    rng = _rng(seed)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def rand_density_matrix(dim, seed=None, rank=None):
    """Ginibre-ensemble state of the given rank (full rank by default)."""
    rng = _rng(seed)
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def rand_unitary(dim, seed=None):
    """Haar unitary from the QR decomposition of a Ginibre matrix."""
    rng = _rng(seed)
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def rand_isometry(rows, cols, seed=None):
    rng = _rng(seed)
    z = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_diagonal_state(dim, seed=None):
    rng = _rng(seed)
    p = rng.dirichlet(np.ones(dim))
    return np.diag(p).astype(np.complex128)
