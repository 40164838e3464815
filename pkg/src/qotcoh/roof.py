"""Convex-roof extension of the pure-state coherence quantifier.

With ``rho = sum_j q_j |e_j><e_j|``, every decomposition into K pure states is
``|psi_i> = sum_j V_ij sqrt(q_j) |e_j>`` for a K x r isometry ``V``, with
weights ``p_i = ||psi_i||^2``. The ensemble average of ``(1 - max_k |phi_ik|^2)/2``
then collapses to

    f(V) = (1 - sum_i max_k |psi_ik|^2) / 2,

which is minimised by Riemannian gradient descent on the isometries, with the
inner max replaced by a log-sum-exp whose temperature is annealed to zero.
Reported values always use the exact max.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coherence import tilde_t_pure
from .linalg import check_density_matrix, eig_hermitian
from .random import rand_isometry

ROOF_RANK_TOL = 1e-12


@dataclass
class Decomposition:
    weights: np.ndarray
    states: list

    def reconstruct(self):
        return sum(p * np.outer(s, s.conj()) for p, s in zip(self.weights, self.states))

    def average(self):
        return float(sum(p * tilde_t_pure(s) for p, s in zip(self.weights, self.states)))


@dataclass
class RoofResult:
    value: float
    best: Decomposition
    eigen_average: float
    converged_starts: int
    best_start: int  # -1: the eigendecomposition itself


def _exact(psi):
    return 0.5 * (1.0 - float(np.sum(np.max(np.abs(psi) ** 2, axis=1))))


def _smooth(psi, beta):
    """Smoothed objective and its Euclidean gradient with respect to ``psi``."""
    g = np.abs(psi) ** 2
    z = beta * g
    zmax = z.max(axis=1, keepdims=True)
    e = np.exp(z - zmax)
    s = e.sum(axis=1, keepdims=True)
    w = e / s
    smax = (zmax[:, 0] + np.log(s[:, 0])) / beta
    val = 0.5 * (1.0 - smax.sum())
    grad = -w * psi  # d val / d conj(psi), times 2 for the real inner product
    return val, grad


def _polar(a):
    u, _, vh = np.linalg.svd(a, full_matrices=False)
    return u @ vh


def _descend(v, coef, betas, max_iters, tol):
    """Gradient descent on the isometry manifold; returns (best V, exact value, converged)."""
    best_v, best_f = v, _exact(v @ coef)
    per_stage = max(1, max_iters // len(betas))
    for beta in betas:
        converged = False
        f, g_psi = _smooth(v @ coef, beta)
        step = 1.0
        for _ in range(per_stage):
            egrad = g_psi @ coef.conj().T
            vg = v.conj().T @ egrad
            rgrad = egrad - v @ (0.5 * (vg + vg.conj().T))
            gnorm2 = float(np.real(np.vdot(rgrad, rgrad)))
            if gnorm2 < tol ** 2:
                converged = True
                break
            step = min(step * 2.0, 1e3)
            while True:
                v_new = _polar(v - step * rgrad)
                f_new, g_new = _smooth(v_new @ coef, beta)
                if f_new <= f - 1e-4 * step * gnorm2 or step < 1e-12:
                    break
                step *= 0.5
            if step < 1e-12:
                converged = True
                break
            v, f, g_psi = v_new, f_new, g_new
            fx = _exact(v @ coef)
            if fx < best_f:
                best_v, best_f = v, fx
    return best_v, best_f, converged


def _decomposition(v, coef):
    psi = v @ coef
    p = np.sum(np.abs(psi) ** 2, axis=1)
    keep = p > 1e-15
    return Decomposition(p[keep], [row / np.sqrt(pi) for row, pi in zip(psi[keep], p[keep])])


def convex_roof_t(rho, ensemble_size=None, starts=32, seed=0, max_iters=400,
                  temperatures=(30.0, 300.0, 3e3, 3e4), tol=1e-10, n_jobs=1):
    """Convex roof of the pure-state quantifier over decompositions of ``rho``.

    Best-effort multi-start search. The eigendecomposition is always a
    candidate, so the result never exceeds its average. Start ``s`` uses the
    seed ``(seed, s)``; results do not depend on ``n_jobs``.
    """
    rho = check_density_matrix(rho)
    d = rho.shape[0]
    w, e = eig_hermitian(rho, tol=np.inf)
    r = int(np.sum(w > ROOF_RANK_TOL * w[0]))
    q = np.clip(w[:r], 0, None)
    q = q / q.sum()
    coef = np.sqrt(q)[:, None] * e[:, :r].T  # row j: sqrt(q_j) e_j

    eye = np.eye(r, dtype=np.complex128)
    eig_value = _exact(eye @ coef)
    if r == 1:
        dec = _decomposition(eye, coef)
        return RoofResult(max(0.0, eig_value), dec, eig_value, 0, -1)

    k = ensemble_size if ensemble_size is not None else min(d * r, d * d)
    if k < r:
        raise ValueError(f"ensemble size {k} is below the rank {r}")
    betas = tuple(temperatures)

    def run(s):
        v0 = rand_isometry(k, r, np.random.default_rng([seed, s]))
        return _descend(v0, coef, betas, max_iters, tol)

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            results = list(pool.map(run, range(starts)))
    else:
        results = [run(s) for s in range(starts)]

    best_v, best_f, best_s = np.vstack([eye, np.zeros((k - r, r))]), eig_value, -1
    for s, (v, f, _) in enumerate(results):
        if f < best_f:
            best_v, best_f, best_s = v, f, s
    n_conv = sum(1 for _, _, c in results if c)
    return RoofResult(max(0.0, best_f), _decomposition(best_v, coef), eig_value, n_conv, best_s)
