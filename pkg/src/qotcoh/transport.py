"""Quantum optimal transport cost and its monotone revision.

``transport_cost`` minimises the antisymmetric weight ``tr(chi P_a)`` over
couplings ``chi`` of ``(rho, sigma)``. The revised cost ``ts_primal`` splits
the coupling into two PSD parts, charging ``P_s`` on one and ``P_a`` on the
other:

    min  tr(X P_s + Y P_a)   s.t.  tr_B(X + Y) = rho,  tr_A(X + Y) = sigma,  X, Y >= 0.

All SDPs are restricted to ``supp(rho) (x) supp(sigma)``, which contains the
support of every feasible point; on that subspace both the primal and the
dual problem are strictly feasible.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg
from .linalg import asym_projector, check_density_matrix, hermitian_basis, partial_trace, sym_projector
from .sdp import Constraint, SdpProblem, SolverConfig, solve_lmi, solve_or_raise, SolverError, Status

SUPPORT_TOL = 1e-10


@dataclass
class CouplingWitness:
    x_ab: np.ndarray
    y_ab: np.ndarray
    value: float
    dual_h1: np.ndarray
    dual_h2: np.ndarray
    gap: float
    dual_value: float = float("nan")
    status: Status = Status.OPTIMAL

    def to_dict(self):
        from .io import matrix_to_json
        return {
            "value": self.value,
            "gap": self.gap,
            "x_ab": matrix_to_json(self.x_ab),
            "y_ab": matrix_to_json(self.y_ab),
            "h1": matrix_to_json(self.dual_h1),
            "h2": matrix_to_json(self.dual_h2),
        }


class TransportResult(NamedTuple):
    value: float
    chi: np.ndarray
    gap: float


class DualResult(NamedTuple):
    value: float
    h1: np.ndarray
    h2: np.ndarray
    min_lmi_eig: float
    shift: float


def revised_objective(x_ab, y_ab):
    d = linalg.local_dim(x_ab)
    return float(np.real(np.vdot(sym_projector(d), x_ab) + np.vdot(asym_projector(d), y_ab)))


def is_coupling(chi, rho, sigma, tol=1e-8):
    """Whether ``chi`` is a bipartite state with marginals ``rho`` (A) and ``sigma`` (B)."""
    chi = np.asarray(chi, dtype=np.complex128)
    d = linalg.local_dim(chi)
    if np.asarray(rho).shape != (d, d) or np.asarray(sigma).shape != (d, d):
        return False
    if linalg.hermitian_residual(chi) > tol or not linalg.is_psd(chi, tol):
        return False
    if abs(np.trace(chi).real - 1) > tol:
        return False
    return linalg.allclose(partial_trace(chi, "B"), rho, tol) and linalg.allclose(partial_trace(chi, "A"), sigma, tol)


def dual_lmi_min_eig(h1, h2, proj_s=None, proj_a=None):
    """Smallest eigenvalue over ``P - H1 (x) I - I (x) H2`` for ``P`` in {P_s, P_a}."""
    da, db = h1.shape[0], h2.shape[0]
    if proj_s is None:
        proj_s, proj_a = sym_projector(da), asym_projector(da)
    shift = np.kron(h1, np.eye(db)) + np.kron(np.eye(da), h2)
    return float(min(np.linalg.eigvalsh(proj_s - shift)[0], np.linalg.eigvalsh(proj_a - shift)[0]))


def _pair(rho, sigma):
    rho = check_density_matrix(rho)
    sigma = check_density_matrix(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"states have different dimensions {rho.shape[0]} and {sigma.shape[0]}")
    return rho, sigma


def _reduce(rho):
    w = linalg.support(rho, SUPPORT_TOL)
    return w, w.conj().T @ rho @ w


def _compress(op, wa, wb):
    w = np.kron(wa, wb)
    return w.conj().T @ op @ w


def _lift(op, wa, wb):
    w = np.kron(wa, wb)
    return w @ op @ w.conj().T


def _marginal_constraints(blocks, ra, rb, rho_hat, sigma_hat):
    """Equalities tr_B(sum blocks) = rho_hat and tr_A(sum blocks) = sigma_hat.

    The last diagonal entry of the B marginal is implied by the trace of the
    A marginal and is left out so the constraint set stays independent.
    """
    cons = []
    for bk in hermitian_basis(ra):
        op = np.kron(bk, np.eye(rb))
        cons.append(Constraint({name: op for name in blocks}, float(np.real(np.vdot(bk, rho_hat)))))
    basis_b = hermitian_basis(rb)
    keep = [l for l in range(rb * rb) if l != rb - 1]
    for l in keep:
        op = np.kron(np.eye(ra), basis_b[l])
        cons.append(Constraint({name: op for name in blocks}, float(np.real(np.vdot(basis_b[l], sigma_hat)))))
    return cons, keep


def _dual_operators(y, ra, rb, keep):
    ba = hermitian_basis(ra)
    bb = hermitian_basis(rb)
    h1 = np.tensordot(y[: ra * ra], ba, 1)
    h2 = np.tensordot(y[ra * ra:], bb[keep], 1) if keep else np.zeros((rb, rb), dtype=np.complex128)
    return h1, h2


def transport_cost(rho, sigma, config=None):
    """Minimum of ``tr(chi P_a)`` over couplings ``chi`` of ``(rho, sigma)``."""
    rho, sigma = _pair(rho, sigma)
    d = rho.shape[0]
    wa, rho_hat = _reduce(rho)
    wb, sigma_hat = _reduce(sigma)
    ra, rb = wa.shape[1], wb.shape[1]
    cons, _ = _marginal_constraints(["chi"], ra, rb, rho_hat, sigma_hat)
    problem = SdpProblem([("chi", ra * rb)], {"chi": _compress(asym_projector(d), wa, wb)}, cons)
    sol = solve_or_raise(problem, config or SolverConfig())
    chi = _lift(sol.block_values["chi"], wa, wb)
    value = float(np.real(np.vdot(asym_projector(d), chi)))
    return TransportResult(value, chi, sol.gap)


def ts_primal(rho, sigma, config=None):
    """Revised transport cost by the primal SDP; returns a :class:`CouplingWitness`."""
    rho, sigma = _pair(rho, sigma)
    d = rho.shape[0]
    wa, rho_hat = _reduce(rho)
    wb, sigma_hat = _reduce(sigma)
    ra, rb = wa.shape[1], wb.shape[1]
    cons, keep = _marginal_constraints(["x", "y"], ra, rb, rho_hat, sigma_hat)
    problem = SdpProblem(
        [("x", ra * rb), ("y", ra * rb)],
        {"x": _compress(sym_projector(d), wa, wb), "y": _compress(asym_projector(d), wa, wb)},
        cons,
    )
    sol = solve_or_raise(problem, config or SolverConfig())
    x = _lift(sol.block_values["x"], wa, wb)
    y = _lift(sol.block_values["y"], wa, wb)
    h1, h2 = _dual_operators(sol.dual_values, ra, rb, keep)
    return CouplingWitness(
        x_ab=x, y_ab=y, value=revised_objective(x, y),
        dual_h1=wa @ h1 @ wa.conj().T, dual_h2=wb @ h2 @ wb.conj().T,
        gap=sol.gap, dual_value=sol.dual_objective, status=sol.status,
    )


def ts_dual(rho, sigma, config=None):
    """Revised transport cost from the dual problem

        sup tr(rho H1) + tr(sigma H2)  s.t.  P_s - H1 (x) I - I (x) H2 >= 0,
                                             P_a - H1 (x) I - I (x) H2 >= 0.

    The solver's ``(H1, H2)`` is checked by an eigenvalue computation on both
    LMIs; if either is violated, ``H1`` is shifted by the most negative
    eigenvalue, which restores feasibility and makes ``value`` a certified
    lower bound. For rank-deficient states the LMIs are checked on
    ``supp(rho) (x) supp(sigma)`` and the returned operators vanish outside it.
    """
    rho, sigma = _pair(rho, sigma)
    d = rho.shape[0]
    wa, rho_hat = _reduce(rho)
    wb, sigma_hat = _reduce(sigma)
    ra, rb = wa.shape[1], wb.shape[1]
    ps = _compress(sym_projector(d), wa, wb)
    pa = _compress(asym_projector(d), wa, wb)

    # gauge (H1 + t, H2 - t) fixed by pinning the first diagonal entry of H2
    ba, bb = hermitian_basis(ra), hermitian_basis(rb)
    fs, c = [], []
    for bk in ba:
        op = np.kron(bk, np.eye(rb))
        fs.append({"s": op, "a": op})
        c.append(np.real(np.vdot(bk, rho_hat)))
    for bl in bb[1:]:
        op = np.kron(np.eye(ra), bl)
        fs.append({"s": op, "a": op})
        c.append(np.real(np.vdot(bl, sigma_hat)))
    u, sol = solve_lmi({"s": ps, "a": pa}, fs, c, config or SolverConfig())
    if sol.status is not Status.OPTIMAL:
        raise SolverError(f"dual SDP stopped with status {sol.status.value}", sol)
    h1 = np.tensordot(u[: ra * ra], ba, 1)
    h2 = np.tensordot(u[ra * ra:], bb[1:], 1) if rb > 1 else np.zeros((1, 1), dtype=np.complex128)

    lam = dual_lmi_min_eig(h1, h2, ps, pa)
    shift = min(0.0, lam)
    h1 = h1 + shift * np.eye(ra)
    value = float(np.real(np.vdot(h1, rho_hat) + np.vdot(h2, sigma_hat)))
    return DualResult(value, wa @ h1 @ wa.conj().T, wb @ h2 @ wb.conj().T, dual_lmi_min_eig(h1, h2, ps, pa), shift)


def ts_via_ancilla(rho, sigma, config=None):
    """``T(rho (x) I_2/2, sigma (x) I_2/2)``; equals the revised cost."""
    rho, sigma = _pair(rho, sigma)
    half = np.eye(2) / 2
    return transport_cost(np.kron(rho, half), np.kron(sigma, half), config).value
