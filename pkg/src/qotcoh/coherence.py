"""Coherence quantifier built on the revised transport cost.

``tilde_t(rho)`` is the smallest revised cost from ``rho`` to any state that
is diagonal in the computational basis. The diagonal target is a variable of
the same SDP, not an outer search: the marginal ``tr_A(X + Y)`` is constrained
to have vanishing off-diagonal part.
"""
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import asym_projector, check_density_matrix, check_pure_state, hermitian_basis, partial_trace, sym_projector
from .report import Check, VerificationError
from .sdp import Constraint, SdpProblem, SolverConfig, solve_or_raise
from .transport import SUPPORT_TOL, CouplingWitness, revised_objective


@dataclass
class CoherenceResult:
    value: float
    optimal_delta: np.ndarray
    witness: CouplingWitness

    def to_dict(self):
        return {
            "value": self.value,
            "delta": [float(v) for v in np.diag(self.optimal_delta).real],
            "witness": self.witness.to_dict(),
        }


def tilde_t(rho, config=None):
    """Minimum revised transport cost from ``rho`` to the incoherent states."""
    rho = check_density_matrix(rho)
    d = rho.shape[0]
    wa = linalg.support(rho, SUPPORT_TOL)
    ra = wa.shape[1]
    rho_hat = wa.conj().T @ rho @ wa
    lift = np.kron(wa, np.eye(d))

    cons = []
    for bk in hermitian_basis(ra):
        op = np.kron(bk, np.eye(d))
        cons.append(Constraint({"x": op, "y": op}, float(np.real(np.vdot(bk, rho_hat)))))
    offdiag = hermitian_basis(d)[d:]
    for bl in offdiag:
        op = np.kron(np.eye(ra), bl)
        cons.append(Constraint({"x": op, "y": op}, 0.0))
    problem = SdpProblem(
        [("x", ra * d), ("y", ra * d)],
        {"x": lift.conj().T @ sym_projector(d) @ lift, "y": lift.conj().T @ asym_projector(d) @ lift},
        cons,
    )
    sol = solve_or_raise(problem, config or SolverConfig())

    x = lift @ sol.block_values["x"] @ lift.conj().T
    y = lift @ sol.block_values["y"] @ lift.conj().T
    h1 = np.tensordot(sol.dual_values[: ra * ra], hermitian_basis(ra), 1)
    # zero-diagonal multiplier: a dual certificate for T_s(rho, delta) as well
    h2 = np.tensordot(sol.dual_values[ra * ra:], offdiag, 1) if d > 1 else np.zeros((1, 1), complex)
    delta = np.diag(np.diag(partial_trace(x + y, "A")).real).astype(np.complex128)
    witness = CouplingWitness(
        x_ab=x, y_ab=y, value=revised_objective(x, y),
        dual_h1=wa @ h1 @ wa.conj().T, dual_h2=h2,
        gap=sol.gap, dual_value=sol.dual_objective, status=sol.status,
    )
    return CoherenceResult(witness.value, delta, witness)


def tilde_t_pure(phi):
    """Closed form for pure states: ``(1 - max_i |phi_i|^2) / 2``."""
    phi = check_pure_state(phi)
    return 0.5 * (1.0 - float(np.max(np.abs(phi) ** 2)))


def geometric_coherence_pure(phi):
    phi = check_pure_state(phi)
    return 1.0 - float(np.max(np.abs(phi) ** 2))


@dataclass
class IncoherentChannel:
    kraus_operators: list = field(default_factory=list)

    def completeness_residual(self):
        d = self.kraus_operators[0].shape[0]
        total = sum(k.conj().T @ k for k in self.kraus_operators)
        return float(np.max(np.abs(total - np.eye(d))))

    def incoherence_residual(self):
        """Largest off-diagonal entry of ``K |j><j| K^dagger`` over Kraus ops and basis states."""
        d = self.kraus_operators[0].shape[0]
        worst = 0.0
        for k in self.kraus_operators:
            for j in range(d):
                out = np.outer(k[:, j], k[:, j].conj())
                worst = max(worst, float(np.max(np.abs(out - np.diag(np.diag(out))))))
        return worst

    def __call__(self, rho):
        return sum(k @ rho @ k.conj().T for k in self.kraus_operators)


def sample_incoherent_channel(d, n_kraus, seed=None):
    """Random channel with Kraus operators ``D_i Pi_i`` (diagonal times permutation).

    Each operator maps basis states to multiples of basis states, so the
    channel keeps diagonal states diagonal. Completeness is restored by a
    diagonal right factor, which preserves that form.
    """
    assert d >= 2 and n_kraus >= 1
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    ks = []
    for _ in range(n_kraus):
        perm = np.eye(d)[rng.permutation(d)]
        amp = rng.uniform(0.1, 1.0, size=d) * np.exp(2j * np.pi * rng.uniform(size=d))
        ks.append(np.diag(amp) @ perm)
    norm = np.real(np.diag(sum(k.conj().T @ k for k in ks)))
    right = np.diag(1 / np.sqrt(norm))
    return IncoherentChannel([k @ right for k in ks])


def counterexample_states():
    """The d=5 block-diagonal example: ``rho1``, ``rho2`` and ``rho = rho1/2 + rho2/2``."""
    v1 = np.array([1, 1, 0, 0, 0], dtype=np.complex128)
    v2 = np.array([0, 0, 1, 1, 1], dtype=np.complex128)
    rho1 = np.outer(v1, v1) / 2
    rho2 = np.outer(v2, v2) / 3
    return rho1, rho2, 0.5 * rho1 + 0.5 * rho2


def counterexample_witness():
    """Explicit feasible point ``(X, Y, delta)`` for the d=5 example, of cost 1/4."""
    minus = np.array([1, -1, 0, 0, 0], dtype=np.complex128)
    plus = np.array([1, 1, 0, 0, 0], dtype=np.complex128)
    v2 = np.array([0, 0, 1, 1, 1], dtype=np.complex128)
    x = 0.5 * np.kron(np.outer(v2, v2) / 3, np.outer(minus, minus) / 2)
    y = 0.5 * np.kron(np.outer(plus, plus) / 2, np.outer(plus, plus) / 2)
    delta = np.diag([0.5, 0.5, 0, 0, 0]).astype(np.complex128)
    return x, y, delta


def verify_b3_counterexample(config=None, raise_on_failure=True):
    """Reproduce the failure of additivity on block-diagonal states.

    Returns a list of :class:`Check`; with ``raise_on_failure`` the first
    failing check raises :class:`VerificationError`.
    """
    config = config or SolverConfig()
    rho1, rho2, rho = counterexample_states()
    t1 = tilde_t(rho1, config).value
    t2 = tilde_t(rho2, config).value
    t = tilde_t(rho, config).value
    x, y, delta = counterexample_witness()
    s = linalg.swap_operator(5)
    witness_value = revised_objective(x, y)
    witness_swap_form = 0.5 * (1 + np.real(np.trace(s @ (x - y))))
    feas = max(
        float(np.max(np.abs(partial_trace(x + y, "B") - rho))),
        float(np.max(np.abs(partial_trace(x + y, "A") - delta))),
    )
    average = 0.5 * t1 + 0.5 * t2
    checks = [
        Check("tilde_t(rho1) = 1/4", abs(t1 - 0.25), 1e-6, f"value {t1:.10f}"),
        Check("tilde_t(rho2) = 1/3", abs(t2 - 1 / 3), 1e-6, f"value {t2:.10f}"),
        Check("weighted sum = 7/24", abs(average - 7 / 24), 1e-6, f"value {average:.10f}"),
        Check("explicit witness is feasible", feas, 1e-12),
        Check("explicit witness cost = 1/4", abs(witness_value - 0.25), 1e-10, f"value {witness_value:.12f}"),
        Check("explicit witness swap form = 1/4", abs(witness_swap_form - 0.25), 1e-10),
        Check("tilde_t(rho) <= 1/4", max(0.0, t - 0.25), 1e-6, f"value {t:.10f}"),
        Check("tilde_t(rho) < 7/24", max(0.0, t - 7 / 24 + 1e-9), 0.0, f"margin {7 / 24 - t:.6f}"),
    ]
    if raise_on_failure:
        for c in checks:
            if not c.passed:
                raise VerificationError(c)
    return checks
