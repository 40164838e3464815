"""Randomised verification suites behind ``qotcoh verify``.

Each suite returns a list of :class:`~qotcoh.report.Check`, aggregating the
worst residual over its trials. Trial ``i`` of a suite draws from the seed
``(seed, suite_id, i)`` so reports are reproducible run to run.
"""
import json
from importlib import resources

import numpy as np

from . import coherence, io, linalg, speedlimit, transport
from .random import rand_density_matrix, rand_diagonal_state, rand_pure_state
from .report import Check

SUITE_IDS = {
    "b1": 1, "b2": 2, "b4": 3, "c3-counterexample": 4, "duality": 5, "theorem2": 6,
    "theorem3": 7, "subadditivity": 8, "rank-lemma": 9, "ancilla": 10,
}
SUITES = list(SUITE_IDS)


def _rng(seed, suite, i):
    return np.random.default_rng([seed, SUITE_IDS[suite], i])


def suite_b1(trials, seed, config):
    worst_diag, min_coh, worst_offdiag = 0.0, np.inf, 0.0
    for i in range(trials):
        rng = _rng(seed, "b1", i)
        d = 2 + i % 3
        worst_diag = max(worst_diag, coherence.tilde_t(rand_diagonal_state(d, rng), config).value)
        rho = rand_density_matrix(d, rng)
        offdiag = float(np.max(np.abs(rho - np.diag(np.diag(rho)))))
        worst_offdiag = max(worst_offdiag, offdiag)
        if offdiag > 1e-5:
            min_coh = min(min_coh, coherence.tilde_t(rho, config).value)
    return [
        Check("diagonal states have tilde_t <= 1e-6", worst_diag, 1e-6),
        Check("coherent states have tilde_t > 1e-6", max(0.0, 1e-6 - min_coh), 0.0,
              f"smallest value {min_coh:.3e}"),
    ]


def suite_b2(trials, seed, config):
    worst = -np.inf
    for i in range(trials):
        rng = _rng(seed, "b2", i)
        d = 2 + i % 2
        rho = rand_density_matrix(d, rng)
        channel = coherence.sample_incoherent_channel(d, 1 + i % 3, rng)
        worst = max(worst, coherence.tilde_t(channel(rho), config).value - coherence.tilde_t(rho, config).value)
    return [Check("incoherent channels do not increase tilde_t", max(0.0, worst), 1e-6, f"max increase {worst:.3e}")]


def suite_b4(trials, seed, config):
    worst = -np.inf
    for i in range(trials):
        rng = _rng(seed, "b4", i)
        d = 2 + i % 2
        p = rng.dirichlet(np.ones(3))
        states = [rand_density_matrix(d, rng, rank=1 + rng.integers(d)) for _ in range(3)]
        mix = sum(pk * s for pk, s in zip(p, states))
        avg = sum(pk * coherence.tilde_t(s, config).value for pk, s in zip(p, states))
        worst = max(worst, coherence.tilde_t(mix, config).value - avg)
    return [Check("tilde_t is convex", max(0.0, worst), 1e-6, f"max excess {worst:.3e}")]


def suite_subadditivity(trials, seed, config):
    worst = -np.inf
    for i in range(trials):
        rng = _rng(seed, "subadditivity", i)
        rho, sigma = rand_density_matrix(2, rng), rand_density_matrix(2, rng)
        lhs = coherence.tilde_t(np.kron(rho, sigma), config).value
        worst = max(worst, lhs - coherence.tilde_t(rho, config).value - coherence.tilde_t(sigma, config).value)
    return [Check("tilde_t is subadditive on products", max(0.0, worst), 1e-6, f"max excess {worst:.3e}")]


def _fixture(name):
    path = resources.files("qotcoh") / "fixtures" / name
    with resources.as_file(path) as p:
        return io.load_matrix(p) if name != "counterexample_witness.json" else _load_witness(p)


def _load_witness(path):
    with open(path) as fh:
        obj = json.load(fh)
    return tuple(io.matrix_from_json(obj[k]) for k in ("x_ab", "y_ab", "delta"))


def suite_c3(trials, seed, config):
    checks = coherence.verify_b3_counterexample(config, raise_on_failure=False)
    rho1, rho2, rho = coherence.counterexample_states()
    x, y, delta = _fixture("counterexample_witness.json")
    shipped = [_fixture("rho1.json"), _fixture("rho2.json"), _fixture("counterexample_rho.json")]
    diff = max(float(np.max(np.abs(a - b))) for a, b in zip(shipped, (rho1, rho2, rho)))
    checks.append(Check("shipped state fixtures match", diff, 1e-15))
    checks.append(Check("shipped witness evaluates to 1/4", abs(transport.revised_objective(x, y) - 0.25), 1e-10))
    return checks


def suite_duality(trials, seed, config):
    worst = 0.0
    for d in (2, 3, 4):
        for i in range(trials):
            rng = _rng(seed, "duality", 100 * d + i)
            rho, sigma = rand_density_matrix(d, rng), rand_density_matrix(d, rng)
            primal = transport.ts_primal(rho, sigma, config).value
            dual = transport.ts_dual(rho, sigma, config).value
            worst = max(worst, abs(primal - dual))
    slater = min(transport.dual_lmi_min_eig(-np.eye(d), -np.eye(d)) for d in (2, 3, 4))
    return [
        Check("primal and dual revised costs agree", worst, 1e-6),
        Check("H1 = H2 = -I is strictly feasible (min eigenvalue 2)", abs(slater - 2.0), 1e-9),
    ]


def suite_theorem2(trials, seed, config):
    worst, worst_cg = 0.0, 0.0
    for d in (2, 3, 4, 5):
        for i in range(trials):
            psi = rand_pure_state(d, _rng(seed, "theorem2", 100 * d + i))
            sdp = coherence.tilde_t(linalg.projector(psi), config).value
            analytic = coherence.tilde_t_pure(psi)
            worst = max(worst, abs(sdp - analytic))
            worst_cg = max(worst_cg, abs(coherence.geometric_coherence_pure(psi) - 2 * analytic))
    return [
        Check("SDP matches (1 - max|lambda|^2)/2 on pure states", worst, 1e-6),
        Check("geometric coherence equals twice the value", worst_cg, 1e-15),
    ]


def suite_theorem3(trials, seed, config):
    worst_id, worst_fid, worst_bound = 0.0, 0.0, 0.0
    for i in range(trials):
        rng = _rng(seed, "theorem3", i)
        d = 2 + i % 5
        omega = float(rng.uniform(0.5, 2.0))
        psi = rand_pure_state(d, rng)
        rep = speedlimit.tau_to_incoherent(psi, omega)
        worst_id = max(worst_id, abs(rep.tau - speedlimit.tau_from_coherence(coherence.tilde_t_pure(psi), omega)))
        worst_fid = max(worst_fid, 1 - rep.fidelity_at_tau)
        worst_bound = max(worst_bound, abs(rep.tau - rep.bound_rhs))
    plus = np.array([1, 1]) / np.sqrt(2)
    return [
        Check("tau = arcsin(sqrt(2 T)) / omega", worst_id, 1e-12),
        Check("optimal evolution reaches the target at tau", worst_fid, 1e-7),
        Check("tau saturates the Mandelstam-Tamm bound", worst_bound, 1e-10),
        Check("tau(|+>, omega=1) = pi/4", abs(speedlimit.tau_to_incoherent(plus).tau - np.pi / 4), 1e-12),
    ]


def suite_rank_lemma(trials, seed, config):
    worst = 0.0
    for i in range(trials):
        rng = _rng(seed, "rank-lemma", i)
        d = 2 + i % 3
        m = float(rng.uniform(0.05, 1.0))
        rank_one = linalg.projector(rand_pure_state(d, rng))
        other = rand_density_matrix(d, rng)
        x = m * (np.kron(other, rank_one) if i % 2 == 0 else np.kron(rank_one, other))
        worst = max(worst, linalg.factor_rank_one_marginal(x)[2])
    rejected = 0
    for d in (2, 3, 4):
        phi = np.eye(d).reshape(-1) / np.sqrt(d)
        try:
            linalg.factor_rank_one_marginal(linalg.projector(phi))
        except linalg.RankConditionError:
            rejected += 1
    return [
        Check("rank-one marginal substates factor", worst, 1e-9),
        Check("maximally entangled inputs are rejected", float(3 - rejected), 0.0),
    ]


def suite_ancilla(trials, seed, config):
    worst = 0.0
    for d in (2, 3):
        for i in range(trials):
            rng = _rng(seed, "ancilla", 100 * d + i)
            rho, sigma = rand_density_matrix(d, rng), rand_density_matrix(d, rng)
            worst = max(worst, abs(transport.ts_primal(rho, sigma, config).value
                                   - transport.ts_via_ancilla(rho, sigma, config)))
    return [Check("revised cost equals the cost with a maximally mixed qubit ancilla", worst, 1e-6)]


RUNNERS = {
    "b1": suite_b1, "b2": suite_b2, "b4": suite_b4, "c3-counterexample": suite_c3,
    "duality": suite_duality, "theorem2": suite_theorem2, "theorem3": suite_theorem3,
    "subadditivity": suite_subadditivity, "rank-lemma": suite_rank_lemma, "ancilla": suite_ancilla,
}


def run(suite, trials=5, seed=0, config=None):
    """Run one suite (or ``"all"``); returns ``[(suite_name, [Check, ...]), ...]``."""
    names = SUITES if suite == "all" else [suite]
    out = []
    for name in names:
        if name not in RUNNERS:
            raise ValueError(f"unknown suite {name!r}")
        out.append((name, RUNNERS[name](trials, seed, config)))
    return out
