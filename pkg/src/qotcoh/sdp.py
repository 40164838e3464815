"""Small dense SDP solver for complex Hermitian PSD blocks.

Problems are posed in the standard primal form

    minimize    sum_b tr(C_b X_b)
    subject to  sum_b tr(A_kb X_b) = r_k,   X_b >= 0,

with Lagrange dual

    maximize    sum_k r_k y_k
    subject to  C_b - sum_k y_k A_kb >= 0.

Every complex block is embedded as a real symmetric block of twice the size
and the pair is solved with an infeasible primal-dual path-following method
(HKM search direction, Mehrotra predictor-corrector).
"""
import enum
import logging
import sys
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

logger = logging.getLogger(__name__)


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    MAX_ITERATIONS = "MaxIterations"
    INFEASIBLE = "Infeasible"
    NUMERICAL_FAILURE = "NumericalFailure"


class SolverError(RuntimeError):
    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


@dataclass(frozen=True)
class SolverConfig:
    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iterations: int = 200
    initial_scaling: float = 1.0
    # the method is deterministic; kept so callers can thread one seed everywhere
    seed: int = 0
    infeasibility_bound: float = 1e8
    debug: bool = False

    def __post_init__(self):
        if not (self.gap_tol > 0 and self.feas_tol > 0):
            raise ValueError("solver tolerances must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.initial_scaling > 0:
            raise ValueError("initial_scaling must be positive")


@dataclass
class Constraint:
    coeffs: dict
    rhs: float


@dataclass
class SdpProblem:
    blocks: list
    objective: dict
    constraints: list

    def validate(self, tol=1e-10):
        dims = dict(self.blocks)
        if len(dims) != len(self.blocks):
            raise ValueError("block names must be unique")
        if not self.constraints:
            raise ValueError("constraint list is empty")

        def check(name, mat, what):
            if name not in dims:
                raise ValueError(f"{what} refers to unknown block {name!r}")
            mat = np.asarray(mat)
            if mat.shape != (dims[name], dims[name]):
                raise ValueError(f"{what} for block {name!r} has shape {mat.shape}, expected {(dims[name],) * 2}")
            if np.max(np.abs(mat - mat.conj().T), initial=0.0) > tol:
                raise ValueError(f"{what} for block {name!r} is not Hermitian")

        for name, mat in self.objective.items():
            check(name, mat, "objective")
        for k, con in enumerate(self.constraints):
            if not np.isfinite(con.rhs):
                raise ValueError(f"constraint {k} has a non-finite right-hand side")
            for name, mat in con.coeffs.items():
                check(name, mat, f"constraint {k}")


@dataclass
class SdpSolution:
    block_values: dict
    dual_values: np.ndarray
    dual_slacks: dict
    primal_objective: float
    dual_objective: float
    gap: float
    primal_residual: float
    dual_residual: float
    status: Status
    iterations: int
    history: list = field(default_factory=list, repr=False)


def embed_complex(h):
    """Real symmetric embedding ``[[Re h, -Im h], [Im h, Re h]]`` of a Hermitian matrix."""
    h = np.asarray(h)
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def unembed_complex(z):
    """Inverse of :func:`embed_complex`, projecting a general symmetric matrix first."""
    n = z.shape[0] // 2
    re = 0.5 * (z[:n, :n] + z[n:, n:])
    im = 0.5 * (z[n:, :n] - z[:n, n:])
    return re + 1j * im


def _apply_a(a_flat, z):
    # tr(A_k Z) for symmetric A_k and arbitrary Z
    return a_flat @ z.T.ravel()


def _sym(z):
    return 0.5 * (z + z.T)


def _max_step(x, dx):
    try:
        w = scipy.linalg.eigh(_sym(dx), x, eigvals_only=True, subset_by_index=[0, 0])
    except (np.linalg.LinAlgError, ValueError):
        return 0.0
    return np.inf if w[0] >= 0 else -1.0 / w[0]


def solve(problem, config=None):
    """Solve ``problem``; see the module docstring for the sign conventions.

    The returned solution always carries the honest gap and residuals of the
    reported iterate, whatever the status.
    """
    config = config or SolverConfig()
    problem.validate()
    names = [name for name, _ in problem.blocks]
    m = len(problem.constraints)

    cs, a_flats, a_mats = [], [], []
    for name, dim in problem.blocks:
        n2 = 2 * dim
        c = problem.objective.get(name)
        cs.append(embed_complex(c) if c is not None else np.zeros((n2, n2)))
        a = np.zeros((m, n2, n2))
        for k, con in enumerate(problem.constraints):
            if name in con.coeffs:
                a[k] = embed_complex(con.coeffs[name])
        a_mats.append(a)
        a_flats.append(a.reshape(m, -1))
    b = 2.0 * np.array([con.rhs for con in problem.constraints], dtype=float)
    nn = sum(c.shape[0] for c in cs)

    alpha = config.initial_scaling
    xs = [alpha * np.eye(c.shape[0]) for c in cs]
    ss = [alpha * np.eye(c.shape[0]) for c in cs]
    y = np.zeros(m)

    if config.debug:
        print("iteration,gap,primal_res,dual_res", file=sys.stderr)

    history = []
    best = None
    status = Status.MAX_ITERATIONS
    stall = 0
    it = 0
    for it in range(config.max_iterations + 1):
        rp = b - sum(_apply_a(af, x) for af, x in zip(a_flats, xs))
        rds = [c - s - np.tensordot(y, a, 1) for c, s, a in zip(cs, ss, a_mats)]
        pobj = 0.5 * sum(np.vdot(c, x) for c, x in zip(cs, xs))
        dobj = 0.5 * float(b @ y)
        xs_dot = 0.5 * sum(np.vdot(x, s) for x, s in zip(xs, ss))
        pres = 0.5 * float(np.max(np.abs(rp)))
        dres = max(float(np.max(np.abs(rd), initial=0.0)) for rd in rds)
        gap = abs(pobj - dobj)
        history.append(dict(iteration=it, primal_objective=pobj, dual_objective=dobj, gap=gap,
                            primal_res=pres, dual_res=dres, complementarity=xs_dot,
                            primal_res_term=0.5 * float(y @ rp),
                            dual_res_term=0.5 * sum(np.vdot(rd, x) for rd, x in zip(rds, xs))))
        if config.debug:
            print(f"{it},{gap:.6e},{pres:.6e},{dres:.6e}", file=sys.stderr)
        logger.debug("iter %d gap %.3e pres %.3e dres %.3e", it, gap, pres, dres)

        score = max(gap / (config.gap_tol * (1 + abs(pobj))), pres / config.feas_tol, dres / config.feas_tol)
        if best is None or score <= best[0]:
            best = (score, it, [x.copy() for x in xs], y.copy(), [s.copy() for s in ss], pobj, dobj, gap, pres, dres)
        if score <= 1:
            status = Status.OPTIMAL
            break
        if dobj > config.infeasibility_bound and pres > config.feas_tol:
            status = Status.INFEASIBLE
            break
        if pobj < -config.infeasibility_bound and dres > config.feas_tol:
            status = Status.INFEASIBLE
            break
        if it == config.max_iterations:
            break

        try:
            sinvs = [scipy.linalg.cho_solve(scipy.linalg.cho_factor(s), np.eye(s.shape[0])) for s in ss]
        except np.linalg.LinAlgError:
            status = Status.NUMERICAL_FAILURE
            break
        mu = 2 * xs_dot / nn

        schur = np.zeros((m, m))
        for a, af, x, si in zip(a_mats, a_flats, xs, sinvs):
            g = x @ a @ si
            schur += af @ g.transpose(0, 2, 1).reshape(m, -1).T
        schur = _sym(schur)
        try:
            factor = scipy.linalg.cho_factor(schur)

            def schur_solve(h):
                return scipy.linalg.cho_solve(factor, h)
        except np.linalg.LinAlgError:
            logger.debug("Schur complement not positive definite; using least squares")

            def schur_solve(h):
                return np.linalg.lstsq(schur, h, rcond=None)[0]

        def direction(rcs):
            h = rp - sum(_apply_a(af, rc - x @ rd @ si)
                         for af, rc, x, rd, si in zip(a_flats, rcs, xs, rds, sinvs))
            dy = schur_solve(h)
            dss = [rd - np.tensordot(dy, a, 1) for rd, a in zip(rds, a_mats)]
            dxs = [rc - _sym(x @ ds @ si) for rc, x, ds, si in zip(rcs, xs, dss, sinvs)]
            return dxs, dy, dss

        # predictor
        dxs, dy, dss = direction([-x for x in xs])
        ap = min(1.0, min(_max_step(x, dx) for x, dx in zip(xs, dxs)))
        ad = min(1.0, min(_max_step(s, ds) for s, ds in zip(ss, dss)))
        mu_aff = sum(np.vdot(x + ap * dx, s + ad * ds) for x, dx, s, ds in zip(xs, dxs, ss, dss)) / nn
        sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3 if mu > 0 else 0.0

        # corrector
        rcs = [sigma * mu * si - x - _sym(dx @ ds @ si) for si, x, dx, ds in zip(sinvs, xs, dxs, dss)]
        dxs, dy, dss = direction(rcs)
        gamma = 0.98
        ap = min(1.0, gamma * min(_max_step(x, dx) for x, dx in zip(xs, dxs)))
        ad = min(1.0, gamma * min(_max_step(s, ds) for s, ds in zip(ss, dss)))
        if max(ap, ad) < 1e-12:
            stall += 1
            if stall >= 3:
                status = Status.NUMERICAL_FAILURE
                break
        else:
            stall = 0
        xs = [_sym(x + ap * dx) for x, dx in zip(xs, dxs)]
        y = y + ad * dy
        ss = [_sym(s + ad * ds) for s, ds in zip(ss, dss)]

    if status is not Status.OPTIMAL and best is not None:
        _, it, xs, y, ss, pobj, dobj, gap, pres, dres = best
    return SdpSolution(
        block_values={name: unembed_complex(x) for name, x in zip(names, xs)},
        dual_values=y,
        dual_slacks={name: unembed_complex(s) for name, s in zip(names, ss)},
        primal_objective=float(np.real(pobj)),
        dual_objective=float(dobj),
        gap=float(gap),
        primal_residual=pres,
        dual_residual=dres,
        status=status,
        iterations=it,
        history=history,
    )


def solve_lmi(f0, fs, c, config=None):
    """Maximize ``c @ u`` subject to ``F0 - sum_k u_k F_k >= 0`` (block-diagonal LMI).

    ``f0`` maps block names to Hermitian matrices, ``fs`` is a list of such
    maps. The LMI is the dual side of the canonical form, so the problem is
    handed to :func:`solve` as ``min tr(F0 Z)`` s.t. ``tr(F_k Z) = c_k``.
    Returns ``(u, solution)``.
    """
    blocks = [(name, np.asarray(mat).shape[0]) for name, mat in f0.items()]
    problem = SdpProblem(blocks, dict(f0), [Constraint(dict(fk), float(ck)) for fk, ck in zip(fs, c)])
    sol = solve(problem, config)
    return sol.dual_values.copy(), sol


def solve_or_raise(problem, config=None):
    sol = solve(problem, config)
    if sol.status is not Status.OPTIMAL:
        raise SolverError(
            f"SDP solver stopped with status {sol.status.value} after {sol.iterations} iterations "
            f"(gap {sol.gap:.2e}, primal res {sol.primal_residual:.2e}, dual res {sol.dual_residual:.2e})",
            sol,
        )
    return sol
