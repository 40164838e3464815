import numpy as np
import pytest

from qotcoh.random import rand_density_matrix, rand_unitary
from qotcoh.sdp import (Constraint, SdpProblem, SolverConfig, SolverError, Status, embed_complex,
                        solve, solve_lmi, solve_or_raise, unembed_complex)


def _random_problem(d, seed):
    """min tr(C X) s.t. tr(X) = 1 and two random Hermitian equality constraints."""
    rng = np.random.default_rng(seed)
    u = rand_unitary(d, rng)
    c = u @ np.diag(rng.uniform(-1, 1, d)) @ u.conj().T
    x0 = rand_density_matrix(d, rng)  # interior feasible point
    cons = [Constraint({"x": np.eye(d)}, 1.0)]
    for _ in range(2):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        a = a + a.conj().T
        cons.append(Constraint({"x": a}, float(np.real(np.vdot(a, x0)))))
    return SdpProblem([("x", d)], {"x": c}, cons), c, cons


def test_embedding_of_pauli_y():
    y = np.array([[0, -1j], [1j, 0]])
    z = embed_complex(y)
    assert np.allclose(z, z.T)
    assert np.allclose(np.sort(np.linalg.eigvalsh(z)), [-1, -1, 1, 1])
    assert np.array_equal(unembed_complex(z), y)


def test_embedding_preserves_psd_both_ways(rng):
    rho = rand_density_matrix(4, rng)
    assert np.linalg.eigvalsh(embed_complex(rho)).min() > -1e-14
    bad = np.diag([1.0, -0.1, 0.2, 0.3])
    assert np.linalg.eigvalsh(embed_complex(bad)).min() < 0


def test_scalar_lp():
    p = SdpProblem([("x", 1)], {"x": np.eye(1)}, [Constraint({"x": np.eye(1)}, 3.0)])
    sol = solve(p)
    assert sol.status is Status.OPTIMAL
    assert abs(sol.primal_objective - 3) < 1e-8
    assert abs(sol.block_values["x"][0, 0] - 3) < 1e-8


def test_lowest_eigenvalue_problem():
    p = SdpProblem([("x", 2)], {"x": np.diag([1.0, 2.0])}, [Constraint({"x": np.eye(2)}, 1.0)])
    sol = solve(p)
    assert abs(sol.primal_objective - 1) < 1e-8
    assert np.allclose(sol.block_values["x"], np.diag([1, 0]), atol=1e-7)
    assert abs(sol.dual_values[0] - 1) < 1e-8


def test_complex_problem_matches_minimum_eigenvalue(rng):
    u = rand_unitary(3, rng)
    c = u @ np.diag([0.3, -0.7, 1.1]) @ u.conj().T
    sol = solve(SdpProblem([("x", 3)], {"x": c}, [Constraint({"x": np.eye(3)}, 1.0)]))
    assert abs(sol.primal_objective + 0.7) < 1e-8
    assert abs(sol.dual_objective + 0.7) < 1e-8


@pytest.mark.parametrize("seed", range(3))
def test_random_problem_against_cvxpy(seed):
    cp = pytest.importorskip("cvxpy")
    prob, c, cons = _random_problem(3, seed)
    sol = solve(prob)
    x = cp.Variable((3, 3), hermitian=True)
    ref = cp.Problem(cp.Minimize(cp.real(cp.trace(c @ x))),
                     [x >> 0] + [cp.real(cp.trace(k.coeffs["x"] @ x)) == k.rhs for k in cons])
    ref.solve(solver="CLARABEL")
    assert sol.status is Status.OPTIMAL
    assert abs(sol.primal_objective - ref.value) < 1e-6


def test_weak_duality_identity_at_every_iterate():
    prob, _, _ = _random_problem(4, 7)
    sol = solve(prob)
    for h in sol.history:
        lhs = h["primal_objective"] - h["dual_objective"]
        rhs = h["complementarity"] - h["primal_res_term"] + h["dual_res_term"]
        assert abs(lhs - rhs) < 1e-8 * (1 + abs(lhs))
        # feasible-point weak duality, up to the residual terms
        assert lhs >= -abs(h["primal_res_term"]) - abs(h["dual_res_term"]) - 1e-12


def test_reproducible_bit_for_bit():
    prob, _, _ = _random_problem(4, 3)
    a, b = solve(prob, SolverConfig(seed=5)), solve(prob, SolverConfig(seed=5))
    assert np.array_equal(a.block_values["x"], b.block_values["x"])
    assert np.array_equal(a.dual_values, b.dual_values)
    assert a.primal_objective == b.primal_objective and a.iterations == b.iterations


def test_solution_is_psd_and_feasible():
    prob, _, cons = _random_problem(4, 11)
    sol = solve(prob)
    x = sol.block_values["x"]
    assert np.linalg.eigvalsh(x).min() > -1e-9
    for k in cons:
        assert abs(np.real(np.vdot(k.coeffs["x"], x)) - k.rhs) < 1e-7
    assert np.linalg.eigvalsh(sol.dual_slacks["x"]).min() > -1e-9


def test_infeasible_problem_is_flagged():
    p = SdpProblem([("x", 2)], {"x": np.zeros((2, 2))}, [Constraint({"x": np.eye(2)}, -1.0)])
    assert solve(p).status is Status.INFEASIBLE
    with pytest.raises(SolverError) as err:
        solve_or_raise(p)
    assert err.value.solution is not None


def test_max_iterations_returns_honest_gap():
    p = SdpProblem([("x", 3)], {"x": np.diag([1.0, 2.0, 3.0])}, [Constraint({"x": np.eye(3)}, 1.0)])
    sol = solve(p, SolverConfig(max_iterations=2))
    assert sol.status is Status.MAX_ITERATIONS
    assert sol.gap == abs(sol.primal_objective - sol.dual_objective)
    assert sol.gap > 0


def test_debug_trace_is_csv(capsys):
    p = SdpProblem([("x", 2)], {"x": np.diag([1.0, 2.0])}, [Constraint({"x": np.eye(2)}, 1.0)])
    sol = solve(p, SolverConfig(debug=True))
    lines = capsys.readouterr().err.strip().splitlines()
    assert lines[0] == "iteration,gap,primal_res,dual_res"
    assert len(lines) == 1 + len(sol.history)
    assert all(len(line.split(",")) == 4 for line in lines[1:])


def test_lmi_form():
    # max u s.t. diag(1, 2) - u I >= 0  ->  u = 1
    u, sol = solve_lmi({"z": np.diag([1.0, 2.0])}, [{"z": np.eye(2)}], [1.0])
    assert abs(u[0] - 1) < 1e-8
    assert sol.status is Status.OPTIMAL


def test_degenerate_optimum():
    # face of optimal solutions, optimum 0
    p = SdpProblem([("x", 4)], {"x": np.diag([0.0, 0.5, 0.5, 0.0])}, [Constraint({"x": np.eye(4)}, 1.0)])
    sol = solve(p)
    assert abs(sol.primal_objective) < 1e-8


@pytest.mark.parametrize("kwargs", [dict(gap_tol=0), dict(feas_tol=-1), dict(max_iterations=0),
                                    dict(initial_scaling=0)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


def test_problem_validation():
    with pytest.raises(ValueError):
        solve(SdpProblem([("x", 2)], {"x": np.array([[0, 1], [0, 0]])}, [Constraint({"x": np.eye(2)}, 1.0)]))
    with pytest.raises(ValueError):
        solve(SdpProblem([("x", 2)], {"x": np.eye(2)}, []))
