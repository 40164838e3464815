"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 solver error.
"""
import argparse
import json
import logging
import os
import sys

import numpy as np

from . import coherence, io, linalg, roof, speedlimit, transport, verify
from .sdp import SolverConfig, SolverError

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _common(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--gap-tol", type=float, default=default(1e-8))
    parser.add_argument("--feas-tol", type=float, default=default(1e-8))
    parser.add_argument("--seed", type=int, default=default(0))
    parser.add_argument("--output", choices=["json", "text"], default=default("json"))


def build_parser():
    parser = argparse.ArgumentParser(prog="qotcoh", description=__doc__.splitlines()[0])
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transport", help="transport cost between two states")
    _common(p, suppress=True)
    p.add_argument("rho_file")
    p.add_argument("sigma_file")
    p.add_argument("--revised", action="store_true", help="revised (monotone) cost instead of the plain cost")
    p.add_argument("--dual", action="store_true", help="also solve the dual problem of the revised cost")
    p.add_argument("--ancilla-check", action="store_true", help="compare with the cost after adding I/2 ancillas")

    p = sub.add_parser("coherence", help="coherence quantifier of a state")
    _common(p, suppress=True)
    p.add_argument("rho_file")
    p.add_argument("--pure-analytic", action="store_true", help="require a pure input and cross-check the closed form")
    p.add_argument("--convex-roof", action="store_true", help="also compute the convex-roof measure")
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--witness-out", metavar="FILE")

    p = sub.add_parser("speedlimit", help="evolution time to the nearest incoherent state")
    _common(p, suppress=True)
    p.add_argument("psi_file")
    p.add_argument("--omega", type=float, default=1.0)

    p = sub.add_parser("verify", help="run verification suites")
    _common(p, suppress=True)
    p.add_argument("suite", choices=verify.SUITES + ["all"])
    p.add_argument("--trials", type=int, default=5)
    return parser


def _config(args):
    try:
        return SolverConfig(gap_tol=args.gap_tol, feas_tol=args.feas_tol, seed=args.seed)
    except ValueError as exc:
        raise _Fail(EXIT_INPUT, str(exc)) from exc


def _load_state(path):
    """Density matrix from either the matrix or the pure-state JSON format."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError):
        obj = None
    try:
        if isinstance(obj, dict) and "amplitudes" in obj:
            return linalg.projector(linalg.check_pure_state(io.load_pure_state(path)))
        return linalg.check_density_matrix(io.load_matrix(path))
    except io.InputError as exc:
        raise _Fail(EXIT_INPUT, str(exc)) from exc
    except linalg.InvalidStateError as exc:
        raise _Fail(EXIT_INPUT, f"{path}: {exc}") from exc


def cmd_transport(args):
    config = _config(args)
    rho, sigma = _load_state(args.rho_file), _load_state(args.sigma_file)
    if rho.shape != sigma.shape:
        raise _Fail(EXIT_INPUT, f"dimension mismatch: {rho.shape[0]} vs {sigma.shape[0]}")
    out = {}
    if args.revised or args.dual:
        w = transport.ts_primal(rho, sigma, config)
        out.update(quantity="revised transport cost", definition="min tr(X P_s + Y P_a)",
                   value=w.value, gap=w.gap, status=w.status.value)
    else:
        res = transport.transport_cost(rho, sigma, config)
        out.update(quantity="transport cost", definition="min over couplings of tr(chi P_a)",
                   value=res.value, gap=res.gap, status="Optimal")
    if args.dual:
        dual = transport.ts_dual(rho, sigma, config)
        out.update(dual_value=dual.value, duality_gap=out["value"] - dual.value, dual_min_lmi_eigenvalue=dual.min_lmi_eig)
    if args.ancilla_check:
        anc = transport.ts_via_ancilla(rho, sigma, config)
        ref = out["value"] if (args.revised or args.dual) else transport.ts_primal(rho, sigma, config).value
        out.update(ancilla_value=anc, ancilla_difference=abs(anc - ref))
    return out


def cmd_coherence(args):
    config = _config(args)
    if args.starts < 1:
        raise _Fail(EXIT_INPUT, "--starts must be >= 1")
    rho = _load_state(args.rho_file)
    pure = linalg.numerical_rank(rho) == 1
    if args.pure_analytic and not pure:
        raise _Fail(EXIT_INPUT, f"{args.rho_file}: --pure-analytic needs a rank-one state")
    res = coherence.tilde_t(rho, config)
    out = {
        "quantity": "coherence quantifier",
        "definition": "min over diagonal delta of the revised transport cost",
        "value": res.value,
        "gap": res.witness.gap,
        "delta": [float(v) for v in np.diag(res.optimal_delta).real],
        "status": res.witness.status.value,
    }
    if pure:
        w, v = linalg.eig_hermitian(rho)
        analytic = coherence.tilde_t_pure(v[:, 0] / np.linalg.norm(v[:, 0]))
        out.update(analytic_value=analytic, analytic_delta=abs(res.value - analytic))
    if args.convex_roof:
        r = roof.convex_roof_t(rho, starts=args.starts, seed=args.seed)
        out.update(convex_roof_value=r.value, convex_roof_eigen_average=r.eigen_average,
                   convex_roof_converged_starts=r.converged_starts, convex_roof_ensemble_size=len(r.best.weights))
    if args.witness_out:
        io.dump(res.to_dict(), args.witness_out)
        out["witness_file"] = args.witness_out
    return out


def cmd_speedlimit(args):
    if not args.omega > 0:
        raise _Fail(EXIT_INPUT, "--omega must be positive")
    try:
        psi = linalg.check_pure_state(io.load_pure_state(args.psi_file))
    except io.InputError as exc:
        raise _Fail(EXIT_INPUT, str(exc)) from exc
    except linalg.InvalidStateError as exc:
        raise _Fail(EXIT_INPUT, f"{args.psi_file}: {exc}") from exc
    rep = speedlimit.tau_to_incoherent(psi, args.omega)
    out = {"quantity": "time to the nearest incoherent state", "omega": args.omega}
    out.update(rep.to_dict())
    out["coherence_value"] = coherence.tilde_t_pure(psi)
    return out


def cmd_verify(args):
    if args.trials < 1:
        raise _Fail(EXIT_INPUT, "--trials must be >= 1")
    config = _config(args)
    results = verify.run(args.suite, trials=args.trials, seed=args.seed, config=config)
    suites = []
    first_fail = None
    for name, checks in results:
        suites.append({"suite": name, "checks": [_rounded(c.to_dict()) for c in checks]})
        for c in checks:
            if not c.passed and first_fail is None:
                first_fail = f"{name}: {c.name}"
    out = {"suite": args.suite, "seed": args.seed, "trials": args.trials,
           "passed": first_fail is None, "results": suites}
    if first_fail:
        out["first_failure"] = first_fail
    return out


def _rounded(check):
    check["residual"] = float(f"{check['residual']:.6e}")
    return check


def _emit(out, fmt):
    if fmt == "json":
        print(json.dumps(out, indent=2, sort_keys=True))
        return
    if "results" in out:
        for block in out["results"]:
            print(f"[{block['suite']}]")
            for c in block["checks"]:
                mark = "PASS" if c["passed"] else "FAIL"
                print(f"  {mark}  {c['name']}: residual {c['residual']:.3e} <= {c['tolerance']:.1e}")
        print("all checks passed" if out["passed"] else f"FAILED: {out['first_failure']}")
        return
    for key in sorted(out):
        print(f"{key}: {out[key]}")


COMMANDS = {"transport": cmd_transport, "coherence": cmd_coherence,
            "speedlimit": cmd_speedlimit, "verify": cmd_verify}


def main(argv=None):
    level = os.environ.get("QOT_LOG_LEVEL", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, linalg.InvalidStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(out, args.output)
    if args.command == "verify" and not out["passed"]:
        print(f"verification failed: {out['first_failure']}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
