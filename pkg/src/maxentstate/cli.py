"""Command-line interface.

    maxent solve --obs 1,2,3,4,5,6 --mean 3.5
    maxent equilibrium --obs 0,1,2 --format csv
    maxent order --x 0.6,0.4 --y 0.8,0.2
    maxent phi-chain --obs 0,1,2 --mean 0.5 --format csv
    maxent oracle-compare --obs 0,1,2 --mean 0.5 --resolution 400 --seed 7

Exit codes: 0 success, 1 usage error, 2 mean outside ``[a_1, a_n]``,
3 non-convergence or truncated chain, 4 states unrelated, 5 oracle gap
beyond its bound.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import BACKEND, __version__
from .equilibrium import equilibrium_state
from .errors import DomainError, MaxEntError, NoSolutionError, NonConvergenceError, SizeError
from .lagrange import METHODS, MaxEntProblem, SolverConfig, residual, solve
from .oracle import GRID_MAX_N, GridSpec, constrained_sampler, oracle_maxent_grid
from .order import leq_projective, leq_symmetric, phi_chain
from .state import ClassicalState, Observable, entropy, expectation

SCHEMA_VERSION = "1.0"
TOL_ENV = "MAXENT_DEFAULT_TOL"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_SOLUTION = 2
EXIT_NOT_CONVERGED = 3
EXIT_UNRELATED = 4
EXIT_ORACLE_GAP = 5

#: Max-norm gap allowed between solver and grid oracle, in grid steps.
ORACLE_GAP_STEPS = 2.0
ENTROPY_SLACK = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    return values


def _observable(text: str) -> Observable:
    try:
        return Observable(_floats(text))
    except MaxEntError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _state(text: str) -> ClassicalState:
    try:
        return ClassicalState(_floats(text))
    except MaxEntError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _count(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return value


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return 1e-12
    try:
        return _positive(raw)
    except (ValueError, argparse.ArgumentTypeError):
        raise UsageError(f"{TOL_ENV}={raw!r} is not a positive number")


# ---------------------------------------------------------------- emission


def _num(v):
    """JSON-safe float; infinities become the strings ``"inf"``/``"-inf"``."""
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _txt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json(command, inputs, result, diagnostics) -> str:
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "result": result,
        "diagnostics": diagnostics,
    }
    return json.dumps(envelope, indent=2, allow_nan=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_txt(v) for v in row])
    return buf.getvalue()


def _plain(pairs) -> str:
    lines = []
    for key, value in pairs:
        if isinstance(value, (list, tuple, np.ndarray)):
            value = " ".join(_txt(v) for v in value)
        else:
            value = _txt(value)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _emit(text: str):
    sys.stdout.write(text)


def _state_cols(n):
    return [f"p{i + 1}" for i in range(n)]


# ---------------------------------------------------------------- commands


def _problem(args) -> MaxEntProblem:
    return MaxEntProblem(args.obs, args.mean)


def cmd_solve(args) -> int:
    tol = args.tol if args.tol is not None else _default_tol()
    cfg = SolverConfig(
        residual_tol=tol,
        step_tol=args.step_tol,
        max_iter=args.max_iter,
        method=args.method.replace("-", "_"),
        initial_guess=args.guess,
        record_trace=args.trace,
    )
    inputs = {
        "obs": args.obs.values.tolist(),
        "mean": args.mean,
        "tol": tol,
        "step_tol": cfg.step_tol,
        "max_iter": cfg.max_iter,
        "method": cfg.method,
        "guess": cfg.initial_guess,
    }
    p = _problem(args)
    started = time.perf_counter()
    code = EXIT_OK
    try:
        res = solve(p, cfg)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_NOT_CONVERGED
        trace = exc.trace
        payload = {"converged": False, "last_iterate": _num(exc.last)}
        lam, state, iterations, resid, termination = exc.last, None, cfg.max_iter, None, "max_iter"
    else:
        trace = res.trace
        lam, state, iterations, resid, termination = (
            res.lam, res.state, res.iterations, res.residual, res.termination,
        )
        payload = {
            "converged": True,
            "lambda": _num(lam),
            "state": state.probs.tolist(),
            "iterations": iterations,
            "residual": resid,
            "termination": termination,
            "mean_achieved": expectation(p.observable, state),
            "entropy": entropy(state),
        }
    diagnostics = {"backend": BACKEND}
    if args.timing:
        diagnostics["elapsed_s"] = time.perf_counter() - started
    if trace is not None:
        diagnostics["trace"] = [
            {"k": k, "lambda": l, "residual": r} for k, l, r in trace.entries
        ]

    if args.format == "json":
        _emit(_json("solve", inputs, payload, diagnostics))
    elif args.format == "csv":
        if trace is not None:
            _emit(_csv(["step", "lambda", "residual"], trace.entries))
        elif state is not None:
            header = ["lambda", "iterations", "residual", "termination"] + _state_cols(len(state))
            _emit(_csv(header, [[lam, iterations, resid, termination, *state.probs.tolist()]]))
    else:
        if state is not None:
            _emit(_plain([
                ("lambda", lam), ("state", state.probs), ("iterations", iterations),
                ("residual", resid), ("termination", termination),
            ]))
    return code


def cmd_equilibrium(args) -> int:
    eq = equilibrium_state(args.obs)
    if abs(eq.functional_value + eq.log_partition) > 1e-10:
        raise MaxEntError(
            f"functional {eq.functional_value!r} differs from -log Za {-eq.log_partition!r}"
        )
    state = eq.state.probs.tolist()
    if args.format == "json":
        _emit(_json(
            "equilibrium",
            {"obs": args.obs.values.tolist()},
            {"state": state, "log_partition": eq.log_partition,
             "functional_value": eq.functional_value},
            {"backend": BACKEND},
        ))
    elif args.format == "csv":
        header = ["log_partition", "functional_value"] + _state_cols(len(state))
        _emit(_csv(header, [[eq.log_partition, eq.functional_value, *state]]))
    else:
        _emit(_plain([("state", state), ("log_partition", eq.log_partition),
                      ("functional_value", eq.functional_value)]))
    return EXIT_OK


def cmd_order(args) -> int:
    x, y = args.x, args.y
    if len(x) != len(y):
        raise UsageError(f"--x has {len(x)} entries but --y has {len(y)}")
    witness = None
    if args.method == "projective":
        try:
            related = leq_projective(x, y)
        except SizeError as exc:
            raise UsageError(str(exc))
    else:
        verdict = leq_symmetric(x, y)
        related = verdict.related
        if verdict.witness_permutation is not None:
            witness = [i + 1 for i in verdict.witness_permutation]
    inputs = {"x": x.probs.tolist(), "y": y.probs.tolist(), "method": args.method}
    if args.format == "json":
        _emit(_json("order", inputs, {"related": related, "witness_permutation": witness},
                    {"backend": BACKEND}))
    elif args.format == "csv":
        _emit(_csv(["related", "witness_permutation"],
                   [[str(related).lower(), " ".join(map(str, witness or []))]]))
    else:
        _emit(_plain([("related", str(related).lower()),
                      ("witness_permutation", witness if witness else "none")]))
    return EXIT_OK if related else EXIT_UNRELATED


def cmd_phi_chain(args) -> int:
    p = _problem(args)
    if not p.is_interior:
        raise UsageError("phi-chain needs a_1 < mean < a_n strictly")
    chain = phi_chain(p, max_steps=args.steps, tol=args.tol)
    rows = []
    for k in range(len(chain)):
        lam = float(chain.lambdas[k])
        rows.append([k, lam, residual(p, lam), *chain.states[k].tolist()])
    status = "converged" if chain.converged else "truncated"
    inputs = {"obs": args.obs.values.tolist(), "mean": args.mean,
              "steps": args.steps, "tol": args.tol}
    if args.format == "json":
        result = {
            "status": status,
            "length": len(chain),
            "final_state": chain.states[-1].tolist(),
            "final_lambda": float(chain.lambdas[-1]),
            "chain": [{"step": r[0], "lambda": r[1], "residual": r[2], "state": r[3:]}
                      for r in rows],
        }
        _emit(_json("phi-chain", inputs, result, {"backend": BACKEND}))
    elif args.format == "csv":
        header = ["step", "lambda", "residual"] + _state_cols(len(p.observable)) + ["status"]
        out = [r + [""] for r in rows]
        out[-1][-1] = status
        _emit(_csv(header, out))
    else:
        _emit(_plain([("status", status), ("length", len(chain)),
                      ("final_lambda", float(chain.lambdas[-1])),
                      ("final_state", chain.states[-1])]))
    return EXIT_OK if chain.converged else EXIT_NOT_CONVERGED


def cmd_oracle_compare(args) -> int:
    p = _problem(args)
    n = len(p.observable)
    if n > GRID_MAX_N:
        raise UsageError(f"oracle-compare supports n <= {GRID_MAX_N}, got n={n}")
    if not p.is_interior:
        raise UsageError("oracle-compare needs a_1 < mean < a_n strictly")
    res = solve(p)
    grid = oracle_maxent_grid(p, GridSpec(args.resolution))
    samples = constrained_sampler(p, args.samples, seed=args.seed)
    h_solver = entropy(res.state)
    h_grid = entropy(grid)
    # grid points miss the target mean by up to one step, so the fair entropy
    # reference is the maximum entropy state at the grid point's own mean
    h_matched = entropy(solve(MaxEntProblem(p.observable, expectation(p.observable, grid))).state)
    h_samples = max(entropy(s) for s in samples)
    gap = float(np.max(np.abs(res.state.probs - grid.probs)))
    bound = ORACLE_GAP_STEPS / args.resolution
    ok = gap <= bound and h_matched - h_grid >= -ENTROPY_SLACK and h_solver - h_samples >= -ENTROPY_SLACK
    inputs = {"obs": args.obs.values.tolist(), "mean": args.mean,
              "resolution": args.resolution, "seed": args.seed, "samples": args.samples}
    result = {
        "solver_state": res.state.probs.tolist(),
        "oracle_state": grid.probs.tolist(),
        "max_norm_gap": gap,
        "gap_bound": bound,
        "entropy_gap": h_matched - h_grid,
        "raw_entropy_gap": h_solver - h_grid,
        "sample_entropy_gap": h_solver - h_samples,
        "within_bounds": ok,
    }
    if args.format == "json":
        _emit(_json("oracle-compare", inputs, result, {"backend": BACKEND}))
    elif args.format == "csv":
        keys = ["max_norm_gap", "gap_bound", "entropy_gap", "sample_entropy_gap", "within_bounds"]
        _emit(_csv(keys, [[result[k] if k != "within_bounds" else str(ok).lower() for k in keys]]))
    else:
        _emit(_plain([(k, str(v).lower() if isinstance(v, bool) else v) for k, v in result.items()]))
    return EXIT_OK if ok else EXIT_ORACLE_GAP


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="maxent", description="Maximum entropy states under a mean constraint.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, problem=True):
        if problem:
            sp.add_argument("--obs", type=_observable, required=True,
                            help="strictly increasing outcome values, comma separated")
            sp.add_argument("--mean", type=float, required=True, help="target mean E")
        sp.add_argument("--format", choices=("json", "csv", "plain"), default="plain")

    sp = sub.add_parser("solve", help="maximum entropy state for a target mean")
    common(sp)
    sp.add_argument("--tol", type=_positive, default=None,
                    help=f"residual tolerance (default 1e-12, or ${TOL_ENV})")
    sp.add_argument("--step-tol", type=_positive, default=1e-14)
    sp.add_argument("--max-iter", type=_count, default=1_000_000)
    sp.add_argument("--method", choices=[m.replace("_", "-") for m in METHODS], default="fixed-point")
    sp.add_argument("--guess", type=float, default=0.0, help="initial multiplier")
    sp.add_argument("--trace", action="store_true", help="record every iterate")
    sp.add_argument("--timing", action="store_true", help="report elapsed time")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("equilibrium", help="Boltzmann state exp(-a_i)/Za")
    sp.add_argument("--obs", type=_observable, required=True)
    sp.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
    sp.set_defaults(func=cmd_equilibrium)

    sp = sub.add_parser("order", help="decide x ⊑ y in the Bayesian order")
    sp.add_argument("--x", type=_state, required=True)
    sp.add_argument("--y", type=_state, required=True)
    sp.add_argument("--method", choices=("symmetric", "projective"), default="symmetric")
    sp.add_argument("--format", choices=("json", "csv", "plain"), default="plain")
    sp.set_defaults(func=cmd_order)

    sp = sub.add_parser("phi-chain", help="iterate phi from the uniform state")
    common(sp)
    sp.add_argument("--steps", type=_count, default=100_000)
    sp.add_argument("--tol", type=_positive, default=1e-12)
    sp.set_defaults(func=cmd_phi_chain)

    sp = sub.add_parser("oracle-compare", help="check the solver against brute force")
    common(sp)
    sp.add_argument("--resolution", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=_count, default=1000)
    sp.set_defaults(func=cmd_oracle_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoSolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except (UsageError, DomainError, MaxEntError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
