"""Command-line entry point.

Exit codes: 0 on success (including an entangled verdict from check-sep),
1 when a verification finds a counterexample or Simon runs out of rounds,
2 on usage errors such as malformed tables or missing files.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from sepsim import algorithms, classical, oracles, report
from sepsim.oracles import BooleanOracle, LinearBooleanFunction, PromiseViolationError
from sepsim.propositions import VERIFIERS
from sepsim.separability import DEFAULT_TOL, check_two_qubit_constraint, factor_state
from sepsim.state import MAX_QUBITS, read_state_file

logger = logging.getLogger("sepsim")

DEFAULT_SEED = 0
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["json", "tsv"], default=argparse.SUPPRESS)
    p.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="write report here instead of stdout")
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    return p


def _oracle_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--linear", metavar="c=C,a=BITS")
    src.add_argument("--table", metavar="BITSTRING")
    src.add_argument("--file", type=Path, metavar="PATH", help="truth-table file: 'n=<k>' then one line of bits")


def build_parser() -> argparse.ArgumentParser:
    flags = _global_flags()
    parser = argparse.ArgumentParser(prog="sepsim", description=__doc__.splitlines()[0], parents=[flags])
    sub = parser.add_subparsers(dest="command", required=True)

    dj = sub.add_parser("dj", help="Deutsch-Jozsa runs").add_subparsers(dest="action", required=True)
    for action in ("run", "trace"):
        p = dj.add_parser(action, parents=[flags])
        p.add_argument("--n", type=int, required=True)
        _oracle_source(p)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    simon = sub.add_parser("simon", help="Simon's algorithm").add_subparsers(dest="action", required=True)
    p = simon.add_parser("run", parents=[flags])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", required=True, metavar="BITS", help="non-zero period")
    p.add_argument("--max-rounds", type=int, default=None, help="default 20*n")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    grover = sub.add_parser("grover", help="Grover search").add_subparsers(dest="action", required=True)
    for action in ("run", "first-step"):
        p = grover.add_parser(action, parents=[flags])
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--marked", required=True, metavar="I,J,...", help="marked basis indices")
        p.add_argument("--iterations", type=int, default=None)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    cl = sub.add_parser("classical", help="classical query baselines").add_subparsers(dest="action", required=True)
    for action in ("dj-exact", "dj-linear"):
        p = cl.add_parser(action, parents=[flags])
        p.add_argument("--n", type=int, required=True)
        _oracle_source(p)

    p = sub.add_parser("verify", parents=[flags], help="exhaustive proposition checks")
    p.add_argument("proposition", choices=sorted(VERIFIERS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all CPUs)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = sub.add_parser("enumerate", parents=[flags], help="list oracle populations")
    p.add_argument("family", choices=["linear", "promise"])
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("check-sep", parents=[flags], help="separability of a state file")
    p.add_argument("--state-file", type=Path, required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    return parser


def _check_n(n: int, hi: int = MAX_QUBITS) -> None:
    if not 1 <= n <= hi:
        raise UsageError(f"--n must be in 1..{hi}, got {n}")


def _load_oracle(args: argparse.Namespace) -> tuple[BooleanOracle, dict[str, Any]]:
    _check_n(args.n)
    if args.linear is not None:
        g = LinearBooleanFunction.parse(args.linear)
        f, source = oracles.expand_linear(g), {"linear": str(g)}
    elif args.table is not None:
        f, source = BooleanOracle.from_string(args.table), {"table": args.table}
    else:
        if not args.file.exists():
            raise UsageError(f"file not found: {args.file}")
        f, source = oracles.read_truth_table(args.file), {"file": str(args.file)}
    if f.n != args.n:
        raise UsageError(f"oracle has n={f.n} but --n {args.n} was given")
    return f, source


def _parse_marked(text: str, n: int) -> list[int]:
    items = [t for t in text.replace(" ", "").split(",") if t]
    try:
        marked = sorted({int(t) for t in items})
    except ValueError:
        raise UsageError(f"--marked must be comma-separated integers, got {text!r}") from None
    for x in marked:
        if not 0 <= x < 1 << n:
            raise UsageError(f"marked index {x} out of range for n={n}")
    return marked


def _cmd_dj(args, config):
    f, config["oracle"] = _load_oracle(args)
    res = algorithms.run_dj(f, args.tol)
    return EXIT_OK, report.dj_record(f.n, res, full_trace=args.action == "trace"), None


def _cmd_simon(args, config):
    _check_n(args.n, MAX_QUBITS // 2)
    a = oracles.from_bits(args.a, args.n)
    if a == 0:
        raise UsageError("--a must be non-zero")
    max_rounds = 20 * args.n if args.max_rounds is None else args.max_rounds
    config.update(period=args.a, max_rounds=max_rounds)
    f = oracles.make_simon_oracle(args.n, a)
    res = algorithms.run_simon(f, np.random.default_rng(args.seed), max_rounds, args.tol)
    code = EXIT_OK if res.success else EXIT_FAILED
    return code, report.simon_record(args.n, a, res), None


def _cmd_grover(args, config):
    _check_n(args.n)
    marked = _parse_marked(args.marked, args.n)
    config["marked"] = marked
    f = oracles.make_grover_oracle(args.n, marked)
    if args.action == "first-step":
        state = algorithms.grover_first_step_state(f)
        result = {
            "n": args.n,
            "marked": marked,
            "state": report.state_record(state),
            "separability": report.verdict_record(factor_state(state, args.tol)),
            "linear": None if (g := oracles.identify_linear(f)) is None else report.linear_record(g),
        }
        if args.n == 2:
            holds, residual = check_two_qubit_constraint(state, args.tol)
            result["two_qubit_constraint"] = {"holds": holds, "residual": residual}
        return EXIT_OK, result, None
    if not 0 < len(marked) < 1 << args.n:
        raise UsageError("grover run needs between 1 and 2**n - 1 marked elements")
    res = algorithms.run_grover(f, np.random.default_rng(args.seed), args.iterations, args.tol)
    return EXIT_OK, report.grover_record(args.n, marked, res), None


def _cmd_classical(args, config):
    f, config["oracle"] = _load_oracle(args)
    before = f.query_count
    if args.action == "dj-exact":
        verdict, log = classical.classical_dj_exact(f)
        result = {"n": f.n, "verdict": verdict.value, "query_bound": (1 << (f.n - 1)) + 1}
    else:
        verdict, g, log = classical.classical_dj_linear(f)
        result = {"n": f.n, "verdict": verdict.value, "function": report.linear_record(g)}
    result["queries"] = report.query_log_record(log)
    result["oracle_query_counter_delta"] = f.query_count - before
    result["quantum_queries"] = 1
    return EXIT_OK, result, None


def _cmd_verify(args, config):
    jobs = args.jobs or os.cpu_count() or 1
    config.update(samples=args.samples)
    # jobs affects only speed, never results; keep it out of the replay config
    r = VERIFIERS[args.proposition](args.n, seed=args.seed, samples=args.samples, tol=args.tol, jobs=jobs)
    logger.info("verify %s n=%d: %d/%d passed in %.2fs", r.proposition, r.n, r.passed, r.population, r.duration_s)
    return (EXIT_OK if r.verified else EXIT_FAILED), report.verification_record(r), None


def _cmd_enumerate(args, config):
    if args.family == "linear":
        _check_n(args.n, 16)
        rows = [
            {**report.linear_record(g), "table": oracles.expand_linear(g).to_string()}
            for g in oracles.enumerate_linear_family(args.n)
        ]
    else:
        rows = [
            {"table": f.to_string(), "class": oracles.classify(f).value}
            for f in oracles.enumerate_promise_functions(args.n)
        ]
    return EXIT_OK, {"family": args.family, "n": args.n, "count": len(rows), "functions": rows}, rows


def _cmd_check_sep(args, config):
    if not args.state_file.exists():
        raise UsageError(f"file not found: {args.state_file}")
    state = read_state_file(args.state_file)
    verdict = factor_state(state, args.tol)
    return EXIT_OK, {"n": state.n, **report.verdict_record(verdict)}, None


_COMMANDS = {
    "dj": _cmd_dj,
    "simon": _cmd_simon,
    "grover": _cmd_grover,
    "classical": _cmd_classical,
    "verify": _cmd_verify,
    "enumerate": _cmd_enumerate,
    "check-sep": _cmd_check_sep,
}

_CONFIG_SKIP = {"format", "out", "quiet", "jobs", "linear", "table", "file", "state_file"}


def _resolved_config(args: argparse.Namespace) -> dict[str, Any]:
    config: dict[str, Any] = {"command": " ".join(
        str(v) for v in (args.command, getattr(args, "action", None)) if v
    )}
    for key, value in sorted(vars(args).items()):
        if key in _CONFIG_SKIP or key in ("command", "action"):
            continue
        config[key] = str(value) if isinstance(value, Path) else value
    if hasattr(args, "state_file"):
        config["state_file"] = str(args.state_file)
    if "seed" not in config:
        config["seed"] = DEFAULT_SEED
    return config


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = getattr(args, "format", "json")
    out = getattr(args, "out", None)
    logging.basicConfig(
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        format="%(name)s: %(message)s",
        stream=sys.stderr,
    )
    config = _resolved_config(args)
    try:
        code, result, rows = _COMMANDS[args.command](args, config)
    except (UsageError, PromiseViolationError, ValueError, OSError) as exc:
        print(f"sepsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if fmt == "json":
        text = report.dumps_json(report.envelope(config, result))
    else:
        text = report.dumps_tsv(rows if rows is not None else [result])
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
