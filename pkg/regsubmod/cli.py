"""
Command-line interface: ``regsubmod <command> [options]``.

Commands:
    solve    run one algorithm on an instance file
    table    sweep a guarantee LP over β values
    sgap     symmetry-gap searches and limit checks
    verify   run verification suites
    gen      write generated instances as JSON

Every command writes CSV (header row first) to stdout or ``--out``.

Exit codes: 0 ok, 1 usage (also infeasible requests and other solver
errors), 2 instance parse error, 3 capability limit,
4 verification failure.
"""

import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import __version__
from .basic_utils import dump_instance, load_instance
from .bench import GENERATORS, generate
from .config import SolverConfig
from .enums import Algorithm, SignMode
from .exceptions import (
    CapabilityError,
    ConfigurationError,
    ContractViolation,
    InfeasibleError,
    InstanceParseError,
    RegSubmodError,
    VerificationError,
)
from .guarantees import TABLES, guarantee_table
from .sgap import (
    cardinality_0478_check,
    csm_beta1_check,
    hyperedge_0408,
    inapprox_table,
    limit_sqrt2,
    limit_two_ln_two,
    nonneg_0478_epsilon,
)
from .solver import Solver
from .verify import SUITES, run_suites

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAPABILITY = 3
EXIT_VERIFY = 4

DEFAULT_TABLE_BETAS = {
    "nonpos": "0.7,0.8,0.9,1.0,1.1,1.2,1.3,1.4",
    "nonpos-csm": "0.7,0.8,0.9,1.0",
    "nonneg-csm": "0.6321",
    "unconstrained-0280": "0.7",
    "nonneg-comb": "0.85,0.9,0.95,1.0",
}
SGAP_TABLES = {
    "inapprox-nonpos": (SignMode.NONPOS, "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"),
    "inapprox-unconstrained": (SignMode.UNCONSTRAINED, "0.7,0.8,0.9,1.0"),
}
LIMITS = ("2ln2", "sqrt2", "0408", "0478", "0478-eps", "csm-beta1")

Row = Sequence[Any]


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _params(text: str) -> Dict[str, float]:
    params: Dict[str, float] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value, got {item!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"value of {key!r} is not a number: {value!r}") from e
    return params


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_csv(header: Sequence[str], rows: Iterable[Row], out: Optional[str] = None) -> None:
    """Write one CSV table to ``out`` or stdout; floats use six decimals."""
    if out is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_fmt(v) for v in row] for row in rows)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_fmt(v) for v in row] for row in rows)
    logger.info(f"Wrote {path}")


def _solver(args: argparse.Namespace) -> Solver:
    return Solver(
        threads=args.threads,
        seed=args.seed,
        steps=args.steps,
        eps=args.eps,
        samples=args.samples,
        enable_log=True if args.log else None,
        show_progress=True if args.progress else None,
    )


def cmd_solve(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    record = _solver(args).solve(
        instance,
        args.algo,
        r=args.r,
        beta=args.beta,
        alpha=args.alpha,
        t=args.t,
        ts=args.ts,
        tf=args.tf,
    )
    params = ";".join(f"{k}={v:g}" for k, v in sorted(record.params.items()))
    write_csv(
        ("algorithm", "params", "mask", "elements", "f", "ell", "total", "runtime_ms", "seed", "label"),
        [
            (
                str(record.algorithm),
                params,
                record.mask,
                " ".join(str(u) for u in record.elements),
                record.f,
                record.ell,
                record.total,
                record.runtime_ms,
                record.seed,
                record.label,
            )
        ],
        args.out,
    )
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    cfg = _solver(args).config
    betas = args.beta if args.beta is not None else _float_list(DEFAULT_TABLE_BETAS[args.name])
    solved = guarantee_table(args.name, betas, cfg.threads, cfg.show_progress)
    rows = [
        (args.name, beta, sol.alpha, ";".join(f"{ts:g}:{tf:g}" for ts, tf in sol.pairs))
        for beta, sol in zip(betas, solved)
    ]
    write_csv(("table", "beta", "alpha", "pairs"), rows, args.out)
    return EXIT_OK


def _limit_rows(args: argparse.Namespace) -> Tuple[Sequence[str], List[Row]]:
    if args.limit in ("2ln2", "sqrt2"):
        points = limit_two_ln_two() if args.limit == "2ln2" else limit_sqrt2()
        rows: List[Row] = [(args.limit, pt.p_star, pt.kappa, pt.ell_p, pt.beta, pt.verified) for pt in points]
        return ("limit", "p_star", "kappa", "ell_p", "beta", "verified"), rows
    if args.limit == "0408":
        check = hyperedge_0408()
        p, q = check.argmax
        return (
            ("limit", "coef", "max_value", "p", "q", "alpha_bound", "holds"),
            [(args.limit, check.coef, check.max_value, p, q, check.alpha_bound, check.holds)],
        )
    if args.limit == "0478":
        value = cardinality_0478_check()
        return ("limit", "max_fhat", "bound", "holds"), [(args.limit, value, 0.478, value < 0.478)]
    if args.limit == "0478-eps":
        eps_rows: List[Row] = [(args.limit, k, *nonneg_0478_epsilon(k)) for k in args.k]
        return ("limit", "k", "alpha_prime", "epsilon"), eps_rows
    beta = args.beta[0] if args.beta else 1.0
    gap_rows: List[Row] = [(args.limit, k, args.alpha, beta, csm_beta1_check(k, args.alpha, beta)) for k in args.k]
    return ("limit", "k", "alpha", "beta", "gap"), gap_rows


def cmd_sgap(args: argparse.Namespace) -> int:
    if args.limit is not None:
        header, rows = _limit_rows(args)
        write_csv(header, rows, args.out)
        return EXIT_OK
    cfg = _solver(args).config
    mode, default_betas = SGAP_TABLES[args.table]
    betas = args.beta if args.beta is not None else _float_list(default_betas)
    solved = inapprox_table(betas, mode, cfg.threads, cfg.show_progress)
    rows = [
        (args.table, beta, alpha, params.kappa, params.ell_p, params.ell_q)
        for beta, (alpha, params) in zip(betas, solved)
    ]
    write_csv(("table", "beta", "alpha", "kappa", "ell_p", "ell_q"), rows, args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _solver(args).config
    names = list(SUITES) if args.suite == "all" else [s.strip() for s in args.suite.split(",") if s.strip()]
    checks = run_suites(names, args.cases, cfg.seed, cfg, strict=False)
    write_csv(("check", "passed", "detail"), [(c.name, c.passed, c.detail) for c in checks], args.out)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        raise VerificationError(f"{len(failed)} of {len(checks)} checks failed", failed)
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    instances = generate(args.family, args.params)
    out = Path(args.out or f"{args.family}.json")
    if len(instances) == 1:
        paths = [out]
    else:
        paths = [out.with_name(f"{out.stem}_{i + 1}{out.suffix}") for i in range(len(instances))]
    rows = []
    for instance, path in zip(instances, paths):
        dump_instance(instance, path)
        rows.append((args.family, str(path), instance.n, instance.f.kind))
    write_csv(("family", "path", "n", "f"), rows)
    return EXIT_OK


def _epilog() -> str:
    lines = ["algorithms (α, β guarantees):"]
    width = max(len(a.value) for a in Algorithm)
    lines += [f"  {a.value:<{width}}  {a.get_guarantee()}" for a in Algorithm]
    lines += ["", "environment: REGSUBMOD_THREADS is the fallback for --threads."]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: REGSUBMOD_SEED or 0).")
    common.add_argument(
        "--threads", type=int, default=None, help="Worker threads (default: REGSUBMOD_THREADS or 1)."
    )
    common.add_argument("--steps", type=int, default=None, help="Continuous greedy steps (default: 200).")
    common.add_argument("--samples", type=int, default=None, help="Gradient samples per coordinate (default: 2000).")
    common.add_argument("--eps", type=float, default=None, help="Guessing grid resolution (default: 0.5).")
    common.add_argument("--out", type=str, default=None, help="Output path (default: stdout).")
    common.add_argument("--log", action="store_true", help="Also write a log file under ./regsubmod-logs.")
    common.add_argument("-v", "--verbose", action="store_true", help="Log INFO messages to stderr.")
    common.add_argument("--progress", action="store_true", help="Show progress bars on sweeps.")

    parser = _Parser(
        prog="regsubmod",
        description="Regularized submodular maximization toolkit.",
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser(
        "solve",
        parents=[common],
        help="Run one algorithm on an instance file.",
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--instance", required=True, help="Instance JSON file.")
    p.add_argument(
        "--algo", choices=[a.value for a in Algorithm], default=Algorithm.RANDOMIZED_DG.value, help="Algorithm."
    )
    p.add_argument("--r", type=float, default=1.0, help="Double greedy parameter r (default: 1).")
    p.add_argument("--beta", type=float, default=None, help="β target or oblivious probability.")
    p.add_argument("--alpha", type=float, default=1.0, help="f weight for brute (default: 1).")
    p.add_argument("--t", type=float, default=1.0, help="Stopping time (default: 1).")
    p.add_argument("--ts", type=float, default=None, help="Switch time of a single aided run.")
    p.add_argument("--tf", type=float, default=None, help="Final time of a single aided run.")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("table", parents=[common], help="Sweep a guarantee LP over β values.")
    p.add_argument("--name", choices=list(TABLES), default="nonpos", help="Guarantee LP (default: nonpos).")
    p.add_argument("--beta", type=_float_list, default=None, help="Comma-separated β values.")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("sgap", parents=[common], help="Symmetry-gap searches and limit checks.")
    what = p.add_mutually_exclusive_group()
    what.add_argument("--table", choices=list(SGAP_TABLES), default="inapprox-nonpos", help="Inapproximability table.")
    what.add_argument("--limit", choices=LIMITS, default=None, help="Limit schedule or fixed construction check.")
    p.add_argument("--beta", type=_float_list, default=None, help="Comma-separated β values.")
    p.add_argument("--k", type=_int_list, default=[10, 100, 1000], help="k values for 0478-eps / csm-beta1.")
    p.add_argument("--alpha", type=float, default=0.5, help="α for csm-beta1 (default: 0.5).")
    p.set_defaults(handler=cmd_sgap)

    p = sub.add_parser("verify", parents=[common], help="Run verification suites.")
    p.add_argument("--suite", default="all", help=f"Comma-separated suites or 'all' ({', '.join(SUITES)}).")
    p.add_argument("--cases", type=int, default=None, help="Random cases per suite (default: per suite).")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("gen", parents=[common], help="Write generated instances as JSON.")
    p.add_argument("--family", choices=list(GENERATORS), required=True, help="Instance family.")
    p.add_argument("--params", type=_params, default={}, help="Comma-separated key=value pairs.")
    p.set_defaults(handler=cmd_gen)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO if args.verbose else SolverConfig.from_env().log_level_value
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s [%(name)s] %(message)s", stream=sys.stderr)


def _fail(code: int, message: object) -> int:
    print(f"regsubmod: error: {message}", file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        _configure_logging(args)
        return handler(args)
    except InstanceParseError as e:
        where = ":".join(str(v) for v in (e.path, e.line) if v is not None)
        return _fail(EXIT_PARSE, f"{where}: {e}" if where else e)
    except CapabilityError as e:
        return _fail(EXIT_CAPABILITY, e)
    except VerificationError as e:
        return _fail(EXIT_VERIFY, e)
    except (ContractViolation, ConfigurationError, InfeasibleError) as e:
        return _fail(EXIT_USAGE, e)
    except RegSubmodError as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        return _fail(EXIT_USAGE, f"{type(e).__name__}: {e}")


if __name__ == "__main__":
    sys.exit(main())
