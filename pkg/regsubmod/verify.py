"""
Verification suites behind ``regsubmod verify``.

Each suite draws seeded instances, runs an algorithm, and checks the
inequality it is supposed to satisfy against a brute-force optimum, or
compares a reproduced table row with its reference value. A suite returns
one ``Check`` per assertion; ``run_suites`` raises ``VerificationError``
listing every failed check.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bench import brute_force_opt, random_cut, random_dicut
from .config import CgConfig, SolverConfig
from .contgreedy import cg_trajectory, pipeline_0280, pipeline_nonneg_csm, pipeline_nonpos, pipeline_unconstrained
from .core import DirectedCut, Instance, LinearFn, SubmodularFn, multilinear_exact
from .cutlp import dicut_lp_expectation, dicut_vertex, directed_cut_lp, fhat_cut, is_half_integral, undirected_cut_lp
from .doublegreedy import DgStep, deterministic_dg, exact_dg_expectation
from .enums import SignMode
from .exceptions import ContractViolation, VerificationError
from .guarantees import guarantee_table
from .matroid import Polytope, Uniform
from .sgap import (
    SQRT2_TARGET,
    cardinality_0478_check,
    hyperedge_0408,
    inapprox_table,
    limit_sqrt2,
    limit_two_ln_two,
)

logger = logging.getLogger(__name__)

TOL = 1e-7
CG_SLACK = 0.03
TABLE_TOL = 1e-3
SGAP_TOL = 2e-3
VERTEX_PROBES = 20

NONPOS_ROWS = {0.7: 0.3478, 0.8: 0.3630, 0.9: 0.3757, 1.0: 0.3856, 1.1: 0.3925, 1.2: 0.3967, 1.3: 0.3982, 1.4: 0.3982}
NONNEG_COMB_ROWS = {0.85: 0.4749, 0.9: 0.4493, 0.95: 0.4226, 1.0: 0.3856}
INAPPROX_NONPOS_ROWS = {0.1: 0.0935, 0.6: 0.3846, 1.0: 0.4773}
INAPPROX_UNCONSTRAINED_ROWS = {0.8: 0.4295, 1.0: 0.4392}

# (α, β) targets for the pipelines, α lowered by the discretization slack
NONPOS_LINE = (0.35, 1.0)
UNCONSTRAINED_LINE = (1.0 / (math.e + 1.0) - 0.05, math.e / (math.e + 1.0))
NONNEG_CSM_LINE = (1.0 / math.e - 0.05, 1.0 - 1.0 / math.e)
LINE_0280 = (0.24, 0.7)


@dataclass(frozen=True)
class Check:
    """One verified assertion."""

    name: str
    passed: bool
    detail: str = ""


def _at_least(name: str, value: float, bound: float, tol: float = TOL) -> Check:
    return Check(name, value >= bound - tol, f"{value:.6f} >= {bound:.6f}")


def _close(name: str, value: float, target: float, tol: float) -> Check:
    return Check(name, abs(value - target) <= tol, f"{value:.4f} vs {target:.4f} (±{tol:g})")


def dg_invariants(cases: int, seed: int, cfg: SolverConfig) -> List[Check]:
    """Double greedy guarantees and trace invariants on random ℓ ≥ 0 dicuts."""
    checks: List[Check] = []
    for i in range(cases):
        n = 2 + i % 9
        r = (1.0, 2.0, 4.0)[i % 3]
        inst = random_dicut(n, ell_dist="nonneg", seed=seed + i)
        f, ell = inst.f, inst.ell
        opt, _ = brute_force_opt(f, ell)
        f_opt, ell_opt = f.value(opt), ell.value(opt)
        tag = f"case{i}(n={n},r={r:g})"

        X, trace = deterministic_dg(f, ell, r)
        value = f.value(X) + ell.value(X)
        denom = r + 1.0 + 1.0 / r
        checks.append(_at_least(f"{tag}/det-line", value, f_opt / denom + (r + 1.0) / denom * ell_opt))
        checks.append(_at_least(f"{tag}/det-ell", value, ell_opt))
        checks.append(Check(f"{tag}/nesting", trace.check_nesting(n)))
        checks.append(Check(f"{tag}/gain-order", all(s.gain_x - s.gain_y >= -TOL for s in trace.steps)))
        checks.append(Check(f"{tag}/per-step", _per_step_holds(f, ell, opt, trace.steps, r)))

        expectation = exact_dg_expectation(f, ell)
        denom = r + 2.0 + 1.0 / r
        checks.append(
            _at_least(f"{tag}/rand-line", expectation, 2.0 / denom * f_opt + (r + 2.0) / denom * ell_opt)
        )
    return checks


def _per_step_holds(f: SubmodularFn, ell: LinearFn, opt: frozenset, steps: Sequence[DgStep], r: float) -> bool:
    """g(OPT_{i−1}) − g(OPT_i) ≤ (g(X_i) − g(X_{i−1}))/r + r(g(Y_i) − g(Y_{i−1})) along the trace."""

    def g(S: frozenset) -> float:
        return f.value(S) + ell.value(S)

    X: frozenset = frozenset()
    Y = frozenset(range(f.n))
    for step in steps:
        X_next = X | {step.element} if step.keep else X
        Y_next = Y if step.keep else Y - {step.element}
        loss = g((opt | X) & Y) - g((opt | X_next) & Y_next)
        if loss > (g(X_next) - g(X)) / r + r * (g(Y_next) - g(Y)) + TOL:
            return False
        X, Y = X_next, Y_next
    return True


def cg_trajectory_suite(cases: int, seed: int, cfg: SolverConfig) -> List[Check]:
    """Feasibility, monotonicity and the coordinate cap along measured continuous greedy runs."""
    checks: List[Check] = []
    for i in range(cases):
        n = 4 + i % 5
        constraint = Uniform(n, 1 + i % (n - 1)) if i % 2 else None
        inst = random_dicut(n, ell_dist="zero", seed=seed + i, constraint=constraint)
        p = Polytope.of(n, constraint)
        run = CgConfig.from_solver(cfg, t_s=0.0, t_f=1.0, f=inst.f)
        path = cg_trajectory(inst.f, inst.ell, p, run)
        distorted = cg_trajectory(inst.f, inst.ell, p, run, distorted=True)
        tag = f"case{i}(n={n})"

        coords = np.array([y.coords for y in path])
        caps = 1.0 - (1.0 - run.delta) ** np.arange(len(path))
        checks.append(Check(f"{tag}/monotone", bool(np.all(np.diff(coords, axis=0) >= -TOL))))
        checks.append(Check(f"{tag}/coordinate-cap", bool(np.all(coords <= caps[:, None] + TOL))))
        feasible = all(p.scaled(k * run.delta).contains(coords[k]) for k in range(1, len(path)))
        checks.append(Check(f"{tag}/feasible", feasible))
        checks.append(Check(f"{tag}/distortion-free", bool(np.allclose(coords, [y.coords for y in distorted]))))
        if constraint is None:
            _, f_opt = brute_force_opt(inst.f, inst.ell)
            value = multilinear_exact(inst.f, coords[-1])
            checks.append(_at_least(f"{tag}/value", value, (1.0 / math.e - CG_SLACK) * f_opt))
    return checks


def cutlp_suite(cases: int, seed: int, cfg: SolverConfig) -> List[Check]:
    """Both cut LP algorithms against ½f(S) + ℓ(S), plus dicut vertex half-integrality."""
    checks: List[Check] = []
    rng = np.random.default_rng(seed)
    for i in range(cases):
        n = 3 + i % 6
        tag = f"case{i}(n={n})"

        k = 1 + i % (n - 1)
        inst = random_cut(n, seed=seed + i, constraint=Uniform(n, k))
        x, _ = undirected_cut_lp(inst.f, inst.ell, Polytope.of(n, inst.constraint), seed + i)
        _, target = brute_force_opt(inst.f, inst.ell, inst.constraint, alpha=0.5)
        relaxed = multilinear_exact(inst.f, x.coords)
        checks.append(_at_least(f"{tag}/cut-relax", relaxed, 0.5 * fhat_cut(inst.f, x.coords)))
        checks.append(_at_least(f"{tag}/cut-lp", relaxed + inst.ell.at(x), target))

        inst = random_dicut(n, seed=seed + i)
        dicut = inst.f
        assert isinstance(dicut, DirectedCut)
        x, _ = directed_cut_lp(dicut, inst.ell, seed + i)
        _, target = brute_force_opt(dicut, inst.ell, alpha=0.5)
        checks.append(_at_least(f"{tag}/dicut-lp", dicut_lp_expectation(dicut, inst.ell, x), target))
        m = len(dicut.edges)
        probes = [
            is_half_integral(dicut_vertex(dicut, rng.normal(size=n), rng.normal(size=m))[0])
            for _ in range(VERTEX_PROBES)
        ]
        checks.append(Check(f"{tag}/half-integral", all(probes), f"{sum(probes)}/{len(probes)} probes"))
    return checks


def _meets_line(name: str, inst: Instance, value: float, line: Tuple[float, float]) -> Check:
    alpha, beta = line
    _, target = brute_force_opt(inst.f, inst.ell, inst.constraint, alpha, beta)
    return _at_least(name, value, target)


def pipelines_suite(cases: int, seed: int, cfg: SolverConfig) -> List[Check]:
    """The composite pipelines against the (α, β) lines they guarantee, with discretization slack."""
    checks: List[Check] = []
    for i in range(cases):
        n = 4 + i % 5
        s = seed + i
        m = Uniform(n, (n + 1) // 2)
        tag = f"case{i}(n={n})"

        inst = random_dicut(n, ell_dist="nonpos", seed=s, constraint=m if i % 2 else None)
        result = pipeline_nonpos(inst.f, inst.ell, inst.constraint, beta=1.0, cfg=cfg)
        checks.append(_meets_line(f"{tag}/nonpos", inst, result.value, NONPOS_LINE))

        inst = random_dicut(n, ell_dist="mixed", seed=s)
        result = pipeline_unconstrained(inst.f, inst.ell, t=1.0, cfg=cfg)
        checks.append(_meets_line(f"{tag}/unconstrained", inst, result.value, UNCONSTRAINED_LINE))

        inst = random_dicut(n, ell_dist="nonneg", seed=s, constraint=m)
        result = pipeline_nonneg_csm(inst.f, inst.ell, m, cfg)
        checks.append(_meets_line(f"{tag}/nonneg-csm", inst, result.value, NONNEG_CSM_LINE))

        inst = random_dicut(n, ell_dist="mixed", seed=s, constraint=m)
        result = pipeline_0280(inst.f, inst.ell, m, cfg)
        checks.append(_meets_line(f"{tag}/0280", inst, result.value, LINE_0280))
    return checks


def tables_suite(cases: int, seed: int, cfg: SolverConfig) -> List[Check]:
    """Reference rows of the guarantee LP tables."""
    checks: List[Check] = []
    for name, rows in (("nonpos", NONPOS_ROWS), ("nonneg-comb", NONNEG_COMB_ROWS)):
        solved = guarantee_table(name, list(rows), cfg.threads, cfg.show_progress)
        for (beta, target), sol in zip(rows.items(), solved):
            checks.append(_close(f"{name}@{beta:g}", sol.alpha, target, TABLE_TOL))
    csm = guarantee_table("nonneg-csm", [1.0 - 1.0 / math.e], cfg.threads)[0]
    checks.append(_at_least("nonneg-csm@1-1/e", csm.alpha, 1.0 / math.e, TABLE_TOL))
    mixed = guarantee_table("unconstrained-0280", [0.7], cfg.threads)[0]
    checks.append(_at_least("unconstrained-0280@0.7", mixed.alpha, 0.280, TABLE_TOL))
    return checks


def sgap_tables_suite(cases: int, seed: int, cfg: SolverConfig) -> List[Check]:
    """Reference rows of the symmetry-gap searches."""
    checks: List[Check] = []
    for mode, rows in (
        (SignMode.NONPOS, INAPPROX_NONPOS_ROWS),
        (SignMode.UNCONSTRAINED, INAPPROX_UNCONSTRAINED_ROWS),
    ):
        solved = inapprox_table(list(rows), mode, cfg.threads, cfg.show_progress)
        for (beta, target), (alpha, _) in zip(rows.items(), solved):
            checks.append(_close(f"inapprox-{mode}@{beta:g}", alpha, target, SGAP_TOL))
    return checks


def limits_suite(cases: int, seed: int, cfg: SolverConfig) -> List[Check]:
    """Limit schedules and the fixed-construction checks."""
    two_ln_two = limit_two_ln_two()
    sqrt2 = limit_sqrt2()
    hyper = hyperedge_0408()
    cardinality = cardinality_0478_check()
    return [
        Check("2ln2/verified", all(pt.verified for pt in two_ln_two)),
        _at_least("2ln2/beta", two_ln_two[-1].beta, 1.376, 0.0),
        Check("sqrt2/verified", all(pt.verified for pt in sqrt2)),
        Check("sqrt2/beta", SQRT2_TARGET <= sqrt2[-1].beta <= 0.9434, f"{sqrt2[-1].beta:.6f}"),
        Check("0408/holds", hyper.holds, f"max={hyper.max_value:.3e}"),
        _close("0408/alpha", hyper.alpha_bound, 0.4074, 1e-4),
        Check("0478/cardinality", cardinality < 0.478, f"{cardinality:.6f}"),
    ]


SUITES: Dict[str, Callable[[int, int, SolverConfig], List[Check]]] = {
    "dg-invariants": dg_invariants,
    "cg-trajectory": cg_trajectory_suite,
    "cutlp": cutlp_suite,
    "pipelines": pipelines_suite,
    "tables": tables_suite,
    "sgap-tables": sgap_tables_suite,
    "limits": limits_suite,
}

DEFAULT_CASES = {
    "dg-invariants": 200,
    "cg-trajectory": 20,
    "cutlp": 100,
    "pipelines": 50,
    "tables": 1,
    "sgap-tables": 1,
    "limits": 1,
}


def run_suites(
    names: Sequence[str],
    cases: Optional[int] = None,
    seed: int = 0,
    cfg: Optional[SolverConfig] = None,
    strict: bool = True,
) -> List[Check]:
    """
    Run suites by name.

    Args:
        names: Suite names from ``SUITES``.
        cases: Random cases per suite; each suite's default when None.
        seed: Base seed; case i uses seed + i.
        cfg: Shared configuration (steps, threads).
        strict: Raise when a check fails; otherwise failed checks are
            returned alongside the passed ones.

    Returns:
        Every check; all of them passed when ``strict``.

    Raises:
        ContractViolation: If a suite name is unknown.
        VerificationError: If any check failed and ``strict`` is set.
    """
    cfg = cfg or SolverConfig()
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ContractViolation(f"Unknown suite(s) {', '.join(unknown)}. Valid: {', '.join(SUITES)}")
    checks: List[Check] = []
    for name in names:
        count = DEFAULT_CASES[name] if cases is None else cases
        results = SUITES[name](count, seed, cfg)
        failed = sum(not c.passed for c in results)
        logger.info(f"suite {name}: {len(results) - failed}/{len(results)} checks passed")
        checks.extend(Check(f"{name}:{c.name}", c.passed, c.detail) for c in results)
    failed_names = [c.name for c in checks if not c.passed]
    for c in checks:
        if not c.passed:
            logger.error(f"FAILED {c.name}: {c.detail}")
    if failed_names and strict:
        raise VerificationError(f"{len(failed_names)} of {len(checks)} checks failed", failed_names)
    return checks
