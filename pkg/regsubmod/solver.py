"""
Solver facade for regsubmod.

This module provides the single entry point the CLI and scripts use to run
any algorithm of the toolkit on an ``Instance``, using the shared
``SolverConfig`` for threads, seeds and discretization.
"""

import logging
import time
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Tuple, Union

from .basic_utils import BaseConfig, setup_file_logger
from .bench import brute_force_opt
from .config import CgConfig, SolverConfig
from .contgreedy import (
    TIME_TOL,
    distorted_measured_cg,
    measured_cg,
    pipeline_0280,
    pipeline_nonneg_csm,
    pipeline_nonneg_usm_beta1,
    pipeline_nonneg_usm_combined,
    pipeline_nonpos,
    pipeline_unconstrained,
    trivial_approx,
)
from .core import Instance, to_mask
from .cutlp import directed_cut_lp, undirected_cut_lp
from .doublegreedy import deterministic_dg, oblivious_dicut, randomized_dg
from .enums import Algorithm
from .exceptions import ContractViolation
from .matroid import Polytope, pipage_round

logger = logging.getLogger(__name__)

Pair = Tuple[float, float]

# Algorithms that only make sense without a matroid constraint
UNCONSTRAINED_ONLY = frozenset(
    {
        Algorithm.DETERMINISTIC_DG,
        Algorithm.RANDOMIZED_DG,
        Algorithm.OBLIVIOUS_DICUT,
        Algorithm.PIPELINE_NONNEG_USM,
        Algorithm.PIPELINE_NONNEG_USM_COMBINED,
        Algorithm.DICUT_LP,
    }
)


@dataclass
class SolveRecord:
    """
    Result record of one ``Solver.solve`` call.

    Attributes:
        algorithm: Algorithm that produced the set.
        params: Parameters the algorithm actually used.
        subset: Returned set.
        f: f(subset).
        ell: ℓ(subset).
        runtime_ms: Wall-clock time of the run.
        seed: RNG seed of the run.
        label: Winning candidate for pipelines, otherwise the algorithm name.
    """

    algorithm: Algorithm
    params: Dict[str, float]
    subset: frozenset
    f: float
    ell: float
    runtime_ms: float
    seed: int
    label: str = ""

    @property
    def total(self) -> float:
        return self.f + self.ell

    @property
    def mask(self) -> int:
        return to_mask(self.subset)

    @property
    def elements(self) -> List[int]:
        return sorted(self.subset)


class Solver:
    """
    Facade over every algorithm in the toolkit.

    Example:
        >>> from regsubmod import Solver, load_instance
        >>> solver = Solver(threads=4, seed=7)
        >>> record = solver.solve(load_instance("dicut.json"), "randomized-dg")
        >>> print(record.total)

    Attributes:
        config: SolverConfig instance containing all configuration.
    """

    def __init__(
        self,
        threads: Optional[int] = None,
        seed: Optional[int] = None,
        steps: Optional[int] = None,
        eps: Optional[float] = None,
        samples: Optional[int] = None,
        enable_log: Optional[bool] = None,
        log_level: Optional[str] = None,
        show_progress: Optional[bool] = None,
        **kwargs: Any,
    ):
        """
        Initialize the solver.

        Args:
            threads: Worker threads for candidate runs. Falls back to
                     REGSUBMOD_THREADS.
            seed: Default RNG seed.
            steps: Continuous greedy discretization steps.
            eps: Resolution of the ℓ(OPT) guessing grid.
            samples: Samples per coordinate when gradients are sampled.
            enable_log: Write a log file under ./regsubmod-logs.
            log_level: Level name for the file logger.
            show_progress: Show progress bars on long sweeps.
            **kwargs: Additional configuration parameters.

        Raises:
            ConfigurationError: If a configuration value is invalid.
        """
        # Build overrides dict from provided arguments
        overrides: Dict[str, Any] = {}
        if threads is not None:
            overrides["threads"] = threads
        if seed is not None:
            overrides["seed"] = seed
        if steps is not None:
            overrides["steps"] = steps
        if eps is not None:
            overrides["eps"] = eps
        if samples is not None:
            overrides["samples"] = samples
        if enable_log is not None:
            overrides["enable_log"] = enable_log
        if log_level is not None:
            overrides["log_level"] = log_level
        if show_progress is not None:
            overrides["show_progress"] = show_progress
        overrides.update(kwargs)

        self.config = SolverConfig.from_env(**overrides)
        self.log_file: Optional[str] = None
        if self.config.enable_log:
            self.log_file = setup_file_logger(level=self.config.log_level_value)
        logger.info(
            f"Initialized Solver with threads={self.config.threads}, seed={self.config.seed}, "
            f"steps={self.config.steps}"
        )

    def solve(
        self,
        instance: Instance,
        algo: Union[str, Algorithm],
        *,
        r: float = 1.0,
        beta: Optional[float] = None,
        alpha: float = 1.0,
        t: float = 1.0,
        ts: Optional[float] = None,
        tf: Optional[float] = None,
        eps: Optional[float] = None,
        seed: Optional[int] = None,
    ) -> SolveRecord:
        """
        Run one algorithm on an instance.

        Args:
            instance: The instance to solve.
            algo: Algorithm or its name (e.g. ``"pipeline-nonpos"``).
            r: Double greedy trade-off parameter.
            beta: β target of the pipelines, the oblivious selection
                  probability, or the ℓ weight of ``brute``.
            alpha: f weight of ``brute``.
            t: Stopping time of measured / distorted continuous greedy.
            ts: Switch time of a single aided run; needs ``tf``.
            tf: Final time of a single aided run; needs ``ts``.
            eps: Override of the guessing resolution for this call.
            seed: Override of the RNG seed for this call.

        Returns:
            SolveRecord with the set, its value split and the runtime.

        Raises:
            ContractViolation: If the algorithm does not accept this
                instance (e.g. ``dicut-lp`` with a matroid constraint).
            CapabilityError: If the instance is too large for ``brute``.
        """
        algorithm = self._resolve(algo)
        if algorithm in UNCONSTRAINED_ONLY and instance.constraint is not None:
            raise ContractViolation(f"{algorithm} does not accept a matroid constraint")
        if (ts is None) != (tf is None):
            raise ContractViolation("ts and tf must be given together")
        cfg = replace(self.config, **BaseConfig._filter_none_values({"eps": eps, "seed": seed}))
        pairs: Optional[List[Pair]] = [(float(ts), float(tf))] if ts is not None and tf is not None else None

        start = time.perf_counter()
        subset, label, params = self._dispatch(algorithm, instance, cfg, r, beta, alpha, t, pairs)
        runtime_ms = (time.perf_counter() - start) * 1000.0

        record = SolveRecord(
            algorithm=algorithm,
            params=params,
            subset=frozenset(subset),
            f=instance.f.value(subset),
            ell=instance.ell.value(subset),
            runtime_ms=runtime_ms,
            seed=cfg.seed,
            label=label or str(algorithm),
        )
        logger.info(f"{algorithm}: total={record.total:.6f} |S|={len(record.subset)} in {runtime_ms:.1f} ms")
        return record

    @staticmethod
    def _resolve(algo: Union[str, Algorithm]) -> Algorithm:
        if isinstance(algo, Algorithm):
            return algo
        try:
            return Algorithm(algo)
        except ValueError as e:
            valid = ", ".join(a.value for a in Algorithm)
            raise ContractViolation(f"Unknown algorithm {algo!r}. Valid: {valid}") from e

    def _dispatch(
        self,
        algorithm: Algorithm,
        instance: Instance,
        cfg: SolverConfig,
        r: float,
        beta: Optional[float],
        alpha: float,
        t: float,
        pairs: Optional[List[Pair]],
    ) -> Tuple[frozenset, str, Dict[str, float]]:
        f, ell, constraint = instance.f, instance.ell, instance.constraint
        p = Polytope.of(instance.n, constraint)

        if algorithm is Algorithm.DETERMINISTIC_DG:
            subset, _ = deterministic_dg(f, ell, r)
            return subset, "", {"r": r}
        if algorithm is Algorithm.RANDOMIZED_DG:
            subset, _ = randomized_dg(f, ell, rng_seed=cfg.seed)
            return subset, "", {}
        if algorithm is Algorithm.OBLIVIOUS_DICUT:
            b = 0.5 if beta is None else beta
            return oblivious_dicut(f, ell, b, cfg.seed), "", {"beta": b}
        if algorithm in (Algorithm.MEASURED_CG, Algorithm.DISTORTED_CG):
            if t <= 0:
                raise ContractViolation(f"t must be positive. Got: {t}")
            if constraint is not None and t > 1.0 + TIME_TOL:
                raise ContractViolation(f"Matroid-constrained runs need t <= 1. Got: {t}")
            run = measured_cg if algorithm is Algorithm.MEASURED_CG else distorted_measured_cg
            y = run(f, ell, p, CgConfig.from_solver(cfg, t_s=0.0, t_f=t, f=f))
            subset = pipage_round(p, f, ell, y, cfg.seed)
            return subset, "", {"t": t, "steps": float(cfg.steps)}
        if algorithm is Algorithm.PIPELINE_NONPOS:
            result = pipeline_nonpos(f, ell, constraint, beta, cfg, pairs)
            return result.subset, result.label, _pipeline_params(cfg, beta, pairs)
        if algorithm is Algorithm.PIPELINE_NONNEG_CSM:
            result = pipeline_nonneg_csm(f, ell, constraint, cfg, pairs)
            return result.subset, result.label, _pipeline_params(cfg, None, pairs)
        if algorithm is Algorithm.PIPELINE_UNCONSTRAINED:
            result = pipeline_unconstrained(f, ell, constraint, t, cfg)
            return result.subset, result.label, {"t": t, "steps": float(cfg.steps)}
        if algorithm is Algorithm.PIPELINE_0280:
            if pairs is None:
                result = pipeline_0280(f, ell, constraint, cfg)
            else:
                result = pipeline_0280(f, ell, constraint, cfg, pairs)
            return result.subset, result.label, _pipeline_params(cfg, None, pairs)
        if algorithm is Algorithm.PIPELINE_NONNEG_USM:
            b = 1.0 if beta is None else beta
            result = pipeline_nonneg_usm_beta1(f, ell, cfg, b)
            return result.subset, result.label, _pipeline_params(cfg, b, None)
        if algorithm is Algorithm.PIPELINE_NONNEG_USM_COMBINED:
            b = 0.9 if beta is None else beta
            result = pipeline_nonneg_usm_combined(f, ell, cfg, b)
            return result.subset, result.label, _pipeline_params(cfg, b, None)
        if algorithm is Algorithm.TRIVIAL:
            return trivial_approx(ell, p, cfg.seed), "", {}
        if algorithm is Algorithm.CUT_LP:
            _, subset = undirected_cut_lp(f, ell, p, cfg.seed)
            return subset, "", {}
        if algorithm is Algorithm.DICUT_LP:
            _, subset = directed_cut_lp(f, ell, cfg.seed)
            return subset, "", {}
        # Algorithm.BRUTE
        b = 1.0 if beta is None else beta
        subset, _ = brute_force_opt(f, ell, constraint, alpha, b)
        return subset, "", {"alpha": alpha, "beta": b}


def _pipeline_params(cfg: SolverConfig, beta: Optional[float], pairs: Optional[List[Pair]]) -> Dict[str, float]:
    params: Dict[str, float] = {"steps": float(cfg.steps), "eps": cfg.eps}
    if beta is not None:
        params["beta"] = beta
    if pairs:
        params["ts"], params["tf"] = pairs[0]
    return params
