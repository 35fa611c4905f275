from dataclasses import dataclass
from typing import Any, Optional

from .basic_utils.base_config import BaseConfig
from .enums import MarginalMode
from .exceptions import ConfigurationError


@dataclass(kw_only=True)
class SolverConfig(BaseConfig):
    """
    Configuration shared by the solver facade, the table sweeps and the CLI.

    Configuration priority (high to low):
        1. Explicit parameters passed to methods / CLI flags
        2. Explicit parameters passed to ``Solver.__init__``
        3. Environment variables
        4. Default values

    Environment Variables:
        REGSUBMOD_THREADS: Worker threads for candidate runs and sweeps
        REGSUBMOD_SEED: Default RNG seed
        REGSUBMOD_STEPS: Continuous greedy discretization steps
        REGSUBMOD_EPS: Resolution of the ℓ(OPT) guessing grid
        REGSUBMOD_SAMPLES: Samples per coordinate for sampled gradients
        REGSUBMOD_ENABLE_LOG: Write a log file under ./regsubmod-logs
        REGSUBMOD_LOG_LEVEL: Level for stderr logging in the CLI
        REGSUBMOD_SHOW_PROGRESS: Show tqdm progress bars on sweeps

    Attributes:
        steps: Number of continuous greedy steps (δ = t_f/steps).
        eps: Guessing grid resolution ε.
        samples: Samples per coordinate when gradients are sampled.
        exact_gradient_max_n: Largest n for which exact gradients are used
            on set functions without a closed form.
        local_search_tol: Relative improvement threshold of local search
            (divided by n).
        local_search_max_iter: Iteration cap per element for local search.
        show_progress: Show tqdm progress bars.
    """

    steps: int = 200
    eps: float = 0.5
    samples: int = 2000
    exact_gradient_max_n: int = 14
    local_search_tol: float = 1e-4
    local_search_max_iter: int = 100_000
    show_progress: bool = False

    @classmethod
    def from_env(cls, **overrides: Any) -> "SolverConfig":
        """
        Create configuration from environment variables.

        Args:
            **overrides: Override specific configuration values; None
                values are ignored.

        Returns:
            SolverConfig instance.

        Raises:
            ConfigurationError: If a value is missing or invalid.

        Example:
            >>> config = SolverConfig.from_env(threads=4)
        """
        get_env = BaseConfig._get_env

        env_config = {
            "threads": get_env("REGSUBMOD_THREADS", type_func=int),
            "seed": get_env("REGSUBMOD_SEED", type_func=int),
            "steps": get_env("REGSUBMOD_STEPS", type_func=int),
            "eps": get_env("REGSUBMOD_EPS", type_func=float),
            "samples": get_env("REGSUBMOD_SAMPLES", type_func=int),
            "enable_log": get_env("REGSUBMOD_ENABLE_LOG", type_func=bool),
            "log_level": get_env("REGSUBMOD_LOG_LEVEL"),
            "show_progress": get_env("REGSUBMOD_SHOW_PROGRESS", type_func=bool),
        }

        # 环境变量里没有指定的项，使用默认值；显式传入的参数优先
        env_config = BaseConfig._filter_none_values(env_config)
        env_config.update(BaseConfig._filter_none_values(overrides))

        return cls(**env_config)

    def __post_init__(self) -> None:
        super().__post_init__()

        if self.steps <= 0:
            raise ConfigurationError(f"steps must be positive. Got: {self.steps}")
        if self.eps <= 0:
            raise ConfigurationError(f"eps must be positive. Got: {self.eps}")
        if self.samples <= 0:
            raise ConfigurationError(f"samples must be positive. Got: {self.samples}")
        if not 1 <= self.exact_gradient_max_n <= 24:
            raise ConfigurationError(
                f"exact_gradient_max_n must be in [1, 24]. Got: {self.exact_gradient_max_n}"
            )
        if self.local_search_tol <= 0:
            raise ConfigurationError(
                f"local_search_tol must be positive. Got: {self.local_search_tol}"
            )
        if self.local_search_max_iter <= 0:
            raise ConfigurationError(
                f"local_search_max_iter must be positive. Got: {self.local_search_max_iter}"
            )


@dataclass(frozen=True)
class CgConfig:
    """
    Parameters of one continuous greedy run.

    Attributes:
        t_s: Switch time; the aided variants avoid the helper point's
            support on [0, t_s).
        t_f: Final time.
        steps: Number of discretization steps, δ = t_f/steps.
        marginal_mode: Exact or sampled gradients.
        samples: Samples per coordinate in sampled mode.
        seed: RNG seed for sampled gradients.
    """

    t_s: float = 0.0
    t_f: float = 1.0
    steps: int = 200
    marginal_mode: MarginalMode = MarginalMode.EXACT
    samples: int = 2000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.t_s < 0:
            raise ConfigurationError(f"t_s must be non-negative. Got: {self.t_s}")
        if self.t_f < self.t_s:
            raise ConfigurationError(f"t_f must be at least t_s. Got: t_s={self.t_s}, t_f={self.t_f}")
        if self.t_f <= 0:
            raise ConfigurationError(f"t_f must be positive. Got: {self.t_f}")
        if self.steps <= 0:
            raise ConfigurationError(f"steps must be positive. Got: {self.steps}")
        if self.samples <= 0:
            raise ConfigurationError(f"samples must be positive. Got: {self.samples}")

    @property
    def delta(self) -> float:
        """Step length δ."""
        return self.t_f / self.steps

    @classmethod
    def from_solver(
        cls,
        cfg: SolverConfig,
        t_s: float = 0.0,
        t_f: float = 1.0,
        f: Optional[Any] = None,
    ) -> "CgConfig":
        """
        Build a run configuration from the shared solver configuration.

        Gradients are exact unless ``f`` lacks a closed-form extension and
        its ground set exceeds ``cfg.exact_gradient_max_n``.
        """
        mode = MarginalMode.EXACT
        if f is not None and not f.has_closed_form and f.n > cfg.exact_gradient_max_n:
            mode = MarginalMode.SAMPLED
        return cls(
            t_s=t_s,
            t_f=t_f,
            steps=cfg.steps,
            marginal_mode=mode,
            samples=cfg.samples,
            seed=cfg.seed,
        )
