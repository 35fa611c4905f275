"""
Symmetry-gap numerics.

The symmetric instances used for the inapproximability results collapse to
a two-variable objective: q is the common value of the two centre
elements and p the total mass on the tails of one hyperedge,

    F̂(q, p) = (1−κ)·2q(1−q) + 2κ(1−q)(1 − (1−p/k)^k)

with the k → ∞ form replacing (1−p/k)^k by e^{−p}. With ℓ_p on every
tail and ℓ_q on the centre elements, showing (α, β)-inapproximability
reduces to

    α(β) = min_{κ, ℓ_p, ℓ_q} [ max_{q, p} F̂(q, p) + 2pℓ_p + 2qℓ_q ] − β(ℓ_p + ℓ_q).

The inner maximum over q is a clamped parabola vertex, so only p is
searched numerically. The outer objective is a maximum of functions that
are affine in (κ, ℓ_p, ℓ_q), hence convex, and a coarse grid followed by
a local simplex refinement finds its minimum.

Example:
    >>> alpha, params = outer_min(1.0, SignMode.NONPOS)
    >>> round(alpha, 3)
    0.477
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from .basic_utils.parallel import map_threaded
from .enums import SignMode
from .exceptions import ContractViolation

logger = logging.getLogger(__name__)

P_MAX = 5.0
INNER_P_STEP = 1e-4
TWO_LN_TWO = 2.0 * math.log(2.0)
SQRT2_TARGET = 2.0 * math.sqrt(2.0) / 3.0
HYPEREDGE_COEF = 0.2037
CARDINALITY_KAPPA = 0.3513
CARDINALITY_BOUND = 0.478
NONNEG_0478_PARAMS = (0.3515, -0.1294, 0.0)


@dataclass(frozen=True)
class SgapParams:
    """
    One member of the symmetric instance family.

    Attributes:
        kappa: Weight of the two directed hyperedges; the centre edge has 1−κ.
        ell_p: Linear weight on every hyperedge tail.
        ell_q: Linear weight on the two centre elements.
        beta: Target β the parameters were chosen for.
        p_max: Upper end of the p search range.
    """

    kappa: float
    ell_p: float
    ell_q: float
    beta: float = 1.0
    p_max: float = P_MAX

    def __post_init__(self) -> None:
        if not 0.0 <= self.kappa <= 1.0:
            raise ContractViolation(f"kappa must lie in [0,1]. Got: {self.kappa}")
        if self.beta < 0:
            raise ContractViolation(f"beta must be non-negative. Got: {self.beta}")
        if self.p_max < TWO_LN_TWO + 1.0:
            raise ContractViolation(f"p_max must be at least 2ln2+1. Got: {self.p_max}")
        if not (math.isfinite(self.ell_p) and math.isfinite(self.ell_q)):
            raise ContractViolation("ell_p and ell_q must be finite")

    def alpha(self) -> float:
        """max F̂ + L at these parameters minus β(ℓ_p+ℓ_q)."""
        value, _ = inner_max(self.kappa, self.ell_p, self.ell_q, self.p_max)
        return value - self.beta * (self.ell_p + self.ell_q)


@dataclass(frozen=True)
class SearchGrid:
    """
    Resolution of the outer parameter search.

    The coarse pass scans κ, ℓ_p, ℓ_q at ``coarse_step`` with p sampled at
    ``coarse_p_step``; the best ``starts`` grid points are then refined
    until the simplex is smaller than ``refine_tol``.
    """

    coarse_step: float = 0.01
    coarse_p_step: float = 0.02
    ell_p_range: Tuple[float, float] = (-1.0, 0.0)
    ell_q_min: float = -0.7
    ell_q_max_unconstrained: float = 0.7
    refine_tol: float = 1e-4
    starts: int = 3
    p_max: float = P_MAX

    def __post_init__(self) -> None:
        if min(self.coarse_step, self.coarse_p_step, self.refine_tol) <= 0:
            raise ContractViolation("Grid resolutions must be positive")
        if self.starts < 1:
            raise ContractViolation(f"starts must be at least 1. Got: {self.starts}")
        if self.ell_p_range[0] > self.ell_p_range[1]:
            raise ContractViolation(f"Empty ell_p range: {self.ell_p_range}")

    def ell_q_range(self, sign_mode: SignMode) -> Tuple[float, float]:
        upper = 0.0 if sign_mode is SignMode.NONPOS else self.ell_q_max_unconstrained
        return self.ell_q_min, upper


def _tail_mass(p: np.ndarray, k: Optional[int]) -> np.ndarray:
    """1 − (1−p/k)^k, or 1 − e^{−p} for k = None."""
    if k is None:
        return -np.expm1(-p)
    return 1.0 - (1.0 - p / k) ** k


def fhat(q: float, p: float, kappa: float, k: Optional[int] = None) -> float:
    """
    Symmetrized objective F̂(q, p).

    Args:
        q: Centre coordinate, in [0, 1].
        p: Tail mass, p ≥ 0 and p ≤ k for finite k.
        kappa: Hyperedge weight.
        k: Number of tails per hyperedge; None for the k → ∞ limit.

    Raises:
        ContractViolation: If an argument is outside its domain.
    """
    if not 0.0 <= q <= 1.0:
        raise ContractViolation(f"q must lie in [0,1]. Got: {q}")
    if p < 0 or (k is not None and p > k):
        raise ContractViolation(f"p must lie in [0, {k if k is not None else '∞'}]. Got: {p}")
    if k is not None and k < 1:
        raise ContractViolation(f"k must be positive. Got: {k}")
    tail = float(_tail_mass(np.array(p, dtype=float), k))
    return (1.0 - kappa) * 2.0 * q * (1.0 - q) + 2.0 * kappa * (1.0 - q) * tail


def _best_q_part(kappa: float, ell_q: np.ndarray, tail: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    max over q ∈ [0,1] of −2(1−κ)q² + 2q·B with B = (1−κ) − κ·tail + ℓ_q.

    Broadcasts ℓ_q against tail. Returns (value, q*).
    """
    b = (1.0 - kappa) - kappa * tail + ell_q
    curvature = 2.0 * (1.0 - kappa)
    if curvature > 0:
        q = np.clip(b / curvature, 0.0, 1.0)
    else:
        q = (b > 0).astype(float)
    return -curvature * q * q + 2.0 * q * b, q


def _objective_in_p(kappa: float, ell_p: float, ell_q: float, k: Optional[int]):
    def value(p: np.ndarray) -> np.ndarray:
        tail = _tail_mass(p, k)
        q_part, _ = _best_q_part(kappa, np.asarray(ell_q, dtype=float), tail)
        return q_part + 2.0 * kappa * tail + 2.0 * p * ell_p

    return value


def inner_max(
    kappa: float,
    ell_p: float,
    ell_q: float,
    p_max: float = P_MAX,
    k: Optional[int] = None,
    p_step: float = INNER_P_STEP,
) -> Tuple[float, Tuple[float, float]]:
    """
    max over q ∈ [0,1], p ∈ [0, p_max] of F̂(q, p) + 2pℓ_p + 2qℓ_q.

    p is scanned at ``p_step`` and the best grid point is polished with a
    bounded golden-section search on its two neighbouring cells.

    Returns:
        (value, (q*, p*)).
    """
    if p_max <= 0:
        raise ContractViolation(f"p_max must be positive. Got: {p_max}")
    upper = p_max if k is None else min(p_max, float(k))
    value = _objective_in_p(kappa, ell_p, ell_q, k)
    grid = np.linspace(0.0, upper, max(int(round(upper / p_step)), 1) + 1)
    scores = value(grid)
    i = int(np.argmax(scores))
    best_p, best = float(grid[i]), float(scores[i])
    lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, grid.size - 1)])
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda p: -float(value(np.array(p))), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
        )
        if -res.fun > best:
            best_p, best = float(res.x), float(-res.fun)
    tail = _tail_mass(np.array(best_p), k)
    _, q = _best_q_part(kappa, np.asarray(ell_q, dtype=float), tail)
    return best, (float(q), best_p)


def _coarse_search(beta: float, sign_mode: SignMode, grid: SearchGrid) -> List[Tuple[float, float, float, float]]:
    """Vectorized scan; returns the ``grid.starts`` best (score, κ, ℓ_p, ℓ_q)."""
    step = grid.coarse_step
    kappas = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    lo, hi = grid.ell_p_range
    ell_ps = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    qlo, qhi = grid.ell_q_range(sign_mode)
    ell_qs = np.linspace(qlo, qhi, int(round((qhi - qlo) / step)) + 1)
    ps = np.linspace(0.0, grid.p_max, int(round(grid.p_max / grid.coarse_p_step)) + 1)
    tail = _tail_mass(ps, None)
    found: List[Tuple[float, float, float, float]] = []
    for kappa in kappas:
        q_part, _ = _best_q_part(float(kappa), ell_qs[:, None], tail[None, :])
        p_part = 2.0 * kappa * tail[None, :] + 2.0 * ps[None, :] * ell_ps[:, None]
        inner = np.max(q_part[None, :, :] + p_part[:, None, :], axis=2)
        scores = inner - beta * (ell_ps[:, None] + ell_qs[None, :])
        flat = np.argsort(scores, axis=None)[: grid.starts]
        for idx in flat:
            a, b = np.unravel_index(idx, scores.shape)
            found.append((float(scores[a, b]), float(kappa), float(ell_ps[a]), float(ell_qs[b])))
    found.sort()
    return found[: grid.starts]


def outer_min(
    beta: float,
    sign_mode: SignMode = SignMode.NONPOS,
    grid: Optional[SearchGrid] = None,
) -> Tuple[float, SgapParams]:
    """
    Smallest α for which the symmetric family certifies (α, β)-inapproximability.

    Args:
        beta: Target β ≥ 0.
        sign_mode: NONPOS restricts ℓ_q ≤ 0; UNCONSTRAINED lets it take either sign.
        grid: Search resolution; defaults to ``SearchGrid()``.

    Returns:
        (α(β), best parameters).
    """
    if beta < 0:
        raise ContractViolation(f"beta must be non-negative. Got: {beta}")
    grid = grid or SearchGrid()
    qlo, qhi = grid.ell_q_range(sign_mode)
    bounds = [(0.0, 1.0), grid.ell_p_range, (qlo, qhi)]

    def score(theta: np.ndarray) -> float:
        kappa, ell_p, ell_q = (float(np.clip(v, lo, hi)) for v, (lo, hi) in zip(theta, bounds))
        value, _ = inner_max(kappa, ell_p, ell_q, grid.p_max)
        return value - beta * (ell_p + ell_q)

    best_value, best_theta = math.inf, np.zeros(3)
    for _, kappa, ell_p, ell_q in _coarse_search(beta, sign_mode, grid):
        start = np.array([kappa, ell_p, ell_q])
        start_value = score(start)
        res = optimize.minimize(
            score,
            start,
            method="Nelder-Mead",
            bounds=bounds,
            options={"xatol": grid.refine_tol, "fatol": 1e-9, "initial_simplex": _simplex(start, bounds, grid)},
        )
        value, theta = (float(res.fun), res.x) if res.fun < start_value else (start_value, start)
        if value < best_value:
            best_value, best_theta = value, theta
    kappa, ell_p, ell_q = (float(np.clip(v, lo, hi)) for v, (lo, hi) in zip(best_theta, bounds))
    params = SgapParams(kappa, ell_p, ell_q, beta=beta, p_max=grid.p_max)
    logger.info(
        f"outer_min β={beta} ({sign_mode}): α={best_value:.4f} at "
        f"κ={kappa:.4f}, ℓ_p={ell_p:.4f}, ℓ_q={ell_q:.4f}"
    )
    return best_value, params


def _simplex(start: np.ndarray, bounds: Sequence[Tuple[float, float]], grid: SearchGrid) -> np.ndarray:
    """Initial simplex of one coarse cell around the start, kept inside the bounds."""
    vertices = [start.copy()]
    for i, (lo, hi) in enumerate(bounds):
        v = start.copy()
        v[i] = start[i] + grid.coarse_step if start[i] + grid.coarse_step <= hi else start[i] - grid.coarse_step
        v[i] = min(max(v[i], lo), hi)
        vertices.append(v)
    return np.array(vertices)


def inapprox_table(
    betas: Sequence[float],
    sign_mode: SignMode = SignMode.NONPOS,
    threads: int = 1,
    show_progress: bool = False,
    grid: Optional[SearchGrid] = None,
) -> List[Tuple[float, SgapParams]]:
    """outer_min for every β, in input order."""
    rows = map_threaded(
        lambda beta: outer_min(beta, sign_mode, grid),
        list(betas),
        threads,
        desc=f"sgap {sign_mode}" if show_progress else None,
    )
    return rows


@dataclass(frozen=True)
class LimitPoint:
    """
    One point of a limit schedule.

    Attributes:
        p_star: Where the chosen ℓ_p places the optimum in p.
        kappa: Hyperedge weight.
        ell_p: The ℓ_p derived from the stationarity condition at p_star.
        beta: The β this point certifies.
        verified: Whether a grid scan confirms the optimum sits at p_star.
    """

    p_star: float
    kappa: float
    ell_p: float
    beta: float
    verified: bool


def h_value(p: np.ndarray, kappa: float) -> np.ndarray:
    """h(p) = (κ(2e^{−p}−1) − κ²e^{−2p}) / (4(1−κ))."""
    p = np.asarray(p, dtype=float)
    return (kappa * (2.0 * np.exp(-p) - 1.0) - kappa**2 * np.exp(-2.0 * p)) / (4.0 * (1.0 - kappa))


def h_derivative(p: np.ndarray, kappa: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return (-2.0 * kappa * np.exp(-p) + 2.0 * kappa**2 * np.exp(-2.0 * p)) / (4.0 * (1.0 - kappa))


def h_second_derivative(p: np.ndarray, kappa: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return (2.0 * kappa * np.exp(-p) - 4.0 * kappa**2 * np.exp(-2.0 * p)) / (4.0 * (1.0 - kappa))


def two_ln_two_point(p_star: float, kappa: float, p_max: float = P_MAX) -> LimitPoint:
    """
    β certified for α = 0.5 with ℓ_q = 0 when ℓ_p = h′(p*).

    β = 2(h(p*) − p*ℓ_p)/(−ℓ_p); valid when p* minimizes h(p) − pℓ_p.
    """
    if not 0.0 < kappa < 0.5:
        raise ContractViolation(f"kappa must lie in (0, 0.5). Got: {kappa}")
    if p_star <= 0:
        raise ContractViolation(f"p_star must be positive. Got: {p_star}")
    ell_p = float(h_derivative(p_star, kappa))
    at_star = float(h_value(p_star, kappa)) - p_star * ell_p
    grid = np.linspace(0.0, p_max, 50_001)
    verified = bool(np.min(h_value(grid, kappa) - grid * ell_p) >= at_star - 1e-12)
    beta = 2.0 * at_star / (-ell_p)
    return LimitPoint(p_star, kappa, ell_p, beta, verified)


def limit_two_ln_two(schedule: Optional[Sequence[Tuple[float, float]]] = None) -> List[LimitPoint]:
    """
    Walk p* ↑ ln2, κ ↓ 0; the certified β approaches 2ln2.

    Args:
        schedule: (p*, κ) pairs; defaults to a schedule ending at
            (ln2 − 10^{−3}, 10^{−4}).
    """
    ln2 = math.log(2.0)
    if schedule is None:
        schedule = ((0.5, 1e-2), (0.6, 1e-3), (ln2 - 1e-2, 1e-3), (ln2 - 1e-3, 1e-4))
    points = [two_ln_two_point(p, kappa) for p, kappa in schedule]
    for pt in points:
        logger.debug(f"2ln2 schedule: p*={pt.p_star:.6f} κ={pt.kappa:g} β={pt.beta:.6f}")
    return points


def _g_sqrt2(p: np.ndarray, kappa: float) -> np.ndarray:
    """max_q of F̂ at k = 2, without the linear term."""
    tail = _tail_mass(np.asarray(p, dtype=float), 2)
    b = (1.0 - kappa) - kappa * tail
    return b * b / (2.0 * (1.0 - kappa)) + 2.0 * kappa * tail


def _g_sqrt2_derivative(p: float, kappa: float) -> float:
    tail = float(_tail_mass(np.array(p), 2))
    d_tail = 1.0 - p / 2.0
    b = (1.0 - kappa) - kappa * tail
    return d_tail * kappa * (2.0 - b / (1.0 - kappa))


def sqrt2_point(p_star: float, kappa: float = 1e-3) -> LimitPoint:
    """
    β = (4 − 2p*)/3 certified for α = 0.5 with non-negative ℓ and k = 2.

    ℓ_p = g′(p*)/2 puts the maximum of g(p) − 2pℓ_p at p*; the point is
    verified when that maximum stays below 0.5 − 2p*ℓ_p.
    """
    if not 0.0 < p_star < 2.0 - math.sqrt(2.0):
        raise ContractViolation(f"p_star must lie in (0, 2−√2). Got: {p_star}")
    if not 0.0 < kappa < 0.5:
        raise ContractViolation(f"kappa must lie in (0, 0.5). Got: {kappa}")
    ell_p = _g_sqrt2_derivative(p_star, kappa) / 2.0
    grid = np.linspace(0.0, 2.0, 20_001)
    best = float(np.max(_g_sqrt2(grid, kappa) - 2.0 * grid * ell_p))
    verified = best < 0.5 - 2.0 * p_star * ell_p
    return LimitPoint(p_star, kappa, ell_p, (4.0 - 2.0 * p_star) / 3.0, verified)


def limit_sqrt2(schedule: Optional[Sequence[float]] = None, kappa: float = 1e-3) -> List[LimitPoint]:
    """Walk p* ↑ 2−√2; β decreases towards 2√2/3."""
    edge = 2.0 - math.sqrt(2.0)
    if schedule is None:
        schedule = (0.5, 0.55, edge - 1e-2, edge - 1e-4)
    return [sqrt2_point(p, kappa) for p in schedule]


@dataclass(frozen=True)
class HyperedgeCheck:
    """
    Result of the generalized-hyperedge check.

    Attributes:
        coef: The linear weight magnitude c on every element.
        max_value: max over p, q ≥ 0 of (1−e^{−p})(1−e^{−q}) − c(p+q).
        argmax: Where it is attained.
        alpha_bound: 2c; every α above it is inapproximable for β = 1.
    """

    coef: float
    max_value: float
    argmax: Tuple[float, float]
    alpha_bound: float

    @property
    def holds(self) -> bool:
        return self.max_value <= 1e-12


def hyperedge_0408(coef: float = HYPEREDGE_COEF, p_max: float = 10.0, step: float = 0.01) -> HyperedgeCheck:
    """Grid scan of (1−e^{−p})(1−e^{−q}) − c(p+q) on [0, p_max]², polished locally."""
    axis = np.linspace(0.0, p_max, int(round(p_max / step)) + 1)
    gain = -np.expm1(-axis)
    surface = gain[:, None] * gain[None, :] - coef * (axis[:, None] + axis[None, :])
    i, j = np.unravel_index(int(np.argmax(surface)), surface.shape)
    best, where = float(surface[i, j]), (float(axis[i]), float(axis[j]))
    if best < 0 or (i, j) != (0, 0):
        res = optimize.minimize(
            lambda v: -(np.expm1(-v[0]) * np.expm1(-v[1]) - coef * (v[0] + v[1])),
            np.array(where),
            method="Nelder-Mead",
            bounds=[(0.0, p_max), (0.0, p_max)],
        )
        if -res.fun > best:
            best, where = float(-res.fun), (float(res.x[0]), float(res.x[1]))
    return HyperedgeCheck(coef, best, where, 2.0 * coef)


def hyperedge_threshold(p_max: float = 10.0, step: float = 0.01) -> Tuple[float, Tuple[float, float]]:
    """
    Critical coefficient max_{p,q>0} (1−e^{−p})(1−e^{−q})/(p+q).

    The hyperedge check holds exactly for coefficients at or above it.
    """
    axis = np.linspace(step, p_max, int(round(p_max / step)))
    gain = -np.expm1(-axis)
    ratio = gain[:, None] * gain[None, :] / (axis[:, None] + axis[None, :])
    i, j = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    res = optimize.minimize(
        lambda v: -(np.expm1(-v[0]) * np.expm1(-v[1]) / (v[0] + v[1])),
        np.array([axis[i], axis[j]]),
        method="Nelder-Mead",
        bounds=[(step, p_max), (step, p_max)],
        options={"xatol": 1e-8, "fatol": 1e-12},
    )
    best = max(float(ratio[i, j]), float(-res.fun))
    return best, (float(res.x[0]), float(res.x[1]))


def csm_beta1_check(k: int, alpha: float, beta: float) -> bool:
    """
    Gap condition for k disjoint arcs under the one-tail matroid.

    The best symmetrized point is worth 1 while {a_1, b_2, ..., b_k} is
    worth α + β(k−1)/k, so the construction works iff the latter exceeds 1.
    """
    if k < 2:
        raise ContractViolation(f"k must be at least 2. Got: {k}")
    return alpha + beta * (k - 1) / k > 1.0


def cardinality_0478_check(kappa: float = CARDINALITY_KAPPA, t: Optional[int] = None) -> float:
    """
    max over q ∈ [0,1], p ≤ p_cap of F̂(q, p) in the k → ∞ limit.

    p_cap is ½, or (t+1)/(2t) for the cardinality version with t copies.
    The result stays below 0.478 at κ = 0.3513.
    """
    if t is not None and t < 1:
        raise ContractViolation(f"t must be positive. Got: {t}")
    p_cap = 0.5 if t is None else (t + 1) / (2.0 * t)
    value, _ = inner_max(kappa, 0.0, 0.0, p_max=p_cap)
    return value


def nonneg_0478_epsilon(k: int, params: Tuple[float, float, float] = NONNEG_0478_PARAMS) -> Tuple[float, float]:
    """
    Fixed-k report for the complemented β = 1 instance with non-negative ℓ.

    α′(k) = max F̂_k + L − (ℓ_p + ℓ_q) is the α ruled out for β = 1, and
    ε(k) = (0.478 − α′)/ℓ(OPT) with ℓ(OPT) = −((2k−1)ℓ_p + ℓ_q) turns it
    into (0.478, 1−ε).

    Returns:
        (α′(k), ε(k)).
    """
    if k < 1:
        raise ContractViolation(f"k must be positive. Got: {k}")
    kappa, ell_p, ell_q = params
    value, _ = inner_max(kappa, ell_p, ell_q, k=k)
    alpha_prime = value - (ell_p + ell_q)
    ell_opt = -((2 * k - 1) * ell_p + ell_q)
    if ell_opt <= 0:
        raise ContractViolation("The parameters must give ℓ(OPT) > 0 after complementing")
    return alpha_prime, (CARDINALITY_BOUND - alpha_prime) / ell_opt
