"""
Continuous greedy machinery and the composite pipelines built on it.

All runs discretize time with step δ = t_f/steps and move
y ← y + δ·d∘(1−y) ("measured" updates), so y_u(t) ≤ 1−(1−δ)^{t/δ}.
A distorted run weighs the F-gain by e^{t−t_f} against ⟨d, ℓ⟩; an aided
run avoids the support of a helper point z during [0, t_s).

Pipelines return a ``SolveResult`` holding the best rounded candidate.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .basic_utils.parallel import map_threaded
from .config import CgConfig, SolverConfig
from .core import (
    FractionalPoint,
    LinearFn,
    SubmodularFn,
    complement_transform,
    multilinear_exact,
    multilinear_gradient,
    sampled_gradient,
)
from .doublegreedy import randomized_dg
from .enums import GuessMode, MarginalMode
from .exceptions import ContractViolation, StructuralError
from .guarantees import (
    DEFAULT_0280_PAIRS,
    Pair,
    nonneg_csm_pairs,
    nonneg_usm_alpha,
    nonpos_pairs,
    nonpos_witness_pairs,
)
from .matroid import Matroid, Polytope, maximize_linear, pipage_round, sample_round

logger = logging.getLogger(__name__)

TIME_TOL = 1e-12
GAP_FLOOR = 1e-9


@dataclass
class SolveResult:
    """
    Output of a pipeline.

    Attributes:
        subset: The returned set.
        value: f(subset) + ℓ(subset).
        f_value: f(subset).
        ell_value: ℓ(subset).
        label: Which candidate won, e.g. ``aided(0.35,1)@guess=-1.5``.
        candidates: Number of rounded candidates compared.
    """

    subset: frozenset
    value: float
    f_value: float
    ell_value: float
    label: str
    candidates: int = 0


@dataclass
class LocalSearchResult:
    point: FractionalPoint
    converged: bool
    iterations: int


Candidate = Tuple[frozenset, str]


def _best(f: SubmodularFn, ell: LinearFn, candidates: Sequence[Candidate]) -> SolveResult:
    """Pick the best candidate; the empty set is always among them."""
    pool = [(frozenset(), "empty-set")] + list(candidates)
    best: Optional[SolveResult] = None
    for subset, label in pool:
        fv, lv = f.value(subset), ell.value(subset)
        if best is None or fv + lv > best.value:
            best = SolveResult(subset, fv + lv, fv, lv, label)
    assert best is not None
    best.candidates = len(pool)
    logger.info(f"Best of {len(pool)} candidates: {best.label} value={best.value:.6f}")
    return best


def _check_instance(f: SubmodularFn, ell: LinearFn, p: Polytope) -> None:
    if f.n != ell.n or p.n != f.n:
        raise StructuralError("f, ℓ and the polytope must share one ground set")


def _gradient(f: SubmodularFn, y: np.ndarray, cfg: CgConfig, step: int) -> np.ndarray:
    if cfg.marginal_mode is MarginalMode.SAMPLED:
        return sampled_gradient(f, y, cfg.samples, cfg.seed + step)
    return multilinear_gradient(f, y)


def _run(
    f: SubmodularFn,
    ell: LinearFn,
    p: Polytope,
    cfg: CgConfig,
    avoid: frozenset = frozenset(),
    distorted: bool = False,
    record: bool = False,
) -> Tuple[np.ndarray, List[np.ndarray]]:
    _check_instance(f, ell, p)
    y = np.zeros(f.n)
    delta = cfg.delta
    # with ℓ ≡ 0 the distortion factor is 1 so the trajectory matches the plain run
    scaled = distorted and not ell.is_zero()
    history = [y.copy()] if record else []
    for step in range(cfg.steps):
        t = step * delta
        residual = _gradient(f, y, cfg, step) * (1.0 - y)
        weight = math.exp(t - cfg.t_f) if scaled else 1.0
        forbidden = avoid if t + TIME_TOL < cfg.t_s else frozenset()
        direction = maximize_linear(p, weight * residual + ell.weights, forbidden).coords
        y = np.clip(y + delta * direction * (1.0 - y), 0.0, 1.0)
        if record:
            history.append(y.copy())
    logger.debug(f"CG run t_s={cfg.t_s:g} t_f={cfg.t_f:g} steps={cfg.steps}: |supp y|={int(np.sum(y > 0))}")
    return y, history


def measured_cg(f: SubmodularFn, ell: LinearFn, p: Polytope, cfg: CgConfig) -> FractionalPoint:
    """
    Measured continuous greedy; the direction maximizes ⟨d, ∇F(y)∘(1−y) + ℓ⟩.

    Raises:
        InfeasibleError: If p is empty.
    """
    y, _ = _run(f, ell, p, cfg)
    return FractionalPoint(y)


def distorted_measured_cg(f: SubmodularFn, ell: LinearFn, p: Polytope, cfg: CgConfig) -> FractionalPoint:
    """Measured continuous greedy on the distorted objective e^{t−t_f}F(y) + L(y)."""
    y, _ = _run(f, ell, p, cfg, distorted=True)
    return FractionalPoint(y)


def aided_mcg(
    f: SubmodularFn,
    ell: LinearFn,
    z: FractionalPoint,
    p: Polytope,
    cfg: CgConfig,
) -> FractionalPoint:
    """
    Aided measured continuous greedy.

    Directions are held at zero on support(z) during [0, t_s), then the
    run is unrestricted until t_f. A non-zero ℓ switches to the distorted
    objective.

    Raises:
        ContractViolation: If z ∉ p.
    """
    if not p.contains(z):
        raise ContractViolation("Helper point z must lie in the polytope")
    y, _ = _run(f, ell, p, cfg, avoid=z.support(), distorted=True)
    return FractionalPoint(y)


def cg_trajectory(
    f: SubmodularFn,
    ell: LinearFn,
    p: Polytope,
    cfg: CgConfig,
    z: Optional[FractionalPoint] = None,
    distorted: bool = False,
) -> List[FractionalPoint]:
    """y(0), y(δ), ..., y(t_f) of one run, for trajectory audits."""
    avoid = z.support() if z is not None else frozenset()
    _, history = _run(f, ell, p, cfg, avoid=avoid, distorted=distorted or z is not None, record=True)
    return [FractionalPoint(y) for y in history]


def local_search(
    f: SubmodularFn,
    ell: LinearFn,
    p: Polytope,
    cfg: Optional[SolverConfig] = None,
) -> LocalSearchResult:
    """
    Fractional local search for a stationary point of F + L over p.

    Each iteration moves from z toward v = argmax_{x∈p} ⟨∇(F+L)(z), x⟩ with
    a bounded line search on [z, v]. The search stops once the first-order
    gap ⟨∇, v − z⟩ falls below (tol/n)·|F(z)+L(z)|.

    Returns:
        LocalSearchResult; ``converged`` is False when the iteration cap
        (``local_search_max_iter``·n) was hit or no ascent step was found.
    """
    cfg = cfg or SolverConfig()
    _check_instance(f, ell, p)
    n = f.n

    def objective(x: np.ndarray) -> float:
        return multilinear_exact(f, x) + float(ell.weights @ x)

    def ascent(x: np.ndarray) -> np.ndarray:
        return multilinear_gradient(f, x) + ell.weights

    z = maximize_linear(p, ascent(np.zeros(n))).coords.copy()
    value = objective(z)
    cap = cfg.local_search_max_iter * n
    for it in range(1, cap + 1):
        grad = ascent(z)
        v = maximize_linear(p, grad).coords
        d = v - z
        gap = float(grad @ d)
        if gap <= (cfg.local_search_tol / n) * max(abs(value), GAP_FLOOR):
            return LocalSearchResult(FractionalPoint(z), True, it)
        res = minimize_scalar(lambda g: -objective(z + g * d), bounds=(0.0, 1.0), method="bounded")
        gamma = float(res.x)
        if objective(z + d) >= -float(res.fun):
            gamma = 1.0
        step = np.clip(z + gamma * d, 0.0, 1.0)
        new_value = objective(step)
        if new_value <= value:
            logger.warning(f"Local search stalled at iteration {it} with gap {gap:.3e}")
            return LocalSearchResult(FractionalPoint(z), False, it)
        z, value = step, new_value
    logger.warning(f"Local search hit the iteration cap ({cap}); returning best-so-far")
    return LocalSearchResult(FractionalPoint(z), False, cap)


def guess_ell_values(ell: LinearFn, eps: float, mode: GuessMode = GuessMode.NONPOSITIVE) -> List[float]:
    """
    {0} ∪ {ℓ(u)·kε : u ∈ 𝒩, ⌈1/ε⌉ ≤ k ≤ ⌈n/ε⌉}, deduplicated, descending.

    Some value w satisfies ℓ(OPT) ≥ w ≥ (1+ε)ℓ(OPT) for every OPT. In
    negative-part mode the grid is built over ℓ_−.

    Raises:
        ContractViolation: If ε ≤ 0, or ℓ has a positive weight in
            non-positive mode.
    """
    if eps <= 0:
        raise ContractViolation(f"eps must be positive. Got: {eps}")
    if mode is GuessMode.NONPOSITIVE:
        if not ell.nonpositive():
            raise ContractViolation("Non-positive guessing needs ℓ ≤ 0")
        weights = ell.weights
    else:
        weights = ell.negative_part().weights
    k_lo = math.ceil(1.0 / eps)
    k_hi = math.ceil(ell.n / eps)
    values = {0.0}
    for w in weights:
        if w == 0:
            continue
        for k in range(k_lo, k_hi + 1):
            values.add(round(float(w) * k * eps, 12))
    return sorted(values, reverse=True)


def _guess_polytopes(p: Polytope, cut: LinearFn, guesses: Sequence[float]) -> List[Tuple[Polytope, str]]:
    """One cut polytope per guess; guesses at or below ℓ(𝒩) share the uncut run."""
    floor = float(cut.weights.sum())
    out: List[Tuple[Polytope, str]] = []
    vacuous = False
    for w in guesses:
        if w <= floor:
            vacuous = True
            continue
        out.append((p.with_cut(cut.weights, w), f"guess={w:g}"))
    if vacuous:
        out.append((p, "guess=vacuous"))
    return out


def trivial_approx(ell: LinearFn, p: Polytope, rng_seed: int = 0) -> frozenset:
    """max ⟨ℓ, x⟩ over the (uncut) polytope, rounded; exact on matroids."""
    x = maximize_linear(p.uncut(), ell.weights)
    if x.is_integral():
        return x.to_set()
    return sample_round(x, rng_seed)


def _round(p: Polytope, f: SubmodularFn, ell: LinearFn, y: FractionalPoint, seed: int) -> frozenset:
    return pipage_round(Polytope(p.n, p.base), f, ell, y, seed)


def _resolve_pairs(
    pairs: Optional[Sequence[Pair]],
    beta: Optional[float],
    csm: bool,
) -> List[Pair]:
    if pairs is not None:
        chosen = [(float(ts), float(tf)) for ts, tf in pairs]
    elif beta is not None:
        chosen = nonpos_witness_pairs(beta, csm)
    else:
        chosen = nonpos_pairs(csm)
    for ts, tf in chosen:
        if ts < 0 or tf < ts:
            raise ContractViolation(f"Invalid pair (t_s={ts}, t_f={tf})")
        if csm and tf > 1.0 + TIME_TOL:
            raise ContractViolation(f"Matroid-constrained runs need t_f <= 1. Got: {tf}")
    # t_f = 0 runs never leave the origin
    return [(ts, tf) for ts, tf in chosen if tf > 0]


def pipeline_nonpos(
    f: SubmodularFn,
    ell: LinearFn,
    constraint: Optional[Matroid] = None,
    beta: Optional[float] = None,
    cfg: Optional[SolverConfig] = None,
    pairs: Optional[Sequence[Pair]] = None,
) -> SolveResult:
    """
    Guess ℓ(OPT), then per guess run local search and aided continuous greedy
    over the pair set on P ∩ {⟨ℓ, x⟩ ≥ w}; round everything and keep the best.

    Without explicit ``pairs``, a β target selects the pairs its guarantee
    LP witness uses; otherwise the full default grid is run.

    Raises:
        ContractViolation: If ℓ has a positive weight or a pair has
            t_f > 1 under a matroid.
    """
    cfg = cfg or SolverConfig()
    if not ell.nonpositive():
        raise ContractViolation("pipeline_nonpos needs ℓ ≤ 0")
    p = Polytope.of(f.n, constraint)
    _check_instance(f, ell, p)
    grid = _resolve_pairs(pairs, beta, constraint is not None)
    guesses = _guess_polytopes(p, ell, guess_ell_values(ell, cfg.eps))
    zero = LinearFn.zeros(f.n)
    logger.info(f"pipeline_nonpos: {len(guesses)} guess polytopes x {len(grid)} pairs")

    def run_guess(job: Tuple[int, Tuple[Polytope, str]]) -> List[Candidate]:
        idx, (pw, tag) = job
        seed = cfg.seed + 1000 * idx
        z = local_search(f, zero, pw, cfg).point
        found = [(_round(p, f, ell, z, seed), f"local-search@{tag}")]
        for j, (ts, tf) in enumerate(grid):
            run_cfg = CgConfig.from_solver(cfg, t_s=ts, t_f=tf, f=f)
            y = aided_mcg(f, zero, z, pw, run_cfg)
            found.append((_round(p, f, ell, y, seed + j + 1), f"aided({ts:g},{tf:g})@{tag}"))
        return found

    batches = map_threaded(run_guess, list(enumerate(guesses)), cfg.threads)
    return _best(f, ell, [c for batch in batches for c in batch])


def pipeline_nonneg_csm(
    f: SubmodularFn,
    ell: LinearFn,
    constraint: Optional[Matroid] = None,
    cfg: Optional[SolverConfig] = None,
    pairs: Optional[Sequence[Pair]] = None,
) -> SolveResult:
    """
    Best of the trivial approximation, the local-search point and distorted
    aided runs over {(0.1x, 1)}; no guessing step.

    Raises:
        ContractViolation: If ℓ has a negative weight.
    """
    cfg = cfg or SolverConfig()
    if not ell.nonnegative():
        raise ContractViolation("pipeline_nonneg_csm needs ℓ ≥ 0")
    p = Polytope.of(f.n, constraint)
    _check_instance(f, ell, p)
    grid = _resolve_pairs(nonneg_csm_pairs() if pairs is None else pairs, None, constraint is not None)
    z = local_search(f, ell, p, cfg).point
    candidates = [
        (trivial_approx(ell, p, cfg.seed), "trivial"),
        (_round(p, f, ell, z, cfg.seed), "local-search"),
    ]

    def run_pair(job: Tuple[int, Pair]) -> Candidate:
        j, (ts, tf) = job
        y = aided_mcg(f, ell, z, p, CgConfig.from_solver(cfg, t_s=ts, t_f=tf, f=f))
        return _round(p, f, ell, y, cfg.seed + j + 1), f"distorted-aided({ts:g},{tf:g})"

    candidates += map_threaded(run_pair, list(enumerate(grid)), cfg.threads)
    return _best(f, ell, candidates)


def pipeline_unconstrained(
    f: SubmodularFn,
    ell: LinearFn,
    constraint: Optional[Matroid] = None,
    t: float = 1.0,
    cfg: Optional[SolverConfig] = None,
) -> SolveResult:
    """
    Better of distorted measured continuous greedy run to time t (rounded)
    and the trivial approximation; ℓ may have any sign.

    Raises:
        ContractViolation: If t ≤ 0, or t > 1 under a matroid.
    """
    cfg = cfg or SolverConfig()
    if t <= 0:
        raise ContractViolation(f"t must be positive. Got: {t}")
    if constraint is not None and t > 1.0 + TIME_TOL:
        raise ContractViolation(f"Matroid-constrained runs need t <= 1. Got: {t}")
    p = Polytope.of(f.n, constraint)
    y = distorted_measured_cg(f, ell, p, CgConfig.from_solver(cfg, t_s=0.0, t_f=t, f=f))
    return _best(
        f,
        ell,
        [
            (_round(p, f, ell, y, cfg.seed), f"distorted-cg(t={t:g})"),
            (trivial_approx(ell, p, cfg.seed), "trivial"),
        ],
    )


def pipeline_0280(
    f: SubmodularFn,
    ell: LinearFn,
    constraint: Optional[Matroid] = None,
    cfg: Optional[SolverConfig] = None,
    pairs: Sequence[Pair] = DEFAULT_0280_PAIRS,
) -> SolveResult:
    """
    The non-negative matroid pipeline wrapped in a guess of ℓ_−(OPT):
    per guess, local search and distorted aided runs on P ∩ {⟨ℓ_−, x⟩ ≥ w}.
    """
    cfg = cfg or SolverConfig()
    p = Polytope.of(f.n, constraint)
    _check_instance(f, ell, p)
    grid = _resolve_pairs(pairs, None, constraint is not None)
    negative = ell.negative_part()
    guesses = _guess_polytopes(p, negative, guess_ell_values(ell, cfg.eps, GuessMode.NEGATIVE_PART))
    logger.info(f"pipeline_0280: {len(guesses)} guess polytopes x {len(grid)} pairs")

    def run_guess(job: Tuple[int, Tuple[Polytope, str]]) -> List[Candidate]:
        idx, (pw, tag) = job
        seed = cfg.seed + 1000 * idx
        z = local_search(f, ell, pw, cfg).point
        found = [(_round(p, f, ell, z, seed), f"local-search@{tag}")]
        for j, (ts, tf) in enumerate(grid):
            y = aided_mcg(f, ell, z, pw, CgConfig.from_solver(cfg, t_s=ts, t_f=tf, f=f))
            found.append((_round(p, f, ell, y, seed + j + 1), f"distorted-aided({ts:g},{tf:g})@{tag}"))
        return found

    batches = map_threaded(run_guess, list(enumerate(guesses)), cfg.threads)
    candidates = [(trivial_approx(ell, p, cfg.seed), "trivial")]
    return _best(f, ell, candidates + [c for batch in batches for c in batch])


def _complemented(
    f: SubmodularFn,
    ell: LinearFn,
    solve: Callable[[SubmodularFn, LinearFn], SolveResult],
) -> SolveResult:
    g, neg = complement_transform(f, ell)
    inner = solve(g, neg)
    subset = frozenset(range(f.n)) - inner.subset
    fv, lv = f.value(subset), ell.value(subset)
    return SolveResult(subset, fv + lv, fv, lv, f"complement:{inner.label}", inner.candidates)


def pipeline_nonneg_usm_beta1(
    f: SubmodularFn,
    ell: LinearFn,
    cfg: Optional[SolverConfig] = None,
    beta: float = 1.0,
) -> SolveResult:
    """
    Solve g(S) = f(𝒩∖S) with −ℓ ≤ 0 by ``pipeline_nonpos`` and complement
    the answer.

    Raises:
        ContractViolation: If ℓ has a negative weight.
    """
    if not ell.nonnegative():
        raise ContractViolation("pipeline_nonneg_usm_beta1 needs ℓ ≥ 0")
    return _complemented(f, ell, lambda g, neg: pipeline_nonpos(g, neg, None, beta, cfg))


def pipeline_nonneg_usm_combined(
    f: SubmodularFn,
    ell: LinearFn,
    cfg: Optional[SolverConfig] = None,
    beta: float = 0.9,
    dg_runs: int = 8,
) -> SolveResult:
    """
    Best of randomized double greedy runs and the complement pipeline at the
    β′ targets that the combined guarantee LP uses for ``beta``.
    """
    cfg = cfg or SolverConfig()
    if not ell.nonnegative():
        raise ContractViolation("pipeline_nonneg_usm_combined needs ℓ ≥ 0")
    candidates: List[Candidate] = []
    for i in range(dg_runs):
        subset, _ = randomized_dg(f, ell, rng_seed=cfg.seed + i)
        candidates.append((subset, f"randomized-dg(seed={cfg.seed + i})"))
    witness = nonneg_usm_alpha(beta).witness
    targets = sorted({pt.param for pt, _ in witness if pt.provenance.startswith("complement") and pt.param is not None})
    if targets:
        grid = sorted({pair for b in targets for pair in nonpos_witness_pairs(b)})
        inner = _complemented(f, ell, lambda g, neg: pipeline_nonpos(g, neg, None, None, cfg, grid))
        candidates.append((inner.subset, inner.label))
    return _best(f, ell, candidates)
