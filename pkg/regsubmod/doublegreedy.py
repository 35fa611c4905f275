"""
Double greedy on g = f + ℓ: the r-parameterized deterministic variant, the
randomized variant with its exact expectation, and the oblivious algorithm
for directed cuts.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import DirectedCut, LinearFn, SubmodularFn
from .exceptions import CapabilityError, ContractViolation, StructuralError

logger = logging.getLogger(__name__)

EXACT_DG_MAX_N = 14


@dataclass(frozen=True)
class DgStep:
    """
    One element decision.

    Attributes:
        element: u_i.
        gain_x: g(u_i | X_{i−1}).
        gain_y: g(u_i | Y_{i−1} ∖ {u_i}).
        a: max(gain_x, 0).
        b: max(−gain_y, 0).
        keep: Whether u_i went into X_i (False means it left Y_i).
        probability: Probability of keeping; 0 or 1 for deterministic runs.
    """

    element: int
    gain_x: float
    gain_y: float
    a: float
    b: float
    keep: bool
    probability: float


@dataclass
class DgTrace:
    steps: List[DgStep] = field(default_factory=list)
    final: frozenset = frozenset()

    def check_nesting(self, n: int) -> bool:
        """Replay the run and confirm X_{i−1} ⊆ X_i ⊆ Y_i ⊆ Y_{i−1} and X_n = Y_n."""
        X: set = set()
        Y = set(range(n))
        for step in self.steps:
            X_prev, Y_prev = set(X), set(Y)
            if step.keep:
                X.add(step.element)
            else:
                Y.discard(step.element)
            if not (X_prev <= X <= Y <= Y_prev):
                return False
        return X == Y == set(self.final)


class _Gains:
    """Incremental evaluation of g(u|X) and g(u|Y∖u) along a run."""

    def __init__(self, f: SubmodularFn, ell: LinearFn) -> None:
        if f.n != ell.n:
            raise StructuralError("f and ℓ have different ground sets")
        self.f = f
        self.ell = ell

    def __call__(self, u: int, X: frozenset, Y: frozenset) -> Tuple[float, float]:
        f, lu = self.f, float(self.ell.weights[u])
        gain_x = f.value(X | {u}) - f.value(X) + lu
        gain_y = f.value(Y) - f.value(Y - {u}) + lu
        return gain_x, gain_y


def _order(n: int, order: Optional[Sequence[int]]) -> List[int]:
    if order is None:
        return list(range(n))
    perm = [int(u) for u in order]
    if sorted(perm) != list(range(n)):
        raise ContractViolation(f"order must be a permutation of 0..{n - 1}")
    return perm


def deterministic_dg(
    f: SubmodularFn,
    ell: LinearFn,
    r: float = 1.0,
    order: Optional[Sequence[int]] = None,
) -> Tuple[frozenset, DgTrace]:
    """
    Deterministic double greedy with parameter r.

    u_i joins X when g(u_i|X_{i−1}) ≥ −r·g(u_i|Y_{i−1}∖{u_i}), otherwise it
    leaves Y. r = 1 is the classic deterministic double greedy.

    Args:
        f: Non-negative submodular function.
        ell: Linear term.
        r: Trade-off parameter, r ≥ 1.
        order: Element order; index order by default.

    Returns:
        (X_n, trace).

    Raises:
        ContractViolation: If r < 1 or order is not a permutation.
    """
    if r < 1:
        raise ContractViolation(f"r must be at least 1. Got: {r}")
    gains = _Gains(f, ell)
    X: frozenset = frozenset()
    Y = frozenset(range(f.n))
    trace = DgTrace()
    for u in _order(f.n, order):
        gain_x, gain_y = gains(u, X, Y)
        keep = gain_x >= -r * gain_y
        if keep:
            X = X | {u}
        else:
            Y = Y - {u}
        trace.steps.append(
            DgStep(u, gain_x, gain_y, max(gain_x, 0.0), max(-gain_y, 0.0), keep, 1.0 if keep else 0.0)
        )
    trace.final = X
    logger.debug(f"deterministic_dg r={r}: kept {len(X)}/{f.n} elements")
    return X, trace


def _keep_probability(gain_x: float, gain_y: float) -> Tuple[float, float, float]:
    a = max(gain_x, 0.0)
    b = max(-gain_y, 0.0)
    if a + b == 0.0:
        return a, b, 0.0
    return a, b, a / (a + b)


def randomized_dg(
    f: SubmodularFn,
    ell: LinearFn,
    order: Optional[Sequence[int]] = None,
    rng_seed: int = 0,
) -> Tuple[frozenset, DgTrace]:
    """
    One sampled run of randomized double greedy on f + ℓ.

    u_i is kept with probability a_i/(a_i+b_i); when a_i = b_i = 0 it is
    left out.
    """
    rng = np.random.default_rng(rng_seed)
    gains = _Gains(f, ell)
    X: frozenset = frozenset()
    Y = frozenset(range(f.n))
    trace = DgTrace()
    for u in _order(f.n, order):
        gain_x, gain_y = gains(u, X, Y)
        a, b, prob = _keep_probability(gain_x, gain_y)
        keep = bool(rng.random() < prob)
        if keep:
            X = X | {u}
        else:
            Y = Y - {u}
        trace.steps.append(DgStep(u, gain_x, gain_y, a, b, keep, prob))
    trace.final = X
    return X, trace


def exact_dg_expectation(
    f: SubmodularFn,
    ell: LinearFn,
    order: Optional[Sequence[int]] = None,
) -> float:
    """
    Exact E[f(X_n)+ℓ(X_n)] of randomized double greedy.

    Walks the binary decision tree with exact branch probabilities,
    skipping zero-probability branches.

    Raises:
        CapabilityError: If n > 14.
    """
    if f.n > EXACT_DG_MAX_N:
        raise CapabilityError(f"exact_dg_expectation supports n <= {EXACT_DG_MAX_N}. Got: {f.n}")
    gains = _Gains(f, ell)
    perm = _order(f.n, order)

    def expand(i: int, X: frozenset, Y: frozenset) -> float:
        if i == len(perm):
            return f.value(X) + ell.value(X)
        u = perm[i]
        _, _, prob = _keep_probability(*gains(u, X, Y))
        total = 0.0
        if prob > 0.0:
            total += prob * expand(i + 1, X | {u}, Y)
        if prob < 1.0:
            total += (1.0 - prob) * expand(i + 1, X, Y - {u})
        return total

    return expand(0, frozenset(), frozenset(range(f.n)))


def _selection_probabilities(f: DirectedCut, ell: LinearFn, beta: float) -> np.ndarray:
    eligible = (1.0 - beta) * f.out_weight() + ell.weights >= 0
    return np.where(eligible, beta, 0.0)


def oblivious_dicut(f: SubmodularFn, ell: LinearFn, beta: float, rng_seed: int = 0) -> frozenset:
    """
    Oblivious online algorithm for directed cuts.

    Each vertex v is selected independently with probability β when
    (1−β)·out(v) + ℓ(v) ≥ 0, and never otherwise.

    Raises:
        ContractViolation: If f is not a DirectedCut or β ∉ [0,1].
    """
    probs = _oblivious_probs(f, ell, beta)
    rng = np.random.default_rng(rng_seed)
    return frozenset(int(v) for v in np.flatnonzero(rng.random(f.n) < probs))


def oblivious_dicut_expectation(f: SubmodularFn, ell: LinearFn, beta: float) -> float:
    """Exact expected f + ℓ of ``oblivious_dicut``, per-arc closed form."""
    probs = _oblivious_probs(f, ell, beta)
    assert isinstance(f, DirectedCut)
    return f.multilinear(probs) + float(ell.weights @ probs)


def _oblivious_probs(f: SubmodularFn, ell: LinearFn, beta: float) -> np.ndarray:
    if not isinstance(f, DirectedCut):
        raise ContractViolation(f"oblivious_dicut needs a directed cut function. Got: {type(f).__name__}")
    if not 0.0 <= beta <= 1.0:
        raise ContractViolation(f"beta must lie in [0,1]. Got: {beta}")
    if ell.n != f.n:
        raise StructuralError("f and ℓ have different ground sets")
    return _selection_probabilities(f, ell, beta)
