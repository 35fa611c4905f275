"""
LP-based (0.5, 1)-approximations for cut functions.

Both programs maximize ½·f̂(x) + L(x), where f̂ replaces each edge's cut
indicator by a variable c_e bounded by linear functions of its endpoints.
"""

import logging
from typing import Tuple

import numpy as np

from .core import DirectedCut, FractionalPoint, LinearFn, SubmodularFn, UndirectedCut
from .enums import Relation
from .exceptions import ContractViolation, InfeasibleError, InvariantError, StructuralError
from .lp import Constraint, LinearProgram, solve
from .matroid import Polytope, pipage_round, polytope_program, sample_round

logger = logging.getLogger(__name__)

HALF_TOL = 1e-7


def fhat_cut(f: SubmodularFn, x: np.ndarray) -> float:
    """
    The LP extension f̂.

    Undirected: Σ w·min(x_a+x_b, 2−x_a−x_b). Directed: Σ w·min(x_a, 1−x_b).

    Raises:
        ContractViolation: If f is not a cut function.
    """
    x = np.asarray(x, dtype=float)
    if isinstance(f, UndirectedCut):
        s = x[f.ends_a] + x[f.ends_b]
        return float(np.sum(f.weights * np.minimum(s, 2.0 - s)))
    if isinstance(f, DirectedCut):
        return float(np.sum(f.weights * np.minimum(x[f.tails], 1.0 - x[f.heads])))
    raise ContractViolation(f"f̂ is defined for cut functions only. Got: {type(f).__name__}")


def _with_edge_vars(lp: LinearProgram, weights: np.ndarray) -> LinearProgram:
    """Append one c_e ≥ 0 per edge with objective ½·w_e; existing rows are padded."""
    m = weights.size
    pad = np.zeros(m)
    return LinearProgram(
        objective=np.concatenate([lp.objective, 0.5 * weights]),
        constraints=[Constraint(np.concatenate([con.row, pad]), con.relation, con.rhs) for con in lp.constraints],
        bounds=list(lp.bounds or []) + [(0.0, np.inf)] * m,
    )


def undirected_cut_lp(
    f: SubmodularFn,
    ell: LinearFn,
    p: Polytope,
    rng_seed: int = 0,
) -> Tuple[FractionalPoint, frozenset]:
    """
    Solve max ½f̂(x) + L(x) over x ∈ P with c_ab ≤ x_a+x_b, c_ab ≤ 2−x_a−x_b,
    then pipage-round.

    F(x*) ≥ ½f̂(x*) holds pointwise for undirected cuts, so the rounded set
    is worth at least ½f(OPT) + ℓ(OPT).

    Raises:
        ContractViolation: If f is not an UndirectedCut.
    """
    if not isinstance(f, UndirectedCut):
        raise ContractViolation(f"undirected_cut_lp needs an undirected cut. Got: {type(f).__name__}")
    if ell.n != f.n or p.n != f.n:
        raise StructuralError("f, ℓ and the polytope must share one ground set")
    base, nx = polytope_program(p, ell.weights)
    lp = _with_edge_vars(base, f.weights)
    offset = base.n_vars
    for e, (a, b) in enumerate(zip(f.ends_a, f.ends_b)):
        row = np.zeros(lp.n_vars)
        row[offset + e] = 1.0
        row[a] -= 1.0
        row[b] -= 1.0
        lp.add(row, Relation.LE, 0.0)
        row = np.zeros(lp.n_vars)
        row[offset + e] = 1.0
        row[a] += 1.0
        row[b] += 1.0
        lp.add(row, Relation.LE, 2.0)
    result = solve(lp)
    if not result.optimal:
        raise InfeasibleError(f"Cut LP ended with status {result.status}")
    assert result.x is not None
    x = FractionalPoint(np.clip(result.x[:nx], 0.0, 1.0))
    logger.debug(f"undirected_cut_lp: LP value {result.value:.6f}, {result.iterations} pivots")
    return x, pipage_round(Polytope(p.n, p.base), f, ell, x, rng_seed)


def _dicut_program(f: DirectedCut, cx: np.ndarray, cc: np.ndarray) -> LinearProgram:
    n, m = f.n, len(f.edges)
    lp = LinearProgram(
        objective=np.concatenate([cx, cc]),
        bounds=[(0.0, 1.0)] * n + [(0.0, np.inf)] * m,
    )
    for e, (a, b) in enumerate(zip(f.tails, f.heads)):
        row = np.zeros(n + m)
        row[n + e] = 1.0
        row[a] = -1.0
        lp.add(row, Relation.LE, 0.0)
        row = np.zeros(n + m)
        row[n + e] = 1.0
        row[b] = 1.0
        lp.add(row, Relation.LE, 1.0)
    return lp


def is_half_integral(x: np.ndarray, tol: float = HALF_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.abs(2.0 * x - np.round(2.0 * x)) <= 2.0 * tol))


def dicut_vertex(f: DirectedCut, cx: np.ndarray, cc: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vertex (x, c) of the dicut LP polytope maximizing ⟨cx, x⟩ + ⟨cc, c⟩."""
    result = solve(_dicut_program(f, np.asarray(cx, dtype=float), np.asarray(cc, dtype=float)))
    if not result.optimal:
        raise InfeasibleError(f"Dicut LP ended with status {result.status}")
    assert result.x is not None
    return result.x[: f.n], result.x[f.n :]


def directed_cut_lp(
    f: SubmodularFn,
    ell: LinearFn,
    rng_seed: int = 0,
) -> Tuple[FractionalPoint, frozenset]:
    """
    Solve max ½f̂(x) + L(x) over the cube with c_ab ≤ x_a, c_ab ≤ 1−x_b at a
    vertex, then round by independent sampling.

    Every vertex of this polytope is half-integral, and F(x) ≥ ½f̂(x) at
    half-integral points.

    Raises:
        ContractViolation: If f is not a DirectedCut.
        InvariantError: If the LP returns a point that is not half-integral.
    """
    if not isinstance(f, DirectedCut):
        raise ContractViolation(f"directed_cut_lp needs a directed cut. Got: {type(f).__name__}")
    if ell.n != f.n:
        raise StructuralError("f and ℓ have different ground sets")
    x, _ = dicut_vertex(f, ell.weights, 0.5 * f.weights)
    if not is_half_integral(x):
        raise InvariantError(f"Dicut LP vertex is not half-integral: {x}")
    point = FractionalPoint(np.round(2.0 * x) / 2.0)
    return point, sample_round(point, rng_seed)


def dicut_lp_expectation(f: DirectedCut, ell: LinearFn, x: FractionalPoint) -> float:
    """Exact E[f(R(x)) + ℓ(R(x))] of the sampled rounding."""
    return f.multilinear(x.coords) + ell.at(x)
