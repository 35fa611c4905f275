"""
Guarantee linear programs.

Each algorithm in the toolkit certifies a lower bound that is linear in a
small basis of quantities (f(OPT), F(z∧1_OPT), ...). Running several of
them and keeping the best output certifies every convex combination of
their coefficient vectors, so the best (α, β) pair is the optimum of a
small LP over the convex hull of those vectors.

Bases:
    nonpos       [f(OPT), F(z∧1_OPT), F(z∨1_OPT), L(OPT)]
    nonneg       [f(OPT), F(z∧1_OPT), F(z∨1_OPT), L+(OPT∖z), L+(OPT∧z)]
    mixed        nonneg + [L−(OPT∖z), L−(OPT∧z)]
    usm          [f(OPT), ℓ(OPT), ℓ(𝒩)]

Example:
    >>> round(nonpos_alpha(1.0).alpha, 4)
    0.3856
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .basic_utils.parallel import map_threaded
from .enums import Relation
from .exceptions import ContractViolation, InfeasibleError, StructuralError
from .lp import LinearProgram, solve

logger = logging.getLogger(__name__)

NONPOS_BASIS = ("f_opt", "F_meet", "F_join", "L_opt")
NONNEG_BASIS = ("f_opt", "F_meet", "F_join", "Lpos_outside", "Lpos_inside")
MIXED_BASIS = NONNEG_BASIS + ("Lneg_outside", "Lneg_inside")
USM_BASIS = ("f_opt", "ell_opt", "ell_ground")

WITNESS_TOL = 1e-9
DEFAULT_0280_PAIRS: Tuple[Tuple[float, float], ...] = ((0.205, 0.955),)

Pair = Tuple[float, float]
CoordConstraint = Tuple[Sequence[float], Relation, float]


@dataclass(frozen=True)
class GuaranteePoint:
    """
    Coefficient vector of one certified lower bound.

    Attributes:
        coords: Coefficients over ``basis``.
        basis: Names of the bounded quantities.
        provenance: What produced the bound, e.g. ``aided(t_s=0.35,t_f=1)``.
        pair: (t_s, t_f) for points produced by a continuous greedy run.
        param: Scalar parameter of the producing algorithm (r or β′).
    """

    coords: Tuple[float, ...]
    basis: Tuple[str, ...]
    provenance: str
    pair: Optional[Pair] = None
    param: Optional[float] = None

    def __post_init__(self) -> None:
        if len(self.coords) != len(self.basis):
            raise StructuralError(f"{len(self.coords)} coordinates for a basis of {len(self.basis)}")


@dataclass
class GuaranteeSolution:
    """Optimum of a guarantee LP: α and the convex combination attaining it."""

    alpha: float
    beta: Optional[float]
    witness: List[Tuple[GuaranteePoint, float]] = field(default_factory=list)

    @property
    def pairs(self) -> List[Pair]:
        """(t_s, t_f) pairs carrying positive weight."""
        return sorted({pt.pair for pt, _ in self.witness if pt.pair is not None})

    @property
    def combined(self) -> Tuple[float, ...]:
        total = np.zeros(len(self.witness[0][0].coords)) if self.witness else np.zeros(0)
        for pt, weight in self.witness:
            total += weight * np.asarray(pt.coords)
        return tuple(float(v) for v in total)


def _check_pair(t_s: float, t_f: float) -> None:
    if t_s < 0 or t_f < t_s:
        raise ContractViolation(f"Need 0 <= t_s <= t_f. Got: t_s={t_s}, t_f={t_f}")


def aided_coeffs(t_s: float, t_f: float) -> GuaranteePoint:
    """
    Coefficients of the aided measured continuous greedy bound.

    E[F(y(t_f))] ≥ x₁·f(OPT) + x₂·F(z∧1_OPT) + x₃·F(z∨1_OPT) and the
    ℓ ≤ 0 term enters with coefficient x₄ = t_f.
    """
    _check_pair(t_s, t_f)
    late = np.exp(t_s - t_f)
    early = np.exp(-t_f)
    x1 = late * (1 + t_f - t_s) - early
    x2 = early - late
    x3 = early * (1 + t_f) - late * (1 + t_f - t_s)
    return GuaranteePoint(
        (float(x1), float(x2), float(x3), float(t_f)),
        NONPOS_BASIS,
        f"aided(t_s={t_s:g},t_f={t_f:g})",
        (float(t_s), float(t_f)),
    )


def distorted_aided_coeffs(t_s: float, t_f: float, negative: bool = False) -> GuaranteePoint:
    """
    Coefficients of the distorted aided run.

    The f-coordinates equal ``aided_coeffs``; the positive part of ℓ adds
    (1−e^{−t_f}, 1−e^{t_s−t_f}) for outside/inside z. With ``negative``
    the negative part adds (t_f, t_f−t_s).
    """
    base = aided_coeffs(t_s, t_f)
    coords = base.coords[:3] + (float(1 - np.exp(-t_f)), float(1 - np.exp(t_s - t_f)))
    basis = NONNEG_BASIS
    if negative:
        coords += (float(t_f), float(t_f - t_s))
        basis = MIXED_BASIS
    return GuaranteePoint(coords, basis, f"distorted-{base.provenance}", base.pair)


def _rates(t_s: float) -> Dict[str, Callable[[float], float]]:
    """Instantaneous bound rates G(t) of the two phases, per basis quantity."""

    def phase(early: Callable[[float], float], late: Callable[[float], float]) -> Callable[[float], float]:
        return lambda t: early(t) if t < t_s else late(t)

    return {
        "f_opt": phase(lambda t: 1.0, lambda t: np.exp(t_s - t)),
        "F_meet": phase(lambda t: -1.0, lambda t: 0.0),
        "F_join": phase(lambda t: -(1 - np.exp(-t)), lambda t: -(np.exp(t_s - t) - np.exp(-t))),
        "Lpos_outside": lambda t: np.exp(-t),
        "Lpos_inside": phase(lambda t: 0.0, lambda t: np.exp(t_s - t)),
        "Lneg_outside": lambda t: 1.0,
        "Lneg_inside": phase(lambda t: 0.0, lambda t: 1.0),
    }


def aided_coeffs_by_quadrature(t_s: float, t_f: float) -> GuaranteePoint:
    """
    The mixed-basis coefficients obtained by numerically integrating the
    differential bound dG/dt ≥ rate(t) instead of the closed form.

    The f-quantities solve dF/dt ≥ G(t) − F, so their coefficient is
    e^{−t_f}∫e^t·G(t)dt; the ℓ-quantities integrate their rate directly.
    """
    _check_pair(t_s, t_f)
    rates = _rates(t_s)
    breaks = [t_s] if 0 < t_s < t_f else None
    coords = []
    for name in MIXED_BASIS:
        rate = rates[name]
        if name.startswith("f") or name.startswith("F"):
            value, _ = integrate.quad(lambda t: np.exp(t) * rate(t), 0.0, t_f, points=breaks)
            coords.append(float(np.exp(-t_f) * value))
        else:
            value, _ = integrate.quad(rate, 0.0, t_f, points=breaks)
            coords.append(float(value))
    return GuaranteePoint(tuple(coords), MIXED_BASIS, f"quadrature(t_s={t_s:g},t_f={t_f:g})", (t_s, t_f))


def nonpos_anchors() -> List[GuaranteePoint]:
    """Empty set and the two local-search inequalities."""
    return [
        GuaranteePoint((0.0, 0.0, 0.0, 0.0), NONPOS_BASIS, "empty-set"),
        GuaranteePoint((0.0, 0.5, 0.5, 1.0), NONPOS_BASIS, "local-search-average"),
        GuaranteePoint((0.0, 1.0, 0.0, 1.0), NONPOS_BASIS, "local-search-meet"),
    ]


def nonneg_anchors(negative: bool = False) -> List[GuaranteePoint]:
    """Trivial approximation and the two local-search inequalities."""
    rows = [
        ((0.0, 0.0, 0.0, 1.0, 1.0), "trivial", (0.0, 0.0)),
        ((0.0, 0.5, 0.5, 0.5, 1.0), "local-search-average", (1.0, 1.0)),
        ((0.0, 1.0, 0.0, 0.0, 1.0), "local-search-meet", (0.0, 1.0)),
    ]
    if not negative:
        return [GuaranteePoint(c, NONNEG_BASIS, name) for c, name, _ in rows]
    return [GuaranteePoint(c + neg, MIXED_BASIS, name) for c, name, neg in rows]


def nonpos_pairs(csm: bool = False, step: float = 0.05, t_max: float = 2.0) -> List[Pair]:
    """
    Default pair grid {(x·step, y·step) : 0 ≤ x ≤ y ≤ t_max/step}.

    With ``csm`` only pairs with t_f ≤ 1 are kept.
    """
    top = int(round(t_max / step))
    pairs = [(x * step, y * step) for y in range(top + 1) for x in range(y + 1)]
    if csm:
        pairs = [(ts, tf) for ts, tf in pairs if tf <= 1.0 + 1e-12]
    return pairs


def nonneg_csm_pairs() -> List[Pair]:
    """{(0.1x, 1) : 0 ≤ x ≤ 10}."""
    return [(0.1 * x, 1.0) for x in range(11)]


def solve_guarantee_lp(
    points: Sequence[GuaranteePoint],
    constraints: Sequence[CoordConstraint],
    beta: Optional[float] = None,
) -> GuaranteeSolution:
    """
    Maximize x₁ over the convex hull of ``points`` under coordinate constraints.

    Args:
        points: Hull generators sharing one basis.
        constraints: (coefficients over the basis, relation, rhs) rows.
        beta: Target β, only used in results and error messages.

    Returns:
        GuaranteeSolution with the optimal α and its witness combination.

    Raises:
        ContractViolation: If ``points`` is empty.
        StructuralError: If the points mix bases.
        InfeasibleError: If no convex combination meets the constraints.
    """
    if not points:
        raise ContractViolation("Guarantee LP needs at least one hull point")
    basis = points[0].basis
    if any(pt.basis != basis for pt in points):
        raise StructuralError("Hull points use different bases")
    P = np.array([pt.coords for pt in points])
    lp = LinearProgram(objective=P[:, 0])
    lp.add(np.ones(len(points)), Relation.EQ, 1.0)
    for coeffs, relation, rhs in constraints:
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.size != len(basis):
            raise StructuralError(f"Constraint has {coeffs.size} coefficients for basis of {len(basis)}")
        lp.add(P @ coeffs, relation, rhs)
    result = solve(lp)
    if not result.optimal:
        raise InfeasibleError(f"No combination of {len(points)} points meets the constraints (β={beta})", beta=beta)
    assert result.x is not None and result.value is not None
    witness = [(points[j], float(w)) for j, w in enumerate(result.x) if w > WITNESS_TOL]
    return GuaranteeSolution(alpha=float(result.value), beta=beta, witness=witness)


def _unit(dim: int, *entries: Tuple[int, float]) -> np.ndarray:
    row = np.zeros(dim)
    for i, v in entries:
        row[i] = v
    return row


def nonpos_alpha(beta: float, csm: bool = False, pairs: Optional[Sequence[Pair]] = None) -> GuaranteeSolution:
    """
    Best α for an (α, β) guarantee with ℓ ≤ 0 from local search, aided runs
    over ``pairs`` and the empty set.
    """
    grid = nonpos_pairs(csm) if pairs is None else list(pairs)
    points = nonpos_anchors() + [aided_coeffs(ts, tf) for ts, tf in grid]
    constraints = [
        (_unit(4, (1, 1.0)), Relation.GE, 0.0),
        (_unit(4, (2, 1.0)), Relation.GE, 0.0),
        (_unit(4, (3, 1.0)), Relation.LE, beta),
    ]
    return solve_guarantee_lp(points, constraints, beta)


@lru_cache(maxsize=1024)
def _nonpos_alpha_value(beta: float, csm: bool) -> float:
    return nonpos_alpha(beta, csm).alpha


def nonpos_witness_pairs(beta: float, csm: bool = False) -> List[Pair]:
    """The (t_s, t_f) pairs the optimal combination at β actually uses."""
    return nonpos_alpha(beta, csm).pairs


def nonneg_csm_alpha(beta: float, pairs: Optional[Sequence[Pair]] = None) -> GuaranteeSolution:
    """Best α for ℓ ≥ 0 under a matroid: trivial approximation, local search and distorted aided runs."""
    grid = nonneg_csm_pairs() if pairs is None else list(pairs)
    points = nonneg_anchors() + [distorted_aided_coeffs(ts, tf) for ts, tf in grid]
    constraints = [
        (_unit(5, (1, 1.0)), Relation.GE, 0.0),
        (_unit(5, (2, 1.0)), Relation.GE, 0.0),
        (_unit(5, (3, 1.0)), Relation.GE, beta),
        (_unit(5, (4, 1.0)), Relation.GE, beta),
    ]
    return solve_guarantee_lp(points, constraints, beta)


def unconstrained_0280_alpha(beta: float, pairs: Sequence[Pair] = DEFAULT_0280_PAIRS) -> GuaranteeSolution:
    """Best α for mixed-sign ℓ: the non-negative hull extended by the ℓ− coordinates."""
    points = nonneg_anchors(negative=True) + [distorted_aided_coeffs(ts, tf, negative=True) for ts, tf in pairs]
    constraints = [
        (_unit(7, (1, 1.0)), Relation.GE, 0.0),
        (_unit(7, (2, 1.0)), Relation.GE, 0.0),
        (_unit(7, (3, 1.0)), Relation.GE, beta),
        (_unit(7, (4, 1.0)), Relation.GE, beta),
        (_unit(7, (5, 1.0)), Relation.LE, beta),
        (_unit(7, (6, 1.0)), Relation.LE, beta),
    ]
    return solve_guarantee_lp(points, constraints, beta)


def dg_r_grid() -> List[float]:
    """{1 + 0.1j : 0 ≤ j ≤ 90}."""
    return [1.0 + 0.1 * j for j in range(91)]


def dg_hull_points(r_grid: Optional[Sequence[float]] = None) -> List[GuaranteePoint]:
    """
    Randomized double greedy bounds (2/(r+1/r)², 2/(r+1/r)², r²/(r+1/r)²).

    (r+1/r)² = r²+2+r^{−2}, so each point is the parameter-r² guarantee
    with its ℓ-term split between ℓ(OPT) and ℓ(𝒩).
    """
    grid = dg_r_grid() if r_grid is None else list(r_grid)
    points = []
    for r in grid:
        if r < 1:
            raise ContractViolation(f"Double greedy parameter must be at least 1. Got: {r}")
        denom = (r + 1.0 / r) ** 2
        points.append(
            GuaranteePoint(
                (2.0 / denom, 2.0 / denom, r * r / denom), USM_BASIS, f"double-greedy(r={r:g})", param=float(r)
            )
        )
    return points


def complement_points(beta_grid: Optional[Sequence[float]] = None) -> List[GuaranteePoint]:
    """
    (α(β′), β′, 1−β′) for the complement pipeline, one per β′ ∈ [1, 1.3].

    The complemented problem has ℓ ≤ 0 with ℓ(OPT) = ℓ(OPT) − ℓ(𝒩) in the
    original terms, hence the split across ℓ(OPT) and ℓ(𝒩).
    """
    grid = [1.0 + 0.01 * j for j in range(31)] if beta_grid is None else list(beta_grid)
    return [
        GuaranteePoint(
            (_nonpos_alpha_value(round(b, 10), False), b, 1.0 - b),
            USM_BASIS,
            f"complement(β={b:g})",
            param=float(b),
        )
        for b in grid
    ]


def nonneg_usm_alpha(
    beta: float,
    r_grid: Optional[Sequence[float]] = None,
    beta_grid: Optional[Sequence[float]] = None,
) -> GuaranteeSolution:
    """Best α for ℓ ≥ 0 without constraint, combining double greedy with the complement pipeline."""
    points = complement_points(beta_grid) + dg_hull_points(r_grid)
    constraints = [
        ((0.0, 1.0, 1.0), Relation.GE, beta),
        ((0.0, 0.0, 1.0), Relation.GE, 0.0),
    ]
    return solve_guarantee_lp(points, constraints, beta)


TABLES: Dict[str, Callable[[float], GuaranteeSolution]] = {
    "nonpos": lambda b: nonpos_alpha(b, csm=False),
    "nonpos-csm": lambda b: nonpos_alpha(b, csm=True),
    "nonneg-csm": nonneg_csm_alpha,
    "unconstrained-0280": unconstrained_0280_alpha,
    "nonneg-comb": nonneg_usm_alpha,
}


def guarantee_table(
    name: str,
    betas: Sequence[float],
    threads: int = 1,
    show_progress: bool = False,
) -> List[GuaranteeSolution]:
    """
    Sweep one guarantee LP over β values.

    Raises:
        ContractViolation: If ``name`` is not one of ``TABLES``.
    """
    if name not in TABLES:
        raise ContractViolation(f"Unknown table '{name}'. Valid names: {', '.join(TABLES)}")
    rows = map_threaded(TABLES[name], list(betas), threads, desc=f"table {name}" if show_progress else None)
    for row in rows:
        logger.info(f"table {name}: β={row.beta:g} α={row.alpha:.4f} pairs={row.pairs}")
    return rows
