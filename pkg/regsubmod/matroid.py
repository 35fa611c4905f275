"""
Constraint structures: uniform, partition and explicit matroids, their
polytopes (optionally cut by halfspaces for the guessing step), linear
maximization and rounding.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    ArrayLike,
    FractionalPoint,
    LinearFn,
    SubmodularFn,
    _as_coords,
    check_subset,
    from_mask,
    mask_bits,
    multilinear_exact,
    to_mask,
)
from .enums import Relation
from .exceptions import (
    CapabilityError,
    ContractViolation,
    InfeasibleError,
    NumericBreakdownError,
    StructuralError,
)
from .lp import LinearProgram, solve

logger = logging.getLogger(__name__)

EXPLICIT_MAX_N = 16
TIE_TOL = 1e-12
FRAC_TOL = 1e-9
MEMBER_TOL = 1e-7


def _popcount(masks: np.ndarray, n: int) -> np.ndarray:
    counts = np.zeros(masks.shape, dtype=np.int64)
    for u in range(n):
        counts += (masks >> u) & 1
    return counts


class Matroid(ABC):
    """Independence system (𝒩, ℐ) satisfying the matroid axioms."""

    n: int

    @abstractmethod
    def is_independent(self, S: Iterable[int]) -> bool:
        """Membership in ℐ."""

    @abstractmethod
    def rank(self, S: Iterable[int]) -> int:
        """Size of a largest independent subset of S."""

    @abstractmethod
    def feasible_masks(self) -> np.ndarray:
        """Boolean independence flag for each of the 2^n bit masks."""

    @property
    @abstractmethod
    def kind(self) -> str:
        """Instance-file type tag."""

    def greedy(self, w: np.ndarray, forbidden: frozenset = frozenset()) -> frozenset:
        """Max-weight independent set by the greedy algorithm (positive weights only)."""
        order = sorted(range(self.n), key=lambda u: (-w[u], u))
        chosen: set = set()
        for u in order:
            if w[u] <= 0:
                break
            if u in forbidden:
                continue
            if self.is_independent(chosen | {u}):
                chosen.add(u)
        return frozenset(chosen)


@dataclass(frozen=True)
class Uniform(Matroid):
    """All sets of size at most k."""

    n: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 0:
            raise StructuralError(f"Uniform matroid needs n >= 1 and k >= 0. Got n={self.n}, k={self.k}")

    @property
    def kind(self) -> str:
        return "cardinality"

    def is_independent(self, S: Iterable[int]) -> bool:
        return len(check_subset(S, self.n)) <= self.k

    def rank(self, S: Iterable[int]) -> int:
        return min(len(check_subset(S, self.n)), self.k)

    def feasible_masks(self) -> np.ndarray:
        masks = np.arange(1 << self.n, dtype=np.int64)
        return _popcount(masks, self.n) <= self.k


@dataclass(frozen=True)
class Partition(Matroid):
    """At most caps[i] elements from blocks[i]; the blocks partition 𝒩."""

    n: int
    blocks: Tuple[frozenset, ...]
    caps: Tuple[int, ...]
    block_of: Tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        blocks = tuple(check_subset(b, self.n) for b in self.blocks)
        caps = tuple(int(c) for c in self.caps)
        if len(blocks) != len(caps):
            raise StructuralError(f"{len(blocks)} blocks but {len(caps)} caps")
        if any(c < 0 for c in caps):
            raise StructuralError("Partition caps must be non-negative")
        owner = [-1] * self.n
        for i, block in enumerate(blocks):
            for u in block:
                if owner[u] != -1:
                    raise StructuralError(f"Element {u} appears in two blocks")
                owner[u] = i
        if -1 in owner:
            raise StructuralError(f"Element {owner.index(-1)} is in no block")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "caps", caps)
        object.__setattr__(self, "block_of", tuple(owner))

    @property
    def kind(self) -> str:
        return "partition"

    def is_independent(self, S: Iterable[int]) -> bool:
        subset = check_subset(S, self.n)
        return all(len(subset & block) <= cap for block, cap in zip(self.blocks, self.caps))

    def rank(self, S: Iterable[int]) -> int:
        subset = check_subset(S, self.n)
        return sum(min(len(subset & block), cap) for block, cap in zip(self.blocks, self.caps))

    def feasible_masks(self) -> np.ndarray:
        masks = np.arange(1 << self.n, dtype=np.int64)
        ok = np.ones(masks.shape, dtype=bool)
        for block, cap in zip(self.blocks, self.caps):
            ok &= _popcount(masks & to_mask(block), self.n) <= cap
        return ok


@dataclass(frozen=True, eq=False)
class Explicit(Matroid):
    """
    Matroid given by its full family of independent sets (bit masks), n ≤ 16.

    The family is audited on construction: non-empty, contains ∅, closed
    under subsets, and with a submodular rank function (equivalent to the
    exchange axiom for independence systems).
    """

    n: int
    independent: frozenset

    def __post_init__(self) -> None:
        if not 1 <= self.n <= EXPLICIT_MAX_N:
            raise CapabilityError(f"Explicit matroids support 1 <= n <= {EXPLICIT_MAX_N}. Got: {self.n}")
        family = frozenset(int(m) for m in self.independent)
        if not family:
            raise StructuralError("Independent family is empty")
        if 0 not in family:
            raise StructuralError("Independent family must contain the empty set")
        if any(m < 0 or m >= 1 << self.n for m in family):
            raise StructuralError("Independent set mask out of range")
        for m in family:
            for u in range(self.n):
                if (m >> u) & 1 and (m ^ (1 << u)) not in family:
                    raise StructuralError(f"Family is not downward closed at {sorted(from_mask(m, self.n))}")
        object.__setattr__(self, "independent", family)
        if not self._rank_is_submodular():
            raise StructuralError("Family violates the matroid exchange axiom")

    @property
    def kind(self) -> str:
        return "explicit"

    @cached_property
    def flags(self) -> np.ndarray:
        flags = np.zeros(1 << self.n, dtype=bool)
        flags[list(self.independent)] = True
        return flags

    @cached_property
    def rank_table(self) -> np.ndarray:
        masks = np.arange(1 << self.n, dtype=np.int64)
        rank = np.where(self.flags, _popcount(masks, self.n), 0)
        for u in range(self.n):
            bit = np.int64(1) << u
            has = (masks & bit) != 0
            rank[has] = np.maximum(rank[has], rank[masks[has] ^ bit])
        return rank

    @cached_property
    def bases(self) -> Tuple[int, ...]:
        full_rank = int(self.rank_table[-1])
        return tuple(sorted(m for m in self.independent if bin(m).count("1") == full_rank))

    def _rank_is_submodular(self) -> bool:
        rank = self.rank_table
        masks = np.arange(1 << self.n, dtype=np.int64)
        for u in range(self.n):
            for v in range(u + 1, self.n):
                base = masks[((masks >> u) & 1 == 0) & ((masks >> v) & 1 == 0)]
                bu, bv = np.int64(1) << u, np.int64(1) << v
                if np.any(rank[base | bu] + rank[base | bv] < rank[base | bu | bv] + rank[base]):
                    return False
        return True

    def is_independent(self, S: Iterable[int]) -> bool:
        return to_mask(check_subset(S, self.n)) in self.independent

    def rank(self, S: Iterable[int]) -> int:
        return int(self.rank_table[to_mask(check_subset(S, self.n))])

    def feasible_masks(self) -> np.ndarray:
        return self.flags.copy()


@dataclass(frozen=True, eq=False)
class Halfspace:
    """{x : ⟨weights, x⟩ ≥ bound}."""

    weights: np.ndarray
    bound: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float).reshape(-1))
        object.__setattr__(self, "bound", float(self.bound))

    def holds(self, x: np.ndarray, tol: float = MEMBER_TOL) -> bool:
        return float(self.weights @ x) >= self.bound - tol


@dataclass(frozen=True, eq=False)
class Polytope:
    """
    scale·P(base) ∩ cuts, where base None is the cube [0,1]^n.

    Halfspace cuts only come from the guessing step; rounding always works
    against the uncut matroid polytope.
    """

    n: int
    base: Optional[Matroid] = None
    cuts: Tuple[Halfspace, ...] = ()
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.base is not None and self.base.n != self.n:
            raise StructuralError("Polytope base matroid has a different ground set")
        if self.scale < 0:
            raise StructuralError(f"Polytope scale must be non-negative. Got: {self.scale}")
        for cut in self.cuts:
            if cut.weights.size != self.n:
                raise StructuralError("Halfspace dimension does not match the polytope")

    @classmethod
    def cube(cls, n: int) -> "Polytope":
        return cls(n)

    @classmethod
    def of(cls, n: int, constraint: Optional[Matroid]) -> "Polytope":
        return cls(n, base=constraint)

    def with_cut(self, weights: ArrayLike, bound: float) -> "Polytope":
        return Polytope(self.n, self.base, self.cuts + (Halfspace(_as_coords(weights, self.n), bound),), self.scale)

    def scaled(self, t: float) -> "Polytope":
        return Polytope(self.n, self.base, self.cuts, self.scale * t)

    def uncut(self) -> "Polytope":
        return Polytope(self.n, self.base, (), self.scale)

    @property
    def down_closed(self) -> bool:
        return not self.cuts

    def contains(self, x: ArrayLike, tol: float = MEMBER_TOL) -> bool:
        """Membership test; explicit matroids use a feasibility LP."""
        coords = _as_coords(x, self.n)
        if np.any(coords < -tol) or np.any(coords > min(1.0, self.scale) + tol):
            return False
        if not all(cut.holds(coords, tol) for cut in self.cuts):
            return False
        base = self.base
        if base is None:
            return True
        if isinstance(base, Uniform):
            return float(coords.sum()) <= base.k * self.scale + tol
        if isinstance(base, Partition):
            return all(
                float(coords[list(block)].sum()) <= cap * self.scale + tol
                for block, cap in zip(base.blocks, base.caps)
            )
        lp, _ = _base_lp(self.uncut(), np.zeros(self.n), frozenset())
        for u in range(self.n):
            row = np.zeros(lp.n_vars)
            row[u] = 1.0
            lp.add(row, Relation.EQ, float(coords[u]))
        return solve(lp).optimal


def _base_lp(p: Polytope, w: np.ndarray, forbidden: frozenset) -> Tuple[LinearProgram, int]:
    """LP over x (first n variables) describing p; returns (lp, number of x variables)."""
    n = p.n
    base = p.base
    extra = len(base.bases) if isinstance(base, Explicit) else 0
    objective = np.concatenate([w, np.zeros(extra)])
    upper = min(1.0, p.scale)
    bounds = [(0.0, 0.0 if u in forbidden else upper) for u in range(n)] + [(0.0, np.inf)] * extra
    lp = LinearProgram(objective=objective, bounds=bounds)
    if isinstance(base, Uniform):
        lp.add(np.concatenate([np.ones(n), np.zeros(extra)]), Relation.LE, base.k * p.scale)
    elif isinstance(base, Partition):
        for block, cap in zip(base.blocks, base.caps):
            row = np.zeros(n)
            row[list(block)] = 1.0
            lp.add(row, Relation.LE, cap * p.scale)
    elif isinstance(base, Explicit):
        # x ≤ scale·Σ λ_B 1_B over bases, Σ λ = 1
        for u in range(n):
            row = np.zeros(n + extra)
            row[u] = 1.0
            for k, b in enumerate(base.bases):
                if (b >> u) & 1:
                    row[n + k] = -p.scale
            lp.add(row, Relation.LE, 0.0)
        lp.add(np.concatenate([np.zeros(n), np.ones(extra)]), Relation.EQ, 1.0)
    elif base is not None:
        raise CapabilityError(f"Unsupported matroid variant {type(base).__name__}")
    for cut in p.cuts:
        lp.add(np.concatenate([cut.weights, np.zeros(extra)]), Relation.GE, cut.bound)
    return lp, n


def polytope_program(p: Polytope, w: ArrayLike, forbidden: Iterable[int] = ()) -> Tuple[LinearProgram, int]:
    """
    max ⟨w, x⟩ over p as a linear program.

    The first n variables are x; explicit matroids add one convex weight
    per basis after them. Callers may append further variables and rows.
    """
    return _base_lp(p, _as_coords(w, p.n), check_subset(forbidden, p.n))


def _knapsack_cut(p: Polytope, w: np.ndarray, forbidden: frozenset) -> np.ndarray:
    """Exact vertex optimum over scale·cube ∩ {⟨a,x⟩ ≥ c} with a ≤ 0."""
    cut = p.cuts[0]
    a, c = cut.weights, cut.bound
    top = min(1.0, p.scale)
    x = np.where((w > 0) & ~np.isin(np.arange(p.n), list(forbidden)), top, 0.0)
    if c > 0:
        raise InfeasibleError(f"Cut ⟨a,x⟩ ≥ {c} is empty for non-positive a")
    deficit = c - float(a @ x)
    if deficit <= 0:
        return x
    # give back the cheapest objective per unit of cut slack first
    movable = [u for u in range(p.n) if x[u] > 0 and a[u] < 0]
    movable.sort(key=lambda u: (w[u] / -a[u], u))
    for u in movable:
        room = x[u] * -a[u]
        if room >= deficit:
            x[u] -= deficit / -a[u]
            return x
        deficit -= room
        x[u] = 0.0
    return x


def maximize_linear(p: Polytope, w: ArrayLike, forbidden: Iterable[int] = ()) -> FractionalPoint:
    """
    argmax ⟨w, x⟩ over p.

    Pure matroid polytopes (and the cube) use the greedy algorithm and return
    an integral vertex; a cube with one non-positive cut uses an exact
    fractional knapsack; anything else goes through the simplex solver.
    ``forbidden`` coordinates are held at zero.

    Raises:
        InfeasibleError: If the cuts leave p empty.
    """
    weights = _as_coords(w, p.n)
    banned = check_subset(forbidden, p.n)
    top = min(1.0, p.scale)
    if not p.cuts:
        if p.base is None:
            chosen = frozenset(u for u in range(p.n) if weights[u] > 0 and u not in banned)
        else:
            chosen = p.base.greedy(weights, banned)
        return FractionalPoint(top * FractionalPoint.of_set(chosen, p.n).coords)

    if p.base is None and len(p.cuts) == 1 and np.all(p.cuts[0].weights <= 0):
        return FractionalPoint(_knapsack_cut(p, weights, banned))

    lp, nx = _base_lp(p, weights, banned)
    result = solve(lp)
    if not result.optimal:
        raise InfeasibleError(f"Polytope is empty after {len(p.cuts)} cut(s) ({result.status})")
    assert result.x is not None
    return FractionalPoint(np.clip(result.x[:nx], 0.0, 1.0))


def sample_round(x: ArrayLike, rng_seed: int) -> frozenset:
    """R(x): include each u independently with probability x_u."""
    coords = np.asarray(x.coords if isinstance(x, FractionalPoint) else x, dtype=float)
    rng = np.random.default_rng(rng_seed)
    return frozenset(int(u) for u in np.flatnonzero(rng.random(coords.size) < coords))


class _Objective:
    """F + L at a point, exact."""

    def __init__(self, f: SubmodularFn, ell: LinearFn) -> None:
        self.f = f
        self.ell = ell

    def __call__(self, x: np.ndarray) -> float:
        return multilinear_exact(self.f, x) + float(self.ell.weights @ x)


def _snap(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    x[x < FRAC_TOL] = 0.0
    x[x > 1 - FRAC_TOL] = 1.0
    return x


def _fractional(x: np.ndarray, among: Optional[Sequence[int]] = None) -> List[int]:
    idx = range(x.size) if among is None else among
    return [u for u in idx if FRAC_TOL < x[u] < 1 - FRAC_TOL]


def _pick(a: np.ndarray, b: np.ndarray, obj: _Objective, rng: np.random.Generator) -> np.ndarray:
    va, vb = obj(a), obj(b)
    if abs(va - vb) <= TIE_TOL:
        return a if rng.random() < 0.5 else b
    return a if va > vb else b


def _pipage_groups(
    x: np.ndarray,
    groups: Sequence[Tuple[Sequence[int], float]],
    obj: _Objective,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, int]:
    """Pipage inside groups with a single capacity row each (uniform and partition)."""
    moves = 0
    for group, cap in groups:
        while True:
            frac = _fractional(x, group)
            if not frac:
                break
            if len(frac) == 1:
                u = frac[0]
                lo, hi = x.copy(), x.copy()
                lo[u], hi[u] = 0.0, 1.0
                if float(x[list(group)].sum()) - x[u] + 1.0 > cap + FRAC_TOL:
                    x = lo
                else:
                    x = _pick(hi, lo, obj, rng)
            else:
                i, j = frac[0], frac[1]
                up = min(1 - x[i], x[j])
                down = min(x[i], 1 - x[j])
                plus, minus = x.copy(), x.copy()
                plus[i] += up
                plus[j] -= up
                minus[i] -= down
                minus[j] += down
                x = _pick(plus, minus, obj, rng)
            x = _snap(x)
            moves += 1
            logger.debug(f"Pipage move {moves}: {len(_fractional(x))} fractional coordinates left")
    return x, moves


def _pipage_rank(x: np.ndarray, m: Explicit, obj: _Objective, rng: np.random.Generator) -> Tuple[np.ndarray, int]:
    """Pipage against the rank inequalities x(A) ≤ r(A) of an explicit matroid."""
    n = m.n
    masks = np.arange(1 << n, dtype=np.int64)
    bits = mask_bits(masks, n).astype(float)
    sizes = bits.sum(axis=1)
    rank = m.rank_table.astype(float)
    moves = 0
    cap = 10 * n * n + n
    while True:
        frac = _fractional(x)
        if not frac:
            return x, moves
        moves += 1
        if moves > cap:
            raise NumericBreakdownError(f"Pipage rounding did not settle after {cap} moves")
        slack = rank - bits @ x
        frac_mask = to_mask(frac)
        tight = (slack <= FRAC_TOL) & ((masks & frac_mask) != 0)
        if not tight.any():
            i = frac[0]
            has_i = bits[:, i] > 0
            room = min(1 - x[i], float(slack[has_i].min()))
            hi, lo = x.copy(), x.copy()
            hi[i] += room
            lo[i] = 0.0
            x = _snap(_pick(hi, lo, obj, rng))
            continue
        # smallest tight set holding a fractional coordinate holds at least two
        candidates = np.flatnonzero(tight)
        T = int(candidates[np.lexsort((candidates, sizes[candidates]))[0]])
        inside = [u for u in frac if (T >> u) & 1]
        if len(inside) < 2:
            raise NumericBreakdownError("Tight set with a single fractional coordinate")
        i, j = inside[0], inside[1]
        i_not_j = (bits[:, i] > 0) & (bits[:, j] == 0)
        j_not_i = (bits[:, j] > 0) & (bits[:, i] == 0)
        up = min(1 - x[i], x[j], float(slack[i_not_j].min()))
        down = min(x[i], 1 - x[j], float(slack[j_not_i].min()))
        plus, minus = x.copy(), x.copy()
        plus[i] += up
        plus[j] -= up
        minus[i] -= down
        minus[j] += down
        x = _snap(_pick(plus, minus, obj, rng))


def pipage_trace(
    p: Polytope,
    f: SubmodularFn,
    ell: LinearFn,
    x: ArrayLike,
    rng_seed: int,
) -> Tuple[frozenset, int]:
    """
    Pipage rounding that also reports the number of moves.

    Each move goes along e_i − e_j (or a single coordinate) to the endpoint
    with the larger F+L; the extension is convex along these directions, so
    F+L never decreases and the final set S satisfies
    f(S)+ℓ(S) ≥ F(x)+L(x). Exact ties are broken with the seeded RNG.

    Raises:
        ContractViolation: If p carries cuts or x is outside p.
    """
    if p.cuts:
        raise ContractViolation("Rounding works against the matroid polytope without cuts")
    if p.scale != 1.0:
        raise ContractViolation("Rounding needs an unscaled polytope")
    coords = _snap(np.array(_as_coords(x, p.n), dtype=float))
    if not p.contains(coords):
        raise ContractViolation("Point to round lies outside the polytope")
    obj = _Objective(f, ell)
    rng = np.random.default_rng(rng_seed)
    base = p.base
    if base is None:
        coords, moves = _pipage_groups(coords, [([u], 1.0) for u in range(p.n)], obj, rng)
    elif isinstance(base, Uniform):
        coords, moves = _pipage_groups(coords, [(list(range(p.n)), base.k)], obj, rng)
    elif isinstance(base, Partition):
        coords, moves = _pipage_groups(
            coords, [(sorted(b), c) for b, c in zip(base.blocks, base.caps)], obj, rng
        )
    elif isinstance(base, Explicit):
        coords, moves = _pipage_rank(coords, base, obj, rng)
    else:
        raise CapabilityError(f"No pipage tight-set computation for {type(base).__name__}")
    return FractionalPoint(coords).to_set(), moves


def pipage_round(
    p: Polytope,
    f: SubmodularFn,
    ell: LinearFn,
    x: ArrayLike,
    rng_seed: int,
) -> frozenset:
    """Round x ∈ p to an independent set without decreasing F+L."""
    subset, _ = pipage_trace(p, f, ell, x, rng_seed)
    return subset
