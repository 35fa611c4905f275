"""
Set-function representations, evaluation oracles, linear functions and the
multilinear extension.

Subsets are ``frozenset[int]`` over the ground set ``{0, ..., n-1}``; tables
are indexed by bit mask with element 0 as bit 0.

Example:
    >>> f = DirectedCut(2, ((0, 1, 0.3513),))
    >>> evaluate(f, {0})
    0.3513
    >>> multilinear_exact(f, FractionalPoint.full(2, 0.5))
    0.087825
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Iterable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import CapabilityError, ContractViolation, StructuralError

if TYPE_CHECKING:
    from .matroid import Matroid

logger = logging.getLogger(__name__)

Subset = frozenset
ArrayLike = Union[Sequence[float], np.ndarray, "FractionalPoint"]

TOL = 1e-9
COORD_TOL = 1e-12
MAX_ENUM_N = 24
EXHAUSTIVE_AUDIT_N = 16
_CHUNK_BITS = 16


def to_mask(S: Iterable[int]) -> int:
    """Bit mask of a subset, element 0 as bit 0."""
    mask = 0
    for u in S:
        mask |= 1 << int(u)
    return mask


def from_mask(mask: int, n: int) -> frozenset:
    """Subset encoded by ``mask`` over a ground set of size ``n``."""
    return frozenset(u for u in range(n) if (mask >> u) & 1)


def check_subset(S: Iterable[int], n: int) -> frozenset:
    """
    Validate and freeze a subset of ``{0, ..., n-1}``.

    Raises:
        StructuralError: If an element is out of range.
    """
    subset = frozenset(int(u) for u in S)
    for u in subset:
        if not 0 <= u < n:
            raise StructuralError(f"Element {u} is out of range for ground set of size {n}")
    return subset


def indicator(S: Iterable[int], n: int) -> np.ndarray:
    """Characteristic vector 1_S as a float array."""
    vec = np.zeros(n)
    for u in check_subset(S, n):
        vec[u] = 1.0
    return vec


def mask_bits(masks: np.ndarray, n: int) -> np.ndarray:
    """Boolean matrix of shape (len(masks), n) with the bits of each mask."""
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)


def iter_mask_chunks(n: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Yield ``(masks, bits)`` blocks covering all 2^n subsets in order."""
    if n > MAX_ENUM_N:
        raise CapabilityError(f"Enumerating all subsets needs n <= {MAX_ENUM_N}. Got: {n}")
    total = 1 << n
    chunk = 1 << _CHUNK_BITS
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield masks, mask_bits(masks, n)


def _as_coords(x: ArrayLike, n: int) -> np.ndarray:
    coords = x.coords if isinstance(x, FractionalPoint) else np.asarray(x, dtype=float)
    if coords.shape != (n,):
        raise StructuralError(f"Point has shape {coords.shape}, expected ({n},)")
    return coords


@dataclass(frozen=True, eq=False)
class FractionalPoint:
    """
    A vector of [0,1]^n, a point of the cube or of a polytope.

    Coordinates within 1e-12 outside [0,1] are clipped on construction.
    """

    coords: np.ndarray

    def __post_init__(self) -> None:
        coords = np.array(self.coords, dtype=float).reshape(-1)
        if coords.size == 0:
            raise StructuralError("FractionalPoint needs at least one coordinate")
        if np.any(coords < -COORD_TOL) or np.any(coords > 1 + COORD_TOL) or not np.all(np.isfinite(coords)):
            raise StructuralError(f"Coordinates must lie in [0,1]. Got: {coords}")
        coords = np.clip(coords, 0.0, 1.0)
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def zeros(cls, n: int) -> "FractionalPoint":
        return cls(np.zeros(n))

    @classmethod
    def full(cls, n: int, value: float) -> "FractionalPoint":
        return cls(np.full(n, float(value)))

    @classmethod
    def of_set(cls, S: Iterable[int], n: int) -> "FractionalPoint":
        return cls(indicator(S, n))

    @property
    def n(self) -> int:
        return int(self.coords.size)

    def join(self, other: "FractionalPoint") -> "FractionalPoint":
        """Coordinate-wise maximum x ∨ y."""
        return FractionalPoint(np.maximum(self.coords, other.coords))

    def meet(self, other: "FractionalPoint") -> "FractionalPoint":
        """Coordinate-wise minimum x ∧ y."""
        return FractionalPoint(np.minimum(self.coords, other.coords))

    def hadamard(self, other: "FractionalPoint") -> "FractionalPoint":
        """Coordinate-wise product x ∘ y."""
        return FractionalPoint(self.coords * other.coords)

    def minus(self, other: "FractionalPoint") -> "FractionalPoint":
        """x ∖ y, i.e. x − x ∧ y."""
        return FractionalPoint(self.coords - np.minimum(self.coords, other.coords))

    def support(self) -> frozenset:
        return frozenset(int(u) for u in np.flatnonzero(self.coords > COORD_TOL))

    def is_integral(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.minimum(self.coords, 1 - self.coords) <= tol))

    def to_set(self, tol: float = 1e-9) -> frozenset:
        """The set of an integral point."""
        if not self.is_integral(tol):
            raise ContractViolation("Only integral points correspond to sets")
        return frozenset(int(u) for u in np.flatnonzero(self.coords > 0.5))

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"FractionalPoint({np.array2string(self.coords, precision=4)})"


@dataclass(frozen=True, eq=False)
class LinearFn:
    """Linear function ℓ(S) = Σ_{u∈S} ℓ_u."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if not np.all(np.isfinite(weights)):
            raise StructuralError("Linear weights must be finite")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def zeros(cls, n: int) -> "LinearFn":
        return cls(np.zeros(n))

    @property
    def n(self) -> int:
        return int(self.weights.size)

    def value(self, S: Iterable[int]) -> float:
        subset = check_subset(S, self.n)
        return float(sum(self.weights[u] for u in subset))

    def at(self, x: ArrayLike) -> float:
        """L(x) = ⟨ℓ, x⟩."""
        return float(self.weights @ _as_coords(x, self.n))

    def values_bool(self, bits: np.ndarray) -> np.ndarray:
        return bits.astype(float) @ self.weights

    def values_all(self) -> np.ndarray:
        return np.concatenate([self.values_bool(bits) for _, bits in iter_mask_chunks(self.n)])

    def nonpositive(self) -> bool:
        return bool(np.all(self.weights <= 0))

    def nonnegative(self) -> bool:
        return bool(np.all(self.weights >= 0))

    def is_zero(self) -> bool:
        return bool(np.all(self.weights == 0))

    def positive_part(self) -> "LinearFn":
        """ℓ_+, the restriction of ℓ to 𝒩^+."""
        return LinearFn(np.maximum(self.weights, 0.0))

    def negative_part(self) -> "LinearFn":
        """ℓ_−, the restriction of ℓ to 𝒩^− (non-positive weights)."""
        return LinearFn(np.minimum(self.weights, 0.0))

    def __neg__(self) -> "LinearFn":
        return LinearFn(-self.weights)

    def __repr__(self) -> str:
        return f"LinearFn({np.array2string(self.weights, precision=4)})"


class SubmodularFn(ABC):
    """
    Non-negative submodular set function over ``{0, ..., n-1}``.

    Variants implement ``values_bool`` (batch evaluation on a boolean
    membership matrix) and, when they have one, a closed-form multilinear
    extension.
    """

    n: int
    has_closed_form: bool = True

    @abstractmethod
    def values_bool(self, bits: np.ndarray) -> np.ndarray:
        """Values of f on the rows of a boolean membership matrix."""

    @abstractmethod
    def multilinear(self, x: np.ndarray) -> float:
        """Exact multilinear extension at coordinates ``x``."""

    @abstractmethod
    def complement(self) -> "SubmodularFn":
        """g(S) = f(𝒩∖S)."""

    @property
    @abstractmethod
    def kind(self) -> str:
        """Instance-file type tag."""

    def value(self, S: Iterable[int]) -> float:
        subset = check_subset(S, self.n)
        row = np.zeros((1, self.n), dtype=bool)
        row[0, list(subset)] = True
        return float(self.values_bool(row)[0])

    def values_all(self) -> np.ndarray:
        """Values of f on all 2^n subsets, indexed by bit mask."""
        return np.concatenate([self.values_bool(bits) for _, bits in iter_mask_chunks(self.n)])

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """∂F/∂x_u = F(x with x_u=1) − F(x with x_u=0); exact by multilinearity."""
        grad = np.empty(self.n)
        for u in range(self.n):
            hi = x.copy()
            hi[u] = 1.0
            lo = x.copy()
            lo[u] = 0.0
            grad[u] = self.multilinear(hi) - self.multilinear(lo)
        return grad

    def to_table(self) -> "ExplicitTable":
        return ExplicitTable(self.n, self.values_all(), audit=False)


def _check_ground(n: int) -> None:
    if int(n) < 1:
        raise StructuralError(f"Ground set size must be positive. Got: {n}")


def _edge_arrays(n: int, edges: Sequence[Sequence[float]], what: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    tails = np.array([int(e[0]) for e in edges], dtype=np.int64)
    heads = np.array([int(e[1]) for e in edges], dtype=np.int64)
    weights = np.array([float(e[2]) for e in edges], dtype=float)
    if tails.size and (tails.min() < 0 or heads.min() < 0 or tails.max() >= n or heads.max() >= n):
        raise StructuralError(f"{what} endpoint out of range for n={n}")
    if np.any(tails == heads):
        raise StructuralError(f"{what} self-loops are not allowed")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise StructuralError(f"{what} weights must be finite and non-negative")
    return tails, heads, weights


@dataclass(frozen=True, eq=False)
class DirectedCut(SubmodularFn):
    """Weighted directed cut: edge (a, b, w) counts w when a ∈ S and b ∉ S."""

    n: int
    edges: Tuple[Tuple[int, int, float], ...] = ()
    tails: np.ndarray = field(init=False, repr=False)
    heads: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        _check_ground(self.n)
        edges = tuple((int(a), int(b), float(w)) for a, b, w in self.edges)
        object.__setattr__(self, "edges", edges)
        tails, heads, weights = _edge_arrays(self.n, edges, "Arc")
        object.__setattr__(self, "tails", tails)
        object.__setattr__(self, "heads", heads)
        object.__setattr__(self, "weights", weights)

    @property
    def kind(self) -> str:
        return "dicut"

    def values_bool(self, bits: np.ndarray) -> np.ndarray:
        cut = bits[:, self.tails] & ~bits[:, self.heads]
        return cut.astype(float) @ self.weights

    def multilinear(self, x: np.ndarray) -> float:
        return float(np.sum(self.weights * x[self.tails] * (1.0 - x[self.heads])))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        grad = np.zeros(self.n)
        np.add.at(grad, self.tails, self.weights * (1.0 - x[self.heads]))
        np.add.at(grad, self.heads, -self.weights * x[self.tails])
        return grad

    def out_weight(self) -> np.ndarray:
        """Total weight of arcs leaving each vertex."""
        out = np.zeros(self.n)
        np.add.at(out, self.tails, self.weights)
        return out

    def complement(self) -> "DirectedCut":
        # a ∉ S and b ∈ S is the reversed arc cut by S
        return DirectedCut(self.n, tuple((b, a, w) for a, b, w in self.edges))


@dataclass(frozen=True, eq=False)
class UndirectedCut(SubmodularFn):
    """Weighted undirected cut: edge {a, b} counts w when exactly one endpoint is in S."""

    n: int
    edges: Tuple[Tuple[int, int, float], ...] = ()
    ends_a: np.ndarray = field(init=False, repr=False)
    ends_b: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        _check_ground(self.n)
        edges = tuple((int(a), int(b), float(w)) for a, b, w in self.edges)
        object.__setattr__(self, "edges", edges)
        ends_a, ends_b, weights = _edge_arrays(self.n, edges, "Edge")
        object.__setattr__(self, "ends_a", ends_a)
        object.__setattr__(self, "ends_b", ends_b)
        object.__setattr__(self, "weights", weights)

    @property
    def kind(self) -> str:
        return "cut"

    def values_bool(self, bits: np.ndarray) -> np.ndarray:
        cut = bits[:, self.ends_a] ^ bits[:, self.ends_b]
        return cut.astype(float) @ self.weights

    def multilinear(self, x: np.ndarray) -> float:
        xa, xb = x[self.ends_a], x[self.ends_b]
        return float(np.sum(self.weights * (xa * (1.0 - xb) + xb * (1.0 - xa))))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        grad = np.zeros(self.n)
        np.add.at(grad, self.ends_a, self.weights * (1.0 - 2.0 * x[self.ends_b]))
        np.add.at(grad, self.ends_b, self.weights * (1.0 - 2.0 * x[self.ends_a]))
        return grad

    def complement(self) -> "UndirectedCut":
        return self


@dataclass(frozen=True, eq=False)
class HyperDirectedCut(SubmodularFn):
    """
    Directed hyperedge cut: (T, H, w) counts w iff S ∩ T ≠ ∅ and H ⊄ S.

    Tails and heads of a hyperedge must be non-empty and disjoint, which
    makes the multilinear extension the product
    w·(1 − Π_{T}(1 − x))·(1 − Π_{H} x).
    """

    n: int
    hyperedges: Tuple[Tuple[frozenset, frozenset, float], ...] = ()
    tail_masks: np.ndarray = field(init=False, repr=False)
    head_masks: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        _check_ground(self.n)
        cleaned = []
        for tails, heads, w in self.hyperedges:
            tails = check_subset(tails, self.n)
            heads = check_subset(heads, self.n)
            if not tails or not heads:
                raise StructuralError("Hyperedge tails and heads must be non-empty")
            if tails & heads:
                raise StructuralError(f"Hyperedge tails and heads overlap: {sorted(tails & heads)}")
            if w < 0 or not np.isfinite(w):
                raise StructuralError("Hyperedge weights must be finite and non-negative")
            cleaned.append((tails, heads, float(w)))
        object.__setattr__(self, "hyperedges", tuple(cleaned))
        member = lambda sets: np.array(  # noqa: E731
            [[u in s for u in range(self.n)] for s in sets], dtype=bool
        ).reshape(len(sets), self.n)
        object.__setattr__(self, "tail_masks", member([h[0] for h in cleaned]))
        object.__setattr__(self, "head_masks", member([h[1] for h in cleaned]))
        object.__setattr__(self, "weights", np.array([h[2] for h in cleaned], dtype=float))

    @property
    def kind(self) -> str:
        return "hyperdicut"

    def values_bool(self, bits: np.ndarray) -> np.ndarray:
        rows = bits.astype(np.int64)
        tail_hit = rows @ self.tail_masks.T.astype(np.int64) > 0
        head_in = rows @ self.head_masks.T.astype(np.int64) == self.head_masks.sum(axis=1)
        return (tail_hit & ~head_in).astype(float) @ self.weights

    def multilinear(self, x: np.ndarray) -> float:
        if not self.hyperedges:
            return 0.0
        miss_tails = np.prod(np.where(self.tail_masks, 1.0 - x, 1.0), axis=1)
        all_heads = np.prod(np.where(self.head_masks, x, 1.0), axis=1)
        return float(np.sum(self.weights * (1.0 - miss_tails) * (1.0 - all_heads)))

    def complement(self) -> "HyperDirectedCut":
        return HyperDirectedCut(self.n, tuple((heads, tails, w) for tails, heads, w in self.hyperedges))


@dataclass(frozen=True, eq=False)
class Coverage(SubmodularFn):
    """
    Weighted coverage: f(S) is the total weight of universe items covered by S.

    ``covers[u]`` lists the items covered by element u.
    """

    n: int
    covers: Tuple[frozenset, ...] = ()
    item_weights: Tuple[float, ...] = ()
    incidence: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        _check_ground(self.n)
        covers = tuple(frozenset(int(j) for j in c) for c in self.covers)
        weights = np.array(self.item_weights, dtype=float)
        if len(covers) != self.n:
            raise StructuralError(f"Coverage needs one item list per element. Got {len(covers)} for n={self.n}")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise StructuralError("Coverage item weights must be finite and non-negative")
        m = weights.size
        incidence = np.zeros((m, self.n), dtype=bool)
        for u, items in enumerate(covers):
            for j in items:
                if not 0 <= j < m:
                    raise StructuralError(f"Element {u} covers unknown item {j}")
                incidence[j, u] = True
        object.__setattr__(self, "covers", covers)
        object.__setattr__(self, "item_weights", tuple(float(w) for w in weights))
        object.__setattr__(self, "incidence", incidence)

    @property
    def kind(self) -> str:
        return "coverage"

    def values_bool(self, bits: np.ndarray) -> np.ndarray:
        covered = bits.astype(np.int64) @ self.incidence.T.astype(np.int64) > 0
        return covered.astype(float) @ np.asarray(self.item_weights)

    def multilinear(self, x: np.ndarray) -> float:
        if not self.item_weights:
            return 0.0
        uncovered = np.prod(np.where(self.incidence, 1.0 - x, 1.0), axis=1)
        return float(np.asarray(self.item_weights) @ (1.0 - uncovered))

    def complement(self) -> "ExplicitTable":
        return self.to_table().complement()


@dataclass(frozen=True, eq=False)
class ExplicitTable(SubmodularFn):
    """
    Table of 2^n non-negative values indexed by bit mask.

    The table is audited for submodularity on construction (exhaustively for
    n ≤ 16, by random spot checks above) unless ``audit`` is False.
    """

    n: int
    values: np.ndarray = field(default_factory=lambda: np.zeros(2))
    audit: bool = field(default=True, repr=False)
    has_closed_form = False

    def __post_init__(self) -> None:
        _check_ground(self.n)
        if self.n > MAX_ENUM_N:
            raise CapabilityError(f"ExplicitTable supports n <= {MAX_ENUM_N}. Got: {self.n}")
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size != 1 << self.n:
            raise StructuralError(f"Table needs 2^{self.n} = {1 << self.n} values. Got: {values.size}")
        if np.any(values < -TOL) or not np.all(np.isfinite(values)):
            raise StructuralError("Table values must be finite and non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.audit and not audit_submodular(self):
            raise StructuralError("Table fails the submodularity audit")

    @property
    def kind(self) -> str:
        return "table"

    def values_bool(self, bits: np.ndarray) -> np.ndarray:
        masks = bits.astype(np.int64) @ (np.int64(1) << np.arange(self.n, dtype=np.int64))
        return self.values[masks]

    def values_all(self) -> np.ndarray:
        return np.array(self.values)

    def value(self, S: Iterable[int]) -> float:
        return float(self.values[to_mask(check_subset(S, self.n))])

    def multilinear(self, x: np.ndarray) -> float:
        return float(subset_probabilities(x) @ self.values)

    def complement(self) -> "ExplicitTable":
        full = (1 << self.n) - 1
        masks = np.arange(1 << self.n, dtype=np.int64)
        return ExplicitTable(self.n, self.values[full ^ masks], audit=False)

    def to_table(self) -> "ExplicitTable":
        return self


def subset_probabilities(x: np.ndarray) -> np.ndarray:
    """P[R(x) = S] for every mask S, element 0 as bit 0."""
    probs = np.ones(1)
    for xu in x:
        probs = np.concatenate([probs * (1.0 - xu), probs * xu])
    return probs


@dataclass(frozen=True)
class Instance:
    """
    A regularized problem max f(S) + ℓ(S) subject to S ∈ ℐ.

    ``constraint`` is None for the unconstrained problem.
    """

    f: SubmodularFn
    ell: LinearFn
    constraint: Optional["Matroid"] = None

    def __post_init__(self) -> None:
        if self.ell.n != self.f.n:
            raise StructuralError(f"ℓ has {self.ell.n} weights for a ground set of size {self.f.n}")
        if self.constraint is not None and self.constraint.n != self.f.n:
            raise StructuralError("Constraint ground set does not match f")

    @property
    def n(self) -> int:
        return self.f.n

    def objective(self, S: Iterable[int]) -> float:
        return evaluate(self.f, S) + self.ell.value(S)


def evaluate(f: SubmodularFn, S: Iterable[int]) -> float:
    """
    Value oracle f(S).

    Raises:
        StructuralError: If S has an element outside the ground set.
    """
    return f.value(S)


def marginal(f: SubmodularFn, u: int, S: Iterable[int]) -> float:
    """
    Marginal value f(u | S) = f(S ∪ {u}) − f(S).

    Raises:
        ContractViolation: If u ∈ S.
    """
    subset = check_subset(S, f.n)
    check_subset((u,), f.n)
    if u in subset:
        raise ContractViolation(f"Element {u} is already in S")
    return f.value(subset | {u}) - f.value(subset)


def multilinear_exact(f: SubmodularFn, x: ArrayLike) -> float:
    """
    Exact multilinear extension F(x) = E[f(R(x))].

    Cut and coverage variants use their product closed forms for any n;
    tables enumerate all 2^n outcomes.

    Raises:
        CapabilityError: If enumeration would be needed beyond n = 24.
    """
    coords = _as_coords(x, f.n)
    if not f.has_closed_form and f.n > MAX_ENUM_N:
        raise CapabilityError(f"Exact multilinear extension needs n <= {MAX_ENUM_N}. Got: {f.n}")
    return f.multilinear(coords)


def _sample_bits(x: np.ndarray, samples: int, rng: np.random.Generator) -> np.ndarray:
    return rng.random((samples, x.size)) < x


def multilinear_sampled(f: SubmodularFn, x: ArrayLike, samples: int, rng_seed: int) -> Tuple[float, float]:
    """
    Monte Carlo estimate of F(x).

    Args:
        f: Set function.
        x: Point of [0,1]^n.
        samples: Number of independent draws of R(x).
        rng_seed: Seed; the estimate is a pure function of it.

    Returns:
        (mean, standard error of the mean).
    """
    if samples < 1:
        raise ContractViolation(f"samples must be at least 1. Got: {samples}")
    coords = _as_coords(x, f.n)
    rng = np.random.default_rng(rng_seed)
    vals = f.values_bool(_sample_bits(coords, samples, rng))
    mean = float(vals.mean())
    if samples == 1:
        return mean, 0.0
    return mean, float(vals.std(ddof=1) / np.sqrt(samples))


def multilinear_gradient(f: SubmodularFn, x: ArrayLike) -> np.ndarray:
    """Exact gradient of F at x."""
    coords = _as_coords(x, f.n)
    if not f.has_closed_form and f.n > MAX_ENUM_N:
        raise CapabilityError(f"Exact gradient needs n <= {MAX_ENUM_N}. Got: {f.n}")
    return f.gradient(coords)


def sampled_gradient(f: SubmodularFn, x: ArrayLike, samples: int, rng_seed: int) -> np.ndarray:
    """Per-coordinate estimate of E[f(R ∪ {u}) − f(R ∖ {u})], common draws for all u."""
    coords = _as_coords(x, f.n)
    rng = np.random.default_rng(rng_seed)
    bits = _sample_bits(coords, samples, rng)
    grad = np.empty(f.n)
    for u in range(f.n):
        hi = bits.copy()
        hi[:, u] = True
        lo = bits.copy()
        lo[:, u] = False
        grad[u] = float(np.mean(f.values_bool(hi) - f.values_bool(lo)))
    return grad


def complement_transform(f: SubmodularFn, ell: LinearFn) -> Tuple[SubmodularFn, LinearFn]:
    """
    Return (g, −ℓ) with g(S) = f(𝒩∖S).

    Cut variants complement in closed form; coverage falls back to a table.
    Applying the transform twice gives back (f, ℓ) on every subset.
    """
    if ell.n != f.n:
        raise StructuralError("ℓ and f have different ground sets")
    return f.complement(), -ell


def is_nonnegative(f: SubmodularFn) -> bool:
    return bool(np.all(f.values_all() >= -TOL))


def audit_submodular(
    f: SubmodularFn,
    tol: float = TOL,
    spot_checks: int = 10_000,
    seed: int = 0,
) -> bool:
    """
    Check f(S+u) + f(S+v) ≥ f(S+u+v) + f(S) for u, v ∉ S.

    Exhaustive for n ≤ 16; above that, ``spot_checks`` random triples.
    """
    n = f.n
    if n < 2:
        return True
    if n <= EXHAUSTIVE_AUDIT_N:
        values = f.values_all()
        masks = np.arange(1 << n, dtype=np.int64)
        for u in range(n):
            for v in range(u + 1, n):
                base = masks[((masks >> u) & 1 == 0) & ((masks >> v) & 1 == 0)]
                bu, bv = np.int64(1) << u, np.int64(1) << v
                slack = values[base | bu] + values[base | bv] - values[base | bu | bv] - values[base]
                if slack.min() < -tol:
                    logger.debug(f"Submodularity fails for u={u}, v={v}: slack {slack.min():.3e}")
                    return False
        return True

    rng = np.random.default_rng(seed)
    for _ in range(spot_checks):
        u, v = rng.choice(n, size=2, replace=False)
        members = rng.random(n) < 0.5
        members[[u, v]] = False
        S = frozenset(int(w) for w in np.flatnonzero(members))
        slack = f.value(S | {u}) + f.value(S | {v}) - f.value(S | {u, v}) - f.value(S)
        if slack < -tol:
            return False
    return True


def describe(f: SubmodularFn) -> dict[str, Any]:
    """Short summary used in log lines and result records."""
    summary: dict[str, Any] = {"type": f.kind, "n": f.n}
    if isinstance(f, (DirectedCut, UndirectedCut)):
        summary["edges"] = len(f.edges)
    elif isinstance(f, HyperDirectedCut):
        summary["hyperedges"] = len(f.hyperedges)
    elif isinstance(f, Coverage):
        summary["items"] = len(f.item_weights)
    return summary
