"""
Brute-force oracles and instance generators.

Every generator returns an ``Instance``; the adversarial families are the
small constructions behind the tightness and hardness results, and the
``random_*`` families feed the property tests and ``regsubmod verify``.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from .core import (
    Coverage,
    DirectedCut,
    ExplicitTable,
    HyperDirectedCut,
    Instance,
    LinearFn,
    SubmodularFn,
    UndirectedCut,
    from_mask,
    mask_bits,
)
from .exceptions import CapabilityError, ContractViolation
from .matroid import Explicit, Matroid, Partition, Uniform

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_N = 20
GV_KAPPA = 0.3513
HYPEREDGE_COEF = 0.2037

ELL_DISTS = ("zero", "nonpos", "nonneg", "mixed")
WEIGHT_DISTS = ("uniform", "unit", "exponential")
MATROID_KINDS = ("uniform", "partition", "graphic")


def brute_force_opt(
    f: SubmodularFn,
    ell: LinearFn,
    constraint: Optional[Matroid] = None,
    alpha: float = 1.0,
    beta: float = 1.0,
) -> Tuple[frozenset, float]:
    """
    Exhaustive maximizer of α·f(S) + β·ℓ(S) over feasible S.

    Ties go to the smallest bit mask.

    Raises:
        CapabilityError: If n > 20.
    """
    if f.n > BRUTE_FORCE_MAX_N:
        raise CapabilityError(f"brute_force_opt supports n <= {BRUTE_FORCE_MAX_N}. Got: {f.n}")
    scores = alpha * f.values_all() + beta * ell.values_all()
    if constraint is not None:
        scores = np.where(constraint.feasible_masks(), scores, -np.inf)
    best = int(np.argmax(scores))
    return from_mask(best, f.n), float(scores[best])


def dicut_opt_dp(f: DirectedCut, ell: LinearFn) -> Tuple[frozenset, float]:
    """
    Unconstrained max of f + ℓ for a directed cut, by a bit-mask recurrence.

    Adding u to S gains out(u → 𝒩∖S) − in(S → u) + ℓ_u, so each mask's
    value follows from the mask without its highest element.
    """
    n = f.n
    adj = np.zeros((n, n))
    np.add.at(adj, (f.tails, f.heads), f.weights)
    value = np.zeros(1 << n)
    for mask in range(1, 1 << n):
        u = mask.bit_length() - 1
        rest = mask ^ (1 << u)
        inside = mask_bits(np.array([rest]), n)[0]
        gain = adj[u, ~inside].sum() - adj[inside, u].sum() + ell.weights[u]
        value[mask] = value[rest] + gain
    best = int(np.argmax(value))
    return from_mask(best, n), float(value[best])


def _draw_ell(rng: np.random.Generator, n: int, dist: str, scale: float) -> LinearFn:
    if dist not in ELL_DISTS:
        raise ContractViolation(f"Unknown ell distribution {dist!r}. Valid: {', '.join(ELL_DISTS)}")
    if dist == "zero":
        return LinearFn.zeros(n)
    draw = rng.uniform(0.0, scale, n)
    if dist == "nonpos":
        return LinearFn(-draw)
    if dist == "nonneg":
        return LinearFn(draw)
    return LinearFn(rng.uniform(-scale, scale, n))


def _draw_weights(rng: np.random.Generator, m: int, dist: str) -> np.ndarray:
    if dist == "uniform":
        return rng.uniform(0.1, 1.0, m)
    if dist == "unit":
        return np.ones(m)
    if dist == "exponential":
        return rng.exponential(1.0, m)
    raise ContractViolation(f"Unknown weight distribution {dist!r}. Valid: {', '.join(WEIGHT_DISTS)}")


def _check_density(n: int, density: float) -> None:
    if n < 2:
        raise ContractViolation(f"Random graphs need n >= 2. Got: {n}")
    if not 0.0 < density <= 1.0:
        raise ContractViolation(f"density must lie in (0, 1]. Got: {density}")


def random_dicut(
    n: int,
    density: float = 0.4,
    weight_dist: str = "uniform",
    ell_dist: str = "mixed",
    seed: int = 0,
    ell_scale: float = 0.5,
    constraint: Optional[Matroid] = None,
) -> Instance:
    """Random weighted digraph; each ordered pair is an arc with probability ``density``."""
    _check_density(n, density)
    rng = np.random.default_rng(seed)
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b and rng.random() < density]
    weights = _draw_weights(rng, len(pairs), weight_dist)
    f = DirectedCut(n, tuple((a, b, float(w)) for (a, b), w in zip(pairs, weights)))
    return Instance(f, _draw_ell(rng, n, ell_dist, ell_scale), constraint)


def random_cut(
    n: int,
    density: float = 0.5,
    weight_dist: str = "uniform",
    ell_dist: str = "mixed",
    seed: int = 0,
    ell_scale: float = 0.5,
    constraint: Optional[Matroid] = None,
) -> Instance:
    """Random weighted undirected graph."""
    _check_density(n, density)
    rng = np.random.default_rng(seed)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < density]
    weights = _draw_weights(rng, len(pairs), weight_dist)
    f = UndirectedCut(n, tuple((a, b, float(w)) for (a, b), w in zip(pairs, weights)))
    return Instance(f, _draw_ell(rng, n, ell_dist, ell_scale), constraint)


def random_coverage(
    n: int,
    items: int = 8,
    ell_dist: str = "mixed",
    seed: int = 0,
    ell_scale: float = 0.5,
    constraint: Optional[Matroid] = None,
) -> Instance:
    """Random weighted coverage; each element covers each item with probability 0.3."""
    if items < 1:
        raise ContractViolation(f"items must be positive. Got: {items}")
    rng = np.random.default_rng(seed)
    covers = tuple(frozenset(int(j) for j in np.flatnonzero(rng.random(items) < 0.3)) for _ in range(n))
    f = Coverage(n, covers, tuple(float(w) for w in rng.uniform(0.1, 1.0, items)))
    return Instance(f, _draw_ell(rng, n, ell_dist, ell_scale), constraint)


def _graphic_family(n: int, rng: np.random.Generator) -> frozenset:
    """Forests of a random multigraph with n edges on about n/2 + 1 vertices."""
    vertices = max(2, n // 2 + 1)
    ends = [tuple(rng.choice(vertices, size=2, replace=False)) for _ in range(n)]
    family = []
    for mask in range(1 << n):
        parent = list(range(vertices))

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        acyclic = True
        for u in range(n):
            if (mask >> u) & 1:
                ra, rb = find(int(ends[u][0])), find(int(ends[u][1]))
                if ra == rb:
                    acyclic = False
                    break
                parent[ra] = rb
        if acyclic:
            family.append(mask)
    return frozenset(family)


def random_matroid(n: int, kind: str = "uniform", seed: int = 0) -> Matroid:
    """
    Random matroid of the given kind.

    ``uniform`` draws k in [1, n]; ``partition`` splits 𝒩 into 2 or 3 blocks
    with random caps; ``graphic`` is the forest matroid of a random
    multigraph, returned as an explicit family (n ≤ 12).
    """
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        return Uniform(n, int(rng.integers(1, n + 1)))
    if kind == "partition":
        count = min(n, int(rng.integers(2, 4)))
        owner = np.concatenate([np.arange(count), rng.integers(0, count, n - count)])
        rng.shuffle(owner)
        blocks = tuple(frozenset(int(u) for u in np.flatnonzero(owner == b)) for b in range(count))
        caps = tuple(int(rng.integers(1, len(block) + 1)) for block in blocks)
        return Partition(n, blocks, caps)
    if kind == "graphic":
        if n > 12:
            raise CapabilityError(f"Graphic matroids are enumerated for n <= 12. Got: {n}")
        return Explicit(n, _graphic_family(n, rng))
    raise ContractViolation(f"Unknown matroid kind {kind!r}. Valid: {', '.join(MATROID_KINDS)}")


def gharan_vondrak(
    k: int,
    t: int = 1,
    kappa: float = GV_KAPPA,
    ell_p: float = 0.0,
    ell_q: float = 0.0,
) -> Instance:
    """
    Two directed hyperedges ({a_1..a_k} → a), ({b_1..b_k} → b) of weight κ
    plus the undirected edge (a, b) of weight 1−κ, with every a_i and b_i
    replaced by t copies.

    Element a is 0, b is 1, copy j of a_i is 2 + i·t + j and copy j of b_i
    is 2 + k·t + i·t + j. Tails carry ℓ_p, the centre elements ℓ_q, and the
    constraint is |S| ≤ t + 1. With t = 1 the function is a HyperDirectedCut;
    with more copies a tail group counts fractionally and the function is
    exported as an ExplicitTable.
    """
    if k < 1 or t < 1:
        raise ContractViolation(f"k and t must be positive. Got: k={k}, t={t}")
    if not 0.0 <= kappa <= 1.0:
        raise ContractViolation(f"kappa must lie in [0,1]. Got: {kappa}")
    n = 2 + 2 * k * t
    ell = LinearFn(np.array([ell_q, ell_q] + [ell_p] * (2 * k * t)))
    a_groups = [list(range(2 + i * t, 2 + (i + 1) * t)) for i in range(k)]
    b_groups = [list(range(2 + k * t + i * t, 2 + k * t + (i + 1) * t)) for i in range(k)]
    if t == 1:
        f: SubmodularFn = HyperDirectedCut(
            n,
            (
                (frozenset(g[0] for g in a_groups), frozenset({0}), kappa),
                (frozenset(g[0] for g in b_groups), frozenset({1}), kappa),
                (frozenset({0}), frozenset({1}), 1.0 - kappa),
                (frozenset({1}), frozenset({0}), 1.0 - kappa),
            ),
        )
    else:
        f = ExplicitTable(n, _gv_values(n, t, kappa, a_groups, b_groups), audit=n <= 16)
    return Instance(f, ell, Uniform(n, t + 1))


def _gv_values(n: int, t: int, kappa: float, a_groups: List[List[int]], b_groups: List[List[int]]) -> np.ndarray:
    if n > 24:
        raise CapabilityError(f"Copied instances are tabulated for n <= 24. Got: {n}")
    masks = np.arange(1 << n, dtype=np.int64)
    bits = mask_bits(masks, n)
    xa, xb = bits[:, 0], bits[:, 1]
    hit_a = 1.0 - np.prod([1.0 - bits[:, g].sum(axis=1) / t for g in a_groups], axis=0)
    hit_b = 1.0 - np.prod([1.0 - bits[:, g].sum(axis=1) / t for g in b_groups], axis=0)
    return (1.0 - kappa) * (xa ^ xb) + kappa * (hit_a * ~xa + hit_b * ~xb)


def symmetric_point(k: int, t: int, q: float, p: float) -> np.ndarray:
    """The symmetrized point of ``gharan_vondrak(k, t)``: centre at q, every copy at p/k."""
    return np.array([q, q] + [p / k] * (2 * k * t))


def dg_tight_det(r: float, eps: float) -> Instance:
    """
    Arcs u_1 → u_2 of weight r + ε/2 and u_2 → u_1 of weight 1, ℓ = (0, r).

    Deterministic double greedy with parameter r keeps u_1 and ends at
    r + ε/2, while {u_2} is worth f = 1, ℓ = r.
    """
    if r < 1 or eps <= 0:
        raise ContractViolation(f"Need r >= 1 and eps > 0. Got: r={r}, eps={eps}")
    return Instance(DirectedCut(2, ((0, 1, r + eps / 2.0), (1, 0, 1.0))), LinearFn(np.array([0.0, r])))


def _star(n: int, r: float) -> DirectedCut:
    """Leaves 0..n−2 with arcs leaf → centre of weight r/(n−1) and centre → leaf of 1/(n−1); centre n−1."""
    if n < 2 or r < 1:
        raise ContractViolation(f"Need n >= 2 and r >= 1. Got: n={n}, r={r}")
    centre, m = n - 1, n - 1
    arcs = [(i, centre, r / m) for i in range(m)] + [(centre, i, 1.0 / m) for i in range(m)]
    return DirectedCut(n, tuple(arcs))


def dg_tight_rand(n: int, r: float) -> Instance:
    """Star instance on which randomized double greedy keeps each leaf with probability r/(r+1); ℓ(centre) = r−1."""
    f = _star(n, r)
    ell = np.zeros(n)
    ell[n - 1] = r - 1.0
    return Instance(f, LinearFn(ell))


def dg_rand_bad(n: int, r: float) -> Instance:
    """Same star with ℓ(centre) = 0 and ℓ(leaf) = (1−r)/(n−1); {centre} is worth 1."""
    f = _star(n, r)
    ell = np.full(n, (1.0 - r) / (n - 1))
    ell[n - 1] = 0.0
    return Instance(f, LinearFn(ell))


def _star_dg_expectation(n: int, r: float, ell_centre: float, ell_leaf: float) -> float:
    """
    Exact E[f + ℓ] of randomized double greedy in index order on a star.

    Leaf decisions do not depend on earlier leaves, so the number m of
    kept leaves is binomial; the centre then goes to the better side.
    """
    m_total = n - 1
    a = max(r / m_total + ell_leaf, 0.0)
    b = max(1.0 / m_total - ell_leaf, 0.0)
    keep = a / (a + b) if a + b > 0 else 0.0
    m = np.arange(m_total + 1)
    with_centre = (m_total - m) / m_total + ell_centre + m * ell_leaf
    without = r * m / m_total + m * ell_leaf
    return float(stats.binom.pmf(m, m_total, keep) @ np.maximum(with_centre, without))


def dg_tight_rand_expectation(n: int, r: float) -> float:
    """Exact randomized double greedy expectation on ``dg_tight_rand(n, r)``; approaches r²/(r+1)."""
    _star(n, r)
    return _star_dg_expectation(n, r, r - 1.0, 0.0)


def dg_rand_bad_expectation(n: int, r: float) -> float:
    """Exact randomized double greedy expectation on ``dg_rand_bad(n, r)``; approaches 1/(r+1)."""
    _star(n, r)
    return _star_dg_expectation(n, r, 0.0, (1.0 - r) / (n - 1))


def online_bad(alpha: float) -> Tuple[Instance, Instance]:
    """
    The two instances that defeat any deterministic online algorithm.

    Both use f = α/2·[u_1 ∈ S, u_2 ∉ S] + [u_2 ∈ S, u_1 ∉ S]; they differ
    only in ℓ(u_2), which is 0 in the first and −1 in the second. Keeping
    u_1 loses on the first ({u_2} is worth 1), dropping it loses on the
    second ({u_1} is worth α/2).
    """
    if not 0.0 < alpha <= 1.0:
        raise ContractViolation(f"alpha must lie in (0, 1]. Got: {alpha}")
    f = DirectedCut(2, ((0, 1, alpha / 2.0), (1, 0, 1.0)))
    return Instance(f, LinearFn(np.zeros(2))), Instance(f, LinearFn(np.array([0.0, -1.0])))


def hyperedge_0408(k: int, coef: float = HYPEREDGE_COEF) -> Instance:
    """
    One generalized hyperedge (a_1..a_k → b_1..b_k) with ℓ(a_i) = −c, ℓ(b_i) = c.

    {a_1, b_1, ..., b_{k−1}} is worth 1 + c(k−2) while the symmetrized
    optimum is c·k.
    """
    if k < 2:
        raise ContractViolation(f"k must be at least 2. Got: {k}")
    f = HyperDirectedCut(2 * k, ((frozenset(range(k)), frozenset(range(k, 2 * k)), 1.0),))
    return Instance(f, LinearFn(np.array([-coef] * k + [coef] * k)))


def csm_dicut_arcs(k: int) -> Instance:
    """
    k disjoint unit arcs a_i → b_i under the matroid "at most one a, at most
    k−1 b's", with ℓ(a_i) = 0 and ℓ(b_i) = 1/k.
    """
    if k < 2:
        raise ContractViolation(f"k must be at least 2. Got: {k}")
    f = DirectedCut(2 * k, tuple((i, k + i, 1.0) for i in range(k)))
    matroid = Partition(2 * k, (frozenset(range(k)), frozenset(range(k, 2 * k))), (1, k - 1))
    return Instance(f, LinearFn(np.array([0.0] * k + [1.0 / k] * k)), matroid)


GENERATORS: Dict[str, Tuple[str, ...]] = {
    "gharan-vondrak": ("k", "t", "kappa"),
    "dg-tight-det": ("r", "eps"),
    "dg-tight-rand": ("n", "r"),
    "dg-rand-bad": ("n", "r"),
    "online-bad": ("alpha",),
    "hyperedge-0408": ("k",),
    "csm-dicut-arcs": ("k",),
    "random-dicut": ("n", "density", "seed"),
    "random-cut": ("n", "density", "seed"),
    "random-coverage": ("n", "items", "seed"),
}


def generate(family: str, params: Dict[str, float]) -> List[Instance]:
    """
    Build a family by name from a flat parameter dict (the ``gen`` command).

    Returns a list because ``online-bad`` yields two instances.
    """
    if family not in GENERATORS:
        raise ContractViolation(f"Unknown family {family!r}. Valid: {', '.join(GENERATORS)}")
    unknown = set(params) - set(GENERATORS[family])
    if unknown:
        raise ContractViolation(f"Family {family} does not take {sorted(unknown)}")
    ints = {"k", "t", "n", "seed", "items"}
    kwargs = {key: int(v) if key in ints else float(v) for key, v in params.items()}
    builders = {
        "gharan-vondrak": gharan_vondrak,
        "dg-tight-det": dg_tight_det,
        "dg-tight-rand": dg_tight_rand,
        "dg-rand-bad": dg_rand_bad,
        "hyperedge-0408": hyperedge_0408,
        "csm-dicut-arcs": csm_dicut_arcs,
        "random-dicut": random_dicut,
        "random-cut": random_cut,
        "random-coverage": random_coverage,
    }
    if family == "online-bad":
        return list(online_bad(**kwargs))
    return [builders[family](**kwargs)]
