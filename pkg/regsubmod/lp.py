"""
Dense two-phase tableau simplex returning basic (vertex) optimal solutions.

Bland's rule picks entering and leaving variables, so degenerate programs
cannot cycle. Variable bounds are folded into the standard form: a finite
lower bound shifts the variable, a finite upper bound becomes a row, and a
free variable is split into a difference of two non-negative ones.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .enums import LpStatus, Relation, Sense
from .exceptions import ContractViolation, NumericBreakdownError, StructuralError

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-8
MAX_ITERATIONS = 50_000


@dataclass
class Constraint:
    row: np.ndarray
    relation: Relation
    rhs: float


@dataclass
class LinearProgram:
    """
    optimize ⟨objective, x⟩ subject to rows and per-variable bounds.

    Bounds default to [0, +∞) for every variable.
    """

    objective: np.ndarray
    constraints: List[Constraint] = field(default_factory=list)
    bounds: Optional[List[Tuple[float, float]]] = None
    sense: Sense = Sense.MAX

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=float).reshape(-1)
        n = self.objective.size
        if self.bounds is None:
            self.bounds = [(0.0, np.inf)] * n
        if len(self.bounds) != n:
            raise StructuralError(f"Expected {n} bounds, got {len(self.bounds)}")
        for con in self.constraints:
            self._check_row(con)

    @property
    def n_vars(self) -> int:
        return int(self.objective.size)

    def _check_row(self, con: Constraint) -> None:
        con.row = np.asarray(con.row, dtype=float).reshape(-1)
        if con.row.size != self.n_vars:
            raise StructuralError(f"Constraint row has {con.row.size} entries, expected {self.n_vars}")
        if not np.all(np.isfinite(con.row)) or not np.isfinite(con.rhs):
            raise StructuralError("Constraint coefficients must be finite")

    def add(self, row: Sequence[float], relation: Relation, rhs: float) -> None:
        con = Constraint(np.asarray(row, dtype=float), relation, float(rhs))
        self._check_row(con)
        self.constraints.append(con)


@dataclass
class LpResult:
    status: LpStatus
    x: Optional[np.ndarray] = None
    value: Optional[float] = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    """Tableau rows T (m × N+1, last column rhs) with a reduced-cost row."""

    def __init__(self, T: np.ndarray, basis: List[int]) -> None:
        self.T = T
        self.basis = basis
        self.obj = np.zeros(T.shape[1])
        self.iterations = 0

    @property
    def n_cols(self) -> int:
        return self.T.shape[1] - 1

    def set_objective(self, c: np.ndarray) -> None:
        obj = np.concatenate([c, [0.0]])
        for i, b in enumerate(self.basis):
            if c[b] != 0.0:
                obj -= c[b] * self.T[i]
        self.obj = obj

    def pivot(self, row: int, col: int) -> None:
        T = self.T
        piv = T[row, col]
        if abs(piv) < PIVOT_TOL:
            raise NumericBreakdownError(f"Pivot element {piv:.3e} below tolerance")
        T[row] /= piv
        col_vals = T[:, col].copy()
        col_vals[row] = 0.0
        T -= np.outer(col_vals, T[row])
        self.obj -= self.obj[col] * T[row]
        self.basis[row] = col
        self.iterations += 1
        if self.iterations > MAX_ITERATIONS:
            raise NumericBreakdownError(f"Simplex exceeded {MAX_ITERATIONS} pivots")
        if not np.all(np.isfinite(T)):
            raise NumericBreakdownError("Non-finite entries in the simplex tableau")

    def run(self, allowed: int) -> LpStatus:
        """Maximize over columns < ``allowed`` with Bland's rule."""
        T = self.T
        while True:
            entering = np.flatnonzero(self.obj[:allowed] > PIVOT_TOL)
            if entering.size == 0:
                return LpStatus.OPTIMAL
            col = int(entering[0])
            column = T[:, col]
            rows = np.flatnonzero(column > PIVOT_TOL)
            if rows.size == 0:
                return LpStatus.UNBOUNDED
            ratios = T[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
            row = int(min(ties, key=lambda i: self.basis[i]))
            self.pivot(row, col)


def _standardize(lp: LinearProgram) -> Tuple[np.ndarray, np.ndarray, List[Constraint]]:
    """x = offset + M·y with y ≥ 0; bound rows are returned as extra constraints."""
    n = lp.n_vars
    offset = np.zeros(n)
    columns: List[np.ndarray] = []
    bound_rows: List[Tuple[int, float]] = []
    assert lp.bounds is not None
    for j, (lo, hi) in enumerate(lp.bounds):
        unit = np.zeros(n)
        unit[j] = 1.0
        if np.isfinite(lo):
            offset[j] = lo
            columns.append(unit)
            if np.isfinite(hi):
                bound_rows.append((len(columns) - 1, hi - lo))
        elif np.isfinite(hi):
            offset[j] = hi
            columns.append(-unit)
        else:
            columns.append(unit)
            columns.append(-unit)
    M = np.array(columns).T if columns else np.zeros((n, 0))
    rows = [Constraint(con.row @ M, con.relation, con.rhs - float(con.row @ offset)) for con in lp.constraints]
    for k, cap in bound_rows:
        row = np.zeros(M.shape[1])
        row[k] = 1.0
        rows.append(Constraint(row, Relation.LE, cap))
    return offset, M, rows


def solve(lp: LinearProgram) -> LpResult:
    """
    Solve a linear program to a vertex optimum.

    Args:
        lp: The program.

    Returns:
        LpResult with status OPTIMAL (x is a basic feasible solution),
        INFEASIBLE or UNBOUNDED.

    Raises:
        NumericBreakdownError: On pivot breakdown or iteration blow-up.
    """
    assert lp.bounds is not None
    for lo, hi in lp.bounds:
        if lo > hi:
            return LpResult(LpStatus.INFEASIBLE)

    offset, M, rows = _standardize(lp)
    sign = 1.0 if lp.sense is Sense.MAX else -1.0
    c_std = sign * (lp.objective @ M)
    ns = M.shape[1]
    m = len(rows)

    # slack/surplus per inequality row, artificial per >= and = row
    n_slack = sum(1 for r in rows if r.relation is not Relation.EQ)
    normalized = []
    for r in rows:
        row, rel, rhs = r.row, r.relation, r.rhs
        if rhs < 0:
            row, rhs = -row, -rhs
            rel = {Relation.LE: Relation.GE, Relation.GE: Relation.LE, Relation.EQ: Relation.EQ}[rel]
        normalized.append((row, rel, rhs))
    n_art = sum(1 for _, rel, _ in normalized if rel is not Relation.LE)

    N = ns + n_slack + n_art
    T = np.zeros((m, N + 1))
    basis: List[int] = []
    slack_col, art_col = ns, ns + n_slack
    for i, (row, rel, rhs) in enumerate(normalized):
        T[i, :ns] = row
        T[i, -1] = rhs
        if rel is Relation.LE:
            T[i, slack_col] = 1.0
            basis.append(slack_col)
            slack_col += 1
        else:
            if rel is Relation.GE:
                T[i, slack_col] = -1.0
                slack_col += 1
            T[i, art_col] = 1.0
            basis.append(art_col)
            art_col += 1

    tab = _Tableau(T, basis)
    first_art = ns + n_slack
    if n_art:
        c1 = np.zeros(N)
        c1[first_art:] = -1.0
        tab.set_objective(c1)
        tab.run(N)
        infeasibility = tab.obj[-1]
        scale = max(1.0, float(np.abs(T[:, -1]).max(initial=0.0)))
        if infeasibility > FEAS_TOL * scale:
            logger.debug(f"Phase one ended with infeasibility {infeasibility:.3e}")
            return LpResult(LpStatus.INFEASIBLE, iterations=tab.iterations)
        _drive_out_artificials(tab, first_art)
        tab.T = tab.T[:, list(range(first_art)) + [N]]

    c2 = np.concatenate([c_std, np.zeros(n_slack)])
    tab.set_objective(c2)
    status = tab.run(first_art)
    if status is LpStatus.UNBOUNDED:
        return LpResult(LpStatus.UNBOUNDED, iterations=tab.iterations)

    y = np.zeros(first_art)
    for i, b in enumerate(tab.basis):
        y[b] = tab.T[i, -1]
    x = offset + M @ y[:ns]
    value = float(lp.objective @ x)
    logger.debug(f"LP solved: {lp.n_vars} vars, {len(lp.constraints)} rows, {tab.iterations} pivots, value={value:.6g}")
    return LpResult(LpStatus.OPTIMAL, x=x, value=value, iterations=tab.iterations)


def _drive_out_artificials(tab: _Tableau, first_art: int) -> None:
    """Pivot zero-level artificials out of the basis; drop redundant rows."""
    keep = []
    for i in range(tab.T.shape[0]):
        if tab.basis[i] < first_art:
            keep.append(i)
            continue
        candidates = np.flatnonzero(np.abs(tab.T[i, :first_art]) > PIVOT_TOL)
        if candidates.size:
            tab.pivot(i, int(candidates[0]))
            keep.append(i)
    tab.T = tab.T[keep]
    tab.basis = [tab.basis[i] for i in keep]


def dual_of(lp: LinearProgram) -> LinearProgram:
    """
    Dual of max ⟨c,x⟩ s.t. Ax ≤ b, x ≥ 0, i.e. min ⟨b,y⟩ s.t. Aᵀy ≥ c, y ≥ 0.

    Raises:
        ContractViolation: If the program is not in that canonical form.
    """
    assert lp.bounds is not None
    if lp.sense is not Sense.MAX or any(con.relation is not Relation.LE for con in lp.constraints):
        raise ContractViolation("dual_of expects max with <= rows")
    if any(lo != 0.0 or np.isfinite(hi) for lo, hi in lp.bounds):
        raise ContractViolation("dual_of expects x >= 0 bounds")
    A = np.array([con.row for con in lp.constraints]).reshape(len(lp.constraints), lp.n_vars)
    b = np.array([con.rhs for con in lp.constraints])
    dual = LinearProgram(objective=b, sense=Sense.MIN)
    for j in range(lp.n_vars):
        dual.add(A[:, j], Relation.GE, lp.objective[j])
    return dual
