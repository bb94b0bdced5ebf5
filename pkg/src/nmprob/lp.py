"""Dense two-phase simplex for small linear programs over nonnegative variables.

Bland's least-index rule is used for both the entering and the leaving
variable, so the method cannot cycle and is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .config import TOL
from .errors import NumericFailure
from .kb import Relation

PIVOT_EPS = 1e-10
ZERO_EPS = 1e-13
# constraint violation beyond which a returned vertex is treated as garbage
CHECK_TOL = 1e-6
# pivot allowance per variable-or-constraint
ITER_FACTOR = 50


class Direction(Enum):
    MIN = "min"
    MAX = "max"


class Status(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True, eq=False)
class LinearConstraint:
    coeffs: np.ndarray
    relation: Relation
    rhs: float

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "rhs", float(self.rhs))

    def violation(self, x: np.ndarray) -> float:
        lhs = float(self.coeffs @ x)
        if self.relation is Relation.EQ:
            return abs(lhs - self.rhs)
        if self.relation is Relation.GE:
            return max(0.0, self.rhs - lhs)
        return max(0.0, lhs - self.rhs)

    def __eq__(self, other):
        if not isinstance(other, LinearConstraint):
            return NotImplemented
        return (
            self.relation is other.relation
            and self.rhs == other.rhs
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class LinearProgram:
    var_count: int
    objective: np.ndarray
    direction: Direction
    constraints: tuple[LinearConstraint, ...]

    def __post_init__(self):
        obj = np.array(self.objective, dtype=float).reshape(-1)
        if obj.size != self.var_count:
            raise ValueError("objective length differs from var_count")
        for c in self.constraints:
            if c.coeffs.size != self.var_count:
                raise ValueError("constraint length differs from var_count")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(self.constraints))


@dataclass(frozen=True, eq=False)
class LPOutcome:
    status: Status
    value: Optional[float] = None
    solution: Optional[np.ndarray] = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _pivot(T: np.ndarray, basis: list, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    T[np.abs(T) < ZERO_EPS] = 0.0
    basis[r] = c


def _iterate(T: np.ndarray, basis: list, ncols: int, budget: list) -> bool:
    """Run simplex pivots on ``T`` minimising its last row.

    Returns False when the problem is unbounded in the entering column.
    ``budget`` is a one-element list holding the remaining pivot allowance.
    """
    m = T.shape[0] - 1
    while True:
        cost = T[m, :ncols]
        candidates = np.flatnonzero(cost < -PIVOT_EPS)
        if candidates.size == 0:
            return True
        c = int(candidates[0])
        col = T[:m, c]
        pos = np.flatnonzero(col > PIVOT_EPS)
        if pos.size == 0:
            return False
        ratios = T[pos, -1] / col[pos]
        best = ratios.min()
        tied = pos[ratios <= best + PIVOT_EPS * max(1.0, abs(best))]
        r = int(min(tied, key=lambda i: basis[i]))
        if budget[0] <= 0:
            raise NumericFailure("simplex iteration cap reached")
        budget[0] -= 1
        _pivot(T, basis, r, c)


def solve(program: LinearProgram, tol: float = TOL) -> LPOutcome:
    n = program.var_count
    rows = []
    for con in program.constraints:
        a = con.coeffs.astype(float)
        b = con.rhs
        rel = con.relation
        if b < 0:
            a, b = -a, -b
            rel = {Relation.GE: Relation.LE, Relation.LE: Relation.GE}.get(rel, rel)
        rows.append((a, rel, b))
    m = len(rows)
    n_slack = sum(1 for _, rel, _ in rows if rel is not Relation.EQ)
    n_art = sum(1 for _, rel, _ in rows if rel is not Relation.LE)
    ncols = n + n_slack + n_art
    art_start = n + n_slack

    T = np.zeros((m + 1, ncols + 1))
    basis: list[int] = [0] * m
    s = n
    art = art_start
    for i, (a, rel, b) in enumerate(rows):
        T[i, :n] = a
        T[i, -1] = b
        if rel is Relation.LE:
            T[i, s] = 1.0
            basis[i] = s
            s += 1
        else:
            if rel is Relation.GE:
                T[i, s] = -1.0
                s += 1
            T[i, art] = 1.0
            basis[i] = art
            art += 1

    budget = [ITER_FACTOR * (n + m)]

    # phase 1: minimise the sum of artificials
    if n_art:
        for i in range(m):
            if basis[i] >= art_start:
                T[m] -= T[i]
        T[m, art_start:ncols] = 0.0
        _iterate(T, basis, ncols, budget)
        if -T[m, -1] > tol:
            return LPOutcome(Status.INFEASIBLE)
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if basis[i] < art_start:
                keep.append(i)
                continue
            nz = np.flatnonzero(np.abs(T[i, :art_start]) > PIVOT_EPS)
            if nz.size:
                _pivot(T, basis, i, int(nz[0]))
                keep.append(i)
        T = np.vstack([T[keep], T[m:m + 1]])
        basis = [basis[i] for i in keep]
        T = np.delete(T, np.s_[art_start:ncols], axis=1)
        ncols = art_start
        m = len(keep)

    # phase 2
    c = program.objective if program.direction is Direction.MIN else -program.objective
    T[m, :] = 0.0
    T[m, :n] = c
    for i in range(m):
        cb = T[m, basis[i]]
        if cb != 0.0:
            T[m] -= cb * T[i]
    if not _iterate(T, basis, ncols, budget):
        return LPOutcome(Status.UNBOUNDED)

    x = np.zeros(ncols)
    for i in range(m):
        x[basis[i]] = T[i, -1]
    x = np.maximum(x[:n], 0.0)
    worst = max((con.violation(x) for con in program.constraints), default=0.0)
    if worst > CHECK_TOL:
        raise NumericFailure(f"simplex returned a point violating a constraint by {worst:.3g}")
    return LPOutcome(Status.OPTIMAL, float(program.objective @ x), x)


def feasible(constraints: Sequence[LinearConstraint], var_count: int) -> bool:
    prog = LinearProgram(var_count, np.zeros(var_count), Direction.MIN, tuple(constraints))
    return solve(prog).status is not Status.INFEASIBLE


def maximize(objective, constraints, var_count) -> LPOutcome:
    return solve(LinearProgram(var_count, objective, Direction.MAX, tuple(constraints)))


def minimize(objective, constraints, var_count) -> LPOutcome:
    return solve(LinearProgram(var_count, objective, Direction.MIN, tuple(constraints)))
