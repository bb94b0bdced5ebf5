"""Monotonic probabilistic entailment over the world simplex.

Each hard statement ``P(X|Y) op q`` becomes one linear row over the world
probabilities ``p_w``; the tight bounds on a query ``P(X|Y)`` are the
extremes of a linear-fractional objective, found by the Charnes-Cooper
substitution ``y = t * p`` with ``sum_{w |= Y} y_w = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .config import TOL, TOL_POINT
from .errors import InconsistentBase
from .kb import (
    TRUE,
    Conditional,
    Implies,
    KnowledgeBase,
    Not,
    ProbConstraint,
    Relation,
    Sentence,
)
from .lp import LinearConstraint, LPOutcome, Status, feasible, maximize, minimize
from .worlds import WorldTable, build_world_table, satisfying_set


@dataclass(frozen=True)
class Bound:
    defined: bool
    lower: Optional[float] = None
    upper: Optional[float] = None

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, other: "Bound", tol: float = TOL) -> bool:
        return self.lower - tol <= other.lower and other.upper <= self.upper + tol


UNDEFINED = Bound(False)


@dataclass(frozen=True, eq=False)
class ConstraintSet:
    """Linear rows over world probabilities; ``rows[0]`` is ``sum p_w = 1``."""

    table: WorldTable
    rows: tuple[LinearConstraint, ...]

    @property
    def var_count(self) -> int:
        return self.table.world_count

    def extend(self, *rows: LinearConstraint) -> "ConstraintSet":
        return ConstraintSet(self.table, self.rows + tuple(rows))


def normalization(table: WorldTable) -> LinearConstraint:
    return LinearConstraint(np.ones(table.world_count), Relation.EQ, 1.0)


def linearize(pc: ProbConstraint, table: WorldTable) -> LinearConstraint:
    """Row for ``P(X|Y) op q``: ``sum_{X&Y} p - q * sum_{Y} p  op  0``.

    Unconditional statements keep the plain form ``sum_X p op q``.  Upper
    bounds are normalised to lower bounds on the complement, i.e.
    ``P(X|Y) <= r`` becomes ``P(!X|Y) >= 1 - r``.
    """
    target, value, rel = pc.target, pc.value, pc.relation
    if rel is Relation.LE:
        target, value, rel = Not(target), 1.0 - value, Relation.GE
    y = satisfying_set(pc.given, table)
    xy = satisfying_set(target, table) & y
    if y.is_full():
        return LinearConstraint(xy.indicator(), rel, value)
    return LinearConstraint(xy.indicator() - value * y.indicator(), rel, 0.0)


def build_constraint_set(kb: KnowledgeBase, table: Optional[WorldTable] = None) -> ConstraintSet:
    if table is None:
        table = build_world_table(kb.atoms, cap=max(len(kb.atoms), 0))
    rows = [normalization(table)]
    rows.extend(linearize(c, table) for c in kb.hard)
    return ConstraintSet(table, tuple(rows))


def consistent(cs: ConstraintSet) -> bool:
    return feasible(cs.rows, cs.var_count)


def max_probability(cs: ConstraintSet, s: Sentence) -> Optional[float]:
    """Largest ``P(s)`` over the feasible set, or None when it is empty."""
    out = maximize(satisfying_set(s, cs.table).indicator(), cs.rows, cs.var_count)
    return out.value if out.optimal else None


def min_probability(cs: ConstraintSet, s: Sentence) -> Optional[float]:
    out = minimize(satisfying_set(s, cs.table).indicator(), cs.rows, cs.var_count)
    return out.value if out.optimal else None


def _clip(v: float) -> float:
    return min(1.0, max(0.0, v))


def _require(out: LPOutcome) -> float:
    if out.status is Status.INFEASIBLE:
        raise InconsistentBase("the constraint set has no satisfying distribution")
    if out.status is Status.UNBOUNDED:  # cannot happen on the simplex
        raise InconsistentBase("unbounded probability program")
    return out.value


def bound(cs: ConstraintSet, q: Conditional, tol: float = TOL) -> Bound:
    """Tight ``[lower, upper]`` for ``P(q.target | q.given)``.

    Only distributions with ``P(given) > 0`` are considered; when none
    exist (up to ``tol``) the bound is undefined.
    """
    table = cs.table
    y = satisfying_set(q.given, table)
    xy = satisfying_set(q.target, table) & y
    n = cs.var_count
    if y.is_full():
        lo = _require(minimize(xy.indicator(), cs.rows, n))
        hi = _require(maximize(xy.indicator(), cs.rows, n))
        return Bound(True, _clip(lo), _clip(hi))

    max_y = _require(maximize(y.indicator(), cs.rows, n))
    if max_y <= tol:
        return UNDEFINED

    # Charnes-Cooper: variables (y_w..., t), every row homogenised by t
    rows = []
    for r in cs.rows:
        rows.append(LinearConstraint(np.append(r.coeffs, -r.rhs), r.relation, 0.0))
    rows.append(LinearConstraint(np.append(y.indicator(), 0.0), Relation.EQ, 1.0))
    obj = np.append(xy.indicator(), 0.0)
    lo = _require(minimize(obj, rows, n + 1))
    hi = _require(maximize(obj, rows, n + 1))
    return Bound(True, _clip(lo), _clip(max(hi, lo)))


def entails_certain(cs: ConstraintSet, s: Sentence, tol: float = TOL) -> bool:
    """True iff ``P(s) = 1`` in every satisfying distribution."""
    neg = satisfying_set(Not(s), cs.table)
    if neg.is_empty():
        return True
    hi = _require(maximize(neg.indicator(), cs.rows, cs.var_count))
    return hi <= tol


def entails_implication(cs: ConstraintSet, a: Sentence, b: Sentence, tol: float = TOL) -> bool:
    return entails_certain(cs, Implies(a, b), tol)


def point_value(
    cs: ConstraintSet, q: Conditional, tol: float = TOL, tol_point: float = TOL_POINT
) -> Optional[float]:
    b = bound(cs, q, tol)
    if not b.defined or b.upper - b.lower > tol_point:
        return None
    return 0.5 * (b.lower + b.upper)


def bounds(cs: ConstraintSet, queries: Iterable[Conditional]) -> list[Bound]:
    return [bound(cs, q) for q in queries]


def query_kb(kb: KnowledgeBase, q: Conditional, table: Optional[WorldTable] = None) -> Bound:
    """Bound for ``q`` under the hard statements of ``kb``."""
    cs = build_constraint_set(kb, table)
    if not consistent(cs):
        raise InconsistentBase("knowledge base is inconsistent")
    return bound(cs, q)


__all__ = [
    "TRUE",
    "Bound",
    "ConstraintSet",
    "UNDEFINED",
    "bound",
    "build_constraint_set",
    "consistent",
    "entails_certain",
    "entails_implication",
    "linearize",
    "max_probability",
    "min_probability",
    "normalization",
    "point_value",
    "query_kb",
]
