"""Specificity-prioritised maximisation of conditional independence.

Candidate CI defaults are ordered so that a default conditioned on a more
specific class (one that certainly implies the other's class) is tried
first.  Each default is adopted greedily when it can be written as a linear
row and keeps the working theory satisfiable without annihilating the
conditioned event.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional, Sequence

from .config import TOL, TOL_POINT
from .entail import (
    Bound,
    ConstraintSet,
    bound,
    build_constraint_set,
    consistent,
    entails_certain,
    point_value,
)
from .errors import InconsistentBase, OverlapError, PriorityCycle
from .kb import (
    And,
    CIGTuple,
    Conditional,
    Iff,
    Implies,
    KnowledgeBase,
    Relation,
    Sentence,
    canonical_form,
)
from .lp import LinearConstraint, feasible, maximize
from .worlds import satisfying_set


class Origin(Enum):
    INHERITANCE = "inheritance"
    DECLARED = "declared"
    EXPANDED = "expanded"


class BlockReason(Enum):
    NOT_LINEARIZABLE = "NOT_LINEARIZABLE"
    INFEASIBLE = "INFEASIBLE"
    FORCED_VACUOUS = "FORCED_VACUOUS"
    USER_EXCLUDED = "USER_EXCLUDED"


@dataclass(frozen=True)
class SetCITriple:
    """``I(left, given, right)`` over sets of sentences."""

    left: tuple[Sentence, ...]
    given: tuple[Sentence, ...]
    right: tuple[Sentence, ...]


@dataclass(frozen=True, eq=False)
class CandidateDefault:
    tuple: CIGTuple
    origin: Origin
    linearization: Optional[LinearConstraint] = None
    factor: Optional[Sentence] = None  # pair member whose P(.|given) is fixed
    value: Optional[float] = None
    rank: Optional[int] = None


@dataclass(eq=False)
class Decision:
    candidate: CandidateDefault
    reason: Optional[BlockReason]  # None means adopted
    # number of rows in the working theory when the decision was taken
    rows_before: int

    @property
    def adopted(self) -> bool:
        return self.reason is None


@dataclass(eq=False)
class Extension:
    hard: ConstraintSet
    rows: ConstraintSet
    decisions: list[Decision] = field(default_factory=list)
    order_audit: list[str] = field(default_factory=list)

    @property
    def adopted(self) -> list[CandidateDefault]:
        return [d.candidate for d in self.decisions if d.adopted]

    @property
    def blocked(self) -> list[tuple[CandidateDefault, BlockReason]]:
        return [(d.candidate, d.reason) for d in self.decisions if not d.adopted]

    def trace(self) -> list[str]:
        return [format_decision(d) for d in self.decisions]


def format_decision(d: Decision) -> str:
    head = "ADOPT" if d.adopted else f"BLOCK({d.reason.value})"
    c = d.candidate
    val = f"  [v={_fmt(c.value)}]" if c.value is not None else ""
    return f"{head}  {c.tuple}{val}  rank={c.rank}"


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


# ---------------------------------------------------------------------------
# Candidate generation
# ---------------------------------------------------------------------------


def expand_ci(tr: SetCITriple) -> list[CIGTuple]:
    """Pairwise CIG tuples denoted by a set-level independence triple."""
    if not (tr.left and tr.given and tr.right):
        raise ValueError("every set of a CI triple must be nonempty")
    keys = [{canonical_form(s) for s in part} for part in (tr.left, tr.given, tr.right)]
    for a, b in itertools.combinations(keys, 2):
        if a & b:
            raise OverlapError(f"CI triple sets overlap on {sorted(a & b)}")
    out = {CIGTuple(a, b, c) for a in tr.left for b in tr.right for c in tr.given}
    return sorted(out)


def generate_candidates(
    kb: KnowledgeBase,
    q: Conditional,
    hard: Optional[ConstraintSet] = None,
    triples: Sequence[SetCITriple] = (),
) -> list[CandidateDefault]:
    """Inheritance candidates for ``q`` plus every declared default.

    An inheritance candidate ``<{H, S}, C>`` is produced for each class ``C``
    that conditions a hard statement about the query target ``H`` (or its
    negation), provided ``S -> C`` is certain and ``C`` is not certainly
    equivalent to ``S``.
    """
    if hard is None:
        hard = build_constraint_set(kb)
    if not consistent(hard):
        raise InconsistentBase("hard statements are inconsistent")
    h, s = q.target, q.given
    target_set = satisfying_set(h, hard.table)
    out: list[CandidateDefault] = []
    seen: set[CIGTuple] = set()

    def add(tup: CIGTuple, origin: Origin):
        if tup not in seen:
            seen.add(tup)
            out.append(CandidateDefault(tup, origin))

    for pc in kb.hard:
        t = satisfying_set(pc.target, hard.table)
        if t != target_set and t != ~target_set:
            continue
        c = pc.given
        if not entails_certain(hard, Implies(s, c)):
            continue
        if entails_certain(hard, Iff(s, c)):
            continue
        if canonical_form(h) == canonical_form(s):
            continue
        add(CIGTuple(h, s, c), Origin.INHERITANCE)
    for d in kb.defaults:
        add(d, Origin.DECLARED)
    for tr in triples:
        for tup in expand_ci(tr):
            add(tup, Origin.EXPANDED)
    return out


# ---------------------------------------------------------------------------
# Ordering
# ---------------------------------------------------------------------------


def _more_specific(hard: ConstraintSet, a: CIGTuple, b: CIGTuple) -> bool:
    """``a`` has the strictly more specific conditioning class."""
    return entails_certain(hard, Implies(a.given, b.given)) and not entails_certain(
        hard, Implies(b.given, a.given)
    )


def specificity_order(
    cands: Sequence[CandidateDefault],
    hard: ConstraintSet,
    priorities: Iterable = (),
    audit: Optional[list[str]] = None,
) -> list[CandidateDefault]:
    """Topological order: more specific first, then user preferences.

    Ties are broken by canonical form.  Pairs left unordered by both
    specificity and preferences are appended to ``audit``.
    """
    n = len(cands)
    index = {c.tuple: i for i, c in enumerate(cands)}
    succ: list[set[int]] = [set() for _ in range(n)]
    for i, j in itertools.permutations(range(n), 2):
        if _more_specific(hard, cands[i].tuple, cands[j].tuple):
            succ[i].add(j)
    for pr in priorities:
        i, j = index.get(pr.higher), index.get(pr.lower)
        if i is not None and j is not None:
            succ[i].add(j)

    indeg = [0] * n
    for i in range(n):
        for j in succ[i]:
            indeg[j] += 1
    heap = [(cands[i].tuple.sort_key(), i) for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for j in sorted(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (cands[j].tuple.sort_key(), j))
    if len(order) < n:
        stuck = sorted(str(cands[i].tuple) for i in range(n) if i not in order)
        raise PriorityCycle("priority declarations form a cycle among: " + "; ".join(stuck))

    if audit is not None:
        reach = [set() for _ in range(n)]
        for i in reversed(order):
            for j in succ[i]:
                reach[i].add(j)
                reach[i] |= reach[j]
        for a, b in itertools.combinations(order, 2):
            if b not in reach[a] and a not in reach[b]:
                audit.append(f"incomparable: {cands[a].tuple} / {cands[b].tuple}")
    return [replace(cands[i], rank=k + 1) for k, i in enumerate(order)]


# ---------------------------------------------------------------------------
# Extension
# ---------------------------------------------------------------------------


def ci_row(
    table, factor: Sentence, other: Sentence, given: Sentence, value: float
) -> LinearConstraint:
    """``P(factor & other & given) - value * P(other & given) = 0``."""
    og = satisfying_set(And(other, given), table)
    fog = satisfying_set(factor, table) & og
    return LinearConstraint(fog.indicator() - value * og.indicator(), Relation.EQ, 0.0)


def linearize_candidate(
    gamma: ConstraintSet, cand: CandidateDefault, tol: float = TOL, tol_point: float = TOL_POINT
) -> CandidateDefault:
    """Attach the linear row of ``cand`` against the working theory ``gamma``.

    Returns ``cand`` unchanged (no linearization) when neither pair member
    has a determined probability given the conditioning sentence.
    """
    tup = cand.tuple
    for factor, other in ((tup.x, tup.y), (tup.y, tup.x)):
        v = point_value(gamma, Conditional(factor, tup.given), tol, tol_point)
        if v is not None:
            row = ci_row(gamma.table, factor, other, tup.given, v)
            return replace(cand, linearization=row, factor=factor, value=v)
    return cand


def check_candidate(
    gamma: ConstraintSet, cand: CandidateDefault, tol: float = TOL, tol_point: float = TOL_POINT
) -> tuple[CandidateDefault, Optional[BlockReason]]:
    """Decide one candidate against ``gamma``; returns (linearized, reason)."""
    lin = linearize_candidate(gamma, cand, tol, tol_point)
    if lin.linearization is None:
        return lin, BlockReason.NOT_LINEARIZABLE
    rows = gamma.rows + (lin.linearization,)
    if not feasible(rows, gamma.var_count):
        return lin, BlockReason.INFEASIBLE
    tup = lin.tuple
    other = tup.y if canonical_form(lin.factor) == tup.key[0] else tup.x
    event = satisfying_set(And(other, lin.tuple.given), gamma.table)
    top = maximize(event.indicator(), rows, gamma.var_count)
    if top.value <= tol:
        return lin, BlockReason.FORCED_VACUOUS
    return lin, None


def compute_extension(
    kb: KnowledgeBase,
    q: Conditional,
    exclude: Iterable[CIGTuple] = (),
    triples: Sequence[SetCITriple] = (),
    tol: float = TOL,
    tol_point: float = TOL_POINT,
) -> Extension:
    hard = build_constraint_set(kb)
    if not consistent(hard):
        raise InconsistentBase("hard statements are inconsistent")
    audit: list[str] = []
    cands = generate_candidates(kb, q, hard, triples)
    ordered = specificity_order(cands, hard, kb.priorities, audit)
    excluded = set(exclude)
    gamma = hard
    decisions = []
    for cand in ordered:
        before = len(gamma.rows)
        if cand.tuple in excluded:
            decisions.append(Decision(cand, BlockReason.USER_EXCLUDED, before))
            continue
        lin, reason = check_candidate(gamma, cand, tol, tol_point)
        decisions.append(Decision(lin, reason, before))
        if reason is None:
            gamma = gamma.extend(lin.linearization)
    ext = Extension(hard, gamma, decisions, audit)
    assert consistent(gamma)
    return ext


def spmci_bound(
    kb: KnowledgeBase,
    q: Conditional,
    exclude: Iterable[CIGTuple] = (),
    triples: Sequence[SetCITriple] = (),
    tol: float = TOL,
    tol_point: float = TOL_POINT,
) -> tuple[Bound, Extension]:
    """Bound on ``q`` in the default extension of ``kb``.

    A point value already forced by the hard statements is returned as is.
    """
    ext = compute_extension(kb, q, exclude, triples, tol, tol_point)
    hard_bound = bound(ext.hard, q, tol)
    if hard_bound.defined and hard_bound.upper - hard_bound.lower <= tol_point:
        return hard_bound, ext
    return bound(ext.rows, q, tol), ext
