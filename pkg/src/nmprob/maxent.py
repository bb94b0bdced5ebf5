"""Maximum-entropy completion of the hard statements.

The entropy maximiser over ``{p : A p (op) b, sum p = 1, p >= 0}`` has the
exponential-family form ``p_w ~ exp(theta . A[:, w])`` on the worlds that can
carry mass at all.  We minimise the convex dual
``log Z(theta) - theta . b`` (``theta >= 0`` on ``>=`` rows, ``<= 0`` on
``<=`` rows) with a projected, lightly damped Newton method.  Worlds that no
feasible distribution can weight are detected by linear programming and
fixed at zero beforehand, otherwise the dual optimum would sit at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .config import ME_MAX_ITER, TOL, TOL_ME
from .entail import ConstraintSet, consistent
from .kb import And, CIGTuple, Conditional, Relation
from .lp import LinearConstraint, maximize
from .worlds import WorldTable, build_world_table, satisfying_set


class MEStatus(Enum):
    OK = "OK"
    INFEASIBLE = "INFEASIBLE"
    NOT_CONVERGED = "NOT_CONVERGED"


@dataclass(frozen=True, eq=False)
class Distribution:
    p: np.ndarray
    table: Optional[WorldTable] = None

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 1 or (p < -TOL).any() or abs(p.sum() - 1.0) > 1e-6:
            raise ValueError("not a probability vector")
        if self.table is not None and self.table.world_count != p.size:
            raise ValueError("distribution length differs from the world count")
        p = np.clip(p, 0.0, None)
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    def __len__(self):
        return self.p.size


@dataclass(frozen=True, eq=False)
class MEResult:
    status: MEStatus
    dist: Optional[Distribution] = None
    entropy: Optional[float] = None
    iterations: int = 0
    residual: Optional[float] = None
    frozen: tuple[int, ...] = ()


def entropy(d) -> float:
    """Shannon entropy in nats, with ``0 log 0 = 0``."""
    p = d.p if isinstance(d, Distribution) else np.asarray(d, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum()) + 0.0  # no -0.0


# ---------------------------------------------------------------------------
# support detection
# ---------------------------------------------------------------------------


def support_mask(cs: ConstraintSet, tol: float = TOL) -> np.ndarray:
    """Worlds that carry positive mass in at least one feasible distribution.

    Worlds with identical columns in every row are interchangeable, so the
    search runs over column classes.  Each round maximises the mass on the
    classes not yet known to be positive; a round with optimum ``<= tol``
    proves the remainder are forced to zero.
    """
    A = np.vstack([r.coeffs for r in cs.rows])
    cols, inverse = np.unique(A.T, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    k = cols.shape[0]
    class_rows = [LinearConstraint(cols[:, i], r.relation, r.rhs) for i, r in enumerate(cs.rows)]
    positive = np.zeros(k, dtype=bool)
    while not positive.all():
        unknown = (~positive).astype(float)
        out = maximize(unknown, class_rows, k)
        if not out.optimal or out.value <= tol:
            break
        x = out.solution * unknown
        newly = x > 1e-9
        newly[int(np.argmax(x))] = True
        positive |= newly
    return positive[inverse]


# ---------------------------------------------------------------------------
# dual Newton
# ---------------------------------------------------------------------------


def _project(theta: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return np.minimum(np.maximum(theta, lo), hi)


def _kkt_residual(g: np.ndarray, theta: np.ndarray, rel: Sequence[Relation]) -> float:
    worst = 0.0
    for gi, ti, r in zip(g, theta, rel):
        if r is Relation.EQ:
            worst = max(worst, abs(gi))
        elif r is Relation.GE:
            worst = max(worst, -gi, abs(ti * gi))
        else:
            worst = max(worst, gi, abs(ti * gi))
    return worst


def max_entropy(
    cs: ConstraintSet,
    tol_me: float = TOL_ME,
    max_iter: int = ME_MAX_ITER,
    init: Optional[np.ndarray] = None,
    tol: float = TOL,
) -> MEResult:
    """Maximum-entropy distribution satisfying every row of ``cs``.

    ``init`` optionally seeds the dual variables, one entry per row after
    the normalisation row; it changes the path but not the answer.
    """
    if not consistent(cs):
        return MEResult(MEStatus.INFEASIBLE)
    n = cs.var_count
    mask = support_mask(cs, tol)
    frozen = tuple(int(i) for i in np.flatnonzero(~mask))
    idx = np.flatnonzero(mask)

    feats, rhs, rels, used = [], [], [], []
    for k, r in enumerate(cs.rows[1:]):
        a = r.coeffs[idx]
        if not np.any(a):
            continue
        feats.append(a)
        rhs.append(r.rhs)
        rels.append(r.relation)
        used.append(k)
    m = len(feats)
    F = np.vstack(feats) if m else np.zeros((0, idx.size))
    b = np.array(rhs, dtype=float)
    lo = np.array([0.0 if r is Relation.GE else -np.inf for r in rels])
    hi = np.array([0.0 if r is Relation.LE else np.inf for r in rels])

    if init is None:
        theta = np.zeros(m)
    else:
        init = np.asarray(init, dtype=float)
        if init.shape != (len(cs.rows) - 1,):
            raise ValueError("init needs one entry per non-normalisation row")
        theta = _project(init[used], lo, hi)

    def evaluate(th):
        logits = th @ F if m else np.zeros(idx.size)
        lz = logsumexp(logits)
        q = np.exp(logits - lz)
        return lz - th @ b, q

    dual, q = evaluate(theta)
    iterations = 0
    residual = np.inf
    polish = 0  # extra steps taken after first meeting tol_me
    while True:
        g = F @ q - b
        residual = _kkt_residual(g, theta, rels)
        if residual <= tol_me:
            if residual <= 1e-3 * tol_me or polish >= 3:
                break
            polish += 1
        if iterations >= max_iter:
            break
        iterations += 1
        mean = F @ q
        H = (F * q) @ F.T - np.outer(mean, mean)
        fixed = ((theta <= lo) & (g > 0)) | ((theta >= hi) & (g < 0))
        free = ~fixed
        d = np.zeros(m)
        if free.any():
            Hf = H[np.ix_(free, free)]
            damp = 1e-12 * (1.0 + np.trace(Hf))
            try:
                d[free] = np.linalg.solve(Hf + damp * np.eye(Hf.shape[0]), -g[free])
            except np.linalg.LinAlgError:
                d[free] = -g[free]
        if not np.any(d):
            break
        step = 1.0
        accepted = False
        for _ in range(60):
            cand = _project(theta + step * d, lo, hi)
            new_dual, new_q = evaluate(cand)
            if new_dual <= dual + 1e-4 * g @ (cand - theta) + 1e-15 * max(1.0, abs(dual)):
                accepted = True
                break
            step *= 0.5
        if not accepted:
            if residual <= tol_me:
                break
            # fall back to a short projected gradient step
            cand = _project(theta - 1e-3 * g, lo, hi)
            new_dual, new_q = evaluate(cand)
        theta, dual, q = cand, new_dual, new_q

    p = np.zeros(n)
    p[idx] = q
    dist = Distribution(p, cs.table)
    full_residual = max(residual, max(r.violation(p) for r in cs.rows))
    status = MEStatus.OK if full_residual <= tol_me else MEStatus.NOT_CONVERGED
    return MEResult(status, dist, entropy(dist), iterations, float(full_residual), frozen)


# ---------------------------------------------------------------------------
# queries against a distribution
# ---------------------------------------------------------------------------


def _table(d: Distribution) -> WorldTable:
    if d.table is not None:
        return d.table
    n = d.p.size.bit_length() - 1
    if 1 << n != d.p.size:
        raise ValueError("distribution length is not a power of two")
    return build_world_table([f"a{i}" for i in range(n)], cap=n)


def probability(d: Distribution, s) -> float:
    return float(d.p[satisfying_set(s, _table(d)).bits].sum())


def me_query(d: Distribution, q: Conditional, tol: float = TOL) -> Optional[float]:
    """``P(target | given)`` under ``d``; None when ``P(given) <= tol``."""
    den = probability(d, q.given)
    if den <= tol:
        return None
    return probability(d, And(q.target, q.given)) / den


@dataclass(frozen=True)
class CIReport:
    tuple: CIGTuple
    holds: bool
    discrepancy: Optional[float]


def ci_report(d: Distribution, tuples, tol_ci: float = 1e-6, tol: float = TOL) -> list[CIReport]:
    """How far ``d`` is from each conditional independence in ``tuples``."""
    out = []
    for t in tuples:
        pz = probability(d, t.given)
        if pz <= tol:
            out.append(CIReport(t, False, None))
            continue
        px = probability(d, And(t.x, t.given)) / pz
        py = probability(d, And(t.y, t.given)) / pz
        pxy = probability(d, And(And(t.x, t.y), t.given)) / pz
        gap = abs(pxy - px * py)
        out.append(CIReport(t, gap <= tol_ci, gap))
    return out
