"""Random check that hard entailment only narrows as statements are added.

For each sampled base B1 and superset B2 (B2 consistent) every query bound
under B2 must lie inside the bound under B1.  SPMCI conclusions are sampled
alongside and the number of non-monotonic flips is reported; those are
expected, not errors.
"""

import argparse

import numpy as np

from nmprob import KnowledgeBase, ProbConstraint, Relation, bound, build_constraint_set, consistent, spmci_bound
from nmprob.kb import TRUE, And, AtomRef, Conditional, Not, Or

ATOMS = ("A", "B", "C")


def literal(rng):
    a = AtomRef(str(rng.choice(ATOMS)))
    return Not(a) if rng.random() < 0.4 else a


def sentence(rng):
    s = literal(rng)
    for _ in range(int(rng.integers(0, 2))):
        s = (And if rng.random() < 0.6 else Or)(s, literal(rng))
    return s


def statement(rng):
    given = TRUE if rng.random() < 0.4 else sentence(rng)
    rel = (Relation.EQ, Relation.GE, Relation.LE)[int(rng.integers(3))]
    return ProbConstraint(sentence(rng), given, rel, int(rng.integers(0, 11)) / 10)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--queries", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-7)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    pairs = checked = violations = flips = 0
    while pairs < args.pairs:
        small = tuple(statement(rng) for _ in range(int(rng.integers(1, 3))))
        big = small + tuple(statement(rng) for _ in range(int(rng.integers(1, 3))))
        kb1, kb2 = KnowledgeBase(ATOMS, small), KnowledgeBase(ATOMS, big)
        cs1, cs2 = build_constraint_set(kb1), build_constraint_set(kb2)
        if not consistent(cs2):
            continue
        pairs += 1
        for _ in range(args.queries):
            q = Conditional(sentence(rng), sentence(rng))
            b1, b2 = bound(cs1, q), bound(cs2, q)
            if b2.defined and b1.defined:
                checked += 1
                if not b1.contains(b2, args.tol):
                    violations += 1
                    print(f"violation: {q} {b1} -> {b2}")
            s1, _ = spmci_bound(kb1, q)
            s2, _ = spmci_bound(kb2, q)
            if s1.defined and s2.defined and not s1.contains(s2, args.tol):
                flips += 1
    print(f"{pairs} pairs, {checked} defined query pairs, {violations} entailment violations")
    print(f"SPMCI conclusions withdrawn or moved by the extra statements: {flips}")
    raise SystemExit(1 if violations else 0)


if __name__ == "__main__":
    main()
