"""Random sentences and knowledge bases for property tests.

Two flavours: numpy-driven generators (seeded, used by the acceptance
sweeps so the sample is fixed) and hypothesis strategies (used by the unit
property tests, where shrinking helps).  Probability values are always
multiples of 0.1 so the exact grid oracle can consume the resulting rows.
"""

import numpy as np
from hypothesis import strategies as st

from nmprob.kb import (
    FALSE,
    TRUE,
    And,
    AtomRef,
    Conditional,
    Iff,
    Implies,
    KnowledgeBase,
    Not,
    Or,
    ProbConstraint,
    Relation,
)

ATOM_NAMES = ("A", "B", "C", "D")
RELATIONS = (Relation.EQ, Relation.GE, Relation.LE)


def random_sentence(rng, atoms, depth=2):
    if depth == 0 or rng.random() < 0.35:
        s = AtomRef(str(rng.choice(atoms)))
        return Not(s) if rng.random() < 0.3 else s
    op = int(rng.integers(5))
    if op == 0:
        return Not(random_sentence(rng, atoms, depth - 1))
    left = random_sentence(rng, atoms, depth - 1)
    right = random_sentence(rng, atoms, depth - 1)
    return (And, Or, Implies, And)[op - 1](left, right)


def random_given(rng, atoms):
    return TRUE if rng.random() < 0.4 else random_sentence(rng, atoms, 1)


def random_constraint(rng, atoms):
    return ProbConstraint(
        random_sentence(rng, atoms),
        random_given(rng, atoms),
        RELATIONS[int(rng.integers(3))],
        int(rng.integers(0, 11)) / 10,
    )


def random_kb(rng, max_atoms=3, max_hard=3):
    n = int(rng.integers(1, max_atoms + 1))
    atoms = ATOM_NAMES[:n]
    hard = tuple(random_constraint(rng, atoms) for _ in range(int(rng.integers(1, max_hard + 1))))
    return KnowledgeBase(atoms, hard)


def random_query(rng, atoms):
    return Conditional(random_sentence(rng, atoms), random_given(rng, atoms))


# hypothesis strategies


def sentences(atoms, max_leaves=8):
    leaves = st.sampled_from([AtomRef(a) for a in atoms]) | st.sampled_from([TRUE, FALSE])
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            kids.map(Not),
            st.builds(And, kids, kids),
            st.builds(Or, kids, kids),
            st.builds(Implies, kids, kids),
            st.builds(Iff, kids, kids),
        ),
        max_leaves=max_leaves,
    )


@st.composite
def atom_lists(draw, min_size=1, max_size=3):
    n = draw(st.integers(min_size, max_size))
    return ATOM_NAMES[:n]


tenths = st.integers(0, 10).map(lambda k: k / 10)


@st.composite
def constraints(draw, atoms):
    given = draw(st.just(TRUE) | sentences(atoms, 4))
    return ProbConstraint(
        draw(sentences(atoms, 6)), given, draw(st.sampled_from(RELATIONS)), draw(tenths)
    )


@st.composite
def knowledge_bases(draw, max_atoms=3, max_hard=4):
    atoms = draw(atom_lists(1, max_atoms))
    hard = draw(st.lists(constraints(atoms), max_size=max_hard))
    return KnowledgeBase(atoms, tuple(hard))


@st.composite
def queries(draw, atoms):
    return Conditional(draw(sentences(atoms, 6)), draw(st.just(TRUE) | sentences(atoms, 4)))


def rng_for(seed):
    return np.random.default_rng(seed)
