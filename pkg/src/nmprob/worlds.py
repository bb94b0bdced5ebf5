"""World enumeration and sentence evaluation over bitsets.

World ``w`` assigns atom ``i`` the value of bit ``i`` of ``w`` (atom 0 is the
least significant bit), so two atoms ``[D, F]`` give the order
``(!D !F, D !F, !D F, D F)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .config import default_atom_cap
from .errors import CapExceeded, UnknownAtom
from .kb import And, AtomRef, Const, Iff, Implies, Not, Or, Sentence


@dataclass(frozen=True)
class WorldTable:
    atoms: tuple[str, ...]

    @property
    def world_count(self) -> int:
        return 1 << len(self.atoms)

    def index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise UnknownAtom(f"atom {name!r} is not in the world table") from None

    def assignment(self, w: int) -> tuple[bool, ...]:
        return tuple(bool((w >> i) & 1) for i in range(len(self.atoms)))

    def bitstring(self, w: int) -> str:
        """Atom values of world ``w`` as ``0``/``1`` characters, atom 0 first."""
        return "".join("1" if v else "0" for v in self.assignment(w))


class WorldSet:
    """Immutable set of worlds of one table, stored as a boolean mask."""

    __slots__ = ("bits",)

    def __init__(self, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool).copy()
        bits.flags.writeable = False
        self.bits = bits

    def __len__(self) -> int:
        return int(self.bits.size)

    def count(self) -> int:
        return int(self.bits.sum())

    def is_full(self) -> bool:
        return bool(self.bits.all())

    def is_empty(self) -> bool:
        return not self.bits.any()

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def __invert__(self) -> "WorldSet":
        return WorldSet(~self.bits)

    def __and__(self, other: "WorldSet") -> "WorldSet":
        return WorldSet(self.bits & other.bits)

    def __or__(self, other: "WorldSet") -> "WorldSet":
        return WorldSet(self.bits | other.bits)

    def __eq__(self, other):
        if not isinstance(other, WorldSet):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool((self.bits == other.bits).all())

    def __hash__(self):
        return hash(self.bits.tobytes())

    def indicator(self) -> np.ndarray:
        return self.bits.astype(float)

    def __repr__(self):
        return "WorldSet(" + "".join("1" if b else "0" for b in self.bits) + ")"


def build_world_table(atoms: Sequence[str], cap: Optional[int] = None) -> WorldTable:
    if cap is None:
        cap = default_atom_cap()
    atoms = tuple(atoms)
    if len(atoms) > cap:
        raise CapExceeded(f"{len(atoms)} atoms exceed the cap of {cap}")
    return WorldTable(atoms)


@lru_cache(maxsize=64)
def _atom_bits(n: int, i: int) -> np.ndarray:
    out = ((np.arange(1 << n) >> i) & 1).astype(bool)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=4096)
def _sat(s: Sentence, atoms: tuple[str, ...]) -> np.ndarray:
    n = len(atoms)
    if isinstance(s, AtomRef):
        try:
            i = atoms.index(s.name)
        except ValueError:
            raise UnknownAtom(f"atom {s.name!r} is not in the world table") from None
        return _atom_bits(n, i)
    if isinstance(s, Const):
        return np.full(1 << n, s.value, dtype=bool)
    if isinstance(s, Not):
        return ~_sat(s.child, atoms)
    left = _sat(s.left, atoms)
    right = _sat(s.right, atoms)
    if isinstance(s, And):
        return left & right
    if isinstance(s, Or):
        return left | right
    if isinstance(s, Implies):
        return ~left | right
    if isinstance(s, Iff):
        return left == right
    raise TypeError(f"not a sentence: {s!r}")


def satisfying_set(s: Sentence, table: WorldTable) -> WorldSet:
    return WorldSet(_sat(s, table.atoms))


def is_valid(s: Sentence, table: WorldTable) -> bool:
    return satisfying_set(s, table).is_full()


def evaluate(s: Sentence, assignment: dict[str, bool]) -> bool:
    """Truth value of ``s`` in a single world, by structural recursion."""
    if isinstance(s, AtomRef):
        if s.name not in assignment:
            raise UnknownAtom(s.name)
        return assignment[s.name]
    if isinstance(s, Const):
        return s.value
    if isinstance(s, Not):
        return not evaluate(s.child, assignment)
    a = evaluate(s.left, assignment)
    b = evaluate(s.right, assignment)
    if isinstance(s, And):
        return a and b
    if isinstance(s, Or):
        return a or b
    if isinstance(s, Implies):
        return (not a) or b
    return a == b
