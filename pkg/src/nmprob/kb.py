"""Knowledge-base DSL: sentence AST, parser, validation and canonical forms.

A knowledge base file (``.npr``) is a sequence of ``;``-terminated statements::

    atoms N T W L;
    P(L | N) = 0.1;
    P(L | N & T) = 0.05;
    default ci {E1, E2} given H;
    prefer ci {a, b} given c over ci {a, b} given d;
    query P(L | N & T & W);

Sentences use ``!``, ``&``, ``v``, ``->`` and ``<->`` (tightest first).
``|`` is reserved for the conditioning bar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Sequence, Union

from .config import default_atom_cap
from .errors import ParseError, ValidationError

KEYWORDS = frozenset(
    {"v", "true", "false", "atoms", "default", "ci", "given", "prefer", "over", "query", "P"}
)


# ---------------------------------------------------------------------------
# Sentence AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomRef:
    name: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    child: "Sentence"


@dataclass(frozen=True)
class And:
    left: "Sentence"
    right: "Sentence"


@dataclass(frozen=True)
class Or:
    left: "Sentence"
    right: "Sentence"


@dataclass(frozen=True)
class Implies:
    left: "Sentence"
    right: "Sentence"


@dataclass(frozen=True)
class Iff:
    left: "Sentence"
    right: "Sentence"


Sentence = Union[AtomRef, Const, Not, And, Or, Implies, Iff]

TRUE = Const(True)
FALSE = Const(False)

_BINARY_OPS = {And: "&", Or: "v", Implies: "->", Iff: "<->"}


def conj(*parts: Sentence) -> Sentence:
    """Left-nested conjunction of ``parts`` (``TRUE`` when empty)."""
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def atoms_of(s: Sentence) -> set[str]:
    if isinstance(s, AtomRef):
        return {s.name}
    if isinstance(s, Const):
        return set()
    if isinstance(s, Not):
        return atoms_of(s.child)
    return atoms_of(s.left) | atoms_of(s.right)


def render(s: Sentence) -> str:
    """Parseable text for ``s`` that preserves its exact tree shape."""
    return _render(s, top=True, canonical=False)


def canonical_form(s: Sentence) -> str:
    """Deterministic text for ``s``.

    Operands of ``&`` and ``v`` are sorted at every node; nothing else is
    rewritten, so ``!!A`` stays ``!!A``.
    """
    return _render(s, top=True, canonical=True)


def _render(s: Sentence, top: bool, canonical: bool) -> str:
    if isinstance(s, AtomRef):
        return s.name
    if isinstance(s, Const):
        return "true" if s.value else "false"
    if isinstance(s, Not):
        return "!" + _render(s.child, top=False, canonical=canonical)
    op = _BINARY_OPS[type(s)]
    left = _render(s.left, top=False, canonical=canonical)
    right = _render(s.right, top=False, canonical=canonical)
    if canonical and isinstance(s, (And, Or)) and right < left:
        left, right = right, left
    body = f"{left} {op} {right}"
    return body if top else f"({body})"


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


class Relation(Enum):
    EQ = "="
    GE = ">="
    LE = "<="


@dataclass(frozen=True)
class Conditional:
    """The query ``P(target | given)``."""

    target: Sentence
    given: Sentence = TRUE
    pos: Optional[tuple[int, int]] = field(default=None, compare=False)

    def __str__(self) -> str:
        if self.given == TRUE:
            return f"P({render(self.target)})"
        return f"P({render(self.target)} | {render(self.given)})"


@dataclass(frozen=True)
class ProbConstraint:
    target: Sentence
    given: Sentence
    relation: Relation
    value: float
    pos: Optional[tuple[int, int]] = field(default=None, compare=False)

    def __str__(self) -> str:
        cond = Conditional(self.target, self.given)
        return f"{cond} {self.relation.value} {self.value!r}"


class CIGTuple:
    """``CIG({x, y}, z)``: x and y conditionally independent given z.

    The pair is unordered; equality and hashing go through canonical forms,
    so pair order and ``&``/``v`` operand order do not matter.
    """

    __slots__ = ("x", "y", "given", "pos", "_key")

    def __init__(self, a: Sentence, b: Sentence, given: Sentence, pos=None):
        ka, kb_ = canonical_form(a), canonical_form(b)
        if ka == kb_:
            raise ValueError(f"CI pair needs two distinct sentences, got {ka!r} twice")
        if kb_ < ka:
            a, b, ka, kb_ = b, a, kb_, ka
        self.x = a
        self.y = b
        self.given = given
        self.pos = pos
        self._key = (ka, kb_, canonical_form(given))

    @property
    def pair(self) -> tuple[Sentence, Sentence]:
        return (self.x, self.y)

    @property
    def key(self) -> tuple[str, str, str]:
        return self._key

    def __eq__(self, other):
        if not isinstance(other, CIGTuple):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other: "CIGTuple") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple[str, str, str]:
        return (self._key[2], self._key[0], self._key[1])

    def __repr__(self):
        return f"CIGTuple({self})"

    def __str__(self):
        return f"ci {{{render(self.x)}, {render(self.y)}}} given {render(self.given)}"


@dataclass(frozen=True)
class PriorityDecl:
    higher: CIGTuple
    lower: CIGTuple
    pos: Optional[tuple[int, int]] = field(default=None, compare=False)


@dataclass(frozen=True)
class KnowledgeBase:
    atoms: tuple[str, ...] = ()
    hard: tuple[ProbConstraint, ...] = ()
    defaults: tuple[CIGTuple, ...] = ()
    priorities: tuple[PriorityDecl, ...] = ()
    queries: tuple[Conditional, ...] = ()

    def with_hard(self, *constraints: ProbConstraint) -> "KnowledgeBase":
        return KnowledgeBase(
            self.atoms, self.hard + tuple(constraints), self.defaults, self.priorities, self.queries
        )


def render_kb(kb: KnowledgeBase) -> str:
    """Pretty-print ``kb`` as DSL text accepted by :func:`parse_kb`."""
    lines = []
    if kb.atoms:
        lines.append("atoms " + " ".join(kb.atoms) + ";")
    lines.extend(f"{c};" for c in kb.hard)
    lines.extend(f"default {d};" for d in kb.defaults)
    lines.extend(f"prefer {p.higher} over {p.lower};" for p in kb.priorities)
    lines.extend(f"query {q};" for q in kb.queries)
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "op", "eof"
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<op><->|->|>=|<=|[=!&(){},;|])
  | (?P<num>-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        # (name, line, col) for every identifier used inside a sentence
        self.refs: list[tuple[str, int, int]] = []

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "ident") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"{message}, found {found}", t.line, t.col)

    # sentence grammar, loosest binding first
    def sentence(self) -> Sentence:
        left = self.implication()
        while self.at("<->"):
            self.advance()
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Sentence:
        left = self.disjunction()
        if self.at("->"):
            self.advance()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Sentence:
        left = self.conjunction()
        while self.at("v"):
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Sentence:
        left = self.unary()
        while self.at("&"):
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Sentence:
        t = self.tok
        if self.at("!"):
            self.advance()
            return Not(self.unary())
        if self.at("("):
            self.advance()
            inner = self.sentence()
            self.expect(")")
            return inner
        if self.at("true"):
            self.advance()
            return TRUE
        if self.at("false"):
            self.advance()
            return FALSE
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.advance()
            self.refs.append((t.text, t.line, t.col))
            return AtomRef(t.text)
        self.fail("expected a sentence")

    def number(self) -> float:
        t = self.tok
        if t.kind != "num":
            self.fail("expected a number")
        self.advance()
        return float(t.text)

    def conditional_body(self) -> tuple[Sentence, Sentence]:
        self.expect("P")
        self.expect("(")
        target = self.sentence()
        given = TRUE
        if self.at("|"):
            self.advance()
            given = self.sentence()
        self.expect(")")
        return target, given

    def ci_ref(self, problems: list[str]) -> Optional[CIGTuple]:
        start = self.expect("ci")
        self.expect("{")
        a = self.sentence()
        self.expect(",")
        b = self.sentence()
        self.expect("}")
        self.expect("given")
        z = self.sentence()
        try:
            return CIGTuple(a, b, z, pos=(start.line, start.col))
        except ValueError as exc:
            problems.append(f"{start.line}:{start.col}: {exc}")
            return None


def parse_sentence(text: str, atoms: Sequence[str]) -> Sentence:
    """Parse a single sentence over the declared ``atoms``."""
    p = _Parser(text)
    s = p.sentence()
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    declared = set(atoms)
    for name, line, col in p.refs:
        if name not in declared:
            raise ParseError(f"unknown atom {name!r}", line, col)
    return s


def parse_conditional(text: str, atoms: Sequence[str]) -> Conditional:
    """Parse ``P(X | Y)`` (or ``P(X)``) over the declared ``atoms``."""
    p = _Parser(text)
    target, given = p.conditional_body()
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    declared = set(atoms)
    for name, line, col in p.refs:
        if name not in declared:
            raise ParseError(f"unknown atom {name!r}", line, col)
    return Conditional(target, given)


def parse_kb(text: str, atom_cap: Optional[int] = None) -> KnowledgeBase:
    """Parse and validate a knowledge base.

    Syntax errors raise :class:`ParseError` at the first offending token.
    Semantic problems (undeclared atoms, values outside [0, 1], duplicate or
    reserved atom names, too many atoms) are collected and raised together
    as one :class:`ValidationError`.
    """
    if atom_cap is None:
        atom_cap = default_atom_cap()
    p = _Parser(text)
    problems: list[str] = []
    atoms: list[str] = []
    atom_pos: dict[str, tuple[int, int]] = {}
    hard, defaults, priorities, queries = [], [], [], []

    while p.tok.kind != "eof":
        start = p.tok
        pos = (start.line, start.col)
        if p.at("atoms"):
            p.advance()
            if p.tok.kind != "ident":
                p.fail("expected an atom name")
            while p.tok.kind == "ident":
                t = p.advance()
                if t.text in KEYWORDS:
                    problems.append(f"{t.line}:{t.col}: reserved word {t.text!r} used as atom")
                elif t.text in atom_pos:
                    problems.append(f"{t.line}:{t.col}: duplicate atom {t.text!r}")
                else:
                    atom_pos[t.text] = (t.line, t.col)
                    atoms.append(t.text)
        elif p.at("P"):
            target, given = p.conditional_body()
            rel_tok = p.tok
            if rel_tok.kind != "op" or rel_tok.text not in ("=", ">=", "<="):
                p.fail("expected '=', '>=' or '<='")
            p.advance()
            value = p.number()
            if not 0.0 <= value <= 1.0:
                problems.append(f"{start.line}:{start.col}: value out of [0,1]: {value!r}")
            hard.append(ProbConstraint(target, given, Relation(rel_tok.text), value, pos=pos))
        elif p.at("default"):
            p.advance()
            tup = p.ci_ref(problems)
            if tup is not None:
                defaults.append(tup)
        elif p.at("prefer"):
            p.advance()
            hi = p.ci_ref(problems)
            p.expect("over")
            lo = p.ci_ref(problems)
            if hi is not None and lo is not None:
                if hi == lo:
                    problems.append(f"{start.line}:{start.col}: prefer declaration relates a default to itself")
                else:
                    priorities.append(PriorityDecl(hi, lo, pos=pos))
        elif p.at("query"):
            p.advance()
            target, given = p.conditional_body()
            queries.append(Conditional(target, given, pos=pos))
        else:
            p.fail("expected a statement ('atoms', 'P', 'default', 'prefer' or 'query')")
        p.expect(";")

    if len(atoms) > atom_cap:
        problems.append(f"{len(atoms)} atoms declared, cap is {atom_cap}")
    declared = set(atoms)
    for name, line, col in p.refs:
        if name not in declared:
            problems.append(f"{line}:{col}: undeclared atom {name!r}")
    if problems:
        raise ValidationError(problems)
    return KnowledgeBase(
        tuple(atoms), tuple(hard), tuple(defaults), tuple(priorities), tuple(queries)
    )


def iter_sentences(kb: KnowledgeBase) -> Iterator[Sentence]:
    for c in kb.hard:
        yield c.target
        yield c.given
    for d in kb.defaults:
        yield from (d.x, d.y, d.given)
    for pr in kb.priorities:
        for t in (pr.higher, pr.lower):
            yield from (t.x, t.y, t.given)
    for q in kb.queries:
        yield q.target
        yield q.given
