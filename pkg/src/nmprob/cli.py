"""Command-line front end.

Exit codes: 0 success, 1 inconsistent knowledge base, 2 parse or validation
error, 3 some query undefined, 4 numeric failure or non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from .config import ME_MAX_ITER, TOL, TOL_ME, default_atom_cap
from .entail import Bound, bound, build_constraint_set, consistent
from .errors import (
    CapExceeded,
    InconsistentBase,
    NumericFailure,
    ParseError,
    PriorityCycle,
    UnknownAtom,
    ValidationError,
)
from .kb import CIGTuple, Conditional, KnowledgeBase, parse_conditional, parse_kb
from .maxent import MEStatus, ci_report, max_entropy, me_query
from .spmci import Extension, generate_candidates, spmci_bound
from .worlds import build_world_table, satisfying_set

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_INPUT = 2
EXIT_UNDEFINED = 3
EXIT_NUMERIC = 4


def fmt_real(x: float) -> str:
    """9 significant digits, round-half-even on the exact binary value."""
    s = format(float(x), ".9g")
    return "0" if s == "-0" else s


def json_real(x: Optional[float]):
    if x is None:
        return None
    v = float(fmt_real(x))
    return 0.0 if v == 0 else v


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


@dataclass
class QueryReport:
    query: str
    mode: str  # ENTAIL | SPMCI | MAXENT
    defined: bool
    lower: Optional[float] = None
    upper: Optional[float] = None
    adopted: list[str] = field(default_factory=list)
    blocked: list[tuple[str, str]] = field(default_factory=list)
    audit: list[str] = field(default_factory=list)
    trace: Optional[list[str]] = None

    @classmethod
    def from_bound(cls, q: Conditional, mode: str, b: Bound) -> "QueryReport":
        return cls(str(q), mode, b.defined, b.lower, b.upper)

    def to_dict(self) -> dict:
        out = {
            "lower": json_real(self.lower),
            "upper": json_real(self.upper),
            "defined": self.defined,
            "query": self.query,
            "mode": self.mode,
        }
        if self.mode == "SPMCI":
            out["adopted"] = list(self.adopted)
            out["blocked"] = [{"ci": c, "reason": r} for c, r in self.blocked]
            out["audit"] = list(self.audit)
            if self.trace is not None:
                out["trace"] = list(self.trace)
        return out

    def text(self) -> str:
        if not self.defined:
            return f"{self.query} undefined (conditioning event has probability 0)"
        if fmt_real(self.lower) == fmt_real(self.upper):
            return f"{self.query} = {fmt_real(self.lower)}"
        return f"{self.query} in [{fmt_real(self.lower)}, {fmt_real(self.upper)}]"


def _spmci_report(q: Conditional, b: Bound, ext: Extension, explain: bool) -> QueryReport:
    rep = QueryReport.from_bound(q, "SPMCI", b)
    rep.adopted = [str(c.tuple) for c in ext.adopted]
    rep.blocked = [(str(c.tuple), r.value) for c, r in ext.blocked]
    rep.audit = list(ext.order_audit)
    if explain:
        rep.trace = ext.trace()
    return rep


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmprob", description="Probabilistic entailment, SPMCI defaults and maximum entropy."
    )
    parser.add_argument("--atom-cap", type=int, default=None, help="maximum number of atoms")
    parser.add_argument("--tol", type=float, default=None, help="numeric tolerance")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--atom-cap", type=int, default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="parse and check consistency")
    p.add_argument("file")

    p = sub.add_parser("entail", parents=[common], help="tight probability bounds")
    p.add_argument("file")
    p.add_argument("--query", action="append", help='e.g. "P(F | D)"; defaults to the file\'s queries')
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("spmci", parents=[common], help="bounds under CI defaults")
    p.add_argument("file")
    p.add_argument("--query", action="append")
    p.add_argument("--json", action="store_true")
    p.add_argument("--explain", action="store_true", help="print the default adoption trace")
    p.add_argument(
        "--exclude", action="append", default=[], metavar="CI",
        help='skip a default, e.g. "ci {L, S} given N"',
    )

    p = sub.add_parser("maxent", parents=[common], help="maximum entropy distribution")
    p.add_argument("file")
    p.add_argument("--query", action="append")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-iter", type=int, default=ME_MAX_ITER)
    p.add_argument("--ci-report", action="store_true", help="check CI statements under the ME distribution")

    p = sub.add_parser("worlds", parents=[common], help="dump the world table")
    p.add_argument("file")
    return parser


def _load(path: str, atom_cap: int) -> KnowledgeBase:
    with open(path, encoding="utf-8") as fh:
        return parse_kb(fh.read(), atom_cap=atom_cap)


def _queries(kb: KnowledgeBase, texts: Optional[list[str]]) -> list[Conditional]:
    if texts:
        return [parse_conditional(t, kb.atoms) for t in texts]
    if not kb.queries:
        raise ValidationError(["no query given and the file declares none"])
    return list(kb.queries)


def _parse_ci(text: str, atoms) -> CIGTuple:
    # ci {a, b} given z  -- reuse the KB parser on a one-statement document
    decl = f"atoms {' '.join(atoms)}; default {text};" if atoms else f"default {text};"
    kb = parse_kb(decl, atom_cap=len(atoms))
    return kb.defaults[0]


def run(argv: Optional[list[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    args = build_parser().parse_args(argv)
    atom_cap = args.atom_cap if args.atom_cap is not None else default_atom_cap()
    try:
        kb = _load(args.file, atom_cap)
        handler = _COMMANDS[args.command]
        return handler(kb, args, out, atom_cap)
    except (ParseError, ValidationError, CapExceeded, UnknownAtom, PriorityCycle) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except InconsistentBase as exc:
        print(f"INCONSISTENT: {exc}", file=err)
        return EXIT_INCONSISTENT
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=err)
        return EXIT_NUMERIC


def _cmd_check(kb, args, out, atom_cap) -> int:
    cs = build_constraint_set(kb, build_world_table(kb.atoms, cap=atom_cap))
    if consistent(cs):
        print("CONSISTENT", file=out)
        return EXIT_OK
    print("INCONSISTENT", file=out)
    return EXIT_INCONSISTENT


def _cmd_entail(kb, args, out, atom_cap) -> int:
    tol = args.tol if args.tol is not None else TOL
    cs = build_constraint_set(kb, build_world_table(kb.atoms, cap=atom_cap))
    if not consistent(cs):
        raise InconsistentBase("hard statements are inconsistent")
    code = EXIT_OK
    for q in _queries(kb, args.query):
        rep = QueryReport.from_bound(q, "ENTAIL", bound(cs, q, tol))
        print(dumps(rep.to_dict()) if args.json else rep.text(), file=out)
        if not rep.defined:
            code = EXIT_UNDEFINED
    return code


def _cmd_spmci(kb, args, out, atom_cap) -> int:
    tol = args.tol if args.tol is not None else TOL
    build_world_table(kb.atoms, cap=atom_cap)
    exclude = [_parse_ci(t, kb.atoms) for t in args.exclude]
    code = EXIT_OK
    for q in _queries(kb, args.query):
        b, ext = spmci_bound(kb, q, exclude=exclude, tol=tol)
        rep = _spmci_report(q, b, ext, args.explain)
        if args.json:
            print(dumps(rep.to_dict()), file=out)
        else:
            print(rep.text(), file=out)
            if args.explain:
                for line in rep.trace:
                    print(line, file=out)
                for line in rep.audit:
                    print(f"# {line}", file=out)
        if not rep.defined:
            code = EXIT_UNDEFINED
    return code


def _cmd_maxent(kb, args, out, atom_cap) -> int:
    table = build_world_table(kb.atoms, cap=atom_cap)
    tol_me = args.tol if args.tol is not None else TOL_ME
    cs = build_constraint_set(kb, table)
    res = max_entropy(cs, tol_me=tol_me, max_iter=args.max_iter)
    if res.status is MEStatus.INFEASIBLE:
        raise InconsistentBase("hard statements are inconsistent")

    queries = _queries(kb, args.query) if (args.query or kb.queries) else []
    reports = []
    for q in queries:
        v = me_query(res.dist, q)
        reports.append(QueryReport(str(q), "MAXENT", v is not None, v, v))

    ci_rows = []
    if args.ci_report:
        tuples = list(kb.defaults)
        for q in queries:
            for c in generate_candidates(kb, q, cs):
                if c.tuple not in tuples:
                    tuples.append(c.tuple)
        ci_rows = ci_report(res.dist, tuples)

    if args.json:
        doc = {
            "status": res.status.value,
            "entropy": json_real(res.entropy),
            "iterations": res.iterations,
            "residual": json_real(res.residual),
            "atoms": list(table.atoms),
            "dist": [json_real(x) for x in res.dist.p],
            "queries": [r.to_dict() for r in reports],
        }
        if args.ci_report:
            doc["ci_report"] = [
                {"ci": str(r.tuple), "holds": r.holds, "discrepancy": json_real(r.discrepancy)}
                for r in ci_rows
            ]
        print(dumps(doc), file=out)
    else:
        print(f"status {res.status.value}", file=out)
        print(f"entropy {fmt_real(res.entropy)}", file=out)
        print(f"iterations {res.iterations}  residual {fmt_real(res.residual)}", file=out)
        for w, pw in enumerate(res.dist.p):
            print(f"{w}\t{table.bitstring(w)}\t{fmt_real(pw)}", file=out)
        for r in reports:
            print(r.text(), file=out)
        for r in ci_rows:
            gap = "undefined" if r.discrepancy is None else fmt_real(r.discrepancy)
            print(f"{'HOLDS' if r.holds else 'FAILS'}  {r.tuple}  discrepancy={gap}", file=out)

    if res.status is MEStatus.NOT_CONVERGED:
        return EXIT_NUMERIC
    if any(not r.defined for r in reports):
        return EXIT_UNDEFINED
    return EXIT_OK


def _cmd_worlds(kb, args, out, atom_cap) -> int:
    """``index<TAB>bits<TAB>marks``; one mark per file query.

    Marks: ``+`` world satisfies target and given, ``-`` given only,
    ``.`` given fails.
    """
    table = build_world_table(kb.atoms, cap=atom_cap)
    sets = []
    for q in kb.queries:
        y = satisfying_set(q.given, table).bits
        x = satisfying_set(q.target, table).bits
        sets.append((x, y))
    for w in range(table.world_count):
        marks = "".join("+" if (x[w] and y[w]) else "-" if y[w] else "." for x, y in sets)
        print(f"{w}\t{table.bitstring(w)}\t{marks}", file=out)
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "entail": _cmd_entail,
    "spmci": _cmd_spmci,
    "maxent": _cmd_maxent,
    "worlds": _cmd_worlds,
}


def main() -> None:
    sys.exit(run())
