"""Compare the maximum-entropy value of a query with its SPMCI value.

Usage: python scripts/me_vs_spmci.py [file.npr] [--query "P(L | N & T)"] [--tol 1e-6]
Defaults to the Neptune A1 base and its file query.
"""

import argparse
from pathlib import Path

from nmprob import build_constraint_set, max_entropy, me_query, parse_conditional, parse_kb, spmci_bound

KBS = Path(__file__).resolve().parent.parent / "kbs"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("file", nargs="?", default=str(KBS / "neptune_a1.npr"))
    ap.add_argument("--query", action="append")
    ap.add_argument("--tol", type=float, default=1e-6)
    args = ap.parse_args(argv)

    kb = parse_kb(Path(args.file).read_text())
    queries = [parse_conditional(t, kb.atoms) for t in args.query] if args.query else list(kb.queries)
    me = max_entropy(build_constraint_set(kb))
    print(f"ME status {me.status.value}, entropy {me.entropy:.6f}")
    for q in queries:
        b, ext = spmci_bound(kb, q)
        v = me_query(me.dist, q)
        if v is None or not b.defined:
            print(f"{q}: undefined (ME {v}, SPMCI defined={b.defined})")
            continue
        if b.upper - b.lower > args.tol:
            gap = max(b.lower - v, v - b.upper, 0.0)
            verdict = "inside" if gap == 0 else "outside"
            print(f"{q}: ME {v:.6f}, SPMCI [{b.lower:.6f}, {b.upper:.6f}] ({verdict}, gap {gap:.2e})")
            continue
        gap = abs(v - b.lower)
        verdict = "agree" if gap <= args.tol else "disagree"
        print(f"{q}: ME {v:.6f}, SPMCI {b.lower:.6f} -> {verdict} (discrepancy {gap:.2e})")
        for line in ext.trace():
            print(f"    {line}")


if __name__ == "__main__":
    main()
