"""Print the worked examples shipped in kbs/ next to their expected values."""

from pathlib import Path

from nmprob import build_constraint_set, bound, max_entropy, me_query, parse_conditional, parse_kb, spmci_bound

KBS = Path(__file__).resolve().parent.parent / "kbs"

# (file, mode, query, expected lower, expected upper)
CASES = [
    ("igor_a1.npr", "entail", "P(Fights)", 0.18, 0.88),
    ("igor_a2.npr", "entail", "P(Fights)", 0.32, 0.32),
    ("neptune_a1.npr", "entail", "P(L | N)", 0.1, 0.1),
    ("neptune_a1.npr", "spmci", "P(L | N & T)", 0.1, 0.1),
    ("neptune_a2.npr", "spmci", "P(L | N & T)", 0.05, 0.05),
    ("neptune_a2.npr", "spmci", "P(L | N & T & W)", 0.05, 0.05),
    ("neptune_chain.npr", "spmci", "P(L | N & T & W & Blue)", 0.05, 0.05),
    ("neptune_chain.npr", "spmci", "P(L | N & T & W & Blue & AirCond)", 0.05, 0.05),
    ("evidential.npr", "spmci", "P(H | E1 & E2)", 0.224 / 0.26, 0.224 / 0.26),
    ("igor_a2.npr", "maxent", "P(Fights)", 0.32, 0.32),
]


def evaluate(kb, mode, q):
    if mode == "entail":
        b = bound(build_constraint_set(kb), q)
        return b.lower, b.upper
    if mode == "spmci":
        b, _ = spmci_bound(kb, q)
        return b.lower, b.upper
    v = me_query(max_entropy(build_constraint_set(kb)).dist, q)
    return v, v


def main():
    bad = 0
    for name, mode, text, lo, hi in CASES:
        kb = parse_kb((KBS / name).read_text())
        got = evaluate(kb, mode, parse_conditional(text, kb.atoms))
        ok = abs(got[0] - lo) <= 1e-6 and abs(got[1] - hi) <= 1e-6
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} {name:18} {mode:7} {text:36} [{got[0]:.6f}, {got[1]:.6f}]")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
