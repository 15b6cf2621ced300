"""Compare modular spot checks with exact verification in the screened solver.

Every solver-backed property of the catalog battery is evaluated twice: once
with leftover equations checked at random points mod p, once checked exactly.
The verdicts and solution dimensions must agree; the timings compare the two
verification modes.

    python3 scripts/screening_check.py
"""
import time

from curvkit import linalg
from curvkit.catalog import BUILTIN_NAMES, builtin_metric
from curvkit.classify import PROPERTIES, Classifier

SOLVED = [p for p in PROPERTIES if p.startswith(("venzi", "weakly", "ricci_compatible"))
          or p.endswith("recurrent") or "=cQ" in p]


def run(name: str, exact: bool):
    linalg.EXACT_VERIFY = exact
    metric, assumptions = builtin_metric(name)
    t0 = time.perf_counter()
    report = Classifier(metric, assumptions).battery(SOLVED)
    return report, time.perf_counter() - t0


def main():
    mismatches = 0
    for name in BUILTIN_NAMES:
        fast, t_fast = run(name, exact=False)
        slow, t_slow = run(name, exact=True)
        for p in SOLVED:
            a, b = fast[p], slow[p]
            same = a.status == b.status and a.witness.get("dimension") == b.witness.get("dimension")
            if not same:
                mismatches += 1
                print(f"  MISMATCH {name} {p}: {a.line()} | {b.line()}")
        print(f"{name}: spot-checked {t_fast:.1f}s, exact {t_slow:.1f}s, {len(SOLVED)} properties")
    linalg.EXACT_VERIFY = True
    print(f"mismatches: {mismatches}")


if __name__ == "__main__":
    main()
