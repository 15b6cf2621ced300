"""Run the full property battery over the catalog and print verdicts with timings.

    python3 scripts/battery_report.py            # every catalog metric
    python3 scripts/battery_report.py gprm --slowest 10
"""
import argparse
import time

from curvkit.catalog import BUILTIN_NAMES, builtin_metric
from curvkit.classify import Classifier


def main():
    p = argparse.ArgumentParser()
    p.add_argument("metrics", nargs="*", default=list(BUILTIN_NAMES))
    p.add_argument("--slowest", type=int, default=5, help="how many of the slowest properties to list")
    args = p.parse_args()
    for name in args.metrics:
        t0 = time.perf_counter()
        metric, assumptions = builtin_metric(name)
        report = Classifier(metric, assumptions).battery()
        total = time.perf_counter() - t0
        held = sum(v.holds for v in report.verdicts.values())
        print(f"== {name}: {held}/{len(report.verdicts)} properties hold, {total:.1f}s")
        for line in report.lines():
            print("  " + line)
        violated = [i for i in report.implications if i[2] == "VIOLATED"]
        print(f"  implications checked: {len(report.implications)}, violated: {len(violated)}")
        slow = sorted(report.timings.items(), key=lambda kv: -kv[1])[:args.slowest]
        print("  slowest: " + ", ".join(f"{p} {s:.2f}s" for p, s in slow))


if __name__ == "__main__":
    main()
