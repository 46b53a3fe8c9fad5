"""Small exhaustive sweeps, one per family of checks.

Each sweep visits one graph per isomorphism class, checks that the
relevant exchange graph is connected, and re-verifies seeded constructive
paths or quadric certificates. The counts show how much each bound covers.

Run: python3 demos/sweep_demo.py [max_edges]
"""

import sys
import time

from forestswap.sweep import sweep_theorem4, sweep_theorem7, sweep_white

n = int(sys.argv[1]) if len(sys.argv) > 1 else 7
for label, run in [
    ("ordered tree pairs (k=2)", lambda: sweep_theorem7(n)),
    ("base triples (k=3)", lambda: sweep_theorem4(n, 3)),
    ("degree-2 fibers", lambda: sweep_white(min(n, 6), 2)),
    ("degree-3 fibers", lambda: sweep_white(min(n, 6), 3)),
]:
    start = time.perf_counter()
    report = run()
    checks = ", ".join(f"{v} {k}" for k, v in sorted(report.checks.items()))
    status = "ok" if report.ok else f"{len(report.failures)} FAILURES"
    print(f"{label:26} {report.instances:5} graphs  {checks}  [{status}, {time.perf_counter() - start:.1f}s]")
