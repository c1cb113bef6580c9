"""Run the duplicating-server family for a range of n and print one CSV row per n."""

import argparse
import csv
import sys
import time

from softpi.process import bde_process, size
from softpi.reducer import build_blowup_family, run_to_normal_form


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--strategy", choices=("first", "random"), default="first")
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "initial_size", "box_depth", "steps", "two_to_n", "peak_size", "final_size", "seconds"])
    for n in range(1, a.max_n + 1):
        t0 = time.perf_counter()
        p = build_blowup_family(n)
        t = run_to_normal_form(p, strategy=a.strategy, seed=a.seed)
        w.writerow([n, size(p), bde_process(p), t.length, 2**n, t.peak_size, size(t.final), f"{time.perf_counter() - t0:.3f}"])


if __name__ == "__main__":
    main()
