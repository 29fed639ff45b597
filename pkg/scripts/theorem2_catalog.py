"""Entanglement versus bit symmetry over every in-budget catalog pair.

Prints one line per unordered pair (A, B) with d_A * d_B within the budget
and exits nonzero if any composite with an entangled vertex comes out
bit-symmetric.

    python scripts/theorem2_catalog.py --budget 16
"""

import argparse
import sys
import time

from gptlab.spaces import default_catalog
from gptlab.tensor import CONTRADICTION, DEFAULT_VERTEX_LIMIT, theorem2_check


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--budget", type=int, default=16)
    p.add_argument("--vertex-limit", type=int, default=DEFAULT_VERTEX_LIMIT)
    args = p.parse_args()

    catalog = default_catalog()
    counts = {}
    bad = 0
    start = time.perf_counter()
    for i, a in enumerate(catalog):
        for b in catalog[i:]:
            if a.dimension * b.dimension > args.budget:
                continue
            t = time.perf_counter()
            v = theorem2_check(a, b, args.budget, args.vertex_limit)
            counts[v.status] = counts.get(v.status, 0) + 1
            bad += v.status == CONTRADICTION
            verts = "?" if v.vertices is None else v.vertices
            print(f"{a.name:>10} x {b.name:<10} {v.status:<28} vertices {verts:>5}  {time.perf_counter() - t:6.2f}s")
    print(f"{sum(counts.values())} pairs in {time.perf_counter() - start:.1f}s: "
          + ", ".join(f"{k} {n}" for k, n in sorted(counts.items())))
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
