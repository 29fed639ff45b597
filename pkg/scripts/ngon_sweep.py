"""Bit symmetry and self-duality of regular polygons, one row per n.

    python scripts/ngon_sweep.py --max-n 15
"""

import argparse
import time

from gptlab.bits import is_bit_symmetric
from gptlab.selfdual import invariant_inner_product, verify_self_dual
from gptlab.spaces import make_ngon
from gptlab.symmetry import automorphism_group


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--min-n", type=int, default=3)
    p.add_argument("--max-n", type=int, default=11)
    p.add_argument("--tolerance", type=float, default=1e-9)
    args = p.parse_args()

    print(f"{'n':>3} {'backend':>12} {'order':>6} {'orbits':>6} {'bit-sym':>8} {'self-dual':>9} {'c':>12}  secs")
    for n in range(args.min_n, args.max_n + 1):
        t = time.perf_counter()
        space = make_ngon(n, args.tolerance)
        group = automorphism_group(space)
        verdict = is_bit_symmetric(space, group)
        form = invariant_inner_product(space, group)
        sd = verify_self_dual(space, form).is_self_dual
        print(
            f"{n:>3} {str(space.backend):>12} {group.order:>6} {verdict.orbit_count:>6} "
            f"{str(verdict.is_bit_symmetric):>8} {str(sd):>9} {float(form.c):>12.8f}  "
            f"{time.perf_counter() - t:.2f}"
        )


if __name__ == "__main__":
    main()
