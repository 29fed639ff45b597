"""Search for orthogonal mixed-state pairs that are not perfectly distinguishable.

On a bit-symmetric space, <x, y> = 0 with one state pure implies perfect
distinguishability; whether the same holds for two mixed states is open.
This samples mixtures of vertex pairs on a grid and lists what it finds.
Finding nothing is not a proof.

    python scripts/mixed_orthogonality_search.py ngon:5 --steps 6
"""

import argparse

from gptlab.bits import is_bit_symmetric
from gptlab.scalar import format_scalar
from gptlab.selfdual import invariant_inner_product, mixed_orthogonality_search
from gptlab.spaces import resolve
from gptlab.symmetry import automorphism_group


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("spaces", nargs="*", default=["ngon:3", "ngon:5", "ngon:7", "simplex:3", "simplex:4"])
    p.add_argument("--steps", type=int, default=4, help="grid subdivisions per vertex pair")
    args = p.parse_args()

    for spec in args.spaces:
        space = resolve(spec)
        group = automorphism_group(space)
        if not is_bit_symmetric(space, group).is_bit_symmetric:
            print(f"{spec}: not bit-symmetric, skipped")
            continue
        hits = mixed_orthogonality_search(space, invariant_inner_product(space, group), args.steps)
        print(f"{spec}: {len(hits)} orthogonal but indistinguishable pairs on a {args.steps}-step grid")
        for x, y in hits[:5]:
            print("   ", " ".join(format_scalar(c) for c in x), "|", " ".join(format_scalar(c) for c in y))


if __name__ == "__main__":
    main()
