"""``gptlab`` command line: analyze, tensor, distinguish, catalog.

Exit codes: 0 on a completed run whatever the verdicts, 2 on bad input
(parse, validation, indices), 3 when a size budget is exceeded, 1 otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys

from gptlab import __version__
from gptlab.bits import distinguish
from gptlab.errors import GptLabError, ImproperEffect
from gptlab.report import analyze, jsonable, tensor_report, text_report
from gptlab.scalar import DEFAULT_EPS, format_scalar
from gptlab.spaces import default_catalog, resolve
from gptlab.tensor import (
    DEFAULT_BUDGET,
    DEFAULT_VERTEX_LIMIT,
    ChshSetup,
    chsh_max,
    default_setup,
    max_tensor,
    theorem2_check,
)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--tolerance", type=float, default=DEFAULT_EPS,
                        help="eps for float-backend spaces (default 1e-9)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for pair LPs")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum composite dimension d_A * d_B")

    p = argparse.ArgumentParser(prog="gptlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"gptlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="symmetry, bit symmetry, self-duality")
    a.add_argument("spec", help="square | ngon:N | simplex:N | cube:N | path to a JSON file")

    t = sub.add_parser("tensor", parents=[common], help="maximal tensor product of two spaces")
    t.add_argument("a")
    t.add_argument("b")
    t.add_argument("--classify", action="store_true", help="count product/entangled vertices")
    t.add_argument("--chsh", action="store_true", help="maximise the CHSH functional")
    t.add_argument("--setup", help='JSON file {"alice": [e1, e2], "bob": [f1, f2]}')
    t.add_argument("--check-theorem2", action="store_true",
                   help="entangled vertex present => composite not bit-symmetric")
    t.add_argument("--vertex-limit", type=int, default=DEFAULT_VERTEX_LIMIT,
                   help="largest composite on which bit symmetry is decided directly")

    d = sub.add_parser("distinguish", parents=[common], help="single-pair distinguishability LP")
    d.add_argument("spec")
    d.add_argument("i", type=int)
    d.add_argument("j", type=int)

    sub.add_parser("catalog", parents=[common], help="list the built-in spaces")
    return p


def _emit(args, report: dict, text: str | None = None):
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(text if text is not None else text_report(report))


def _load_setup(path, a, b) -> ChshSetup:
    try:
        with open(path) as fh:
            raw = json.load(fh)
        backend = a.backend.join(b.backend)
        setup = ChshSetup(
            tuple(backend.vector(e) for e in raw["alice"]),
            tuple(backend.vector(f) for f in raw["bob"]),
        )
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ImproperEffect(f"cannot read CHSH setup {path}: {exc}") from None
    setup.validate(a, b)
    return setup


def cmd_analyze(args) -> int:
    space = resolve(args.spec, eps=args.tolerance)
    _emit(args, analyze(space, spec=args.spec, jobs=args.jobs))
    return 0


def cmd_tensor(args) -> int:
    a = resolve(args.a, eps=args.tolerance)
    b = resolve(args.b, eps=args.tolerance)
    needs_vertices = args.classify or args.chsh or not args.check_theorem2
    tensor = max_tensor(a, b, args.budget) if needs_vertices else None
    chsh = None
    if args.chsh:
        setup = _load_setup(args.setup, a, b) if args.setup else default_setup(a, b)
        value, k = chsh_max(tensor, setup)
        chsh = (setup, value, k)
    verdict = None
    if args.check_theorem2:
        verdict = theorem2_check(a, b, args.budget, args.vertex_limit, tensor=tensor)
    _emit(args, tensor_report(a, b, tensor, chsh, verdict, classify=args.classify))
    return 0


def cmd_distinguish(args) -> int:
    space = resolve(args.spec, eps=args.tolerance)
    pair = distinguish(space, args.i, args.j)
    report = {
        "schema": 1,
        "command": "distinguish",
        "spec": args.spec,
        "pair": [args.i, args.j],
        "distinguishable": pair is not None,
        "witness": jsonable(pair.witness.covector) if pair else None,
    }
    if pair is None:
        text = "not distinguishable"
    else:
        text = "witness effect " + " ".join(format_scalar(x) for x in pair.witness.covector)
    _emit(args, report, text)
    return 0


def cmd_catalog(args) -> int:
    rows = []
    for s in default_catalog(args.tolerance):
        rows.append({
            "name": s.name,
            "dimension": s.dimension,
            "vertices": len(s.vertices),
            "backend": s.backend.kind,
        })
    text = "\n".join(
        f"{r['name']:12s} dim {r['dimension']:2d}  vertices {r['vertices']:3d}  {r['backend']}"
        for r in rows
    )
    _emit(args, {"schema": 1, "command": "catalog", "spaces": rows}, text)
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "tensor": cmd_tensor,
    "distinguish": cmd_distinguish,
    "catalog": cmd_catalog,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except GptLabError as exc:
        print(f"gptlab: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
