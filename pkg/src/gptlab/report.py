"""Analysis and tensor reports with re-checkable certificates.

A report is a plain dict ready for ``json.dumps``.  Exact scalars are
written as ``"p/q"`` strings, floats as numbers.  :func:`recheck` takes a
report back, rebuilds the named space and re-derives every verdict from the
certificate sections alone plus the (deterministic) symmetry group.
"""

from __future__ import annotations

import time
from fractions import Fraction

from gptlab import linalg
from gptlab.bits import is_bit_symmetric, separating_effect
from gptlab.errors import Degenerate, NotTransitive
from gptlab.scalar import Backend, to_json_scalar
from gptlab.selfdual import check_statements, invariant_inner_product, verify_self_dual
from gptlab.spaces import Effect, StateSpace
from gptlab.symmetry import automorphism_group, on_pairs, on_vertices, orbits

SCHEMA = 1


def jsonable(x):
    """Scalars, vectors and matrices to JSON-friendly values."""
    if isinstance(x, (tuple, list)):
        return [jsonable(y) for y in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    return to_json_scalar(x)


def from_jsonable(x, backend: Backend):
    if isinstance(x, list):
        return tuple(from_jsonable(y, backend) for y in x)
    if backend.exact:
        return Fraction(x)
    return float(x)


class _Clock:
    def __init__(self):
        self.timings = {}

    def run(self, name, fn, *args, **kwargs):
        t = time.perf_counter()
        out = fn(*args, **kwargs)
        self.timings[name] = round(time.perf_counter() - t, 6)
        return out


def analyze(space: StateSpace, spec: str | None = None, jobs: int = 1) -> dict:
    """Full pipeline: group, distinguishable pairs, bit symmetry, form, self-duality."""
    clock = _Clock()
    b = space.backend
    group = clock.run("symmetry", automorphism_group, space)
    verdict = clock.run("bit_symmetry", is_bit_symmetric, space, group, None, jobs)
    vertex_orbits = orbits(group, range(len(space.vertices)), on_vertices)

    report = {
        "schema": SCHEMA,
        "command": "analyze",
        "spec": spec or space.name,
        "space": space.name,
        "dimension": space.dimension,
        "vertex_count": len(space.vertices),
        "backend": b.kind,
        "eps": b.eps,
        "group_order": group.order,
        "transitive": verdict.transitive_on_pure_states,
        "bit_symmetric": verdict.is_bit_symmetric,
        "orbit_count": verdict.orbit_count,
        "degenerate": verdict.degenerate,
        "self_dual": None,
        "c": None,
        "lambda": None,
        "statements": None,
    }
    cert = {
        "vertex_orbits": vertex_orbits,
        "pair_orbits": [
            {
                "representative": [p.i, p.j],
                "size": len(orb),
                "witness": jsonable(p.witness.covector),
            }
            for p, orb in zip(verdict.orbit_representatives, verdict.orbits)
        ],
    }
    try:
        form = clock.run("inner_product", invariant_inner_product, space, group)
    except (Degenerate, NotTransitive) as exc:
        cert["self_dual"] = {"kind": "not-applicable", "reason": str(exc)}
    else:
        sd = clock.run("self_duality", verify_self_dual, space, form)
        st = clock.run(
            "statements", check_statements, space, group, form, verdict.pairs,
            verdict.is_bit_symmetric,
        )
        report["self_dual"] = sd.is_self_dual
        report["c"] = jsonable(form.c)
        report["lambda"] = jsonable(form.lam)
        report["statements"] = {
            "c_negative": st.c_negative,
            "overlaps_in_range": st.overlaps_in_range,
            "min_overlap_implies_distinguishable": st.min_overlap_implies_distinguishable,
            "distinguishable_implies_min_overlap": st.distinguishable_implies_min_overlap,
            "unit_norm_pure": st.unit_norm_pure,
            "orthogonal_distinguishable": st.orthogonal_distinguishable,
            "nonnegative": st.nonnegative,
            "invariant": st.invariant,
            "advisory": st.advisory,
        }
        entry = {"kind": "form", "full_form": jsonable(form.full_form)}
        if sd.witness is not None:
            entry["kind"] = sd.witness["kind"]
            entry["witness"] = {k: jsonable(v) for k, v in sd.witness.items() if k != "kind"}
        cert["self_dual"] = entry
    report["certificates"] = cert
    report["timings"] = clock.timings
    return report


def recheck(report: dict, space: StateSpace) -> dict:
    """Re-derive the verdicts of an analysis report from its certificates.

    Returns the recomputed verdicts; callers compare them with the report.
    Raises ValueError when a certificate does not check out.
    """
    if report.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {report.get('schema')!r}")
    b = space.backend
    cert = report["certificates"]
    group = automorphism_group(space)
    n = len(space.vertices)

    vorb = orbits(group, range(n), on_vertices)
    if [list(o) for o in vorb] != [list(o) for o in cert["vertex_orbits"]]:
        raise ValueError("vertex orbit table does not match the symmetry group")

    # every listed witness separates its representative pair
    reps = []
    for entry in cert["pair_orbits"]:
        i, j = entry["representative"]
        e = Effect(from_jsonable(entry["witness"], b))
        if not (e.is_proper(space) and b.eq(e(space.vertices[i]), 1) and b.eq(e(space.vertices[j]), 0)):
            raise ValueError(f"witness for pair ({i}, {j}) does not separate it")
        reps.append((i, j))
    # representatives lie in distinct orbits, and every other pair is either
    # in one of their orbits or provably not separable
    covered = set()
    pair_orbits = orbits(group, _all_pairs(n), on_pairs)
    for r in reps:
        orb = next(o for o in pair_orbits if r in o)
        if covered & set(orb):
            raise ValueError("two representatives share an orbit")
        covered |= set(orb)
    for p in _all_pairs(n):
        if p not in covered and separating_effect(space, space.vertices[p[0]], space.vertices[p[1]]):
            raise ValueError(f"pair {p} is distinguishable but not in the orbit table")

    out = {
        "transitive": len(vorb) == 1,
        "bit_symmetric": len(reps) <= 1,
        "orbit_count": len(reps),
        "group_order": group.order,
        "self_dual": None,
    }
    sd = cert.get("self_dual", {})
    if sd.get("kind") == "not-applicable":
        return out
    g = from_jsonable(sd["full_form"], b)
    for t in group.generators:
        if not linalg.mat_eq(linalg.matmul(linalg.transpose(t.matrix), linalg.matmul(g, t.matrix)), g, b):
            raise ValueError("certified form is not invariant")
    if sd["kind"] == "form":
        ginv = linalg.inverse(g, b)
        for ray in space.facets:
            rep = linalg.matvec(ginv, ray)
            if any(b.lt(linalg.dot(h, rep), 0) for h in space.facets):
                raise ValueError("an effect's representative is not in the state cone")
        for w in space.vertices:
            f = linalg.vecmat(w, g)
            if any(b.lt(linalg.dot(f, v), 0) for v in space.vertices):
                raise ValueError("a state's functional is negative on a state")
        out["self_dual"] = True
    elif sd["kind"] == "effect":
        w = sd["witness"]
        ray = from_jsonable(w["effect"], b)
        h = from_jsonable(w["violated"], b)
        rep = linalg.matvec(linalg.inverse(g, b), ray)
        if not _is_facet(space, ray) or not b.lt(linalg.dot(h, rep), 0):
            raise ValueError("effect witness does not show a violation")
        out["self_dual"] = False
    elif sd["kind"] == "state":
        w = sd["witness"]
        f = linalg.vecmat(space.vertices[w["vertex"]], g)
        if not b.lt(linalg.dot(f, space.vertices[w["negative_on"]]), 0):
            raise ValueError("state witness does not show a negative value")
        out["self_dual"] = False
    else:
        raise ValueError(f"unknown self-duality certificate kind {sd['kind']!r}")
    return out


def _all_pairs(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def _is_facet(space, ray):
    return any(space.backend.vec_eq(ray, h) for h in space.facets)


VERDICT_KEYS = ("transitive", "bit_symmetric", "orbit_count", "group_order", "self_dual")


def text_report(report: dict) -> str:
    """Human-readable rendering; verdict values are those of the JSON report."""
    lines = []
    if report["command"] == "analyze":
        lines.append(f"space          {report['space']}")
        lines.append(f"dimension      {report['dimension']}")
        lines.append(f"vertices       {report['vertex_count']}")
        lines.append(f"backend        {report['backend']}" + (f" (eps {report['eps']:g})" if report["eps"] else ""))
        lines.append(f"group_order    {report['group_order']}")
        lines.append(f"transitive     {_fmt(report['transitive'])}")
        lines.append(f"bit_symmetric  {_fmt(report['bit_symmetric'])}")
        lines.append(f"orbit_count    {report['orbit_count']}")
        lines.append(f"self_dual      {_fmt(report['self_dual'])}")
        lines.append(f"c              {_fmt(report['c'])}")
        lines.append(f"lambda         {_fmt(report['lambda'])}")
        if report["statements"]:
            for k, v in report["statements"].items():
                lines.append(f"  {k:36s} {_fmt(v)}")
        lines.append("pair orbits:")
        for entry in report["certificates"]["pair_orbits"]:
            i, j = entry["representative"]
            lines.append(f"  ({i}, {j}) x{entry['size']}  witness {_fmt(entry['witness'])}")
    elif report["command"] == "tensor":
        lines.append(f"composite      {report['space']}")
        lines.append(f"dimension      {report['dimension']}")
        for key in ("vertex_count", "product", "entangled"):
            if key in report:
                lines.append(f"{key:14s} {_fmt(report[key])}")
        if "chsh" in report:
            ch = report["chsh"]
            lines.append(f"chsh_max       {_fmt(ch['max'])} at vertex {ch['vertex']} ({ch['vertex_class']})")
        if "theorem2" in report:
            t2 = report["theorem2"]
            lines.append(f"entanglement   {t2['status']}")
            lines.append(f"  {t2['message']}")
    else:
        raise ValueError(f"unknown report command {report['command']!r}")
    if report.get("timings"):
        lines.append("timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in report["timings"].items()))
    return "\n".join(lines)


def _fmt(x) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.10g}"
    if isinstance(x, list):
        return "(" + ", ".join(_fmt(y) for y in x) + ")"
    return str(x)


def tensor_report(a, b, tensor=None, chsh=None, verdict=None, classify=False) -> dict:
    """Report for ``a (x)max b``; ``chsh`` is ``(setup, value, vertex index)``."""
    backend = a.backend.join(b.backend)
    report = {
        "schema": SCHEMA,
        "command": "tensor",
        "spec": [a.name, b.name],
        "space": f"{a.name}*{b.name}",
        "dimension": a.dimension * b.dimension,
        "backend": backend.kind,
        "eps": backend.eps,
    }
    if tensor is not None:
        comp = tensor.composite
        report["vertex_count"] = len(comp.vertices)
        report["product"] = tensor.product_count
        report["entangled"] = tensor.entangled_count
        if classify:
            report["entangled_vertices"] = tensor.entangled_indices()
    if chsh is not None:
        setup, value, k = chsh
        report["chsh"] = {
            "max": jsonable(value),
            "vertex": k,
            "vertex_class": tensor.vertex_class[k].kind,
            "vertex_coordinates": jsonable(tensor.composite.vertices[k]),
            "setup": {"alice": jsonable(setup.alice), "bob": jsonable(setup.bob)},
        }
    if verdict is not None:
        report["theorem2"] = {
            "status": verdict.status,
            "entangled": verdict.entangled,
            "product": verdict.product,
            "vertices": verdict.vertices,
            "bit_symmetric": verdict.bit_symmetric,
            "consistent": verdict.consistent,
            "message": verdict.message,
            "witness": jsonable(verdict.witness) if verdict.witness is not None else None,
        }
    return report
