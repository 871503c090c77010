"""Running catlang tasks and producing JSON reports.

Every task yields ``{"id", "kind", "status", "witness", "millis"}``.  An
``ok`` witness is fed back through the matching validator before it is
reported, so a report never claims something the engine cannot recheck.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

from .adjunction import adjunction_from_unit_counit, gaft_left_adjoint, oaft_left_adjoint, synthesize_left_adjoint
from .caps import Caps, resolve
from .catlang import Atom, TaskSpec, Workspace, load
from .category import FiniteCategory, set_label, universal_objects
from .errors import ArityError, CathedraError, UnresolvedReference
from .finset import Cls
from .functor import Functor, classify_functor, validate_functor
from .limits import (
    Cocone,
    Cone,
    colimit,
    cospan_diagram,
    discrete_diagram,
    is_colimit_cocone,
    is_limit_cone,
    is_monic_epic,
    kan_left,
    limit,
    monic_via_pullback,
    parallel_diagram,
    span_diagram,
)
from .presheaf import (
    check_yoneda,
    density_check,
    find_representation,
    is_sieve,
    subobject_classifier,
    yoneda_backward,
)

SCHEMA = "1"


class TaskFailure(CathedraError):
    """A task that ran but has no answer (reported as not-found)."""


def render(x) -> str:
    """Stable text for an element of a constructed set."""
    if isinstance(x, str):
        return x
    if isinstance(x, Cls):
        return f"[{x.obj}:{render(x.atom)}]"
    if isinstance(x, tuple):
        return "(" + ",".join(render(y) for y in x) + ")"
    if isinstance(x, frozenset):
        return set_label(render(y) for y in x)
    return str(x)


# argument helpers


def _split(args, *keywords):
    """Split argument atoms at keyword words; returns {keyword or '': [atoms]}."""
    out = {"": []}
    current = ""
    for a in args:
        if a.text in keywords and a.members is None:
            current = a.text
            out[current] = []
        else:
            out[current].append(a)
    return out


def _one(items, what, span=None) -> Atom:
    if len(items) != 1:
        raise ArityError(f"expected one {what}, got {len(items)}", span)
    return items[0]


def _morphism(C: FiniteCategory, atom: Atom) -> int:
    try:
        return C.morphism_index(atom.text)
    except KeyError:
        raise UnresolvedReference(f"no arrow {atom.text!r} in {C.name}", atom.span) from None


def _objects(C: FiniteCategory, atoms) -> list[int]:
    out = []
    for a in atoms:
        try:
            out.append(C.object_index(a.text))
        except KeyError:
            raise UnresolvedReference(f"no object {a.text!r} in {C.name}", a.span) from None
    return out


SHAPE_WORDS = {
    "product": "discrete", "coproduct": "discrete",
    "terminal": "discrete", "initial": "discrete",
    "equalizer": "parallel", "coequalizer": "parallel",
    "pullback": "cospan", "pushout": "span",
}


def _diagram(ws: Workspace, spec: TaskSpec) -> tuple[Functor, str, str]:
    parts = _split(spec.args, "of", "in")
    if "of" in parts:
        D = ws.functor(_one(parts["of"], "diagram", spec.span))
        if "in" in parts:
            C = ws.category(_one(parts["in"], "category", spec.span))
            if not C.same_tables(D.target):
                raise ArityError("diagram does not land in the named category", spec.span)
        return D, "diagram", parts["of"][0].text
    if not parts[""] or "in" not in parts:
        raise ArityError(f"{spec.kind} needs 'of DIAGRAM' or 'SHAPE ARGS in CATEGORY'", spec.span)
    word, rest = parts[""][0].text, parts[""][1:]
    if word not in SHAPE_WORDS:
        raise ArityError(f"unknown shape {word!r}", parts[""][0].span)
    cname = _one(parts["in"], "category", spec.span).text
    C = ws.category(parts["in"][0])
    kind = SHAPE_WORDS[word]
    if kind == "discrete":
        if word in ("terminal", "initial") and rest:
            raise ArityError(f"{word} takes no arguments", spec.span)
        return discrete_diagram(C, _objects(C, rest)), word, cname
    if len(rest) != 2:
        raise ArityError(f"{word} takes two arrows", spec.span)
    f, g = (_morphism(C, a) for a in rest)
    build = {"parallel": parallel_diagram, "cospan": cospan_diagram, "span": span_diagram}[kind]
    return build(C, f, g), word, cname


def _cone_witness(cone, C: FiniteCategory, shape: str, where: str) -> dict:
    return {
        "category": where if shape != "diagram" else C.name,
        "shape": shape,
        "vertex": C.objects[cone.vertex],
        "legs": [C.label(p) for p in cone.legs],
    }


def _run_limit(ws, spec, caps, dual=False):
    D, shape, where = _diagram(ws, spec)
    C = D.target
    cone = colimit(D, caps) if dual else limit(D, caps)
    if cone is None:
        raise TaskFailure(f"no {'colimit' if dual else 'limit'} exists")
    w = _cone_witness(cone, C, shape, where)
    w["diagram"] = [C.objects[o] for o in D.object_map]
    return w, lambda: _recheck_limit(D, w, caps, dual)


def _recheck_limit(D, w, caps, dual):
    C = D.target
    v = C.object_index(w["vertex"])
    legs = tuple(C.morphism_index(lab) for lab in w["legs"])
    if dual:
        return is_colimit_cocone(Cocone(D, v, legs), caps)
    return is_limit_cone(Cone(D, v, legs), caps)


def _adjunction_witness(adj) -> dict:
    A, B = adj.source, adj.target
    F = adj.left
    return {
        "left": {A.objects[a]: B.objects[F(a)] for a in range(A.n_objects)},
        "left_arrows": {A.label(f): B.label(F.fmap(f)) for f in A.non_identities()},
        "unit": {A.objects[a]: A.label(adj.unit[a]) for a in range(A.n_objects)},
        "counit": {B.objects[b]: B.label(adj.counit[b]) for b in range(B.n_objects)},
    }


def _run_left_adjoint(ws, spec, caps):
    parts = _split(spec.args, "of", "via")
    G = ws.functor(_one(parts.get("of", parts[""]), "functor", spec.span))
    method = parts["via"][0].text if "via" in parts and parts["via"] else "comma"
    if method == "comma":
        adj = synthesize_left_adjoint(G, caps=caps)
        if adj is None:
            raise TaskFailure("some comma category has no initial object")
    elif method == "oaft":
        adj = oaft_left_adjoint(G, caps)
    elif method == "gaft":
        adj = gaft_left_adjoint(G, caps=caps).adjunction
    else:
        raise ArityError(f"unknown method {method!r}", spec.span)
    w = _adjunction_witness(adj)
    w["method"] = method

    def recheck():
        A, B = G.target, G.source
        obj = [B.object_index(w["left"][A.objects[a]]) for a in range(A.n_objects)]
        mor = []
        for f in range(A.n_morphisms):
            if A.is_identity(f):
                mor.append(B.identities[obj[A.dom(f)]])
            else:
                mor.append(B.morphism_index(w["left_arrows"][A.label(f)]))
        F = validate_functor(A, B, obj, mor)
        unit = [A.morphism_index(w["unit"][A.objects[a]]) for a in range(A.n_objects)]
        counit = [B.morphism_index(w["counit"][B.objects[b]]) for b in range(B.n_objects)]
        adjunction_from_unit_counit(F, G, unit, counit)
        return True

    return w, recheck


def _run_yoneda(ws, spec, caps):
    X = ws.presheaf(_one(spec.args, "presheaf", spec.span))
    C = X.source.op
    reports = {C.objects[a]: check_yoneda(X, a, caps) for a in range(C.n_objects)}
    w = {"objects": {k: {"nats": r.nat_count, "elements": r.value_size, "round_trip": r.round_trip}
                     for k, r in reports.items()}}
    if not all(r.nat_count == r.value_size and r.round_trip for r in reports.values()):
        raise TaskFailure("Yoneda counts disagree")
    return w, lambda: all(check_yoneda(X, a, caps).nat_count == len(X.values[a]) for a in range(C.n_objects))


def _run_density(ws, spec, caps):
    X = ws.presheaf(_one(spec.args, "presheaf", spec.span))
    C = X.source.op
    dw = density_check(X, caps)
    w = {
        "elements": len(dw.elements.elements),
        "objects": {
            C.objects[b]: {
                "colimit": [render(v) for v in dw.colimit.vertex.values[b]],
                "comparison": {render(k): render(v) for k, v in dw.comparison[b].as_dict().items()},
            }
            for b in range(C.n_objects)
        },
    }

    def recheck():
        again = density_check(X, caps)
        return all(
            {render(k): render(v) for k, v in again.comparison[b].as_dict().items()} == w["objects"][C.objects[b]]["comparison"]
            for b in range(C.n_objects)
        )

    return w, recheck


def _run_classifier(ws, spec, caps):
    parts = _split(spec.args, "on")
    C = ws.category(_one(parts.get("on", parts[""]), "category", spec.span))
    cl = subobject_classifier(C, caps)
    w = {
        "omega": {
            C.objects[a]: [[C.label(f) for f in S.members] for S in cl.omega.values[a]]
            for a in range(C.n_objects)
        },
        "sizes": {C.objects[a]: len(cl.omega.values[a]) for a in range(C.n_objects)},
    }

    def recheck():
        for a in range(C.n_objects):
            members = [[C.morphism_index(lab) for lab in s] for s in w["omega"][C.objects[a]]]
            if not all(is_sieve(C, a, m) for m in members):
                return False
            if len(members) != len(subobject_classifier(C, caps).omega.values[a]):
                return False
        return True

    return w, recheck


def _run_universal(ws, spec, caps, kind):
    C = ws.category(_one(spec.args, "category", spec.span))
    found = universal_objects(C, kind)
    if not found:
        raise TaskFailure(f"no {kind} object")
    w = {"object": C.objects[found[0]], "all": [C.objects[o] for o in found]}
    return w, lambda: C.object_index(w["object"]) in universal_objects(C, kind)


def _run_classify(ws, spec, caps):
    F = ws.functor(_one(spec.args, "functor", spec.span))
    cls = classify_functor(F)
    w = cls._asdict()
    return w, lambda: classify_functor(F)._asdict() == w


def _run_representation(ws, spec, caps):
    X = ws.presheaf(_one(spec.args, "presheaf", spec.span))
    C = X.source.op
    reps = find_representation(X, all_reps=True)
    if not reps:
        raise TaskFailure("not representable")
    w = {"object": C.objects[reps[0].object], "element": render(reps[0].element),
         "all": [[C.objects[r.object], render(r.element)] for r in reps]}

    def recheck():
        r = reps[0]
        return yoneda_backward(X, r.object, r.element) == r.iso

    return w, recheck


def _run_kan(ws, spec, caps):
    parts = _split(spec.args, "along")
    X = ws.presheaf(_one(parts[""], "presheaf", spec.span))
    F = ws.functor(_one(parts.get("along", []), "functor", spec.span))
    if not X.source.same_tables(F.source):
        raise ArityError("kan needs X defined on the source of F (a presheaf on C lives on C^op)", spec.span)
    kan = kan_left(F, X, caps)
    B = F.target
    w = {"values": {B.objects[b]: [render(v) for v in kan.extension.values[b]] for b in range(B.n_objects)}}

    def recheck():
        again = kan_left(F, X, caps)
        return {B.objects[b]: [render(v) for v in again.extension.values[b]] for b in range(B.n_objects)} == w["values"]

    return w, recheck


def _run_monic_epic(ws, spec, caps):
    parts = _split(spec.args, "in")
    C = ws.category(_one(parts.get("in", []), "category", spec.span))
    f = _morphism(C, _one(parts[""], "arrow", spec.span))
    me = is_monic_epic(C, f)
    w = {"monic": me.monic, "epic": me.epic, "pullback_square": monic_via_pullback(C, f, caps)}
    return w, lambda: w["monic"] == w["pullback_square"]


HANDLERS = {
    "limit": _run_limit,
    "colimit": lambda ws, spec, caps: _run_limit(ws, spec, caps, dual=True),
    "left-adjoint": _run_left_adjoint,
    "yoneda-check": _run_yoneda,
    "density": _run_density,
    "classifier": _run_classifier,
    "initial": lambda ws, spec, caps: _run_universal(ws, spec, caps, "initial"),
    "terminal": lambda ws, spec, caps: _run_universal(ws, spec, caps, "terminal"),
    "classify": _run_classify,
    "representation": _run_representation,
    "kan": _run_kan,
    "monic-epic": _run_monic_epic,
}


def run_task(ws: Workspace, spec: TaskSpec, caps: Caps | None = None, timing: bool = True) -> dict:
    caps = resolve(caps)
    start = time.perf_counter()
    handler = HANDLERS.get(spec.kind)
    try:
        if handler is None:
            raise ArityError(f"unknown task kind {spec.kind!r}", spec.span)
        witness, recheck = handler(ws, spec, caps)
        if not recheck():
            status, witness = "error", {"error": "witness failed revalidation", "witness": witness}
        else:
            status = "ok"
    except TaskFailure as exc:
        status, witness = "not-found", {"reason": str(exc)}
    except CathedraError as exc:
        status, witness = "error", {"error": type(exc).__name__, "message": str(exc)}
    millis = round((time.perf_counter() - start) * 1000, 3) if timing else 0
    return {"id": spec.id, "kind": spec.kind, "status": status, "witness": witness, "millis": millis}


def run_tasks(ws: Workspace, caps: Caps | None = None, threads: int = 1, timing: bool = True) -> dict:
    """All tasks of a workspace; the report keeps declaration order."""
    caps = resolve(caps)
    tasks = list(ws.tasks)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda t: run_task(ws, t, caps, timing), tasks))
    else:
        results = [run_task(ws, t, caps, timing) for t in tasks]
    return {"schema": SCHEMA, "caps": caps.as_dict(), "tasks": results}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# the shipped corpus


def corpus_files() -> list[Path]:
    root = resources.files("cathedra") / "corpus"
    return sorted(Path(str(p)) for p in root.iterdir() if str(p).endswith(".cat"))


def corpus_workspace(caps: Caps | None = None) -> Workspace:
    """Every corpus file elaborated into one workspace (tasks dropped)."""
    merged = None
    for path in corpus_files():
        ws = load(path.read_text(encoding="utf-8"), caps, env=merged)
        ws.tasks = []
        merged = ws
    return merged or Workspace()
