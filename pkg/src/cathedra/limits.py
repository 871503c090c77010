"""Cones, limits and colimits by universal-property search.

Diagrams are functors: a :class:`Functor` into a finite category or a
:class:`SetFunctor` into finite sets.  For finite targets every answer is
found and checked by exhausting cones and mediating maps.  For sets the
explicit formulas are used and checked against small test vertices.
"""

from __future__ import annotations

import math
import random
from typing import NamedTuple, Sequence

from .caps import Caps, resolve
from .category import (
    FiniteCategory,
    arrow_category,
    discrete,
    find_universal_object,
    from_presentation,
    full_subcategory,
    is_isomorphism,
    product_category,
    product_morphism_index,
    terminal_category,
)
from .comma import comma_category, object_as_functor
from .errors import BoundaryMismatch, CapExceeded, MissingEqualizer, MissingProduct
from .finset import (
    FinFunction,
    FinSet,
    SetCocone,
    SetCone,
    SetFunctor,
    all_functions,
    cartesian_product,
    colimit_finset,
    constant_set_functor,
    function_props,
    limit_finset,
    validate_set_functor,
)
from .functor import (
    Functor,
    NatTransformation,
    SetNat,
    constant_functor,
    enumerate_functors,
    enumerate_nats,
    enumerate_set_nats,
    opposite_functor,
    precompose,
    validate_functor,
    validate_set_nat,
    whisker_set_nat,
)
from .sampling import random_functor


class Cone(NamedTuple):
    diagram: Functor
    vertex: int
    legs: tuple


class Cocone(NamedTuple):
    diagram: Functor
    vertex: int
    legs: tuple


# shapes


def parallel_shape() -> FiniteCategory:
    return from_presentation(["0", "1"], [("s", "0", "1"), ("t", "0", "1")], [], name="parallel")


def cospan_shape() -> FiniteCategory:
    return from_presentation(["X", "Y", "Z"], [("f", "X", "Z"), ("g", "Y", "Z")], [], name="cospan")


def span_shape() -> FiniteCategory:
    return from_presentation(["Z", "X", "Y"], [("f", "Z", "X"), ("g", "Z", "Y")], [], name="span")


def chain_shape(n: int = 3) -> FiniteCategory:
    from .category import chain

    return chain(n)


SHAPES = {
    "empty": lambda: discrete(0, name="empty"),
    "one": terminal_category,
    "discrete2": lambda: discrete(2, name="discrete2"),
    "discrete3": lambda: discrete(3, name="discrete3"),
    "arrow": arrow_category,
    "parallel": parallel_shape,
    "cospan": cospan_shape,
    "span": span_shape,
    "chain3": lambda: chain_shape(3),
}

SHAPE_ALIASES = {
    "product": "discrete",
    "coproduct": "discrete",
    "terminal": "empty",
    "initial": "empty",
    "equalizer": "parallel",
    "coequalizer": "parallel",
    "pullback": "cospan",
    "pushout": "span",
}


def shape(name: str) -> FiniteCategory:
    return SHAPES[name]()


def discrete_diagram(C: FiniteCategory, objs: Sequence[int]) -> Functor:
    I = discrete(len(objs))
    return validate_functor(I, C, list(objs), [C.identities[o] for o in objs])


def parallel_diagram(C: FiniteCategory, s: int, t: int) -> Functor:
    if (C.dom(s), C.cod(s)) != (C.dom(t), C.cod(t)):
        raise BoundaryMismatch("parallel pair must share domain and codomain")
    I = parallel_shape()
    return validate_functor(I, C, [C.dom(s), C.cod(s)], [C.identities[C.dom(s)], C.identities[C.cod(s)], s, t])


def cospan_diagram(C: FiniteCategory, f: int, g: int) -> Functor:
    if C.cod(f) != C.cod(g):
        raise BoundaryMismatch("cospan legs must share a codomain")
    I = cospan_shape()
    obj = [C.dom(f), C.dom(g), C.cod(f)]
    return validate_functor(I, C, obj, [C.identities[o] for o in obj] + [f, g])


def span_diagram(C: FiniteCategory, f: int, g: int) -> Functor:
    if C.dom(f) != C.dom(g):
        raise BoundaryMismatch("span legs must share a domain")
    I = span_shape()
    obj = [C.dom(f), C.cod(f), C.cod(g)]
    return validate_functor(I, C, obj, [C.identities[o] for o in obj] + [f, g])


def set_parallel_diagram(s: FinFunction, t: FinFunction) -> SetFunctor:
    I = parallel_shape()
    return validate_set_functor(I, [s.dom, s.cod], [FinFunction.identity(s.dom), FinFunction.identity(s.cod), s, t])


def set_cospan_diagram(f: FinFunction, g: FinFunction) -> SetFunctor:
    I = cospan_shape()
    vals = [f.dom, g.dom, f.cod]
    return validate_set_functor(I, vals, [FinFunction.identity(v) for v in vals] + [f, g])


def set_span_diagram(f: FinFunction, g: FinFunction) -> SetFunctor:
    I = span_shape()
    vals = [f.dom, f.cod, g.cod]
    return validate_set_functor(I, vals, [FinFunction.identity(v) for v in vals] + [f, g])


def set_discrete_diagram(sets: Sequence[FinSet]) -> SetFunctor:
    I = discrete(len(sets))
    return validate_set_functor(I, sets, [FinFunction.identity(s) for s in sets])


# cones in finite categories


def is_cone(D: Functor, vertex: int, legs) -> bool:
    I, C = D.source, D.target
    for i, leg in enumerate(legs):
        if C.dom(leg) != vertex or C.cod(leg) != D(i):
            return False
    return all(C.composition[(D.fmap(u), legs[m.dom])] == legs[m.cod] for u, m in enumerate(I.morphisms))


def enumerate_cones(D: Functor, vertex: int, caps: Caps | None = None) -> list[Cone]:
    """All cones on D with the given vertex, lexicographic in the legs."""
    caps = resolve(caps)
    I, C = D.source, D.target
    cands = [C.hom(vertex, D(i)) for i in range(I.n_objects)]
    checks: list[list[int]] = [[] for _ in range(I.n_objects)]
    for u, m in enumerate(I.morphisms):
        checks[max(m.dom, m.cod)].append(u)
    result: list[Cone] = []
    legs: list[int] = []
    nodes = [0]

    def go(k):
        if k == I.n_objects:
            result.append(Cone(D, vertex, tuple(legs)))
            return
        for c in cands[k]:
            nodes[0] += 1
            if nodes[0] > caps.max_enum:
                raise CapExceeded("cone search exceeded its budget")
            legs.append(c)
            if all(C.composition[(D.fmap(u), legs[I.dom(u)])] == legs[I.cod(u)] for u in checks[k]):
                go(k + 1)
            legs.pop()

    go(0)
    return result


def cones_as_nats(D: Functor, vertex: int, caps: Caps | None = None) -> list[NatTransformation]:
    """Cone(A, D) computed as the transformations ΔA -> D."""
    return enumerate_nats(constant_functor(D.source, D.target, vertex), D, caps)


def _cone_table(D: Functor, caps):
    return [{c.legs for c in enumerate_cones(D, w, caps)} for w in range(D.target.n_objects)]


def _is_universal(D: Functor, vertex: int, legs, table) -> bool:
    C = D.target
    for w in range(C.n_objects):
        induced = {tuple(C.composition[(leg, m)] for leg in legs) for m in C.hom(w, vertex)}
        if len(induced) != len(C.hom(w, vertex)) or induced != table[w]:
            return False
    return True


def is_limit_cone(cone: Cone, caps: Caps | None = None, table=None) -> bool:
    """Every cone factors through ``cone`` by exactly one map."""
    D = cone.diagram
    if not is_cone(D, cone.vertex, cone.legs):
        return False
    table = table if table is not None else _cone_table(D, caps)
    return _is_universal(D, cone.vertex, cone.legs, table)


def limit_cones(D: Functor, caps: Caps | None = None) -> list[Cone]:
    """Every limit cone on D, by vertex then legs."""
    table = _cone_table(D, caps)
    return [
        Cone(D, v, legs)
        for v in range(D.target.n_objects)
        for legs in sorted(table[v])
        if _is_universal(D, v, legs, table)
    ]


def limit(D, caps: Caps | None = None):
    """A limit cone on D, or None when there is none."""
    if isinstance(D, SetFunctor):
        cone = limit_finset(D, caps)
        assert is_limit_set_cone(cone, caps=caps), "explicit set limit failed its universal property"
        return cone
    table = _cone_table(D, caps)
    for v in range(D.target.n_objects):
        for legs in sorted(table[v]):
            if _is_universal(D, v, legs, table):
                return Cone(D, v, legs)
    return None


def colimit(D, caps: Caps | None = None):
    """A colimit cocone, computed as a limit in the opposite category."""
    if isinstance(D, SetFunctor):
        cocone = colimit_finset(D, caps)
        assert is_colimit_set_cocone(cocone, caps=caps), "explicit set colimit failed its universal property"
        return cocone
    cone = limit(opposite_functor(D), caps)
    if cone is None:
        return None
    return Cocone(D, cone.vertex, cone.legs)


def is_colimit_cocone(cocone: Cocone, caps: Caps | None = None) -> bool:
    return is_limit_cone(Cone(opposite_functor(cocone.diagram), cocone.vertex, cocone.legs), caps)


def enumerate_cocones(D: Functor, vertex: int, caps: Caps | None = None) -> list[Cocone]:
    return [Cocone(D, c.vertex, c.legs) for c in enumerate_cones(opposite_functor(D), vertex, caps)]


def mediating_maps(cone: Cone, limit_cone: Cone) -> list[int]:
    """All maps h: cone.vertex -> limit vertex with p_I∘h = leg_I."""
    C = cone.diagram.target
    return [
        h
        for h in C.hom(cone.vertex, limit_cone.vertex)
        if all(C.composition[(p, h)] == leg for p, leg in zip(limit_cone.legs, cone.legs))
    ]


def comparison_isos(cone1: Cone, cone2: Cone) -> list[int]:
    """Isomorphisms of vertices commuting with all projections."""
    C = cone1.diagram.target
    return [h for h in mediating_maps(cone1, cone2) if is_isomorphism(C, h)[0]]


def induced_limit_map(alpha: NatTransformation, L1: Cone, L2: Cone) -> int | None:
    """The unique map lim D -> lim D' with p'_I∘h = alpha_I∘p_I."""
    C = alpha.source.target
    legs = tuple(C.composition[(alpha[i], p)] for i, p in enumerate(L1.legs))
    maps = mediating_maps(Cone(alpha.target, L1.vertex, legs), L2)
    return maps[0] if len(maps) == 1 else None


# cones in finite sets


def _vertex_sets(sizes):
    return [FinSet(f"t{i}" for i in range(k)) for k in sizes]


def set_cones(D: SetFunctor, T: FinSet, caps: Caps | None = None) -> list[SetNat]:
    """Cones on D with vertex T, found as transformations ΔT -> D."""
    return enumerate_set_nats(constant_set_functor(D.source, T), D, caps)


def set_cocones(D: SetFunctor, T: FinSet, caps: Caps | None = None) -> list[SetNat]:
    return enumerate_set_nats(D, constant_set_functor(D.source, T), caps)


def is_limit_set_cone(cone: SetCone, test_sizes=(0, 1), caps: Caps | None = None) -> bool:
    """Brute-force universal property against test vertices of the given sizes.

    A one-element test vertex already detects limits of sets, so the default
    sizes give an exact test.
    """
    D, L = cone.diagram, cone.vertex
    I = D.source
    for i, m in enumerate(I.morphisms):
        if D.actions[i].after(cone.legs[m.dom]) != cone.legs[m.cod]:
            return False
    for T in _vertex_sets(test_sizes):
        targets = {tuple(c.assignment for c in nat.components) for nat in set_cones(D, T, caps)}
        induced = set()
        count = 0
        for h in all_functions(T, L):
            count += 1
            induced.add(tuple(leg.after(h).assignment for leg in cone.legs))
        if len(induced) != count or induced != targets:
            return False
    return True


def is_colimit_set_cocone(cocone: SetCocone, test_sizes=(0, 1, 2), caps: Caps | None = None) -> bool:
    """Brute-force couniversal property; a two-element test vertex is exact."""
    D, V = cocone.diagram, cocone.vertex
    I = D.source
    for i, m in enumerate(I.morphisms):
        if cocone.legs[m.cod].after(D.actions[i]) != cocone.legs[m.dom]:
            return False
    for T in _vertex_sets(test_sizes):
        targets = {tuple(c.assignment for c in nat.components) for nat in set_cocones(D, T, caps)}
        induced = set()
        count = 0
        for h in all_functions(V, T):
            count += 1
            induced.add(tuple(h.after(leg).assignment for leg in cocone.legs))
        if len(induced) != count or induced != targets:
            return False
    return True


def set_cone_comparison(cone1: SetCone, cone2: SetCone):
    """Count the maps vertex1 -> vertex2 commuting with the projections.

    Such a map is a choice, for each x, of a y with matching projections, so
    the count is a product of candidate counts.  Returns ``(count, map)``,
    the map being present only when the count is one.
    """
    cands = []
    for x in cone1.vertex:
        target = tuple(leg(x) for leg in cone1.legs)
        cands.append([y for y in cone2.vertex if tuple(leg(y) for leg in cone2.legs) == target])
    count = math.prod(len(c) for c in cands)
    if count != 1:
        return count, None
    return 1, FinFunction(cone1.vertex, cone2.vertex, [cone2.vertex.index(c[0]) for c in cands])


def set_cocone_comparison(c1: SetCocone, c2: SetCocone):
    """Maps vertex1 -> vertex2 commuting with the coprojections: ``(count, map)``."""
    constraint: dict = {}
    for i, leg in enumerate(c1.legs):
        for x in leg.dom:
            y = c2.legs[i](x)
            v = leg(x)
            if constraint.setdefault(v, y) != y:
                return 0, None
    free = [v for v in c1.vertex if v not in constraint]
    if free:
        return len(c2.vertex) ** len(free), None
    return 1, FinFunction.from_mapping(c1.vertex, c2.vertex, constraint)


def is_bijection(f: FinFunction) -> bool:
    p = function_props(f)
    return p.injective and p.surjective


def induced_set_limit_map(alpha: SetNat, L1: SetCone, L2: SetCone) -> FinFunction | None:
    legs = tuple(alpha[i].after(p) for i, p in enumerate(L1.legs))
    count, h = set_cone_comparison(SetCone(alpha.target, L1.vertex, legs), L2)
    return h if count == 1 else None


# products and equalizers


class _FiniteOps:
    def __init__(self, C: FiniteCategory, caps):
        self.C, self.caps = C, caps

    def product(self, objs):
        cone = limit(discrete_diagram(self.C, objs), self.caps)
        if cone is None:
            raise MissingProduct(f"no product of {[self.C.objects[o] for o in objs]}")
        return cone.vertex, cone.legs

    def tuple_map(self, vertex, legs, prod_vertex, prod_legs):
        for h in self.C.hom(vertex, prod_vertex):
            if all(self.C.composition[(p, h)] == leg for p, leg in zip(prod_legs, legs)):
                return h
        raise MissingProduct("product does not mediate")

    def then(self, g, f):
        return self.C.composition[(g, f)]

    def act(self, D, u):
        return D.fmap(u)

    def equalizer(self, s, t):
        cone = limit(parallel_diagram(self.C, s, t), self.caps)
        if cone is None:
            raise MissingEqualizer("no equalizer of the constructed pair")
        return cone.vertex, cone.legs[0]

    def cone(self, D, vertex, legs):
        return Cone(D, vertex, tuple(legs))


class _SetOps:
    def __init__(self, caps):
        self.caps = caps

    def product(self, sets):
        return cartesian_product(sets, self.caps)

    def tuple_map(self, vertex, legs, prod_vertex, prod_legs):
        return FinFunction.from_mapping(vertex, prod_vertex, lambda x: tuple(leg(x) for leg in legs))

    def then(self, g, f):
        return g.after(f)

    def act(self, D, u):
        return D.actions[u]

    def equalizer(self, s, t):
        cone = limit_finset(set_parallel_diagram(s, t), self.caps)
        return cone.vertex, cone.legs[0]

    def cone(self, D, vertex, legs):
        return SetCone(D, vertex, tuple(legs))


def limit_via_products_equalizers(D, caps: Caps | None = None):
    """Limit as the equalizer of s, t: ∏_I D(I) -> ∏_{u: J -> K} D(K).

    The u-component of s is D(u)∘pr_J and that of t is pr_K.
    """
    caps = resolve(caps)
    I = D.source
    if isinstance(D, SetFunctor):
        ops = _SetOps(caps)
        objs = list(D.values)
        arrow_objs = [D.values[I.cod(u)] for u in range(I.n_morphisms)]
    else:
        ops = _FiniteOps(D.target, caps)
        objs = list(D.object_map)
        arrow_objs = [D(I.cod(u)) for u in range(I.n_morphisms)]
    P, pr = ops.product(objs)
    Q, q = ops.product(arrow_objs)
    s_legs = [ops.then(ops.act(D, u), pr[I.dom(u)]) for u in range(I.n_morphisms)]
    t_legs = [pr[I.cod(u)] for u in range(I.n_morphisms)]
    s = ops.tuple_map(P, s_legs, Q, q)
    t = ops.tuple_map(P, t_legs, Q, q)
    E, e = ops.equalizer(s, t)
    cone = ops.cone(D, E, [ops.then(p, e) for p in pr])
    if isinstance(D, SetFunctor):
        assert is_limit_set_cone(cone, caps=caps)
    else:
        assert is_limit_cone(cone, caps)
    return cone


# monic and epic


class MonicEpic(NamedTuple):
    monic: bool
    epic: bool


def is_monic_epic(C: FiniteCategory, f: int) -> MonicEpic:
    a, b = C.dom(f), C.cod(f)
    monic = all(
        len({C.composition[(f, x)] for x in C.hom(w, a)}) == len(C.hom(w, a)) for w in range(C.n_objects)
    )
    epic = all(
        len({C.composition[(y, f)] for y in C.hom(b, w)}) == len(C.hom(b, w)) for w in range(C.n_objects)
    )
    return MonicEpic(monic, epic)


def finset_monic_epic(f: FinFunction, test_sizes=(0, 1, 2)) -> MonicEpic:
    """Monic/epic in finite sets by exhausting parallel pairs on test sets."""
    monic = epic = True
    for T in _vertex_sets(test_sizes):
        into = list(all_functions(T, f.dom))
        if len({f.after(x).assignment for x in into}) != len(into):
            monic = False
        out = list(all_functions(f.cod, T))
        if len({y.after(f).assignment for y in out}) != len(out):
            epic = False
    return MonicEpic(monic, epic)


def monic_via_pullback(C: FiniteCategory, f: int, caps: Caps | None = None) -> bool:
    """Is the square with two identities and two copies of f a pullback?"""
    a = C.dom(f)
    D = cospan_diagram(C, f, f)
    return is_limit_cone(Cone(D, a, (C.identities[a], C.identities[a], f)), caps)


def set_monic_via_pullback(f: FinFunction, caps: Caps | None = None) -> bool:
    D = set_cospan_diagram(f, f)
    ident = FinFunction.identity(f.dom)
    return is_limit_set_cone(SetCone(D, f.dom, (ident, ident, f)), caps=caps)


# preservation


class PreservationRecord(NamedTuple):
    shape: str
    kind: str
    preserves: bool
    reflects: bool
    creates: bool | None
    diagrams: int
    exhaustive: bool
    seed: int | None
    counterexample: object = None

    def as_dict(self):
        d = self._asdict()
        d["counterexample"] = None if self.counterexample is None else repr(self.counterexample)
        return d


def diagrams_of_shape(I: FiniteCategory, C: FiniteCategory, caps: Caps, seed: int = 0, sample_size: int = 200):
    """All functors I -> C when there are at most ``caps.sample_bound``, else a seeded sample.

    Returns ``(diagrams, exhaustive, seed_or_None)``.
    """
    found = []
    exhaustive = True
    try:
        for F in enumerate_functors(I, C, caps):
            found.append(F)
            if len(found) > caps.sample_bound:
                exhaustive = False
                break
    except CapExceeded:
        exhaustive = False
    if exhaustive:
        return found, True, None
    rng = random.Random(seed)
    sample = []
    for _ in range(sample_size):
        F = random_functor(I, C, rng)
        if F is not None:
            sample.append(F)
    return sample, False, seed


def _apply_cone(F, cone, D):
    """Image of a cone under F, as a cone on F∘D."""
    if isinstance(F, SetFunctor):
        FD = precompose(F, D)
        return SetCone(FD, F.values[cone.vertex], tuple(F.actions[leg] for leg in cone.legs))
    from .functor import compose_functors

    FD = compose_functors(F, D)
    return Cone(FD, F(cone.vertex), tuple(F.fmap(leg) for leg in cone.legs))


def _image_is_limit(F, image, caps, table_cache):
    if isinstance(F, SetFunctor):
        return is_limit_set_cone(image, caps=caps)
    key = (image.diagram.object_map, image.diagram.morphism_map)
    if key not in table_cache:
        table_cache[key] = _cone_table(image.diagram, caps)
    return is_limit_cone(image, caps, table_cache[key])


def preservation_report(F, shapes, kind: str = "limit", caps: Caps | None = None, seed: int = 0,
                        sample_size: int = 200) -> list[PreservationRecord]:
    """Test preservation, reflection and (strict) creation of limits or colimits.

    ``F`` is a :class:`Functor` between finite categories or a
    :class:`SetFunctor`.  Colimits are handled as limits of opposite
    functors; creation is only evaluated for finite targets.
    """
    caps = resolve(caps)
    if kind not in ("limit", "colimit"):
        raise ValueError("kind must be 'limit' or 'colimit'")
    shapes = _named_shapes(shapes)
    records = []
    for name, I in shapes:
        if kind == "colimit":
            records.append(_colimit_record(F, name, I, caps, seed, sample_size))
            continue
        records.append(_limit_record(F, name, I, caps, seed, sample_size))
    return records


def _named_shapes(shapes):
    out = []
    for s in shapes:
        if isinstance(s, str):
            out.append((s, shape(s)))
        else:
            out.append(s)
    return out


def _limit_record(F, name, I, caps, seed, sample_size, kind="limit"):
    source = F.source
    diagrams, exhaustive, used_seed = diagrams_of_shape(I, source, caps, seed, sample_size)
    preserves = reflects = True
    creates = None if isinstance(F, SetFunctor) else True
    witness = None
    cache: dict = {}
    for D in diagrams:
        table = _cone_table(D, caps)
        # preservation
        for v in range(source.n_objects):
            for legs in sorted(table[v]):
                cone = Cone(D, v, legs)
                is_lim = _is_universal(D, v, legs, table)
                image_lim = _image_is_limit(F, _apply_cone(F, cone, D), caps, cache)
                if is_lim and not image_lim:
                    preserves = False
                    witness = witness or ("preserves", D.object_map, v, legs)
                if image_lim and not is_lim:
                    reflects = False
                    witness = witness or ("reflects", D.object_map, v, legs)
        if creates:
            creates = _creates_for(F, D, table, caps, cache)
            if not creates:
                witness = witness or ("creates", D.object_map)
    return PreservationRecord(name, kind, preserves, reflects, creates, len(diagrams), exhaustive, used_seed, witness)


def _creates_for(F: Functor, D: Functor, table, caps, cache) -> bool:
    from .functor import compose_functors

    FD = compose_functors(F, D)
    key = (FD.object_map, FD.morphism_map)
    if key not in cache:
        cache[key] = _cone_table(FD, caps)
    target_table = cache[key]
    for b in range(F.target.n_objects):
        for q in target_table[b]:
            if not _is_universal(FD, b, q, target_table):
                continue
            lifts = [
                (a, legs)
                for a in range(F.source.n_objects)
                if F(a) == b
                for legs in table[a]
                if tuple(F.fmap(p) for p in legs) == q
            ]
            if len(lifts) != 1 or not _is_universal(D, lifts[0][0], lifts[0][1], table):
                return False
    return True


def _colimit_record(F, name, I, caps, seed, sample_size):
    if isinstance(F, SetFunctor):
        return _set_colimit_record(F, name, I, caps, seed, sample_size)
    Fop = opposite_functor(F)
    rec = _limit_record(Fop, name, I.op, caps, seed, sample_size)
    return rec._replace(kind="colimit")


def _set_colimit_record(F: SetFunctor, name, I, caps, seed, sample_size):
    source = F.source
    diagrams, exhaustive, used_seed = diagrams_of_shape(I, source, caps, seed, sample_size)
    preserves = reflects = True
    witness = None
    for D in diagrams:
        Dop = opposite_functor(D)
        table = _cone_table(Dop, caps)
        FD = precompose(F, D)
        for v in range(source.n_objects):
            for legs in sorted(table[v]):
                is_colim = _is_universal(Dop, v, legs, table)
                image = SetCocone(FD, F.values[v], tuple(F.actions[leg] for leg in legs))
                image_colim = is_colimit_set_cocone(image, caps=caps)
                if is_colim and not image_colim:
                    preserves = False
                    witness = witness or ("preserves", D.object_map, v, legs)
                if image_colim and not is_colim:
                    reflects = False
                    witness = witness or ("reflects", D.object_map, v, legs)
    return PreservationRecord(name, "colimit", preserves, reflects, None, len(diagrams), exhaustive, used_seed, witness)


# left Kan extensions


class KanExtension(NamedTuple):
    extension: SetFunctor
    unit: SetNat
    cocones: tuple


def kan_left(F: Functor, X: SetFunctor, caps: Caps | None = None) -> KanExtension:
    """Pointwise left Kan extension of X along F.

    (Lan_F X)(B) is the colimit over (F ⇒ B) of X∘P_B.
    """
    caps = resolve(caps)
    A, B = F.source, F.target
    if not X.source.same_tables(A):
        raise BoundaryMismatch("X must be defined on the source of F")
    commas = []
    cocones = []
    for b in range(B.n_objects):
        cr = comma_category(F, object_as_functor(B, b), caps)
        commas.append(cr)
        cocones.append(colimit_finset(precompose(X, cr.left_projection), caps))
    index = [{(t[0], t[1]): i for i, t in enumerate(cr.triples)} for cr in commas]
    actions = []
    for q, m in enumerate(B.morphisms):
        src, tgt = m.dom, m.cod
        mapping: dict = {}
        for i, (a, h, _) in enumerate(commas[src].triples):
            j = index[tgt][(a, B.composition[(q, h)])]
            for x in X.values[a]:
                v = cocones[src].legs[i](x)
                w = cocones[tgt].legs[j](x)
                if mapping.setdefault(v, w) != w:
                    raise AssertionError("Kan extension action is not well defined")
        actions.append(FinFunction.from_mapping(cocones[src].vertex, cocones[tgt].vertex, mapping))
    lan = validate_set_functor(B, [c.vertex for c in cocones], actions)
    comps = []
    for a in range(A.n_objects):
        fa = F(a)
        i = index[fa][(a, B.identities[fa])]
        comps.append(cocones[fa].legs[i])
    unit = validate_set_nat(X, precompose(lan, F), comps)
    return KanExtension(lan, unit, tuple(cocones))


def kan_transpose(kan: KanExtension, beta: SetNat, F: Functor) -> SetNat:
    """beta: Lan X -> Y  ↦  (beta F)∘unit : X -> Y∘F."""
    whiskered = whisker_set_nat(beta, F)
    X = kan.unit.source
    return validate_set_nat(X, whiskered.target, [w.after(u) for w, u in zip(whiskered.components, kan.unit.components)])


def kan_bijection_holds(kan: KanExtension, F: Functor, Y: SetFunctor, caps: Caps | None = None) -> bool:
    """Transposition Nat(Lan X, Y) -> Nat(X, Y∘F) is a bijection."""
    left = enumerate_set_nats(kan.extension, Y, caps)
    right = enumerate_set_nats(kan.unit.source, precompose(Y, F), caps)
    images = {kan_transpose(kan, beta, F).table for beta in left}
    return len(images) == len(left) and images == {r.table for r in right}


# limits commuting with limits


def partial_limit(D: SetFunctor, I: FiniteCategory, J: FiniteCategory, caps: Caps | None = None):
    """i ↦ lim_j D(i, j) as a set functor on I, for D on I × J, with the limit cones."""
    nj = J.n_objects
    idx = product_morphism_index(I, J)
    cones = []
    for i in range(I.n_objects):
        row = SetFunctor(
            J,
            [D.values[i * nj + j] for j in range(nj)],
            [D.actions[idx[(I.identities[i], g)]] for g in range(J.n_morphisms)],
        )
        cones.append(limit_finset(row, caps))
    actions = []
    for u, m in enumerate(I.morphisms):
        acts = [D.actions[idx[(u, J.identities[j])]] for j in range(nj)]
        src, tgt = cones[m.dom], cones[m.cod]
        actions.append(FinFunction.from_mapping(
            src.vertex, tgt.vertex, lambda fam, acts=acts: tuple(acts[j](fam[j]) for j in range(nj))))
    return validate_set_functor(I, [c.vertex for c in cones], actions), cones


def swap_product_diagram(D: SetFunctor, I: FiniteCategory, J: FiniteCategory, caps: Caps | None = None) -> SetFunctor:
    """The same diagram regarded on J × I."""
    JI = product_category(J, I, caps)
    ni, nj = I.n_objects, J.n_objects
    ij, ji = product_morphism_index(I, J), product_morphism_index(J, I)
    values = [D.values[i * nj + j] for j in range(nj) for i in range(ni)]
    actions = [None] * JI.n_morphisms
    for (u, g), k in ij.items():
        actions[ji[(g, u)]] = D.actions[k]
    return validate_set_functor(JI, values, actions)


class FubiniWitness(NamedTuple):
    total: SetCone
    iterated_ij: SetCone
    iterated_ji: SetCone
    to_ij: FinFunction
    to_ji: FinFunction


def limits_commute(D: SetFunctor, I: FiniteCategory, J: FiniteCategory, caps: Caps | None = None) -> FubiniWitness:
    """Bijections lim_{I×J} D ≅ lim_I lim_J D ≅ lim_J lim_I D."""
    total = limit_finset(D, caps)
    ni, nj = I.n_objects, J.n_objects
    row, _ = partial_limit(D, I, J, caps)
    outer_ij = limit_finset(row, caps)
    col, _ = partial_limit(swap_product_diagram(D, I, J, caps), J, I, caps)
    outer_ji = limit_finset(col, caps)
    to_ij = FinFunction.from_mapping(
        total.vertex, outer_ij.vertex, lambda fam: tuple(tuple(fam[i * nj + j] for j in range(nj)) for i in range(ni))
    )
    to_ji = FinFunction.from_mapping(
        total.vertex, outer_ji.vertex, lambda fam: tuple(tuple(fam[i * nj + j] for i in range(ni)) for j in range(nj))
    )
    return FubiniWitness(total, outer_ij, outer_ji, to_ij, to_ji)


# limit of the identity functor


def identity_limit_diagnostic(C: FiniteCategory, caps: Caps | None = None):
    """Limit of 1_C next to the initial object found by direct search."""
    from .functor import identity_functor

    cone = limit(identity_functor(C), caps)
    return cone, find_universal_object(C, "initial")


def inclusion_diagram(C: FiniteCategory, objs: Sequence[int]) -> Functor:
    """Inclusion of the full subcategory on ``objs``."""
    sub, mors = full_subcategory(C, objs)
    return validate_functor(sub, C, list(objs), mors)
