"""Presheaves on a finite base: Yoneda, elements, density, exponentials, sieves.

A presheaf is stored as a covariant :class:`SetFunctor` on ``base.op``.
Opposites keep morphism indices, so the action of f: B -> A in the base is
``X.actions[f]``, a function X(A) -> X(B).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .caps import Caps, resolve
from .category import FiniteCategory, _assemble, _check_size, product_category, product_morphism_index
from .errors import BoundaryMismatch, CapExceeded, ElementNotInValue, NotASubpresheaf
from .finset import (
    FinFunction,
    FinSet,
    SetCone,
    SetFunctor,
    colimit_finset,
    function_props,
    limit_finset,
    set_functor_from_maps,
    validate_set_functor,
)
from .functor import (
    Functor,
    SetNat,
    enumerate_set_nats,
    validate_functor,
    validate_set_nat,
)
from .limits import PreservationRecord, _cone_table, _is_universal, is_limit_set_cone, shape
from .sampling import _solve_actions


class Presheaf(SetFunctor):
    @property
    def base(self) -> FiniteCategory:
        return self.source.op

    def __repr__(self):
        return f"<Presheaf sizes={[len(v) for v in self.values]}>"


def as_presheaf(X: SetFunctor) -> Presheaf:
    return X if isinstance(X, Presheaf) else Presheaf(X.source, X.values, X.actions)


def validate_presheaf(base: FiniteCategory, values, actions) -> Presheaf:
    """``actions[f]`` for f: B -> A must be a function X(A) -> X(B)."""
    return validate_set_functor(base.op, values, actions, cls=Presheaf)


def presheaf_from_maps(base: FiniteCategory, values, mappings: dict) -> Presheaf:
    """Identities implicit; composites of the given arrows are inferred."""
    return set_functor_from_maps(base.op, values, mappings, cls=Presheaf)


def constant_presheaf(base: FiniteCategory, s: FinSet) -> Presheaf:
    ident = FinFunction.identity(s)
    return Presheaf(base.op, [s] * base.n_objects, [ident] * base.n_morphisms)


def terminal_presheaf(base: FiniteCategory) -> Presheaf:
    return constant_presheaf(base, FinSet(["pt"]))


def empty_presheaf(base: FiniteCategory) -> Presheaf:
    return constant_presheaf(base, FinSet())


def random_presheaf(base: FiniteCategory, rng: random.Random, max_size: int = 3, min_size: int = 0,
                    attempts: int = 50) -> Presheaf:
    """Seeded random presheaf; falls back to the terminal one."""
    C = base.op
    for _ in range(attempts):
        sizes = [rng.randint(min_size, max_size) for _ in range(C.n_objects)]
        values = [FinSet(f"x{k}_{i}" for i in range(s)) for k, s in enumerate(sizes)]
        acts = _solve_actions(C, values, rng)
        if acts is None:
            continue
        actions = [FinFunction(values[m.dom], values[m.cod], acts[f]) for f, m in enumerate(C.morphisms)]
        return validate_presheaf(base, values, actions)
    return terminal_presheaf(base)


# representables


def representable(C: FiniteCategory, a: int) -> Presheaf:
    """h_a = C(-, a); elements are morphism indices, acted on by precomposition."""
    values = [FinSet(C.hom(b, a)) for b in range(C.n_objects)]
    actions = []
    for f, m in enumerate(C.morphisms):
        # f: b' -> b acts h_a(b) -> h_a(b')
        actions.append(FinFunction.from_mapping(values[m.cod], values[m.dom], lambda p, f=f: C.composition[(p, f)]))
    return Presheaf(C.op, values, actions)


def corepresentable(C: FiniteCategory, a: int) -> SetFunctor:
    """h^a = C(a, -), covariant, acting by postcomposition."""
    values = [FinSet(C.hom(a, b)) for b in range(C.n_objects)]
    actions = [
        FinFunction.from_mapping(values[m.dom], values[m.cod], lambda p, g=g: C.composition[(g, p)])
        for g, m in enumerate(C.morphisms)
    ]
    return SetFunctor(C, values, actions)


def representable_map(C: FiniteCategory, f: int) -> SetNat:
    """h_f: h_a -> h_a', p ↦ f∘p."""
    ha, hb = representable(C, C.dom(f)), representable(C, C.cod(f))
    comps = [
        FinFunction.from_mapping(ha.values[b], hb.values[b], lambda p: C.composition[(f, p)])
        for b in range(C.n_objects)
    ]
    return SetNat(ha, hb, comps)


def yoneda_forward(alpha: SetNat, a: int):
    """α ↦ α_a(1_a)."""
    C = alpha.source.source.op
    return alpha.components[a](C.identities[a])


def yoneda_backward(X: SetFunctor, a: int, x) -> SetNat:
    """x ∈ X(a) ↦ x̄ with x̄_b(f) = (Xf)(x)."""
    if x not in X.values[a]:
        raise ElementNotInValue(f"{x!r} is not in X({a})", witness=(a, x))
    C = X.source.op
    h = representable(C, a)
    comps = [FinFunction.from_mapping(h.values[b], X.values[b], lambda f: X.actions[f](x)) for b in range(C.n_objects)]
    return validate_set_nat(h, X, comps)


class YonedaReport(NamedTuple):
    object: int
    nat_count: int
    value_size: int
    round_trip: bool


def check_yoneda(X: SetFunctor, a: int, caps: Caps | None = None) -> YonedaReport:
    C = X.source.op
    nats = enumerate_set_nats(representable(C, a), X, caps)
    ok = all(yoneda_backward(X, a, yoneda_forward(n, a)) == n for n in nats)
    ok = ok and all(yoneda_forward(yoneda_backward(X, a, x), a) == x for x in X.values[a])
    return YonedaReport(a, len(nats), len(X.values[a]), ok)


def yoneda_naturality_in_object(X: SetFunctor, f: int, caps: Caps | None = None) -> bool:
    """For f: a' -> a, forward(α∘h_f) = (Xf)(forward(α)) for all α: h_a -> X."""
    C = X.source.op
    a2, a = C.dom(f), C.cod(f)
    hf = representable_map(C, f)
    for alpha in enumerate_set_nats(representable(C, a), X, caps):
        composite = SetNat(hf.source, X, [c.after(h) for c, h in zip(alpha.components, hf.components)])
        if yoneda_forward(composite, a2) != X.actions[f](yoneda_forward(alpha, a)):
            return False
    return True


def yoneda_naturality_in_presheaf(theta: SetNat, a: int, caps: Caps | None = None) -> bool:
    """For θ: X -> X', forward(θ∘α) = θ_a(forward(α)) for all α: h_a -> X."""
    X = theta.source
    C = X.source.op
    for alpha in enumerate_set_nats(representable(C, a), X, caps):
        composite = SetNat(alpha.source, theta.target, [t.after(c) for t, c in zip(theta.components, alpha.components)])
        if yoneda_forward(composite, a) != theta.components[a](yoneda_forward(alpha, a)):
            return False
    return True


def is_set_nat_iso(alpha: SetNat) -> bool:
    for c in alpha.components:
        p = function_props(c)
        if not (p.injective and p.surjective):
            return False
    return True


class Representation(NamedTuple):
    object: int
    element: object
    iso: SetNat


def find_representation(X: SetFunctor, all_reps: bool = False):
    """Universal elements of X: a representation, all of them, or None."""
    C = X.source.op
    found = []
    for a in range(C.n_objects):
        for u in X.values[a]:
            ubar = yoneda_backward(X, a, u)
            if is_set_nat_iso(ubar):
                if not all_reps:
                    return Representation(a, u, ubar)
                found.append(Representation(a, u, ubar))
    return found if all_reps else None


def yoneda_full_faithful(C: FiniteCategory, caps: Caps | None = None) -> bool:
    """f ↦ h_f is a bijection C(a, a') -> Nat(h_a, h_a') for every pair."""
    for a in range(C.n_objects):
        for a2 in range(C.n_objects):
            nats = enumerate_set_nats(representable(C, a), representable(C, a2), caps)
            images = {representable_map(C, f).table for f in C.hom(a, a2)}
            if len(images) != len(C.hom(a, a2)) or images != {n.table for n in nats}:
                return False
    return True


def presheaf_iso(X: SetFunctor, Y: SetFunctor, caps: Caps | None = None) -> SetNat | None:
    """First natural isomorphism X -> Y found by enumeration."""
    if [len(v) for v in X.values] != [len(v) for v in Y.values]:
        return None
    for n in enumerate_set_nats(X, Y, caps):
        if is_set_nat_iso(n):
            return n
    return None


# category of elements


class ElementsCategory(NamedTuple):
    category: FiniteCategory
    projection: Functor
    elements: tuple  # (object, element) per object of the category


def category_of_elements(X: SetFunctor, caps: Caps | None = None) -> ElementsCategory:
    caps = resolve(caps)
    C = X.source.op
    elements = [(a, x) for a in range(C.n_objects) for x in X.values[a]]
    _check_size(len(elements), 0, caps, "category of elements")
    eindex = {e: i for i, e in enumerate(elements)}
    morphisms, base_maps = [], []
    for j, (a, x) in enumerate(elements):
        for f in C.into(a):
            # f: a' -> a gives (a', (Xf)(x)) -> (a, x)
            i = eindex[(C.dom(f), X.actions[f](x))]
            morphisms.append((i, j, C.label(f) if not C.is_identity(f) else f"id_({C.objects[a]},{x})"))
            base_maps.append(f)
    _check_size(len(elements), len(morphisms), caps, "category of elements")
    mindex = {(morphisms[k][0], morphisms[k][1], base_maps[k]): k for k in range(len(morphisms))}
    identities = [mindex[(i, i, C.identities[a])] for i, (a, _) in enumerate(elements)]
    comp = {}
    for k1, (i1, j1, _) in enumerate(morphisms):
        for k2, (i2, j2, _) in enumerate(morphisms):
            if j1 == i2:
                comp[(k2, k1)] = mindex[(i1, j2, C.composition[(base_maps[k2], base_maps[k1])])]
    moved = identities + [k for k in range(len(morphisms)) if k not in set(identities)]
    labels = [f"({C.objects[a]},{x})" for a, x in elements]
    cat = _assemble(labels, morphisms, identities, comp, name="elements")
    proj = validate_functor(cat, C, [a for a, _ in elements], [base_maps[k] for k in moved])
    return ElementsCategory(cat, proj, tuple(elements))


# pointwise limits and colimits of presheaf diagrams


@dataclass
class PresheafDiagram:
    """Presheaves indexed by a shape, with a transformation for every shape arrow."""

    shape: FiniteCategory
    objects: list
    arrows: list

    def at(self, b: int) -> SetFunctor:
        """The diagram of sets obtained by evaluating at b."""
        return SetFunctor(self.shape, [X.values[b] for X in self.objects], [n.components[b] for n in self.arrows])


def validate_presheaf_diagram(shape_cat: FiniteCategory, objects, arrows) -> PresheafDiagram:
    D = PresheafDiagram(shape_cat, list(objects), list(arrows))
    base = objects[0].source if objects else None
    for u, m in enumerate(shape_cat.morphisms):
        n = arrows[u]
        if n.source != objects[m.dom] or n.target != objects[m.cod]:
            raise BoundaryMismatch(f"transformation for {shape_cat.describe(u)} has the wrong ends", witness=u)
    if base is not None:
        for b in range(base.n_objects):
            validate_set_functor(shape_cat, D.at(b).values, D.at(b).actions)
    return D


class PresheafCone(NamedTuple):
    diagram: PresheafDiagram
    vertex: Presheaf
    legs: tuple


def presheaf_limit(D: PresheafDiagram, base: FiniteCategory, caps: Caps | None = None) -> PresheafCone:
    """Limits of presheaves, computed objectwise."""
    cones = [limit_finset(D.at(b), caps) for b in range(base.n_objects)]
    n = len(D.objects)
    actions = []
    for f, m in enumerate(base.morphisms):
        acts = [X.actions[f] for X in D.objects]
        actions.append(FinFunction.from_mapping(
            cones[m.cod].vertex, cones[m.dom].vertex, lambda fam, acts=acts: tuple(acts[i](fam[i]) for i in range(n))))
    L = validate_presheaf(base, [c.vertex for c in cones], actions)
    legs = tuple(validate_set_nat(L, D.objects[i], [c.legs[i] for c in cones]) for i in range(n))
    return PresheafCone(D, L, legs)


def presheaf_colimit(D: PresheafDiagram, base: FiniteCategory, caps: Caps | None = None) -> PresheafCone:
    """Colimits of presheaves, computed objectwise."""
    cocones = [colimit_finset(D.at(b), caps) for b in range(base.n_objects)]
    n = len(D.objects)
    actions = []
    for f, m in enumerate(base.morphisms):
        src, tgt = cocones[m.cod], cocones[m.dom]
        mapping: dict = {}
        for i in range(n):
            act = D.objects[i].actions[f]
            for x in D.objects[i].values[m.cod]:
                mapping.setdefault(src.legs[i](x), tgt.legs[i](act(x)))
        actions.append(FinFunction.from_mapping(src.vertex, tgt.vertex, mapping))
    V = validate_presheaf(base, [c.vertex for c in cocones], actions)
    legs = tuple(validate_set_nat(D.objects[i], V, [c.legs[i] for c in cocones]) for i in range(n))
    return PresheafCone(D, V, legs)


def _compatible(D: PresheafDiagram, legs, colim: bool) -> bool:
    for u, m in enumerate(D.shape.morphisms):
        arrow = D.arrows[u]
        if colim:
            if any(legs[m.cod][b].after(arrow[b]) != legs[m.dom][b] for b in range(len(arrow.components))):
                return False
        elif any(arrow[b].after(legs[m.dom][b]) != legs[m.cod][b] for b in range(len(arrow.components))):
            return False
    return True


def _families(D: PresheafDiagram, options, colim: bool):
    for combo in itertools.product(*options):
        if _compatible(D, combo, colim):
            yield tuple(n.table for n in combo)


def is_presheaf_limit(cone: PresheafCone, caps: Caps | None = None) -> bool:
    """Universal property tested against every representable probe.

    Maps h_a -> L correspond to cones h_a -> D under composition with the legs.
    """
    D, L = cone.diagram, cone.vertex
    base = L.source.op
    if not _compatible(D, cone.legs, colim=False):
        return False
    for a in range(base.n_objects):
        h = representable(base, a)
        options = [enumerate_set_nats(h, X, caps) for X in D.objects]
        cones = set(_families(D, options, colim=False))
        maps = enumerate_set_nats(h, L, caps)
        induced = {tuple(tuple(leg[b].after(n[b]).assignment for b in range(base.n_objects)) for leg in cone.legs)
                   for n in maps}
        if len(induced) != len(maps) or induced != cones:
            return False
    return True


def coprobe(C: FiniteCategory, a: int) -> Presheaf:
    """K_a(b) = subsets of C(a, b); f: b' -> b pulls S back to {g : f∘g ∈ S}."""
    values = []
    for b in range(C.n_objects):
        hom = C.hom(a, b)
        values.append(FinSet(frozenset(s) for r in range(len(hom) + 1) for s in itertools.combinations(hom, r)))
    actions = []
    for f, m in enumerate(C.morphisms):
        src, tgt = values[m.cod], values[m.dom]
        actions.append(FinFunction.from_mapping(
            src, tgt, lambda S, f=f, b2=m.dom: frozenset(g for g in C.hom(a, b2) if C.composition[(f, g)] in S)))
    return validate_presheaf(C, values, actions)


def is_presheaf_colimit(cocone: PresheafCone, caps: Caps | None = None) -> bool:
    """Couniversal property tested against the coprobes K_a."""
    D, V = cocone.diagram, cocone.vertex
    base = V.source.op
    if not _compatible(D, cocone.legs, colim=True):
        return False
    for a in range(base.n_objects):
        K = coprobe(base, a)
        options = [enumerate_set_nats(X, K, caps) for X in D.objects]
        cocones = set(_families(D, options, colim=True))
        maps = enumerate_set_nats(V, K, caps)
        induced = {tuple(tuple(n[b].after(leg[b]).assignment for b in range(base.n_objects)) for leg in cocone.legs)
                   for n in maps}
        if len(induced) != len(maps) or induced != cocones:
            return False
    return True


# density


class DensityWitness(NamedTuple):
    elements: ElementsCategory
    colimit: PresheafCone
    comparison: SetNat


def density_check(X: SetFunctor, caps: Caps | None = None) -> DensityWitness:
    """colim over the elements of X of h_a is isomorphic to X; the comparison is returned."""
    X = as_presheaf(X)
    C = X.source.op
    el = category_of_elements(X, caps)
    E = el.category
    objs = [representable(C, a) for a, _ in el.elements]
    arrows = [representable_map(C, el.projection.fmap(k)) for k in range(E.n_morphisms)]
    # representable_map builds fresh presheaves; rebind ends to the shared objects
    arrows = [SetNat(objs[E.dom(k)], objs[E.cod(k)], n.components) for k, n in enumerate(arrows)]
    D = PresheafDiagram(E, objs, arrows)
    colim = presheaf_colimit(D, C, caps)
    comps = []
    for b in range(C.n_objects):
        mapping = {}
        for i, (a, x) in enumerate(el.elements):
            for p in C.hom(b, a):
                v = colim.legs[i][b](p)
                w = X.actions[p](x)
                assert mapping.setdefault(v, w) == w
        comps.append(FinFunction.from_mapping(colim.vertex.values[b], X.values[b], mapping))
    comparison = validate_set_nat(colim.vertex, X, comps)
    assert is_set_nat_iso(comparison), "the canonical map from the colimit of representables is invertible"
    return DensityWitness(el, colim, comparison)


# products and exponentials


def presheaf_product(X: SetFunctor, Y: SetFunctor) -> tuple[Presheaf, SetNat, SetNat]:
    """X × Y with its two projections."""
    C = X.source.op
    values = [FinSet(itertools.product(X.values[a].elements, Y.values[a].elements)) for a in range(C.n_objects)]
    actions = [
        FinFunction.from_mapping(values[m.cod], values[m.dom], lambda t, f=f: (X.actions[f](t[0]), Y.actions[f](t[1])))
        for f, m in enumerate(C.morphisms)
    ]
    P = Presheaf(X.source, values, actions)
    p1 = SetNat(P, X, [FinFunction.from_mapping(values[a], X.values[a], lambda t: t[0]) for a in range(C.n_objects)])
    p2 = SetNat(P, Y, [FinFunction.from_mapping(values[a], Y.values[a], lambda t: t[1]) for a in range(C.n_objects)])
    return P, p1, p2


def product_map(alpha: SetNat, beta: SetNat, P: SetFunctor, Q: SetFunctor) -> SetNat:
    """α × β : P -> Q between chosen products."""
    comps = [
        FinFunction.from_mapping(P.values[a], Q.values[a], lambda t, a=a: (alpha[a](t[0]), beta[a](t[1])))
        for a in range(len(P.values))
    ]
    return SetNat(P, Q, comps)


class Exponential(NamedTuple):
    presheaf: Presheaf
    base_products: tuple  # h_a × Y for each a
    nats: tuple  # per object, the transformations named by the atoms
    evaluation: SetNat


def exponential(Y: SetFunctor, Z: SetFunctor, caps: Caps | None = None) -> Exponential:
    """Z^Y(a) = Nat(h_a × Y, Z); atoms are the component tables."""
    C = Y.source.op
    prods, nats, values = [], [], []
    for a in range(C.n_objects):
        P, _, _ = presheaf_product(representable(C, a), Y)
        ns = enumerate_set_nats(P, Z, caps)
        prods.append(P)
        nats.append(ns)
        values.append(FinSet(n.table for n in ns))
    actions = []
    for f, m in enumerate(C.morphisms):
        a, a2 = m.cod, m.dom  # f: a2 -> a, acting Z^Y(a) -> Z^Y(a2)
        hf = representable_map(C, f)
        idY = SetNat(Y, Y, [FinFunction.identity(v) for v in Y.values])
        pre = product_map(hf, idY, prods[a2], prods[a])
        by_table = {n.table: n for n in nats[a]}

        def act(t, by_table=by_table, pre=pre):
            n = by_table[t]
            return tuple(n[b].after(pre[b]).assignment for b in range(C.n_objects))

        actions.append(FinFunction.from_mapping(values[a], values[a2], act))
    E = validate_presheaf(C, values, actions)
    EY, _, _ = presheaf_product(E, Y)
    ev_comps = []
    for a in range(C.n_objects):
        by_table = {n.table: n for n in nats[a]}
        ident = C.identities[a]
        ev_comps.append(FinFunction.from_mapping(EY.values[a], Z.values[a], lambda t, bt=by_table, a=a, i=ident: bt[t[0]][a]((i, t[1]))))
    ev = validate_set_nat(EY, Z, ev_comps)
    return Exponential(E, tuple(prods), tuple(tuple(n) for n in nats), ev)


def curry(gamma: SetNat, X: SetFunctor, Y: SetFunctor, exp: Exponential) -> SetNat:
    """γ: X × Y -> Z  ↦  X -> Z^Y, x ↦ ((p, y) ↦ γ((Xp)(x), y))."""
    C = X.source.op
    comps = []
    for a in range(C.n_objects):
        P = exp.base_products[a]

        def image(x, a=a, P=P):
            return tuple(
                tuple(gamma[b].cod.index(gamma[b]((X.actions[t[0]](x), t[1]))) for t in P.values[b])
                for b in range(C.n_objects)
            )

        comps.append(FinFunction.from_mapping(X.values[a], exp.presheaf.values[a], image))
    return validate_set_nat(X, exp.presheaf, comps)


def uncurry(delta: SetNat, X: SetFunctor, Y: SetFunctor, exp: Exponential) -> SetNat:
    """δ: X -> Z^Y  ↦  ev∘(δ × 1_Y)."""
    XY, _, _ = presheaf_product(X, Y)
    EY = exp.evaluation.source
    idY = SetNat(Y, Y, [FinFunction.identity(v) for v in Y.values])
    pre = product_map(delta, idY, XY, EY)
    return SetNat(XY, exp.evaluation.target, [e.after(p) for e, p in zip(exp.evaluation.components, pre.components)])


class CurryReport(NamedTuple):
    left_count: int
    right_count: int
    bijective: bool


def check_currying(X: SetFunctor, Y: SetFunctor, Z: SetFunctor, caps: Caps | None = None,
                   exp: Exponential | None = None) -> CurryReport:
    """Hom(X × Y, Z) -> Hom(X, Z^Y) is a bijection with inverse ``uncurry``."""
    exp = exp or exponential(Y, Z, caps)
    XY, _, _ = presheaf_product(X, Y)
    left = enumerate_set_nats(XY, Z, caps)
    right = enumerate_set_nats(X, exp.presheaf, caps)
    curried = [curry(g, X, Y, exp) for g in left]
    ok = len({c.table for c in curried}) == len(left) and {c.table for c in curried} == {r.table for r in right}
    ok = ok and all(uncurry(c, X, Y, exp).table == g.table for c, g in zip(curried, left))
    return CurryReport(len(left), len(right), ok)


def currying_natural_in_x(xi: SetNat, Y: SetFunctor, Z: SetFunctor, caps: Caps | None = None) -> bool:
    """curry(γ∘(ξ × 1)) = curry(γ)∘ξ for ξ: X' -> X."""
    X2, X = xi.source, xi.target
    exp = exponential(Y, Z, caps)
    XY, _, _ = presheaf_product(X, Y)
    X2Y, _, _ = presheaf_product(X2, Y)
    idY = SetNat(Y, Y, [FinFunction.identity(v) for v in Y.values])
    pre = product_map(xi, idY, X2Y, XY)
    for g in enumerate_set_nats(XY, Z, caps):
        lhs = curry(SetNat(X2Y, Z, [c.after(p) for c, p in zip(g.components, pre.components)]), X2, Y, exp)
        c = curry(g, X, Y, exp)
        rhs = [k.after(x) for k, x in zip(c.components, xi.components)]
        if lhs.table != tuple(r.assignment for r in rhs):
            return False
    return True


def currying_natural_in_z(zeta: SetNat, X: SetFunctor, Y: SetFunctor, caps: Caps | None = None) -> bool:
    """uncurry commutes with postcomposition by ζ: Z -> Z'."""
    Z, Z2 = zeta.source, zeta.target
    exp, exp2 = exponential(Y, Z, caps), exponential(Y, Z2, caps)
    XY, _, _ = presheaf_product(X, Y)
    for g in enumerate_set_nats(XY, Z, caps):
        post = SetNat(XY, Z2, [z.after(c) for z, c in zip(zeta.components, g.components)])
        lhs = curry(post, X, Y, exp2)
        c = curry(g, X, Y, exp)
        # ζ^Y acts on atoms by postcomposing every component
        for a in range(len(X.values)):
            for x in X.values[a]:
                t = c[a](x)
                pushed = tuple(tuple(zeta[b].at(i) for i in t[b]) for b in range(len(t)))
                if lhs[a](x) != pushed:
                    return False
    return True


# sieves and the subobject classifier


@dataclass(frozen=True, order=True)
class Sieve:
    at: int
    members: tuple  # sorted morphism indices

    def __contains__(self, f):
        return f in self.members

    def __repr__(self):
        return f"Sieve({self.at}:{list(self.members)})"


def is_sieve(C: FiniteCategory, a: int, members) -> bool:
    m = set(members)
    if any(C.cod(h) != a for h in m):
        return False
    return all(C.composition[(h, g)] in m for h in m for g in C.into(C.dom(h)))


def sieves(C: FiniteCategory, a: int, caps: Caps | None = None) -> list[Sieve]:
    """All sieves on a, in lexicographic order of member index tuples."""
    caps = resolve(caps)
    into = sorted(C.into(a))
    if 2 ** len(into) > caps.max_enum:
        raise CapExceeded(f"{2 ** len(into)} candidate sieves exceed the cap")
    found = [
        tuple(sorted(s))
        for r in range(len(into) + 1)
        for s in itertools.combinations(into, r)
        if is_sieve(C, a, s)
    ]
    return [Sieve(a, s) for s in sorted(found)]


def pullback_sieve(C: FiniteCategory, S: Sieve, f: int) -> Sieve:
    """f*S = {g : f∘g ∈ S} for f: b -> S.at."""
    return Sieve(C.dom(f), tuple(sorted(g for g in C.into(C.dom(f)) if C.composition[(f, g)] in S.members)))


class Classifier(NamedTuple):
    omega: Presheaf
    truth: SetNat  # terminal -> Ω, the maximal sieves


def subobject_classifier(C: FiniteCategory, caps: Caps | None = None) -> Classifier:
    values = [FinSet(sieves(C, a, caps)) for a in range(C.n_objects)]
    actions = [
        FinFunction.from_mapping(values[m.cod], values[m.dom], lambda S, f=f: pullback_sieve(C, S, f))
        for f, m in enumerate(C.morphisms)
    ]
    omega = validate_presheaf(C, values, actions)
    one = terminal_presheaf(C)
    truth = validate_set_nat(
        one, omega,
        [FinFunction.from_mapping(one.values[a], values[a], lambda _, a=a: Sieve(a, tuple(sorted(C.into(a)))))
         for a in range(C.n_objects)],
    )
    return Classifier(omega, truth)


def check_subpresheaf(X: SetFunctor, S: Sequence) -> None:
    C = X.source.op
    for f, m in enumerate(C.morphisms):
        for x in S[m.cod]:
            if x not in X.values[m.cod]:
                raise NotASubpresheaf(f"{x!r} is not an element of X", witness=(m.cod, x))
            if X.actions[f](x) not in S[m.dom]:
                raise NotASubpresheaf(f"not closed under the action of {C.label(f)}", witness=(f, x))


def classify_subpresheaf(X: SetFunctor, S: Sequence, classifier: Classifier | None = None) -> SetNat:
    """χ_S: X -> Ω with χ(x) = {f : (Xf)(x) ∈ S}."""
    C = X.source.op
    S = [set(s) for s in S]
    check_subpresheaf(X, S)
    omega = (classifier or subobject_classifier(C)).omega
    comps = []
    for a in range(C.n_objects):
        comps.append(FinFunction.from_mapping(
            X.values[a], omega.values[a],
            lambda x, a=a: Sieve(a, tuple(sorted(f for f in C.into(a) if X.actions[f](x) in S[C.dom(f)])))))
    return validate_set_nat(X, omega, comps)


def subpresheaves(X: SetFunctor, caps: Caps | None = None) -> list[tuple]:
    """All subpresheaves as tuples of frozensets, one per object."""
    caps = resolve(caps)
    C = X.source.op
    flat = [(a, x) for a in range(C.n_objects) for x in X.values[a]]
    if 2 ** len(flat) > caps.max_enum:
        raise CapExceeded(f"{2 ** len(flat)} candidate subsets exceed the cap")
    out = []
    for r in range(len(flat) + 1):
        for chosen in itertools.combinations(flat, r):
            S = [set() for _ in range(C.n_objects)]
            for a, x in chosen:
                S[a].add(x)
            try:
                check_subpresheaf(X, S)
            except NotASubpresheaf:
                continue
            out.append(tuple(frozenset(s) for s in S))
    return out


class ClassifierReport(NamedTuple):
    subobjects: int
    maps_to_omega: int
    bijective: bool


def check_classifier(X: SetFunctor, caps: Caps | None = None) -> ClassifierReport:
    """Subpresheaves of X biject with transformations X -> Ω; each is the pullback of truth."""
    C = X.source.op
    cl = subobject_classifier(C, caps)
    subs = subpresheaves(X, caps)
    chis = [classify_subpresheaf(X, S, cl) for S in subs]
    maps = enumerate_set_nats(X, cl.omega, caps)
    ok = len({c.table for c in chis}) == len(subs) and {c.table for c in chis} == {m.table for m in maps}
    for S, chi in zip(subs, chis):
        pulled = tuple(frozenset(x for x in X.values[a] if chi[a](x) == cl.truth[a]("pt")) for a in range(C.n_objects))
        ok = ok and pulled == S
    return ClassifierReport(len(subs), len(maps), ok)


# hom bifunctor


def hom_bifunctor(C: FiniteCategory, caps: Caps | None = None) -> SetFunctor:
    """Hom: C^op × C -> FinSet, (f, g) acting by p ↦ g∘p∘f."""
    Cop = C.op
    P = product_category(Cop, C, caps)
    idx = product_morphism_index(Cop, C)
    n = C.n_objects
    values = [FinSet(C.hom(a, b)) for a in range(n) for b in range(n)]
    actions = [None] * P.n_morphisms
    for (f, g), k in idx.items():
        # f: a -> a' in C^op is f: a' -> a in C
        a, a2 = C.cod(f), C.dom(f)
        b, b2 = C.dom(g), C.cod(g)
        actions[k] = FinFunction.from_mapping(
            values[a * n + b], values[a2 * n + b2], lambda p, f=f, g=g: C.composition[(g, C.composition[(p, f)])])
    H = validate_set_functor(P, values, actions)
    for a in range(n):
        h_up = corepresentable(C, a)
        for g in range(C.n_morphisms):
            assert H.actions[idx[(C.identities[a], g)]] == h_up.actions[g]
    return H


# the Yoneda embedding and evaluation


def yoneda_preservation(C: FiniteCategory, shape_name: str, kind: str = "limit", caps: Caps | None = None,
                        seed: int = 0, sample_size: int = 100) -> PreservationRecord:
    """Does a ↦ h_a send (co)limit cones in C to (co)limit cones of presheaves?"""
    from .limits import diagrams_of_shape

    caps = resolve(caps)
    I = shape(shape_name)
    diagrams, exhaustive, used = diagrams_of_shape(I, C, caps, seed, sample_size)
    preserves = True
    witness = None
    for D in diagrams:
        Dt = D if kind == "limit" else Functor(D.source.op, C.op, D.object_map, D.morphism_map)
        table = _cone_table(Dt, caps)
        objs = [representable(C, D(i)) for i in range(I.n_objects)]
        arrows = [SetNat(objs[I.dom(u)], objs[I.cod(u)], representable_map(C, D.fmap(u)).components)
                  for u in range(I.n_morphisms)]
        PD = PresheafDiagram(I, objs, arrows)
        for v in range(C.n_objects):
            for legs in sorted(table[v]):
                if not _is_universal(Dt, v, legs, table):
                    continue
                hv = representable(C, v)
                if kind == "limit":
                    nat_legs = tuple(SetNat(hv, objs[i], representable_map(C, p).components) for i, p in enumerate(legs))
                    ok = is_presheaf_limit(PresheafCone(PD, hv, nat_legs), caps)
                else:
                    nat_legs = tuple(SetNat(objs[i], hv, representable_map(C, p).components) for i, p in enumerate(legs))
                    ok = is_presheaf_colimit(PresheafCone(PD, hv, nat_legs), caps)
                if not ok:
                    preserves = False
                    witness = witness or (D.object_map, v, legs)
    return PreservationRecord(shape_name, kind, preserves, None, None, len(diagrams), exhaustive, used, witness)


def evaluation_preserves_limits(C: FiniteCategory, a: int, shape_name: str, rng: random.Random,
                                samples: int = 20, max_size: int = 2, caps: Caps | None = None) -> bool:
    """ev_a sends the pointwise limit of random presheaf diagrams to a limit of sets."""
    I = shape(shape_name)
    for _ in range(samples):
        D = _random_presheaf_diagram(I, C, rng, max_size)
        if D is None:
            continue
        cone = presheaf_limit(D, C, caps)
        assert is_presheaf_limit(cone, caps)
        image = SetCone(D.at(a), cone.vertex.values[a], tuple(leg[a] for leg in cone.legs))
        if not is_limit_set_cone(image, caps=caps):
            return False
    return True


def _random_presheaf_diagram(I: FiniteCategory, C: FiniteCategory, rng: random.Random, max_size: int):
    """Random diagram of presheaves on a discrete shape, or by random transformations otherwise."""
    objs = [random_presheaf(C, rng, max_size) for _ in range(I.n_objects)]
    arrows = []
    for u, m in enumerate(I.morphisms):
        if I.is_identity(u):
            X = objs[m.dom]
            arrows.append(SetNat(X, X, [FinFunction.identity(v) for v in X.values]))
            continue
        nats = enumerate_set_nats(objs[m.dom], objs[m.cod])
        if not nats:
            return None
        arrows.append(rng.choice(nats))
    try:
        return validate_presheaf_diagram(I, objs, arrows)
    except Exception:
        return None


# Sym and Ord


def bijection_groupoid(n: int, copies: int = 2) -> FiniteCategory:
    """Groupoid on ``copies`` sets of size n with every bijection between them."""
    perms = list(itertools.permutations(range(n)))
    objects = [f"X{i}" for i in range(copies)]
    morphisms, key = [], {}
    ident = tuple(range(n))
    for i in range(copies):
        for j in range(copies):
            for p in perms:
                key[(i, j, p)] = len(morphisms)
                lab = f"id_X{i}" if i == j and p == ident else f"X{i}->X{j}:" + "".join(map(str, p))
                morphisms.append((i, j, lab))
    comp = {}
    for (j, k, q), g in key.items():
        for i in range(copies):
            for p in perms:
                comp[(g, key[(i, j, p)])] = key[(i, k, tuple(q[p[x]] for x in range(n)))]
    identities = [key[(i, i, ident)] for i in range(copies)]
    cat = _assemble(objects, morphisms, identities, comp, name=f"Bij{n}")
    return cat


def _bijection_of(C: FiniteCategory, f: int, n: int) -> tuple:
    label = C.label(f)
    return tuple(range(n)) if label.startswith("id_") else tuple(int(c) for c in label.split(":")[1])


def sym_functor(C: FiniteCategory, n: int) -> SetFunctor:
    """Permutations of each set, transported by conjugation f σ f⁻¹."""
    perms = FinSet(itertools.permutations(range(n)))
    actions = []
    for f in range(C.n_morphisms):
        p = _bijection_of(C, f, n)
        inv = [0] * n
        for x, y in enumerate(p):
            inv[y] = x
        actions.append(FinFunction.from_mapping(perms, perms, lambda s, p=p, inv=inv: tuple(p[s[inv[y]]] for y in range(n))))
    return validate_set_functor(C, [perms] * C.n_objects, actions)


def ord_functor(C: FiniteCategory, n: int) -> SetFunctor:
    """Total orders of each set, listed as sequences and transported elementwise."""
    orders = FinSet(itertools.permutations(range(n)))
    actions = []
    for f in range(C.n_morphisms):
        p = _bijection_of(C, f, n)
        actions.append(FinFunction.from_mapping(orders, orders, lambda o, p=p: tuple(p[x] for x in o)))
    return validate_set_functor(C, [orders] * C.n_objects, actions)
