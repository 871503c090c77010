"""Functors, natural transformations and functor categories."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

from .caps import Caps, resolve
from .category import FiniteCategory, is_isomorphism, isomorphic_objects, validate_category
from .errors import (
    BoundaryMismatch,
    CapExceeded,
    ComponentBoundary,
    CompositionNotPreserved,
    DomCodMismatch,
    IdentityNotPreserved,
    NaturalityViolation,
)
from .finset import FinFunction, SetFunctor


class Functor:
    def __init__(self, source: FiniteCategory, target: FiniteCategory, object_map, morphism_map):
        self.source = source
        self.target = target
        self.object_map = tuple(object_map)
        self.morphism_map = tuple(morphism_map)

    def __call__(self, a: int) -> int:
        return self.object_map[a]

    def fmap(self, f: int) -> int:
        return self.morphism_map[f]

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (
            self.object_map == other.object_map
            and self.morphism_map == other.morphism_map
            and self.source.same_tables(other.source)
            and self.target.same_tables(other.target)
        )

    def __hash__(self):
        return hash((self.object_map, self.morphism_map))

    def __repr__(self):
        return f"<Functor objects={self.object_map}>"


def validate_functor(source: FiniteCategory, target: FiniteCategory, object_map, morphism_map) -> Functor:
    object_map, morphism_map = tuple(object_map), tuple(morphism_map)
    if len(object_map) != source.n_objects or len(morphism_map) != source.n_morphisms:
        raise DomCodMismatch("functor tables do not cover the source category")
    if any(not 0 <= b < target.n_objects for b in object_map):
        raise DomCodMismatch("object image out of range")
    if any(not 0 <= g < target.n_morphisms for g in morphism_map):
        raise DomCodMismatch("morphism image out of range")
    for f, m in enumerate(source.morphisms):
        img = target.morphisms[morphism_map[f]]
        if img.dom != object_map[m.dom] or img.cod != object_map[m.cod]:
            raise DomCodMismatch(f"image of {source.describe(f)} has the wrong endpoints", witness=f)
    for a, e in enumerate(source.identities):
        if morphism_map[e] != target.identities[object_map[a]]:
            raise IdentityNotPreserved(f"identity on {source.objects[a]} not sent to an identity", witness=a)
    for (g, f), h in source.composition.items():
        if target.composition[(morphism_map[g], morphism_map[f])] != morphism_map[h]:
            raise CompositionNotPreserved(
                f"F({source.label(g)}∘{source.label(f)}) != F({source.label(g)})∘F({source.label(f)})",
                witness=(g, f),
            )
    return Functor(source, target, object_map, morphism_map)


def identity_functor(C: FiniteCategory) -> Functor:
    return Functor(C, C, range(C.n_objects), range(C.n_morphisms))


def constant_functor(source: FiniteCategory, target: FiniteCategory, b: int) -> Functor:
    return Functor(source, target, [b] * source.n_objects, [target.identities[b]] * source.n_morphisms)


def functor_from_object_map(source, target, object_map) -> Functor:
    """Functor between preorder-like categories, arrows sent to the unique candidate."""
    mm = []
    for f, m in enumerate(source.morphisms):
        cands = target.hom(object_map[m.dom], object_map[m.cod])
        if len(cands) != 1:
            raise DomCodMismatch(f"cannot infer the image of {source.describe(f)}", witness=f)
        mm.append(cands[0])
    return validate_functor(source, target, object_map, mm)


def compose_functors(G: Functor, F: Functor) -> Functor:
    if not F.target.same_tables(G.source):
        raise BoundaryMismatch("target of F is not the source of G")
    return validate_functor(
        F.source,
        G.target,
        [G.object_map[b] for b in F.object_map],
        [G.morphism_map[g] for g in F.morphism_map],
    )


def opposite_functor(F: Functor) -> Functor:
    return Functor(F.source.op, F.target.op, F.object_map, F.morphism_map)


def precompose(Y: SetFunctor, F: Functor) -> SetFunctor:
    """Y∘F for a set functor Y on the target of F."""
    return SetFunctor(F.source, [Y.values[b] for b in F.object_map], [Y.actions[g] for g in F.morphism_map])


# natural transformations between functors into finite categories


class NatTransformation:
    def __init__(self, source: Functor, target: Functor, components):
        self.source = source
        self.target = target
        self.components = tuple(components)

    def __getitem__(self, a):
        return self.components[a]

    def __eq__(self, other):
        if not isinstance(other, NatTransformation):
            return NotImplemented
        return self.components == other.components and self.source == other.source and self.target == other.target

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"<NatTransformation {self.components}>"


def _parallel(F: Functor, G: Functor) -> bool:
    return F.source.same_tables(G.source) and F.target.same_tables(G.target)


def validate_nat(F: Functor, G: Functor, components) -> NatTransformation:
    if not _parallel(F, G):
        raise BoundaryMismatch("functors are not parallel")
    A, B = F.source, F.target
    components = tuple(components)
    if len(components) != A.n_objects:
        raise ComponentBoundary("wrong number of components")
    for a, c in enumerate(components):
        if not 0 <= c < B.n_morphisms or B.dom(c) != F(a) or B.cod(c) != G(a):
            raise ComponentBoundary(f"component at {A.objects[a]} is not a map F(A) -> G(A)", witness=a)
    for u, m in enumerate(A.morphisms):
        if B.composition[(G.fmap(u), components[m.dom])] != B.composition[(components[m.cod], F.fmap(u))]:
            raise NaturalityViolation(f"naturality square fails at {A.describe(u)}", witness=u)
    return NatTransformation(F, G, components)


def identity_nat(F):
    if isinstance(F, SetFunctor):
        return SetNat(F, F, [FinFunction.identity(v) for v in F.values])
    return NatTransformation(F, F, [F.target.identities[b] for b in F.object_map])


def vcompose(beta, alpha):
    """beta∘alpha, componentwise."""
    if isinstance(alpha, SetNat):
        if alpha.target != beta.source:
            raise BoundaryMismatch("target of alpha is not the source of beta")
        return validate_set_nat(alpha.source, beta.target, [b.after(a) for b, a in zip(beta.components, alpha.components)])
    if alpha.target != beta.source:
        raise BoundaryMismatch("target of alpha is not the source of beta")
    B = alpha.source.target
    return validate_nat(
        alpha.source, beta.target, [B.composition[(b, a)] for b, a in zip(beta.components, alpha.components)]
    )


def hcompose(alpha2: NatTransformation, alpha: NatTransformation) -> NatTransformation:
    """Horizontal composite alpha2 * alpha : F2∘F -> G2∘G."""
    F, G = alpha.source, alpha.target
    F2, G2 = alpha2.source, alpha2.target
    if not F.target.same_tables(F2.source):
        raise BoundaryMismatch("alpha and alpha2 are not horizontally composable")
    C = F2.target
    comps = []
    for a in range(F.source.n_objects):
        left = C.composition[(alpha2[G(a)], F2.fmap(alpha[a]))]
        right = C.composition[(G2.fmap(alpha[a]), alpha2[F(a)])]
        assert left == right, "the two diagonals of a naturality square agree"
        comps.append(left)
    return validate_nat(compose_functors(F2, F), compose_functors(G2, G), comps)


def whisker_right(alpha: NatTransformation, F: Functor) -> NatTransformation:
    """alpha F, components alpha_{F(A)}."""
    return hcompose(alpha, identity_nat(F))


def whisker_left(H: Functor, alpha: NatTransformation) -> NatTransformation:
    """H alpha, components H(alpha_A)."""
    return hcompose(identity_nat(H), alpha)


def is_nat_iso(alpha) -> bool:
    if isinstance(alpha, SetNat):
        return all(len(c.dom) == len(c.cod) and len(set(c.assignment)) == len(c.cod) for c in alpha.components)
    B = alpha.source.target
    return all(is_isomorphism(B, c)[0] for c in alpha.components)


def nat_inverse(alpha: NatTransformation) -> NatTransformation | None:
    B = alpha.source.target
    inv = []
    for c in alpha.components:
        ok, g = is_isomorphism(B, c)
        if not ok:
            return None
        inv.append(g)
    return validate_nat(alpha.target, alpha.source, inv)


# natural transformations between set-valued functors


class SetNat:
    def __init__(self, source: SetFunctor, target: SetFunctor, components: Sequence[FinFunction]):
        self.source = source
        self.target = target
        self.components = tuple(components)

    def __getitem__(self, a) -> FinFunction:
        return self.components[a]

    @cached_property
    def table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c.assignment for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, SetNat):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"<SetNat {self.table}>"


def validate_set_nat(F: SetFunctor, G: SetFunctor, components) -> SetNat:
    A = F.source
    if not A.same_tables(G.source):
        raise BoundaryMismatch("set functors are not parallel")
    components = tuple(components)
    if len(components) != A.n_objects:
        raise ComponentBoundary("wrong number of components")
    for a, c in enumerate(components):
        if c.dom != F.values[a] or c.cod != G.values[a]:
            raise ComponentBoundary(f"component at {A.objects[a]} is not a function F(A) -> G(A)", witness=a)
    for u, m in enumerate(A.morphisms):
        if G.actions[u].after(components[m.dom]) != components[m.cod].after(F.actions[u]):
            raise NaturalityViolation(f"naturality square fails at {A.describe(u)}", witness=u)
    return SetNat(F, G, components)


def whisker_set_nat(beta: SetNat, F: Functor) -> SetNat:
    """beta F for beta between set functors on the target of F."""
    return SetNat(precompose(beta.source, F), precompose(beta.target, F), [beta.components[b] for b in F.object_map])


# enumeration


def enumerate_nats(F, G, caps: Caps | None = None) -> list:
    """All natural transformations F -> G, in a deterministic order."""
    if isinstance(F, SetFunctor):
        return enumerate_set_nats(F, G, caps)
    if not _parallel(F, G):
        raise BoundaryMismatch("functors are not parallel")
    caps = resolve(caps)
    A, B = F.source, F.target
    cands = [B.hom(F(a), G(a)) for a in range(A.n_objects)]
    checks: list[list[int]] = [[] for _ in range(A.n_objects)]
    for u, m in enumerate(A.morphisms):
        checks[max(m.dom, m.cod)].append(u)
    result = []
    comps: list[int] = []
    nodes = [0]

    def go(k):
        if k == A.n_objects:
            result.append(NatTransformation(F, G, comps))
            return
        for c in cands[k]:
            nodes[0] += 1
            if nodes[0] > caps.max_enum:
                raise CapExceeded("transformation search exceeded its budget")
            comps.append(c)
            if all(
                B.composition[(G.fmap(u), comps[A.dom(u)])] == B.composition[(comps[A.cod(u)], F.fmap(u))]
                for u in checks[k]
            ):
                go(k + 1)
            comps.pop()

    go(0)
    return result


def enumerate_set_nats(F: SetFunctor, G: SetFunctor, caps: Caps | None = None) -> list[SetNat]:
    """All natural transformations between set functors.

    Branches on one element at a time; every assignment is pushed along all
    arrows out of its object, so forced values are never branched on.
    """
    caps = resolve(caps)
    A = F.source
    if not A.same_tables(G.source):
        raise BoundaryMismatch("set functors are not parallel")
    n = A.n_objects
    assigned = [[-1] * len(F.values[a]) for a in range(n)]
    order = [(a, x) for a in range(n) for x in range(len(F.values[a]))]
    out = [A.out_of(a) for a in range(n)]
    fact = [F.actions[u].assignment for u in range(A.n_morphisms)]
    gact = [G.actions[u].assignment for u in range(A.n_morphisms)]
    cod = [A.cod(u) for u in range(A.n_morphisms)]
    result = []
    nodes = [0]

    def assign(a, x, y, trail):
        queue = [(a, x, y)]
        while queue:
            a, x, y = queue.pop()
            cur = assigned[a][x]
            if cur == -1:
                assigned[a][x] = y
                trail.append((a, x))
                for u in out[a]:
                    queue.append((cod[u], fact[u][x], gact[u][y]))
            elif cur != y:
                return False
        return True

    def go(pos):
        while pos < len(order) and assigned[order[pos][0]][order[pos][1]] != -1:
            pos += 1
        if pos == len(order):
            comps = [FinFunction(F.values[a], G.values[a], assigned[a]) for a in range(n)]
            result.append(SetNat(F, G, comps))
            return
        a, x = order[pos]
        for y in range(len(G.values[a])):
            nodes[0] += 1
            if nodes[0] > caps.max_enum:
                raise CapExceeded("transformation search exceeded its budget")
            trail: list = []
            if assign(a, x, y, trail):
                go(pos + 1)
            for b, z in trail:
                assigned[b][z] = -1

    go(0)
    return result


def enumerate_functors(A: FiniteCategory, B: FiniteCategory, caps: Caps | None = None):
    """All functors A -> B, lexicographic in (object_map, morphism_map)."""
    caps = resolve(caps)
    candidates = B.n_objects ** A.n_objects
    if candidates > caps.max_enum:
        raise CapExceeded(f"{candidates} object-map candidates exceed cap {caps.max_enum}")
    order = list(range(A.n_morphisms))
    pos = {f: i for i, f in enumerate(order)}
    checks: list[list[tuple[int, int, int]]] = [[] for _ in order]
    for (g, f), h in A.composition.items():
        checks[max(pos[g], pos[f], pos[h])].append((g, f, h))
    nodes = [0]

    def objmaps(k, current):
        if k == A.n_objects:
            yield tuple(current)
            return
        for b in range(B.n_objects):
            current.append(b)
            yield from objmaps(k + 1, current)
            current.pop()

    for om in objmaps(0, []):
        mm = [-1] * A.n_morphisms

        def go(i):
            if i == len(order):
                yield Functor(A, B, om, mm)
                return
            f = order[i]
            m = A.morphisms[f]
            if A.is_identity(f):
                cands = (B.identities[om[m.dom]],)
            else:
                cands = B.hom(om[m.dom], om[m.cod])
            for g in cands:
                nodes[0] += 1
                if nodes[0] > caps.max_enum:
                    raise CapExceeded("functor search exceeded its budget")
                mm[f] = g
                if all(B.composition[(mm[x], mm[y])] == mm[z] for x, y, z in checks[i]):
                    yield from go(i + 1)
                mm[f] = -1

        yield from go(0)


@dataclass
class FunctorCategory:
    category: FiniteCategory
    functors: list[Functor]
    nats: list[NatTransformation]

    @cached_property
    def functor_index(self) -> dict:
        return {(F.object_map, F.morphism_map): i for i, F in enumerate(self.functors)}

    @cached_property
    def nat_index(self) -> dict:
        return {(self.index_of(n.source), self.index_of(n.target), n.components): i for i, n in enumerate(self.nats)}

    def index_of(self, F: Functor) -> int:
        return self.functor_index[(F.object_map, F.morphism_map)]

    def index_of_nat(self, alpha: NatTransformation) -> int:
        return self.nat_index[(self.index_of(alpha.source), self.index_of(alpha.target), alpha.components)]


def functor_category(A: FiniteCategory, B: FiniteCategory, caps: Caps | None = None) -> FunctorCategory:
    caps = resolve(caps)
    functors = list(enumerate_functors(A, B, caps))
    if len(functors) > caps.max_objects:
        raise CapExceeded(f"functor category has {len(functors)} objects, cap {caps.max_objects}")
    base = ["<" + ",".join(B.objects[b] for b in F.object_map) + ">" for F in functors]
    labels = []
    for i, lab in enumerate(base):
        labels.append(lab if base.count(lab) == 1 else f"{lab}#{base[:i].count(lab)}")
    identities = [identity_nat(F) for F in functors]
    others = []
    for i, F in enumerate(functors):
        for j, G in enumerate(functors):
            for alpha in enumerate_nats(F, G, caps):
                if not (i == j and alpha.components == identities[i].components):
                    others.append((i, j, alpha))
                if len(others) + len(functors) > caps.max_morphisms:
                    raise CapExceeded(f"functor category exceeds {caps.max_morphisms} morphisms")
    nats = identities + [a for _, _, a in others]
    ends = [(i, i) for i in range(len(functors))] + [(i, j) for i, j, _ in others]
    key = {(ends[k][0], ends[k][1], n.components): k for k, n in enumerate(nats)}
    morphisms = []
    for k, (i, j) in enumerate(ends):
        lab = f"id_{labels[i]}" if k < len(functors) else f"{labels[i]}=>{labels[j]}:" + ",".join(
            B.label(c) for c in nats[k].components
        )
        morphisms.append((i, j, lab))
    comp = {}
    Bc = B.composition
    for k2, b in enumerate(nats):
        for k1, a in enumerate(nats):
            if ends[k1][1] == ends[k2][0]:
                comps = tuple(Bc[(y, x)] for y, x in zip(b.components, a.components))
                comp[(k2, k1)] = key[(ends[k1][0], ends[k2][1], comps)]
    cat = validate_category(labels, morphisms, range(len(functors)), comp, name=f"[{A.name},{B.name}]")
    return FunctorCategory(cat, functors, nats)


def diagonal_functor(A: FiniteCategory, I: FiniteCategory, caps: Caps | None = None, fc: FunctorCategory | None = None):
    """Δ: A -> [I, A]; returns the functor and the functor category it lands in."""
    fc = fc if fc is not None else functor_category(I, A, caps)
    obj = [fc.index_of(constant_functor(I, A, x)) for x in range(A.n_objects)]
    mor = []
    for f, m in enumerate(A.morphisms):
        alpha = NatTransformation(constant_functor(I, A, m.dom), constant_functor(I, A, m.cod), [f] * I.n_objects)
        mor.append(fc.index_of_nat(alpha))
    return validate_functor(A, fc.category, obj, mor), fc


# classification


class FunctorClass(NamedTuple):
    full: bool
    faithful: bool
    essentially_surjective: bool
    equivalence: bool


def classify_functor(F: Functor) -> FunctorClass:
    A, B = F.source, F.target
    full = faithful = True
    for a in range(A.n_objects):
        for a2 in range(A.n_objects):
            images = [F.fmap(f) for f in A.hom(a, a2)]
            if len(set(images)) != len(images):
                faithful = False
            if set(images) != set(B.hom(F(a), F(a2))):
                full = False
    eso = all(any(isomorphic_objects(B, F(a), b) is not None for a in range(A.n_objects)) for b in range(B.n_objects))
    return FunctorClass(full, faithful, eso, full and faithful and eso)


class PseudoInverse(NamedTuple):
    inverse: Functor
    unit: NatTransformation
    counit: NatTransformation


def pseudo_inverse(F: Functor) -> PseudoInverse | None:
    """Build G, η: 1 -> GF and ε: FG -> 1 for a full, faithful, eso functor.

    For each B choose the least A with an isomorphism ε_B: F(A) -> B; G and η
    are forced by fullness and faithfulness.  None if F is not ffeso.
    """
    if not classify_functor(F).equivalence:
        return None
    A, B = F.source, F.target
    gobj, eps = [], []
    for b in range(B.n_objects):
        for a in range(A.n_objects):
            iso = isomorphic_objects(B, F(a), b)
            if iso is not None:
                gobj.append(a)
                eps.append(iso)
                break
    eps_inv = [is_isomorphism(B, e)[1] for e in eps]

    def lift(a, a2, target_morphism):
        (f,) = [f for f in A.hom(a, a2) if F.fmap(f) == target_morphism]
        return f

    gmor = []
    for q, m in enumerate(B.morphisms):
        target = B.compose(eps_inv[m.cod], q, eps[m.dom])
        gmor.append(lift(gobj[m.dom], gobj[m.cod], target))
    G = validate_functor(B, A, gobj, gmor)
    unit = [lift(a, gobj[F(a)], eps_inv[F(a)]) for a in range(A.n_objects)]
    eta = validate_nat(identity_functor(A), compose_functors(G, F), unit)
    eps_nat = validate_nat(compose_functors(F, G), identity_functor(B), eps)
    return PseudoInverse(G, eta, eps_nat)
