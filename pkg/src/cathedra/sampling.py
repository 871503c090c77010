"""Seeded random generation of functors and set-valued functors."""

from __future__ import annotations

import random

from .category import FiniteCategory
from .finset import FinFunction, FinSet, SetFunctor, validate_set_functor
from .functor import Functor


def _solve_actions(C: FiniteCategory, values, rng: random.Random, max_nodes=20000):
    """Randomised backtracking for functorial actions with fixed values."""
    n = C.n_morphisms
    acts: list = [None] * n
    for a, e in enumerate(C.identities):
        acts[e] = tuple(range(len(values[a])))
    pending = [f for f in range(n) if acts[f] is None]
    by_member: dict[int, list] = {f: [] for f in range(n)}
    for (g, f), h in C.composition.items():
        for x in {g, f, h}:
            by_member[x].append((g, f, h))
    nodes = [0]

    def consistent(trail):
        queue = list(trail)
        while queue:
            x = queue.pop()
            for g, f, h in by_member[x]:
                ag, af, ah = acts[g], acts[f], acts[h]
                if ag is not None and af is not None:
                    comp = tuple(ag[i] for i in af)
                    if ah is None:
                        acts[h] = comp
                        trail.append(h)
                        queue.append(h)
                    elif ah != comp:
                        return False
        return True

    def go(k):
        while k < len(pending) and acts[pending[k]] is not None:
            k += 1
        if k == len(pending):
            return True
        f = pending[k]
        m = C.morphisms[f]
        size_d, size_c = len(values[m.dom]), len(values[m.cod])
        if size_c == 0 and size_d > 0:
            return False
        tries = min(24, size_c ** size_d) if size_d else 1
        seen = set()
        for _ in range(tries * 2):
            cand = tuple(rng.randrange(size_c) for _ in range(size_d))
            if cand in seen:
                continue
            seen.add(cand)
            nodes[0] += 1
            if nodes[0] > max_nodes:
                return False
            acts[f] = cand
            trail = [f]
            if consistent(trail) and go(k + 1):
                return True
            for x in trail:
                acts[x] = None
        return False

    if not go(0):
        return None
    return acts


def random_set_functor(C: FiniteCategory, rng: random.Random, max_size: int = 3, min_size: int = 0,
                       atoms="pqrstuvw", attempts: int = 50) -> SetFunctor:
    """A random functor C -> FinSet with value sizes in [min_size, max_size]."""
    for _ in range(attempts):
        sizes = [rng.randint(min_size, max_size) for _ in range(C.n_objects)]
        values = [FinSet(f"{atoms[i % len(atoms)]}{k}" for i in range(s)) for k, s in enumerate(sizes)]
        acts = _solve_actions(C, values, rng)
        if acts is None:
            continue
        actions = [FinFunction(values[m.dom], values[m.cod], acts[f]) for f, m in enumerate(C.morphisms)]
        return validate_set_functor(C, values, actions)
    # constant one-point functor always exists
    point = FinSet(["p0"])
    return validate_set_functor(C, [point] * C.n_objects, [FinFunction.identity(point)] * C.n_morphisms)


def random_functor(I: FiniteCategory, C: FiniteCategory, rng: random.Random, max_nodes: int = 20000) -> Functor | None:
    """A random functor I -> C by randomised backtracking, or None if none was found."""
    if not C.n_objects:
        return Functor(I, C, [], []) if not I.n_objects else None
    om = [-1] * I.n_objects
    mm = [-1] * I.n_morphisms
    nodes = [0]
    arrows_between = [[f for f, m in enumerate(I.morphisms) if not I.is_identity(f) and a in (m.dom, m.cod)]
                      for a in range(I.n_objects)]

    def ok():
        for (g, f), h in I.composition.items():
            if mm[g] >= 0 and mm[f] >= 0 and mm[h] >= 0 and C.composition[(mm[g], mm[f])] != mm[h]:
                return False
        return True

    def objects_fit(a):
        # every arrow touching a whose other end is placed needs a nonempty hom
        for f in arrows_between[a]:
            d, c = om[I.dom(f)], om[I.cod(f)]
            if d >= 0 and c >= 0 and not C.hom(d, c):
                return False
        return True

    order = [f for f in range(I.n_morphisms) if not I.is_identity(f)]

    def arrows(k):
        if k == len(order):
            return True
        f = order[k]
        cands = list(C.hom(om[I.dom(f)], om[I.cod(f)]))
        rng.shuffle(cands)
        for g in cands:
            nodes[0] += 1
            if nodes[0] > max_nodes:
                return False
            mm[f] = g
            if ok() and arrows(k + 1):
                return True
        mm[f] = -1
        return False

    def objects(a):
        if a == I.n_objects:
            for x, e in enumerate(I.identities):
                mm[e] = C.identities[om[x]]
            return arrows(0)
        cands = list(range(C.n_objects))
        rng.shuffle(cands)
        for b in cands:
            nodes[0] += 1
            if nodes[0] > max_nodes:
                return False
            om[a] = b
            if objects_fit(a) and objects(a + 1):
                return True
        om[a] = -1
        return False

    if objects(0):
        return Functor(I, C, om, mm)
    return None
