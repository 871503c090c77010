import itertools
import random
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cathedra.category import (
    arrow_category,
    cyclic_monoid_table,
    discrete,
    divisor_poset,
    from_monoid,
    subset_poset,
    terminal_category,
)

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("cathedra", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("cathedra")

# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def s3_table():
    """Composition table of the permutations of three points; g∘f is table[g][f]."""
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(g[f[x]] for x in range(3))] for f in perms] for g in perms]
    return table, index[(0, 1, 2)], ["".join(map(str, p)) for p in perms]


def sierpinski_open():
    return subset_poset([(), (1,), (2,), (1, 2)], name="Subsets")


def sierpinski_closed():
    # closed sets of the topology with open sets {}, {1}, {1,2}
    return subset_poset([(), (2,), (1, 2)], name="Closed")


def corpus_categories():
    """The named examples every category-level suite runs over."""
    table, unit, labels = s3_table()
    cats = {
        "one": terminal_category(),
        "two": arrow_category(),
        "Z2": from_monoid(cyclic_monoid_table(2), 0),
        "Z3": from_monoid(cyclic_monoid_table(3), 0),
        "S3": from_monoid(table, unit, labels),
        "Div12": divisor_poset(12),
        "Div36": divisor_poset(36),
        "Subsets": sierpinski_open(),
        "Closed": sierpinski_closed(),
    }
    for n in range(5):
        cats[f"discrete{n}"] = discrete(n)
    return cats


CORPUS = corpus_categories()


@pytest.fixture(params=sorted(CORPUS))
def corpus_category(request):
    return CORPUS[request.param]


@pytest.fixture
def rng():
    return random.Random(20240601)


def corpus_adjunctions():
    """Closure, identities, Galois pairs found among monotone maps, and Δ ⊣ lim."""
    from cathedra.adjunction import diagonal_limit_adjunction, identity_adjunction, synthesize_left_adjoint
    from cathedra.category import chain, power_set_poset
    from cathedra.functor import enumerate_functors, functor_from_object_map

    out = []
    closed, opens = sierpinski_closed(), sierpinski_open()
    incl = functor_from_object_map(closed, opens, [opens.object_index(x) for x in closed.objects])
    out.append(("closure", synthesize_left_adjoint(incl)))
    for name in ("one", "two", "Div12", "Subsets", "Closed", "Z2", "S3"):
        out.append((f"identity:{name}", identity_adjunction(CORPUS[name])))
    B4 = power_set_poset([1, 2], name="B4")
    pairs = [(chain(2), chain(3)), (chain(3), chain(2)), (chain(3), chain(3)), (CORPUS["Div12"], chain(2)),
             (CORPUS["Div12"], chain(3)), (B4, B4), (chain(3), B4), (B4, chain(3))]
    for P, Q in pairs:
        for k, g in enumerate(enumerate_functors(P, Q)):
            adj = synthesize_left_adjoint(g)
            if adj is not None:
                out.append((f"galois:{P.name}->{Q.name}#{k}", adj))
    # automorphisms of S3 are adjoint equivalences
    for k, g in enumerate(enumerate_functors(CORPUS["S3"], CORPUS["S3"])):
        adj = synthesize_left_adjoint(g)
        if adj is not None:
            out.append((f"aut:S3#{k}", adj))
    out.append(("diag-lim:B4", diagonal_limit_adjunction(B4, discrete(2)).adjunction))
    return out
