"""Acceptance criteria 1-10.

Run with pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly: ``python3 tests/test_acceptance.py``.
"""
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from strategies import random_pl_map, random_word_map  # noqa: E402

from ploi.classify import BoundedSum, WreathZ, classification_report, embedding_target, expr_derived_length  # noqa: E402
from ploi.construct import (  # noqa: E402
    SHRINK,
    TruncationParams,
    alpha1,
    alpha2,
    beta,
    bump,
    f_membership,
    gn_generators,
    scale_into,
    w_generators,
)
from ploi.orbitals import GroupSpec, balance_check, find_transition_chains  # noqa: E402
from ploi.plcore import (  # noqa: E402
    Interval,
    breakpoint_images_ok,
    commutator,
    compose,
    compose_all,
    conjugate,
    eval_at,
    identity,
    inverse,
    one_bump_factors,
    power,
    rational,
    support,
)
from ploi.slopes import LatticeKind, SlopePair, c_form, find_controller, image_lattice, phi  # noqa: E402
from ploi.split import (  # noqa: E402
    DepthTaggedPiece,
    depth_lookup,
    first_orbital_dominant,
    gamma_g,
    orbital_of,
    split_form,
    split_stable_search,
)
from ploi.towers import depth_lower_bound, is_exemplary, max_tower  # noqa: E402
from ploi.words import ball, derived_length_bounds  # noqa: E402

q = rational
A1, A2 = alpha1(), alpha2()
UNIT = Interval(q(0), q(1))
RESULTS: dict[int, str] = {}


def iv(a, b):
    return Interval(q(a), q(b))


def criterion_1():
    table1 = dict(zip(["0", "1/8", "1/4", "3/8", "1/2", "3/4", "1"], ["0", "1/4", "1/2", "5/8", "3/4", "7/8", "1"]))
    table2 = dict(zip(["1/4", "5/16", "3/8", "1/2"], ["1/4", "3/8", "7/16", "1/2"]))
    for x, y in table1.items():
        assert eval_at(A1, q(x)) == q(y), (x, y)
    for x, y in table2.items():
        assert eval_at(A2, q(x)) == q(y), (x, y)


def criterion_2():
    assert support(conjugate(A2, A1)) == [iv("1/2", "3/4")]
    for i in range(-3, 4):
        for j in range(-3, 4):
            if i != j:
                assert commutator(beta(i), beta(j)) == identity(), (i, j)


def criterion_3():
    got = scale_into(A1, SHRINK)
    assert got == A2
    assert got.breakpoints == A2.breakpoints


def criterion_4():
    for n in (1, 2, 3, 4):
        G = w_generators(n)
        height = depth_lower_bound(G, 3).height
        d = derived_length_bounds(G, 3)
        assert height == n, (n, height)
        assert d.lower_bound == n and d.vanishing_level == n, (n, d.summary)
        assert d.level_sizes[n - 1] > 0 and d.level_sizes[n] == 0


def criterion_5():
    for n in (1, 2, 3):
        G = gn_generators(TruncationParams(n, 1))
        rep = classification_report(G, 3)
        e = rep.expr
        assert isinstance(e, BoundedSum) and all(isinstance(c, WreathZ) for c in e.children), str(e)
        assert expr_derived_length(e) == n and embedding_target(e) == n
        assert all(f_membership(g) for g in G.generators)


SOLVABLE = [w_generators(n) for n in (1, 2, 3, 4)] + [gn_generators(TruncationParams(n, 1)) for n in (1, 2, 3)]


def criterion_6():
    for G in SOLVABLE:
        for radius in (1, 2, 3):
            elements = ball(G, radius).elements
            assert find_transition_chains(elements) == [], (G.label, radius)
            assert balance_check(G, radius).balanced, (G.label, radius)
            assert is_exemplary(max_tower(elements)), (G.label, radius)


def criterion_7():
    chain = GroupSpec([bump(iv("1/8", "1/2")), bump(iv("1/4", "3/4"))])
    assert find_transition_chains(ball(chain, 1).elements)
    hs = [depth_lower_bound(chain, r).height for r in (1, 2, 3)]
    assert hs[0] < hs[1] < hs[2] and hs[2] >= 3, hs
    v = balance_check(GroupSpec([A1, bump(iv(0, "1/2"))]), 1)
    assert v.status.value == "ImbalancedWitness"


def criterion_8():
    v = image_lattice(GroupSpec([A1]), UNIT)
    assert v.kind is LatticeKind.CYCLIC and v.generator == SlopePair(q(2), q("1/2"))
    c = find_controller(w_generators(2), UNIT, 1)
    assert phi(c, UNIT) in (SlopePair(q(2), q("1/2")), SlopePair(q("1/2"), q(2)))
    rng = random.Random(2024)
    elements = ball(w_generators(2), 3).elements
    for h in rng.sample(elements, 50):
        cf = c_form(h, c, UNIT)
        assert compose(power(c, cf.exponent), cf.residue) == h


def criterion_9():
    rng = random.Random(9)
    fixtures = [w_generators(3), gn_generators(TruncationParams(2, 1))]
    # split_form on 50 products
    for k in range(50):
        G = fixtures[k % 2]
        S = gamma_g(G, 2)
        depth = depth_lookup(S)
        prod = [rng.choice(S.pieces) for _ in range(rng.randint(1, 6))]
        tagged = [DepthTaggedPiece(p, orbital_of(p), depth(orbital_of(p))) for p in prod]
        out = split_form(tagged)
        assert compose_all(t.piece for t in out) == compose_all(prod)
        ds = [t.g_depth for t in out]
        assert ds == sorted(ds)
    # first-orbital-dominant products
    S = gamma_g(w_generators(3), 2)
    seen = 0
    for _ in range(200):
        first = rng.choice(S.pieces)
        A = orbital_of(first)
        inner = [p for p in S.pieces if A.contains_closure(orbital_of(p)) and orbital_of(p) != A]
        if not inner:
            continue
        prod = [first] + [rng.choice(inner) for _ in range(rng.randint(1, 4))]
        assert first_orbital_dominant(prod)
        assert support(compose_all(prod)) == [A]
        seen += 1
    assert seen >= 20
    # split_stable_search on 10 constructed instances
    for k in range(10):
        G = fixtures[k % 2]
        S = gamma_g(G, 2)
        g = rng.choice([h for h in ball(G, 2).elements if not h.is_identity])
        A = rng.choice(support(g))
        prod = one_bump_factors(g)
        rng.shuffle(prod)
        p = rng.choice(S.pieces)
        if inverse(p) in S.sources:
            prod = [p, inverse(p)] + prod
        res = split_stable_search(A, prod, G, 2, 8)
        assert A in support(res.element)


def criterion_10():
    rng = random.Random(10)
    for _ in range(100):  # group laws
        f, g, h = (random_word_map(rng) for _ in range(3))
        assert compose(compose(f, g), h) == compose(f, compose(g, h))
        assert compose(f, inverse(f)) == identity()
        assert conjugate(f, identity()) == f
    elements = ball(w_generators(2), 3).elements
    for _ in range(100):  # slope homomorphism
        f, g = rng.choice(elements), rng.choice(elements)
        assert phi(compose(f, g), UNIT) == phi(f, UNIT) * phi(g, UNIT)
    for _ in range(100):  # breakpoints of products
        assert breakpoint_images_ok(random_pl_map(rng), random_pl_map(rng))
    for _ in range(100):  # orbitals under conjugation
        f, h = random_pl_map(rng), random_pl_map(rng)
        expected = [Interval(eval_at(h, A.left), eval_at(h, A.right)) for A in support(f)]
        assert support(conjugate(f, h)) == expected


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


@pytest.mark.parametrize("number", list(CRITERIA))
def test_criterion(number):
    RESULTS[number] = "FAIL"
    CRITERIA[number]()
    RESULTS[number] = "PASS"


if __name__ == "__main__":
    failed = 0
    for number, fn in CRITERIA.items():
        t = time.time()
        try:
            fn()
            status = "PASS"
        except Exception as exc:  # report every criterion, keep going
            status = f"FAIL ({type(exc).__name__}: {exc})"
            failed += 1
        print(f"criterion {number:2d}: {status} [{time.time() - t:.1f}s]", flush=True)
    sys.exit(1 if failed else 0)
