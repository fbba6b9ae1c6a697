import random
from collections import Counter
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from navarro.oracle import alternating, cyclic, dihedral, quaternion, symmetric
from navarro.perm import (PermGroup, SizeGuardError, conj, cycle_type, direct_product,
                          from_cycles, identity, is_self_normalizing_sylow2, normalizer, perm_order,
                          pinv, pmul, power_map, ppow, regular_representation, sylow2)
from navarro.matgroups import sl2


def sympy_group(G):
    return PermutationGroup([Permutation(list(g)) for g in G.generators] or [Permutation(G.degree - 1)])


perms5 = st.permutations(range(5)).map(tuple)


@given(perms5, perms5, perms5)
def test_multiplication_is_associative(a, b, c):
    assert pmul(pmul(a, b), c) == pmul(a, pmul(b, c))


@given(perms5)
def test_inverse_and_powers(a):
    assert pmul(a, pinv(a)) == identity(5)
    assert ppow(a, perm_order(a)) == identity(5)
    assert ppow(a, -1) == pinv(a)


def test_cycle_type():
    assert cycle_type(from_cycles(6, (0, 1, 2), (3, 4))) == (3, 2, 1)
    assert perm_order(from_cycles(6, (0, 1, 2), (3, 4))) == 6


@pytest.mark.parametrize("make", [lambda: symmetric(5), lambda: alternating(6), lambda: dihedral(7),
                                  quaternion, lambda: cyclic(12), lambda: sl2(5)])
def test_order_and_classes_against_sympy(make):
    G = make()
    H = sympy_group(G)
    assert G.order == H.order()
    cl = G.conjugacy_classes()
    assert len(cl) == len(H.conjugacy_classes())
    assert sum(cl.sizes) == G.order


def test_membership_against_sympy():
    G = alternating(6)
    H = sympy_group(G)
    rng = random.Random(1)
    for _ in range(200):
        p = list(range(6))
        rng.shuffle(p)
        assert G.contains(tuple(p)) == H.contains(Permutation(p))


def test_s4_classes():
    cl = symmetric(4).conjugacy_classes()
    assert sorted(cl.sizes) == sorted([1, 6, 3, 8, 6])
    assert cl.sizes[0] == 1 and cl.reps[0] == identity(4)


def test_abelian_classes_are_singletons():
    G = cyclic(9)
    assert len(G.conjugacy_classes()) == 9


def test_sl2_3_has_seven_classes():
    assert len(sl2(3).conjugacy_classes()) == 7


def test_class_of_is_conjugation_invariant():
    G = symmetric(6)
    cl = G.conjugacy_classes()
    els = G.elements()
    rng = random.Random(7)
    for _ in range(300):
        g, h = rng.choice(els), rng.choice(els)
        assert cl.class_of(g) == cl.class_of(conj(g, h))


def test_power_map_examples():
    G = symmetric(3)
    cl = G.conjugacy_classes()
    pm = power_map(cl, 2)
    trans = cl.class_of(from_cycles(3, (0, 1)))
    three = cl.class_of(from_cycles(3, (0, 1, 2)))
    assert pm[trans] == 0
    assert pm[three] == three
    assert power_map(cl, 1) == list(range(len(cl)))
    assert power_map(cl, G.order) == [0] * len(cl)


@settings(max_examples=60)
@given(st.integers(1, 60), st.integers(1, 60))
def test_power_map_composes(m1, m2):
    cl = symmetric(5).conjugacy_classes()
    a, b = power_map(cl, m1), power_map(cl, m2)
    assert [a[b[i]] for i in range(len(cl))] == power_map(cl, m1 * m2)


def two_part(n):
    return n & -n


@pytest.mark.parametrize("make", [lambda: symmetric(4), lambda: symmetric(6), lambda: alternating(5),
                                  lambda: dihedral(12), lambda: sl2(3), lambda: sl2(5),
                                  quaternion, lambda: cyclic(3)])
def test_sylow2_order_and_containment(make):
    G = make()
    P = sylow2(G)
    assert P.order == two_part(G.order)
    N = normalizer(G, P)
    assert all(G.contains(g) for g in P.generators)
    assert all(N.contains(g) for g in P.generators)
    assert all(G.contains(g) for g in N.generators)
    assert N.order % P.order == 0


def test_sylow_examples():
    S4 = symmetric(4)
    assert sylow2(S4).order == 8
    assert not sylow2(S4).is_abelian()
    assert normalizer(S4, sylow2(S4)).order == 8
    assert sylow2(cyclic(3)).order == 1
    G = sl2(3)
    P = sylow2(G)
    assert P.order == 8 and normalizer(G, P).order == 24
    assert is_self_normalizing_sylow2(S4)
    assert not is_self_normalizing_sylow2(G)
    assert not is_self_normalizing_sylow2(cyclic(3))


def test_normalizer_of_whole_group():
    G = alternating(5)
    assert normalizer(G, G).order == 60


def test_products_and_regular_representation():
    G = direct_product(symmetric(3), cyclic(4))
    assert G.order == 24
    R = regular_representation(symmetric(3))
    assert R.degree == 6 and R.order == 6


def test_size_guard():
    with pytest.raises(SizeGuardError):
        PermGroup(10, [from_cycles(10, (0, 1)), from_cycles(10, tuple(range(10)))], max_order=1000)
