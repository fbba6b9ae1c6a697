import itertools

import pytest

from navarro.matgroups import (det, field, gl2, mat_inv, mat_mul, matrix_group_to_perm, perm_to_matrix,
                               pgl2, psl2, sl2, sp4, sp4_form, sp4_root_element)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 25, 27])
def test_field_axioms(q):
    F = field(q)
    els = range(q)
    for a, b in itertools.product(els, els):
        assert F.add[a][b] == F.add[b][a]
        assert F.mul[a][b] == F.mul[b][a]
    for a in range(1, q):
        assert F.mul[a][F.inv[a]] == 1
    assert F.order(F.primitive) == q - 1
    # distributivity on a sample
    for a, b, c in itertools.islice(itertools.product(els, els, els), 2000):
        assert F.mul[a][F.add[b][c]] == F.add[F.mul[a][b]][F.mul[a][c]]


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_sl2_gl2_orders(q):
    assert sl2(q).order == q * (q * q - 1)
    assert gl2(q).order == q * (q * q - 1) * (q - 1)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_projective_orders(q):
    assert psl2(q).order == q * (q * q - 1) // 2
    assert pgl2(q).order == q * (q * q - 1)


def test_small_examples():
    G = sl2(3)
    assert G.degree == 8 and G.order == 24
    assert gl2(3).order == 48


def test_sp4_3():
    G = sp4(3)
    assert G.degree == 80
    q = 3
    assert G.order == q ** 4 * (q * q - 1) * (q ** 4 - 1) == 51840


def test_sp4_root_elements_are_symplectic():
    F = field(3)
    J = sp4_form(F)
    for root in [(1, -1), (1, 1), (2, 0), (0, 2), (-1, 1), (-1, -1), (-2, 0), (0, -2)]:
        X = sp4_root_element(3, root, 1)
        Xt = tuple(zip(*X))
        assert mat_mul(F, mat_mul(F, X, J), Xt) == J


def test_perm_matrix_round_trip():
    G = gl2(5)
    F = field(5)
    for g in G.elements()[:200]:
        M = perm_to_matrix(G, g)
        assert det(F, M) != 0
        assert mat_mul(F, M, mat_inv(F, M)) == ((1, 0), (0, 1))


def test_matrix_product_matches_perm_product():
    from navarro.perm import pmul
    G = sl2(7)
    F = field(7)
    els = G.elements()
    for a, b in zip(els[:50], els[50:100]):
        assert perm_to_matrix(G, pmul(a, b)) == mat_mul(F, perm_to_matrix(G, a), perm_to_matrix(G, b))


def test_singular_generator_rejected():
    with pytest.raises(ValueError):
        matrix_group_to_perm(3, 2, [[[1, 1], [1, 1]]])
