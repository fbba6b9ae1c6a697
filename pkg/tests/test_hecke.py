import json

import pytest

from navarro.chartable import irr_constituents
from navarro.cli import hc_main, hecke_main
from navarro.cyclotomic import Cyclotomic, apply_sigma
from navarro.generic_hecke import TYPES, compare_with_t_basis, generic_hecke
from navarro.hecke import (build_instance, cuspidal_rows, decompose_series, induced_module,
                           named_character, quadratic_character, quadratic_data, rational_structure,
                           t_basis, trivial_character, verify_galois_act)
from navarro.weyl import TorusCharacter, compose

INSTANCES = [("SL2", q) for q in (3, 5, 7, 9, 11, 13)] + [("GL2", 3), ("SP4", 3)]


@pytest.mark.parametrize("family,q,order,b_order,index", [
    ("SL2", 7, 336, 42, 8), ("SL2", 9, 720, 72, 10), ("GL2", 3, 48, 12, 4),
    ("SP4", 3, 51840, 324, 160),
])
def test_instance_orders(family, q, order, b_order, index):
    inst = build_instance(family, q)
    assert inst.G.order == order
    assert inst.B_group.order == b_order
    assert inst.index_B == index
    assert all(inst.verify().values())


@pytest.mark.parametrize("family,q", [("SL2", 4), ("SL2", 17), ("GL2", 5), ("E8", 3)])
def test_instance_rejects(family, q):
    with pytest.raises(ValueError):
        build_instance(family, q)


@pytest.mark.parametrize("family,q,lam,dim", [
    ("SL2", 5, "quadratic", 6), ("SL2", 3, "quadratic", 4), ("SL2", 7, "trivial", 8),
    ("GL2", 3, "quadratic", 4), ("SP4", 3, "trivial", 160),
])
def test_module_character_is_induced(family, q, lam, dim):
    inst = build_instance(family, q)
    mod = induced_module(inst, named_character(inst, lam))
    assert mod.dim == dim
    assert mod.character() == mod.induced_from_table_side()


def test_nonquadratic_character_module():
    inst = build_instance("SL2", 7)
    mod = induced_module(inst, TorusCharacter(7, (1,)))
    assert mod.character() == mod.induced_from_table_side()
    # lam of order 6 is regular: irreducible induced character
    assert irr_constituents(mod.character(), inst.table) == [(irr_constituents(
        mod.character(), inst.table)[0][0], 1)]


@pytest.mark.parametrize("family,q", INSTANCES)
@pytest.mark.parametrize("lam", ["trivial", "quadratic"])
def test_commutant(family, q, lam):
    inst = build_instance(family, q)
    mod = induced_module(inst, named_character(inst, lam))
    assert mod.stabilizer_agrees()
    assert mod.commutes()
    assert mod.commutant_dimension() == len(mod.rel.W_lambda)
    cons = decompose_series(inst, mod.lam, mod)
    assert sum(m * m for _, m in cons) == len(mod.rel.W_lambda)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_trivial_quadratic_relation_sl2(q):
    inst = build_instance("SL2", q)
    mod = induced_module(inst, trivial_character(inst))
    R = inst.system
    s = R.simple_reflections[0]
    B = mod.intertwiner(s)
    sq = mod.b_coordinates(B @ B)
    assert sq[R.identity()] == q
    assert sq[s] == q - 1
    d = quadratic_data(mod, R.simple[0])
    assert (d.ind, d.ind_direct, d.p, d.eps) == (q, q, q, 1)


def test_sl2_5_quadratic_square():
    inst = build_instance("SL2", 5)
    mod = induced_module(inst, quadratic_character(inst))
    assert mod.rel.delta_lambda == []
    s = next(w for w in mod.rel.W_lambda if w != inst.system.identity())
    B = mod.intertwiner(s)
    sq = mod.b_coordinates(B @ B)
    assert sq[inst.system.identity()] == 5
    assert sq[s] == 0
    assert mod.ind(s) == 5


def test_sp4_quadratic_data():
    inst = build_instance("SP4", 3)
    mod = induced_module(inst, quadratic_character(inst))
    R = inst.system
    assert len(mod.rel.W_lambda) == 8
    got = {}
    for a in mod.rel.delta_lambda:
        d = quadratic_data(mod, a)
        got[a] = d
        assert d.ind == d.ind_direct == 3 ** R.length(R.reflection(a))
        assert d.p == 3
    assert got[(1, -1)].ind == 3
    assert got[(1, 1)].ind == 27


@pytest.mark.parametrize("family,q", INSTANCES)
@pytest.mark.parametrize("lam", ["trivial", "quadratic"])
def test_t_basis_quadratic_relation(family, q, lam):
    inst = build_instance(family, q)
    mod = induced_module(inst, named_character(inst, lam))
    tb = t_basis(mod)
    R = inst.system
    for a, d in tb.quad.items():
        s = R.reflection(a)
        T = tb.ops[s]
        c = tb.coordinates(T @ T)
        assert c[R.identity()] == d.p
        assert c[s] == d.p - 1
        assert all(v == 0 for w, v in c.items() if w not in (R.identity(), s))
    assert rational_structure(tb)


def test_sp4_braid_relation():
    inst = build_instance("SP4", 3)
    mod = induced_module(inst, trivial_character(inst))
    tb = t_basis(mod)
    R = inst.system
    s, t = R.simple_reflections
    Ts, Tt = tb.ops[s], tb.ops[t]
    lhs = Ts @ Tt @ Ts @ Tt
    rhs = Tt @ Ts @ Tt @ Ts
    assert tb.coordinates(lhs) == tb.coordinates(rhs)
    w0 = R.longest()
    c = tb.coordinates(lhs)
    assert c[w0] == 1 and all(v == 0 for w, v in c.items() if w != w0)


def test_t_basis_word_independence():
    inst = build_instance("SP4", 3)
    for lam in (trivial_character(inst), quadratic_character(inst)):
        mod = induced_module(inst, lam)
        a, b = t_basis(mod, 0), t_basis(mod, 1)
        for w in mod.rel.W_lambda:
            assert a.coordinates(b.ops[w]) == {v: int(v == w) for v in mod.rel.W_lambda}


def test_t_basis_multiplicativity_for_lengths():
    # T_v T_w = T_vw whenever lengths add
    inst = build_instance("SP4", 3)
    mod = induced_module(inst, trivial_character(inst))
    tb = t_basis(mod)
    R = inst.system
    for v in R.elements:
        for w in R.elements:
            vw = compose(v, w)
            if R.length(vw) == R.length(v) + R.length(w):
                c = tb.coordinates(tb.ops[v] @ tb.ops[w])
                assert c[vw] == 1
                assert all(x == 0 for u, x in c.items() if u != vw)


@pytest.mark.parametrize("family,q", INSTANCES)
@pytest.mark.parametrize("lam", ["trivial", "quadratic"])
def test_galois_act(family, q, lam):
    inst = build_instance(family, q)
    rep = verify_galois_act(inst, named_character(inst, lam))
    assert rep.agree
    assert rep.fixed_count == rep.predicted_fixed_count
    assert rep.r_sigma_gauss_agrees and rep.t_sigma_ok and rep.eta_identity_ok and rep.labels_ok
    for d in rep.quadratic:
        assert d["Ind"] == d["Ind_direct"]
    json.dumps(rep.to_json(), default=str)


@pytest.mark.parametrize("q,swapped", [(3, True), (5, True), (7, False), (9, False), (11, True), (13, True)])
def test_sl2_quadratic_swap(q, swapped):
    inst = build_instance("SL2", q)
    rep = verify_galois_act(inst, quadratic_character(inst))
    assert len(rep.constituents) == 2
    assert rep.swapped is swapped


def test_trivial_series_fixed():
    for family, q in INSTANCES:
        inst = build_instance(family, q)
        rep = verify_galois_act(inst, trivial_character(inst))
        assert all(rep.sigma_image[r] == r for r in rep.sigma_image)


def test_t_operators_sigma_twist():
    inst = build_instance("SL2", 5)
    mod = induced_module(inst, quadratic_character(inst))
    tb = t_basis(mod)
    s = next(w for w in mod.rel.W_lambda if w != inst.system.identity())
    assert apply_sigma(tb.ops[s].scalar) == -tb.ops[s].scalar
    assert tb.ops[s].scalar * tb.ops[s].scalar == Cyclotomic.rational(1) / 5


def test_verify_rejects_nonquadratic():
    inst = build_instance("SL2", 7)
    with pytest.raises(ValueError):
        verify_galois_act(inst, TorusCharacter(7, (1,)))


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_cuspidal_rows(q):
    inst = build_instance("SL2", q)
    rows = cuspidal_rows(inst)
    degs = sorted(inst.table.degrees[r] for r in rows)
    # two halves of degree (q-1)/2 and (q-1)/2 discrete series of degree q-1
    assert degs.count((q - 1) // 2) == 2
    assert all(d in ((q - 1) // 2, q - 1) for d in degs)
    assert len(rows) == 2 + (q - 1) // 2
    assert degs.count(q - 1) == (q - 1) // 2


# -- generic algebra ------------------------------------------------------------

@pytest.mark.parametrize("kind", TYPES)
def test_generic_g_specialization(kind):
    assert generic_hecke(kind).g_is_group_algebra()


def test_generic_bad_type():
    with pytest.raises(ValueError):
        generic_hecke("G2")


def test_generic_quadratic_relation():
    H = generic_hecke("B2")
    for i, s in enumerate(H.generators):
        prod = H.multiply(s, s)
        u = H.params[i]
        assert prod == {H.elements[0]: u, s: u - 1}


@pytest.mark.parametrize("q", [3, 5, 7])
def test_generic_f_specialization_a1(q):
    inst = build_instance("SL2", q)
    tb = t_basis(induced_module(inst, trivial_character(inst)))
    assert compare_with_t_basis(generic_hecke("A1"), tb)


def test_generic_f_specialization_b2():
    inst = build_instance("SP4", 3)
    tb = t_basis(induced_module(inst, trivial_character(inst)))
    assert compare_with_t_basis(generic_hecke("B2"), tb)


def test_generic_f_specialization_sp4_quadratic():
    # W(lam) is generated by commuting reflections in e1 - e2 and e1 + e2
    inst = build_instance("SP4", 3)
    tb = t_basis(induced_module(inst, quadratic_character(inst)))
    assert compare_with_t_basis(generic_hecke("A1xA1"), tb)


def test_specialize_f_values():
    H = generic_hecke("A1")
    f = H.specialize_f([7])
    s = H.generators[0]
    assert f[(s, s)] == {H.elements[0]: 7, s: 6}


# -- command line ---------------------------------------------------------------

def test_cli_hc(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert hc_main(["verify", "--family", "sl2", "--q", "5", "--lambda", "quadratic",
                    "--json", str(out)]) == 0
    text = capsys.readouterr().out
    assert "agree" in text and "DISAGREE" not in text
    data = json.loads(out.read_text())
    assert data["swapped"] is True
    assert hc_main(["verify", "--family", "sl2", "--q", "4", "--lambda", "trivial"]) == 2


def test_cli_hc_sp4(capsys):
    assert hc_main(["verify", "--family", "sp4", "--q", "3", "--lambda", "quadratic"]) == 0
    assert "Ind=27" in capsys.readouterr().out


def test_cli_hecke(capsys):
    assert hecke_main(["check", "--type", "A1", "--q", "7"]) == 0
    assert hecke_main(["check", "--type", "B2", "--q", "3"]) == 0
    assert hecke_main(["check", "--type", "B2", "--q", "5"]) == 2
    assert "True" in capsys.readouterr().out
