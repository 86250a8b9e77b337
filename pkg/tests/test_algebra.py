from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qloop import evaluation_module, tensor, type_a, verify_relations
from qloop.algebra import (
    AlgebraElement,
    E,
    F,
    H,
    KKac,
    KMinusMode,
    KPlusMode,
    TensorExpression,
    XMinus,
    XPlus,
    act_element,
    act_tensor,
    coproduct,
    tau,
    tau_tensor,
    weight_shift,
)
from qloop.linalg import SparseMatrix
from qloop.repmod import with_overrides
from qloop.root_data import highest_root
from qloop.scalar import Q

A1 = type_a(1)
A2 = type_a(2)
GENS_A1 = [E(0), F(0), E(1), F(1), KKac(0), KKac(1), KKac(0, -1), KKac(1, -1)]


def test_coproduct_formulas():
    assert coproduct(E(1)) == TensorExpression({((E(1),), ()): 1, ((KKac(1),), (E(1),)): 1})
    assert coproduct(F(1)) == TensorExpression({((F(1),), (KKac(1, -1),)): 1, ((), (F(1),)): 1})
    assert coproduct(KKac(2)) == TensorExpression({((KKac(2),), (KKac(2),)): 1})
    assert coproduct(E(1), "bullet") == coproduct(E(1)).flip()


def test_coproduct_rejects_drinfeld_generators():
    with pytest.raises(ValueError):
        coproduct(XPlus(1, 0))


def test_tau_on_symbols():
    assert tau(E(1)) == F(1)
    assert tau(F(0)) == E(0)
    assert tau(KKac(1)) == KKac(1, -1)
    assert tau(XPlus(1, 2)) == XMinus(1, -2)
    assert tau(KPlusMode(1, 3)) == KMinusMode(1, -3)
    assert tau(H(1, 2)) == H(1, -2)


def test_tau_reverses_and_conjugates():
    x = AlgebraElement.word(E(1), F(2), c=Q)
    assert tau(x) == AlgebraElement.word(E(2), F(1), c=1 / Q)


def test_tau_intertwines_coproducts_symbolically():
    for g in GENS_A1:
        assert tau_tensor(coproduct(tau(g))) == coproduct(g, "bullet")


words = st.lists(st.sampled_from(GENS_A1), min_size=1, max_size=4)


@given(words, st.sampled_from([Fraction(1), Fraction(-2, 3)]))
def test_tau_is_involution(w, c):
    x = AlgebraElement.word(*w, c=c * Q)
    assert tau(tau(x)) == x


@settings(max_examples=25, deadline=None)
@given(words)
def test_coproduct_is_multiplicative_on_operators(w):
    V1 = evaluation_module(A1, 1, Fraction(1), 2, check=False)
    V2 = evaluation_module(A1, 1, Fraction(3), 2, check=False)
    T = tensor(V1, V2)
    x = AlgebraElement.word(*w)
    assert act_tensor(V1, V2, coproduct(x)) == act_element(T, x)


@settings(max_examples=25, deadline=None)
@given(words)
def test_tau_identity_on_words(w):
    V1 = evaluation_module(A1, 1, Fraction(1), 2, check=False)
    V2 = evaluation_module(A1, 1, Fraction(5, 2), 2, check=False)
    x = AlgebraElement.word(*w)
    assert act_tensor(V1, V2, tau_tensor(coproduct(tau(x)))) == act_tensor(V1, V2, coproduct(x, "bullet"))


def test_weight_shift_affine_node():
    assert weight_shift(E(0), A2) == -highest_root(A2)
    assert weight_shift(F(1), A2).key() == (-1, 0)
    assert weight_shift(KKac(1), A2).key() == (0, 0)


# ----------------------------------------------------------- relation checker


def test_report_structure():
    M = evaluation_module(A2, 1, Fraction(1), 2, check=False)
    rep = verify_relations(M, mode_bound=1)
    assert rep.ok
    data = rep.to_json()
    assert data["ok"] and data["checked"] == len(rep.results) and data["results"] == []
    assert len(rep.to_json(full=True)["results"]) == data["checked"]
    fams = rep.families()
    for fam in ("k-commute", "k-x-adjoint", "k-x-series", "x-x-series", "x+x-", "serre", "km-serre", "km-cartan"):
        assert fams[fam]["pass"] > 0, fam


def test_mode_bound_zero_is_accepted():
    M = evaluation_module(A1, 1, Fraction(1), 2, check=False)
    assert verify_relations(M, mode_bound=0).ok


def test_report_is_deterministic():
    M = evaluation_module(A2, 2, Fraction(3), 2, check=False)
    a = verify_relations(M, 1).to_json(full=True)
    b = verify_relations(evaluation_module(A2, 2, Fraction(3), 2, check=False), 1).to_json(full=True)
    assert a == b


def test_drinfeld_only_check():
    M = evaluation_module(A1, 1, Fraction(1), 2, check=False)
    rep = verify_relations(M, 1, kac_moody=False)
    assert not any(r.relation_id.startswith("km-") for r in rep.results)


@pytest.mark.parametrize("gen", [XPlus(1, 0), XMinus(1, -1), KPlusMode(1, 1)], ids=repr)
def test_perturbation_is_caught(gen):
    M = evaluation_module(A1, 1, Fraction(3), 2)
    m = M.act(gen)
    bad = with_overrides(M, {gen: m + SparseMatrix(2, 2, {1: {0: Fraction(1, 7)}})})
    rep = verify_relations(bad, 2, kac_moody=False)
    assert not rep.ok
    f = rep.failures[0]
    assert f.witness["defect"]


def test_generic_field_module_passes():
    M = evaluation_module(A1, 1, Q, Q, check=False)
    assert verify_relations(M, 1).ok
