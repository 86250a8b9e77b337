from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from qloop import Q, evaluation_module, tensor, trivial_module, type_a, type_d, verify_relations
from qloop.algebra import E, F, KKac, KMinusMode, KPlusMode, XMinus, XPlus, weight_shift
from qloop.repmod import (
    DerivedDrinfeld,
    DrinfeldPolynomialSet,
    HighestWeightError,
    ModuleRealization,
    TableDrinfeld,
    _series_log,
    drinfeld_polynomials,
    h_operators,
    highest_weight_line,
    highest_weight_vectors,
    k_series,
    module_from_spec,
    series_exp,
)
from qloop.root_data import Weight

CASES = [(n, k) for n in (1, 2, 3) for k in range(1, n + 1)]


@pytest.mark.parametrize("n,k", CASES)
def test_dimension_and_weights(n, k):
    M = evaluation_module(type_a(n), k, Fraction(1), 2, check=False)
    assert M.dim == comb(n + 1, k)
    assert M.weights[0] == Weight.fundamental(M.diagram, k)
    assert len(set(w.key() for w in M.weights)) == M.dim  # minuscule


@pytest.mark.parametrize("n,k", CASES)
def test_generators_respect_weight_grading(n, k):
    M = evaluation_module(type_a(n), k, Fraction(3), 2, check=False)
    d = M.diagram
    gens = [g for i in (0,) + d.vertices for g in (E(i), F(i))]
    gens += [XPlus(i, r) for i in d.vertices for r in (-2, 1)] + [XMinus(i, r) for i in d.vertices for r in (-1, 2)]
    for g in gens:
        shift = weight_shift(g, d).to_weight()
        for row, col, _ in M.act(g).entries():
            assert M.weights[row] == M.weights[col] + shift, g


@pytest.mark.parametrize("n,k", CASES)
@pytest.mark.parametrize("zeta", [Fraction(2), Fraction(3, 2)])
def test_bridge_matches_closed_form(n, k, zeta):
    """Drinfeld modes recovered from the Chevalley action equal the closed formulas."""
    M = evaluation_module(type_a(n), k, Fraction(5, 2), zeta, check=False)
    bridge = DerivedDrinfeld(M)
    for i in M.diagram.vertices:
        for r in range(-4, 5):
            assert bridge(XPlus(i, r)) == M.act(XPlus(i, r))
            assert bridge(XMinus(i, r)) == M.act(XMinus(i, r))
        for r in range(1, 5):
            assert bridge(KPlusMode(i, r)) == M.act(KPlusMode(i, r))
            assert bridge(KMinusMode(i, -r)) == M.act(KMinusMode(i, -r))


@pytest.mark.parametrize("alpha", [Fraction(1), Fraction(3), Fraction(-2, 7)])
@pytest.mark.parametrize("zeta", [Fraction(2), Fraction(3, 2)])
def test_highest_weight_eigenvalue_series(alpha, zeta):
    """On the top vector of V(omega_1)_alpha the k+(z) eigenvalue is
    q (z - q^-2 a)/(z - a) with a = alpha/zeta, i.e. q, then q a^s (1 - q^-2)."""
    M = evaluation_module(type_a(1), 1, alpha, zeta, check=False)
    a, q = alpha / zeta, zeta
    plus, _ = k_series(M, 1, 5)
    expected = [q] + [q * a ** s * (1 - q ** -2) for s in range(1, 6)]
    assert [m[0, 0] for m in plus] == expected


def test_off_node_eigenvalue_is_trivial():
    M = evaluation_module(type_a(3), 2, Fraction(3), 2, check=False)
    for j in (1, 3):
        plus, minus = k_series(M, j, 4)
        assert [m[0, 0] for m in plus] == [1, 0, 0, 0, 0]


def test_k_series_zero_mode_is_k():
    M = evaluation_module(type_a(2), 1, Fraction(3), 2, check=False)
    plus, minus = k_series(M, 2, 2)
    assert plus[0] == M.act(KKac(2)) and minus[0] == M.act(KKac(2, -1))


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.sampled_from([Fraction(2), Fraction(-3, 2), Fraction(1, 3)]))
def test_log_exp_roundtrip(n, alpha):
    M = evaluation_module(type_a(n), 1, alpha, 2, check=False)
    plus, _ = k_series(M, 1, 5)
    from qloop.linalg import inverse

    g = [inverse(plus[0]) @ c for c in plus]
    assert series_exp(_series_log(g, M.dim), M.dim) == g


def test_h_operators_commute_and_act_diagonally():
    M = evaluation_module(type_a(2), 1, Fraction(3), 2, check=False)
    hs = h_operators(M, 1, 3) + h_operators(M, 2, 3, sign=-1)
    for a in hs:
        assert a.is_diagonal()
        for b in hs:
            assert a @ b == b @ a


def test_trivial_module():
    T = trivial_module("A2", 2)
    assert T.dim == 1
    assert verify_relations(T, 2).ok
    assert drinfeld_polynomials(T) == DrinfeldPolynomialSet({1: [1], 2: [1]})


def test_tensor_with_trivial_is_identity():
    M = evaluation_module(type_a(2), 1, Fraction(3), 2, check=False)
    T = trivial_module(M.diagram, 2)
    for N in (tensor(M, T), tensor(T, M)):
        for i in (0, 1, 2):
            for g in (E(i), F(i), KKac(i)):
                assert N.act(g) == M.act(g)


def test_tensor_satisfies_relations_via_bridge():
    V1 = evaluation_module(type_a(1), 1, Fraction(1), 2, check=False)
    V2 = evaluation_module(type_a(1), 1, Fraction(3), 2, check=False)
    for kind in ("circ", "bullet"):
        assert verify_relations(tensor(V1, V2, kind), 2).ok


def test_tensor_rejects_mismatch():
    V = evaluation_module(type_a(1), 1, Fraction(1), 2, check=False)
    with pytest.raises(ValueError):
        tensor(V, evaluation_module(type_a(1), 1, Fraction(1), 3, check=False))
    with pytest.raises(ValueError):
        tensor(V, evaluation_module(type_a(2), 1, Fraction(1), 2, check=False))
    with pytest.raises(ValueError):
        tensor(V, V, "other")


def test_evaluation_module_input_errors():
    with pytest.raises(ValueError):
        evaluation_module(type_d(4), 1, 1)
    with pytest.raises(ValueError):
        evaluation_module(type_a(2), 3, 1)
    with pytest.raises(ValueError):
        evaluation_module(type_a(2), 1, 0)


def test_highest_weight_vectors_of_tensor():
    V1 = evaluation_module(type_a(1), 1, Fraction(3), 2, check=False)
    V2 = evaluation_module(type_a(1), 1, Fraction(1), 2, check=False)
    hws = highest_weight_vectors(tensor(V1, V2))
    assert sorted(h.weight.key() for h in hws) == [(0,), (2,)]
    assert highest_weight_line(tensor(V1, V2)).vector == {0: 1}


def test_critical_tensor_has_a_second_drinfeld_highest_line():
    # V_4 (x) V_1 at zeta = 2 has a proper submodule whose top vector is
    # also killed by every x+ mode
    V4 = evaluation_module(type_a(1), 1, Fraction(4), 2, check=False)
    V1 = evaluation_module(type_a(1), 1, Fraction(1), 2, check=False)
    flagged = [h for h in highest_weight_vectors(tensor(V4, V1)) if h.drinfeld_highest]
    assert [h.weight.key() for h in flagged] == [(2,), (0,)]
    with pytest.raises(HighestWeightError):
        highest_weight_line(tensor(V4, V1))
    assert [h.drinfeld_highest for h in highest_weight_vectors(tensor(V1, V4))] == [True, False]


@pytest.mark.parametrize("n,k", CASES)
def test_drinfeld_polynomial_generic_field(n, k):
    M = evaluation_module(type_a(n), k, Q ** 2, Q, check=False)
    P = drinfeld_polynomials(M)
    assert P == DrinfeldPolynomialSet.from_roots(M.diagram, {k: [Q]})


def test_drinfeld_polynomials_json():
    M = evaluation_module(type_a(2), 2, Fraction(3), 2, check=False)
    data = drinfeld_polynomials(M).to_json()
    assert data == {
        "1": {"polynomial": "1", "coefficients": ["1/1"]},
        "2": {"polynomial": "z - 3/2", "coefficients": ["-3/2", "1/1"]},
    }


def test_drinfeld_product_of_three():
    d = type_a(2)
    mods = [evaluation_module(d, k, Fraction(a), 2, check=False) for k, a in ((1, 1), (2, 5), (1, 7))]
    N = tensor(tensor(mods[0], mods[1]), mods[2])
    P = DrinfeldPolynomialSet.from_roots(d, {1: [Fraction(1, 2), Fraction(7, 2)], 2: [Fraction(5, 2)]})
    assert drinfeld_polynomials(N) == P


def test_table_drinfeld_and_mode_bound():
    V = evaluation_module(type_a(1), 1, Fraction(1), 2, check=False)
    table = {g: V.act(g) for r in range(-2, 3) for g in (XPlus(1, r), XMinus(1, r))}
    table.update({KPlusMode(1, r): V.act(KPlusMode(1, r)) for r in range(1, 3)})
    table.update({KMinusMode(1, -r): V.act(KMinusMode(1, -r)) for r in range(1, 3)})
    M = ModuleRealization(V.diagram, 2, V.labels, V.weights, V._km, drinfeld=TableDrinfeld(table), mode_bound=1)
    rep = verify_relations(M, 1)
    assert rep.ok


def test_module_from_spec():
    M = module_from_spec({"diagram": "A1", "zeta": "2/1", "factors": [{"node": 1, "alpha": "1/1", "tau": 2}, {"node": 1}]})
    assert M.dim == 4
    assert [p.shift for p in M.spectral_params] == [2, 0]
    data = M.to_json()
    assert data["dimension"] == 4 and data["zeta"] == "2/1"
