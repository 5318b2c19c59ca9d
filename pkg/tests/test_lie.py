import random
from itertools import combinations

import pytest
from gmpy2 import mpq

from solvlat.errors import InvalidSpec
from solvlat.lie import (ComplexStructure, Form, aliases, build_omega, c_name, complex_structure,
                         lcb_verify, lck_obstruction, metric_matrix, nijenhuis_check, omega_pairs,
                         omega_power, positive_definite, structure_constants, wedge)


def rand_form(rng, dim, k, nterms=4):
    terms = {}
    for _ in range(nterms):
        key = tuple(sorted(rng.sample(range(dim), k)))
        terms[key] = mpq(rng.randint(-5, 5), rng.randint(1, 4))
    return Form(k, {key: v for key, v in terms.items() if v})


def vec(alg, name):
    return {alg[name]: 1}


def test_brackets_from_dense_oracle():
    alg = structure_constants(3)
    assert alg.bracket(vec(alg, "T"), vec(alg, "A1")) == vec(alg, "A1")
    assert alg.bracket(vec(alg, "T"), vec(alg, "B2")) == {alg["B2"]: -1}
    assert alg.bracket(vec(alg, "B2"), vec(alg, "A3")) == vec(alg, c_name(3, 2, 3))
    assert alg.bracket(vec(alg, "A1"), vec(alg, "A2")) == {}
    assert alg.bracket(vec(alg, "B1"), vec(alg, "B3")) == {}


def test_center():
    alg = structure_constants(3)
    for i in range(1, 4):
        for j in range(1, 4):
            c = alg[c_name(3, i, j)]
            assert all(not alg.bracket_basis(c, x) for x in range(alg.dim))


@pytest.mark.parametrize("d", [1, 3])
def test_jacobi(d):
    assert structure_constants(d).jacobi_failures() == []


def test_even_d_rejected():
    with pytest.raises(InvalidSpec):
        structure_constants(2)


def test_d_of_basis_one_forms():
    alg = structure_constants(3)
    assert alg.d(Form.basis(alg["T"])).is_zero()
    assert alg.d(Form.basis(alg["A2"])) == -1 * Form.basis(alg["T"], alg["A2"])
    for i, j in [(1, 1), (2, 3), (3, 1)]:
        got = alg.d(Form.basis(alg[c_name(3, i, j)]))
        assert got == -1 * Form.basis(alg[f"B{i}"], alg[f"A{j}"])


def test_one_form_rule():
    # d phi(X, Y) = -phi([X, Y])
    alg = structure_constants(3)
    rng = random.Random(1)
    phi = rand_form(rng, alg.dim, 1, 8)
    dphi = alg.d(phi)
    for a, b in combinations(range(alg.dim), 2):
        br = alg.bracket_basis(a, b)
        expected = -alg.evaluate(phi, [br]) if br else 0
        assert alg.evaluate(dphi, [{a: 1}, {b: 1}]) == expected


def test_derivation_matches_koszul_oracle():
    alg = structure_constants(3)
    rng = random.Random(2)
    for k in (1, 2, 3):
        for _ in range(8):
            f = rand_form(rng, alg.dim, k)
            assert alg.d(f) == alg.koszul_d(f)


def test_d_squared_zero_200_forms():
    rng = random.Random(3)
    alg = structure_constants(3)
    for n in range(200):
        f = rand_form(rng, alg.dim, 1 + n % 3)
        assert alg.d(alg.d(f)).is_zero()


def test_leibniz():
    rng = random.Random(4)
    alg = structure_constants(3)
    for _ in range(60):
        p, q = rng.randint(1, 3), rng.randint(1, 3)
        f, g = rand_form(rng, alg.dim, p, 3), rand_form(rng, alg.dim, q, 3)
        lhs = alg.d(wedge(f, g))
        rhs = alg.d(f).wedge(g) + ((-1) ** p) * f.wedge(alg.d(g))
        assert lhs == rhs


def test_graded_commutativity_and_associativity():
    rng = random.Random(5)
    for _ in range(100):
        p, q, r = (rng.randint(1, 3) for _ in range(3))
        f, g, h = (rand_form(rng, 12, k, 3) for k in (p, q, r))
        assert f.wedge(g) == ((-1) ** (p * q)) * g.wedge(f)
        assert (f ^ g) ^ h == f ^ (g ^ h)
        phi = rand_form(rng, 12, 1, 3)
        assert phi.wedge(phi).is_zero()


@pytest.mark.parametrize("d", [1, 3, 5])
def test_J_integrable(d):
    alg = structure_constants(d)
    J = complex_structure(alg, d)
    assert J.squares_to_minus_one()
    assert nijenhuis_check(alg, J).passed


def test_bad_J_fails_with_witness():
    alg = structure_constants(1)
    n = alg.dim
    M = [[mpq(0)] * n for _ in range(n)]
    for x, y in (("A1", "B1"), ("T", "C11")):
        M[alg[y]][alg[x]], M[alg[x]][alg[y]] = mpq(1), mpq(-1)
    cert = nijenhuis_check(alg, ComplexStructure(M))
    assert not cert.passed
    assert ["T", "A1"] in [w["pair"] for w in cert.witnesses["nonzero"]]


def test_aliases_d3():
    al = aliases(3)
    assert (al["W1"], al["W2"]) == ("A1", "T")
    assert (al["X(0,1)"], al["Y(0,1)"]) == ("A3", "A2")
    assert (al["X(2,0)"], al["Y(2,0)"]) == (c_name(3, 2, 1), "B2")
    assert (al["X(1,1)"], al["Y(1,1)"]) == (c_name(3, 1, 3), c_name(3, 1, 2))
    assert len(al) == 16


def test_omega_d1():
    alg = structure_constants(1)
    e = alg.index
    omega = build_omega(alg, 1)
    assert omega == Form.basis(e["A1"], e["T"]) + Form.basis(e["C11"], e["B1"])


@pytest.mark.parametrize("d", [1, 3])
def test_omega_is_hermitian_and_positive(d):
    alg = structure_constants(d)
    J = complex_structure(alg, d)
    omega = build_omega(alg, d)
    for x in range(alg.dim):
        assert alg.evaluate(omega, [{x: 1}, J.apply({x: 1})]) == 1
    for x, y in combinations(range(alg.dim), 2):
        X, Y = {x: 1}, {y: 1}
        assert alg.evaluate(omega, [J.apply(X), J.apply(Y)]) == alg.evaluate(omega, [X, Y])
    G = metric_matrix(alg, omega, J)
    assert all(G[i][j] == (i == j) for i in range(alg.dim) for j in range(alg.dim))
    assert positive_definite(G)


def test_omega_top_power_is_volume():
    alg = structure_constants(3)
    pairs = omega_pairs(alg, 3)
    top = omega_power(pairs, len(pairs))
    assert len(pairs) == 8 and list(top.terms) == [tuple(range(16))]
    assert top.terms[tuple(range(16))] != 0


def test_d_omega_d1():
    alg = structure_constants(1)
    e = alg.index
    d_omega = alg.d(build_omega(alg, 1))
    assert d_omega == Form.basis(e["T"], e["C11"], e["B1"])
    res = lcb_verify(1)
    assert res["certificate"].passed
    assert res["theta"] == Form.basis(e["T"])


@pytest.mark.parametrize("d", [1, 3])
def test_lcb_stated_coefficient_residual_zero(d):
    res = lcb_verify(d)
    m = (d - 1) // 2
    assert res["theta_expected"] == (2 * m + 1) * Form.basis(0)
    assert res["residual"].is_zero()


@pytest.mark.parametrize("d", [1, 3])
def test_lee_form_solved_and_closed(d):
    alg = structure_constants(d)
    res = lcb_verify(d)
    assert res["theta"] == Form.basis(alg["T"])
    assert alg.d(res["theta"]).is_zero() and alg.d(res["theta_expected"]).is_zero()
    assert res["certificate"].witnesses["positive_definite"]


def test_displayed_d_omega_reported():
    w = lcb_verify(1)["certificate"].witnesses
    assert not w["d_omega_matches_display"]
    assert w["d_omega_minus_display"]["terms"]


@pytest.mark.parametrize("d", [3, 5])
def test_lck_obstruction(d):
    cert = lck_obstruction(d)
    assert cert.passed
    w = cert.witnesses
    assert w["witness_triple"] == ["T", c_name(d, 1, 3), c_name(d, 1, 2)]
    assert w["closed_one_forms_dim"] == 1 and w["closed_one_forms_span_T"]
    assert (w["b1"], w["b2"]) == (1, 0)


def test_every_two_form_vanishes_on_triple():
    alg = structure_constants(3)
    rng = random.Random(6)
    X = [{alg[n]: 1} for n in ("T", c_name(3, 1, 3), c_name(3, 1, 2))]
    for _ in range(50):
        eta = rand_form(rng, alg.dim, 2, 10)
        assert alg.evaluate(alg.d(eta), X) == 0


def test_lck_d1_not_applicable():
    assert lck_obstruction(1).status == "not_applicable"


def test_lck_fails_if_kaehler_not_excluded():
    assert not lck_obstruction(3, b2=1, b1=1).passed


def test_closed_one_forms_d3():
    alg = structure_constants(3)
    closed = alg.closed_one_forms()
    assert len(closed) == 1 and [i for i, x in enumerate(closed[0]) if x] == [alg["T"]]


def test_form_json():
    alg = structure_constants(3)
    f = mpq(2, 3) * Form.basis(alg["T"], alg["A1"], alg[c_name(3, 1, 3)])
    doc = alg.form_to_json(f)
    assert doc == {"degree": 3, "terms": [{"labels": ["T", "A1", "C13"], "coeff": "2/3"}]}
