import random

import pytest
from gmpy2 import mpq

from helpers import rand_rational_matrix
from solvlat import group
from solvlat.certify import (algebraic_type, check_conj_relations, check_density_witness,
                             discreteness_certificate, kronecker_dense, toroidal_type)
from solvlat.errors import ParseError
from solvlat.group import GroupElem
from solvlat.jsonio import decode_presentation, encode_presentation
from solvlat.lattice import BuildSpec, LatticePresentation, build
from solvlat.linalg import inverse, matvec, transpose
from solvlat.qfield import QuadNum

R2 = QuadNum(0, 1, 2)


def q(r, s=0, D=5):
    return QuadNum(r, s, D)


def test_relations_inoue():
    cert = check_conj_relations(build(BuildSpec(1, 3)))
    assert cert.passed and cert.status == "passed"


def test_relations_d3_with_P():
    P = [[(k + l_) % 3 - 1 for l_ in range(9)] for k in range(6)]
    assert check_conj_relations(build(BuildSpec(3, 3, P=P))).passed


def _perturb(pres, k, i, j):
    g = list(pres.g)
    C = [list(r) for r in g[k].C]
    C[i][j] = C[i][j] + 1
    g[k] = GroupElem(g[k].alpha, g[k].a, g[k].b, tuple(tuple(r) for r in C))
    return LatticePresentation(pres.d, pres.beta, pres.alpha, pres.g0, tuple(g), pres.h,
                               pres.N, pres.P, pres.index_of_lambdaZ_in_D)


def test_perturbed_relation_fails_with_witness():
    pres = build(BuildSpec(3, 3))
    cert = check_conj_relations(_perturb(pres, 2, 1, 0))
    assert not cert.passed
    ks = {f["k"] for f in cert.witnesses["failures"] if f["relation"] == "conj"}
    # C is fixed by g0, so the change cancels in row k exactly when N[k][2] = [k == 2]
    assert ks == {k + 1 for k in range(6) if pres.N[k][2] != (k == 2)} == {4}


def test_g0_fixes_center():
    pres = build(BuildSpec(3, 3))
    for h in pres.h:
        assert group.conjugate(pres.g0, h) == h


def test_discreteness_inoue():
    cert = discreteness_certificate(build(BuildSpec(1, 3)))
    assert cert.passed
    w = cert.witnesses
    assert (w["V_rank"], w["lambdaZ_rank_z"], w["lambdaZ_dim_span"]) == (2, 1, 1)


def test_discreteness_duplicate_generator():
    pres = build(BuildSpec(1, 3))
    bad = LatticePresentation(1, 3, pres.alpha, pres.g0, (pres.g[0], pres.g[0]), pres.h,
                              pres.N, pres.P, 1)
    cert = discreteness_certificate(bad)
    assert not cert.passed and "a" in cert.witnesses["failed_parts"]


@pytest.mark.parametrize("spec", [BuildSpec(1, 4), BuildSpec(3, 3, D_choice=5),
                                  BuildSpec(3, 5, L=[[1, 2, 0], [0, 1, 0], [1, 0, 1]])])
def test_discreteness_for_valid_specs(spec):
    assert discreteness_certificate(build(spec)).passed


def test_density_one_and_sqrt2():
    assert kronecker_dense([[QuadNum(1, 0, 2)], [R2]]).dense


def test_density_witness_example():
    o, z = QuadNum(1, 0, 2), QuadNum(0, 0, 2)
    gens = [[o, z], [z, o], [R2, R2]]
    v = kronecker_dense(gens)
    assert not v.dense
    assert v.witness["m"] == [1, -1, 0]
    assert v.witness["w"] == [1, -1]
    assert check_density_witness(gens, v)


def _default_first_columns(D=5):
    s = q(0, 1, D)
    o, z = q(1, 0, D), q(0, 0, D)
    rows = [[o, z, z, s, z, z, z, z, z],
            [z, o, z, z, s, z, z, z, z],
            [z, z, z, z, z, z, s, z, z]]
    return transpose(rows)


def test_default_d3_first_columns_not_dense():
    v = kronecker_dense(_default_first_columns())
    assert not v.dense and check_density_witness(_default_first_columns(), v)


def _base_changed_first_columns(l11, l12, l13):
    s, z = q(0, 1), q(0)
    rows = [[l11, z, l12, s * l11, z, s * l12, z, z, s * l13],
            [z, l11, -l13, z, s * l11, s * l13, z, s * l12, z],
            [-l13, -l12, z, s * l13, s * l12, z, s * l11, z, z]]
    return transpose(rows)


@pytest.mark.parametrize("l", [(q(1), q(0), q(1)), (q(1), q(0, 1), q(2, 1)),
                               (q(1, 1), q(2), q(0, 1))])
def test_base_changed_columns_obstructed_inside_the_field(l):
    # nine generators whose coordinates live in a 2-dim Q-space per axis always
    # admit an integer relation, so density needs l outside Q(sqrt 5)
    gens = _base_changed_first_columns(*l)
    v = kronecker_dense(gens)
    assert not v.dense and check_density_witness(gens, v)


def test_standard_lattice_not_dense():
    for r in (1, 2, 3):
        gens = [[mpq(int(i == j)) for i in range(r)] for j in range(r)]
        v = kronecker_dense(gens)
        assert not v.dense and check_density_witness(gens, v)


def test_empty_and_spanning_defect():
    assert not kronecker_dense([], 2).dense
    gens = [[q(1), q(0, 1)], [q(2), q(0, 2)]]
    v = kronecker_dense(gens)
    assert v.witness["type"] == "spanning_defect" and check_density_witness(gens, v)


def test_direct_sum():
    a = [[QuadNum(1, 0, 2)], [R2]]
    zero = QuadNum(0, 0, 2)
    both = [[x[0], zero] for x in a] + [[zero, x[0]] for x in a]
    assert kronecker_dense(both).dense
    half = [[x[0], zero] for x in a] + [[zero, QuadNum(1, 0, 2)]]
    assert not kronecker_dense(half).dense


def _rand_gens(rng, r, k):
    return [[q(rng.randint(-3, 3), rng.randint(-2, 2) * rng.randint(0, 1)) for _ in range(r)]
            for _ in range(k)]


def _rand_unimodular(rng, k):
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(3 * k):
        i, j = rng.sample(range(k), 2)
        c = rng.randint(-2, 2)
        U[i] = [x + c * y for x, y in zip(U[i], U[j])]
    if rng.random() < 0.5:
        U[0], U[1] = U[1], U[0]
    return U


def test_unimodular_invariance_100_cases():
    rng = random.Random(2024)
    dense_seen = 0
    for _ in range(100):
        r = rng.choice([1, 2])
        k = rng.randint(r + 1, 2 * r + 1)
        gens = _rand_gens(rng, r, k)
        v = kronecker_dense(gens, r)
        dense_seen += v.dense
        U = _rand_unimodular(rng, k)
        moved = [[sum((U[i][t] * gens[t][c] for t in range(k)), q(0)) for c in range(r)]
                 for i in range(k)]
        assert kronecker_dense(moved, r).dense == v.dense
        A = rand_rational_matrix(rng, r)
        mapped = [matvec(A, g) for g in gens]
        assert kronecker_dense(mapped, r).dense == v.dense
        if not v.dense:
            assert check_density_witness(gens, v)
    assert 0 < dense_seen < 100


def test_default_d3_not_toroidal():
    cert = toroidal_type(build(BuildSpec(3, 3)))
    assert not cert.passed and cert.kind == "toroidal (first-column criterion)"


def test_d1_never_toroidal():
    for spec in (BuildSpec(1, 3), BuildSpec(1, 5, D_choice=7)):
        assert not toroidal_type(build(spec)).passed


def test_rational_L_first_columns_obstructed_along_l():
    # the functional K^-T l / sqrt(delta) takes rational values on every first column
    rng = random.Random(5)
    for _ in range(6):
        K, L = rand_rational_matrix(rng, 3), rand_rational_matrix(rng, 3)
        pres = build(BuildSpec(3, 3, K=K, L=L))
        cert = toroidal_type(pres)
        assert not cert.passed
        w = cert.witnesses["density"]["w"]
        expected = matvec(transpose(inverse(K)), L[0])
        ratio = [x / y for x, y in zip(w, expected) if y]
        assert all(x == ratio[0] for x in ratio) and ratio[0].is_rational() is False


def test_algebraic_type():
    assert algebraic_type(build(BuildSpec(3, 3, L=[[1, 0, 1], [0, 1, 0], [0, 0, 1]]))).passed
    pres = build(BuildSpec(1, 3))
    h = group.central([[QuadNum(0, 1, 2)]])
    odd = LatticePresentation(1, 3, pres.alpha, pres.g0, pres.g, (h,), pres.N, pres.P, 1)
    cert = algebraic_type(odd)
    assert not cert.passed and cert.witnesses["non_field_entries"]


def test_non_numeric_entry_rejected_at_parse():
    doc = encode_presentation(build(BuildSpec(1, 3)))
    doc["h"][0]["C"][0][0] = {"r": "pi", "s": "0"}
    with pytest.raises(ParseError):
        decode_presentation(doc)


def test_failed_certificate_requires_witness():
    from solvlat.certify import Certificate
    with pytest.raises(ValueError):
        Certificate("x", False, {})
