import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from preproj import catalog
from preproj.algebra import ground, matrix_algebra, truncated_poly, z_algebra
from preproj.linalg import matmul, trace
from preproj.quiver import ConditionFViolation, decorated_quiver
from preproj.repvariety import (
    NotInvertible,
    RepresentationError,
    a_trace,
    act,
    conjugate,
    evaluate_relation,
    form_value,
    mat_phi,
    moment_map_via_pairing,
    moment_map_via_transport,
    phi,
    random_group_element,
    random_representation,
    representation_from_matrices,
    verify_moment_map,
    zero_representation,
)
from preproj.suites import moment_cases

F = Fraction
PHI_ALGEBRAS = [ground(), truncated_poly(2), truncated_poly(3), z_algebra(4), matrix_algebra(2, "trace")]


def random_matrix(rng, n, m=None):
    return [[F(rng.randint(-3, 3)) for _ in range(m or n)] for _ in range(n)]


@pytest.mark.parametrize("alg", PHI_ALGEBRAS, ids=lambda a: a.name)
def test_trace_equals_form_of_phi(alg):
    rng = random.Random(alg.dim)
    for _ in range(50):
        endo = random_matrix(rng, alg.dim)
        assert trace(alg.field, endo) == form_value(alg, phi(alg, endo))


def identity(n):
    return [[F(int(i == j)) for j in range(n)] for i in range(n)]


def test_phi_of_identity_on_dual_numbers():
    s = truncated_poly(2)
    # duals of {1, x} are {x, 1}, so the image is 1*x + x*1
    assert phi(s, identity(2)) == (0, 2)
    assert form_value(s, phi(s, identity(2))) == 2


def test_phi_on_ground_is_identity():
    k = ground()
    for c in (-2, 0, 5):
        assert phi(k, [[F(c)]]) == (c,)


def test_phi_of_multiplication_by_x():
    s = truncated_poly(3)
    x_times = [[0, 0, 0], [1, 0, 0], [0, 1, 0]]  # column l is x * e_l
    # x e_l f_l = x^3 for every l
    assert phi(s, x_times) == (0, 0, 0)
    assert trace(s.field, x_times) == 0


@pytest.mark.parametrize("alg", PHI_ALGEBRAS[1:], ids=lambda a: a.name)
@pytest.mark.parametrize("d", [1, 2, 3])
def test_block_phi_preserves_trace(alg, d):
    rng = random.Random(10 * d + alg.dim)
    for _ in range(5):
        m = random_matrix(rng, d * alg.dim)
        assert form_value(alg, a_trace(alg, mat_phi(alg, d, d, m))) == trace(alg.field, m)


def test_zero_representation_has_zero_moment():
    dq = catalog.b_series(2)
    rep = zero_representation(dq, {"1": 2, "2": 1})
    for route in (evaluate_relation, moment_map_via_pairing, moment_map_via_transport):
        assert route(rep).is_zero()


def test_a2_moment_is_commutator_pair():
    p = [[1, 2], [0, 1]]
    q = [[0, 1], [3, -1]]
    rep = representation_from_matrices(catalog.a_linear(2), {"1": 2, "2": 2}, {"a1": p, "a1*": q})
    qp, pq = matmul(rep.dq.field, q, p), matmul(rep.dq.field, p, q)
    mu = evaluate_relation(rep).parts
    assert [[e[0] for e in row] for row in mu["1"]] == qp
    assert [[-e[0] for e in row] for row in mu["2"]] == pq
    assert moment_map_via_transport(rep) == moment_map_via_pairing(rep) == evaluate_relation(rep)


@pytest.mark.parametrize("dq,dims,expected", [
    (catalog.b_series(2), {"1": 1, "2": 1}, 2),
    (catalog.a_linear(2), {"1": 2, "2": 3}, 6),
    (catalog.g2(), {"1": 1, "2": 1}, 3),
])
def test_free_parameters_per_arrow(dq, dims, expected):
    rep = random_representation(dq, dims, seed=0)
    assert {rep.free_parameters(a.id) for a in rep.dq.arrows} == {expected}


def test_identification_arrow_parameters_are_algebra_entries():
    s = truncated_poly(2)
    dq = decorated_quiver({"1": s, "2": s}, [("a", "1", "2", "ident")])
    rep = random_representation(dq, {"1": 2, "2": 3}, seed=0)
    assert rep.free_parameters("a") == 2 * 3 * 2


CASES = [(name, dq, dims) for name, dq, dim_list in moment_cases() for dims in dim_list]


@pytest.mark.parametrize("name,dq,dims", CASES, ids=[f"{n}-{'.'.join(map(str, d.values()))}" for n, _, d in CASES])
def test_three_routes_agree(name, dq, dims):
    for seed in range(5):
        rep = random_representation(dq, dims, seed)
        via_relation = evaluate_relation(rep)
        assert moment_map_via_pairing(rep) == via_relation
        assert moment_map_via_transport(rep) == via_relation


@pytest.mark.parametrize("name,dq,dims", CASES[::2], ids=[f"{n}-{'.'.join(map(str, d.values()))}" for n, _, d in CASES[::2]])
def test_moment_map_is_equivariant(name, dq, dims):
    for seed in range(3):
        rep = random_representation(dq, dims, seed)
        g = random_group_element(dq, dims, seed + 100)
        assert evaluate_relation(act(g, rep)) == conjugate(g, evaluate_relation(rep), rep.dq)


@given(st.integers(0, 10_000))
def test_routes_agree_on_random_seeds(seed):
    dq = catalog.g2()
    rep = random_representation(dq, {"1": 1, "2": 2}, seed)
    assert moment_map_via_pairing(rep) == evaluate_relation(rep) == moment_map_via_transport(rep)


def test_verify_reports_json():
    report = verify_moment_map(catalog.a_linear(2), {"1": 1, "2": 2}, range(4))
    assert report.all_equal and report.first_mismatch is None
    assert '"all_equal": true' in report.to_json()


def test_non_symmetric_form_is_rejected_before_any_representation():
    with pytest.raises(ConditionFViolation):
        decorated_quiver({"1": matrix_algebra(2, "antidiagonal")}, [])


def test_bad_dimension_vector():
    with pytest.raises(RepresentationError):
        random_representation(catalog.a_linear(2), {"1": 1}, seed=0)
    with pytest.raises(RepresentationError):
        random_representation(catalog.a_linear(2), {"1": 1, "2": 0}, seed=0)


def test_singular_group_element():
    dq = catalog.a_linear(2)
    rep = random_representation(dq, {"1": 1, "2": 1}, seed=0)
    with pytest.raises(NotInvertible):
        act({"1": (((F(0),),),), "2": (((F(1),),),)}, rep)
