import random

import pytest
from hypothesis import given, strategies as st

from preproj import catalog
from preproj.algebra import ground, sum_of_ground, truncated_poly
from preproj.linalg import RowSpace
from preproj.quiver import decorated_quiver, double
from preproj.tensor import (
    ActionMismatch,
    bimodule_tensor_basis,
    free_bimodule,
    graded_piece,
    multiplication_matrices,
    multiply,
    path_element,
    regular_bimodule,
)


def count_paths(dd, n):
    """Brute-force enumeration of arrow sequences of length n."""
    counts = {}

    def walk(start, at, left):
        if left == 0:
            counts[(start, at)] = counts.get((start, at), 0) + 1
            return
        for a in dd.out_arrows(at):
            walk(start, a.target, left - 1)

    for v in dd.vertices:
        walk(v, v, n)
    return counts


CONSTANT_K = [catalog.a_linear(3), catalog.d_series(4), catalog.star(3), catalog.jordan(), catalog.a_centered(3)[0]]


@pytest.mark.parametrize("dq", CONSTANT_K, ids=[d.name for d in CONSTANT_K])
@pytest.mark.parametrize("n", range(7))
def test_constant_k_path_counts(dq, n):
    dd = double(dq)
    piece = graded_piece(dq, n)
    expected = count_paths(dd, n)
    idx = {v: i for i, v in enumerate(dd.vertices)}
    got = {(s, t): piece.dims[idx[s]][idx[t]] for s in dd.vertices for t in dd.vertices
           if piece.dims[idx[s]][idx[t]]}
    assert got == expected


def test_b2_degree_zero_and_one():
    assert graded_piece(catalog.b_series(2), 0).dims == [[1, 0], [0, 2]]
    assert graded_piece(catalog.b_series(2), 1).dims == [[0, 2], [2, 0]]


DECORATED = [catalog.b_series(3), catalog.c_series(3), catalog.g2(), catalog.f4(), catalog.matrix_pair(2)]


@pytest.mark.parametrize("dq", DECORATED, ids=[d.name for d in DECORATED])
def test_degree_one_is_the_sum_of_bimodules(dq):
    dd = double(dq)
    assert graded_piece(dq, 1).total == sum(dd.bimodule_dim(a) for a in dd.arrows)


@pytest.mark.parametrize("dq", DECORATED, ids=[d.name for d in DECORATED])
@pytest.mark.parametrize("n", range(5))
def test_bigrading_refines_dimensions(dq, n):
    piece = graded_piece(dq, n)
    idx = {v: i for i, v in enumerate(piece.vertices)}
    for (s, t), by_x in piece.bidims.items():
        assert sum(by_x.values()) == piece.dims[idx[s]][idx[t]]


@pytest.mark.parametrize("left,right,dim", [
    (regular_bimodule(truncated_poly(2)), regular_bimodule(truncated_poly(2)), 2),
    (free_bimodule(truncated_poly(2), ground()), free_bimodule(ground(), truncated_poly(2)), 4),
    (regular_bimodule(sum_of_ground(2)), regular_bimodule(sum_of_ground(2)), 2),
    (free_bimodule(ground(), truncated_poly(3)), free_bimodule(truncated_poly(3), ground()), 3),
])
def test_bimodule_tensor_dimensions(left, right, dim):
    assert bimodule_tensor_basis(left, right).dim == dim


def test_bimodule_tensor_needs_matching_middle():
    with pytest.raises(ActionMismatch):
        bimodule_tensor_basis(regular_bimodule(truncated_poly(2)), regular_bimodule(truncated_poly(3)))


def test_left_unit_action_spans_degree_one():
    dq = catalog.b_series(2)
    t0, t1 = graded_piece(dq, 0), graded_piece(dq, 1)
    products = multiplication_matrices(dq, t0, t1)
    space = RowSpace(dq.field, products.values())
    assert space.rank == t1.total


def test_b2_one_tensor_x_is_nonzero():
    dq = catalog.b_series(2)
    # (1 (x) 1) along a1* followed by (1 (x) x) along a1
    dd = double(dq)
    u = path_element(dq, "2", ["a1*"], [(1, 0), (1,)])
    w = path_element(dq, "1", ["a1"], [(1,), (0, 1)])
    prod = multiply(dd, u, w)
    assert prod and all(c == 1 for c in prod.values())


def test_mismatched_middle_vertex_is_zero():
    dq = catalog.b_series(2)
    dd = double(dq)
    u = path_element(dq, "1", ["a1"], [(1,), (1, 0)])
    assert multiply(dd, u, u) == {}


def random_element(dq, piece, rng):
    return {w: dq.field(rng.randint(-2, 2)) for w in rng.sample(piece.words, min(4, piece.total))}


@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 10_000))
def test_multiplication_associative(a, b, c, seed):
    dq = catalog.g2()
    dd = double(dq)
    rng = random.Random(seed)
    x, y, z = (random_element(dd, graded_piece(dq, d), rng) for d in (a, b, c))
    assert multiply(dd, multiply(dd, x, y), z) == multiply(dd, x, multiply(dd, y, z))


def test_identification_arrow_adds_no_slot():
    s = truncated_poly(2)
    dq = decorated_quiver({"1": s, "2": s}, [("a", "1", "2", "ident")])
    assert graded_piece(dq, 1).total == 4
    assert graded_piece(dq, 2).total == 4
