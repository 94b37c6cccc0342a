from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from preproj import catalog
from preproj.algebra import ground, sum_of_ground, truncated_poly
from preproj.preprojective import hilbert_series
from preproj.quiver import (
    ArrowKind,
    Automorphism,
    ConditionFViolation,
    NotAnAutomorphism,
    QuiverError,
    automorphisms,
    cartan_data,
    decorated_quiver,
    double,
    fold,
    is_bipartite,
    is_dynkin,
    positive_part,
)
from preproj.specfile import ParseError, build_decorated_quiver

B2_SPEC = """
algebra S = truncated_poly(2)
vertex 1 : k
vertex 2 : S
arrow a : 1 -> 2 kind=tensor
"""


def test_b2_spec_parses():
    dq = build_decorated_quiver(B2_SPEC)
    assert dq.vertices == ("1", "2")
    assert dq.algebra("2").same_structure(truncated_poly(2))
    assert dq.arrows[0].kind is ArrowKind.TENSOR


def test_single_vertex_spec():
    dq = build_decorated_quiver("vertex 1 : k\n")
    assert dq.vertices == ("1",) and dq.arrows == ()


def test_identification_between_different_algebras_is_rejected():
    with pytest.raises(ConditionFViolation):
        build_decorated_quiver(B2_SPEC.replace("kind=tensor", "kind=ident"))


def test_nonsymmetric_form_is_rejected():
    text = "algebra M = matrix_algebra(2) form=antidiagonal\nvertex 1 : M\n"
    with pytest.raises(ConditionFViolation):
        build_decorated_quiver(text)


def test_inline_structure_constants_with_fractions():
    text = ("algebra A dim=2 sc=[(0,0,0,1),(0,1,1,1),(1,0,1,1),(1,1,0,1/4)] unit=[1,0] form=[0,2/3]\n"
            "vertex v : A\n")
    alg = build_decorated_quiver(text).algebra("v")
    assert alg.mul(alg.basis_vector(1), alg.basis_vector(1)) == (Fraction(1, 4), 0)


@pytest.mark.parametrize("text,line,column", [
    ("vertex 1 : k\nvertex 2 : Q\n", 2, 1),
    ("vertex 1 : k\n  arow a : 1 -> 1\n", 2, 3),
    ("algebra S = truncated_poly(2\nvertex 1 : S\n", 1, 1),
    ("vertex 1 : k\narrow a : 1 -> 1 kind=loop\n", 2, 1),
    ("vertex 1 : k\narrow a : 1 -> 1 xweight=1/3\n", 2, 1),
    ("vertex 1 : k\nfold by ((1 1))\n", 2, 1),
])
def test_parse_errors_carry_positions(text, line, column):
    with pytest.raises(ParseError) as info:
        build_decorated_quiver(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_fold_line_in_spec():
    text = """
    vertex 1 : k
    vertex 2 : k
    vertex 3 : k
    arrow a : 2 -> 1
    arrow b : 2 -> 3
    fold by ((1 3); (a b))
    """
    dq = build_decorated_quiver(text)
    assert sorted(a.dim for a in dq.algebras) == [1, 2]


def test_double_b2():
    dd = double(catalog.b_series(2))
    assert [(a.source, a.target) for a in dd.arrows] == [("1", "2"), ("2", "1")]
    assert all(dd.bimodule_dim(a) == 2 for a in dd.arrows)


def test_double_without_arrows():
    dq = catalog.single_vertex()
    assert double(dq).arrows == () and double(dq).vertices == dq.vertices


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_double_c_series(n):
    dd = double(catalog.c_series(n))
    assert len(dd.arrows) == 2 * (n - 1)
    assert double(dd) is dd
    assert [a.id for a in positive_part(dd).arrows] == [a.id for a in catalog.c_series(n).arrows]


def test_fold_a3_gives_k_and_k2():
    dq, flip = catalog.a_centered(2)
    folded = fold(dq, flip)
    assert sorted(a.dim for a in folded.algebras) == [1, 2]
    assert len(folded.arrows) == 1


def test_fold_d4_gives_k_and_k3():
    dq, gens = catalog.d4_star()
    folded = fold(dq, gens)
    assert sorted(a.dim for a in folded.algebras) == [1, 3]
    assert any(a.same_structure(sum_of_ground(3)) for a in folded.algebras)


def test_identity_fold_is_unchanged():
    dq = catalog.a_linear(3)
    folded = fold(dq, Automorphism({}, {}))
    assert folded.vertices == dq.vertices and [a.dim for a in folded.algebras] == [1, 1, 1]


def test_bad_automorphism():
    dq = catalog.a_linear(3)
    with pytest.raises(NotAnAutomorphism):
        fold(dq, Automorphism({"1": "3", "3": "1"}, {"a1": "a2", "a2": "a1"}))


@pytest.mark.parametrize("build", [lambda: catalog.a_centered(2), lambda: catalog.d4_star(), lambda: catalog.e6()],
                         ids=["A3", "D4", "E6"])
def test_fold_preserves_graded_dimensions(build):
    dq, gens = build()
    assert hilbert_series(dq).at_s1() == hilbert_series(fold(dq, gens)).at_s1()


def test_automorphism_search_finds_the_d4_symmetries():
    dq, _ = catalog.d4_star()
    assert len(automorphisms(dq)) == 6


@pytest.mark.parametrize("build,a12,a21", [(catalog.b_series, 2, 1), (lambda n: catalog.g2(), 3, 1)],
                         ids=["B2", "G2"])
def test_cartan_entries(build, a12, a21):
    data = cartan_data(build(2))
    assert (data.A[0][1], data.A[1][0]) == (a12, a21)


def test_b2_cartan_matrix():
    assert cartan_data(catalog.b_series(2)).cartan == [[2, -2], [-1, 2]]


def test_single_vertex_cartan():
    data = cartan_data(catalog.single_vertex())
    assert data.A == ((0,),) and data.cartan == [[2]]


@pytest.mark.parametrize("dq,expected", [
    (catalog.b_series(2), True), (catalog.g2(), True), (catalog.f4(), True),
    (catalog.c_series(5), True), (catalog.jordan(), False), (catalog.star(4), False),
], ids=["B2", "G2", "F4", "C5", "jordan", "star4"])
def test_is_dynkin(dq, expected):
    assert is_dynkin(dq) is expected


CORPUS = [catalog.b_series(3), catalog.c_series(4), catalog.g2(), catalog.f4(), catalog.z_pair(4),
          catalog.star_fold(3), catalog.matrix_pair(2), catalog.jordan()]


@pytest.mark.parametrize("dq", CORPUS, ids=[d.name for d in CORPUS])
def test_da_symmetric(dq):
    data = cartan_data(dq)
    n = len(data.vertices)
    assert all(data.D[i] * data.A[i][j] == data.A[j][i] * data.D[j] for i in range(n) for j in range(n))


@given(st.integers(1, 4), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=5))
def test_double_has_twice_the_arrows(nv, edges):
    verts = {str(i): ground() for i in range(nv)}
    arrows = [(f"a{i}", str(s % nv), str(t % nv), "tensor") for i, (s, t) in enumerate(edges)]
    dq = decorated_quiver(verts, arrows)
    dd = double(dq)
    assert len(dd.arrows) == 2 * len(dq.arrows)
    assert sorted((a.id, a.source, a.target) for a in positive_part(dd).arrows) == \
        sorted((a.id, a.source, a.target) for a in dq.arrows)


def test_bipartite():
    assert is_bipartite(catalog.c_series(4))
    assert not is_bipartite(catalog.jordan())


def test_duplicate_arrow_ids():
    with pytest.raises(QuiverError):
        decorated_quiver({"1": ground(), "2": ground()}, [("a", "1", "2", "tensor"), ("a", "2", "1", "tensor")])
