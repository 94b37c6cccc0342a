import pytest
from hypothesis import assume, given, strategies as st

from polys import ONE, S, T, add, mono, mul
from preproj import catalog
from preproj.algebra import change_form, gram_matrix, truncated_poly, z_algebra
from preproj.field import Field
from preproj.linalg import RowSpace
from preproj.preprojective import (
    ALL_PLUS,
    SIGNED,
    NotFiniteDimensional,
    center_dims,
    check_strong_flatness,
    conjectured_series,
    frobenius_pairing,
    hilbert_series,
    ideal_degree_span,
    pairing_value,
    preprojective_algebra,
    relation_element,
    total_dimension,
)
from preproj.quiver import decorated_quiver, double
from preproj.tensor import graded_piece, multiply, path_element, to_vector


def neg(elem):
    return {k: -v for k, v in elem.items()}


def plus(*elems):
    out = {}
    for e in elems:
        for k, v in e.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def test_b2_relation_components():
    dq = catalog.b_series(2)
    rel = relation_element(dq, SIGNED)
    assert rel.component("1") == path_element(dq, "1", ["a1", "a1*"], [(1,), (1, 0), (1,)])
    expected = plus(path_element(dq, "2", ["a1*", "a1"], [(1, 0), (1,), (0, 1)]),
                    path_element(dq, "2", ["a1*", "a1"], [(0, 1), (1,), (1, 0)]))
    assert rel.component("2") == neg(expected)
    assert relation_element(dq, ALL_PLUS).component("2") == expected


def test_g2_relation_at_the_s_vertex():
    dq = catalog.g2()
    rel = relation_element(dq, ALL_PLUS)
    # 1 (x) x^2 + x (x) x + x^2 (x) 1
    e = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    expected = plus(*(path_element(dq, "2", ["a*", "a"], [e[i], (1,), e[2 - i]]) for i in range(3)))
    assert rel.component("2") == expected


def test_a2_relation_is_the_commutator():
    dq = catalog.a_linear(2)
    rel = relation_element(dq, SIGNED)
    assert rel.component("1") == path_element(dq, "1", ["a1", "a1*"], [(1,), (1,), (1,)])
    assert rel.component("2") == neg(path_element(dq, "2", ["a1*", "a1"], [(1,), (1,), (1,)]))


@pytest.mark.parametrize("n,rank", [(2, 3), (3, 8), (4, 12)])
def test_b2_ideal_ranks(n, rank):
    assert ideal_degree_span(catalog.b_series(2), n)[1].rank == rank


def test_degree_two_ideal_is_spanned_by_sandwiched_components():
    for dq in (catalog.g2(), catalog.f4(), catalog.c_series(3)):
        dd = double(dq)
        piece, span = ideal_degree_span(dq, 2)
        units = graded_piece(dq, 0).words
        direct = RowSpace(dq.field)
        for comp in relation_element(dq).components.values():
            for u in units:
                for w in units:
                    prod = multiply(dd, multiply(dd, {u: 1}, comp), {w: 1})
                    if prod:
                        direct.add(to_vector(piece, prod))
        assert span.rank == direct.rank
        assert all(direct.contains(row) for row in span.basis())


def test_g2_degree_two_ideal_at_the_s_vertex():
    piece, span = ideal_degree_span(catalog.g2(), 2)
    block = [i for i, w in enumerate(piece.words) if w.source == w.target == "2"]
    restricted = RowSpace(catalog.g2().field)
    for row in span.basis():
        if set(row) <= set(block):
            restricted.add(row)
    assert restricted.rank == 3


def test_ideal_starts_in_degree_two():
    with pytest.raises(ValueError):
        ideal_degree_span(catalog.g2(), 1)


def test_b2_bigraded_series():
    h = hilbert_series(catalog.b_series(2))
    expected = [[add(ONE, mono(2, 1)), mul(T, add(ONE, S))],
                [mul(T, add(ONE, S)), mul(add(ONE, mono(2)), add(ONE, S))]]
    assert [[h.block_poly(i, j) for j in range(2)] for i in range(2)] == expected


def test_g2_bigraded_series():
    h = hilbert_series(catalog.g2())
    front = add(ONE, mono(2, 1))
    q = add(ONE, S, mono(0, 2))
    expected = [[mul(front, add(ONE, mono(2, 2))), mul(front, q, T)],
                [mul(front, q, T), mul(front, q, add(ONE, mono(2)))]]
    assert [[h.block_poly(i, j) for j in range(2)] for i in range(2)] == expected
    assert h.at_s1() == [4, 6, 8, 6, 4]


def test_f4_block_totals():
    h = hilbert_series(catalog.f4())
    assert h.block_totals() == [[4, 6, 8, 4], [6, 12, 16, 8], [8, 16, 24, 12], [4, 8, 12, 8]]


def test_point():
    h = hilbert_series(catalog.single_vertex())
    assert h.to_text() == "1" and total_dimension(catalog.single_vertex()) == 1


@pytest.mark.parametrize("build,total", [(catalog.g2, 28), (catalog.f4, 156)], ids=["G2", "F4"])
def test_totals(build, total):
    assert total_dimension(build()) == total


def test_infinite_at_cutoff():
    assert total_dimension(catalog.jordan(), cutoff=4) == "infinite at cutoff 4"


CORPUS = [catalog.b_series(3), catalog.c_series(4), catalog.g2(), catalog.f4(), catalog.z_pair(4),
          catalog.matrix_pair(2), catalog.jordan(), catalog.star_fold(3)]


@pytest.mark.parametrize("dq", CORPUS, ids=[d.name for d in CORPUS])
def test_low_degrees_are_free(dq):
    h = hilbert_series(dq, cutoff=3)
    dd = double(dq)
    assert h.degree_matrix(0) == graded_piece(dq, 0).dims
    assert h.degree_matrix(1) == graded_piece(dq, 1).dims
    assert sum(map(sum, h.degree_matrix(1))) == sum(dd.bimodule_dim(a) for a in dd.arrows)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_constant_k_type_a_total(n):
    # classical count: dim Pi(A_m) = m(m+1)(m+2)/6
    m = 2 * n - 1
    assert total_dimension(catalog.a_centered(n)[0]) == m * (m + 1) * (m + 2) // 6


def test_d4_and_e6_totals():
    assert total_dimension(catalog.d4_star()[0]) == 28
    assert total_dimension(catalog.e6()[0]) == 156


@pytest.mark.parametrize("build", [catalog.g2, lambda: catalog.b_series(2), catalog.f4, lambda: catalog.c_series(4)],
                         ids=["G2", "B2", "F4", "C4"])
def test_pairing_nondegenerate(build):
    report = frobenius_pairing(preprojective_algebra(double(build())))
    assert report.nondegenerate and report.rank == report.dim


def test_pairing_on_a_vertex_algebra_is_its_gram_matrix():
    s = truncated_poly(3)
    report = frobenius_pairing(preprojective_algebra(double(catalog.single_vertex(s))))
    assert [list(r) for r in report.gram] == gram_matrix(s)


def test_g2_pairing_table_pairs_are_units():
    pa = preprojective_algebra(double(catalog.g2()))
    g = pa.generators()
    a, a_star, one, x, x2 = g[4][1], g[5][1], g[1][1], g[2][1], g[3][1]
    m = pa.multiply

    def k_loop(mid):
        return m(1, m(1, a, 0, mid), 1, a_star)

    def s_loop(left, right):
        return m(2, m(1, m(0, left, 1, a_star), 1, a), 0, right)

    pairs = [(k_loop(x), k_loop(x2)), (s_loop(one, x), s_loop(one, x2)), (s_loop(x, one), s_loop(x, x))]
    for u, w in pairs:
        assert pairing_value(pa, 2, u, 2, w) in (1, -1)
        assert pairing_value(pa, 2, w, 2, u) == -pairing_value(pa, 2, u, 2, w)
    values = {v for row in frobenius_pairing(pa).gram for v in row}
    assert values <= {-1, 0, 1}


def test_pairing_needs_a_finite_algebra():
    with pytest.raises(NotFiniteDimensional):
        frobenius_pairing(preprojective_algebra(double(catalog.jordan()), SIGNED, 3))


@pytest.mark.parametrize("build,expected", [
    (catalog.single_vertex, {0: 1}),
    (lambda: catalog.b_series(2), {0: 1, 2: 2}),
    (catalog.g2, {0: 1, 4: 4}),
], ids=["point", "B2", "G2"])
def test_center(build, expected):
    assert center_dims(preprojective_algebra(double(build()))) == expected


def test_g2_center_top_is_all_of_degree_four():
    h = hilbert_series(catalog.g2())
    assert center_dims(preprojective_algebra(double(catalog.g2())))[4] == h.at_s1()[4]


def test_conjectured_series_jordan():
    h = conjectured_series(catalog.jordan(), cutoff=3)
    assert h.at_s1()[:4] == [1, 2, 3, 4]


def test_conjectured_series_b2_low_degrees():
    conj = conjectured_series(catalog.b_series(2))
    real = hilbert_series(catalog.b_series(2))
    assert conj.degree_matrix(0) == [[1, 0], [0, 2]]
    for t in range(3):
        assert conj.degree_matrix(t) == real.degree_matrix(t)


@pytest.mark.parametrize("build", [lambda: catalog.b_series(2), catalog.g2, catalog.f4,
                                   lambda: catalog.c_series(4), lambda: catalog.b_series(3)],
                         ids=["B2", "G2", "F4", "C4", "B3"])
def test_strong_flatness(build):
    report = check_strong_flatness(build())
    assert report.holds and report.correction_is_monomial_times_constant


def unit_strategy(dim):
    # constant term first; every algebra below is local, so this is a unit
    nonzero = st.integers(-3, 3).filter(bool)
    return st.tuples(nonzero, st.lists(st.integers(-3, 3), min_size=dim - 1, max_size=dim - 1))


FORM_CASES = [catalog.b_series(2), catalog.g2(), catalog.z_pair(4), catalog.c_series(3),
              catalog.k_to(truncated_poly(4)), catalog.k_to(z_algebra(5))]


@pytest.mark.parametrize("dq", FORM_CASES, ids=[d.name for d in FORM_CASES])
@given(data=st.data())
def test_form_independence(dq, data):
    v = next(u for u, a in zip(dq.vertices, dq.algebras) if a.dim > 1)
    alg = dq.algebra(v)
    head, tail = data.draw(unit_strategy(alg.dim))
    u = [head] + tail
    assume(alg.is_unit(u))
    changed = dq.with_algebra(v, alg.with_form(change_form(alg, alg.form, u)))
    assert hilbert_series(changed, cutoff=6).same_as(hilbert_series(dq, cutoff=6))


BIPARTITE = [catalog.b_series(2), catalog.b_series(3), catalog.g2(), catalog.f4(), catalog.c_series(4),
             catalog.star_fold(3), catalog.d4_star()[0], catalog.matrix_pair(2)]


@pytest.mark.parametrize("dq", BIPARTITE, ids=[d.name for d in BIPARTITE])
def test_sign_independence(dq):
    assert hilbert_series(dq, SIGNED).same_as(hilbert_series(dq, ALL_PLUS))


@pytest.mark.parametrize("p", [3, 5, 32003])
def test_g2_over_finite_fields(p):
    f = Field(p)
    assert hilbert_series(catalog.g2(f)).same_as(hilbert_series(catalog.g2()))


def test_inhomogeneous_unit_falls_back_to_ungraded():
    s = truncated_poly(2)
    dq = decorated_quiver({"1": s, "2": s}, [("a", "1", "2", "ident", 1)])
    changed = dq.with_algebra("2", s.with_form(change_form(s, s.form, (2, 3))))
    h = hilbert_series(changed, cutoff=4)
    assert h.at_s1() == hilbert_series(dq, cutoff=4).at_s1()


def test_g2_center_against_every_basis_element():
    # commutators with the whole basis rather than the generators
    pa = preprojective_algebra(double(catalog.g2()))
    f = pa.field
    basis = [(d.n, p) for d in pa.degrees for p in range(len(d))]
    found = {}
    for d in pa.degrees:
        images = []
        for p in range(len(d)):
            col, offset = {}, 0
            for m, q in basis:
                if d.n + m >= len(pa.degrees):
                    continue
                comm = plus(pa.multiply(d.n, {p: f.one}, m, {q: f.one}), neg(pa.multiply(m, {q: f.one}, d.n, {p: f.one})))
                col.update({offset + k: c for k, c in comm.items()})
                offset += len(pa.degrees[d.n + m])
            images.append(col)
        if len(d) - RowSpace(f, images).rank:
            found[d.n] = len(d) - RowSpace(f, images).rank
    assert found == center_dims(pa) == {0: 1, 4: 4}
