"""Decorated preprojective algebras: relation element, graded quotient, series, pairing, center.

The quotient is computed degree by degree: with ``I`` the ideal generated by
the degree-2 relation,

    T^n / I^n  =  (Pi^{n-1} (x)_{T^0} T^1) / image(Pi^{n-2} . r),

so each degree only needs the previous two quotient degrees. The explicit
span of the ideal inside ``T^n`` (:func:`ideal_degree_span`) is kept as an
independent route for small degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .algebra import frobenius_dual_basis
from .field import Scalar
from .linalg import RowSpace, axpy
from .quiver import ArrowKind, DecoratedQuiver, cartan_data, double, is_dynkin
from .series import HilbertSeries
from .tensor import GradedPiece, PathWord, graded_piece, multiply, path_element, to_vector, vertex_element

SIGNED = "signed"
ALL_PLUS = "all_plus"
CONVENTIONS = (SIGNED, ALL_PLUS)


class NotFiniteDimensional(ValueError):
    pass


class SingularLeadingTerm(ArithmeticError):
    pass


class _XGradingUnavailable(Exception):
    pass


def _check_convention(convention: str) -> str:
    if convention == "plus":
        convention = ALL_PLUS
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown sign convention {convention!r}")
    return convention


# -- relation element --------------------------------------------------------------

@dataclass(frozen=True)
class RelationTerm:
    """``coef * s0 [a] s1 [b] s2`` with slot vectors for the path ``(a, b)``."""

    vertex: str
    coef: Scalar
    arrows: tuple
    slots: tuple


@dataclass(frozen=True)
class RelationElement:
    dq: DecoratedQuiver
    convention: str
    terms: tuple

    def component(self, v: str) -> dict:
        """``e_v r`` as an element of ``T^2``."""
        field = self.dq.field
        out: dict = {}
        for term in self.terms:
            if term.vertex == v:
                axpy(field, out, path_element(self.dq, v, term.arrows, term.slots), term.coef)
        return out

    @property
    def components(self) -> dict[str, dict]:
        return {v: self.component(v) for v in self.dq.vertices}

    def element(self) -> dict:
        field = self.dq.field
        out: dict = {}
        for v in self.dq.vertices:
            axpy(field, out, self.component(v), field.one)
        return out


def relation_element(dq: DecoratedQuiver, convention: str = SIGNED) -> RelationElement:
    convention = _check_convention(convention)
    dd = double(dq)
    field = dd.field
    minus = field.one if convention == ALL_PLUS else field.neg(field.one)
    terms = []
    for a in dd.arrows:
        if a.starred:
            continue
        star = a.dual
        i, j = a.source, a.target
        if a.kind is ArrowKind.TENSOR:
            for v, path, sign, mid in ((i, (a.id, star), field.one, j), (j, (star, a.id), minus, i)):
                alg = dd.algebra(v)
                duals = frobenius_dual_basis(alg)
                unit_mid = dd.algebra(mid).unit
                for l in range(alg.dim):
                    terms.append(RelationTerm(v, sign, path, (alg.basis_vector(l), unit_mid, duals[l])))
        else:
            terms.append(RelationTerm(i, field.one, (a.id, star), (dd.algebra(i).unit,)))
            terms.append(RelationTerm(j, minus, (star, a.id), (dd.algebra(j).unit,)))
    return RelationElement(dd, convention, tuple(terms))


def ideal_degree_span(dq: DecoratedQuiver, n: int, convention: str = SIGNED) -> tuple[GradedPiece, RowSpace]:
    """Row-reduced span of ``sum_{a+b=n-2} T^a r T^b`` inside the explicit ``T^n``."""
    if n < 2:
        raise ValueError("the ideal starts in degree 2")
    dd = double(dq)
    rel = relation_element(dd, convention)
    comps = [c for c in rel.components.values() if c]
    target = graded_piece(dd, n)
    space = RowSpace(dd.field)
    for a in range(n - 1):
        left = graded_piece(dd, a).words
        right = graded_piece(dd, n - 2 - a).words
        for comp in comps:
            v = next(iter(comp)).source
            for u in left:
                if u.target != v:
                    continue
                ur = multiply(dd, {u: dd.field.one}, comp)
                if not ur:
                    continue
                for w in right:
                    if w.source != v:
                        continue
                    prod = multiply(dd, ur, {w: dd.field.one})
                    if prod:
                        space.add(to_vector(target, prod))
    return target, space


# -- the quotient engine -------------------------------------------------------------

class _Degree:
    """Basis and projection data of one quotient degree.

    Degree 0 entries are ``(vertex index, algebra basis index)``. Degree n >= 1
    pre-space entries are ``(parent, arrow index, slot)`` where ``slot`` is the
    basis index after a tensor arrow or ``-1`` after an identification arrow.
    """

    __slots__ = ("n", "pre", "pre_index", "pre_key", "spaces", "basis", "basis_of_pre",
                 "src", "tgt", "xdeg", "right_cache")

    def __init__(self, n: int) -> None:
        self.n = n
        self.pre: list[tuple] = []
        self.pre_index: dict[tuple, int] = {}
        self.pre_key: list[tuple] = []
        self.spaces: dict[tuple, RowSpace] = {}
        self.basis: list[int] = []  # pre-space index of each basis element
        self.basis_of_pre: dict[int, int] = {}
        self.src: list[int] = []
        self.tgt: list[int] = []
        self.xdeg: list[int] = []
        self.right_cache: dict[tuple[int, int], dict] = {}

    def __len__(self) -> int:
        return len(self.basis)


class PreprojectiveAlgebra:
    """Degree-by-degree model of a decorated preprojective algebra with its multiplication."""

    def __init__(self, dq: DecoratedQuiver, convention: str = SIGNED, cutoff: int | None = None,
                 x_graded: bool = True) -> None:
        self.dq = double(dq)
        self.convention = _check_convention(convention)
        self.field = self.dq.field
        self.vertices = self.dq.vertices
        self.vidx = {v: i for i, v in enumerate(self.vertices)}
        self.arrows = list(self.dq.arrows)
        self.aidx = {a.id: k for k, a in enumerate(self.arrows)}
        self.algs = list(self.dq.algebras)
        self.cutoff = default_cutoff(self.dq) if cutoff is None else cutoff
        self.x_graded = x_graded
        self.relation = relation_element(self.dq, self.convention)
        self._rel_terms: dict[int, list[tuple]] = {}
        for term in self.relation.terms:
            self._rel_terms.setdefault(self.vidx[term.vertex], []).append(
                (term.coef, tuple(self.aidx[a] for a in term.arrows), term.slots))
        self.degrees: list[_Degree] = []
        self.stabilized = False
        self._products: dict[tuple, dict] = {}
        try:
            self._build()
        except _XGradingUnavailable:
            self.x_graded = False
            self.degrees = []
            self._build()

    # -- construction ------------------------------------------------------------
    def _build(self) -> None:
        d0 = _Degree(0)
        for vi, alg in enumerate(self.algs):
            for b in range(alg.dim):
                self._add_pre(d0, (vi, b), vi, vi, alg.xdeg[b])
        self._finish(d0, [])
        self.degrees.append(d0)
        for n in range(1, self.cutoff + 1):
            prev = self.degrees[n - 1]
            d = _Degree(n)
            for p in range(len(prev)):
                v = prev.tgt[p]
                for ai, a in enumerate(self.arrows):
                    if self.vidx[a.source] != v:
                        continue
                    t = self.vidx[a.target]
                    if a.kind is ArrowKind.TENSOR:
                        alg = self.algs[t]
                        for b in range(alg.dim):
                            self._add_pre(d, (p, ai, b), prev.src[p], t, prev.xdeg[p] + a.xweight + alg.xdeg[b])
                    else:
                        self._add_pre(d, (p, ai, -1), prev.src[p], t, prev.xdeg[p] + a.xweight)
            self.degrees.append(d)
            rels = self._relations(n) if n >= 2 else []
            self._finish(d, rels)
            if len(d) == 0:
                self.stabilized = True
                break

    def _add_pre(self, d: _Degree, entry: tuple, s: int, t: int, x: int) -> None:
        d.pre_index[entry] = len(d.pre)
        d.pre.append(entry)
        d.pre_key.append((s, t, x if self.x_graded else 0))

    def _relations(self, n: int) -> list[dict]:
        base = self.degrees[n - 2]
        out = []
        for q in range(len(base)):
            terms = self._rel_terms.get(base.tgt[q], ())
            total: dict = {}
            for coef, (a1, a2), slots in terms:
                vec = self._right_act_vec(n - 2, {q: self.field.one}, slots[0])
                k = 1
                if self.arrows[a1].kind is ArrowKind.TENSOR:
                    pre = self._append(n - 2, vec, a1, slots[k])
                    k += 1
                else:
                    pre = self._append(n - 2, vec, a1, None)
                vec = self._project(n - 1, pre)
                if self.arrows[a2].kind is ArrowKind.TENSOR:
                    pre = self._append(n - 1, vec, a2, slots[k])
                else:
                    pre = self._append(n - 1, vec, a2, None)
                axpy(self.field, total, pre, coef)
            if total:
                out.append(total)
        return out

    def _finish(self, d: _Degree, rels: list[dict]) -> None:
        field = self.field
        split: dict[tuple, list[dict]] = {}
        inhomogeneous_blocks: set[tuple] = set()
        for r in rels:
            parts: dict[tuple, dict] = {}
            for idx, c in r.items():
                parts.setdefault(d.pre_key[idx], {})[idx] = c
            if len(parts) > 1:
                inhomogeneous_blocks.add(next(iter(parts))[:2])
            for key, vec in parts.items():
                split.setdefault(key, []).append(vec)
        if inhomogeneous_blocks:
            # the split spans are only valid when the ideal is x-homogeneous: compare ranks
            for blk in inhomogeneous_blocks:
                whole = RowSpace(field, [r for r in rels if d.pre_key[next(iter(r))][:2] == blk])
                parts_rank = sum(RowSpace(field, vecs).rank for key, vecs in split.items() if key[:2] == blk)
                if parts_rank != whole.rank:
                    raise _XGradingUnavailable()
        for key, vecs in split.items():
            d.spaces[key] = RowSpace(field, vecs)
        for idx, entry in enumerate(d.pre):
            key = d.pre_key[idx]
            sp = d.spaces.get(key)
            if sp is not None and idx in sp.rows:
                continue
            d.basis_of_pre[idx] = len(d.basis)
            d.basis.append(idx)
            d.src.append(key[0])
            d.tgt.append(key[1])
            if d.n == 0:
                d.xdeg.append(self.algs[entry[0]].xdeg[entry[1]])
            else:
                a = self.arrows[entry[1]]
                prev = self.degrees[d.n - 1]
                x = prev.xdeg[entry[0]] + a.xweight
                if entry[2] >= 0:
                    x += self.algs[self.vidx[a.target]].xdeg[entry[2]]
                d.xdeg.append(x)

    # -- linear maps ----------------------------------------------------------------
    def _project(self, n: int, pre: dict) -> dict:
        d = self.degrees[n]
        parts: dict[tuple, dict] = {}
        for idx, c in pre.items():
            parts.setdefault(d.pre_key[idx], {})[idx] = c
        out = {}
        for key, vec in parts.items():
            sp = d.spaces.get(key)
            red = sp.reduce(vec) if sp is not None else vec
            for idx, c in red.items():
                out[d.basis_of_pre[idx]] = c
        return out

    def _append(self, n: int, vec: dict, ai: int, slot: Sequence[Scalar] | None) -> dict:
        """Pre-space vector of degree n+1 for ``vec . (1 (x) slot)`` along arrow ``ai``."""
        d = self.degrees[n]
        nxt_index = self.degrees[n + 1].pre_index
        a = self.arrows[ai]
        s = self.vidx[a.source]
        field = self.field
        out: dict = {}
        for p, c in vec.items():
            if d.tgt[p] != s:
                continue
            if a.kind is ArrowKind.TENSOR:
                for b, sb in enumerate(slot):
                    if sb:
                        key = (p, ai, b)
                        idx = nxt_index[key]
                        val = field.norm(out.get(idx, 0) + c * sb)
                        if val:
                            out[idx] = val
                        else:
                            out.pop(idx, None)
            else:
                key = (p, ai, -1)
                idx = nxt_index[key]
                val = field.norm(out.get(idx, 0) + c)
                if val:
                    out[idx] = val
                else:
                    out.pop(idx, None)
        return out

    def _right_basis(self, n: int, p: int, b: int) -> dict:
        """``p . e_b`` for basis element ``p`` of degree ``n`` and ``e_b`` at its target."""
        d = self.degrees[n]
        cached = d.right_cache.get((p, b))
        if cached is not None:
            return cached
        field = self.field
        entry = d.pre[d.basis[p]]
        if n == 0:
            vi, a = entry
            out = {}
            for k, c in self.algs[vi].table[a][b]:
                out[d.basis_of_pre[d.pre_index[(vi, k)]]] = c
        else:
            parent, ai, slot = entry
            arrow = self.arrows[ai]
            if slot >= 0:
                alg = self.algs[self.vidx[arrow.target]]
                pre = {}
                for k, c in alg.table[slot][b]:
                    pre[d.pre_index[(parent, ai, k)]] = c
                out = self._project(n, pre)
            else:
                prev_vec = self._right_basis(n - 1, parent, b)
                out = self._project(n, self._append(n - 1, prev_vec, ai, None))
        out = {k: v for k, v in out.items() if field.norm(v)}
        d.right_cache[(p, b)] = out
        return out

    def _right_act_vec(self, n: int, vec: dict, avec: Sequence[Scalar]) -> dict:
        field = self.field
        out: dict = {}
        for p, c in vec.items():
            for b, ab in enumerate(avec):
                if ab:
                    axpy(field, out, self._right_basis(n, p, b), field.mul(c, ab))
        return out

    # -- public API ------------------------------------------------------------------
    def dims(self, n: int) -> int:
        return len(self.degrees[n]) if n < len(self.degrees) else 0

    @property
    def top_degree(self) -> int:
        nz = [d.n for d in self.degrees if len(d)]
        return max(nz) if nz else -1

    @property
    def total_dim(self) -> int:
        return sum(len(d) for d in self.degrees)

    def basis_info(self, n: int, p: int) -> tuple[str, str, int]:
        d = self.degrees[n]
        return self.vertices[d.src[p]], self.vertices[d.tgt[p]], d.xdeg[p]

    def label(self, n: int, p: int) -> str:
        """Readable word for a basis element (slots shown after tensor arrows)."""
        d = self.degrees[n]
        entry = d.pre[d.basis[p]]
        if n == 0:
            vi, b = entry
            return self.algs[vi].labels[b]
        parent, ai, slot = entry
        a = self.arrows[ai]
        head = self.label(n - 1, parent)
        tail = f"[{a.id}]"
        if slot >= 0:
            tail += " " + self.algs[self.vidx[a.target]].labels[slot]
        return f"{head} {tail}"

    def series(self) -> HilbertSeries:
        n_v = len(self.vertices)
        coeffs: dict[tuple[int, int], list[list[int]]] = {}
        for d in self.degrees:
            for p in range(len(d)):
                m = coeffs.setdefault((d.n, d.xdeg[p] if self.x_graded else 0), [[0] * n_v for _ in range(n_v)])
                m[d.src[p]][d.tgt[p]] += 1
        frozen = {k: tuple(tuple(r) for r in m) for k, m in coeffs.items()}
        notes = () if self.stabilized else ("not stabilized at cutoff",)
        if not self.x_graded:
            notes += ("relation ideal is not x-homogeneous; x-degrees collapsed to 0",)
        return HilbertSeries(self.vertices, frozen, self.cutoff, self.stabilized, self.x_graded, notes)

    def multiply_basis(self, n1: int, p1: int, n2: int, p2: int) -> dict:
        """Product of basis elements as a vector in degree ``n1 + n2``."""
        key = (n1, p1, n2, p2)
        hit = self._products.get(key)
        if hit is not None:
            return hit
        d1, d2 = self.degrees[n1], self.degrees[n2]
        if d1.tgt[p1] != d2.src[p2] or n1 + n2 >= len(self.degrees):
            out: dict = {}
        elif n2 == 0:
            _, b = d2.pre[d2.basis[p2]]
            out = self._right_basis(n1, p1, b)
        else:
            parent, ai, slot = d2.pre[d2.basis[p2]]
            head = self.multiply_basis(n1, p1, n2 - 1, parent)
            if not head:
                out = {}
            else:
                a = self.arrows[ai]
                slot_vec = None
                if slot >= 0:
                    slot_vec = self.algs[self.vidx[a.target]].basis_vector(slot)
                out = self._project(n1 + n2, self._append(n1 + n2 - 1, head, ai, slot_vec))
        self._products[key] = out
        return out

    def multiply(self, n1: int, u: dict, n2: int, w: dict) -> dict:
        field = self.field
        out: dict = {}
        for p1, c1 in u.items():
            for p2, c2 in w.items():
                prod = self.multiply_basis(n1, p1, n2, p2)
                if prod:
                    axpy(field, out, prod, field.mul(c1, c2))
        return out

    def generators(self) -> list[tuple[int, dict]]:
        """Degree-0 algebra basis elements and the degree-1 arrow generators ``1 (x) 1``."""
        gens: list[tuple[int, dict]] = []
        d0 = self.degrees[0]
        for p in range(len(d0)):
            gens.append((0, {p: self.field.one}))
        if len(self.degrees) > 1:
            for ai, a in enumerate(self.arrows):
                s = self.vidx[a.source]
                unit_vec = self._project(0, {d0.pre_index[(s, b)]: c
                                             for b, c in enumerate(self.algs[s].unit) if c})
                slot = self.algs[self.vidx[a.target]].unit if a.kind is ArrowKind.TENSOR else None
                pre = self._append(0, unit_vec, ai, slot)
                gens.append((1, self._project(1, pre)))
        return gens

    def to_tensor_element(self, n: int, vec: dict) -> dict:
        """Representative in the explicit tensor algebra (chains expanded as path words)."""
        field = self.field
        out: dict = {}
        for p, c in vec.items():
            axpy(field, out, self._basis_to_tensor(n, p), c)
        return out

    @lru_cache(maxsize=None)
    def _basis_to_tensor(self, n: int, p: int) -> dict:
        d = self.degrees[n]
        entry = d.pre[d.basis[p]]
        if n == 0:
            vi, b = entry
            return vertex_element(self.dq, self.vertices[vi], self.algs[vi].basis_vector(b))
        parent, ai, slot = entry
        a = self.arrows[ai]
        head = self._basis_to_tensor(n - 1, parent)
        s_alg = self.algs[self.vidx[a.source]]
        slots = [s_alg.unit]
        if slot >= 0:
            slots.append(self.algs[self.vidx[a.target]].basis_vector(slot))
        gen = path_element(self.dq, a.source, (a.id,), slots)
        return multiply(self.dq, head, gen)


def default_cutoff(dq: DecoratedQuiver) -> int:
    return max(2, 2 * sum(a.dim for a in dq.algebras))


@lru_cache(maxsize=64)
def preprojective_algebra(dq: DecoratedQuiver, convention: str = SIGNED, cutoff: int | None = None) -> PreprojectiveAlgebra:
    return PreprojectiveAlgebra(dq, convention, cutoff)


def hilbert_series(dq: DecoratedQuiver, convention: str = SIGNED, cutoff: int | None = None) -> HilbertSeries:
    return preprojective_algebra(double(dq), _check_convention(convention), cutoff).series()


def total_dimension(dq: DecoratedQuiver, convention: str = SIGNED, cutoff: int | None = None) -> int | str:
    pa = preprojective_algebra(double(dq), _check_convention(convention), cutoff)
    if not pa.stabilized:
        return f"infinite at cutoff {pa.cutoff}"
    return pa.total_dim


# -- Frobenius pairing and center -------------------------------------------------------

@dataclass(frozen=True)
class PairingReport:
    gram: tuple
    rank: int
    dim: int
    top: dict  # vertex -> (t, s_half) of the functional's support
    order: tuple  # (degree, basis index) for each Gram row

    @property
    def nondegenerate(self) -> bool:
        return self.rank == self.dim


def _require_finite(pa: PreprojectiveAlgebra) -> None:
    if not pa.stabilized:
        raise NotFiniteDimensional("series did not stabilize before the cutoff")


def top_functional(pa: PreprojectiveAlgebra) -> tuple[dict[int, set[int]], dict[str, tuple[int, int]]]:
    """Per vertex, the basis cycles in the largest (t, x) bidegree; the functional sums their coefficients."""
    best: dict[int, tuple[int, int]] = {}
    for d in pa.degrees:
        for p in range(len(d)):
            if d.src[p] == d.tgt[p]:
                key = (d.n, d.xdeg[p])
                if key > best.get(d.src[p], (-1, -1)):
                    best[d.src[p]] = key
    support: dict[int, set[int]] = {}
    for vi, (n, x) in best.items():
        d = pa.degrees[n]
        support.setdefault(n, set()).update(p for p in range(len(d))
                                            if d.src[p] == vi and d.tgt[p] == vi and d.xdeg[p] == x)
    return support, {pa.vertices[v]: k for v, k in best.items()}


def frobenius_pairing(pa: PreprojectiveAlgebra) -> PairingReport:
    _require_finite(pa)
    support, top = top_functional(pa)
    order = tuple((d.n, p) for d in pa.degrees for p in range(len(d)))
    field = pa.field
    gram = []
    for n1, p1 in order:
        row = []
        for n2, p2 in order:
            val = field.zero
            sup = support.get(n1 + n2)
            if sup:
                prod = pa.multiply_basis(n1, p1, n2, p2)
                val = field.norm(sum((c for k, c in prod.items() if k in sup), field.zero))
            row.append(val)
        gram.append(tuple(row))
    rank = RowSpace(field, [{j: x for j, x in enumerate(r) if x} for r in gram]).rank
    return PairingReport(tuple(gram), rank, len(order), top, order)


def pairing_value(pa: PreprojectiveAlgebra, n1: int, u: dict, n2: int, w: dict) -> Scalar:
    support, _ = top_functional(pa)
    prod = pa.multiply(n1, u, n2, w)
    sup = support.get(n1 + n2, set())
    return pa.field.norm(sum((c for k, c in prod.items() if k in sup), pa.field.zero))


def center_dims(pa: PreprojectiveAlgebra) -> dict[int, int]:
    """Graded dimensions of ``{z : [z, g] = 0 for every generator g}``."""
    _require_finite(pa)
    gens = pa.generators()
    field = pa.field
    out = {}
    for d in pa.degrees:
        n = d.n
        if not len(d):
            continue
        images = []
        for p in range(len(d)):
            z = {p: field.one}
            col: dict = {}
            offset = 0  # each generator's commutator gets its own block of coordinates
            for gdeg, g in gens:
                if n + gdeg >= len(pa.degrees):
                    continue
                comm = pa.multiply(n, z, gdeg, g)
                axpy(field, comm, pa.multiply(gdeg, g, n, z), field.neg(field.one))
                for k, c in comm.items():
                    col[offset + k] = c
                offset += len(pa.degrees[n + gdeg])
            images.append(col)
        rank = RowSpace(field, images).rank
        if len(d) - rank:
            out[n] = len(d) - rank
    return out


# -- conjectured closed forms ------------------------------------------------------------

Poly = dict  # s_half -> int


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _padd(p: Poly, q: Poly, sign: int = 1) -> Poly:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v}


def _mat_poly_mul(a: list[list[Poly]], b: list[list[Poly]]) -> list[list[Poly]]:
    n, m, l = len(a), len(b), len(b[0]) if b else 0
    out = [[{} for _ in range(l)] for _ in range(n)]
    for i in range(n):
        for k in range(m):
            if not a[i][k]:
                continue
            for j in range(l):
                if b[k][j]:
                    out[i][j] = _padd(out[i][j], _pmul(a[i][k], b[k][j]))
    return out


def _series_from_polys(vertices: tuple, mats: list[list[list[Poly]]], cutoff: int, stabilized: bool) -> HilbertSeries:
    n_v = len(vertices)
    coeffs: dict = {}
    for t, m in enumerate(mats):
        for i in range(n_v):
            for j in range(n_v):
                for s, c in m[i][j].items():
                    entry = coeffs.setdefault((t, s), [[0] * n_v for _ in range(n_v)])
                    entry[i][j] += c
    frozen = {k: tuple(tuple(r) for r in m) for k, m in coeffs.items() if any(any(r) for r in m)}
    return HilbertSeries(vertices, frozen, cutoff, stabilized)


def _inverse_expansion(dq: DecoratedQuiver, cutoff: int) -> tuple[tuple, list[list[list[Poly]]], list[Poly]]:
    """Coefficients of ``D (1 - A t + B t^2)^{-1}`` up to ``t^cutoff``."""
    data = cartan_data(dq)
    n = len(data.vertices)
    dd = double(dq)
    d_polys: list[Poly] = []
    for alg in dd.algebras:
        p: Poly = {}
        for x in alg.xdeg:
            p[x] = p.get(x, 0) + 1
        d_polys.append(p)
    if any(not p for p in d_polys):
        raise SingularLeadingTerm("zero diagonal entry in D")
    a_mat = [[dict(data.A_s[i][j]) for j in range(n)] for i in range(n)]
    b_mat = [[dict(data.B_s[i]) if i == j else {} for j in range(n)] for i in range(n)]
    ident = [[{0: 1} if i == j else {} for j in range(n)] for i in range(n)]
    xs = [ident]
    for k in range(1, cutoff + 1):
        nxt = _mat_poly_mul(a_mat, xs[k - 1])
        if k >= 2:
            bx = _mat_poly_mul(b_mat, xs[k - 2])
            nxt = [[_padd(nxt[i][j], bx[i][j], -1) for j in range(n)] for i in range(n)]
        xs.append(nxt)
    dmat = [[d_polys[i] if i == j else {} for j in range(n)] for i in range(n)]
    return data.vertices, [_mat_poly_mul(dmat, x) for x in xs], d_polys


@dataclass(frozen=True)
class StrongFlatnessReport:
    dynkin: bool
    max_t: int
    max_s: int
    correction: tuple  # matrix of Poly C with series = (1 + t^{max_t+2} C) D (1 - At + Bt^2)^{-1}
    correction_is_monomial_times_constant: bool
    holds: bool
    first_failure: tuple | None = None


def conjectured_series(dq: DecoratedQuiver, cutoff: int | None = None, convention: str = SIGNED) -> HilbertSeries:
    """``D (1 - A t + B t^2)^{-1}``, with the Dynkin correction extracted from the computed series."""
    cutoff = default_cutoff(dq) if cutoff is None else cutoff
    vertices, qs, _ = _inverse_expansion(dq, cutoff)
    if not is_dynkin(dq):
        return _series_from_polys(vertices, qs, cutoff, False)
    report = check_strong_flatness(dq, cutoff, convention)
    n = len(vertices)
    h = report.max_t + 2
    corrected = []
    for t in range(cutoff + 1):
        m = [[dict(qs[t][i][j]) for j in range(n)] for i in range(n)]
        if t >= h:
            extra = _mat_poly_mul([list(r) for r in report.correction], qs[t - h])
            m = [[_padd(m[i][j], extra[i][j]) for j in range(n)] for i in range(n)]
        corrected.append(m)
    return _series_from_polys(vertices, corrected, cutoff, report.holds)


def check_strong_flatness(dq: DecoratedQuiver, cutoff: int | None = None, convention: str = SIGNED) -> StrongFlatnessReport:
    """Extract the correction term at ``t^{max_t+2}`` and check the closed form at every degree."""
    hs = hilbert_series(dq, convention, cutoff)
    dynkin = is_dynkin(dq)
    if not hs.stabilized:
        return StrongFlatnessReport(dynkin, -1, -1, (), False, False, ("not stabilized",))
    max_t = hs.max_degree
    max_s = max((s for (t, s), m in hs.nonzero_items()), default=0)
    h = max_t + 2
    horizon = max(h + max_t + 2, hs.cutoff)
    vertices, qs, d_polys = _inverse_expansion(dq, horizon)
    n = len(vertices)
    # H_h = 0 = Q_h + C D  =>  C = -Q_h D^{-1}, column by column
    corr: list[list[Poly]] = [[{} for _ in range(n)] for _ in range(n)]
    ok = True
    for i in range(n):
        for j in range(n):
            q, r = _poly_divmod(_padd({}, qs[h][i][j], -1), d_polys[j])
            if r:
                ok = False
            corr[i][j] = q
    exps = {e for row in corr for p in row for e in p}
    monomial = len(exps) <= 1
    first = None
    for t in range(horizon + 1):
        m = [[dict(qs[t][i][j]) for j in range(n)] for i in range(n)]
        if t >= h:
            extra = _mat_poly_mul(corr, qs[t - h])
            m = [[_padd(m[i][j], extra[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                want = {s: c for (tt, s), mm in hs.nonzero_items() if tt == t for c in [mm[i][j]] if c}
                if m[i][j] != want:
                    ok = False
                    if first is None:
                        first = (t, i, j)
    return StrongFlatnessReport(dynkin, max_t, max_s, tuple(tuple(r) for r in corr), monomial, ok, first)


def _poly_divmod(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Division of polynomials in s (half-unit exponents) with integer coefficients over QQ."""
    from fractions import Fraction

    num = {k: Fraction(v) for k, v in num.items() if v}
    lead = max(den)
    q: dict = {}
    while num and max(num) >= lead:
        top = max(num)
        c = num[top] / den[lead]
        q[top - lead] = c
        for e, v in den.items():
            k = e + top - lead
            num[k] = num.get(k, 0) - c * v
            if not num[k]:
                del num[k]
    q = {k: int(v) if v.denominator == 1 else v for k, v in q.items() if v}
    r = {k: v for k, v in num.items() if v}
    return q, r


