"""Explicit graded pieces of the decorated path algebra of a doubled decorated quiver.

A path through arrows a_1..a_n has the canonical basis
``A_{v0} (x) A_{t(a_k)} (x) ...`` with one factor (a *slot*) for the start
vertex and one after each tensor arrow; identification arrows carry the
running slot across, since ``a g = g a`` in the bimodule ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .field import Field, Scalar
from .linalg import RowSpace, axpy
from .quiver import ArrowKind, DecoratedQuiver, double
from .algebra import FiniteDimAlgebra


class ActionMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class PathWord:
    source: str
    target: str
    arrows: tuple
    slots: tuple
    xdeg: int

    @property
    def length(self) -> int:
        return len(self.arrows)

    def label(self, dq: DecoratedQuiver) -> str:
        parts = [dq.algebra(self.source).labels[self.slots[0]]]
        k = 1
        cur = self.source
        for aid in self.arrows:
            a = dq.arrow(aid)
            parts.append(f"[{aid}]")
            cur = a.target
            if a.kind is ArrowKind.TENSOR:
                parts.append(dq.algebra(cur).labels[self.slots[k]])
                k += 1
        return " ".join(parts)


Element = dict  # PathWord -> scalar


def slot_algebras(dq: DecoratedQuiver, source: str, arrows: Sequence[str]) -> list[FiniteDimAlgebra]:
    algs = [dq.algebra(source)]
    for aid in arrows:
        a = dq.arrow(aid)
        if a.kind is ArrowKind.TENSOR:
            algs.append(dq.algebra(a.target))
    return algs


@dataclass(frozen=True)
class GradedPiece:
    degree: int
    vertices: tuple
    words: tuple  # all PathWords, sorted
    index: Mapping  # PathWord -> position in words

    @property
    def blocks(self) -> dict[tuple[str, str], list[PathWord]]:
        out: dict[tuple[str, str], list[PathWord]] = {}
        for w in self.words:
            out.setdefault((w.source, w.target), []).append(w)
        return out

    @property
    def dims(self) -> list[list[int]]:
        n = len(self.vertices)
        idx = {v: i for i, v in enumerate(self.vertices)}
        out = [[0] * n for _ in range(n)]
        for w in self.words:
            out[idx[w.source]][idx[w.target]] += 1
        return out

    @property
    def bidims(self) -> dict[tuple[str, str], dict[int, int]]:
        out: dict[tuple[str, str], dict[int, int]] = {}
        for w in self.words:
            blk = out.setdefault((w.source, w.target), {})
            blk[w.xdeg] = blk.get(w.xdeg, 0) + 1
        return out

    @property
    def total(self) -> int:
        return len(self.words)

    def dump(self, dq: DecoratedQuiver) -> str:
        return "\n".join(f"{w.source}->{w.target} x={w.xdeg}/2 : {w.label(dq)}" for w in self.words)


def _extend(dq: DecoratedQuiver, words: Sequence[PathWord]) -> list[PathWord]:
    out = []
    for w in words:
        for a in dq.out_arrows(w.target):
            if a.kind is ArrowKind.TENSOR:
                alg = dq.algebra(a.target)
                for b in range(alg.dim):
                    out.append(PathWord(w.source, a.target, w.arrows + (a.id,), w.slots + (b,),
                                        w.xdeg + a.xweight + alg.xdeg[b]))
            else:
                out.append(PathWord(w.source, a.target, w.arrows + (a.id,), w.slots, w.xdeg + a.xweight))
    return out


@lru_cache(maxsize=256)
def _piece(dq: DecoratedQuiver, n: int) -> GradedPiece:
    if n == 0:
        words = [PathWord(v, v, (), (b,), alg.xdeg[b]) for v, alg in zip(dq.vertices, dq.algebras)
                 for b in range(alg.dim)]
    else:
        words = _extend(dq, _piece(dq, n - 1).words)
    words.sort()
    return GradedPiece(n, dq.vertices, tuple(words), {w: i for i, w in enumerate(words)})


def graded_piece(dq: DecoratedQuiver, n: int) -> GradedPiece:
    """Degree-n piece of the tensor algebra of ``double(dq)`` (memoized)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return _piece(double(dq), n)


# -- multiplication ------------------------------------------------------------

def multiply_words(dq: DecoratedQuiver, u: PathWord, w: PathWord) -> Element:
    """Concatenate, multiplying the touching slots in the middle vertex algebra."""
    if u.target != w.source:
        return {}
    alg = dq.algebra(u.target)
    out = {}
    for k, c in alg.table[u.slots[-1]][w.slots[0]]:
        xdeg = u.xdeg + w.xdeg - alg.xdeg[u.slots[-1]] - alg.xdeg[w.slots[0]] + alg.xdeg[k]
        out[PathWord(u.source, w.target, u.arrows + w.arrows, u.slots[:-1] + (k,) + w.slots[1:], xdeg)] = c
    return out


def multiply(dq: DecoratedQuiver, x: Mapping, y: Mapping) -> Element:
    field = dq.field
    out: dict = {}
    for u, a in x.items():
        for w, b in y.items():
            prod = multiply_words(dq, u, w)
            if prod:
                axpy(field, out, prod, field.mul(a, b))
    return out


def multiplication_matrices(dq: DecoratedQuiver, a: GradedPiece, b: GradedPiece) -> dict:
    """Nonzero products of basis words: ``(i, j) -> sparse vector`` in degree a+b indices."""
    dd = double(dq)
    target = graded_piece(dd, a.degree + b.degree)
    out = {}
    by_source: dict[str, list[int]] = {}
    for j, w in enumerate(b.words):
        by_source.setdefault(w.source, []).append(j)
    for i, u in enumerate(a.words):
        for j in by_source.get(u.target, ()):
            prod = multiply_words(dd, u, b.words[j])
            if prod:
                out[(i, j)] = {target.index[w]: c for w, c in prod.items()}
    return out


def vertex_element(dq: DecoratedQuiver, v: str, vec: Sequence[Scalar]) -> Element:
    """Degree-0 element at vertex ``v`` with coefficient vector ``vec``."""
    alg = dq.algebra(v)
    return {PathWord(v, v, (), (b,), alg.xdeg[b]): c for b, c in enumerate(vec) if c}


def path_element(dq: DecoratedQuiver, source: str, arrows: Sequence[str],
                 slot_vectors: Sequence[Sequence[Scalar]]) -> Element:
    """Multilinear element of a path with the given slot vectors."""
    dd = double(dq)
    algs = slot_algebras(dd, source, arrows)
    if len(algs) != len(slot_vectors):
        raise ActionMismatch("wrong number of slot vectors for this path")
    target = dd.arrow(arrows[-1]).target if arrows else source
    w_arrows = sum(dd.arrow(a).xweight for a in arrows)
    field = dd.field
    terms = [((), 0, field.one)]
    for alg, vec in zip(algs, slot_vectors):
        terms = [(s + (b,), x + alg.xdeg[b], field.mul(c, vb))
                 for s, x, c in terms for b, vb in enumerate(vec) if vb]
    out: dict = {}
    for slots, x, c in terms:
        if c:
            out[PathWord(source, target, tuple(arrows), slots, x + w_arrows)] = c
    return out


def to_vector(piece: GradedPiece, elem: Mapping) -> dict:
    return {piece.index[w]: c for w, c in elem.items() if c}


# -- tensor products over a vertex algebra --------------------------------------

@dataclass(frozen=True)
class BimoduleDesc:
    """A bimodule by its basis size and action matrices on column vectors.

    ``left[b]`` is the matrix of ``m -> e_b m`` and ``right[b]`` of ``m -> m e_b``.
    """

    left_algebra: FiniteDimAlgebra
    right_algebra: FiniteDimAlgebra
    dim: int
    left: tuple
    right: tuple


def regular_bimodule(alg: FiniteDimAlgebra) -> BimoduleDesc:
    return BimoduleDesc(alg, alg, alg.dim,
                        tuple(tuple(map(tuple, alg.left_matrix(alg.basis_vector(b)))) for b in range(alg.dim)),
                        tuple(tuple(map(tuple, alg.right_matrix(alg.basis_vector(b)))) for b in range(alg.dim)))


def free_bimodule(left: FiniteDimAlgebra, right: FiniteDimAlgebra) -> BimoduleDesc:
    """``left (x)_k right`` with basis ``(p, q) -> p * right.dim + q``."""
    n = left.dim * right.dim
    f = left.field

    def kron_left(b: int) -> tuple:
        lm = left.left_matrix(left.basis_vector(b))
        return tuple(tuple(lm[p][p2] if q == q2 else f.zero
                           for p2 in range(left.dim) for q2 in range(right.dim))
                     for p in range(left.dim) for q in range(right.dim))

    def kron_right(b: int) -> tuple:
        rm = right.right_matrix(right.basis_vector(b))
        return tuple(tuple(rm[q][q2] if p == p2 else f.zero
                           for p2 in range(left.dim) for q2 in range(right.dim))
                     for p in range(left.dim) for q in range(right.dim))

    return BimoduleDesc(left, right, n, tuple(kron_left(b) for b in range(left.dim)),
                        tuple(kron_right(b) for b in range(right.dim)))


@dataclass(frozen=True)
class TensorBasis:
    pairs: tuple  # basis of M (x)_B N as (m, n) pure tensors
    relations: RowSpace
    field: Field

    @property
    def dim(self) -> int:
        return len(self.pairs)


def bimodule_tensor_basis(m: BimoduleDesc, n: BimoduleDesc) -> TensorBasis:
    """``M (x)_B N`` as ``(M (x)_k N) / span{m b (x) n - m (x) b n}`` by row reduction."""
    if not m.right_algebra.same_structure(n.left_algebra):
        raise ActionMismatch("M and N are not modules over the same middle algebra")
    b_alg = m.right_algebra
    field = b_alg.field
    space = RowSpace(field)
    for b in range(b_alg.dim):
        rm, ln = m.right[b], n.left[b]
        for i in range(m.dim):
            for j in range(n.dim):
                vec: dict = {}
                for i2 in range(m.dim):
                    c = rm[i2][i]
                    if c:
                        axpy(field, vec, {i2 * n.dim + j: field.one}, c)
                for j2 in range(n.dim):
                    c = ln[j2][j]
                    if c:
                        axpy(field, vec, {i * n.dim + j2: field.one}, field.neg(c))
                if vec:
                    space.add(vec)
    pairs = tuple((i, j) for i in range(m.dim) for j in range(n.dim) if i * n.dim + j not in space.rows)
    return TensorBasis(pairs, space, field)
