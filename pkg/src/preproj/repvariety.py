"""Representations of decorated quivers on free modules and the moment map.

A vertex ``i`` with dimension ``d_i`` carries ``V_i = A_i^{d_i}`` as a right
``A_i``-module; k-coordinates are ordered ``(row, basis index)`` row-major.
Right-module maps are left multiplications by matrices over ``A_i``. Paths
act left to right, so the path ``a`` then ``b`` acts as ``M_b o M_a``.

Two independent routes compute the same per-vertex element:

* :func:`evaluate_relation` plugs the representation into the relation element;
* :func:`moment_map_via_pairing` evaluates the trace pairing of the cotangent
  data against ``X . rho`` for every basis ``X`` of the Lie algebra and turns the
  functional back into an element with the Gram matrix of ``sum lambda_i tr``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import linalg
from .algebra import DegenerateForm, FiniteDimAlgebra, frobenius_dual_basis, gram_matrix, validate_frobenius
from .field import Scalar
from .linalg import SingularMatrix
from .preprojective import SIGNED, relation_element
from .quiver import ArrowKind, DecoratedQuiver, double

Matrix = list  # list of rows of scalars
AMatrix = tuple  # rows of A-vectors


class RepresentationError(ValueError):
    pass


class NotALinearResult(RepresentationError):
    pass


class NotInvertible(RepresentationError):
    pass


class NonSymmetricForm(RepresentationError):
    pass


def _require_symmetric(alg: FiniteDimAlgebra) -> None:
    rep = validate_frobenius(alg)
    if not rep.nondegenerate:
        raise DegenerateForm(f"{alg.name}: form is degenerate")
    if not rep.symmetric:
        raise NonSymmetricForm(f"{alg.name}: the moment map needs a symmetric form (witness {rep.witness})")


# -- matrices over A ----------------------------------------------------------------------

def a_zero(alg: FiniteDimAlgebra, rows: int, cols: int) -> AMatrix:
    return tuple(tuple(alg.zero_vector() for _ in range(cols)) for _ in range(rows))


def a_identity(alg: FiniteDimAlgebra, d: int) -> AMatrix:
    return tuple(tuple(alg.unit if r == c else alg.zero_vector() for c in range(d)) for r in range(d))


def a_matmul(alg: FiniteDimAlgebra, x: AMatrix, y: AMatrix) -> AMatrix:
    f = alg.field
    inner = len(y)
    cols = len(y[0]) if y else 0
    out = []
    for r in range(len(x)):
        row = []
        for c in range(cols):
            acc = [f.zero] * alg.dim
            for m in range(inner):
                prod = alg.mul(x[r][m], y[m][c])
                acc = [f.add(a, b) for a, b in zip(acc, prod)]
            row.append(tuple(acc))
        out.append(tuple(row))
    return tuple(out)


def a_add(alg: FiniteDimAlgebra, x: AMatrix, y: AMatrix, sign: int = 1) -> AMatrix:
    f = alg.field
    s = f(sign)
    return tuple(tuple(tuple(f.add(a, f.mul(s, b)) for a, b in zip(u, v)) for u, v in zip(rx, ry))
                 for rx, ry in zip(x, y))


def a_trace(alg: FiniteDimAlgebra, x: AMatrix) -> tuple:
    f = alg.field
    acc = [f.zero] * alg.dim
    for r in range(len(x)):
        acc = [f.add(a, b) for a, b in zip(acc, x[r][r])]
    return tuple(acc)


def k_matrix(alg: FiniteDimAlgebra, x: AMatrix) -> Matrix:
    """k-matrix of ``v -> X v`` on ``A^{cols} -> A^{rows}``."""
    n = alg.dim
    rows, cols = len(x), len(x[0]) if x else 0
    out = [[alg.field.zero] * (cols * n) for _ in range(rows * n)]
    for r in range(rows):
        for c in range(cols):
            block = alg.left_matrix(x[r][c])
            for i in range(n):
                for j in range(n):
                    out[r * n + i][c * n + j] = block[i][j]
    return out


def right_action(alg: FiniteDimAlgebra, d: int, a: Sequence[Scalar]) -> Matrix:
    """k-matrix of ``v -> v a`` on ``A^d`` (componentwise)."""
    n = alg.dim
    block = alg.right_matrix(a)
    out = [[alg.field.zero] * (d * n) for _ in range(d * n)]
    for r in range(d):
        for i in range(n):
            for j in range(n):
                out[r * n + i][r * n + j] = block[i][j]
    return out


def to_a_matrix(alg: FiniteDimAlgebra, rows: int, cols: int, m: Matrix) -> AMatrix:
    """Recover the matrix over A of a right-A-linear k-matrix; raises if it is not A-linear."""
    f = alg.field
    for b in range(alg.dim):
        rb_in = right_action(alg, cols, alg.basis_vector(b))
        rb_out = right_action(alg, rows, alg.basis_vector(b))
        if linalg.matmul(f, m, rb_in) != linalg.matmul(f, rb_out, m):
            raise NotALinearResult("map does not commute with the right algebra action")
    n = alg.dim
    out = []
    for r in range(rows):
        row = []
        for c in range(cols):
            vec = [f.zero] * (cols * n)
            for j, u in enumerate(alg.unit):
                vec[c * n + j] = u
            img = linalg.matvec(f, m, vec)
            row.append(tuple(img[r * n:(r + 1) * n]))
        out.append(tuple(row))
    return tuple(out)


# -- representations ----------------------------------------------------------------------

@dataclass(frozen=True)
class Representation:
    """Free parameters per doubled arrow: a k-matrix (tensor) or a matrix over A (identification)."""

    dq: DecoratedQuiver
    dims: Mapping[str, int]
    data: Mapping[str, tuple]

    def k_map(self, aid: str) -> Matrix:
        a = self.dq.arrow(aid)
        if a.kind is ArrowKind.TENSOR:
            return [list(r) for r in self.data[aid]]
        return k_matrix(self.dq.algebra(a.source), self.data[aid])

    def free_parameters(self, aid: str) -> int:
        a = self.dq.arrow(aid)
        rows, cols = self.dims[a.target], self.dims[a.source]
        if a.kind is ArrowKind.TENSOR:
            return rows * self.dq.algebra(a.target).dim * cols * self.dq.algebra(a.source).dim
        return rows * cols * self.dq.algebra(a.source).dim


@dataclass(frozen=True)
class LieElement:
    """Per-vertex matrices over the vertex algebra."""

    parts: Mapping[str, AMatrix]

    def is_zero(self) -> bool:
        return all(not any(any(v) for row in m for v in row) for m in self.parts.values())

    def to_jsonable(self, field) -> dict:
        return {v: [[[field.to_int_or_str(c) for c in e] for e in row] for row in m]
                for v, m in sorted(self.parts.items())}


def _check_dims(dq: DecoratedQuiver, dims: Mapping[str, int]) -> dict[str, int]:
    out = {}
    for v in dq.vertices:
        d = dims.get(v)
        if d is None or int(d) < 1:
            raise RepresentationError(f"vertex {v} needs a positive dimension")
        out[v] = int(d)
    return out


def zero_representation(dq: DecoratedQuiver, dims: Mapping[str, int]) -> Representation:
    return random_representation(dq, dims, seed=0, values=(0,))


def random_representation(dq: DecoratedQuiver, dims: Mapping[str, int], seed: int,
                          values: Sequence[int] = (-2, -1, 0, 1, 2)) -> Representation:
    dd = double(dq)
    dims = _check_dims(dd, dims)
    rng = random.Random(seed)
    f = dd.field
    data = {}
    for a in dd.arrows:
        src, tgt = dd.algebra(a.source), dd.algebra(a.target)
        if a.kind is ArrowKind.TENSOR:
            rows, cols = dims[a.target] * tgt.dim, dims[a.source] * src.dim
            data[a.id] = tuple(tuple(f(rng.choice(values)) for _ in range(cols)) for _ in range(rows))
        else:
            data[a.id] = tuple(tuple(tuple(f(rng.choice(values)) for _ in range(src.dim))
                                     for _ in range(dims[a.source])) for _ in range(dims[a.target]))
    return Representation(dd, dims, data)


def representation_from_matrices(dq: DecoratedQuiver, dims: Mapping[str, int], data: Mapping[str, Sequence]) -> Representation:
    """Build from explicit data; identification arrows are checked for A-linearity."""
    dd = double(dq)
    dims = _check_dims(dd, dims)
    f = dd.field
    out = {}
    for a in dd.arrows:
        if a.id not in data:
            raise RepresentationError(f"no data for arrow {a.id}")
        raw = data[a.id]
        if a.kind is ArrowKind.TENSOR:
            out[a.id] = tuple(tuple(f(x) for x in row) for row in raw)
        else:
            out[a.id] = tuple(tuple(tuple(f(x) for x in e) for e in row) for row in raw)
    return Representation(dd, dims, out)


# -- the relation route -------------------------------------------------------------------

def evaluate_relation(rep: Representation, convention: str = SIGNED) -> LieElement:
    """Act by ``e_v r`` on each ``V_v`` and read off the matrix over ``A_v``."""
    dd = rep.dq
    f = dd.field
    rel = relation_element(dd, convention)
    total: dict[str, Matrix] = {}
    for term in rel.terms:
        v = term.vertex
        mats = []
        cur = v
        slot = 0
        mats.append(right_action(dd.algebra(cur), rep.dims[cur], term.slots[slot]))
        for aid in term.arrows:
            a = dd.arrow(aid)
            mats.append(rep.k_map(aid))
            cur = a.target
            if a.kind is ArrowKind.TENSOR:
                slot += 1
                mats.append(right_action(dd.algebra(cur), rep.dims[cur], term.slots[slot]))
        op = mats[0]
        for m in mats[1:]:
            op = linalg.matmul(f, m, op)
        acc = total.setdefault(v, [[f.zero] * len(op) for _ in op])
        for i, row in enumerate(op):
            for j, x in enumerate(row):
                if x:
                    acc[i][j] = f.add(acc[i][j], f.mul(term.coef, x))
    parts = {}
    for v in dd.vertices:
        alg, d = dd.algebra(v), rep.dims[v]
        if v in total:
            parts[v] = to_a_matrix(alg, d, d, total[v])
        else:
            parts[v] = a_zero(alg, d, d)
    return LieElement(parts)


# -- the Phi maps ---------------------------------------------------------------------------

def phi(alg: FiniteDimAlgebra, endo: Matrix, lam=None) -> tuple:
    """The element ``sum_l endo(e_l) f_l``; left multiplication by it is the A-linear image of ``endo``."""
    f = alg.field
    duals = frobenius_dual_basis(alg, lam)
    acc = [f.zero] * alg.dim
    for l in range(alg.dim):
        image = tuple(endo[r][l] for r in range(alg.dim))
        acc = [f.add(a, b) for a, b in zip(acc, alg.mul(image, duals[l]))]
    return tuple(f.norm(x) for x in acc)


def mat_phi(alg: FiniteDimAlgebra, rows: int, cols: int, m: Matrix, lam=None) -> AMatrix:
    """Apply :func:`phi` to each ``dim A``-sized block of a k-linear map ``A^cols -> A^rows``."""
    n = alg.dim
    out = []
    for r in range(rows):
        row = []
        for c in range(cols):
            block = [[m[r * n + i][c * n + j] for j in range(n)] for i in range(n)]
            row.append(phi(alg, block, lam))
        out.append(tuple(row))
    return tuple(out)


def form_value(alg: FiniteDimAlgebra, vec: Sequence[Scalar], lam=None) -> Scalar:
    values = alg.form.values if lam is None else tuple(lam)
    f = alg.field
    return f.norm(sum((f.mul(a, b) for a, b in zip(values, vec)), f.zero))


# -- the pairing route -------------------------------------------------------------------------

def _lie_basis(alg: FiniteDimAlgebra, d: int) -> list[tuple[int, int, int]]:
    return [(r, c, b) for r in range(d) for c in range(d) for b in range(alg.dim)]


def _basis_element(alg: FiniteDimAlgebra, d: int, r: int, c: int, b: int) -> AMatrix:
    return tuple(tuple(alg.basis_vector(b) if (i, j) == (r, c) else alg.zero_vector() for j in range(d))
                 for i in range(d))


def _infinitesimal_action(rep: Representation, x: Mapping[str, AMatrix], aid: str) -> Matrix:
    """k-matrix of ``(X . rho)_a = X_t rho_a - rho_a X_s``."""
    dd = rep.dq
    f = dd.field
    a = dd.arrow(aid)
    xs = k_matrix(dd.algebra(a.source), x[a.source])
    xt = k_matrix(dd.algebra(a.target), x[a.target])
    m = rep.k_map(aid)
    left = linalg.matmul(f, xt, m)
    right = linalg.matmul(f, m, xs)
    return [[f.sub(p, q) for p, q in zip(r1, r2)] for r1, r2 in zip(left, right)]


def moment_functional(rep: Representation, x: Mapping[str, AMatrix]) -> Scalar:
    """``sum over positive a of pair(rho_a, (X . rho)_{a*})``.

    The pairing is the k-trace for tensor arrows and ``lambda o tr_A`` for
    identification arrows, where both maps are matrices over A.
    """
    dd = rep.dq
    f = dd.field
    total = f.zero
    for a in dd.arrows:
        if a.starred:
            continue
        h = _infinitesimal_action(rep, x, a.dual)
        if a.kind is ArrowKind.TENSOR:
            val = linalg.trace(f, linalg.matmul(f, rep.k_map(a.id), h))
        else:
            alg = dd.algebra(a.source)
            h_a = to_a_matrix(alg, rep.dims[a.source], rep.dims[a.target], h)
            val = form_value(alg, a_trace(alg, a_matmul(alg, rep.data[a.id], h_a)))
        total = f.add(total, val)
    return f.norm(total)


def moment_map_via_pairing(rep: Representation) -> LieElement:
    dd = rep.dq
    f = dd.field
    for alg in dd.algebras:
        _require_symmetric(alg)
    parts = {}
    zero = {v: a_zero(dd.algebra(v), rep.dims[v], rep.dims[v]) for v in dd.vertices}
    for v in dd.vertices:
        alg, d = dd.algebra(v), rep.dims[v]
        basis = _lie_basis(alg, d)
        values = []
        for r, c, b in basis:
            x = dict(zero)
            x[v] = _basis_element(alg, d, r, c, b)
            values.append(moment_functional(rep, x))
        g = gram_matrix(alg)
        # pairing of basis elements: lambda(tr(E_rc e_b . E_r'c' e_b')) = [c == r'][r == c'] g[b][b']
        pair = [[g[b][b2] if (c == r2 and r == c2) else f.zero for (r2, c2, b2) in basis] for (r, c, b) in basis]
        try:
            y = linalg.solve(f, pair, values)
        except SingularMatrix:
            raise DegenerateForm(f"vertex {v}: trace pairing is degenerate") from None
        coords = {key: val for key, val in zip(basis, y)}
        parts[v] = tuple(tuple(tuple(f.norm(coords[(r, c, b)]) for b in range(alg.dim)) for c in range(d))
                         for r in range(d))
    return LieElement(parts)


def moment_map_via_transport(rep: Representation) -> LieElement:
    """Same element assembled arrow by arrow: ``Mat(Phi)(G F)`` for tensor arrows, ``G F`` for identifications."""
    dd = rep.dq
    f = dd.field
    parts = {v: a_zero(dd.algebra(v), rep.dims[v], rep.dims[v]) for v in dd.vertices}
    for a in dd.arrows:
        if a.starred:
            continue
        i, j = a.source, a.target
        fm, gm = rep.k_map(a.id), rep.k_map(a.dual)
        gf = linalg.matmul(f, gm, fm)
        fg = linalg.matmul(f, fm, gm)
        if a.kind is ArrowKind.TENSOR:
            pi = mat_phi(dd.algebra(i), rep.dims[i], rep.dims[i], gf)
            pj = mat_phi(dd.algebra(j), rep.dims[j], rep.dims[j], fg)
        else:
            alg = dd.algebra(i)
            pi = a_matmul(alg, rep.data[a.dual], rep.data[a.id])
            pj = a_matmul(alg, rep.data[a.id], rep.data[a.dual])
        parts[i] = a_add(dd.algebra(i), parts[i], pi)
        parts[j] = a_add(dd.algebra(j), parts[j], pj, -1)
    return LieElement(parts)


# -- group action ---------------------------------------------------------------------------

def a_inverse(alg: FiniteDimAlgebra, x: AMatrix) -> AMatrix:
    d = len(x)
    try:
        inv = linalg.inverse(alg.field, k_matrix(alg, x))
    except SingularMatrix:
        raise NotInvertible("group element is not invertible") from None
    return to_a_matrix(alg, d, d, inv)


def random_group_element(dq: DecoratedQuiver, dims: Mapping[str, int], seed: int,
                         values: Sequence[int] = (-1, 0, 1, 2)) -> dict[str, AMatrix]:
    """Seeded invertible matrices over each vertex algebra (resampled until invertible)."""
    dd = double(dq)
    rng = random.Random(seed)
    f = dd.field
    out = {}
    for v in dd.vertices:
        alg, d = dd.algebra(v), dims[v]
        while True:
            x = tuple(tuple(tuple(f(rng.choice(values)) for _ in range(alg.dim)) for _ in range(d))
                      for _ in range(d))
            if linalg.rank(f, k_matrix(alg, x)) == d * alg.dim:
                out[v] = x
                break
    return out


def act(g: Mapping[str, AMatrix], rep: Representation) -> Representation:
    """``rho_a -> g_t rho_a g_s^{-1}``."""
    dd = rep.dq
    f = dd.field
    inv = {v: a_inverse(dd.algebra(v), g[v]) for v in dd.vertices}
    data = {}
    for a in dd.arrows:
        s_alg, t_alg = dd.algebra(a.source), dd.algebra(a.target)
        if a.kind is ArrowKind.TENSOR:
            m = linalg.matmul(f, k_matrix(t_alg, g[a.target]),
                              linalg.matmul(f, rep.k_map(a.id), k_matrix(s_alg, inv[a.source])))
            data[a.id] = tuple(tuple(r) for r in m)
        else:
            data[a.id] = a_matmul(s_alg, g[a.target], a_matmul(s_alg, rep.data[a.id], inv[a.source]))
    return Representation(dd, rep.dims, data)


def conjugate(g: Mapping[str, AMatrix], elem: LieElement, dq: DecoratedQuiver) -> LieElement:
    out = {}
    for v, m in elem.parts.items():
        alg = dq.algebra(v)
        out[v] = a_matmul(alg, g[v], a_matmul(alg, m, a_inverse(alg, g[v])))
    return LieElement(out)


# -- verification report ------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentReport:
    case: str
    dims: dict
    seeds: tuple
    all_equal: bool
    first_mismatch: int | None = None

    def to_json(self) -> str:
        body = {"case": self.case, "dims": self.dims, "seeds": list(self.seeds), "all_equal": self.all_equal}
        if self.first_mismatch is not None:
            body["first_mismatch"] = self.first_mismatch
        return json.dumps(body, sort_keys=True)


def verify_moment_map(dq: DecoratedQuiver, dims: Mapping[str, int], seeds: Sequence[int], case: str = "") -> MomentReport:
    dd = double(dq)
    first = None
    for seed in seeds:
        rep = random_representation(dd, dims, seed)
        if moment_map_via_pairing(rep) != evaluate_relation(rep):
            first = seed
            break
    return MomentReport(case or dq.name, dict(_check_dims(dd, dims)), tuple(seeds), first is None, first)
