"""Finite-dimensional algebras by structure constants, and Frobenius forms."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Sequence

from . import linalg
from .field import QQ, Field, Scalar


class AlgebraError(ValueError):
    pass


class NonAssociative(AlgebraError):
    def __init__(self, triple: tuple[int, int, int]) -> None:
        super().__init__(f"(e{triple[0]} e{triple[1]}) e{triple[2]} != e{triple[0]} (e{triple[1]} e{triple[2]})")
        self.triple = triple


class BadUnit(AlgebraError):
    pass


class NotGraded(AlgebraError):
    def __init__(self, pair: tuple[int, int]) -> None:
        super().__init__(f"product e{pair[0]} e{pair[1]} is not homogeneous of the summed x-degree")
        self.pair = pair


class UnsupportedParams(AlgebraError):
    pass


class FieldLacksRoots(AlgebraError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class DegenerateForm(AlgebraError):
    pass


class NotAUnit(AlgebraError):
    pass


Vector = tuple  # dense coefficient vector of field elements


@dataclass(frozen=True)
class FrobeniusForm:
    """A linear functional given by its values on the basis."""

    values: tuple

    def __call__(self, v: Sequence[Scalar]) -> Scalar:
        return sum((a * b for a, b in zip(self.values, v)), 0)


@dataclass(frozen=True)
class FiniteDimAlgebra:
    """Associative unital algebra; ``table[i][j]`` lists ``(k, c)`` with e_i e_j = sum c e_k.

    ``xdeg`` holds per-basis x-degrees in half-units (all zero when ungraded).
    ``form`` is the attached Frobenius form, if any.
    """

    field: Field
    dim: int
    table: tuple
    unit: tuple
    labels: tuple
    xdeg: tuple
    form: FrobeniusForm | None = None
    name: str = dc_field(default="", compare=False)

    # -- arithmetic --------------------------------------------------------
    def basis_vector(self, i: int) -> tuple:
        f = self.field
        return tuple(f.one if k == i else f.zero for k in range(self.dim))

    def zero_vector(self) -> tuple:
        return (self.field.zero,) * self.dim

    def mul(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> tuple:
        if len(u) != self.dim or len(v) != self.dim:
            raise DimensionMismatch(f"expected vectors of length {self.dim}")
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.table[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in row[j]:
                    out[k] += ab * c
        return tuple(f.norm(x) for x in out)

    def left_matrix(self, u: Sequence[Scalar]) -> list[list[Scalar]]:
        """Matrix of ``v -> u v`` acting on column vectors."""
        cols = [self.mul(u, self.basis_vector(j)) for j in range(self.dim)]
        return linalg.transpose(cols)

    def right_matrix(self, u: Sequence[Scalar]) -> list[list[Scalar]]:
        """Matrix of ``v -> v u`` acting on column vectors."""
        cols = [self.mul(self.basis_vector(j), u) for j in range(self.dim)]
        return linalg.transpose(cols)

    def is_unit(self, u: Sequence[Scalar]) -> bool:
        return linalg.rank(self.field, self.left_matrix(u)) == self.dim

    def inverse(self, u: Sequence[Scalar]) -> tuple:
        if not self.is_unit(u):
            raise NotAUnit(f"{tuple(u)} is not invertible")
        return tuple(linalg.solve(self.field, self.left_matrix(u), self.unit))

    def with_form(self, form: FrobeniusForm | Sequence[Scalar] | None) -> "FiniteDimAlgebra":
        if form is not None and not isinstance(form, FrobeniusForm):
            form = FrobeniusForm(tuple(self.field(x) for x in form))
        return replace(self, form=form)

    def same_structure(self, other: "FiniteDimAlgebra") -> bool:
        """Equal as algebras on the nose (forms and names ignored)."""
        return (
            self.field == other.field
            and self.dim == other.dim
            and self.table == other.table
            and self.unit == other.unit
        )

    @property
    def top_xdeg(self) -> int:
        return max(self.xdeg)

    def __repr__(self) -> str:
        return f"FiniteDimAlgebra({self.name or 'anonymous'}, dim={self.dim}, {self.field})"


# -- construction -----------------------------------------------------------

def _sparse_table(dim: int, structure_constants, field: Field) -> tuple:
    entries: dict[tuple[int, int], dict[int, Scalar]] = {}
    sc = list(structure_constants)
    sparse = all(isinstance(t, (list, tuple)) and len(t) == 4 and not isinstance(t[0], (list, tuple)) for t in sc)
    if not sparse:
        if len(sc) != dim or any(len(r) != dim or any(len(x) != dim for x in r) for r in sc):
            raise DimensionMismatch("dense structure constants must be dim x dim x dim")
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    c = field(sc[i][j][k])
                    if c:
                        entries.setdefault((i, j), {})[k] = c
    else:
        for quad in sc:
            if len(quad) != 4:
                raise DimensionMismatch(f"structure constant entry {quad!r} is not (i, j, k, c)")
            i, j, k, c = quad
            if not all(0 <= t < dim for t in (i, j, k)):
                raise DimensionMismatch(f"index out of range in {quad!r}")
            slot = entries.setdefault((i, j), {})
            val = field.norm(slot.get(k, 0) + field(c))
            if val:
                slot[k] = val
            else:
                slot.pop(k, None)
    return tuple(
        tuple(tuple(sorted(entries.get((i, j), {}).items())) for j in range(dim)) for i in range(dim)
    )


def make_algebra(
    dim: int,
    structure_constants,
    unit: Sequence,
    labels: Sequence[str] | None = None,
    xdeg: Sequence[int] | None = None,
    *,
    field: Field = QQ,
    form: Sequence | None = None,
    name: str = "",
) -> FiniteDimAlgebra:
    """Build and validate an algebra.

    ``structure_constants`` is either a dense ``dim x dim x dim`` array or an
    iterable of ``(i, j, k, c)`` entries meaning ``e_i e_j`` has ``c`` at ``e_k``.
    """
    if dim < 1:
        raise DimensionMismatch("dimension must be positive")
    if len(unit) != dim:
        raise DimensionMismatch("unit vector has wrong length")
    if labels is not None and len(labels) != dim:
        raise DimensionMismatch("labels have wrong length")
    if xdeg is not None and len(xdeg) != dim:
        raise DimensionMismatch("xdeg has wrong length")
    if form is not None and len(form) != dim:
        raise DimensionMismatch("form has wrong length")
    alg = FiniteDimAlgebra(
        field=field,
        dim=dim,
        table=_sparse_table(dim, structure_constants, field),
        unit=tuple(field(x) for x in unit),
        labels=tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(dim)),
        xdeg=tuple(int(x) for x in xdeg) if xdeg is not None else (0,) * dim,
        form=FrobeniusForm(tuple(field(x) for x in form)) if form is not None else None,
        name=name,
    )
    validate_algebra(alg)
    return alg


def validate_algebra(alg: FiniteDimAlgebra) -> None:
    """Exhaustive associativity, unitality and gradedness checks."""
    dim = alg.dim
    basis = [alg.basis_vector(i) for i in range(dim)]
    for i in range(dim):
        if alg.mul(alg.unit, basis[i]) != basis[i] or alg.mul(basis[i], alg.unit) != basis[i]:
            raise BadUnit(f"unit fails on basis element {i}")
    prods = [[alg.mul(basis[i], basis[j]) for j in range(dim)] for i in range(dim)]
    for i, j in iproduct(range(dim), repeat=2):
        for k, c in alg.table[i][j]:
            if alg.xdeg[k] != alg.xdeg[i] + alg.xdeg[j]:
                raise NotGraded((i, j))
    for i, j, k in iproduct(range(dim), repeat=3):
        left = alg.mul(prods[i][j], basis[k])
        right = alg.mul(basis[i], prods[j][k])
        if left != right:
            raise NonAssociative((i, j, k))


def multiply(alg: FiniteDimAlgebra, u: Sequence, v: Sequence) -> tuple:
    f = alg.field
    return alg.mul(tuple(f(x) for x in u), tuple(f(x) for x in v))


# -- Frobenius forms ---------------------------------------------------------

def _as_form(alg: FiniteDimAlgebra, lam) -> FrobeniusForm:
    if lam is None:
        if alg.form is None:
            raise DegenerateForm(f"{alg!r} carries no Frobenius form")
        return alg.form
    if isinstance(lam, FrobeniusForm):
        return lam
    if len(lam) != alg.dim:
        raise DimensionMismatch("form has wrong length")
    return FrobeniusForm(tuple(alg.field(x) for x in lam))


def gram_matrix(alg: FiniteDimAlgebra, lam=None) -> list[list[Scalar]]:
    lam = _as_form(alg, lam)
    f = alg.field
    g = []
    for i in range(alg.dim):
        row = []
        for j in range(alg.dim):
            row.append(f.norm(sum((lam.values[k] * c for k, c in alg.table[i][j]), f.zero)))
        g.append(row)
    return g


def frobenius_dual_basis(alg: FiniteDimAlgebra, lam=None) -> list[tuple]:
    """Vectors ``f_j`` with ``lam(e_i f_j) = delta_ij``."""
    g = gram_matrix(alg, lam)
    try:
        inv = linalg.inverse(alg.field, g)
    except linalg.SingularMatrix as exc:
        raise DegenerateForm("Gram matrix of the form is singular") from exc
    return [tuple(inv[k][j] for k in range(alg.dim)) for j in range(alg.dim)]


@dataclass(frozen=True)
class FormReport:
    nondegenerate: bool
    symmetric: bool
    witness: tuple[int, int] | None = None


def validate_frobenius(alg: FiniteDimAlgebra, lam=None) -> FormReport:
    g = gram_matrix(alg, lam)
    nondeg = linalg.rank(alg.field, g) == alg.dim
    witness = None
    for i in range(alg.dim):
        for j in range(alg.dim):
            if g[i][j] != g[j][i]:
                witness = (i, j)
                break
        if witness:
            break
    return FormReport(nondegenerate=nondeg, symmetric=witness is None, witness=witness)


def change_form(alg: FiniteDimAlgebra, lam, u: Sequence) -> FrobeniusForm:
    """The form ``v -> lam(u v)`` for a unit ``u``."""
    lam = _as_form(alg, lam)
    u = tuple(alg.field(x) for x in u)
    if not alg.is_unit(u):
        raise NotAUnit(f"{u} is not invertible")
    return FrobeniusForm(tuple(alg.field.norm(lam(alg.mul(u, alg.basis_vector(i)))) for i in range(alg.dim)))


# -- standard constructors ---------------------------------------------------

def ground(field: Field = QQ) -> FiniteDimAlgebra:
    return make_algebra(1, [(0, 0, 0, 1)], [1], ["1"], [0], field=field, form=[1], name="k")


def sum_of_ground(n: int, field: Field = QQ) -> FiniteDimAlgebra:
    """k^n with coordinatewise product and the sum-of-coordinates form."""
    if n < 1:
        raise UnsupportedParams("sum_of_ground needs n >= 1")
    return make_algebra(
        n, [(i, i, i, 1) for i in range(n)], [1] * n, [f"e{i + 1}" for i in range(n)], [0] * n,
        field=field, form=[1] * n, name=f"k^{n}",
    )


def truncated_poly(n: int, field: Field = QQ) -> FiniteDimAlgebra:
    """k[x]/(x^n) with the top-coefficient form; x has x-degree 1."""
    if n < 1:
        raise UnsupportedParams("truncated_poly needs n >= 1")
    sc = [(i, j, i + j, 1) for i in range(n) for j in range(n) if i + j < n]
    labels = ["1", "x"] + [f"x^{i}" for i in range(2, n)]
    form = [0] * (n - 1) + [1]
    return make_algebra(n, sc, [1] + [0] * (n - 1), labels[:n], [2 * i for i in range(n)],
                        field=field, form=form, name=f"k[x]/(x^{n})")


def bilinear_form_algebra(matrix: Sequence[Sequence], field: Field = QQ) -> FiniteDimAlgebra:
    """k + V + k with v w = (v, w) times the top element; form reads the top coefficient."""
    m = len(matrix)
    if any(len(row) != m for row in matrix):
        raise UnsupportedParams("bilinear form matrix must be square")
    dim = m + 2
    top = m + 1
    sc = [(0, j, j, 1) for j in range(dim)] + [(i, 0, i, 1) for i in range(1, dim)]
    sc += [(a + 1, b + 1, top, matrix[a][b]) for a in range(m) for b in range(m)]
    labels = ["1"] + [f"v{a + 1}" for a in range(m)] + ["w"]
    xdeg = [0] + [2] * m + [4]
    return make_algebra(dim, sc, [1] + [0] * (dim - 1), labels, xdeg, field=field,
                        form=[0] * (dim - 1) + [1], name=f"A(k^{m})")


def z_algebra(n: int, field: Field = QQ) -> FiniteDimAlgebra:
    """The n-dimensional algebra k + span(x_1..x_{n-2}) + k w with x_i x_j = delta_ij w."""
    if n < 1:
        raise UnsupportedParams("z_algebra needs n >= 1")
    if n == 1:
        return replace(ground(field), name="Z_1")
    ident = [[1 if a == b else 0 for b in range(n - 2)] for a in range(n - 2)]
    alg = bilinear_form_algebra(ident, field)
    labels = ("1",) + tuple(f"x{a + 1}" for a in range(n - 2)) + ("w",)
    return replace(alg, labels=labels, name=f"Z_{n}")


def _subsets(n: int) -> list[tuple[int, ...]]:
    from itertools import combinations

    return [c for r in range(n + 1) for c in combinations(range(n), r)]


def clifford(q: Sequence[Sequence], field: Field = QQ) -> FiniteDimAlgebra:
    """Clifford algebra with v_i v_j + v_j v_i = 2 q_ij, on ordered monomials.

    The attached form reads the coefficient of the top monomial. The x-grading
    (by monomial length) is attached only when ``q`` is zero.
    """
    n = len(q)
    if any(len(row) != n for row in q):
        raise UnsupportedParams("clifford needs a square matrix")
    qf = [[field(x) for x in row] for row in q]
    for a in range(n):
        for b in range(n):
            if qf[a][b] != qf[b][a]:
                raise UnsupportedParams("clifford needs a symmetric matrix")
    two = field(2)

    @lru_cache(maxsize=None)
    def normal(word: tuple[int, ...]) -> tuple:
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if a < b:
                continue
            rest = word[:i] + word[i + 2:]
            out: dict = {}
            if a == b:
                if qf[a][a]:
                    linalg.axpy(field, out, dict(normal(rest)), qf[a][a])
                return tuple(out.items())
            linalg.axpy(field, out, dict(normal(word[:i] + (b, a) + word[i + 2:])), field.neg(field.one))
            if qf[a][b]:
                linalg.axpy(field, out, dict(normal(rest)), field.mul(two, qf[a][b]))
            return tuple(out.items())
        return ((word, field.one),)

    basis = _subsets(n)
    index = {s: i for i, s in enumerate(basis)}
    sc = []
    for i, s in enumerate(basis):
        for j, t in enumerate(basis):
            for mono, c in normal(s + t):
                sc.append((i, j, index[mono], c))
    labels = ["1" if not s else "".join(f"v{a + 1}" for a in s) for s in basis]
    graded = all(not x for row in qf for x in row)
    xdeg = [2 * len(s) for s in basis] if graded else [0] * len(basis)
    dim = len(basis)
    return make_algebra(dim, sc, [1] + [0] * (dim - 1), labels, xdeg, field=field,
                        form=[0] * (dim - 1) + [1], name=("exterior" if graded else "Cl") + f"({n})")


def exterior(n: int, field: Field = QQ) -> FiniteDimAlgebra:
    return clifford([[0] * n for _ in range(n)], field)


def matrix_forms(n: int, field: Field = QQ) -> dict[str, FrobeniusForm]:
    """The trace form and the anti-diagonal-sum form on n x n matrices (basis E_ij row-major)."""
    trace = [1 if i == j else 0 for i in range(n) for j in range(n)]
    anti = [1 if i + j == n - 1 else 0 for i in range(n) for j in range(n)]
    return {
        "trace": FrobeniusForm(tuple(field(x) for x in trace)),
        "antidiagonal": FrobeniusForm(tuple(field(x) for x in anti)),
    }


def matrix_algebra(n: int, form: str | None = None, field: Field = QQ) -> FiniteDimAlgebra:
    """Mat_n(k); ``form`` selects ``"trace"`` or ``"antidiagonal"`` (no default)."""
    if n < 1:
        raise UnsupportedParams("matrix_algebra needs n >= 1")
    if n == 1:
        return replace(ground(field), name="Mat_1")
    sc = []
    for i, j, l in iproduct(range(n), repeat=3):
        sc.append((i * n + j, j * n + l, i * n + l, 1))
    unit = [1 if i == j else 0 for i in range(n) for j in range(n)]
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    alg = make_algebra(n * n, sc, unit, labels, None, field=field, name=f"Mat_{n}")
    if form is None:
        return alg
    forms = matrix_forms(n, field)
    if form not in forms:
        raise UnsupportedParams(f"unknown matrix form {form!r}; choose 'trace' or 'antidiagonal'")
    return alg.with_form(forms[form])


def group_like(n: int, field: Field = QQ) -> FiniteDimAlgebra:
    """k[x]/(x^n - 1) with the top-coefficient form."""
    if n < 1:
        raise UnsupportedParams("group_like needs n >= 1")
    sc = [(i, j, (i + j) % n, 1) for i in range(n) for j in range(n)]
    labels = ["1", "x"] + [f"x^{i}" for i in range(2, n)]
    return make_algebra(n, sc, [1] + [0] * (n - 1), labels[:n], None, field=field,
                        form=[0] * (n - 1) + [1], name=f"k[x]/(x^{n}-1)")


def primitive_root_of_unity(n: int, field: Field) -> Scalar:
    if field.characteristic and field.characteristic % n == 0 and n > 1:
        raise FieldLacksRoots(f"n = {n} is divisible by the characteristic")
    if n == 1:
        return field.one
    if field.p is None:
        if n == 2:
            return field(-1)
        raise FieldLacksRoots(f"the rationals have no primitive {n}-th root of unity")
    p = field.p
    if (p - 1) % n:
        raise FieldLacksRoots(f"GF({p}) has no primitive {n}-th root of unity")
    for g in range(2, p):
        z = pow(g, (p - 1) // n, p)
        if all(pow(z, n // d, p) != 1 for d in _prime_factors(n)):
            return z
    raise FieldLacksRoots(f"GF({p}) has no primitive {n}-th root of unity")


def _prime_factors(n: int) -> set[int]:
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def group_like_idempotents(alg: FiniteDimAlgebra) -> list[tuple]:
    """Orthogonal idempotents of k[x]/(x^n - 1) by discrete Fourier interpolation."""
    n, f = alg.dim, alg.field
    zeta = primitive_root_of_unity(n, f)
    inv_n = f.inv(f(n))
    zinv = f.inv(zeta)
    out = []
    for j in range(n):
        w = f.one
        step = f.norm(zinv ** j) if f.p is None else pow(zinv, j, f.p)
        coeffs = []
        for _ in range(n):
            coeffs.append(f.mul(inv_n, w))
            w = f.mul(w, step)
        out.append(tuple(coeffs))
    return out


def product(a: FiniteDimAlgebra, b: FiniteDimAlgebra) -> FiniteDimAlgebra:
    """Direct product with the sum of the two forms (when both carry one)."""
    if a.field != b.field:
        raise UnsupportedParams("factors live over different fields")
    da = a.dim
    sc = [(i, j, k, c) for i in range(da) for j in range(da) for k, c in a.table[i][j]]
    sc += [(i + da, j + da, k + da, c) for i in range(b.dim) for j in range(b.dim) for k, c in b.table[i][j]]
    form = None
    if a.form is not None and b.form is not None:
        form = list(a.form.values) + list(b.form.values)
    return make_algebra(
        da + b.dim, sc, list(a.unit) + list(b.unit),
        [f"{x}|1" for x in a.labels] + [f"{x}|2" for x in b.labels],
        list(a.xdeg) + list(b.xdeg), field=a.field, form=form, name=f"({a.name} x {b.name})",
    )


STANDARD_KINDS = (
    "ground", "sum_of_ground", "truncated_poly", "z_algebra", "bilinear_form_algebra",
    "clifford", "exterior", "matrix_algebra", "group_like", "product",
)


def standard_algebra(kind: str, *params, field: Field = QQ, form: str | None = None) -> FiniteDimAlgebra:
    """Dispatch on a constructor name; see :data:`STANDARD_KINDS`."""
    try:
        if kind == "ground":
            if params:
                raise UnsupportedParams("ground takes no parameters")
            return ground(field)
        if kind == "sum_of_ground":
            return sum_of_ground(int(params[0]), field)
        if kind == "truncated_poly":
            return truncated_poly(int(params[0]), field)
        if kind == "z_algebra":
            return z_algebra(int(params[0]), field)
        if kind == "bilinear_form_algebra":
            return bilinear_form_algebra(params[0], field)
        if kind == "clifford":
            return clifford(params[0], field)
        if kind == "exterior":
            return exterior(int(params[0]), field)
        if kind == "matrix_algebra":
            return matrix_algebra(int(params[0]), form or (params[1] if len(params) > 1 else None), field)
        if kind == "group_like":
            return group_like(int(params[0]), field)
        if kind == "product":
            a, b = params
            return product(a, b)
    except (IndexError, TypeError, ValueError) as exc:
        if isinstance(exc, AlgebraError):
            raise
        raise UnsupportedParams(f"bad parameters for {kind}: {params!r}") from exc
    raise UnsupportedParams(f"unknown algebra kind {kind!r}")


def basis_iter(alg: FiniteDimAlgebra) -> Iterable[tuple]:
    return (alg.basis_vector(i) for i in range(alg.dim))
