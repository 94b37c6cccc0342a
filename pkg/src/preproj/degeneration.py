"""Frobenius degenerations: forms vanishing on 1, the most degenerate algebra, filtrations, flatness.

A degeneration is certified either by an explicit filtration and its
associated graded algebra, or by substituting one decoration for another
and comparing Hilbert series degree by degree.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import permutations, product as iproduct
from typing import Sequence

from . import linalg
from .algebra import (
    FiniteDimAlgebra,
    FrobeniusForm,
    _as_form,
    bilinear_form_algebra,
    change_form,
    make_algebra,
    validate_frobenius,
)
from .field import Scalar
from .linalg import RowSpace
from .preprojective import SIGNED, hilbert_series
from .quiver import DecoratedQuiver, double
from .series import HilbertSeries


class DegenerationError(ValueError):
    pass


class NoSuchForm(DegenerationError):
    pass


class SearchExhausted(DegenerationError):
    pass


class FormNonVanishingOnUnit(DegenerationError):
    pass


class NotMultiplicative(DegenerationError):
    def __init__(self, message: str, witness: tuple) -> None:
        super().__init__(message)
        self.witness = witness


class NotComparable(DegenerationError):
    pass


class MonotonicityViolation(DegenerationError):
    pass


def _kernel_basis(alg: FiniteDimAlgebra, lam: FrobeniusForm) -> list[list[Scalar]]:
    return linalg.nullspace(alg.field, [list(lam.values)], alg.dim)


def _combine(alg: FiniteDimAlgebra, basis: Sequence[Sequence[Scalar]], coeffs: Sequence[int]) -> tuple:
    f = alg.field
    out = [f.zero] * alg.dim
    for c, vec in zip(coeffs, basis):
        if c:
            out = [f.add(a, f.mul(f(c), b)) for a, b in zip(out, vec)]
    return tuple(out)


def form_vanishing_on_unit(alg: FiniteDimAlgebra, lam=None, seed: int = 0,
                           samples: int = 1000) -> FrobeniusForm:
    """A form ``lam o L_u`` with ``u`` a unit in ``ker lam``, so that the new form kills 1.

    Seeded sampling of small-integer vectors in ``ker lam`` runs first; then a
    deterministic sweep over coefficients in ``{-2..2}`` on a kernel basis.
    """
    lam = _as_form(alg, lam)
    f = alg.field
    if not f.norm(lam(alg.unit)):
        return lam
    if alg.dim == 1:
        raise NoSuchForm("the ground field has no unit in the kernel of a nonzero form")
    kernel = _kernel_basis(alg, lam)
    rng = random.Random(seed)
    for _ in range(samples):
        coeffs = [rng.randint(-3, 3) for _ in kernel]
        u = _combine(alg, kernel, coeffs)
        if any(u) and alg.is_unit(u):
            return change_form(alg, lam, u)
    if len(kernel) <= 6:
        for coeffs in iproduct((0, 1, -1, 2, -2), repeat=len(kernel)):
            u = _combine(alg, kernel, coeffs)
            if any(u) and alg.is_unit(u):
                return change_form(alg, lam, u)
    if f.characteristic == 2:
        raise NoSuchForm("no unit in the kernel of the form over a field of two elements")
    raise SearchExhausted("no unit found in the kernel of the form")


@dataclass(frozen=True)
class MostDegenerate:
    algebra: FiniteDimAlgebra
    form_matrix: tuple
    middle_basis: tuple  # chosen complement of k1 inside ker(lam), as vectors of the input algebra
    top: tuple  # element with lam(top) = 1


def most_degenerate(alg: FiniteDimAlgebra, lam=None) -> MostDegenerate:
    """Associated graded of ``k1 < ker(lam) < A``: the algebra ``k + ker(lam)/k1 + k`` with the induced form."""
    lam = _as_form(alg, lam)
    f = alg.field
    if f.norm(lam(alg.unit)):
        raise FormNonVanishingOnUnit("apply form_vanishing_on_unit first")
    if alg.dim < 2:
        raise FormNonVanishingOnUnit("the ground field carries no nonzero form vanishing on 1")
    space = RowSpace(f, [{i: x for i, x in enumerate(alg.unit) if x}])
    middle = []
    for vec in _kernel_basis(alg, lam):
        if space.add({i: x for i, x in enumerate(vec) if x}):
            middle.append(tuple(vec))
    top = None
    for i in range(alg.dim):
        val = f.norm(lam(alg.basis_vector(i)))
        if val:
            top = tuple(f.mul(f.inv(val), x) for x in alg.basis_vector(i))
            break
    if top is None:
        raise FormNonVanishingOnUnit("the form is zero")
    matrix = tuple(tuple(f.norm(lam(alg.mul(a, b))) for b in middle) for a in middle)
    out = bilinear_form_algebra([list(r) for r in matrix], f)
    return MostDegenerate(out, matrix, tuple(middle), top)


# -- filtrations -------------------------------------------------------------------------------

@dataclass(frozen=True)
class Filtration:
    """Spanning vectors of ``F_0 <= F_1 <= ... <= F_m = A``."""

    layers: tuple

    @property
    def top(self) -> int:
        return len(self.layers) - 1


def generator_filtration(alg: FiniteDimAlgebra, generators: Sequence[Sequence[Scalar]]) -> Filtration:
    """``F_0 = k1`` and ``F_i = F_{i-1} + F_{i-1} * span(generators)`` until it fills ``A``."""
    f = alg.field
    layers = []
    space = RowSpace(f, [{i: x for i, x in enumerate(alg.unit) if x}])
    current = [tuple(alg.unit)]
    layers.append(tuple(current))
    while space.rank < alg.dim:
        new = list(current)
        for u in current:
            for g in generators:
                prod = alg.mul(u, g)
                if space.add({i: x for i, x in enumerate(prod) if x}):
                    new.append(prod)
        if len(new) == len(current):
            raise DegenerationError("generators do not generate the algebra")
        current = new
        layers.append(tuple(current))
    return Filtration(tuple(layers))


def associated_graded(alg: FiniteDimAlgebra, filtration: Filtration, name: str = "") -> FiniteDimAlgebra:
    """Graded algebra on coset representatives; layer ``i`` gets x-degree ``i``."""
    f = alg.field
    reps: list[tuple] = []
    layer_of: list[int] = []
    spaces: list[RowSpace] = []
    space = RowSpace(f)
    for i, layer in enumerate(filtration.layers):
        for vec in layer:
            if space.add({j: x for j, x in enumerate(vec) if x}):
                reps.append(tuple(vec))
                layer_of.append(i)
        spaces.append(RowSpace(f, [{j: x for j, x in enumerate(v) if x} for v in reps]))
    if space.rank != alg.dim:
        raise DegenerationError("the last layer of the filtration must be the whole algebra")
    basis_matrix = linalg.transpose([list(r) for r in reps])
    inv = linalg.inverse(f, basis_matrix)

    def coords(vec: Sequence[Scalar]) -> list[Scalar]:
        return linalg.matvec(f, inv, list(vec))

    top = filtration.top
    sc = []
    for a, u in enumerate(reps):
        for b, w in enumerate(reps):
            i, j = layer_of[a], layer_of[b]
            prod = alg.mul(u, w)
            level = min(i + j, top)
            if not spaces[level].contains({k: x for k, x in enumerate(prod) if x}):
                raise NotMultiplicative(f"F_{i} F_{j} is not inside F_{i + j}", (a, b))
            if i + j > top:
                continue
            for k, c in enumerate(coords(prod)):
                if c and layer_of[k] == i + j:
                    sc.append((a, b, k, c))
    unit_coords = coords(alg.unit)
    unit = [c if layer_of[k] == 0 else f.zero for k, c in enumerate(unit_coords)]
    labels = [f"g{layer_of[k]}_{k}" for k in range(alg.dim)]
    gr = make_algebra(alg.dim, sc, unit, labels, [2 * l for l in layer_of], field=f,
                      name=name or f"gr({alg.name})")
    top_idx = [k for k in range(alg.dim) if layer_of[k] == top]
    if len(top_idx) == 1:
        form = [f.one if k == top_idx[0] else f.zero for k in range(alg.dim)]
        candidate = gr.with_form(form)
        if validate_frobenius(candidate).nondegenerate:
            return candidate
    return gr


def graded_dims(alg: FiniteDimAlgebra) -> dict[int, int]:
    out: dict[int, int] = {}
    for x in alg.xdeg:
        out[x] = out.get(x, 0) + 1
    return dict(sorted(out.items()))


# -- flatness ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class FlatnessReport:
    quiver: str
    left: str
    right: str
    cutoff: int
    flat: bool
    mode: str
    first_difference: dict | None
    violations: tuple  # coefficients where the degenerate side exceeds the deformed side

    def to_dict(self) -> dict:
        body = {"quiver": self.quiver, "left": self.left, "right": self.right, "cutoff": self.cutoff,
                "flat": self.flat, "mode": self.mode, "monotone": not self.violations}
        if self.first_difference is not None:
            body["first_difference"] = self.first_difference
        if self.violations:
            body["violations"] = list(self.violations)
        return body

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def shape_matching(left: DecoratedQuiver, right: DecoratedQuiver) -> tuple[int, ...]:
    """A vertex bijection preserving doubled arrow counts and algebra dimensions, or NotComparable."""
    dl, dr = double(left), double(right)
    n = len(dl.vertices)
    if n != len(dr.vertices):
        raise NotComparable("different numbers of vertices")
    if n > 8:
        raise NotComparable("shape matching is limited to 8 vertices")

    def counts(dq: DecoratedQuiver) -> list[list[int]]:
        idx = {v: i for i, v in enumerate(dq.vertices)}
        m = [[0] * n for _ in range(n)]
        for a in dq.arrows:
            m[idx[a.source]][idx[a.target]] += 1
        return m

    cl, cr = counts(dl), counts(dr)
    dims_l = [a.dim for a in dl.algebras]
    dims_r = [a.dim for a in dr.algebras]
    for perm in permutations(range(n)):
        if any(dims_l[i] != dims_r[perm[i]] for i in range(n)):
            continue
        if all(cl[i][j] == cr[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            return perm
    raise NotComparable("quiver shapes or vertex dimensions differ")


def _degree_block_dims(hs: HilbertSeries) -> dict[tuple[int, int, int], int]:
    out: dict = {}
    n = len(hs.vertices)
    for (t, _), m in hs.nonzero_items():
        for i in range(n):
            for j in range(n):
                if m[i][j]:
                    out[(t, i, j)] = out.get((t, i, j), 0) + m[i][j]
    return out


def flatness_check(deformed: DecoratedQuiver, degenerate: DecoratedQuiver, cutoff: int | None = None,
                   mode: str = "blocks", convention: str = SIGNED) -> FlatnessReport:
    """Compare ``dim Pi^t(i, j)`` (x summed) of the two decorations up to ``cutoff``.

    ``mode="degrees"`` compares per-degree totals only, for quivers of different shape.
    """
    if mode not in ("blocks", "degrees"):
        raise ValueError(f"unknown mode {mode!r}")
    perm = shape_matching(deformed, degenerate) if mode == "blocks" else None
    hl = hilbert_series(deformed, convention, cutoff)
    hr = hilbert_series(degenerate, convention, cutoff)
    horizon = min(hl.cutoff, hr.cutoff)
    if mode == "blocks":
        left = {k: v for k, v in _degree_block_dims(hl).items() if k[0] <= horizon}
        right = {(t, perm.index(i), perm.index(j)): v for (t, i, j), v in _degree_block_dims(hr).items() if t <= horizon}
    else:
        left = {(t, 0, 0): v for t, v in enumerate(hl.at_s1()) if v and t <= horizon}
        right = {(t, 0, 0): v for t, v in enumerate(hr.at_s1()) if v and t <= horizon}
    first = None
    violations = []
    for key in sorted(set(left) | set(right)):
        a, b = left.get(key, 0), right.get(key, 0)
        if a != b and first is None:
            t, i, j = key
            first = {"t": t, "i": i, "j": j, "left_dim": a, "right_dim": b}
        if b > a:
            violations.append({"t": key[0], "i": key[1], "j": key[2], "left_dim": a, "right_dim": b})
    flat = first is None and hl.stabilized == hr.stabilized
    if first is None and hl.stabilized != hr.stabilized:
        first = {"stabilized": [hl.stabilized, hr.stabilized]}
    return FlatnessReport(deformed.name or "deformed", deformed.name, degenerate.name, horizon, flat, mode,
                          first, tuple(violations))


def check_monotone(report: FlatnessReport) -> None:
    """Raise if the degenerate side ever exceeds the deformed side."""
    if report.violations:
        raise MonotonicityViolation(f"degenerate side exceeds deformed side at {report.violations[0]}")
