"""Decorated quivers satisfying condition (F): doubling, folding, Cartan data."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .algebra import FiniteDimAlgebra, product, validate_frobenius
from .field import QQ


class QuiverError(ValueError):
    pass


class ConditionFViolation(QuiverError):
    pass


class DanglingArrow(QuiverError):
    pass


class NotAnAutomorphism(QuiverError):
    pass


class ArrowKind(str, Enum):
    TENSOR = "tensor"
    IDENT = "ident"


@dataclass(frozen=True)
class Arrow:
    """An arrow with its bimodule tag.

    ``xweight`` is the x-degree of the arrow generator in half-units; ``None``
    on an undoubled quiver asks :func:`double` for the default convention.
    """

    id: str
    source: str
    target: str
    kind: ArrowKind
    xweight: int | None = None
    starred: bool = False
    dual: str | None = None


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # (id, source, target)

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        for aid, s, t in self.arrows:
            if s not in vs or t not in vs:
                raise DanglingArrow(f"arrow {aid} references an undeclared vertex")


@dataclass(frozen=True)
class DecoratedQuiver:
    vertices: tuple
    algebras: tuple
    arrows: tuple
    doubled: bool = False
    name: str = ""

    def __post_init__(self) -> None:
        _validate(self)

    # -- lookups -------------------------------------------------------------
    @property
    def field(self):
        return self.algebras[0].field if self.algebras else QQ

    @property
    def quiver(self) -> Quiver:
        return Quiver(self.vertices, tuple((a.id, a.source, a.target) for a in self.arrows))

    def index(self, v: str) -> int:
        return self.vertices.index(v)

    def algebra(self, v: str) -> FiniteDimAlgebra:
        return self.algebras[self.vertices.index(v)]

    def arrow(self, aid: str) -> Arrow:
        for a in self.arrows:
            if a.id == aid:
                return a
        raise KeyError(aid)

    def out_arrows(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def bimodule_dim(self, a: Arrow) -> int:
        if a.kind is ArrowKind.TENSOR:
            return self.algebra(a.source).dim * self.algebra(a.target).dim
        return self.algebra(a.source).dim

    def with_algebra(self, v: str, alg: FiniteDimAlgebra) -> "DecoratedQuiver":
        """Replace the decoration at ``v``."""
        algs = tuple(alg if u == v else a for u, a in zip(self.vertices, self.algebras))
        return replace(self, algebras=algs)


def _validate(dq: DecoratedQuiver) -> None:
    if len(dq.vertices) != len(dq.algebras):
        raise QuiverError("one algebra per vertex is required")
    Quiver(dq.vertices, tuple((a.id, a.source, a.target) for a in dq.arrows))
    ids = [a.id for a in dq.arrows]
    if len(set(ids)) != len(ids):
        raise QuiverError("duplicate arrow id")
    fields = {a.field for a in dq.algebras}
    if len(fields) > 1:
        raise ConditionFViolation("vertex algebras live over different fields")
    for v, alg in zip(dq.vertices, dq.algebras):
        if alg.form is None:
            raise ConditionFViolation(f"vertex {v}: algebra {alg!r} carries no Frobenius form")
        rep = validate_frobenius(alg)
        if not rep.nondegenerate:
            raise ConditionFViolation(f"vertex {v}: form is degenerate")
        if not rep.symmetric:
            raise ConditionFViolation(f"vertex {v}: form is not symmetric (witness {rep.witness})")
    for a in dq.arrows:
        if a.kind is ArrowKind.IDENT and not dq.algebra(a.source).same_structure(dq.algebra(a.target)):
            raise ConditionFViolation(
                f"arrow {a.id}: identification needs the same algebra at {a.source} and {a.target}")


def decorated_quiver(
    vertices: Mapping[str, FiniteDimAlgebra] | Sequence[tuple[str, FiniteDimAlgebra]],
    arrows: Iterable[tuple] = (),
    name: str = "",
) -> DecoratedQuiver:
    """Convenience constructor; arrows are ``(id, src, tgt, kind[, xweight])``."""
    items = list(vertices.items()) if isinstance(vertices, Mapping) else list(vertices)
    arrs = []
    for spec in arrows:
        aid, s, t, kind = spec[:4]
        xw = spec[4] if len(spec) > 4 else None
        arrs.append(Arrow(str(aid), str(s), str(t), ArrowKind(kind), xw))
    return DecoratedQuiver(tuple(str(v) for v, _ in items), tuple(a for _, a in items), tuple(arrs), name=name)


def default_xweights(dq: DecoratedQuiver, a: Arrow) -> tuple[int, int]:
    """Half-unit weights of (arrow, dual arrow) making every vertex relation homogeneous.

    Tensor arrows get weight 0; an identification arrow over A carries the top
    x-degree of A split evenly between the arrow and its dual.
    """
    if a.kind is ArrowKind.TENSOR:
        return 0, 0
    top = dq.algebra(a.source).top_xdeg
    return top // 2, top - top // 2


def double(dq: DecoratedQuiver) -> DecoratedQuiver:
    """Add a dual arrow ``a*`` for each arrow; idempotent on doubled quivers."""
    if dq.doubled:
        return dq
    arrows = []
    for a in dq.arrows:
        w, w_star = default_xweights(dq, a) if a.xweight is None else (a.xweight, a.xweight)
        star = f"{a.id}*"
        arrows.append(replace(a, xweight=w, starred=False, dual=star))
        arrows.append(Arrow(star, a.target, a.source, a.kind, w_star, True, a.id))
    return replace(dq, arrows=tuple(arrows), doubled=True)


def positive_part(dq: DecoratedQuiver) -> DecoratedQuiver:
    if not dq.doubled:
        return dq
    arrows = tuple(replace(a, dual=None) for a in dq.arrows if not a.starred)
    return replace(dq, arrows=arrows, doubled=False)


def is_bipartite(dq: DecoratedQuiver) -> bool:
    colour: dict[str, int] = {}
    for start in dq.vertices:
        if start in colour:
            continue
        colour[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            for a in dq.arrows:
                if u not in (a.source, a.target):
                    continue
                w = a.target if a.source == u else a.source
                if w == u:
                    return False
                if w not in colour:
                    colour[w] = 1 - colour[u]
                    stack.append(w)
                elif colour[w] == colour[u]:
                    return False
    return True


# -- folding -----------------------------------------------------------------

@dataclass(frozen=True)
class Automorphism:
    vertices: Mapping[str, str]
    arrows: Mapping[str, str]


def _check_automorphism(dq: DecoratedQuiver, g: Automorphism) -> None:
    vmap = {v: g.vertices.get(v, v) for v in dq.vertices}
    amap = {a.id: g.arrows.get(a.id, a.id) for a in dq.arrows}
    if sorted(vmap.values()) != sorted(dq.vertices) or sorted(amap.values()) != sorted(amap):
        raise NotAnAutomorphism("map is not a permutation")
    for a in dq.arrows:
        b = dq.arrow(amap[a.id])
        if b.source != vmap[a.source] or b.target != vmap[a.target]:
            raise NotAnAutomorphism(f"arrow {a.id} is not mapped compatibly with its endpoints")
        if b.kind is not a.kind:
            raise NotAnAutomorphism(f"arrow {a.id} changes kind")
    for v in dq.vertices:
        if not dq.algebra(v).same_structure(dq.algebra(vmap[v])):
            raise NotAnAutomorphism(f"vertex {v} is sent to a vertex with a different algebra")


def _orbits(items: Sequence[str], gens: Sequence[Mapping[str, str]]) -> list[list[str]]:
    seen: set[str] = set()
    out = []
    for x in items:
        if x in seen:
            continue
        orbit, stack = [x], [x]
        seen.add(x)
        while stack:
            y = stack.pop()
            for g in gens:
                z = g.get(y, y)
                if z not in seen:
                    seen.add(z)
                    orbit.append(z)
                    stack.append(z)
        out.append(sorted(orbit, key=items.index))
    return out


def fold(dq: DecoratedQuiver, automorphisms: Automorphism | Sequence[Automorphism]) -> DecoratedQuiver:
    """Quotient by the group generated by ``automorphisms``, decorating orbits by direct sums."""
    if dq.doubled:
        raise QuiverError("fold an undoubled quiver")
    gens = [automorphisms] if isinstance(automorphisms, Automorphism) else list(automorphisms)
    for g in gens:
        _check_automorphism(dq, g)
    vorbits = _orbits(list(dq.vertices), [g.vertices for g in gens])
    aorbits = _orbits([a.id for a in dq.arrows], [g.arrows for g in gens])
    orbit_of = {v: i for i, orb in enumerate(vorbits) for v in orb}

    # classify orbit arrows
    kinds: list[ArrowKind] = []
    bijections: list[dict[str, str] | None] = []
    for orb in aorbits:
        arrs = [dq.arrow(x) for x in orb]
        s_orb = vorbits[orbit_of[arrs[0].source]]
        t_orb = vorbits[orbit_of[arrs[0].target]]
        pairs = [(a.source, a.target) for a in arrs]
        one_dim = all(dq.algebra(a.source).dim == 1 and dq.algebra(a.target).dim == 1 for a in arrs)
        full = sorted(pairs) == sorted((s, t) for s in s_orb for t in t_orb)
        if full and all(a.kind is ArrowKind.TENSOR or one_dim for a in arrs):
            kinds.append(ArrowKind.TENSOR)
            bijections.append(None)
            continue
        sources = [p[0] for p in pairs]
        targets = [p[1] for p in pairs]
        bij = len(set(sources)) == len(s_orb) == len(pairs) and len(set(targets)) == len(t_orb) == len(pairs)
        if bij and all(a.kind is ArrowKind.IDENT or (one_dim and dq.algebra(a.source).same_structure(
                dq.algebra(a.target))) for a in arrs):
            kinds.append(ArrowKind.IDENT)
            bijections.append(dict(pairs))
            continue
        raise ConditionFViolation(f"orbit of arrow {orb[0]} folds to a bimodule outside condition (F)")

    # order orbit summands so identification arrows match summand by summand
    order: dict[int, list[str]] = {}
    for start in range(len(vorbits)):
        if start in order:
            continue
        order[start] = list(vorbits[start])
        stack = [start]
        while stack:
            o = stack.pop()
            for orb, kind, bij in zip(aorbits, kinds, bijections):
                if kind is not ArrowKind.IDENT:
                    continue
                a0 = dq.arrow(orb[0])
                so, to = orbit_of[a0.source], orbit_of[a0.target]
                if so == o:
                    want, other = [bij[v] for v in order[o]], to
                elif to == o:
                    inv = {t: s for s, t in bij.items()}
                    want, other = [inv[v] for v in order[o]], so
                else:
                    continue
                if other in order:
                    if order[other] != want:
                        raise ConditionFViolation("identification arrows force incompatible summand orders")
                else:
                    order[other] = want
                    stack.append(other)

    new_vertices, new_algebras = [], []
    for i in range(len(vorbits)):
        members = order[i]
        alg = dq.algebra(members[0])
        for v in members[1:]:
            alg = product(alg, dq.algebra(v))
        if len(members) > 1:
            alg = replace(alg, name=" + ".join(dq.algebra(v).name for v in members))
        new_vertices.append("+".join(members))
        new_algebras.append(alg)
    new_arrows = []
    for orb, kind in zip(aorbits, kinds):
        a0 = dq.arrow(orb[0])
        xws = {dq.arrow(x).xweight for x in orb}
        new_arrows.append(Arrow("+".join(orb), new_vertices[orbit_of[a0.source]],
                                new_vertices[orbit_of[a0.target]], kind,
                                xws.pop() if len(xws) == 1 else None))
    return DecoratedQuiver(tuple(new_vertices), tuple(new_algebras), tuple(new_arrows),
                           name=f"{dq.name}/fold" if dq.name else "")


def automorphisms(dq: DecoratedQuiver, limit: int = 10) -> list[Automorphism]:
    """All decoration-preserving automorphisms by backtracking (|Q_0| <= limit)."""
    if len(dq.vertices) > limit:
        raise QuiverError(f"brute-force automorphism search is limited to {limit} vertices")
    vs = list(dq.vertices)

    def arrows_between(s: str, t: str) -> list[Arrow]:
        return [a for a in dq.arrows if a.source == s and a.target == t]

    found: list[Automorphism] = []

    def extend(assign: dict[str, str]) -> None:
        if len(assign) == len(vs):
            amap = {}
            for s in vs:
                for t in vs:
                    src, dst = arrows_between(s, t), arrows_between(assign[s], assign[t])
                    if [a.kind for a in src] != [a.kind for a in dst]:
                        return
                    for a, b in zip(src, dst):
                        amap[a.id] = b.id
            found.append(Automorphism(dict(assign), amap))
            return
        v = vs[len(assign)]
        for w in vs:
            if w in assign.values() or not dq.algebra(v).same_structure(dq.algebra(w)):
                continue
            ok = True
            for u, x in list(assign.items()) + [(v, w)]:
                if len(arrows_between(u, v)) != len(arrows_between(x, w)) or \
                        len(arrows_between(v, u)) != len(arrows_between(w, x)):
                    ok = False
                    break
            if ok:
                assign[v] = w
                extend(assign)
                del assign[v]

    extend({})
    return found


# -- Cartan data -------------------------------------------------------------

Poly = dict  # half-unit exponent of s -> integer coefficient


def hilbert_poly(alg: FiniteDimAlgebra) -> Poly:
    out: Poly = {}
    for d in alg.xdeg:
        out[d] = out.get(d, 0) + 1
    return out


def _shift(p: Poly, k: int) -> Poly:
    return {e + k: c for e, c in p.items()}


def _padd(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
        if not out[e]:
            del out[e]
    return out


@dataclass(frozen=True)
class CartanData:
    vertices: tuple
    A: tuple  # integer matrix
    D: tuple  # diagonal entries dim A_i
    A_s: tuple  # matrix of Poly
    B_s: tuple  # diagonal of Poly

    @property
    def cartan(self) -> list[list[int]]:
        n = len(self.vertices)
        return [[(2 if i == j else 0) - self.A[i][j] for j in range(n)] for i in range(n)]


def relation_xdeg(dq: DecoratedQuiver, v: str) -> int | None:
    """x-degree (half-units) of the vertex-v component of the preprojective relation."""
    dd = double(dq)
    for a in dd.arrows:
        if v not in (a.source, a.target):
            continue
        dual = dd.arrow(a.dual)
        w = a.xweight + dual.xweight
        if a.kind is ArrowKind.TENSOR:
            return w + dd.algebra(v).top_xdeg
        return w
    return None


def cartan_data(dq: DecoratedQuiver) -> CartanData:
    """Cartan data counted over the doubled arrows, so that DA is symmetric."""
    dd = double(dq)
    n = len(dd.vertices)
    idx = {v: i for i, v in enumerate(dd.vertices)}
    A = [[0] * n for _ in range(n)]
    A_s: list[list[Poly]] = [[{} for _ in range(n)] for _ in range(n)]
    for a in dd.arrows:
        i, j = idx[a.source], idx[a.target]
        num = dd.bimodule_dim(a)
        den = dd.algebra(a.source).dim
        A[i][j] += Fraction(num, den)
        contrib = hilbert_poly(dd.algebra(a.target)) if a.kind is ArrowKind.TENSOR else {0: 1}
        A_s[i][j] = _padd(A_s[i][j], _shift(contrib, a.xweight))
    B = []
    for v in dd.vertices:
        d = relation_xdeg(dq, v)
        B.append({} if d is None else {d: 1})
    A_int = tuple(tuple(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in row) for row in A)
    return CartanData(dd.vertices, A_int, tuple(a.dim for a in dd.algebras),
                      tuple(tuple(row) for row in A_s), tuple(B))


def is_dynkin(dq: DecoratedQuiver) -> bool:
    data = cartan_data(dq)
    minors = linalg.leading_minors(QQ, [[Fraction(x) for x in row] for row in data.cartan])
    return all(m > 0 for m in minors)


def dynkin_minors(dq: DecoratedQuiver) -> list[Fraction]:
    data = cartan_data(dq)
    return linalg.leading_minors(QQ, [[Fraction(x) for x in row] for row in data.cartan])

