"""Named decorated quivers used by the CLI suites and the tests."""

from __future__ import annotations

from .algebra import (
    FiniteDimAlgebra,
    UnsupportedParams,
    ground,
    matrix_algebra,
    truncated_poly,
    z_algebra,
)
from .field import QQ, Field
from .quiver import Automorphism, DecoratedQuiver, decorated_quiver, fold

TENSOR = "tensor"
IDENT = "ident"


def _need(n: int, low: int, what: str) -> None:
    if n < low:
        raise UnsupportedParams(f"{what} needs n >= {low}")


def single_vertex(alg: FiniteDimAlgebra | None = None) -> DecoratedQuiver:
    return decorated_quiver({"1": alg or ground()}, name="point")


def a_linear(n: int, field: Field = QQ) -> DecoratedQuiver:
    """Constant-k type A_n oriented 1 -> 2 -> ... -> n."""
    _need(n, 1, "A_n")
    k = ground(field)
    return decorated_quiver({str(i): k for i in range(1, n + 1)},
                            [(f"a{i}", str(i), str(i + 1), TENSOR) for i in range(1, n)], name=f"A{n}")


def a_centered(n: int, field: Field = QQ) -> tuple[DecoratedQuiver, Automorphism]:
    """Constant-k A_{2n-1} with arrows pointing away from vertex n, and the flip i -> 2n-i."""
    _need(n, 1, "A_{2n-1}")
    k = ground(field)
    m = 2 * n - 1
    arrows = []
    for i in range(1, n):
        arrows.append((f"a{i}", str(i + 1), str(i), TENSOR))
        arrows.append((f"a{m - i}", str(m - i), str(m - i + 1), TENSOR))
    dq = decorated_quiver({str(i): k for i in range(1, m + 1)}, arrows, name=f"A{m}")
    flip = Automorphism({str(i): str(2 * n - i) for i in range(1, m + 1)},
                        {f"a{i}": f"a{m - i}" for i in range(1, m)} | {f"a{m - i}": f"a{i}" for i in range(1, n)})
    return dq, flip


def d_series(n: int, field: Field = QQ) -> DecoratedQuiver:
    """Constant-k D_n: chain 1 -> ... -> n-2 with leaves n-1 and n attached to n-2."""
    _need(n, 4, "D_n")
    k = ground(field)
    arrows = [(f"a{i}", str(i), str(i + 1), TENSOR) for i in range(1, n - 2)]
    arrows += [(f"a{n - 2}", str(n - 2), str(n - 1), TENSOR), (f"a{n - 1}", str(n - 2), str(n), TENSOR)]
    return decorated_quiver({str(i): k for i in range(1, n + 1)}, arrows, name=f"D{n}")


def d4_star(field: Field = QQ) -> tuple[DecoratedQuiver, list[Automorphism]]:
    """D_4 with the center 0 mapping to three leaves, and generators of the leaf permutations."""
    k = ground(field)
    dq = decorated_quiver({"0": k, "1": k, "2": k, "3": k},
                          [(f"a{i}", "0", str(i), TENSOR) for i in (1, 2, 3)], name="D4")
    rot = Automorphism({"1": "2", "2": "3", "3": "1"}, {"a1": "a2", "a2": "a3", "a3": "a1"})
    swap = Automorphism({"1": "2", "2": "1"}, {"a1": "a2", "a2": "a1"})
    return dq, [rot, swap]


def e6(field: Field = QQ) -> tuple[DecoratedQuiver, Automorphism]:
    """Constant-k E_6: center 3 with arms 3->2->1, 3->4->5 and 3->6; the arm swap."""
    k = ground(field)
    arrows = [("a", "3", "2", TENSOR), ("b", "2", "1", TENSOR), ("c", "3", "4", TENSOR),
              ("d", "4", "5", TENSOR), ("e", "3", "6", TENSOR)]
    dq = decorated_quiver({str(i): k for i in range(1, 7)}, arrows, name="E6")
    swap = Automorphism({"1": "5", "5": "1", "2": "4", "4": "2"}, {"a": "c", "c": "a", "b": "d", "d": "b"})
    return dq, swap


def star(n: int, field: Field = QQ) -> DecoratedQuiver:
    """Sources 1..n each with one arrow into the sink 0."""
    _need(n, 1, "star")
    k = ground(field)
    verts = {"0": k} | {str(i): k for i in range(1, n + 1)}
    return decorated_quiver(verts, [(f"a{i}", str(i), "0", TENSOR) for i in range(1, n + 1)], name=f"star{n}")


def star_fold(n: int, field: Field = QQ) -> DecoratedQuiver:
    """The star folded by all leaf permutations: k^n -> k."""
    dq = star(n, field)
    gens = []
    if n > 1:
        cyc = {str(i): str(i % n + 1) for i in range(1, n + 1)}
        gens.append(Automorphism(cyc, {f"a{i}": f"a{cyc[str(i)]}" for i in range(1, n + 1)}))
        gens.append(Automorphism({"1": "2", "2": "1"}, {"a1": "a2", "a2": "a1"}))
    return fold(dq, gens) if gens else dq


def k_to(alg: FiniteDimAlgebra, field: Field | None = None, name: str = "") -> DecoratedQuiver:
    """Two vertices ``k -> alg`` joined by one tensor arrow."""
    k = ground(field or alg.field)
    return decorated_quiver({"1": k, "2": alg}, [("a", "1", "2", TENSOR)], name=name or f"k->{alg.name}")


def z_pair(n: int, field: Field = QQ) -> DecoratedQuiver:
    """``Z_n -> k``, the degenerate partner of the folded star."""
    k = ground(field)
    return decorated_quiver({"1": z_algebra(n, field), "0": k}, [("a", "1", "0", TENSOR)], name=f"Z{n}->k")


def matrix_pair(n: int, field: Field = QQ) -> DecoratedQuiver:
    return k_to(matrix_algebra(n, "trace", field), name=f"k->Mat{n}")


def b_series(n: int, field: Field = QQ) -> DecoratedQuiver:
    """``k -> S -> S -> ... -> S`` (n vertices), first arrow tensor, the rest identifications."""
    _need(n, 2, "B_n")
    k, s = ground(field), truncated_poly(2, field)
    verts = {"1": k} | {str(i): s for i in range(2, n + 1)}
    arrows = [("a1", "1", "2", TENSOR)] + [(f"a{i}", str(i), str(i + 1), IDENT) for i in range(2, n)]
    return decorated_quiver(verts, arrows, name=f"B{n}")


def c_series(n: int, field: Field = QQ) -> DecoratedQuiver:
    """``k -> k -> ... -> k -> S`` (n vertices), all arrows tensor."""
    _need(n, 2, "C_n")
    k, s = ground(field), truncated_poly(2, field)
    verts = {str(i): k for i in range(1, n)} | {str(n): s}
    arrows = [(f"a{i}", str(i), str(i + 1), TENSOR) for i in range(1, n)]
    return decorated_quiver(verts, arrows, name=f"C{n}")


def g2(field: Field = QQ) -> DecoratedQuiver:
    return decorated_quiver({"1": ground(field), "2": truncated_poly(3, field)},
                            [("a", "1", "2", TENSOR)], name="G2")


def f4(field: Field = QQ) -> DecoratedQuiver:
    k, s = ground(field), truncated_poly(2, field)
    return decorated_quiver({"1": k, "2": k, "3": s, "4": s},
                            [("a", "1", "2", TENSOR), ("b", "2", "3", TENSOR), ("c", "3", "4", IDENT)], name="F4")


def jordan(field: Field = QQ) -> DecoratedQuiver:
    """One k vertex with an identification loop."""
    return decorated_quiver({"1": ground(field)}, [("l", "1", "1", IDENT)], name="jordan")


NAMED = {
    "G2": g2,
    "F4": f4,
    "jordan": jordan,
}
