"""Named acceptance bundles shared by ``preproj reproduce`` and the test suite."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import catalog
from .algebra import FiniteDimAlgebra, change_form, ground, truncated_poly, z_algebra
from .degeneration import FlatnessReport, flatness_check
from .field import QQ, Field
from .preprojective import ALL_PLUS, SIGNED, hilbert_series
from .quiver import DecoratedQuiver, decorated_quiver, fold, is_bipartite
from .repvariety import verify_moment_map

# Path-length horizon for the star and matrix comparisons.
STAR_DEGREES = 5
STAR_SIZES = range(2, 9)
MATRIX_SIZES = (2, 3)
MOMENT_SEEDS = range(20)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def b_total(n: int) -> int:
    return n * (2 * n - 1) * (2 * n + 1) // 3


def c_total(n: int) -> int:
    return n * (n + 1) * (2 * n + 1) // 3


def folded_a(n: int, field: Field = QQ) -> DecoratedQuiver:
    dq, flip = catalog.a_centered(n, field)
    return fold(dq, flip)


def dynkin_suite(field: Field = QQ) -> list[Check]:
    out = []
    g2 = hilbert_series(catalog.g2(field))
    out.append(Check("G2 total 28, series 4+6t+8t^2+6t^3+4t^4", g2.total == 28 and g2.at_s1() == [4, 6, 8, 6, 4],
                     f"total {g2.total}, by degree {g2.at_s1()}"))
    f4 = hilbert_series(catalog.f4(field))
    want = [6, 10, 14, 18, 20, 20, 20, 18, 14, 10, 6]
    out.append(Check("F4 total 156", f4.total == 156 and f4.at_s1() == want, f"total {f4.total}, by degree {f4.at_s1()}"))
    for n in (2, 3, 4, 5):
        b = hilbert_series(catalog.b_series(n, field)).total
        a = hilbert_series(catalog.a_centered(n, field)[0]).total
        out.append(Check(f"B{n} total {b_total(n)} equals A{2 * n - 1}", b == a == b_total(n), f"B {b}, A {a}"))
    for name, rep in fold_reports(field):
        out.append(Check(f"{name} is flat onto B", rep.flat, "" if rep.flat else str(rep.first_difference)))
    for n in (4, 5, 6):
        h = hilbert_series(catalog.c_series(n, field))
        blocks = h.block_totals()
        ok = all(blocks[i][j] == 2 * min(i + 1, j + 1) for i in range(n) for j in range(n))
        out.append(Check(f"C{n} blocks 2*min(i,j), total {c_total(n)}", ok and h.total == c_total(n), f"total {h.total}"))
    return out


def star_reports(field: Field = QQ, sizes=STAR_SIZES, degrees: int = STAR_DEGREES) -> list[tuple[str, FlatnessReport]]:
    out = []
    for n in sizes:
        z = catalog.z_pair(n, field)
        out.append((f"star({n}) folded", flatness_check(catalog.star_fold(n, field), z, cutoff=degrees)))
        out.append((f"star({n})", flatness_check(catalog.star(n, field), z, cutoff=degrees, mode="degrees")))
    return out


def matrix_reports(field: Field = QQ, sizes=MATRIX_SIZES, degrees: int = STAR_DEGREES) -> list[tuple[str, FlatnessReport]]:
    return [(f"k->Mat{n}", flatness_check(catalog.matrix_pair(n, field), catalog.k_to(z_algebra(n * n, field)), cutoff=degrees))
            for n in sizes]


def fold_reports(field: Field = QQ, sizes=(2, 3, 4, 5)) -> list[tuple[str, FlatnessReport]]:
    return [(f"A{2 * n - 1} folded", flatness_check(folded_a(n, field), catalog.b_series(n, field))) for n in sizes]


def flatness_reports(field: Field = QQ) -> list[tuple[str, FlatnessReport]]:
    """Every deformed/degenerate comparison the suites run."""
    return fold_reports(field) + star_reports(field) + matrix_reports(field)


def star_suite(field: Field = QQ, sizes=STAR_SIZES, degrees: int = STAR_DEGREES) -> list[Check]:
    reports = dict(star_reports(field, sizes, degrees))
    out = []
    for n in sizes:
        folded, plain = reports[f"star({n}) folded"], reports[f"star({n})"]
        ok = folded.flat and plain.flat and not folded.violations and not plain.violations
        out.append(Check(f"star({n}) and its fold match Z{n}->k up to degree {degrees}", ok,
                         "" if ok else str(folded.first_difference or plain.first_difference)))
    return out


def matrix_suite(field: Field = QQ, sizes=MATRIX_SIZES, degrees: int = STAR_DEGREES) -> list[Check]:
    out = []
    for n in sizes:
        left = hilbert_series(catalog.matrix_pair(n, field), cutoff=degrees).at_s1()
        right = hilbert_series(catalog.k_to(z_algebra(n * n, field)), cutoff=degrees).at_s1()
        out.append(Check(f"k->Mat{n} matches k->Z{n * n} up to degree {degrees}", left == right, f"{left} vs {right}"))
    return out


def moment_cases(field: Field = QQ) -> list[tuple[str, DecoratedQuiver, list[dict]]]:
    """(name, quiver, dimension vectors) for the moment-map comparison."""
    k, s, s3 = ground(field), truncated_poly(2, field), truncated_poly(3, field)
    two = [{"1": 1, "2": 1}, {"1": 2, "2": 1}, {"1": 2, "2": 2}]
    return [
        ("A2", catalog.a_linear(2, field), two),
        ("B2", catalog.b_series(2, field), two),
        ("S=S", decorated_quiver({"1": s, "2": s}, [("a", "1", "2", "ident")], name="S=S"), two),
        ("S->k", decorated_quiver({"1": s, "2": k}, [("a", "1", "2", "tensor")], name="S->k"), two),
        ("S3->k", decorated_quiver({"1": s3, "2": k}, [("a", "1", "2", "tensor")], name="S3->k"), two),
        ("Z4->k", decorated_quiver({"1": z_algebra(4, field), "2": k}, [("a", "1", "2", "tensor")], name="Z4->k"), two),
        ("S loop", decorated_quiver({"1": s}, [("l", "1", "1", "ident")], name="S loop"), [{"1": 1}, {"1": 2}]),
    ]


def moment_suite(field: Field = QQ, seeds=MOMENT_SEEDS) -> list[Check]:
    out = []
    for name, dq, dim_list in moment_cases(field):
        for dims in dim_list:
            rep = verify_moment_map(dq, dims, list(seeds), name)
            label = ",".join(str(dims[v]) for v in sorted(dims))
            out.append(Check(f"moment map {name} d=({label}) over {len(rep.seeds)} seeds", rep.all_equal,
                             "" if rep.all_equal else f"first mismatch at seed {rep.first_mismatch}"))
    return out


def random_unit(alg: FiniteDimAlgebra, rng: random.Random) -> tuple:
    while True:
        u = tuple(alg.field(rng.randint(-3, 3)) for _ in range(alg.dim))
        if alg.is_unit(u):
            return u


def reform(dq: DecoratedQuiver, v: str, u) -> DecoratedQuiver:
    """Replace the form at ``v`` by ``lambda(u -)``; ``u`` must be central for symmetry."""
    alg = dq.algebra(v)
    return dq.with_algebra(v, alg.with_form(change_form(alg, alg.form, u)))


def forms_suite(field: Field = QQ, seed: int = 0) -> list[Check]:
    rng = random.Random(seed)
    out = []
    commutative = [catalog.b_series(2, field), catalog.g2(field), catalog.c_series(4, field),
                   catalog.z_pair(4, field), catalog.k_to(truncated_poly(4, field))]
    for dq in commutative:
        base = hilbert_series(dq)
        v = next(u for u, a in zip(dq.vertices, dq.algebras) if a.dim > 1)
        u = random_unit(dq.algebra(v), rng)
        other = hilbert_series(reform(dq, v, u))
        out.append(Check(f"{dq.name}: series unchanged by unit {list(map(str, u))} at vertex {v}", base.same_as(other)))
    for dq in [catalog.b_series(2, field), catalog.g2(field), catalog.f4(field), catalog.c_series(4, field),
               catalog.star_fold(3, field)]:
        if not is_bipartite(dq):
            continue
        same = hilbert_series(dq, SIGNED).same_as(hilbert_series(dq, ALL_PLUS))
        out.append(Check(f"{dq.name}: signed and all-plus conventions agree", same))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "dynkin": dynkin_suite,
    "star": star_suite,
    "matrix": matrix_suite,
    "moment": moment_suite,
    "forms": forms_suite,
}
