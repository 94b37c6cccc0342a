"""Matrix-valued bivariate series in t (path length) and s (x-degree, half-units)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping


@dataclass(frozen=True)
class HilbertSeries:
    """Coefficients ``(t, s_half) -> matrix`` indexed by ``(vertex i, vertex j)``.

    Missing keys are zero. ``stabilized`` records that the series is known to
    vanish beyond its last nonzero degree.
    """

    vertices: tuple
    coeffs: Mapping
    cutoff: int
    stabilized: bool
    x_graded: bool = True
    notes: tuple = dc_field(default=())

    # -- views -----------------------------------------------------------------
    def degrees(self) -> list[int]:
        return sorted({t for t, _ in self.coeffs})

    @property
    def max_degree(self) -> int:
        nz = [t for (t, _), m in self.coeffs.items() if any(any(r) for r in m)]
        return max(nz) if nz else -1

    def at(self, t: int, s_half: int) -> list[list[int]]:
        n = len(self.vertices)
        m = self.coeffs.get((t, s_half))
        return [list(r) for r in m] if m else [[0] * n for _ in range(n)]

    def degree_matrix(self, t: int) -> list[list[int]]:
        """Block matrix at t-degree ``t`` with s set to 1."""
        n = len(self.vertices)
        out = [[0] * n for _ in range(n)]
        for (tt, _), m in self.coeffs.items():
            if tt == t:
                for i in range(n):
                    for j in range(n):
                        out[i][j] += m[i][j]
        return out

    def at_s1(self) -> list[int]:
        """Total dimension per t-degree, s set to 1."""
        top = self.max_degree
        return [sum(map(sum, self.degree_matrix(t))) for t in range(top + 1)]

    def block_totals(self) -> list[list[int]]:
        n = len(self.vertices)
        out = [[0] * n for _ in range(n)]
        for m in self.coeffs.values():
            for i in range(n):
                for j in range(n):
                    out[i][j] += m[i][j]
        return out

    @property
    def total(self) -> int:
        return sum(map(sum, self.block_totals()))

    def block_poly(self, i: int, j: int) -> dict[tuple[int, int], int]:
        return {k: m[i][j] for k, m in sorted(self.coeffs.items()) if m[i][j]}

    def nonzero_items(self) -> list[tuple[tuple[int, int], tuple]]:
        return [(k, m) for k, m in sorted(self.coeffs.items()) if any(any(r) for r in m)]

    def same_as(self, other: "HilbertSeries") -> bool:
        return self.vertices == other.vertices and self.nonzero_items() == other.nonzero_items()

    # -- output ----------------------------------------------------------------
    def to_dict(self) -> dict:
        n = len(self.vertices)
        blocks = [[[{"t": t, "s_half": s, "dim": m[i][j]} for (t, s), m in self.nonzero_items() if m[i][j]]
                   for j in range(n)] for i in range(n)]
        return {
            "vertices": list(self.vertices),
            "blocks": blocks,
            "stabilized": self.stabilized,
            "x_graded": self.x_graded,
            "cutoff": self.cutoff,
            "total": self.total,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self, s_at_1: bool = False) -> str:
        n = len(self.vertices)
        if s_at_1:
            return render_poly({(t, 0): c for t, c in enumerate(self.at_s1()) if c})
        entries = [[render_poly(self.block_poly(i, j)) for j in range(n)] for i in range(n)]
        if n == 1:
            return entries[0][0]
        width = max(len(e) for row in entries for e in row)
        return "\n".join("[ " + "  ".join(e.ljust(width) for e in row) + " ]" for row in entries)


def _monomial(t: int, s_half: int) -> str:
    parts = []
    if t:
        parts.append("t" if t == 1 else f"t^{t}")
    if s_half:
        e = Fraction(s_half, 2)
        parts.append("s" if e == 1 else f"s^{e.numerator}" if e.denominator == 1 else f"s^{{{e}}}")
    return " ".join(parts)


def render_poly(poly: Mapping[tuple[int, int], int]) -> str:
    """Render ``{(t, s_half): c}`` as ``1 + t + t^2 s^{1/2}`` in increasing degree."""
    terms = []
    for (t, s), c in sorted(poly.items()):
        if not c:
            continue
        mono = _monomial(t, s)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}{mono}" if " " not in mono and not mono.startswith("s") else f"{abs(c)} {mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
