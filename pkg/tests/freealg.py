"""Independent oracle: homogeneous ideals of a free algebra on one vertex, by brute-force spans."""

from fractions import Fraction
from itertools import product


def words(alphabet, n):
    return [".".join(w) for w in product(alphabet, repeat=n)] if n else [""]


def join(*parts):
    return ".".join(p for p in parts if p)


def sandwich(elem, u, w):
    return {join(u, m, w): c for m, c in elem.items()}


def rank(rows):
    """Rank of integer/Fraction row vectors, exact Gaussian elimination."""
    pivots = {}
    for row in rows:
        row = [Fraction(x) for x in row]
        for col, prow in pivots.items():
            if row[col]:
                f = row[col] / prow[col]
                row = [a - f * b for a, b in zip(row, prow)]
        lead = next((i for i, x in enumerate(row) if x), None)
        if lead is not None:
            pivots[lead] = row
    return len(pivots)


def ideal_rows(alphabet, relations, degree):
    """Coordinate rows spanning the degree-``degree`` part of the two-sided ideal."""
    index = {w: i for i, w in enumerate(words(alphabet, degree))}
    rows = []
    for rel, rdeg in relations:
        for left in range(degree - rdeg + 1):
            for u in words(alphabet, left):
                for w in words(alphabet, degree - rdeg - left):
                    row = [0] * len(index)
                    for m, c in sandwich(rel, u, w).items():
                        row[index[m]] += c
                    rows.append(row)
    return rows, index


def quotient_dim(alphabet, relations, degree):
    rows, index = ideal_rows(alphabet, relations, degree)
    return len(index) - rank(rows)


def in_ideal(alphabet, relations, degree, elem):
    rows, index = ideal_rows(alphabet, relations, degree)
    vec = [0] * len(index)
    for m, c in elem.items():
        vec[index[m]] += c
    return rank(rows + [vec]) == rank(rows)
