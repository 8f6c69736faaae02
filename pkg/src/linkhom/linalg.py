"""Small exact linear algebra over Z and Q for coboundary and pairing matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence


@dataclass(frozen=True)
class SparseIntMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i},{j}) outside a {self.rows}x{self.cols} matrix")
            if v:
                clean[(i, j)] = int(v)
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseIntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(nrows, ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries.get(ij, 0)

    def to_dense(self) -> list[list[int]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def column(self, j: int) -> dict[int, int]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict[tuple[int, int], int] = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + v * w
        return SparseIntMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def rank(self) -> int:
        return len(_rref(self.to_dense())[1])

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return int(determinant(self.to_dense()))

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SparseIntMatrix":
        return cls(data["rows"], data["cols"], {(i, j): v for i, j, v in data["entries"]})


def _rref(rows: list[list]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def determinant(rows: Sequence[Sequence[int]]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a = [list(map(int, r)) for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1])


def primitive(vec: Mapping[int, Fraction]) -> dict[int, int]:
    """Scale a rational vector to a primitive integer vector with positive leading entry."""
    items = {k: Fraction(v) for k, v in vec.items() if v}
    if not items:
        return {}
    lcm = 1
    for v in items.values():
        lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    ints = {k: int(v * lcm) for k, v in items.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    lead = ints[min(ints)]
    s = 1 if lead > 0 else -1
    return {k: s * v // g for k, v in sorted(ints.items())}


def kernel_basis(mat: SparseIntMatrix) -> list[dict[int, int]]:
    """Primitive integer basis of the right kernel, one vector per free column."""
    if mat.rows == 0:
        return [{j: 1} for j in range(mat.cols)]
    red, pivots = _rref(mat.to_dense())
    pivot_row = {c: r for r, c in enumerate(pivots)}
    out = []
    for free in range(mat.cols):
        if free in pivot_row:
            continue
        vec = {free: Fraction(1)}
        for c, r in pivot_row.items():
            if red[r][free] != 0:
                vec[c] = -red[r][free]
        out.append(primitive(vec))
    return out


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_rref([list(r) for r in rows])[1])


def solve(nrows: int, columns: Sequence[Mapping[int, int]], rhs: Mapping[int, int]) -> dict[int, Fraction] | None:
    """One solution x of sum_j x_j * columns[j] == rhs (free variables set to 0), or None."""
    ncols = len(columns)
    aug = [[Fraction(0)] * (ncols + 1) for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            aug[i][j] = Fraction(v)
    for i, v in rhs.items():
        aug[i][ncols] = Fraction(v)
    red, pivots = _rref(aug)
    if ncols in pivots:
        return None
    return {c: red[r][ncols] for r, c in enumerate(pivots) if red[r][ncols] != 0}


def solve_least_support(
    nrows: int,
    columns: Sequence[Mapping[int, int]],
    rhs: Mapping[int, int],
    max_exhaustive: int = 16,
) -> dict[int, Fraction] | None:
    """A solution using as few columns as possible.

    Supports are tried by increasing size in lexicographic order. Beyond
    ``max_exhaustive`` columns the basic solution from row reduction is returned.
    """
    if solve(nrows, columns, rhs) is None:
        return None
    if not any(rhs.values()):
        return {}
    if len(columns) > max_exhaustive:
        return solve(nrows, columns, rhs)
    for size in range(1, len(columns) + 1):
        for support in itertools.combinations(range(len(columns)), size):
            sol = solve(nrows, [columns[j] for j in support], rhs)
            if sol is not None and len(sol) == size:
                return {support[k]: v for k, v in sol.items()}
    return solve(nrows, columns, rhs)


def smith_invariants(mat: SparseIntMatrix) -> list[int]:
    """Nonzero invariant factors of an integer matrix (torsion of the cokernel appears as entries > 1)."""
    if mat.rows == 0 or mat.cols == 0 or mat.is_zero():
        return []
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import invariant_factors

    factors = invariant_factors(Matrix(mat.to_dense()), domain=ZZ)
    return [abs(int(f)) for f in factors if f != 0]
