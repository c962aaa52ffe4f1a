"""Exact linear algebra: Gaussian elimination over F_p and Smith normal form over Z.

Matrices are dense lists of rows of Python ints.  Everything here is
desk scale; arbitrary precision ints make intermediate swell harmless.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NonFieldCoefficients
from .rings import CoefficientRing

Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, modulus: int = 0) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        orow = out[i]
        for k in range(inner):
            c = row[k]
            if c:
                brow = b[k]
                for j in range(cols):
                    if brow[j]:
                        orow[j] += c * brow[j]
        if modulus:
            out[i] = [v % modulus for v in orow]
    return out


def transpose(a: Matrix, cols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


@dataclass
class IntegerMatrix:
    """Sparse integer matrix; ``entries`` maps (row, col) to a nonzero int."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in list(self.entries.items()):
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
            if v == 0:
                del self.entries[(i, j)]

    @classmethod
    def from_dense(cls, rows: Matrix, cols: int | None = None) -> IntegerMatrix:
        ncols = len(rows[0]) if rows else (cols or 0)
        entries = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}
        return cls(len(rows), ncols, entries)

    def to_dense(self) -> Matrix:
        out = zeros(self.rows, self.cols)
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        return IntegerMatrix.from_dense(matmul(self.to_dense(), other.to_dense()), other.cols)

    def __eq__(self, other):
        return (
            isinstance(other, IntegerMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]


# ---------------------------------------------------------------- fields


def rref(rows: Matrix, p: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over F_p; returns (nonzero rows, pivot columns)."""
    m = [[v % p for v in r] for r in rows]
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(v * inv) % p for v in m[r]]
        prow = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_mod_p(rows: Matrix, p: int) -> int:
    return len(rref(rows, p)[1])


def kernel_mod_p(rows: Matrix, ncols: int, p: int) -> Matrix:
    """Basis of {x : rows . x = 0} over F_p, as a list of vectors."""
    red, pivots = rref(rows, p) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r][f]) % p
        basis.append(v)
    return basis


@dataclass(frozen=True)
class Solution:
    """Affine solution set ``particular + span(kernel)``."""

    particular: tuple[int, ...]
    kernel: tuple[tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.kernel)


def solve_linear(matrix: Matrix, target: list[int], ring: CoefficientRing, ncols: int | None = None):
    """Solve ``matrix . x = target`` over a field.

    Returns a :class:`Solution` or ``None`` when the system is inconsistent.
    """
    if not ring.is_field:
        raise NonFieldCoefficients(f"solve_linear needs a field, got {ring}")
    p = ring.modulus
    n = ncols if ncols is not None else (len(matrix[0]) if matrix else 0)
    aug = [list(row) + [t] for row, t in zip(matrix, target)]
    red, pivots = rref(aug, p) if aug else ([], [])
    if n in pivots:
        return None
    x = [0] * n
    for r, pc in enumerate(pivots):
        x[pc] = red[r][n]
    kernel = kernel_mod_p([row[:n] for row in red], n, p) if n else []
    return Solution(tuple(x), tuple(tuple(v) for v in kernel))


# ---------------------------------------------------------------- integers


@dataclass(frozen=True)
class SmithForm:
    D: IntegerMatrix
    U: IntegerMatrix
    V: IntegerMatrix

    @property
    def invariants(self) -> list[int]:
        return [d for d in self.D.diagonal() if d]

    @property
    def rank(self) -> int:
        return len(self.invariants)


def smith_dense(a: Matrix, nrows: int, ncols: int) -> tuple[Matrix, Matrix, Matrix]:
    """Return (D, U, V) with U.a.V = D diagonal, d_1 | d_2 | ..., d_i >= 0."""
    A = [list(r) for r in a]
    U = identity(nrows)
    V = identity(ncols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(nrows, ncols)):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            clean = True
            for i in range(t + 1, nrows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, ncols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        clean = False
            if not clean:
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, nrows) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, ncols) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return A, U, V


def smith_normal_form(m: IntegerMatrix) -> SmithForm:
    D, U, V = smith_dense(m.to_dense(), m.rows, m.cols)
    return SmithForm(
        IntegerMatrix.from_dense(D, m.cols),
        IntegerMatrix.from_dense(U, m.rows),
        IntegerMatrix.from_dense(V, m.cols),
    )


def det_int(a: Matrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def unimodular_inverse(a: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix (adjugate-free, via SNF)."""
    n = len(a)
    D, U, V = smith_dense(a, n, n)
    if any(D[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    # U a V = I  =>  a^{-1} = V U
    return matmul(V, U)


def integer_kernel(a: Matrix, nrows: int, ncols: int) -> Matrix:
    """Z-basis of the kernel lattice of ``a`` as columns (list of column vectors)."""
    D, _, V = smith_dense(a, nrows, ncols)
    r = sum(1 for i in range(min(nrows, ncols)) if D[i][i])
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]
