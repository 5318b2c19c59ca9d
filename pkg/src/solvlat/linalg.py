"""Exact linear algebra over Q and Q(sqrt(D)), plus integer normal forms.

Matrices are lists of rows. Entries may be ints, mpq or QuadNum; ints and
Fractions are promoted to mpq so that division stays exact.
"""
from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form

from .errors import DimensionMismatch, SingularSystem
from .qfield import QuadNum, Rational, rational


def scalar(x):
    if type(x) is QuadNum or type(x) is Rational:
        return x
    if isinstance(x, (int, Fraction)):
        return rational(x)
    return x


def as_matrix(A) -> list[list]:
    return [[scalar(x) for x in row] for row in A]


def zeros(m: int, n: int) -> list[list]:
    return [[mpq(0)] * n for _ in range(m)]


def identity(n: int) -> list[list]:
    return [[mpq(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    if A and B and len(A[0]) != len(B):
        raise DimensionMismatch(f"{len(A)}x{len(A[0])} times {len(B)}x{len(B[0])}")
    Bt = transpose(B)
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            acc = mpq(0)
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(A, v):
    out = []
    for row in A:
        acc = mpq(0)
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def mat_sub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_add(A, B):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A):
    return [[c * x for x in row] for row in A]


def is_zero_matrix(A) -> bool:
    return all(not x for row in A for x in row)


def rref(A):
    """Reduced row echelon form. Returns ``(R, pivot_columns)``."""
    R = as_matrix(A)
    if not R:
        return R, []
    m, n = len(R), len(R[0])
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        p = next((i for i in range(row, m) if R[i][col]), None)
        if p is None:
            continue
        R[row], R[p] = R[p], R[row]
        inv = 1 / R[row][col]
        R[row] = [x * inv if x else x for x in R[row]]
        pivot_row = R[row]
        for i in range(m):
            if i != row and R[i][col]:
                f = R[i][col]
                R[i] = [x - f * y if y else x for x, y in zip(R[i], pivot_row)]
        pivots.append(col)
        row += 1
    return R, pivots


def rank(A) -> int:
    if not A or not A[0]:
        return 0
    ech = SparseEchelon()
    for row in A:
        ech.add({j: x for j, x in enumerate(row) if x})
    return ech.rank


def nullspace(A, ncols: int | None = None) -> list[list]:
    """Basis of ``{x : A x = 0}``; each vector has a 1 at one free column."""
    if not A:
        n = ncols or 0
        return [[mpq(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(A[0])
    R, pivots = rref(A)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [mpq(0)] * n
        v[f] = mpq(1)
        for i, p in enumerate(pivots):
            if R[i][f]:
                v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve(A, b):
    """Unique solution of the square system ``A x = b``."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise DimensionMismatch("solve expects a square system")
    aug = [list(row) + [bi] for row, bi in zip(as_matrix(A), [scalar(x) for x in b])]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise SingularSystem("coefficient matrix is singular")
    return [R[i][n] for i in range(n)]


def solve_many(A, B):
    """Solve ``A X = B`` for a square nonsingular ``A`` (B given as columns)."""
    n = len(A)
    aug = [list(row) + [col[i] for col in B] for i, row in enumerate(as_matrix(A))]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularSystem("coefficient matrix is singular")
    return [[R[i][n + k] for i in range(n)] for k in range(len(B))]


def det(A):
    M = as_matrix(A)
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionMismatch("determinant of a non-square matrix")
    result = mpq(1)
    for col in range(n):
        p = next((i for i in range(col, n) if M[i][col]), None)
        if p is None:
            return mpq(0)
        if p != col:
            M[col], M[p] = M[p], M[col]
            result = -result
        pivot = M[col][col]
        result = result * pivot
        for i in range(col + 1, n):
            if M[i][col]:
                f = M[i][col] / pivot
                M[i] = [x - f * y if y else x for x, y in zip(M[i], M[col])]
    return result


def inverse(A):
    n = len(A)
    cols = solve_many(A, [[mpq(int(i == j)) for i in range(n)] for j in range(n)])
    return transpose(cols)


class SparseEchelon:
    """Incremental row echelon basis over a field, rows as ``{col: value}``.

    Suited to the very sparse +-1 matrices of exterior-algebra differentials.
    """

    def __init__(self):
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        row = {k: scalar(v) for k, v in row.items() if v}
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                return row
            f = row[lead]
            for k, v in piv.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            # lead is eliminated exactly; guard against stray zero values
            row.pop(lead, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert ``row``; return True if it was independent."""
        r = self.reduce(row)
        if not r:
            return False
        lead = min(r)
        inv = 1 / r[lead]
        self.pivots[lead] = {k: v * inv for k, v in r.items()}
        return True


# ---------------------------------------------------------------- integers

def _int_rows(rows) -> list[list[int]]:
    out = []
    for row in rows:
        int_row = []
        for x in row:
            q = rational(x)
            if q.denominator != 1:
                raise ValueError(f"non-integer entry {q}")
            int_row.append(int(q.numerator))
        out.append(int_row)
    return out


def hnf_row_basis(rows, ncols: int) -> list[list[int]]:
    """Hermite-normal-form basis of the Z-span of integer row vectors.

    Rows of the result are independent; their number is the Z-rank.
    """
    rows = [r for r in _int_rows(rows) if any(r)]
    if not rows:
        return []
    # sympy's HNF is column-style: columns of H span the column lattice.
    H = hermite_normal_form(Matrix(rows).T)
    return [[int(H[i, j]) for i in range(H.rows)] for j in range(H.cols)
            if any(H[i, j] for i in range(H.rows))]


def smith_invariants(rows, ncols: int) -> list[int]:
    """Nonzero invariant factors of an integer matrix (diagonal of its SNF)."""
    rows = _int_rows(rows)
    if not rows or ncols == 0:
        return []
    S = smith_normal_form(Matrix(rows))
    diag = [abs(int(S[i, i])) for i in range(min(S.rows, S.cols))]
    return [x for x in diag if x]


def solve_any(A, b):
    """One solution of ``A x = b`` (free variables set to 0), or None."""
    if not A:
        return None
    n = len(A[0])
    aug = [list(row) + [scalar(bi)] for row, bi in zip(as_matrix(A), b)]
    R, pivots = rref(aug)
    if pivots and pivots[-1] == n:
        return None
    x = [mpq(0)] * n
    for i, p in enumerate(pivots):
        x[p] = R[i][n]
    return x
