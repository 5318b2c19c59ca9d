"""The solvable group G as structured tuples ``(alpha, a, b, C)``.

An element is the block upper-triangular matrix

    [[I_d, b, C],
     [0, alpha, a],
     [0,   0, I_d]]

so the product law is

    (alpha, a, b, C) * (alpha', a', b', C')
        = (alpha alpha', a + alpha a', b' + alpha' b, C + C' + b (x) a'),

where ``(b (x) a')[i][j] = b[i] * a'[j]``. In other words ``C[i][j]`` is the
coordinate coupled to ``b[i]`` and ``a[j]``.

:func:`to_dense` writes the full ``(2d+1) x (2d+1)`` matrix in the printed
layout (b stacked bottom-up, C rows reversed); it is used as an oracle for
the structured law.
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import DimensionMismatch
from .linalg import scalar
from .qfield import sign


@dataclass(frozen=True)
class GroupElem:
    alpha: object
    a: tuple
    b: tuple
    C: tuple

    def __post_init__(self):
        d = len(self.a)
        if len(self.b) != d or len(self.C) != d or any(len(r) != d for r in self.C):
            raise DimensionMismatch("inconsistent block sizes")
        if sign(self.alpha) <= 0:
            raise ValueError("alpha must be positive")

    @property
    def d(self) -> int:
        return len(self.a)

    def __mul__(self, other):
        return mul(self, other)

    def __pow__(self, k: int):
        return power(self, k)

    def __invert__(self):
        return inverse(self)

    def in_nilradical(self) -> bool:
        return self.alpha == 1

    def is_central(self) -> bool:
        return self.alpha == 1 and not any(self.a) and not any(self.b)

    def entries(self):
        yield self.alpha
        yield from self.a
        yield from self.b
        for row in self.C:
            yield from row


def make(alpha, a, b, C) -> GroupElem:
    return GroupElem(scalar(alpha), tuple(scalar(x) for x in a),
                     tuple(scalar(x) for x in b),
                     tuple(tuple(scalar(x) for x in row) for row in C))


def identity(d: int, one=None) -> GroupElem:
    one = mpq(1) if one is None else one
    zero = one - one
    return GroupElem(one, (zero,) * d, (zero,) * d, ((zero,) * d,) * d)


def dilation(alpha, d: int) -> GroupElem:
    zero = alpha - alpha
    return GroupElem(alpha, (zero,) * d, (zero,) * d, ((zero,) * d,) * d)


def central(C) -> GroupElem:
    C = tuple(tuple(scalar(x) for x in row) for row in C)
    d = len(C)
    zero = C[0][0] - C[0][0]
    return GroupElem(zero + 1, (zero,) * d, (zero,) * d, C)


def mul(x: GroupElem, y: GroupElem) -> GroupElem:
    d = len(x.a)
    if len(y.a) != d:
        raise DimensionMismatch(f"d={d} vs d={len(y.a)}")
    ax, bx, ay, by = x.a, x.b, y.a, y.b
    alpha = x.alpha * y.alpha
    a = tuple(ax[j] + x.alpha * ay[j] for j in range(d))
    b = tuple(by[i] + y.alpha * bx[i] for i in range(d))
    C = tuple(
        tuple(x.C[i][j] + y.C[i][j] + (bx[i] * ay[j] if bx[i] and ay[j] else 0)
              for j in range(d))
        for i in range(d))
    return GroupElem(alpha, a, b, C)


def inverse(x: GroupElem) -> GroupElem:
    d = len(x.a)
    inv_alpha = 1 / x.alpha
    a = tuple(-aj * inv_alpha for aj in x.a)
    b = tuple(-bi * inv_alpha for bi in x.b)
    C = tuple(
        tuple(-x.C[i][j] + x.b[i] * x.a[j] * inv_alpha for j in range(d))
        for i in range(d))
    return GroupElem(inv_alpha, a, b, C)


def power(x: GroupElem, k: int) -> GroupElem:
    if k < 0:
        x, k = inverse(x), -k
    result = identity(len(x.a), x.alpha - x.alpha + 1)
    base = x
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def product(elems, d: int | None = None) -> GroupElem:
    elems = list(elems)
    if not elems:
        if d is None:
            raise ValueError("empty product needs d")
        return identity(d)
    out = elems[0]
    for e in elems[1:]:
        out = mul(out, e)
    return out


def conjugate(g: GroupElem, x: GroupElem) -> GroupElem:
    """``g x g^-1``."""
    return mul(mul(g, x), inverse(g))


def commutator(x: GroupElem, y: GroupElem) -> GroupElem:
    """``x y x^-1 y^-1``."""
    return mul(mul(x, y), mul(inverse(x), inverse(y)))


def to_dense(x: GroupElem) -> list[list]:
    d = len(x.a)
    n = 2 * d + 1
    one = x.alpha - x.alpha + 1
    zero = one - one
    M = [[zero] * n for _ in range(n)]
    for i in range(d):
        M[i][i] = one
        M[d + 1 + i][d + 1 + i] = one
    M[d][d] = x.alpha
    for j in range(d):
        M[d][d + 1 + j] = x.a[j]
    # row r of the top block carries b[d-1-r] and the C row of the same index
    for r in range(d):
        i = d - 1 - r
        M[r][d] = x.b[i]
        for j in range(d):
            M[r][d + 1 + j] = x.C[i][j]
    return M


def from_dense(M) -> GroupElem:
    n = len(M)
    if n % 2 != 1:
        raise DimensionMismatch("dense matrix must have odd size 2d+1")
    d = (n - 1) // 2
    alpha = M[d][d]
    a = tuple(M[d][d + 1 + j] for j in range(d))
    b = tuple(M[d - 1 - i][d] for i in range(d))
    C = tuple(tuple(M[d - 1 - i][d + 1 + j] for j in range(d)) for i in range(d))
    return GroupElem(alpha, a, b, C)


g_mul = mul
g_inv = inverse
g_pow = power
g_commutator = commutator
g_embed_dense = to_dense
