"""Shared strategies and random generators for the test suite."""
import random

from gmpy2 import mpq
from hypothesis import strategies as st

from solvlat.group import GroupElem
from solvlat.qfield import QuadNum

D5 = 5
small_ints = st.integers(min_value=-9, max_value=9)
rationals = st.builds(lambda p, q: mpq(p, q), small_ints, st.integers(min_value=1, max_value=6))
quadnums = st.builds(lambda r, s: QuadNum(r, s, D5), rationals, rationals)
nonzero_quadnums = quadnums.filter(lambda x: bool(x))


def rand_q(rng: random.Random, den: int = 4):
    return mpq(rng.randint(-6, 6), rng.randint(1, den))


def rand_quad(rng: random.Random, D: int = D5):
    return QuadNum(rand_q(rng), rand_q(rng), D)


def rand_positive(rng: random.Random, D: int = D5):
    x = rand_quad(rng, D)
    while x.sign() <= 0:
        x = rand_quad(rng, D)
    return x


def rand_elem(rng: random.Random, d: int, D: int = D5) -> GroupElem:
    return GroupElem(rand_positive(rng, D),
                     tuple(rand_quad(rng, D) for _ in range(d)),
                     tuple(rand_quad(rng, D) for _ in range(d)),
                     tuple(tuple(rand_quad(rng, D) for _ in range(d)) for _ in range(d)))


def rand_nilpotent(rng: random.Random, d: int, D: int = D5) -> GroupElem:
    x = rand_elem(rng, d, D)
    return GroupElem(QuadNum(1, 0, D), x.a, x.b, x.C)


def rand_rational_matrix(rng: random.Random, d: int):
    """A random nonsingular rational d x d matrix."""
    from solvlat.linalg import det
    while True:
        M = [[mpq(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(d)] for _ in range(d)]
        if det(M):
            return M


def elems(d: int):
    pos = quadnums.filter(lambda x: x.sign() > 0)
    vec = st.tuples(*[quadnums] * d)
    mat = st.tuples(*[vec] * d)
    return st.builds(GroupElem, pos, vec, vec, mat)
