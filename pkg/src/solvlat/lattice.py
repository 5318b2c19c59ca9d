"""Construction of cocompact lattices in G from integer data.

Pipeline: unimodular N with eigenvalues alpha, 1/alpha (each of multiplicity
d) -> eigenvector bases for the a- and b-blocks -> commutator lattice in the
center -> a lattice D of central generators containing it -> c-corrections
making ``g0 g_k g0^-1 = g_1^{n_k1} ... g_2d^{n_k,2d} h_1^{p_k1} ...`` hold.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import lcm

from gmpy2 import mpq

from . import group
from .errors import (DimensionMismatch, InvalidBeta, InvalidSpec, NotContaining,
                     NotUnimodular, SingularSystem, SingularTransform,
                     WrongMinimalPolynomial, WrongMultiplicities)
from .group import GroupElem
from .linalg import (as_matrix, det, hnf_row_basis, identity, matmul, mat_add,
                     mat_scale, mat_sub, nullspace, rank, scalar, solve)
from .qfield import QuadNum, galois, rational, split, unit_from_trace


@dataclass
class BuildSpec:
    d: int
    beta: int
    N: list | None = None
    K: list | None = None
    L: list | None = None
    P: list | None = None
    D_choice: object = "default"

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1 or self.d % 2 == 0:
            raise InvalidSpec(f"d must be an odd positive integer, got {self.d!r}")
        if not isinstance(self.beta, int) or isinstance(self.beta, bool) or self.beta < 3:
            raise InvalidBeta(f"beta must be an integer >= 3, got {self.beta!r}")
        d = self.d
        if self.N is not None:
            _check_shape(self.N, 2 * d, 2 * d, "N")
            self.N = [[int(rational(x)) for x in row] for row in self.N]
        for name in ("K", "L"):
            M = getattr(self, name)
            if M is not None:
                _check_shape(M, d, d, name)
                M = as_matrix(M)
                M = [[rational(x) for x in row] for row in M]
                if not det(M):
                    raise SingularTransform(f"{name} is singular")
                setattr(self, name, M)
        if self.P is not None:
            _check_shape(self.P, 2 * d, d * d, "P")
            self.P = [[_as_int(x) for x in row] for row in self.P]


def _as_int(x) -> int:
    q = rational(x)
    if q.denominator != 1:
        raise InvalidSpec(f"expected an integer, got {q}")
    return int(q)


def _check_shape(M, m, n, name):
    if len(M) != m or any(len(row) != n for row in M):
        raise InvalidSpec(f"{name} must be {m}x{n}")


@dataclass
class LatticeRank:
    rank_z: int
    dim_span: int
    discrete: bool
    basis: list  # Z-basis vectors when discrete (HNF order)


@dataclass
class CorrectionSolution:
    c_blocks: list            # c_blocks[k][i][j]
    f_derived: list           # inhomogeneity extracted from the group law
    f_closed_form: list       # sum_s n(n-1)/2 b_i^s a_j^s + sum_{s<t} n_s n_t b_i^s a_j^t
    closed_form_agrees: bool
    discrepancies: list       # [(k, i, j, derived, closed_form)]


@dataclass
class LatticePresentation:
    d: int
    beta: int
    alpha: QuadNum
    g0: GroupElem
    g: tuple
    h: tuple
    N: list
    P: list
    index_of_lambdaZ_in_D: int
    report: dict = field(default_factory=dict, compare=False)

    @property
    def D(self) -> int:
        return self.alpha.D

    def generators(self):
        return [self.g0, *self.g, *self.h]


# ------------------------------------------------------------------ N

def block_matrix(beta: int, d: int) -> list[list[int]]:
    """Block-diagonal N in SL_2d(Z) with d copies of [[1, 1], [beta-2, beta-1]].

    Each block has trace beta and determinant 1, hence minimal polynomial
    X^2 - beta X + 1.
    """
    if not isinstance(beta, int) or beta < 3:
        raise InvalidBeta(f"beta must be an integer >= 3, got {beta!r}")
    if d < 1:
        raise InvalidSpec("d must be positive")
    N = [[0] * (2 * d) for _ in range(2 * d)]
    for k in range(d):
        i = 2 * k
        N[i][i], N[i][i + 1] = 1, 1
        N[i + 1][i], N[i + 1][i + 1] = beta - 2, beta - 1
    return N


def validate_N(N, beta: int) -> QuadNum:
    """Check N and return its eigenvalue ``alpha > 1``."""
    if not isinstance(beta, int) or beta < 3:
        raise InvalidBeta(f"beta must be an integer >= 3, got {beta!r}")
    n = len(N)
    if n % 2 or any(len(row) != n for row in N):
        raise DimensionMismatch("N must be square of even size")
    d = n // 2
    Nq = as_matrix(N)
    if det(Nq) != 1:
        raise NotUnimodular(f"det(N) = {det(Nq)}")
    quad = mat_add(mat_sub(matmul(Nq, Nq), mat_scale(beta, Nq)), identity(n))
    if any(x for row in quad for x in row):
        raise WrongMinimalPolynomial(f"N^2 - {beta} N + I != 0")
    alpha = unit_from_trace(beta)
    for lam in (alpha, 1 / alpha):
        shifted = [[Nq[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        if rank(shifted) != n - d:
            raise WrongMultiplicities(f"eigenvalue {lam} does not have multiplicity {d}")
    return alpha


def eigenbasis(N, beta: int, K=None, L=None):
    """Return ``(alpha, a_vecs, b_vecs)``.

    ``a_vecs[i]`` is (a_i^1 .. a_i^2d), an alpha-eigenvector of N, and
    ``b_vecs[i]`` a 1/alpha-eigenvector; a-vectors are ``L`` times the
    canonical basis, b-vectors ``K`` times its Galois conjugate.
    """
    alpha = validate_N(N, beta)
    n = len(N)
    d = n // 2
    Nq = as_matrix(N)
    shifted = [[Nq[i][j] - (alpha if i == j else 0) for j in range(n)] for i in range(n)]
    v = []
    for vec in nullspace(shifted):
        lead = next(x for x in vec if x)
        v.append([x / lead for x in vec])
    w = [[galois(x) for x in vec] for vec in v]
    for M, name in ((K, "K"), (L, "L")):
        if M is not None and not det(as_matrix(M)):
            raise SingularTransform(f"{name} is singular")
    L = identity(d) if L is None else as_matrix(L)
    K = identity(d) if K is None else as_matrix(K)
    a_vecs = matmul(L, v)
    b_vecs = matmul(K, w)
    return alpha, a_vecs, b_vecs


# --------------------------------------------------------- commutators

def commutator_matrices(a_vecs, b_vecs) -> dict:
    """``{(s, t): e}`` for s < t with ``e[i][j] = b_i^s a_j^t - a_j^s b_i^t``."""
    d = len(a_vecs)
    n = len(a_vecs[0])
    out = {}
    for s, t in combinations(range(n), 2):
        out[(s, t)] = [[b_vecs[i][s] * a_vecs[j][t] - a_vecs[j][s] * b_vecs[i][t]
                        for j in range(d)] for i in range(d)]
    return out


def flatten(block) -> list:
    return [x for row in block for x in row]


def unflatten(vec, d: int) -> list[list]:
    return [list(vec[i * d:(i + 1) * d]) for i in range(d)]


def _field_D(vectors) -> int | None:
    for vec in vectors:
        for x in vec:
            if type(x) is QuadNum:
                return x.D
    return None


def lattice_rank_test(gens) -> LatticeRank:
    """Decide whether the subgroup generated by ``gens`` is discrete.

    The Z-rank is computed exactly from the rational/surd coordinates (an
    integer HNF after clearing denominators); the dimension of the real
    span is the rank over Q(sqrt(D)). The group is discrete iff they agree.
    """
    gens = [list(v) for v in gens]
    if not gens:
        return LatticeRank(0, 0, True, [])
    r = len(gens[0])
    D = _field_D(gens)
    coords = []
    for vec in gens:
        parts = [split(x) for x in vec]
        coords.append([p[0] for p in parts] + [p[1] for p in parts])
    den = lcm(*(int(c.denominator) for row in coords for c in row)) or 1
    int_rows = [[c * den for c in row] for row in coords]
    H = hnf_row_basis(int_rows, 2 * r)
    rank_z = len(H)
    dim_span = rank(as_matrix(gens))
    discrete = rank_z == dim_span
    basis = []
    if discrete:
        for row in H:
            vec = []
            for k in range(r):
                re, su = mpq(row[k], den), mpq(row[r + k], den)
                vec.append(QuadNum(re, su, D) if D is not None else re)
            basis.append(vec)
    return LatticeRank(rank_z, dim_span, discrete, basis)


def integer_coordinates(basis_vectors, target):
    """Coordinates of ``target`` in a basis, or None if not all integers."""
    n = len(basis_vectors)
    H = [[basis_vectors[k][i] for k in range(n)] for i in range(n)]
    coords = solve(H, list(target))
    out = []
    for c in coords:
        re, su = split(c)
        if su or re.denominator != 1:
            return None
        out.append(int(re))
    return out


def build_D(z_blocks, choice, d: int):
    """Central lattice D containing every commutator block.

    Returns ``(h_blocks, index)`` where ``index = [D : lambda_Z]``.
    """
    zvecs = [flatten(z) for z in z_blocks]
    lam = lattice_rank_test(zvecs)
    if not lam.discrete or lam.dim_span != d * d:
        raise NotContaining("commutator lattice is not a full-rank lattice in the center")
    if choice in (None, "default"):
        hvecs = lam.basis
    elif isinstance(choice, int) and not isinstance(choice, bool):
        if choice < 1:
            raise InvalidSpec("denominator r must be >= 1")
        hvecs = [[x / choice for x in v] for v in lam.basis]
    elif isinstance(choice, dict) and "denominator" in choice:
        return build_D(z_blocks, int(choice["denominator"]), d)
    else:
        blocks = choice["basis"] if isinstance(choice, dict) else choice
        if len(blocks) != d * d:
            raise InvalidSpec(f"explicit D basis must have {d * d} elements")
        hvecs = [flatten(b) if isinstance(b[0], (list, tuple)) else list(b) for b in blocks]
        hvecs = [[scalar(x) for x in v] for v in hvecs]
        if rank(hvecs) != d * d:
            raise InvalidSpec("explicit D basis is not linearly independent")
    for z in zvecs:
        if integer_coordinates(hvecs, z) is None:
            raise NotContaining(f"commutator {z} is not an integer combination of D")
    M = [integer_coordinates(hvecs, v) for v in lam.basis]
    index = abs(int(det(M)))
    return [unflatten(v, d) for v in hvecs], index


# --------------------------------------------------------- c-corrections

def _relation_rhs(gens, hs, n_row, p_row, d):
    rhs = group.identity(d, gens[0].alpha)
    for gs, n in zip(gens, n_row):
        if n:
            rhs = group.mul(rhs, group.power(gs, n))
    for hl, p in zip(hs, p_row):
        if p:
            rhs = group.mul(rhs, group.power(hl, p))
    return rhs


def relation_residual(g0, gens, hs, N, P, k) -> GroupElem:
    """``(g0 g_k g0^-1) * (prod_s g_s^{n_ks} prod_l h_l^{p_kl})^-1``."""
    d = g0.d
    lhs = group.conjugate(g0, gens[k])
    rhs = _relation_rhs(gens, hs, N[k], P[k], d)
    return group.mul(lhs, group.inverse(rhs))


def _generators(alpha, a_vecs, b_vecs, c_blocks):
    n = len(a_vecs[0])
    d = len(a_vecs)
    one = alpha - alpha + 1
    return [GroupElem(one,
                      tuple(a_vecs[i][k] for i in range(d)),
                      tuple(b_vecs[i][k] for i in range(d)),
                      tuple(tuple(row) for row in c_blocks[k]))
            for k in range(n)]


def solve_corrections(N, P, alpha, a_vecs, b_vecs, h_blocks) -> CorrectionSolution:
    """Choose the C-blocks of g_1..g_2d so every conjugation relation holds.

    The central part of each relation residual is an affine function of the
    unknown C-entries; its constant term and Jacobian are read off by
    evaluating the residual at 0 and at unit vectors, then the resulting
    linear systems (one per entry (i, j)) are solved exactly.
    """
    d = len(a_vecs)
    n = 2 * d
    zero = alpha - alpha
    hs = [group.central(hb) for hb in h_blocks]

    def residuals(c_blocks):
        gens = _generators(alpha, a_vecs, b_vecs, c_blocks)
        g0 = group.dilation(alpha, d)
        out = []
        for k in range(n):
            res = relation_residual(g0, gens, hs, N, P, k)
            if any(res.a) or any(res.b) or res.alpha != 1:
                raise SingularSystem("a/b parts of the relation do not match; eigenbasis invalid")
            out.append([list(row) for row in res.C])
        return out

    def blank():
        return [[[zero] * d for _ in range(d)] for _ in range(n)]

    R0 = residuals(blank())
    # Jacobian column for unknown (s, i, j): residual response to a unit entry.
    jac = {}
    for s in range(n):
        for i in range(d):
            for j in range(d):
                c = blank()
                c[s][i][j] = zero + 1
                R = residuals(c)
                for k in range(n):
                    for ii in range(d):
                        for jj in range(d):
                            delta = R[k][ii][jj] - R0[k][ii][jj]
                            if delta:
                                if (ii, jj) != (i, j):
                                    raise SingularSystem("relation couples distinct C-entries")
                                jac[(k, s, i, j)] = delta
    c_blocks = blank()
    for i in range(d):
        for j in range(d):
            A = [[jac.get((k, s, i, j), zero) for s in range(n)] for k in range(n)]
            rhs = [-R0[k][i][j] for k in range(n)]
            sol = solve(A, rhs)
            for s in range(n):
                c_blocks[s][i][j] = sol[s]

    # residual at c = 0 is -(f + P d); recover f and compare to the closed form
    f_derived = [[[-R0[k][i][j] - sum((P[k][l] * h_blocks[l][i][j] for l in range(d * d)), zero)
                   for j in range(d)] for i in range(d)] for k in range(n)]
    f_closed = closed_form_inhomogeneity(N, a_vecs, b_vecs)
    disc = [(k, i, j, f_derived[k][i][j], f_closed[k][i][j])
            for k in range(n) for i in range(d) for j in range(d)
            if f_derived[k][i][j] != f_closed[k][i][j]]
    return CorrectionSolution(c_blocks, f_derived, f_closed, not disc, disc)


def closed_form_inhomogeneity(N, a_vecs, b_vecs):
    d = len(a_vecs)
    n = 2 * d
    out = []
    for k in range(n):
        nk = N[k]
        block = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = mpq(0)
                for s in range(n):
                    if nk[s] * (nk[s] - 1):
                        acc = acc + mpq(nk[s] * (nk[s] - 1), 2) * b_vecs[i][s] * a_vecs[j][s]
                for s, t in combinations(range(n), 2):
                    if nk[s] and nk[t]:
                        acc = acc + nk[s] * nk[t] * b_vecs[i][s] * a_vecs[j][t]
                row.append(acc)
            block.append(row)
        out.append(block)
    return out


# --------------------------------------------------------------- assemble

def build(spec: BuildSpec) -> LatticePresentation:
    d, beta = spec.d, spec.beta
    N = spec.N if spec.N is not None else block_matrix(beta, d)
    P = spec.P if spec.P is not None else [[0] * (d * d) for _ in range(2 * d)]
    alpha, a_vecs, b_vecs = eigenbasis(N, beta, spec.K, spec.L)
    z = commutator_matrices(a_vecs, b_vecs)
    h_blocks, index = build_D(list(z.values()), spec.D_choice, d)
    sol = solve_corrections(N, P, alpha, a_vecs, b_vecs, h_blocks)
    gens = _generators(alpha, a_vecs, b_vecs, sol.c_blocks)
    hs = tuple(group.central(hb) for hb in h_blocks)
    report = {
        "inhomogeneity_closed_form_agrees": sol.closed_form_agrees,
        "inhomogeneity_discrepancies": len(sol.discrepancies),
    }
    return LatticePresentation(d, beta, alpha, group.dilation(alpha, d), tuple(gens), hs,
                               [list(r) for r in N], [list(r) for r in P], index, report)


def commutators_z(a_vecs, b_vecs) -> list:
    """The blocks z^{s,t} for s < t, in lexicographic (s, t) order."""
    return list(commutator_matrices(a_vecs, b_vecs).values())


def solve_c(N, P, h_vectors, a_vecs, b_vecs, alpha=None) -> list:
    """C-blocks of g_1..g_2d making every conjugation relation exact."""
    if alpha is None:
        alpha = validate_N(N, _trace(N))
    return solve_corrections(N, P, alpha, a_vecs, b_vecs, h_vectors).c_blocks


def _trace(N) -> int:
    # N^2 - beta N + I = 0 with 2d eigenvalues alpha, 1/alpha: tr N = d * beta
    return sum(N[i][i] for i in range(len(N))) // (len(N) // 2)


make_block_N = block_matrix
discrete_rank_test = lattice_rank_test
assemble = build
