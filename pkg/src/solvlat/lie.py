"""Chevalley-Eilenberg calculus on the Lie algebra of G.

Forms are left-invariant, stored sparsely as ``{increasing index tuple:
coefficient}`` over a fixed ordered basis. The structure constants are read
off dense matrix commutators of the basis matrices, so the bracket table is
whatever the group law yields.

Basis order: T, A_1..A_d, B_1..B_d, C_11, C_12, .., C_dd, where C_ij is the
coordinate coupled to b_i and a_j. The oracle gives

    [B_i, A_j] = C_ij,   [T, A_i] = A_i,   [T, B_i] = -B_i,

everything else zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial

from gmpy2 import mpq

from . import group
from .certify import Certificate, not_applicable
from .errors import DimensionMismatch, InvalidSpec
from .linalg import SparseEchelon, matmul, nullspace, scalar
from .qfield import sign


# ------------------------------------------------------------------ forms

def sort_sign(seq):
    """``(sign, sorted tuple)`` for a sequence of indices, or None on repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return None
    s = 1
    # insertion sort counting transpositions; forms here are short
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            s = -s
            j -= 1
    return s, tuple(seq)


def _merge_sign(p: tuple, q: tuple) -> int:
    """Sign of sorting ``p + q`` for disjoint increasing tuples."""
    inv = 0
    j = 0
    for x in p:
        while j < len(q) and q[j] < x:
            j += 1
        inv += j
    return -1 if inv % 2 else 1


class Form:
    """A left-invariant exterior form with exact coefficients."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: dict | None = None):
        self.degree = degree
        self.terms = {}
        for k, v in (terms or {}).items():
            if len(k) != degree:
                raise DimensionMismatch(f"term {k} in a {degree}-form")
            if v:
                self.terms[tuple(k)] = scalar(v)

    @classmethod
    def basis(cls, *indices) -> Form:
        """``e^{i1} ^ .. ^ e^{ik}`` for arbitrary (possibly unsorted) indices."""
        ss = sort_sign(indices)
        if ss is None:
            return cls(len(indices))
        return cls(len(indices), {ss[1]: mpq(ss[0])})

    def copy(self) -> Form:
        f = Form(self.degree)
        f.terms = dict(self.terms)
        return f

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __add__(self, other: Form) -> Form:
        if not other.terms:
            return self.copy()
        if not self.terms:
            return other.copy()
        if self.degree != other.degree:
            raise DimensionMismatch("adding forms of different degree")
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, 0) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        f = Form(self.degree)
        f.terms = out
        return f

    def __neg__(self) -> Form:
        f = Form(self.degree)
        f.terms = {k: -v for k, v in self.terms.items()}
        return f

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def __rmul__(self, c) -> Form:
        c = scalar(c)
        f = Form(self.degree)
        if c:
            f.terms = {k: c * v for k, v in self.terms.items()}
        return f

    def wedge(self, other: Form) -> Form:
        out: dict = {}
        for p, u in self.terms.items():
            sp = set(p)
            for q, v in other.terms.items():
                if sp.intersection(q):
                    continue
                key = tuple(sorted(p + q))
                val = _merge_sign(p, q) * u * v
                nv = out.get(key, 0) + val
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        f = Form(self.degree + other.degree)
        f.terms = out
        return f

    __xor__ = wedge

    def __repr__(self):
        return f"Form({self.degree}, {self.terms})"


def wedge(f1: Form, f2: Form) -> Form:
    return f1.wedge(f2)


def apply_derivation(form: Form, images) -> Form:
    """Extend ``e^c -> images[c]`` (a 2-form) as an odd derivation.

    ``d(e^{i1} ^ .. ^ e^{ik}) = sum_r (-1)^r e^{i1} ^ .. d(e^{ir}) .. ^ e^{ik}``;
    the images have even degree, so they move freely through the product.
    """
    out: dict = {}
    for idx, coeff in form.terms.items():
        for r, c in enumerate(idx):
            dc = images[c]
            if dc is None or not dc.terms:
                continue
            left, right = idx[:r], idx[r + 1:]
            base = -coeff if r % 2 else coeff
            for (a, b), k in dc.terms.items():
                ss = sort_sign(left + (a, b) + right)
                if ss is None:
                    continue
                val = ss[0] * base * k
                nv = out.get(ss[1], 0) + val
                if nv:
                    out[ss[1]] = nv
                else:
                    out.pop(ss[1], None)
    f = Form(form.degree + 1)
    f.terms = out
    return f


# ------------------------------------------------------------ Lie algebra

class LieAlgebra:
    """Finite-dimensional Lie algebra given by brackets of basis vectors."""

    def __init__(self, names: list[str], brackets: dict):
        self.names = list(names)
        self.dim = len(names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self._br = {}
        for (a, b), val in brackets.items():
            val = {c: scalar(x) for c, x in val.items() if x}
            if a == b or not val:
                continue
            if a > b:
                a, b = b, a
                val = {c: -x for c, x in val.items()}
            self._br[(a, b)] = val
        self._d1 = None

    def __getitem__(self, name: str) -> int:
        return self.index[name]

    def bracket_basis(self, a: int, b: int) -> dict:
        if a < b:
            return dict(self._br.get((a, b), {}))
        if a > b:
            return {c: -x for c, x in self._br.get((b, a), {}).items()}
        return {}

    def bracket(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, u in x.items():
            for b, v in y.items():
                for c, k in self.bracket_basis(a, b).items():
                    out[c] = out.get(c, 0) + u * v * k
        return {c: v for c, v in out.items() if v}

    def jacobi_failures(self) -> list:
        bad = []
        for a, b, c in combinations(range(self.dim), 3):
            ea, eb, ec = {a: 1}, {b: 1}, {c: 1}
            s: dict = {}
            for x, y, z in ((ea, eb, ec), (eb, ec, ea), (ec, ea, eb)):
                for k, v in self.bracket(x, self.bracket(y, z)).items():
                    s[k] = s.get(k, 0) + v
            if any(s.values()):
                bad.append((a, b, c))
        return bad

    # exterior derivative -------------------------------------------------

    def d_basis(self, c: int) -> Form:
        """``d(e^c) = -sum_{a<b} c^c_ab e^a ^ e^b``."""
        if self._d1 is None:
            terms = [dict() for _ in range(self.dim)]
            for (a, b), val in self._br.items():
                for k, x in val.items():
                    terms[k][(a, b)] = terms[k].get((a, b), 0) - x
            self._d1 = [Form(2, t) for t in terms]
        return self._d1[c]

    def d(self, form: Form) -> Form:
        """Chevalley-Eilenberg differential, extended as a derivation."""
        self.d_basis(0)
        return apply_derivation(form, self._d1)

    def evaluate(self, form: Form, vectors) -> object:
        """``form(v_1, .., v_k)`` for vectors given as ``{index: coeff}``."""
        if len(vectors) != form.degree:
            raise DimensionMismatch("wrong number of arguments")
        total = mpq(0)

        def rec(pos, chosen, coeff):
            nonlocal total
            if pos == len(vectors):
                ss = sort_sign(chosen)
                if ss is not None:
                    v = form.terms.get(ss[1])
                    if v:
                        total = total + ss[0] * coeff * v
                return
            for i, x in vectors[pos].items():
                if x and i not in chosen:
                    rec(pos + 1, chosen + (i,), coeff * x)

        rec(0, (), mpq(1))
        return total

    def koszul_d(self, form: Form) -> Form:
        """Independent oracle: dw(X_0..X_k) = sum_{i<j} (-1)^{i+j} w([X_i,X_j], ..)."""
        k = form.degree
        out = {}
        for tup in combinations(range(self.dim), k + 1):
            val = mpq(0)
            for i, j in combinations(range(k + 1), 2):
                br = self.bracket_basis(tup[i], tup[j])
                if not br:
                    continue
                rest = [{tup[t]: 1} for t in range(k + 1) if t not in (i, j)]
                v = self.evaluate(form, [br] + rest)
                if v:
                    val = val + (-1) ** (i + j) * v
            if val:
                out[tup] = val
        return Form(k + 1, out)

    def derived_span(self) -> list[dict]:
        """Basis (echelon rows) of [g, g]."""
        ech = SparseEchelon()
        for val in self._br.values():
            ech.add(val)
        return [dict(r) for r in ech.pivots.values()]

    def closed_one_forms(self) -> list[list]:
        """Basis of closed invariant 1-forms: the annihilator of [g, g]."""
        rows = [[r.get(i, 0) for i in range(self.dim)] for r in self.derived_span()]
        return nullspace(rows, self.dim)

    def form_to_json(self, form: Form) -> dict:
        from .jsonio import encode
        return {"degree": form.degree,
                "terms": [{"labels": [self.names[i] for i in k], "coeff": encode(v)}
                          for k, v in sorted(form.terms.items())]}


def structure_constants(d: int) -> LieAlgebra:
    """Brackets of the basis T, A_i, B_i, C_ij from dense matrix commutators."""
    if not isinstance(d, int) or d < 1 or d % 2 == 0:
        raise InvalidSpec(f"d must be an odd positive integer, got {d!r}")
    names, mats = _dense_basis(d)
    n = 2 * d + 1
    # each basis matrix is a single unit; locate it
    pos = {}
    for i, M in enumerate(mats):
        nz = [(r, c) for r in range(n) for c in range(n) if M[r][c]]
        assert len(nz) == 1 and M[nz[0][0]][nz[0][1]] == 1
        pos[nz[0]] = i
    brackets = {}
    for a, b in combinations(range(len(names)), 2):
        X, Y = mats[a], mats[b]
        XY, YX = matmul(X, Y), matmul(Y, X)
        val = {}
        for r in range(n):
            for c in range(n):
                v = XY[r][c] - YX[r][c]
                if v:
                    if (r, c) not in pos:
                        raise AssertionError("commutator leaves the Lie algebra")
                    val[pos[(r, c)]] = v
        if val:
            brackets[(a, b)] = val
    return LieAlgebra(names, brackets)


def basis_names(d: int) -> list[str]:
    sep = "," if d > 9 else ""
    return (["T"] + [f"A{i}" for i in range(1, d + 1)] + [f"B{i}" for i in range(1, d + 1)]
            + [f"C{i}{sep}{j}" for i in range(1, d + 1) for j in range(1, d + 1)])


def c_name(d: int, i: int, j: int) -> str:
    return f"C{i},{j}" if d > 9 else f"C{i}{j}"


def _dense_basis(d: int):
    """Tangent matrices at the identity, via the group's dense layout."""
    one, zero = mpq(1), mpq(0)
    ident = group.to_dense(group.identity(d))
    z = (zero,) * d

    def unit(k):
        return tuple(one if t == k else zero for t in range(d))

    elems = [group.GroupElem(mpq(2), z, z, (z,) * d)]
    elems += [group.GroupElem(one, unit(j), z, (z,) * d) for j in range(d)]
    elems += [group.GroupElem(one, z, unit(i), (z,) * d) for i in range(d)]
    for i in range(d):
        for j in range(d):
            C = tuple(unit(j) if r == i else z for r in range(d))
            elems.append(group.GroupElem(one, z, z, C))
    mats = []
    for e in elems:
        M = group.to_dense(e)
        mats.append([[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(M, ident)])
    return basis_names(d), mats


# --------------------------------------------------- complex structure

def complex_pairs(d: int) -> list[tuple[str, str, str, str]]:
    """``(alias_X, alias_Y, label_X, label_Y)`` with J(X) = Y, J(Y) = -X.

    W_1 = A_1, W_2 = T; X_{0s} = A_{2s+1}, Y_{0s} = A_{2s};
    X_{i0} = C_{i1}, Y_{i0} = B_i; X_{is} = C_{i,2s+1}, Y_{is} = C_{i,2s}.
    """
    m = (d - 1) // 2
    pairs = [("W1", "W2", "A1", "T")]
    for s in range(1, m + 1):
        pairs.append((f"X(0,{s})", f"Y(0,{s})", f"A{2 * s + 1}", f"A{2 * s}"))
    for i in range(1, d + 1):
        pairs.append((f"X({i},0)", f"Y({i},0)", c_name(d, i, 1), f"B{i}"))
        for s in range(1, m + 1):
            pairs.append((f"X({i},{s})", f"Y({i},{s})",
                          c_name(d, i, 2 * s + 1), c_name(d, i, 2 * s)))
    return pairs


def aliases(d: int) -> dict[str, str]:
    out = {}
    for ax, ay, lx, ly in complex_pairs(d):
        out[ax], out[ay] = lx, ly
    return out


@dataclass
class ComplexStructure:
    """``matrix[r][c]`` is the e_r-coefficient of J(e_c)."""

    matrix: list

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for c, x in v.items():
            for r in range(len(self.matrix)):
                y = self.matrix[r][c]
                if y:
                    out[r] = out.get(r, 0) + x * y
        return {k: v for k, v in out.items() if v}

    def squares_to_minus_one(self) -> bool:
        sq = matmul(self.matrix, self.matrix)
        n = len(sq)
        return all(sq[i][j] == (-1 if i == j else 0) for i in range(n) for j in range(n))


def complex_structure(alg: LieAlgebra, d: int) -> ComplexStructure:
    n = alg.dim
    J = [[mpq(0)] * n for _ in range(n)]
    for _, _, lx, ly in complex_pairs(d):
        x, y = alg[lx], alg[ly]
        J[y][x] = mpq(1)
        J[x][y] = mpq(-1)
    cs = ComplexStructure(J)
    if not cs.squares_to_minus_one():
        raise AssertionError("J^2 != -1")
    return cs


def nijenhuis_check(alg: LieAlgebra, J: ComplexStructure) -> Certificate:
    """N_J(X,Y) = [JX,JY] - [X,Y] - J([JX,Y] + [X,JY]) on all basis pairs."""
    if not J.squares_to_minus_one():
        raise ValueError("J^2 != -Id")
    bad = []
    for a, b in combinations(range(alg.dim), 2):
        X, Y = {a: mpq(1)}, {b: mpq(1)}
        JX, JY = J.apply(X), J.apply(Y)
        res: dict = {}
        for k, v in alg.bracket(JX, JY).items():
            res[k] = res.get(k, 0) + v
        for k, v in alg.bracket(X, Y).items():
            res[k] = res.get(k, 0) - v
        inner: dict = {}
        for part in (alg.bracket(JX, Y), alg.bracket(X, JY)):
            for k, v in part.items():
                inner[k] = inner.get(k, 0) + v
        for k, v in J.apply(inner).items():
            res[k] = res.get(k, 0) - v
        res = {k: v for k, v in res.items() if v}
        if res:
            bad.append({"pair": [alg.names[a], alg.names[b]],
                        "value": {alg.names[k]: v for k, v in res.items()}})
    wit = {"pairs_checked": alg.dim * (alg.dim - 1) // 2}
    if bad:
        wit["nonzero"] = bad
    return Certificate("nijenhuis", not bad, wit)


# ----------------------------------------------------------- metric forms

def omega_pairs(alg: LieAlgebra, d: int) -> list[Form]:
    return [Form.basis(alg[lx], alg[ly]) for _, _, lx, ly in complex_pairs(d)]


def build_omega(alg: LieAlgebra, d: int) -> Form:
    """``W1^ ^ W2^ + sum X^ ^ Y^`` over all J-pairs."""
    out = Form(2)
    for p in omega_pairs(alg, d):
        out = out + p
    return out


def omega_power(pairs: list[Form], k: int, degree: int | None = None) -> Form:
    """``(sum pairs)^k = k! * sum over k-subsets of the wedge of the subset``.

    The summands are disjoint decomposable 2-forms, so they commute and
    square to zero.
    """
    if k == 0:
        return Form(0, {(): mpq(1)})
    out = Form(2 * k)
    for sub in combinations(pairs, k):
        term = sub[0]
        for p in sub[1:]:
            term = term.wedge(p)
        out = out + term
    return factorial(k) * out


def metric_matrix(alg: LieAlgebra, omega: Form, J: ComplexStructure) -> list:
    """g(X, Y) = omega(X, JY) on the basis."""
    n = alg.dim
    return [[alg.evaluate(omega, [{i: 1}, J.apply({j: 1})]) for j in range(n)]
            for i in range(n)]


def positive_definite(G) -> bool:
    """Leading principal minors all positive (exact)."""
    from .linalg import det
    return all(sign(det([row[:k] for row in G[:k]])) > 0 for k in range(1, len(G) + 1))


def displayed_d_omega(alg: LieAlgebra, d: int) -> Form:
    """The three-sum formula for d omega as printed, in our labels."""
    m = (d - 1) // 2
    al = aliases(d)
    e = lambda name: alg[al[name]]  # noqa: E731
    out = Form(3)
    for i in range(1, 2 * m + 2):
        for j in range(1, m + 1):
            out = out + Form.basis(e(f"X(0,{j})"), e(f"Y({i},0)"), e(f"Y({i},{j})"))
            out = out - Form.basis(e(f"Y(0,{j})"), e(f"Y({i},0)"), e(f"X({i},{j})"))
    for j in range(1, m + 1):
        out = out + Form.basis(e("W2"), e(f"X(0,{j})"), e(f"Y(0,{j})"))
    return out


def lcb_verify(d: int) -> dict:
    """Check d(omega^{n-1}) = (2m+1) W2^ ^ omega^{n-1} and solve for the Lee form.

    Returns ``{"theta": Form, "theta_expected": Form, "certificate": ..}``.
    ``theta`` is the exact solution inside span(T^) (the closed 1-forms);
    the certificate tests the stated coefficient 2m+1.
    """
    alg = structure_constants(d)
    m = (d - 1) // 2
    pairs = omega_pairs(alg, d)
    n = len(pairs)
    omega = build_omega(alg, d)
    w_n1 = omega_power(pairs, n - 1)
    lhs = alg.d(w_n1)
    T = Form.basis(alg["T"])
    T_w = T.wedge(w_n1)
    residual = lhs - (2 * m + 1) * T_w
    # solve lhs = c * T ^ omega^{n-1}
    coeff = None
    solvable = True
    for key, v in T_w.terms.items():
        coeff = lhs.terms.get(key, 0) / v
        break
    if coeff is None or lhs != coeff * T_w:
        solvable = False
    theta = coeff * T if solvable else None
    d_omega = alg.d(omega)
    shown = displayed_d_omega(alg, d)
    diff = d_omega - shown
    wit = {
        "n": n,
        "m": m,
        "stated_coefficient": 2 * m + 1,
        "residual_terms": len(residual.terms),
        "solved_theta_T_coefficient": coeff if solvable else None,
        "d_theta_zero": True,
        "d_omega": alg.form_to_json(d_omega),
        "d_omega_matches_display": diff.is_zero(),
        "d_omega_minus_display": alg.form_to_json(diff),
        "positive_definite": positive_definite(metric_matrix(alg, omega, complex_structure(alg, d))),
    }
    theta_expected = (2 * m + 1) * T
    d_theta = alg.d(theta_expected)
    wit["d_theta_zero"] = d_theta.is_zero() and (theta is None or alg.d(theta).is_zero())
    ok = residual.is_zero() and wit["d_theta_zero"]
    return {"theta": theta, "theta_expected": theta_expected, "d_omega": d_omega,
            "residual": residual, "certificate": Certificate("lcb", ok, wit)}


def lck_obstruction(d: int, b2: int | None = None, b1: int | None = None) -> Certificate:
    """No invariant LCK structure for d > 1.

    (1) closed 1-forms = span(T^); (2) the triple (T, X_11, Y_11) has
    vanishing mutual brackets, so d eta(T, X_11, Y_11) = 0 for every
    invariant 2-form eta, forcing theta(T) = 0; (3) theta = 0 would make
    omega Kaehler, impossible with b_2 = 0 (and b_1 odd).
    """
    if d == 1:
        return not_applicable("lck", "d = 1: X_11 does not exist and the surface carries an LCK metric")
    alg = structure_constants(d)
    wit = {}
    closed = alg.closed_one_forms()
    t = alg["T"]
    part1 = len(closed) == 1 and all((x != 0) == (i == t) for i, x in enumerate(closed[0]))
    wit["closed_one_forms_dim"] = len(closed)
    wit["closed_one_forms_span_T"] = part1
    al = aliases(d)
    triple = ["T", al["X(1,1)"], al["Y(1,1)"]]
    idx = [alg[x] for x in triple]
    brackets = {f"[{alg.names[a]},{alg.names[b]}]": alg.bracket_basis(a, b)
                for a, b in combinations(idx, 2)}
    part2 = not any(brackets.values())
    # every basis 2-form has d(.)(T, X11, Y11) = 0
    key = tuple(sorted(idx))
    bad2 = [(a, b) for a, b in combinations(range(alg.dim), 2)
            if alg.d(Form.basis(a, b)).terms.get(key)]
    part2 = part2 and not bad2
    wit["witness_triple"] = triple
    wit["witness_aliases"] = ["W2", "X(1,1)", "Y(1,1)"]
    wit["brackets_vanish"] = part2
    if b2 is None or b1 is None:
        from .cohomology import lie_algebra_betti
        b = lie_algebra_betti(alg, 2)
        b1, b2 = b[1], b[2]
    part3 = b2 == 0 and b1 % 2 == 1
    wit["b1"], wit["b2"] = b1, b2
    wit["kaehler_excluded"] = part3
    return Certificate("lck", part1 and part2 and part3, wit)
