"""Checkable certificates for lattice presentations.

Every check recomputes from the generators themselves (group products,
commutators) rather than trusting data recorded by the builder.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm

from gmpy2 import mpq

from . import group
from .jsonio import encode
from .lattice import LatticePresentation, flatten, lattice_rank_test, relation_residual
from .linalg import nullspace, rank, solve_any, transpose
from .qfield import QuadNum, sign, split

PASSED, FAILED, NOT_APPLICABLE = "passed", "failed", "not_applicable"


@dataclass
class Certificate:
    kind: str
    passed: bool
    witnesses: dict = field(default_factory=dict)
    status: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = PASSED if self.passed else FAILED
        if not self.passed and not self.witnesses:
            raise ValueError("a failed certificate must carry witnesses")

    def to_json(self) -> dict:
        return {"kind": self.kind, "passed": self.passed, "status": self.status,
                "witnesses": encode(self.witnesses)}


def not_applicable(kind: str, reason: str) -> Certificate:
    return Certificate(kind, True, {"reason": reason}, NOT_APPLICABLE)


# -------------------------------------------------------------- relations

def check_relations(pres: LatticePresentation) -> Certificate:
    """Exact check of every conjugation relation and of the centrality of h."""
    g0, gens, hs = pres.g0, list(pres.g), list(pres.h)
    failures = []
    for k in range(len(gens)):
        res = relation_residual(g0, gens, hs, pres.N, pres.P, k)
        if res != group.identity(pres.d, res.alpha - res.alpha + 1):
            failures.append({"relation": "conj", "k": k + 1, "residual": res})
    for idx, hk in enumerate(hs):
        if not hk.is_central():
            failures.append({"relation": "central_form", "h": idx + 1})
            continue
        if group.conjugate(g0, hk) != hk:
            failures.append({"relation": "g0_fixes_h", "h": idx + 1})
        for s, gs in enumerate(gens):
            if group.mul(gs, hk) != group.mul(hk, gs):
                failures.append({"relation": "h_commutes", "h": idx + 1, "g": s + 1})
    wit = {"checked_conj": len(gens), "checked_central": len(hs)}
    if failures:
        wit["failures"] = failures
    return Certificate("relations", not failures, wit)


# ---------------------------------------------------------- discreteness

def presentation_commutators(pres: LatticePresentation) -> dict:
    out = {}
    gens = pres.g
    for s in range(len(gens)):
        for t in range(s + 1, len(gens)):
            out[(s, t)] = group.commutator(gens[s], gens[t])
    return out


def discreteness(pres: LatticePresentation) -> Certificate:
    d = pres.d
    wit = {}
    failed = []
    # (a) the images in V = R^2d form a basis
    vcoords = [list(x.a) + list(x.b) for x in pres.g]
    wit["V_rank"] = rank(vcoords)
    wit["V_dim"] = 2 * d
    if wit["V_rank"] != 2 * d:
        failed.append("a")
    # (b) commutators generate a full lattice in the center
    comms = presentation_commutators(pres)
    noncentral = [[s + 1, t + 1] for (s, t), z in comms.items() if not z.is_central()]
    if noncentral:
        failed.append("b")
        wit["noncentral_commutators"] = noncentral
    zvecs = [flatten(z.C) for z in comms.values()]
    lam = lattice_rank_test(zvecs)
    wit["lambdaZ_rank_z"] = lam.rank_z
    wit["lambdaZ_dim_span"] = lam.dim_span
    wit["center_dim"] = d * d
    if not (lam.rank_z == lam.dim_span == d * d):
        failed.append("b")
    # (b') together with the h's the central part stays a full lattice
    full = lattice_rank_test(zvecs + [flatten(h.C) for h in pres.h])
    wit["central_rank_z"] = full.rank_z
    wit["central_dim_span"] = full.dim_span
    if not (full.rank_z == full.dim_span == d * d):
        failed.append("b'")
    # (c) <g0> is discrete in R_>0
    alpha = pres.g0.alpha
    wit["alpha"] = alpha
    if sign(alpha) <= 0 or alpha == 1 or pres.g0 != group.dilation(alpha, d):
        failed.append("c")
    if failed:
        wit["failed_parts"] = sorted(set(failed))
    return Certificate("discreteness", not failed, wit)


# ---------------------------------------------------------------- density

@dataclass
class DensityVerdict:
    dense: bool
    witness: dict

    def to_json(self) -> dict:
        return {"dense": self.dense, "witness": encode(self.witness)}


def _primitive_integer(v) -> list[int]:
    den = lcm(*(int(mpq(x).denominator) for x in v)) or 1
    ints = [int(mpq(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = g or 1
    # sign-normalise: first nonzero entry positive
    lead = next((x for x in ints if x), 1)
    if lead < 0:
        g = -g
    return [x // g for x in ints]


def kronecker_dense(gens, dim: int | None = None) -> DensityVerdict:
    """Decide whether the subgroup of R^r generated by ``gens`` is dense.

    Dense iff the generators span R^r and no nonzero integer vector m lies
    in the row space of the r x k generator matrix M, i.e. no functional w
    takes integer values on all generators. With entries in Q(sqrt(D)),
    ``m`` ranges over rational vectors orthogonal to both the rational and
    surd parts of a kernel basis of M.
    """
    gens = [list(v) for v in gens]
    if dim is None:
        if not gens:
            return DensityVerdict(False, {"type": "empty", "reason": "no generators"})
        dim = len(gens[0])
    k = len(gens)
    if k == 0:
        w = [mpq(int(i == 0)) for i in range(dim)]
        return DensityVerdict(False, {"type": "spanning_defect", "w": w, "rank": 0})
    if any(len(v) != dim for v in gens):
        raise ValueError("generator of the wrong length")
    r = rank(gens)
    if r < dim:
        # w with <w, g> = 0 for every generator
        w = nullspace(gens)[0]
        return DensityVerdict(False, {"type": "spanning_defect", "w": w, "rank": r})
    M = transpose(gens)  # dim x k
    kernel = nullspace(M)
    constraints = []
    for u in kernel:
        parts = [split(x) for x in u]
        constraints.append([p[0] for p in parts])
        constraints.append([p[1] for p in parts])
    constraints = [row for row in constraints if any(row)]
    if constraints:
        integer_space = nullspace(constraints)
    else:
        integer_space = [[mpq(int(i == j)) for i in range(k)] for j in range(k)]
    if not integer_space:
        return DensityVerdict(True, {"type": "none", "rank": r, "kernel_dim": len(kernel)})
    m = _primitive_integer(integer_space[0])
    w = solve_any(gens, m)  # rows of gens are the generators: gens . w = m
    return DensityVerdict(False, {"type": "integer_functional", "m": m, "w": w,
                                  "obstruction_rank": len(integer_space)})


def check_density_witness(gens, verdict: DensityVerdict) -> bool:
    """Independent re-check of a non-density witness."""
    wit = verdict.witness
    if verdict.dense:
        return True
    if wit["type"] == "empty":
        return not gens
    w = wit["w"]
    values = [sum((x * y for x, y in zip(g, w)), mpq(0)) for g in gens]
    if wit["type"] == "spanning_defect":
        return any(w) and all(not v for v in values)
    m = wit["m"]
    return any(m) and all(v == mi for v, mi in zip(values, m))


# -------------------------------------------------------- analytic types

def toroidal_type(pres: LatticePresentation) -> Certificate:
    """First-column criterion: first columns of the central blocks dense in R^d."""
    cols = [[h.C[i][0] for i in range(pres.d)] for h in pres.h]
    verdict = kronecker_dense(cols, pres.d)
    wit = {"criterion": "first-column", "columns": cols, "density": verdict.witness}
    if pres.d == 1:
        wit["note"] = "d = 1: a rank-1 lattice in R^1 is never dense"
    return Certificate("toroidal (first-column criterion)", verdict.dense, wit)


def algebraic_type(pres: LatticePresentation) -> Certificate:
    bad = []
    count = 0
    for idx, x in enumerate(pres.generators()):
        for e in x.entries():
            count += 1
            if type(e) is QuadNum:
                if e.D != pres.D:
                    bad.append({"generator": idx, "entry": e, "D": e.D})
            elif not isinstance(e, (int, type(mpq()))):
                bad.append({"generator": idx, "entry": repr(e)})
    wit = {"field": f"Q(sqrt({pres.D}))", "entries_checked": count}
    if bad:
        wit["non_field_entries"] = bad
    return Certificate("algebraic", not bad, wit)


check_conj_relations = check_relations
discreteness_certificate = discreteness
