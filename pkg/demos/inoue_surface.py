"""
The Inoue surface as a lattice quotient
=======================================

Build the smallest lattice (d = 1, beta = 3), check its relations and
discreteness, and look at the numbers that come out: the unit alpha, the
commutator of the two nilpotent generators, and the Betti numbers.
"""
import numpy as np

from solvlat import BuildSpec, build, group
from solvlat.certify import check_relations, discreteness, toroidal_type
from solvlat.cohomology import betti_report

pres = build(BuildSpec(1, 3))
print("alpha =", pres.alpha, "~", float(pres.alpha))

# alpha is a unit of Q(sqrt5): the conjugation by g0 acts on the nilpotent
# generators through N, whose eigenvalues are alpha and 1/alpha
N = np.array(pres.N, dtype=float)
print("eigenvalues of N:", np.sort(np.linalg.eigvals(N)))

# the two generators commute up to a central element sqrt5
z = group.commutator(pres.g[0], pres.g[1])
print("[g1, g2] has central block", z.C)

for c in (check_relations(pres), discreteness(pres)):
    print(f"{c.kind:>14}: {c.status}")

rep = betti_report(pres)
print("b0, b1, b2 =", rep["b0"], rep["b1"], rep["b2"])
print("H1 of the lattice: rank", rep["h1_rank"], "torsion", rep["h1_torsion"])

# a rank-1 lattice in R is never dense, so d = 1 is not toroidal
print("toroidal:", toroidal_type(pres).passed)
