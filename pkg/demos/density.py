"""
Deciding density of finitely generated subgroups of R^r
=======================================================

A subgroup generated by vectors with entries in Q(sqrt D) is dense iff it
spans R^r and no integer-valued functional exists. When the answer is
"not dense" the verdict carries that functional so it can be checked by
hand.
"""
import numpy as np

from solvlat import QuadNum
from solvlat.certify import check_density_witness, kronecker_dense

one, zero, r2 = QuadNum(1, 0, 2), QuadNum(0, 0, 2), QuadNum(0, 1, 2)

v = kronecker_dense([[one], [r2]])
print("{1, sqrt2} dense in R:", v.dense)

# float sanity check: the orbit of sqrt2 mod 1 fills the unit interval
frac = np.sort((np.arange(1, 2000) * np.sqrt(2)) % 1.0)
print("largest gap among 2000 multiples of sqrt2 mod 1: %.4f" % np.diff(frac).max())

gens = [[one, zero], [zero, one], [r2, r2]]
v = kronecker_dense(gens)
print("{(1,0), (0,1), (sqrt2,sqrt2)} dense in R^2:", v.dense)
print("  functional w =", v.witness["w"], "values m =", v.witness["m"])
print("  witness re-checked:", check_density_witness(gens, v))
