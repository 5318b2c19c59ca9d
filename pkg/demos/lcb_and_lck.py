"""
Invariant hermitian geometry on the solvable group
==================================================

Complex structure, the fundamental form omega, the balanced-type identity
d(omega^{n-1}) = theta ^ omega^{n-1}, and the argument that no invariant
LCK metric exists once d > 1.
"""
from solvlat.lie import (build_omega, complex_structure, lcb_verify, lck_obstruction,
                         nijenhuis_check, structure_constants)

for d in (1, 3):
    alg = structure_constants(d)
    J = complex_structure(alg, d)
    print(f"d = {d}: real dimension {alg.dim}")
    print("  J integrable:", nijenhuis_check(alg, J).passed)
    omega = build_omega(alg, d)
    print("  omega has", len(omega.terms), "terms")
    res = lcb_verify(d)
    w = res["certificate"].witnesses
    # the Lee form solved from the identity, and the coefficient 2m+1 it is compared to
    print("  solved theta:", res["theta"], " stated coefficient:", w["stated_coefficient"])
    print("  residual with the stated coefficient is zero:", res["residual"].is_zero())

c = lck_obstruction(3)
print("LCK obstruction at d = 3:", c.status, "witness triple", c.witnesses["witness_triple"])
print("at d = 1:", lck_obstruction(1).status)
