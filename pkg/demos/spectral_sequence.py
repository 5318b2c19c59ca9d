"""
Cohomology of the fiber and of the total space
==============================================

The fiber is a nilmanifold over a 2d-torus with a d^2-torus fiber. Its E_2
page is Lambda(u) (x) Lambda(c) with d_2 given by the commutator pairing.
The g0 action has weights alpha^k on the surviving classes; only weight 0
survives the Wang sequence.
"""
from solvlat.cohomology import betti_for, fiber_cohomology, invariant_cohomology_check
from solvlat.lattice import eigenbasis, make_block_N

for d in (1, 3):
    alpha, a, b = eigenbasis(make_block_N(3, d), 3)
    f = fiber_cohomology(d, a, b, alpha)
    dims = {k: v["dim"] for k, v in f["pieces"].items()}
    print(f"d = {d}: E3 pieces {dims}")
    print("  dim H1, H2 of the fiber:", f["dimH1"], f["dimH2"])
    print("  weights on E3^{1,1}:", f["weights"]["1,1"])
    print("  nilradical Lie cohomology:", invariant_cohomology_check(d)["fiber"])
    rep = betti_for(d)
    print("  total space b0, b1, b2:", rep["b0"], rep["b1"], rep["b2"])
