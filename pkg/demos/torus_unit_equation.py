"""
The unit equation x + y = 1 inside <(t, 1 + t)>
===============================================

Over F_2(t) the solutions are (t^(2^n), (1 + t)^(2^n)): one Frobenius orbit.
The sweep finds them in an exponent box and the clustering recognises the
orbit.
"""

from frobenius_ml.exactcore import GF, FqRat
from frobenius_ml.gmdemo import LinearRelation, TorusSubgroup, cluster_fsets, gm_report, intersect_hypersurface

K = GF(2)
one = FqRat.const(K, 1)
G = TorusSubgroup.make(2, [[[0, 1], [1]], [[1], [1, 1]]])
X = LinearRelation((one, one), one)

print("independence:", G.independence()["status"])
sols = intersect_hypersurface(G, X, 64)
print("solutions:", sols)

cl = cluster_fsets(sols, 2, 64)
for e0, chain in cl.orbits:
    print("orbit from", e0, "with", len(chain), "points in the box")

rep = gm_report(G, X, 64)
print("groupless F-sets:", rep["fsets_downstairs"])
print("closed under Frobenius:", rep["frobenius_closure"])

# x = 1 inside <t> has only the trivial solution
G1 = TorusSubgroup.make(3, [[[0, 1]]])
K3 = GF(3)
print("t^n = 1:", intersect_hypersurface(G1, LinearRelation((FqRat.const(K3, 1),), FqRat.const(K3, 1)), 30))
