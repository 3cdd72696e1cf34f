"""
Orbits meeting a subgroup
=========================

Walks one orbit-intersection instance end to end: the module, the subgroup
analysis, the residue system and the resulting F-sets.
"""

from frobenius_ml.frobmod import FgModule, validate
from frobenius_ml.orbitgamma import OrbitSum, intersect_orbit_subgroup, membership_system, subgroup_analyze

# Z^2 with F = multiplication by 2; the minimal polynomial is X - 2
M = FgModule(2, (), [[2, 0], [0, 2]], f=[-2, 1])
print("axiom checks:", {k: c.status for k, c in validate(M).checks.items()})

# O = (1, 0) + {(0, 2^n)}
orbit = OrbitSum(M.element((1, 0)), ((M.element((0, 1)), 1),))

# Gamma = <(1, 1), (0, 3)> is the set of (x, y) with x = y mod 3
gens = [M.element((1, 1)), M.element((0, 3))]
sub = subgroup_analyze(M, gens)
print("Gamma_1 basis:", sub.gamma1)
print("congruence rows:", sub.congruence_rows)

# membership becomes a congruence in z_{0,n} = 2^n
cons, forms = membership_system(M, orbit, sub, ())
print("congruences:", cons, "equations:", forms)

res = intersect_orbit_subgroup(M, orbit, gens)
print("status:", res.status.tag)
for S in res.fsets:
    print("F-set:", S.describe())

# the same orbit against 3Z x 3Z never meets it: 2^n is a unit mod 3
res = intersect_orbit_subgroup(M, orbit, [M.element((3, 0)), M.element((0, 3))])
print("against 3Z^2:", [S.describe() for S in res.fsets], res.status.tag)

# a Fibonacci action with a Z/4 summand, two orbit terms and a step of 2
T = FgModule(2, (4,), [[0, 1], [1, 1]], [[1, 0]], [[3]], f=[3, 2, -4, 1])
orbit = OrbitSum(
    T.element((0, 0), (1,)),
    ((T.element((1, 0), (0,)), 1), (T.element((0, 1), (2,)), 2)),
)
res = intersect_orbit_subgroup(T, orbit, [T.element((2, 0), (1,)), T.element((0, 2), (0,))])
print("torsion example:", res.status.tag, [S.describe() for S in res.fsets][:3], "...")
print("exponents up to 6:", sorted(res.exponents.points(6)))
