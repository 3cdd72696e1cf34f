"""
Two-term images of a Drinfeld module
====================================

Which a in F_q[t] have phi_a = F^n + F^m?  For phi_t = F + F^2 over F_3 the
answer up to degree 9 is the powers t^(3^k).  Over F_2 sums of such powers
also qualify, since the cross terms cancel in characteristic 2.
"""

from frobenius_ml.drinfeld import DrinfeldModule, TwistedPoly, fq_poly_str, phi_eval, sharp_scenario, two_term_survey
from frobenius_ml.exactcore import GF

D = DrinfeldModule.make(3, [0, 1, 1])
for a in two_term_survey(D, 9):
    print(f"phi_({fq_poly_str(a)}) = {phi_eval(D, a)}")

# t + 1 picks up the constant term
print("phi_(t + 1) =", phi_eval(D, [1, 1]))

D2 = DrinfeldModule.make(2, [0, 1, 1])
print("over F_2:", [fq_poly_str(a) for a in two_term_survey(D2, 4)])

# twisted multiplication does not commute with constants outside F_q
K = GF(3, 2)
F = TwistedPoly.F(K, 3)
lam = next(a for a in K.elements() if K.pow(a, 3) != a)
c = TwistedPoly.const(K, 3, lam)
print("F c =", F * c, "  c F =", c * F)

# the F + F^3 module acting on (t, lambda t)
rep = sharp_scenario(3, 6)
print("(F + F^3)^2 =", rep["phi_t2"])
print("operators in the box:", rep["box_size"], "of which on y = lambda x:", rep["on_X_count"])
for key in ("property_1_on_X_equals_Fq_F2", "property_2_phi_t2_invariant", "property_3_phi_t_leaves_X"):
    print(key, rep[key])
