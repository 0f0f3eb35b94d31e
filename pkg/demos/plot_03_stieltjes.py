"""
Riemann-Stieltjes double integrals
==================================

The remainder of the chord-plane approximation is a double integral against
a function rather than against area.  This script evaluates such integrals,
checks the bound by sup times bivariation, and measures how far the
two-dimensional integration-by-parts formula is from holding.
"""

import numpy as np

from bivapprox import DerivativeField, Rectangle, lemma3_audit, rs_double_integral
from bivapprox.rs_quad import check_integration_by_parts, integration_by_parts_cross_term

Q = Rectangle.unit()

###############################################################################
# Against the integrator ts every cell increment equals its area, so the
# Stieltjes integral reduces to an ordinary one: int int (t + s) = 1.
est = rs_double_integral(lambda t, s: t + s, lambda t, s: t * s, Q)
print(f"int int (t+s) d(ts) = {est.value:.15f}  est. error {est.est_error:.1e}")

###############################################################################
# |int int g d alpha| never exceeds sup|g| times the bivariation of alpha.
g, alpha = DerivativeField.from_source("cos(3*t*s)"), DerivativeField.from_source("exp(t)*sin(s)")
audit = lemma3_audit(g, alpha, Q)
print(f"|integral| = {abs(audit.integral):.6f} <= {audit.bound:.6f}: {audit.holds}")

###############################################################################
# The integration-by-parts formula
#     int f d alpha + int alpha d f = rectangular difference of f*alpha
# leaves a defect for non-constant f.  The defect is exactly the integral of
# f_t alpha_s + f_s alpha_t, which the product rule produces.
for fs, als in [("2", "t*s"), ("t*s", "t*s"), ("sin(t)*s", "t*s^2")]:
    f, a = DerivativeField.from_source(fs), DerivativeField.from_source(als)
    defect = check_integration_by_parts(f, a, Q, tol=1e-10)
    cross = integration_by_parts_cross_term(f, a, Q)
    print(f"f={fs:<9} alpha={als:<6} defect {defect:.10f}  cross term {cross:.10f}")
