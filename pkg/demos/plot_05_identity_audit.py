"""
Auditing the representation
===========================

The approximant A_n combines the chord plane with corner derivatives; B_n is
the Stieltjes remainder.  Instead of assuming f = A_n + B_n, the audit
measures the residual at each point.
"""

from bivapprox import DerivativeField, EvalPoint, Rectangle, approx_A, audit_identity, remainder_B

Q = Rectangle.unit()

###############################################################################
# A boundary-vanishing function has a closed-form zero-order residual:
# at (1/4, 1/4) the defect is 27/1024.
f = DerivativeField.from_source("t*(1-t)*s*(1-s)")
p = EvalPoint(0.25, 0.25)
B = remainder_B(f, 0, p, Q)
print(f"f = {f(0.25, 0.25)}, A_0 = {approx_A(f, 0, p, Q)}, B_0 = {B.value}")
print(f"residual {f(0.25, 0.25) - B.value}  vs 27/1024 = {27 / 1024}")

###############################################################################
# Residuals at a few points, both sign conventions, n = 0..2.
g = DerivativeField.from_source("exp(t)*sin(2*s)")
points = [EvalPoint(0.2, 0.7), EvalPoint(0.6, 0.4), Q.midpoint]
for n in range(3):
    for row in audit_identity(g, n, points, Q):
        line = f"n={n} ({row.point.x}, {row.point.y}) {row.sign_variant:<16} residual {row.residual:+.6e}"
        if row.midpoint_residual is not None:
            line += f"   midpoint form {row.midpoint_residual:+.6e}"
        print(line)

###############################################################################
# At the four corners the zero-order residual vanishes: the chord plane
# interpolates and the kernel weight is zero.
print(max(abs(r.residual) for r in audit_identity(g, 0, list(Q.corners), Q)))
