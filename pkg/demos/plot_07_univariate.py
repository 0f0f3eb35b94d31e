"""
The one-variable baseline
=========================

On an interval, the trapezoid defect is bounded through variations on both
sides of the point, and f(x) splits into endpoint-derivative terms plus a
Stieltjes remainder.
"""

import numpy as np

from bivapprox import d_poly, e_remainder, phi_bounds, phi_defect

f, interval = "sin(3*x)", (0.0, 2.0)

print("   x     |defect|   b1         branch1    branch2    branch3")
for x in np.linspace(*interval, 6):
    b = phi_bounds(f, float(x), interval)
    print(f"{x:5.2f}  {abs(phi_defect(f, float(x), interval)):.3e}  {b.b1:.3e}  "
          + "  ".join(f"{v:.3e}" for v in b.branches))

###############################################################################
# Residual f(x) - D_n - E_n of the endpoint-derivative representation, with
# the kernel as printed and with the Taylor normalisation 1/n!.  The two
# agree for n <= 1; only the scaled kernel closes the identity beyond that.
for n in range(5):
    r = e_remainder(f, n, 0.7, interval)
    rs = e_remainder(f, n, 0.7, interval, factorial_scaling=True)
    print(f"n={n}: D_n = {d_poly(f, n, 0.7, interval):+.6f}  residual {r.residual:+.2e}  "
          f"scaled kernel {rs.residual:+.2e}")
