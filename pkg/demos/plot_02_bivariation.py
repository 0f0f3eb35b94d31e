"""
Bivariation of a smooth function
================================

The bivariation adds up the absolute rectangular second differences of a
function over finer and finer grids.  For a smooth function it equals the
integral of the absolute mixed partial.  Both routes are computed here.
"""

import math

from bivapprox import DerivativeField, Rectangle, parse, total_bivariation, total_variation_1d
from bivapprox.bivariation import PARTITION_REFINEMENT, SMOOTH_QUADRATURE

Q = Rectangle.unit()

###############################################################################
# ``sin(3t) cos(2s)`` has a mixed partial that changes sign inside the square,
# so the quadrature refines around the zero set and the partition sums
# approach the same value from below.
f = DerivativeField.from_source("sin(3*t)*cos(2*s)")
smooth = total_bivariation(f, (0, 0), Q, SMOOTH_QUADRATURE, tol=1e-12)
refined = total_bivariation(f, (0, 0), Q, PARTITION_REFINEMENT, tol=1e-8)
print(f"smooth quadrature    {smooth.value:.12f}  (converged={smooth.converged})")
print(f"partition refinement {refined.value:.12f}  (lower bound, {refined.levels_used} levels)")

###############################################################################
# For a product g(t) h(s) the bivariation factors into one-variable variations.
g, h = parse("sin(3*t)"), parse("cos(2*t)")
product = total_variation_1d(g, (0, 1)).value * total_variation_1d(h, (0, 1)).value
print(f"V(g) * V(h)          {product:.12f}")

###############################################################################
# Bivariation of a derivative: D^(1,1)(t^2 s^2) = 4ts, whose bivariation is 4.
print("V(D^(1,1) t^2 s^2) =", total_bivariation(DerivativeField.from_source("t^2*s^2"), (1, 1), Q).value)
print("closed form V(sin t sin s) =", math.sin(1) ** 2)
