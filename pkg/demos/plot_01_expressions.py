"""
Expressions and mixed partial derivatives
=========================================

Functions of two variables ``t`` and ``s`` are written as text, parsed
into a tree, and differentiated symbolically.  Everything downstream
(approximants, remainders, bounds) runs on these trees.
"""

import numpy as np

from bivapprox import DerivativeField, evaluate, mixed_partial, parse, to_source

###############################################################################
# Parsing accepts + - * / ^, unary minus, numeric literals and
# sin, cos, exp, ln, sqrt.  Exponents must be constant.
f = parse("exp(t)*sin(2*s) + t^3*s^2")
print("f             =", to_source(f))

###############################################################################
# Mixed partials are simplified as they are built and cached per order.
for order in [(1, 0), (0, 1), (1, 1), (2, 2)]:
    print(f"D^{order} f =", to_source(mixed_partial(f, order)))

###############################################################################
# Evaluation is vectorised: arrays broadcast like any numpy expression.
t = np.linspace(0, 1, 5)
print("f(t, 0.5)     =", evaluate(f, t, 0.5))

###############################################################################
# A DerivativeField bundles a function with its partials.
field = DerivativeField.from_source("t^2*s^2")
print("D^(1,1) at (1, 1) =", field(1.0, 1.0, order=(1, 1)))

###############################################################################
# Malformed input reports the byte offset of the problem.
try:
    parse("t**")
except ValueError as exc:
    print("rejected:", exc)
