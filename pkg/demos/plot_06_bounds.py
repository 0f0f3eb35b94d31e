"""
Error bounds for the remainder
==============================

Four bounds on |B_n|: a pointwise and a global one from the bivariation of
D^(n,n) f, and two from the sup and L_p norms of D^(n+1,n+1) f.  Each is
compared with the remainder it bounds.
"""

from bivapprox import DerivativeField, EvalPoint, Rectangle, bound_report, remainder_B

Q = Rectangle(0, 1, 0, 2)
f = DerivativeField.from_source("exp(t)*cos(s)")

print(" n   point        |B_n|      var(pt)    var(glob)  sup-norm   L_2")
for n in range(3):
    for p in [EvalPoint(0.25, 0.5), Q.midpoint, EvalPoint(0.9, 1.9)]:
        rep = bound_report(f, n, p, Q, p=2)
        B = remainder_B(f, n, p, Q).value
        print(f" {n}  ({p.x:4}, {p.y:4})  {abs(B):.3e}  {rep.pointwise_variation_bound:.3e}  "
              f"{rep.global_variation_bound:.3e}  {rep.linf_bound:.3e}  {rep.lp_bound:.3e}"
              + ("  (advisory)" if rep.advisory else ""))

###############################################################################
# The global variation bound is the pointwise bound at the centre and is not
# an upper bound for it elsewhere once n >= 2; it is reported, not assumed.
