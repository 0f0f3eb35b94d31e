"""Piecewise Peano-type kernels of the bivariate representation.

Both sign conventions are exposed.  ``proof-consistent`` carries
``(-1)^(n+1)`` on the two mixed quadrants (t and s on opposite sides of the
point), ``theorem-literal`` carries ``(-1)^n``.  At ``n = 0`` both reduce to
the all-positive step table.  Points on a seam (``t == x`` or ``s == y``)
belong to the lower branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import MAX_ORDER, EvalPoint, Rectangle

PROOF_CONSISTENT = "proof-consistent"
THEOREM_LITERAL = "theorem-literal"
SIGN_VARIANTS = (PROOF_CONSISTENT, THEOREM_LITERAL)
COROLLARY = "corollary"
SECTION3 = "section3"
MIDPOINT_VARIANTS = (COROLLARY, SECTION3)


@dataclass(frozen=True)
class KernelSpec:
    n: int
    point: EvalPoint
    Q: Rectangle
    sign_variant: str = PROOF_CONSISTENT
    midpoint_variant: str = COROLLARY

    def __post_init__(self):
        if not 0 <= self.n <= MAX_ORDER:
            raise ValueError(f"n must lie in [0, {MAX_ORDER}], got {self.n}")
        if self.sign_variant not in SIGN_VARIANTS:
            raise ValueError(f"unknown sign variant {self.sign_variant!r}")
        if self.midpoint_variant not in MIDPOINT_VARIANTS:
            raise ValueError(f"unknown midpoint variant {self.midpoint_variant!r}")
        self.Q.check(self.point)

    def __call__(self, t, s):
        return kernel_S(self, t, s)


def mixed_sign(n: int, variant: str) -> float:
    """Sign on the mixed quadrants for kernel order ``n``."""
    if n == 0:
        return 1.0
    if variant in (PROOF_CONSISTENT, SECTION3):
        return (-1.0) ** (n + 1)
    return (-1.0) ** n


def _check_inside(Q: Rectangle, t, s):
    t, s = np.asarray(t, dtype=float), np.asarray(s, dtype=float)
    if np.any(t < Q.a) or np.any(t > Q.b) or np.any(s < Q.c) or np.any(s > Q.d):
        raise ValueError(f"kernel argument outside {Q}")
    return t, s


def kernel_S(spec: KernelSpec, t, s):
    """Value of the order-``n`` representation kernel at ``(t, s)``."""
    Q, n = spec.Q, spec.n
    x, y = spec.point.x, spec.point.y
    t, s = _check_inside(Q, t, s)
    left, low = t <= x, s <= y
    tx = np.where(left, (x - t) ** n * (Q.b - x), (t - x) ** n * (x - Q.a))
    sy = np.where(low, (y - s) ** n * (Q.d - y), (s - y) ** n * (y - Q.c))
    sign = np.where(left == low, 1.0, mixed_sign(n, spec.sign_variant))
    out = sign * tx * sy / math.factorial(n)
    return float(out) if out.ndim == 0 else out


def kernel_M(spec: KernelSpec, t, s):
    """Midpoint kernel; ``spec.point`` is ignored, the rectangle centre is used."""
    Q, n = spec.Q, spec.n
    mt, ms = (Q.a + Q.b) / 2, (Q.c + Q.d) / 2
    t, s = _check_inside(Q, t, s)
    left, low = t <= mt, s <= ms
    prod = np.abs(t - mt) ** n * np.abs(s - ms) ** n
    sign = np.where(left == low, 1.0, mixed_sign(n, spec.midpoint_variant))
    out = Q.area / (4 * math.factorial(n)) * sign * prod
    return float(out) if out.ndim == 0 else out


def kernel_sup(n: int, point: EvalPoint, Q: Rectangle) -> float:
    """Closed-form ``sup |S_n|`` over ``Q``."""
    x, y = point.x, point.y
    mx = max((x - Q.a) ** n * (Q.b - x), (x - Q.a) * (Q.b - x) ** n)
    my = max((y - Q.c) ** n * (Q.d - y), (y - Q.c) * (Q.d - y) ** n)
    return mx * my / math.factorial(n)


def kernel_S_1d(n: int, x: float, a: float, b: float, t, factorial_scaling: bool = False):
    """One-dimensional kernel: ``(x-t)^n (b-x)`` on ``[a, x]``, ``(-1)^(n+1) (t-x)^n (x-a)`` on ``(x, b]``.

    ``factorial_scaling`` divides by ``n!``, the Taylor-remainder normalisation.
    """
    t = np.asarray(t, dtype=float)
    out = np.where(t <= x, (x - t) ** n * (b - x), (-1.0) ** (n + 1) * (t - x) ** n * (x - a))
    if factorial_scaling:
        out = out / math.factorial(n)
    return float(out) if out.ndim == 0 else out
