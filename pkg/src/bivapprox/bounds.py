"""Error bounds for the remainder ``B_n`` and the midpoint remainder ``F_M^n``.

Variation-type bounds use the bivariation of ``D^(n,n) f``; the
absolutely-continuous bounds use sup and L_p norms of ``D^(n+1,n+1) f``.
Every norm is an estimate that carries its own convergence flag; a bound
built on an unconverged norm is marked advisory.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _numerics as num
from .bivariation import SMOOTH_QUADRATURE, VariationEstimate, total_bivariation
from .domain import DerivativeField, EvalPoint, MixedOrder, Rectangle
from .expr import evaluate
from .kernels import kernel_sup


@dataclass(frozen=True)
class NormEstimate:
    value: float
    converged: bool
    levels: int


@dataclass(frozen=True)
class BoundReport:
    n: int
    point: EvalPoint
    pointwise_variation_bound: float
    global_variation_bound: float
    linf_bound: float
    lp_bound: float
    p: float
    q: float
    variation: VariationEstimate
    linf_norm: NormEstimate
    lp_norm: NormEstimate

    @property
    def advisory(self) -> bool:
        return not (self.variation.converged and self.linf_norm.converged and self.lp_norm.converged)


def conjugate(p: float) -> float:
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    return p / (p - 1)


def linf_norm(field: DerivativeField, order, region: Rectangle, start: int = 64,
              rtol: float = 1e-4, max_levels: int = 4) -> NormEstimate:
    """Sup of ``|D^(p,q) f|`` on refined node lattices (64x64 cells, doubling)."""
    expr = field.partial(MixedOrder(*order))
    prev = None
    for k in range(max_levels):
        m = start * 2 ** k
        t = np.linspace(region.a, region.b, m + 1)
        s = np.linspace(region.c, region.d, m + 1)
        vals = num._as_grid(evaluate(expr, t[:, None], s[None, :]), (m + 1, m + 1))
        cur = float(np.max(np.abs(vals)))
        if prev is not None and abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return NormEstimate(cur, True, k + 1)
        prev = cur
    return NormEstimate(prev, False, max_levels)


def lp_norm(field: DerivativeField, order, region: Rectangle, p: float = 2.0,
            tol: float = 1e-10) -> NormEstimate:
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    expr = field.partial(MixedOrder(*order))
    est = num.gl_double(lambda t, s: np.abs(evaluate(expr, t, s)) ** p,
                        region.a, region.b, region.c, region.d, tol)
    return NormEstimate(max(est.value, 0.0) ** (1 / p), est.converged, len(est.levels))


VARIATION_TOL = 1e-10


def _variation(field, n, Q, variation):
    if variation is None:
        variation = total_bivariation(field, (n, n), Q, SMOOTH_QUADRATURE, tol=VARIATION_TOL)
    return variation


def variation_bound(field: DerivativeField, n: int, point: EvalPoint, Q: Rectangle,
                    variation: VariationEstimate | None = None) -> tuple[float, float]:
    """(pointwise, global) variation bounds on ``|B_n|`` at ``point``."""
    Q.check(point)
    V = _variation(field, n, Q, variation).value
    pointwise = kernel_sup(n, point, Q) * V / Q.area
    return pointwise, _global_coefficient(n, Q) * V


def _global_coefficient(n: int, Q: Rectangle) -> float:
    return Q.width ** n * Q.height ** n / (2 ** (2 * n + 2) * math.factorial(n))


def midpoint_variation_bound(field: DerivativeField, n: int, Q: Rectangle,
                             variation: VariationEstimate | None = None) -> float:
    return _global_coefficient(n, Q) * _variation(field, n, Q, variation).value


def ac_coefficients(n: int, point: EvalPoint, Q: Rectangle, p: float = 2.0) -> tuple[float, float]:
    """Norm multipliers of the sup-norm and L_p bounds at ``point``."""
    q = conjugate(p)
    x, y = point.x, point.y
    a, b, c, d = Q.a, Q.b, Q.c, Q.d
    e = n + 1
    cx = (b - x) * (x - a) ** e + (x - a) * (b - x) ** e
    cy = (d - y) * (y - c) ** e + (y - c) * (d - y) ** e
    linf = cx * cy / (math.factorial(n) * e ** 2 * Q.area)
    e = n + 1 / q
    cx = (b - x) * (x - a) ** e + (x - a) * (b - x) ** e
    cy = (d - y) * (y - c) ** e + (y - c) * (d - y) ** e
    lp = cx * cy / (math.factorial(n) * (n * q + 1) ** (1 / q) * Q.area)
    return linf, lp


def midpoint_ac_coefficients(n: int, Q: Rectangle, p: float = 2.0) -> tuple[float, float]:
    q = conjugate(p)
    h, k = Q.width, Q.height
    nf = math.factorial(n)
    linf = (h * k) ** (n + 1) / (nf * 2 ** (2 * n + 2) * (n + 1) ** 2)
    lp = h ** (n + 1 / q) * k ** (n + 1 / q) / (nf * 2 ** (2 * n + 2 / q) * (n * q + 1) ** (1 / q))
    return linf, lp


def _norms(field, n, Q, p, norms):
    if norms is None:
        order = (n + 1, n + 1)
        norms = (linf_norm(field, order, Q), lp_norm(field, order, Q, p))
    return norms


def ac_bounds(field: DerivativeField, n: int, point: EvalPoint, Q: Rectangle, p: float = 2.0,
              norms: tuple[NormEstimate, NormEstimate] | None = None) -> tuple[float, float]:
    """(sup-norm, L_p) bounds on ``|B_n|`` when ``D^(n+1,n+1) f`` is integrable."""
    Q.check(point)
    ninf, np_ = _norms(field, n, Q, p, norms)
    cinf, cp = ac_coefficients(n, point, Q, p)
    return cinf * ninf.value, cp * np_.value


def midpoint_ac_bounds(field: DerivativeField, n: int, Q: Rectangle, p: float = 2.0,
                       norms: tuple[NormEstimate, NormEstimate] | None = None) -> tuple[float, float]:
    ninf, np_ = _norms(field, n, Q, p, norms)
    cinf, cp = midpoint_ac_coefficients(n, Q, p)
    return cinf * ninf.value, cp * np_.value


def bound_report(field: DerivativeField, n: int, point: EvalPoint, Q: Rectangle,
                 p: float = 2.0) -> BoundReport:
    V = _variation(field, n, Q, None)
    norms = _norms(field, n, Q, p, None)
    pointwise, global_ = variation_bound(field, n, point, Q, V)
    linf, lp = ac_bounds(field, n, point, Q, p, norms)
    return BoundReport(n, point, pointwise, global_, linf, lp, p, conjugate(p), V, *norms)
