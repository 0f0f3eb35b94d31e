"""One-dimensional baseline: the generalised trapezoid defect and its
variation bounds, and the corner-derivative representation with its
Riemann-Stieltjes remainder.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from . import _numerics as num
from .bivariation import total_variation_1d
from .expr import Expr, differentiate, evaluate, free_variables, parse
from .kernels import kernel_S_1d


def parse_1d(source: str) -> Expr:
    """Parse a function of one variable, written in ``x`` or ``t``."""
    e = parse(re.sub(r"\bx\b", "t", source))
    if "s" in free_variables(e):
        raise ValueError("a one-variable function may not use 's'")
    return e


def _as_expr(f) -> Expr:
    return parse_1d(f) if isinstance(f, str) else f


def _value(f: Expr, x):
    return evaluate(f, x, 0.0)


def _derivative(f: Expr, k: int) -> Expr:
    for _ in range(k):
        f = differentiate(f, "t")
    return f


def _check(x, interval):
    a, b = interval
    if not a < b:
        raise ValueError(f"need a < b, got {interval}")
    if not a <= x <= b:
        raise ValueError(f"x = {x} outside [{a}, {b}]")
    return a, b


def phi_defect(f, x: float, interval) -> float:
    f = _as_expr(f)
    a, b = _check(x, interval)
    return (b - x) / (b - a) * _value(f, a) + (x - a) / (b - a) * _value(f, b) - _value(f, x)


@dataclass(frozen=True)
class PhiBounds:
    b1: float
    midpoint_branch: float
    power_mean_branch: float
    max_branch: float
    p: float
    q: float

    @property
    def branches(self) -> tuple[float, float, float]:
        return (self.midpoint_branch, self.power_mean_branch, self.max_branch)


def _variation(f, lo, hi, tol):
    if hi <= lo:
        return 0.0
    est = total_variation_1d(f, (lo, hi), tol)
    if not est.converged:
        raise num.ConvergenceError(f"variation on [{lo}, {hi}] did not converge")
    return est.value


def phi_bounds(f, x: float, interval, p: float = 2.0, tol: float = 1e-12) -> PhiBounds:
    """``b1`` and the three second-level bounds on ``|phi_defect|``."""
    f = _as_expr(f)
    a, b = _check(x, interval)
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    q = p / (p - 1)
    v_left, v_right = _variation(f, a, x, tol), _variation(f, x, b, tol)
    v_all = _variation(f, a, b, tol)
    wl, wr = (b - x) / (b - a), (x - a) / (b - a)
    b1 = wl * v_left + wr * v_right
    mid = (0.5 + abs(x - (a + b) / 2) / (b - a)) * v_all
    power = (wl ** p + wr ** p) ** (1 / p) * (v_left ** q + v_right ** q) ** (1 / q)
    top = 0.5 * v_all + 0.5 * abs(v_left - v_right)
    return PhiBounds(b1, mid, power, top, p, q)


def d_poly(f, n: int, x: float, interval) -> float:
    """Chord value plus endpoint-derivative corrections up to order ``n``."""
    f = _as_expr(f)
    a, b = _check(x, interval)
    chord = ((b - x) * _value(f, a) + (x - a) * _value(f, b)) / (b - a)
    total = 0.0
    for k in range(1, n + 1):
        fk = _derivative(f, k)
        total += ((x - a) ** (k - 1) * _value(fk, a)
                  + (-1) ** k * (b - x) ** (k - 1) * _value(fk, b)) / math.factorial(k)
    return chord + (b - x) * (x - a) / (b - a) * total


@dataclass(frozen=True)
class UnivariateRemainder:
    value: float
    residual: float
    est_error: float
    converged: bool


def e_remainder(f, n: int, x: float, interval, tol: float = 1e-12,
                factorial_scaling: bool = False) -> UnivariateRemainder:
    """``(1/(b-a)) int S_n(x, t) d f^(n)(t)`` and the residual ``f(x) - D_n - E_n``.

    The default kernel carries no ``1/n!``; the residual then vanishes for
    n <= 1 only.  ``factorial_scaling=True`` uses the Taylor normalisation,
    under which the residual vanishes for every n.
    """
    f = _as_expr(f)
    a, b = _check(x, interval)
    fn = _derivative(f, n)
    est = num.rs_single(lambda t: kernel_S_1d(n, x, a, b, t, factorial_scaling), lambda t: _value(fn, t),
                        a, b, tol, breaks=(x,))
    value = est.value / (b - a)
    residual = (_value(f, x) - d_poly(f, n, x, interval)) - value
    return UnivariateRemainder(value, residual, est.est_error / (b - a), est.converged)
