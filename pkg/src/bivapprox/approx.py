"""Chord plane, the corner-derivative approximant ``A_n``, the remainder
``B_n`` and the midpoint pair ``E_M^n`` / ``F_M^n``; plus an audit that
measures ``f - A_n - B_n`` instead of assuming it vanishes.

Throughout, the integrator of the remainder is ``D^(n,n) f`` (order ``n`` in
each variable), so the absolutely-continuous form integrates against
``D^(n+1,n+1) f``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import _numerics as num
from .domain import DerivativeField, EvalPoint, MixedOrder, Rectangle
from .expr import DomainError, evaluate
from .kernels import (COROLLARY, PROOF_CONSISTENT, SIGN_VARIANTS, KernelSpec, kernel_M,
                      kernel_S)

RS = "rs"
LEBESGUE = "lebesgue"


@dataclass(frozen=True)
class RemainderEstimate:
    value: float
    est_error: float
    converged: bool
    mode: str
    levels: int = 0


@dataclass(frozen=True)
class ApproximationResult:
    n: int
    point: EvalPoint
    sign_variant: str
    f_value: float | None = None
    A_value: float | None = None
    B_value: float | None = None
    B_est_error: float | None = None
    B_converged: bool = False
    residual: float | None = None
    midpoint_variant: str | None = None
    E_value: float | None = None
    F_value: float | None = None
    F_est_error: float | None = None
    midpoint_residual: float | None = None
    error: str | None = None


def _f(field):
    return field.base if isinstance(field, DerivativeField) else field


def _corner_values(fn, Q: Rectangle):
    return (float(fn(Q.a, Q.c)), float(fn(Q.a, Q.d)), float(fn(Q.b, Q.c)), float(fn(Q.b, Q.d)))


def chord_plane(field, point: EvalPoint, Q: Rectangle) -> float:
    """Bilinear interpolant of the four corner values, evaluated at ``point``."""
    Q.check(point)
    x, y = point.x, point.y
    fac, fad, fbc, fbd = _corner_values(_f(field), Q)
    return ((Q.b - x) * (Q.d - y) * fac + (Q.b - x) * (y - Q.c) * fad
            + (x - Q.a) * (Q.d - y) * fbc + (x - Q.a) * (y - Q.c) * fbd) / Q.area


def chord_defect(field, point: EvalPoint, Q: Rectangle) -> float:
    return chord_plane(field, point, Q) - float(_f(field)(point.x, point.y))


def approx_A(field: DerivativeField, n: int, point: EvalPoint, Q: Rectangle) -> float:
    """Chord plane plus the corner-derivative correction of order ``n``."""
    value = chord_plane(field, point, Q)
    if n == 0:
        return value
    x, y = point.x, point.y
    a, b, c, d = Q.a, Q.b, Q.c, Q.d
    total = 0.0
    for j in range(1, n + 1):
        dac, dad, dbc, dbd = _corner_values(field.partial(MixedOrder(n - j, j)), Q)
        sj = (-1.0) ** j
        left = (b - x) * (x - a) ** (n - j) * ((y - c) ** (j - 1) * dac + sj * (d - y) ** (j - 1) * dad)
        right = (x - a) * (b - x) ** (n - j) * (sj * (y - c) ** (j - 1) * dbc + (d - y) ** (j - 1) * dbd)
        total += math.comb(n, j) / math.factorial(j) * (left + right)
    return value + (y - c) * (d - y) / Q.area * total


def remainder_B(field: DerivativeField, n: int, point: EvalPoint, Q: Rectangle, tol: float = 1e-8,
                mode: str = RS, sign_variant: str = PROOF_CONSISTENT) -> RemainderEstimate:
    """``(1/|Q|) int int S_n d_t d_s D^(n,n) f``.

    ``mode='rs'`` uses Riemann-Stieltjes sums against ``D^(n,n) f``;
    ``mode='lebesgue'`` integrates ``S_n * D^(n+1,n+1) f``.  Both split the
    grid at ``(x, y)``.
    """
    kernel = KernelSpec(n, point, Q, sign_variant)
    breaks = dict(t_breaks=(point.x,), s_breaks=(point.y,))
    if mode == RS:
        integrator = field.partial(MixedOrder(n, n))
        est = num.rs_double(kernel, integrator, Q.a, Q.b, Q.c, Q.d, tol, **breaks)
    elif mode == LEBESGUE:
        density = field.partial(MixedOrder(n + 1, n + 1))
        est = num.gl_double(lambda t, s: kernel_S(kernel, t, s) * evaluate(density, t, s),
                            Q.a, Q.b, Q.c, Q.d, tol, **breaks)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return RemainderEstimate(est.value / Q.area, est.est_error / Q.area, est.converged, mode,
                             len(est.levels))


def midpoint_E(field: DerivativeField, n: int, Q: Rectangle) -> float:
    fac, fad, fbc, fbd = _corner_values(field.base, Q)
    value = (fac + fad + fbc + fbd) / 4
    h, k = Q.width, Q.height
    total = 0.0
    for j in range(1, n + 1):
        dac, dad, dbc, dbd = _corner_values(field.partial(MixedOrder(n - j, j)), Q)
        sj = (-1.0) ** j
        total += (math.comb(n, j) / math.factorial(j) * h ** (n - j) * k ** j
                  * (dac + sj * dad + sj * dbc + dbd))
    return value + total / 2 ** (n + 2)


def midpoint_F(field: DerivativeField, n: int, Q: Rectangle, tol: float = 1e-8,
               midpoint_variant: str = COROLLARY) -> RemainderEstimate:
    spec = KernelSpec(n, Q.midpoint, Q, midpoint_variant=midpoint_variant)
    mid = Q.midpoint
    est = num.rs_double(lambda t, s: kernel_M(spec, t, s), field.partial(MixedOrder(n, n)),
                        Q.a, Q.b, Q.c, Q.d, tol, t_breaks=(mid.x,), s_breaks=(mid.y,))
    return RemainderEstimate(est.value / Q.area, est.est_error / Q.area, est.converged, RS,
                             len(est.levels))


def _audit_row(field, n, point, Q, tol, sign_variant, midpoint_variant, mode):
    try:
        Q.check(point)
        f_value = float(field(point.x, point.y))
        A = approx_A(field, n, point, Q)
        B = remainder_B(field, n, point, Q, tol, mode, sign_variant)
        row = dict(f_value=f_value, A_value=A, B_value=B.value, B_est_error=B.est_error,
                   B_converged=B.converged, residual=(f_value - A) - B.value)
        if point == Q.midpoint:
            E = midpoint_E(field, n, Q)
            F = midpoint_F(field, n, Q, tol, midpoint_variant)
            row.update(midpoint_variant=midpoint_variant, E_value=E, F_value=F.value,
                       F_est_error=F.est_error, midpoint_residual=(f_value - E) - F.value)
        return ApproximationResult(n, point, sign_variant, **row)
    except (DomainError, ValueError, ArithmeticError) as exc:
        return ApproximationResult(n, point, sign_variant, error=f"{type(exc).__name__}: {exc}")


def audit_identity(field: DerivativeField, n: int, points, Q: Rectangle, tol: float = 1e-8,
                   variants=SIGN_VARIANTS, midpoint_variant: str = COROLLARY, mode: str = RS,
                   jobs: int = 1) -> list[ApproximationResult]:
    """Residual ``f - A_n - B_n`` at every point for every sign variant.

    Rows come back in input order (points outer, variants inner).  A failing
    row records its error and does not stop the batch.  Rows at the rectangle
    centre also carry ``E_M^n``, ``F_M^n`` and their residual.
    """
    tasks = [(p, v) for p in points for v in variants]

    def work(task):
        return _audit_row(field, n, task[0], Q, tol, task[1], midpoint_variant, mode)

    if jobs <= 1:
        return [work(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(work, tasks))


def compare_variants(field: DerivativeField, n: int, points, Q: Rectangle, tol: float = 1e-8,
                     variants=SIGN_VARIANTS, mode: str = RS) -> dict[str, float]:
    """Largest ``|f - A_n - B_n|`` over ``points`` for each sign variant."""
    rows = audit_identity(field, n, points, Q, tol, variants, mode=mode)
    worst = {v: 0.0 for v in variants}
    for r in rows:
        if r.error is None:
            worst[r.sign_variant] = max(worst[r.sign_variant], abs(r.residual))
    return worst
