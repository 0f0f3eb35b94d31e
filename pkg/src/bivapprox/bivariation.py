"""Vitali bivariation and one-dimensional total variation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _numerics as num
from .domain import DerivativeField, GridPartition, MixedOrder, Rectangle, uniform_partition
from .expr import Expr, differentiate, evaluate, free_variables

PARTITION_REFINEMENT = "partition-refinement"
SMOOTH_QUADRATURE = "smooth-quadrature"
METHODS = (PARTITION_REFINEMENT, SMOOTH_QUADRATURE)


@dataclass(frozen=True)
class VariationEstimate:
    value: float
    method: str
    levels_used: int
    is_lower_bound: bool
    converged: bool = True
    levels: tuple = ()


def delta11(g, cell) -> float:
    """Rectangular second difference of ``g`` over ``cell``.

    ``cell`` is a Rectangle or a ``(t0, t1, s0, s1)`` tuple with t0 < t1, s0 < s1.
    """
    t0, t1, s0, s1 = (cell.a, cell.b, cell.c, cell.d) if isinstance(cell, Rectangle) else cell
    if not (t0 < t1 and s0 < s1):
        raise ValueError(f"degenerate cell {cell}")
    return float(g(t0, s0) - g(t0, s1) - g(t1, s0) + g(t1, s1))


def partition_sum(g, P: GridPartition) -> float:
    """``sum |Delta11 g|`` over all cells of ``P``."""
    t, s = P.t_nodes, P.s_nodes
    rows = num._rows_per_block(s.size)
    parts = []
    for i0 in range(0, t.size - 1, rows):
        i1 = min(i0 + rows, t.size - 1)
        A = num._as_grid(g(t[i0:i1 + 1, None], s[None, :]), (i1 - i0 + 1, s.size))
        parts.append(np.sum(np.abs(np.diff(np.diff(A, axis=0), axis=1))))
    return num.pairwise_total(parts)


def _settled(sums, tol) -> bool:
    # Two consecutive small changes: a kink between nodes can repeat one sum exactly.
    if len(sums) < 3:
        return False
    scale = tol * abs(sums[-1])
    return abs(sums[-1] - sums[-2]) <= scale and abs(sums[-2] - sums[-3]) <= scale


def _refinement_estimate(g, Q: Rectangle, tol: float, start_cells: int, max_levels: int) -> VariationEstimate:
    P = uniform_partition(Q, start_cells, start_cells)
    sums = [partition_sum(g, P)]
    for _ in range(1, max_levels):
        P = P.refine()
        sums.append(partition_sum(g, P))
        if _settled(sums, tol):
            return VariationEstimate(max(sums), PARTITION_REFINEMENT, len(sums), True, True, tuple(sums))
    return VariationEstimate(max(sums), PARTITION_REFINEMENT, len(sums), True, False, tuple(sums))


def total_bivariation(field, g_order=(0, 0), Q: Rectangle | None = None,
                      method: str = SMOOTH_QUADRATURE, tol: float = 1e-6,
                      start_cells: int = 8, max_levels: int = 9) -> VariationEstimate:
    """Vitali bivariation of ``D^(p,q) f`` over ``Q``.

    ``smooth-quadrature`` integrates ``|d^2/dt ds D^(p,q) f|``, which equals the
    bivariation for C^2 integrands.  ``partition-refinement`` takes the largest
    partition sum over dyadic refinements and is a lower bound by construction.
    A plain callable ``field`` supports only partition refinement.
    """
    Q = Q or Rectangle.unit()
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    p, q = g_order
    if not isinstance(field, DerivativeField):
        if method != PARTITION_REFINEMENT:
            raise ValueError("smooth-quadrature needs a DerivativeField")
        return _refinement_estimate(field, Q, tol, start_cells, max_levels)
    if method == PARTITION_REFINEMENT:
        return _refinement_estimate(field.partial(MixedOrder(p, q)), Q, tol, start_cells, max_levels)
    mixed = field.partial(MixedOrder(p + 1, q + 1))
    est = num.gl_abs_double(lambda t, s: evaluate(mixed, t, s), Q.a, Q.b, Q.c, Q.d, tol)
    return VariationEstimate(est.value, SMOOTH_QUADRATURE, len(est.levels), False, est.converged,
                             tuple(est.levels))


def total_variation_1d(g, interval, tol: float = 1e-10, start_cells: int = 8,
                       max_levels: int = 16) -> VariationEstimate:
    """Total variation of a function of one variable on ``interval = (a, b)``.

    A single-variable Expr is handled by quadrature of ``|g'|`` (symbolic
    derivative); any other callable by dyadic refinement of ``sum |g(x_i) - g(x_{i-1})|``.
    """
    a, b = interval
    if not a < b:
        raise ValueError(f"need a < b, got {interval}")
    if isinstance(g, Expr):
        if "s" in free_variables(g):
            raise ValueError("expected a function of t only")
        dg = differentiate(g, "t")
        est = num.gl_abs_single(lambda x: evaluate(dg, x, 0.0), a, b, tol)
        return VariationEstimate(est.value, SMOOTH_QUADRATURE, len(est.levels), False,
                                 est.converged, tuple(est.levels))
    sums = []
    for k in range(max_levels):
        nodes = np.linspace(a, b, start_cells * 2 ** k + 1)
        sums.append(float(np.sum(np.abs(np.diff(num._as_grid(g(nodes), nodes.shape))))))
        if _settled(sums, tol):
            return VariationEstimate(max(sums), PARTITION_REFINEMENT, len(sums), True, True, tuple(sums))
    return VariationEstimate(max(sums), PARTITION_REFINEMENT, len(sums), True, False, tuple(sums))
