"""Shared numerical engines: blocked tensor-grid reductions, composite
Gauss-Legendre quadrature and midpoint-tagged Riemann-Stieltjes sums.

Every reduction walks the grid in fixed row blocks and sums with numpy's
pairwise summation, so results do not depend on how many threads call in.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import axis_nodes

BLOCK_ELEMENTS = 1 << 20
GL_POINTS = 5
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_POINTS)
ADAPTIVE_CELL_BUDGET = 1 << 18
ROUNDING_FLOOR = 16 * float(np.finfo(float).eps)  # reported errors never claim better than this, relative
# Gauss abscissae plus the cell edges: sign tests must see zeros near the boundary
_PROBE_X = np.concatenate([[-1.0], _GL_X, [1.0]])
_PROBE_W = np.concatenate([[0.0], _GL_W, [0.0]])


class ConvergenceError(RuntimeError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    levels: list = field(default_factory=list)
    est_error: float = 0.0
    converged: bool = True

    def require(self, what="integral"):
        if not self.converged:
            raise ConvergenceError(f"{what} did not converge (est. error {self.est_error:.3g})", self)
        return self


def _as_grid(values, shape):
    arr = np.asarray(values, dtype=float)
    if arr.shape != shape:
        arr = np.broadcast_to(arr, shape)
    return arr


def _rows_per_block(ncols: int) -> int:
    return max(1, BLOCK_ELEMENTS // max(ncols, 1))


def pairwise_total(parts) -> float:
    return float(np.sum(np.asarray(parts, dtype=float)))


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------

def gl_points(nodes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre abscissae and weights on the cells given by ``nodes``."""
    lo, hi = nodes[:-1, None], nodes[1:, None]
    half = 0.5 * (hi - lo)
    pts = (lo + hi) * 0.5 + half * _GL_X[None, :]
    wts = half * _GL_W[None, :]
    return pts.ravel(), wts.ravel()


def tensor_quadrature(h, t_pts, t_w, s_pts, s_w) -> float:
    rows = _rows_per_block(s_pts.size)
    parts = []
    for i0 in range(0, t_pts.size, rows):
        T = t_pts[i0:i0 + rows, None]
        vals = _as_grid(h(T, s_pts[None, :]), (T.shape[0], s_pts.size))
        parts.append(np.sum(vals * t_w[i0:i0 + rows, None] * s_w[None, :]))
    return pairwise_total(parts)


def gl_double(h, lo_t, hi_t, lo_s, hi_s, tol, t_breaks=(), s_breaks=(),
              start_cells=2, max_levels=10) -> IntegralEstimate:
    """Composite 5x5-point Gauss-Legendre with dyadic refinement.

    Each piece between breakpoints is refined separately so that no cell
    straddles a kink.
    """
    levels = []
    for k in range(max_levels):
        cells = start_cells * 2 ** k
        tp, tw = gl_points(axis_nodes(lo_t, hi_t, cells, t_breaks))
        sp, sw = gl_points(axis_nodes(lo_s, hi_s, cells, s_breaks))
        levels.append(tensor_quadrature(h, tp, tw, sp, sw))
        if k >= 1:
            err = max(abs(levels[-1] - levels[-2]), ROUNDING_FLOOR * abs(levels[-1]))
            if err <= tol * max(1.0, abs(levels[-1])):
                return IntegralEstimate(levels[-1], levels, err, True)
    err = abs(levels[-1] - levels[-2]) if len(levels) > 1 else float("inf")
    return IntegralEstimate(levels[-1], levels, err, False)


def gl_single(h, lo, hi, tol, breaks=(), start_cells=2, max_levels=16) -> IntegralEstimate:
    levels = []
    for k in range(max_levels):
        pts, wts = gl_points(axis_nodes(lo, hi, start_cells * 2 ** k, breaks))
        vals = _as_grid(h(pts), pts.shape)
        levels.append(float(np.sum(vals * wts)))
        if k >= 1:
            err = max(abs(levels[-1] - levels[-2]), ROUNDING_FLOOR * abs(levels[-1]))
            if err <= tol * max(1.0, abs(levels[-1])):
                return IntegralEstimate(levels[-1], levels, err, True)
    err = abs(levels[-1] - levels[-2]) if len(levels) > 1 else float("inf")
    return IntegralEstimate(levels[-1], levels, err, False)


def _abs_level(signed, absint, mixed, prev, atol, children):
    """Bookkeeping shared by the adaptive passes.

    Returns (amount to bank, straddling-cell total, status) with status None
    while refinement should continue, True when settled, and False when the
    cell budget ran out.  A pass settles once the straddling cells'
    contribution stops changing under one more subdivision, or no cell
    straddles the zero set.
    """
    clean = float(np.sum(np.abs(signed[~mixed])))
    rest = float(np.sum(absint[mixed]))
    if not mixed.any() or (prev is not None and abs(clean + rest - prev) <= atol):
        return clean + rest, rest, True
    if children * int(np.count_nonzero(mixed)) > ADAPTIVE_CELL_BUDGET:
        return clean + rest, rest, False
    return clean, rest, None


def _abs_pass_2d(g, t_nodes, s_nodes, tol, max_depth):
    """One adaptive pass for ``int int |g|``: cells where ``g`` changes sign
    among its Gauss points are quartered until their share is below ``tol``
    relative to the running total."""
    T0, S0 = np.meshgrid(t_nodes[:-1], s_nodes[:-1], indexing="ij")
    T1, S1 = np.meshgrid(t_nodes[1:], s_nodes[1:], indexing="ij")
    cells = np.stack([T0.ravel(), T1.ravel(), S0.ravel(), S1.ravel()], axis=1)
    w2 = _PROBE_W[:, None] * _PROBE_W[None, :]
    k = _PROBE_X.size
    settled, prev = [], None
    scale = max(1.0, abs(float(gl_double(lambda t, s: np.abs(g(t, s)), t_nodes[0], t_nodes[-1], s_nodes[0],
                                         s_nodes[-1], 1.0, start_cells=t_nodes.size - 1, max_levels=1).value)))
    for depth in range(max_depth + 1):
        signed, absint, mixed = [], [], []
        step = max(1, BLOCK_ELEMENTS // (k * k))
        for i0 in range(0, len(cells), step):
            c = cells[i0:i0 + step]
            ht, hs = 0.5 * (c[:, 1] - c[:, 0]), 0.5 * (c[:, 3] - c[:, 2])
            T = (0.5 * (c[:, 0] + c[:, 1]))[:, None, None] + ht[:, None, None] * _PROBE_X[None, :, None]
            S = (0.5 * (c[:, 2] + c[:, 3]))[:, None, None] + hs[:, None, None] * _PROBE_X[None, None, :]
            v = _as_grid(g(T, S), T.shape[:1] + (k, k))
            W = (ht * hs)[:, None, None] * w2[None]
            signed.append(np.sum(v * W, axis=(1, 2)))
            absint.append(np.sum(np.abs(v) * W, axis=(1, 2)))
            mixed.append((v.max(axis=(1, 2)) > 0) & (v.min(axis=(1, 2)) < 0))
        signed, absint, mixed = np.concatenate(signed), np.concatenate(absint), np.concatenate(mixed)
        here, rest, status = _abs_level(signed, absint, mixed, prev, tol * scale,
                                        4 if depth < max_depth else ADAPTIVE_CELL_BUDGET + 1)
        settled.append(here)
        if status is not None:
            return pairwise_total(settled), status
        prev = rest
        c = cells[mixed]
        tm, sm = 0.5 * (c[:, 0] + c[:, 1]), 0.5 * (c[:, 2] + c[:, 3])
        cells = np.concatenate([
            np.stack([c[:, 0], tm, c[:, 2], sm], 1), np.stack([c[:, 0], tm, sm, c[:, 3]], 1),
            np.stack([tm, c[:, 1], c[:, 2], sm], 1), np.stack([tm, c[:, 1], sm, c[:, 3]], 1)])
    raise AssertionError("unreachable")  # pragma: no cover


def _abs_pass_1d(g, nodes, tol, max_depth):
    cells = np.stack([nodes[:-1], nodes[1:]], axis=1)
    settled, prev = [], None
    scale = max(1.0, abs(float(gl_single(lambda x: np.abs(g(x)), nodes[0], nodes[-1], 1.0,
                                         start_cells=nodes.size - 1, max_levels=1).value)))
    for depth in range(max_depth + 1):
        h = 0.5 * (cells[:, 1] - cells[:, 0])
        X = (0.5 * (cells[:, 0] + cells[:, 1]))[:, None] + h[:, None] * _PROBE_X[None, :]
        v = _as_grid(g(X), X.shape)
        W = h[:, None] * _PROBE_W[None, :]
        signed, absint = np.sum(v * W, axis=1), np.sum(np.abs(v) * W, axis=1)
        mixed = (v.max(axis=1) > 0) & (v.min(axis=1) < 0)
        here, rest, status = _abs_level(signed, absint, mixed, prev, tol * scale,
                                        2 if depth < max_depth else ADAPTIVE_CELL_BUDGET + 1)
        settled.append(here)
        if status is not None:
            return pairwise_total(settled), status
        prev = rest
        c = cells[mixed]
        m = 0.5 * (c[:, 0] + c[:, 1])
        cells = np.concatenate([np.stack([c[:, 0], m], 1), np.stack([m, c[:, 1]], 1)])
    raise AssertionError("unreachable")  # pragma: no cover


def gl_abs_double(g, lo_t, hi_t, lo_s, hi_s, tol, start_cells=8, max_depth=24) -> IntegralEstimate:
    """``int int |g|`` with refinement concentrated on the zero set of ``g``.

    Two passes from ``start_cells`` and ``2 * start_cells`` base cells per
    axis; their difference is the error estimate.
    """
    passes = [_abs_pass_2d(g, np.linspace(lo_t, hi_t, m + 1), np.linspace(lo_s, hi_s, m + 1),
                           0.1 * tol, max_depth) for m in (start_cells, 2 * start_cells)]
    return _abs_estimate(passes, tol)


def gl_abs_single(g, lo, hi, tol, start_cells=8, max_depth=48) -> IntegralEstimate:
    passes = [_abs_pass_1d(g, np.linspace(lo, hi, m + 1), 0.1 * tol, max_depth)
              for m in (start_cells, 2 * start_cells)]
    return _abs_estimate(passes, tol)


def _abs_estimate(passes, tol) -> IntegralEstimate:
    levels = [v for v, _ in passes]
    err = max(abs(levels[1] - levels[0]), ROUNDING_FLOOR * abs(levels[1]))
    ok = all(flag for _, flag in passes) and err <= tol * max(1.0, abs(levels[1]))
    return IntegralEstimate(levels[1], levels, err, ok)


# --------------------------------------------------------------------------
# Riemann-Stieltjes sums
# --------------------------------------------------------------------------

def rs_sum_2d(g, alpha, t_nodes, s_nodes) -> float:
    """Sum of ``g(cell centre) * Delta11 alpha(cell)`` over the tensor grid."""
    sc = 0.5 * (s_nodes[:-1] + s_nodes[1:])
    ncell_t = t_nodes.size - 1
    rows = _rows_per_block(s_nodes.size)
    parts = []
    for i0 in range(0, ncell_t, rows):
        i1 = min(i0 + rows, ncell_t)
        T = t_nodes[i0:i1 + 1, None]
        A = _as_grid(alpha(T, s_nodes[None, :]), (i1 - i0 + 1, s_nodes.size))
        D = np.diff(np.diff(A, axis=0), axis=1)
        tc = 0.5 * (t_nodes[i0:i1] + t_nodes[i0 + 1:i1 + 1])
        G = _as_grid(g(tc[:, None], sc[None, :]), D.shape)
        parts.append(np.sum(G * D))
    return pairwise_total(parts)


def rs_sum_1d(g, alpha, nodes) -> float:
    A = _as_grid(alpha(nodes), nodes.shape)
    centres = 0.5 * (nodes[:-1] + nodes[1:])
    G = _as_grid(g(centres), centres.shape)
    return float(np.sum(G * np.diff(A)))


def richardson_refine(raw, tol, max_levels) -> IntegralEstimate:
    """Drive ``raw(k)`` (a midpoint-tagged sum at level ``k``) to convergence.

    Midpoint sums carry an even error expansion in the mesh width, so one
    Richardson step removes the ``h^2`` term; the difference of successive
    extrapolants is the error estimate.
    """
    raws, extrap = [], []
    err = float("inf")
    for k in range(max_levels):
        raws.append(raw(k))
        if k >= 1:
            extrap.append((4.0 * raws[-1] - raws[-2]) / 3.0)
        if k >= 2:
            err = max(abs(extrap[-1] - extrap[-2]), ROUNDING_FLOOR * abs(extrap[-1]))
            if err <= tol * max(1.0, abs(extrap[-1])):
                return IntegralEstimate(extrap[-1], raws, err, True)
    value = extrap[-1] if extrap else raws[-1]
    return IntegralEstimate(value, raws, err, False)


def rs_double(g, alpha, lo_t, hi_t, lo_s, hi_s, tol, t_breaks=(), s_breaks=(),
              start_cells=8, max_levels=9) -> IntegralEstimate:
    def raw(k):
        cells = start_cells * 2 ** k
        return rs_sum_2d(g, alpha, axis_nodes(lo_t, hi_t, cells, t_breaks),
                         axis_nodes(lo_s, hi_s, cells, s_breaks))
    return richardson_refine(raw, tol, max_levels)


def rs_single(g, alpha, lo, hi, tol, breaks=(), start_cells=8, max_levels=16) -> IntegralEstimate:
    def raw(k):
        return rs_sum_1d(g, alpha, axis_nodes(lo, hi, start_cells * 2 ** k, breaks))
    return richardson_refine(raw, tol, max_levels)
