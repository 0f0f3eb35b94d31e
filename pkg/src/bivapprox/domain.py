"""Rectangles, points, derivative orders, derivative fields and grids."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .expr import Expr, evaluate, mixed_partial, parse

MAX_ORDER = 12


@dataclass(frozen=True)
class Rectangle:
    """The closed rectangle ``[a, b] x [c, d]``."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"rectangle coordinates must be finite, got {vals}")
        if not (self.a < self.b and self.c < self.d):
            raise ValueError(f"rectangle needs a < b and c < d, got {vals}")

    @classmethod
    def unit(cls) -> "Rectangle":
        return cls(0.0, 1.0, 0.0, 1.0)

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def height(self) -> float:
        return self.d - self.c

    @property
    def area(self) -> float:
        return (self.b - self.a) * (self.d - self.c)

    @property
    def midpoint(self) -> "EvalPoint":
        return EvalPoint((self.a + self.b) / 2, (self.c + self.d) / 2)

    @property
    def corners(self) -> tuple["EvalPoint", ...]:
        return (EvalPoint(self.a, self.c), EvalPoint(self.a, self.d),
                EvalPoint(self.b, self.c), EvalPoint(self.b, self.d))

    def contains(self, x: float, y: float) -> bool:
        return self.a <= x <= self.b and self.c <= y <= self.d

    def check(self, point: "EvalPoint") -> "EvalPoint":
        if not self.contains(point.x, point.y):
            raise ValueError(f"point {point} lies outside {self}")
        return point

    def split_t(self, x: float) -> tuple["Rectangle", "Rectangle"]:
        return Rectangle(self.a, x, self.c, self.d), Rectangle(x, self.b, self.c, self.d)

    def split_s(self, y: float) -> tuple["Rectangle", "Rectangle"]:
        return Rectangle(self.a, self.b, self.c, y), Rectangle(self.a, self.b, y, self.d)


@dataclass(frozen=True)
class EvalPoint:
    x: float
    y: float


@dataclass(frozen=True)
class MixedOrder:
    """Derivative order: ``p`` derivatives in t and ``q`` in s."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"orders must be non-negative, got ({self.p}, {self.q})")
        if self.p + self.q > MAX_ORDER:
            raise ValueError(f"total order {self.p + self.q} exceeds ceiling {MAX_ORDER}")

    def __iter__(self):
        yield self.p
        yield self.q

    def shifted(self, dp: int = 1, dq: int = 1) -> "MixedOrder":
        return MixedOrder(self.p + dp, self.q + dq)


def _as_order(order) -> MixedOrder:
    return order if isinstance(order, MixedOrder) else MixedOrder(*order)


@dataclass(frozen=True)
class DerivativeField:
    """A function ``f(t, s)`` together with on-demand mixed partials."""

    base: Expr
    source: str = field(default="", compare=False)

    @classmethod
    def from_source(cls, source: str) -> "DerivativeField":
        return cls(parse(source), source)

    def partial(self, order) -> Expr:
        return mixed_partial(self.base, _as_order(order))

    def evaluator(self, order=(0, 0)):
        """Callable ``(t, s) -> D^(p,q) f(t, s)``."""
        return self.partial(order)

    def __call__(self, t, s, order=(0, 0)):
        return evaluate(self.partial(order), t, s)


@dataclass(frozen=True)
class GridPartition:
    t_nodes: np.ndarray
    s_nodes: np.ndarray

    def __post_init__(self):
        for name in ("t_nodes", "s_nodes"):
            nodes = np.asarray(getattr(self, name), dtype=float)
            if nodes.ndim != 1 or nodes.size < 2:
                raise ValueError(f"{name} needs at least two nodes")
            if np.any(np.diff(nodes) <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            nodes.setflags(write=False)
            object.__setattr__(self, name, nodes)

    @property
    def shape(self) -> tuple[int, int]:
        """Number of cells along t and s."""
        return self.t_nodes.size - 1, self.s_nodes.size - 1

    def covers(self, Q: Rectangle) -> bool:
        return (self.t_nodes[0] == Q.a and self.t_nodes[-1] == Q.b
                and self.s_nodes[0] == Q.c and self.s_nodes[-1] == Q.d)

    def refine(self) -> "GridPartition":
        """Halve every cell."""
        return GridPartition(_bisect(self.t_nodes), _bisect(self.s_nodes))


def _bisect(nodes: np.ndarray) -> np.ndarray:
    out = np.empty(2 * nodes.size - 1)
    out[0::2] = nodes
    out[1::2] = 0.5 * (nodes[:-1] + nodes[1:])
    return out


def axis_nodes(lo: float, hi: float, cells: int, breaks=()) -> np.ndarray:
    """Nodes on ``[lo, hi]``: each piece between breakpoints gets ``cells`` equal cells.

    Breakpoints outside the open interval are ignored, so a piece never
    straddles a breakpoint.
    """
    cuts = [lo] + sorted({float(b) for b in breaks if lo < b < hi}) + [hi]
    pieces = [np.linspace(u, v, cells + 1)[:-1] for u, v in zip(cuts[:-1], cuts[1:])]
    pieces.append(np.array([hi]))
    out = np.concatenate(pieces)
    for k, cut in enumerate(cuts[:-1]):
        out[k * cells] = cut
    return out


def uniform_partition(Q: Rectangle, m_t: int, m_s: int) -> GridPartition:
    if m_t < 1 or m_s < 1:
        raise ValueError(f"cell counts must be positive, got ({m_t}, {m_s})")
    return GridPartition(axis_nodes(Q.a, Q.b, m_t), axis_nodes(Q.c, Q.d, m_s))
