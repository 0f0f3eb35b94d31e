"""Built-in test functions with analytic reference values on the unit square."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    source: str
    bivariation: float  # Vitali bivariation on [0,1]^2
    integral: float     # int int f dt ds on [0,1]^2
    note: str = ""


E = math.e
CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry("bilinear", "t*s", 1.0, 0.25),
    CatalogEntry("square-product", "t^2*s^2", 1.0, 1 / 9),
    CatalogEntry("sine-product", "sin(t)*sin(s)", math.sin(1) ** 2, (1 - math.cos(1)) ** 2),
    CatalogEntry("anchored", "t*(1-t)*s*(1-s)", 0.25, 1 / 36, "vanishes on the boundary"),
    CatalogEntry("exponential", "exp(t+s)", (E - 1) ** 2, (E - 1) ** 2),
    CatalogEntry("tensor-t2-sin", "t^2*sin(s)", math.sin(1), (1 - math.cos(1)) / 3,
                 "V(t^2) * V(sin s) = 1 * sin(1)"),
    CatalogEntry("tensor-cos-exp", "cos(t)*exp(s)", (1 - math.cos(1)) * (E - 1),
                 math.sin(1) * (E - 1), "V(cos t) * V(e^s)"),
)


@dataclass(frozen=True)
class Catalog1DEntry:
    name: str
    source: str
    interval: tuple[float, float]
    variation: float


CATALOG_1D: tuple[Catalog1DEntry, ...] = (
    Catalog1DEntry("identity", "x", (0.0, 1.0), 1.0),
    Catalog1DEntry("square", "x^2", (0.0, 1.0), 1.0),
    Catalog1DEntry("sine", "sin(x)", (0.0, math.pi), 2.0),
    Catalog1DEntry("exponential", "exp(x)", (0.0, 1.0), E - 1),
    Catalog1DEntry("cubic", "x^3 - x", (-1.0, 2.0), 6.0 + 8 / (3 * math.sqrt(3))),
)


def list_catalog() -> str:
    lines = ["name               source               V on [0,1]^2   integral on [0,1]^2"]
    for e in CATALOG:
        lines.append(f"{e.name:<18} {e.source:<20} {e.bivariation:<14.12g} {e.integral:.12g}"
                     + (f"   ({e.note})" if e.note else ""))
    lines.append("")
    lines.append("one-variable functions:")
    for e in CATALOG_1D:
        lines.append(f"{e.name:<18} {e.source:<20} on [{e.interval[0]:g}, {e.interval[1]:.6g}]  "
                     f"V = {e.variation:.12g}")
    return "\n".join(lines)
