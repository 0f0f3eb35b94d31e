"""Bilinear chord-plane approximation on rectangles with corner-derivative
corrections, Riemann-Stieltjes remainders, and variation-type error bounds."""
from .approx import (ApproximationResult, RemainderEstimate, approx_A, audit_identity, chord_defect, compare_variants,
                     chord_plane, midpoint_E, midpoint_F, remainder_B)
from .bivariation import VariationEstimate, delta11, partition_sum, total_bivariation, total_variation_1d
from .bounds import (BoundReport, ac_bounds, bound_report, linf_norm, lp_norm, midpoint_ac_bounds,
                     midpoint_variation_bound, variation_bound)
from .catalog import CATALOG, CATALOG_1D, list_catalog
from .domain import DerivativeField, EvalPoint, GridPartition, MixedOrder, Rectangle
from .expr import DomainError, Expr, ParseError, differentiate, evaluate, mixed_partial, parse, simplify, to_source
from .kernels import KernelSpec, kernel_M, kernel_S, kernel_sup
from .rs_quad import (check_integration_by_parts, lebesgue_double_integral, lemma3_audit,
                      rs_double_integral)
from .univariate import d_poly, e_remainder, phi_bounds, phi_defect

__all__ = [name for name in dir() if not name.startswith("_")]
