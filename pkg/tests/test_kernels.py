import math

import numpy as np
import pytest

from bivapprox.domain import EvalPoint, Rectangle
from bivapprox.kernels import (COROLLARY, PROOF_CONSISTENT, SECTION3, THEOREM_LITERAL, KernelSpec, kernel_M,
                               kernel_S, kernel_S_1d, kernel_sup, mixed_sign)

U = Rectangle.unit()
MID = U.midpoint


def test_zero_order_branch_value():
    spec = KernelSpec(0, EvalPoint(0.25, 0.25), U)
    assert kernel_S(spec, 0.1, 0.1) == 0.5625


def test_first_order_values():
    assert kernel_S(KernelSpec(1, MID, U), 0.25, 0.25) == 1 / 64
    assert kernel_S(KernelSpec(1, MID, U, PROOF_CONSISTENT), 0.75, 0.25) == 1 / 64
    assert kernel_S(KernelSpec(1, MID, U, THEOREM_LITERAL), 0.75, 0.25) == -1 / 64


@pytest.mark.parametrize("n", range(5))
def test_zero_order_signs_are_positive(n):
    assert mixed_sign(0, PROOF_CONSISTENT) == mixed_sign(0, THEOREM_LITERAL) == 1.0
    assert mixed_sign(n, PROOF_CONSISTENT) == -mixed_sign(n, THEOREM_LITERAL) or n == 0


def test_zero_order_kernel_is_positive_everywhere():
    t, s = np.meshgrid(np.linspace(0, 1, 17), np.linspace(0, 1, 17), indexing="ij")
    for x, y in [(0.25, 0.25), (0.6, 0.1), (0.5, 0.5)]:
        for v in (PROOF_CONSISTENT, THEOREM_LITERAL):
            assert np.all(kernel_S(KernelSpec(0, EvalPoint(x, y), U, v), t, s) > 0)


def test_seam_belongs_to_lower_branch():
    spec = KernelSpec(1, EvalPoint(0.5, 0.5), U)
    assert kernel_S(spec, 0.5, 0.5) == 0.0
    spec0 = KernelSpec(0, EvalPoint(0.25, 0.25), U)
    assert kernel_S(spec0, 0.25, 0.25) == 0.75 * 0.75


@pytest.mark.parametrize("n", range(5))
def test_midpoint_kernel_matches_theorem_literal(n):
    t, s = np.meshgrid(np.linspace(0, 1, 64), np.linspace(0, 1, 64), indexing="ij")
    M = kernel_M(KernelSpec(n, MID, U, midpoint_variant=COROLLARY), t, s)
    S = kernel_S(KernelSpec(n, MID, U, THEOREM_LITERAL), t, s)
    np.testing.assert_allclose(M, S, rtol=1e-13, atol=1e-300)


def test_midpoint_kernel_examples():
    t, s = np.meshgrid(np.linspace(0, 1, 9), np.linspace(0, 1, 9), indexing="ij")
    for v in (COROLLARY, SECTION3):
        np.testing.assert_allclose(kernel_M(KernelSpec(0, MID, U, midpoint_variant=v), t, s), 0.25)
    assert kernel_M(KernelSpec(1, MID, U, midpoint_variant=COROLLARY), 0.25, 0.75) == -1 / 64
    assert kernel_M(KernelSpec(1, MID, U, midpoint_variant=SECTION3), 0.25, 0.75) == 1 / 64


def test_kernel_sup_examples():
    assert kernel_sup(1, MID, U) == 1 / 16
    assert kernel_sup(0, EvalPoint(0.25, 0.5), U) == 0.375
    assert kernel_sup(2, EvalPoint(0.0, 0.3), U) == 0.0


@pytest.mark.parametrize("n", range(5))
@pytest.mark.parametrize("x, y", [(0.5, 0.5), (0.2, 0.7), (0.9, 0.35)])
def test_kernel_sup_matches_grid_max(n, x, y):
    Q = Rectangle(-1, 2, 0, 0.5)
    p = EvalPoint(Q.a + x * Q.width, Q.c + y * Q.height)
    t, s = np.meshgrid(np.linspace(Q.a, Q.b, 401), np.linspace(Q.c, Q.d, 401), indexing="ij")
    grid = np.max(np.abs(kernel_S(KernelSpec(n, p, Q), t, s)))
    assert grid <= kernel_sup(n, p, Q) * (1 + 1e-12)
    assert grid == pytest.approx(kernel_sup(n, p, Q), rel=2e-2)


def test_kernel_validation():
    with pytest.raises(ValueError):
        KernelSpec(1, EvalPoint(2, 0), U)
    with pytest.raises(ValueError):
        KernelSpec(1, MID, U, "other")
    with pytest.raises(ValueError):
        kernel_S(KernelSpec(1, MID, U), 1.5, 0.5)


def test_one_dimensional_kernel():
    assert kernel_S_1d(0, 0.25, 0, 1, 0.1) == 0.75
    assert kernel_S_1d(0, 0.25, 0, 1, 0.5) == -0.25
    assert kernel_S_1d(1, 0.25, 0, 1, 0.5) == 0.25 * 0.25
