import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcs2d.polyroots import degree, eval_poly, real_roots, trim


def poly_from_roots(roots):
    coeffs = [1.0]
    for r in roots:
        coeffs = [0.0] + coeffs
        for i in range(len(coeffs) - 1):
            coeffs[i] -= r * coeffs[i + 1]
    return coeffs


def test_linear():
    assert real_roots([-6.0, 2.0]) == [3.0]


def test_quadratic_two_roots():
    roots = real_roots(poly_from_roots([-1.5, 4.0]))
    assert roots == pytest.approx([-1.5, 4.0], abs=1e-10)


def test_double_root_detected():
    roots = real_roots(poly_from_roots([2.0, 2.0]))
    assert roots == pytest.approx([2.0], abs=1e-7)


def test_no_real_roots():
    assert real_roots([1.0, 0.0, 1.0]) == []


def test_quartic_mixed():
    target = [-3.0, -0.25, 1.0, 7.5]
    roots = real_roots(poly_from_roots(target))
    assert roots == pytest.approx(sorted(target), abs=1e-8)


def test_quartic_with_double_root():
    # (x-1)^2 (x+2)(x-5)
    roots = real_roots(poly_from_roots([1.0, 1.0, -2.0, 5.0]))
    assert roots == pytest.approx([-2.0, 1.0, 5.0], abs=1e-6)


def test_close_roots_cluster_merge():
    roots = real_roots(poly_from_roots([1.0, 1.0 + 1e-12]))
    assert len(roots) == 1


def test_trim_and_degree():
    assert degree([1.0, 2.0, 1e-14]) == 1
    assert trim([0.0, 0.0]) == []
    assert degree([]) == -1


@settings(max_examples=150, deadline=None)
@given(st.lists(st.floats(min_value=-20, max_value=20), min_size=1, max_size=6))
def test_matches_numpy_on_random_products(root_list):
    # well-separated roots only; near-multiple roots are ill-conditioned
    roots = sorted(root_list)
    if any(b - a < 0.05 for a, b in zip(roots, roots[1:])):
        return
    mine = real_roots(poly_from_roots(roots))
    assert mine == pytest.approx(roots, abs=1e-6)


def test_scaled_coefficients_stable():
    base = poly_from_roots([-2.0, 0.5, 3.0])
    scaled = [c * 1e8 for c in base]
    assert real_roots(scaled) == pytest.approx([-2.0, 0.5, 3.0], abs=1e-8)


def test_every_root_has_small_residual():
    rng = random.Random(7)
    for _ in range(50):
        deg = rng.randint(2, 8)
        coeffs = [rng.uniform(-5, 5) for _ in range(deg + 1)]
        if abs(coeffs[-1]) < 0.1:
            coeffs[-1] = 1.0
        for r in real_roots(coeffs):
            # compare against the local slope to normalize conditioning
            slope = max(1.0, abs(eval_poly(np.polyder(np.array(coeffs[::-1])).tolist()[::-1], r)))
            assert abs(eval_poly(coeffs, r)) <= 1e-6 * slope
