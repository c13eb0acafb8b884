from __future__ import annotations

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballinterp.polyjet import Jet
from ballinterp.rng import SplitMix64
from ballinterp.series2d import (TaylorSeries2, axis_coefficients, build_series,
                                 cauchy_coefficient_bound, coefficient_tail_bound, eval2,
                                 geometric_product, geometric_sum, line_restriction_jets,
                                 slice_sums)
from ballinterp.suites import random_series

cplx = st.complex_numbers(max_magnitude=0.6, allow_nan=False, allow_infinity=False)


def test_monomial_spec():
    f = build_series({"monomials": [[1, 1, 1]]})
    assert f[1, 1] == 1
    assert [c for k, c in f.nonzero_items()] == [1]


def test_geometric_sum_coefficients():
    c = 0.6
    f = build_series({"fixture": "geometric_sum", "degree": 10, "params": {"c": c}})
    for (k1, k2), a in f.items():
        assert a == pytest.approx(c ** (k1 + k2) * math.comb(k1 + k2, k1), rel=1e-14)


def test_product_of_coordinate_series():
    f = build_series({"product": [{"monomials": [[1, 0, 1]]}, {"monomials": [[0, 1, 1]]}]})
    assert f == TaylorSeries2.from_dict(2, {(1, 1): 1})


def test_fixture_rejects_singularity_in_ball():
    with pytest.raises(ValueError):
        geometric_sum(0.75, 5)
    with pytest.raises(ValueError):
        geometric_product(1.0, 0.2, 5)
    with pytest.raises(ValueError):
        build_series({"fixture": "nope", "degree": 2})


def test_outside_triangle_is_zero():
    f = geometric_sum(0.5, 3)
    assert f[4, 0] == 0 and f[-1, 2] == 0


def test_eval_examples():
    assert eval2(TaylorSeries2.from_dict(2, {(1, 1): 1}), (0.2, 0.3)) == pytest.approx(0.06, abs=1e-16)
    assert eval2(TaylorSeries2.zeros(5), (0.2, 0.3)) == 0
    f = geometric_sum(0.6, 40)
    assert abs(eval2(f, (0.1, 0.1)) - 1 / (1 - 0.12)) < 1e-12


def test_compensated_eval_agrees():
    f = geometric_product(0.5, -0.7j, 30)
    z = (0.3 - 0.2j, 0.1 + 0.4j)
    exact = 1 / ((1 - 0.5 * z[0]) * (1 + 0.7j * z[1]))
    assert abs(eval2(f, z, compensated=True) - exact) < 1e-12
    assert abs(eval2(f, z) - eval2(f, z, compensated=True)) < 1e-14


def test_json_round_trip():
    f = random_series(SplitMix64(5), 6)
    g = TaylorSeries2.from_json(json.dumps(f.to_json()))
    assert g == f
    with pytest.raises(ValueError):
        TaylorSeries2.from_json({"degree": 1, "coeffs": [[2, 0, 1, 0]]})
    with pytest.raises(ValueError):
        TaylorSeries2.from_json({"coeffs": []})


def test_algebra():
    a = TaylorSeries2.from_dict(2, {(1, 0): 1, (0, 0): 2})
    b = TaylorSeries2.from_dict(3, {(0, 1): 3})
    z = (0.3, -0.2)
    assert abs(eval2(a + b, z) - eval2(a, z) - eval2(b, z)) < 1e-15
    assert abs(eval2(a * b, z) - eval2(a, z) * eval2(b, z)) < 1e-15
    assert abs(eval2(a - a, z)) == 0


# -- slice sums and line restrictions -----------------------------------------

def test_slice_sums_examples():
    f = TaylorSeries2.from_dict(1, {(1, 0): 1, (0, 1): 2})
    s = slice_sums(f, Jet(0.5, (0.5,)))
    assert [j.coeffs[0] for j in s] == [0, 2.5]
    c = TaylorSeries2.from_dict(3, {(0, 0): 7})
    assert [j.coeffs[0] for j in slice_sums(c, Jet(0.2, (0.2,)))] == [7, 0, 0, 0]
    d = slice_sums(f, Jet.variable(0.5, 1))
    assert d[1].coeffs[1] == 1


def test_slice_sums_cache_keys_on_center_and_order():
    f = geometric_sum(0.4, 6)
    a = slice_sums(f, Jet.variable(0.3, 2))
    b = slice_sums(f, Jet.variable(0.3, 1))
    assert a is slice_sums(f, Jet.variable(0.3, 2))
    assert len(b[3].coeffs) == 2


@settings(max_examples=60)
@given(cplx, cplx, st.integers(0, 8), st.integers(0, 3))
def test_slice_sums_reassemble_restriction(t, v, degree, order):
    f = random_series(SplitMix64(degree * 7 + order), degree)
    s = slice_sums(f, Jet.variable(t, order))
    total = sum(j.coeffs[0] * v**l for l, j in enumerate(s))
    assert abs(total - eval2(f, (t * v, v))) <= 1e-10 * (1 + abs(total))
    # s = 0 restriction equals the values of the slice jets
    line = line_restriction_jets(f, t, 0)
    assert all(abs(a - j.coeffs[0]) <= 1e-12 * (1 + abs(a)) for a, j in zip(line, s))
    # higher jet coefficients are t-derivatives of the slice polynomials
    for l, j in enumerate(s):
        for r in range(1, order + 1):
            ref = sum(math.comb(k1, r) * f[k1, l - k1] * t ** (k1 - r) for k1 in range(r, l + 1))
            assert abs(j.coeffs[r] - ref) <= 1e-10 * (1 + abs(ref))


def test_line_restriction_examples():
    f = TaylorSeries2.from_dict(2, {(2, 0): 1})
    assert line_restriction_jets(f, 2, 0) == [0, 0, 4]
    assert line_restriction_jets(f, 2, 1) == [0, 4, 0]
    c = TaylorSeries2.from_dict(3, {(0, 0): 5})
    assert all(x == 0 for x in line_restriction_jets(c, 0.3, 2))
    with pytest.raises(ValueError):
        line_restriction_jets(f, 2, 3)


def test_line_restriction_against_finite_sum():
    # (1/s!) d^s f / dz1^s evaluated on z1 = eta v, read as a polynomial in v
    rng = SplitMix64(9)
    f = random_series(rng, 7)
    eta = 0.7 - 0.3j
    for s in range(4):
        jets = line_restriction_jets(f, eta, s)
        for v in (0.1, 0.2 + 0.1j, -0.3j):
            direct = sum(math.comb(k1, s) * c * (eta * v) ** (k1 - s) * v**k2
                         for (k1, k2), c in f.items() if k1 >= s)
            assert abs(sum(a * v**l for l, a in enumerate(jets)) - direct) < 1e-13


def test_axis_coefficients():
    f = TaylorSeries2.from_dict(4, {(1, 1): 1})
    assert axis_coefficients(f, "z1=0", 1) == [0, 1, 0, 0, 0]
    assert axis_coefficients(f, "z2=0", 0) == [0] * 5
    g = TaylorSeries2.from_dict(4, {(0, 3): 1})
    assert axis_coefficients(g, "z1=0", 0) == [0, 0, 0, 1, 0]
    with pytest.raises(ValueError):
        axis_coefficients(g, "z3=0", 0)


# -- bounds -------------------------------------------------------------------

def test_tail_bound_examples():
    assert coefficient_tail_bound(1, 0.5, 0) == pytest.approx(4)
    assert coefficient_tail_bound(0, 0.5, 3) == 0
    assert coefficient_tail_bound(1, 0.5, 5) < coefficient_tail_bound(1, 0.5, 4)
    with pytest.raises(ValueError):
        coefficient_tail_bound(1, 1.0, 2)


@given(st.floats(0, 0.95), st.integers(0, 30))
def test_tail_bound_matches_partial_sums(x, n):
    brute = math.fsum((l + 1) * x**l for l in range(n, n + 4000))
    assert coefficient_tail_bound(1, x, n) == pytest.approx(brute, rel=1e-9, abs=1e-300)


def test_cauchy_bound_holds_for_product_fixture():
    # 1/((1-c1 z1)(1-c2 z2)) on the closed bidisc of radii r1, r2 has sup 1/((1-|c1| r1)(1-|c2| r2))
    c1, c2, r1, r2 = 0.6, -0.5j, 0.9, 1.2
    sup = 1 / ((1 - abs(c1) * r1) * (1 - abs(c2) * r2))
    f = geometric_product(c1, c2, 25)
    for (k1, k2), a in f.items():
        assert abs(a) <= cauchy_coefficient_bound(sup, r1, r2, k1, k2) * (1 + 1e-12)


def test_eval_is_linear():
    rng = SplitMix64(3)
    f, g = random_series(rng, 6), random_series(rng, 4)
    a, b = 0.3 - 1j, 2.0
    z = (0.2 + 0.1j, -0.4)
    assert abs(eval2(f * a + g * b, z) - (a * eval2(f, z) + b * eval2(g, z))) < 1e-14
