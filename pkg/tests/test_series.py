import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toric_periods import (BadShape, SpectralParams, build_series, gkz_operator, series_eval, series_residual,
                           step_factor, validate_charge_matrix)


def i0_series(z, terms=40):
    """Oracle: I_0(z) = sum (z/2)^{2k} / (k!)^2, summed exactly."""
    q = Fraction(z) / 2
    return float(sum(q ** (2 * k) / Fraction(math.factorial(k)) ** 2 for k in range(terms)))


def test_step_factor_examples():
    m = validate_charge_matrix([[1, 1]])
    zero = SpectralParams((0, 0))
    assert step_factor(m, zero, 0, (1,)) == 1
    assert step_factor(m, zero, 0, (3,)) == 9
    lam = SpectralParams((0.5, -1.5))
    assert step_factor(m, lam, 0, (0,)) == pytest.approx(0.5j * -1.5j)


@given(lam=st.lists(st.floats(-5, 5), min_size=4, max_size=4),
       d=st.tuples(st.integers(0, 6), st.integers(0, 6)), alpha=st.integers(0, 1))
def test_step_factor_modulus(lam, d, alpha):
    m = validate_charge_matrix([[1, 1, 1, 0], [0, 0, 1, 1]])
    if d[alpha] >= 1:
        assert abs(step_factor(m, SpectralParams(tuple(lam)), alpha, d)) >= 1


def test_p1_coefficients(p1):
    s = build_series(p1, SpectralParams((0, 0)), (12,))
    for d in range(13):
        assert s.coeffs[(d,)] == pytest.approx(1 / math.factorial(d) ** 2, rel=1e-14)


def test_p1xp1_coefficients(p1xp1):
    s = build_series(p1xp1, SpectralParams((0,) * 4), (5, 4))
    for (d1, d2), a in s.coeffs.items():
        assert a == pytest.approx(1 / (math.factorial(d1) * math.factorial(d2)) ** 2, rel=1e-14)
    assert s.coeffs[(0, 0)] == 1


def test_series_value_i0(p1):
    s = build_series(p1, SpectralParams((0, 0)), (20,))
    val, tail = series_eval(s, [0.0])
    assert val == pytest.approx(i0_series(2), rel=1e-14)
    assert val == pytest.approx(2.2795853023360673, rel=1e-14)
    assert tail == pytest.approx(1 / math.factorial(20) ** 2)


def test_series_limits(p1, stacked):
    s = build_series(stacked, SpectralParams((0.2, 0.1, -0.3, 0.4)), (4, 3))
    val, _ = series_eval(s, [-60.0, -60.0])
    assert val == pytest.approx(1.0, abs=1e-20)
    s0 = build_series(p1, SpectralParams((0.3, 0.1)), (0,))
    assert series_eval(s0, [1.7]) == (1.0, 1.0)


@pytest.mark.parametrize("lam", [(0, 0, 0, 0), (0.3, -0.2, 1.1, 0.5)])
def test_path_independence(stacked, lam):
    params = SpectralParams(lam)
    a = build_series(stacked, params, (6, 6))
    b = build_series(stacked, params, (6, 6), order=(1, 0))
    for d in a.coeffs:
        assert abs(a.coeffs[d] - b.coeffs[d]) <= 1e-12 * abs(a.coeffs[d])


def test_coefficients_bounded(stacked):
    s = build_series(stacked, SpectralParams((2.0, -1.0, 0.5, 3.0)), (5, 5))
    assert all(abs(a) <= 1 + 1e-15 for a in s.coeffs.values())


@pytest.mark.parametrize("dataset, dmax", [("p1", (6,)), ("p1xp1", (4, 3)), ("stacked", (4, 4))])
@pytest.mark.parametrize("x0", [0.0, -0.7])
def test_truncated_residual_within_tail(request, dataset, dmax, x0):
    data = request.getfixturevalue(dataset)
    params = SpectralParams((0,) * data.N)
    s = build_series(data, params, dmax)
    x = [x0] * data.n
    _, tail = series_eval(s, x)
    magnitude = sum(abs(a) * math.exp(sum(di * xi for di, xi in zip(d, x))) for d, a in s.coeffs.items())
    # interior terms cancel exactly; their floating sum leaves rounding only
    floor = 16 * 2.0 ** -52 * magnitude
    for alpha in range(data.n):
        total, lower, upper = series_residual(s, gkz_operator(data, params, alpha), x)
        assert lower == 0
        assert abs(total - upper) <= floor
        if x0 == 0.0:
            # boundary terms equal e^{x_alpha} times a face of the tail shell
            assert abs(upper) <= tail * (1 + 1e-14)
            assert abs(total) <= tail + floor
        else:
            assert abs(total) <= tail


def test_bad_dmax(p1):
    with pytest.raises(BadShape):
        build_series(p1, SpectralParams((0, 0)), (1, 2))
