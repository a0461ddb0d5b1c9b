import math

import numpy as np
import pytest
from scipy.integrate import quad

from choi_witness.dephasing import DephasingParams, gamma_antiderivative, linear_entropy_values
from choi_witness.witnesses import measure_ne, measure_ns, valid_segments

POLE = 3 * math.pi / 2
EXCL = 0.05


def test_zero_before_backflow(paper_params):
    assert measure_ns(paper_params, 4.0).value == 0.0
    assert measure_ne(paper_params, 4.0).value == 0.0
    assert measure_ns(paper_params, 4.0).excluded_length == 0.0


def test_positive_after_backflow(paper_params):
    coarse = measure_ns(paper_params, 6.5, 1e-3).value
    fine = measure_ns(paper_params, 6.5, 5e-4).value
    assert coarse > 0
    assert abs(coarse - fine) / fine < 1e-2


def test_excluded_length_reported(paper_params):
    assert measure_ne(paper_params, 10.0).excluded_length == pytest.approx(2 * EXCL)
    assert measure_ne(paper_params, POLE).excluded_length == pytest.approx(EXCL)


def test_valid_segments(paper_params):
    segments, excluded = valid_segments(paper_params, 10.0, EXCL)
    assert segments == [(0.0, pytest.approx(POLE - EXCL)), (pytest.approx(POLE + EXCL), 10.0)]
    assert excluded == pytest.approx(0.1)
    segments, _ = valid_segments(DephasingParams(1, 3), 10.0, EXCL)
    assert segments == [(0.0, 10.0)]


def test_ne_against_antiderivative(paper_params):
    # gamma < 0 on (pole, 2 pi); N_e = -2 * (F(2 pi) - F(pole + excl))
    f = gamma_antiderivative
    exact = -2 * (f(paper_params, 2 * math.pi) - f(paper_params, POLE + EXCL))
    assert exact > 0
    assert measure_ne(paper_params, 10.0, 1e-3).value == pytest.approx(exact, rel=1e-4)
    assert measure_ne(paper_params, 10.0, 5e-4).value == pytest.approx(exact, rel=3e-5)


def test_ns_against_quadrature(paper_params):
    integrand = lambda t: max(0.0, -float(linear_entropy_values(paper_params, t)))
    exact, _ = quad(integrand, POLE + EXCL, 2 * math.pi, epsabs=1e-14, epsrel=1e-12, limit=200)
    assert measure_ns(paper_params, 8.0, 1e-3).value == pytest.approx(exact, rel=1e-4)


def test_monotone_and_shared_support(paper_params):
    t0s = np.round(np.arange(1, 1001) * 0.01, 12)
    ns = np.array([measure_ns(paper_params, t0).value for t0 in t0s])
    ne = np.array([measure_ne(paper_params, t0).value for t0 in t0s])
    for series in (ns, ne):
        assert np.all(np.diff(series) >= 0)
    window = (t0s > POLE + EXCL) & (t0s[:] - 0.01 < 2 * math.pi)
    inc_ns = np.diff(ns, prepend=0.0) > 0
    inc_ne = np.diff(ne, prepend=0.0) > 0
    np.testing.assert_array_equal(inc_ns, inc_ne)
    np.testing.assert_array_equal(inc_ns, window)


def test_overdamped_measures_vanish():
    p = DephasingParams(1, 3)
    assert measure_ns(p, 20.0).value == 0.0
    assert measure_ne(p, 20.0).value == 0.0


def test_argument_checks(paper_params):
    with pytest.raises(ValueError):
        measure_ns(paper_params, 0.0)
    with pytest.raises(ValueError):
        measure_ne(paper_params, 1.0, 0.0)
