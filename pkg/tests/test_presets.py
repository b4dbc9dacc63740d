import numpy as np
import pytest

from vlasovwave.presets import (InitialData, Profile1D, make_profile_1d,
                                make_profile_2d, zero_profile)


def test_bump_values():
    b = make_profile_1d("bump", 0, 1, 1)
    assert b(0.0) == 1.0
    assert b(1.0) == 0.0 and b(-1.0) == 0.0
    assert b(0.5) == pytest.approx(0.5625, abs=0)
    assert b(2.0) == 0.0


def test_bump_is_c1_at_edge():
    b = make_profile_1d("bump", 0, 1, 1)
    eps = 1e-7
    assert abs(b(1.0 - eps)) < 5e-14
    assert abs(b.derivative(1.0 - eps)) < 1e-6
    assert b.derivative(1.0) == 0.0


def test_derivative_matches_finite_difference(rng):
    b = make_profile_1d("bump", 0.3, 1.7, 2.5)
    z = rng.uniform(-2.0, 2.5, 20)
    h = 1e-5
    fd = (b(z + h) - b(z - h)) / (2 * h)
    assert np.max(np.abs(fd - b.derivative(z))) < 1e-8


def test_antiderivative():
    b = make_profile_1d("bump", 0, 1, 1)
    assert b.antiderivative(-1.0) == 0.0
    assert b.antiderivative(1.0) == pytest.approx(16.0 / 15.0, rel=1e-13)
    assert b.antiderivative(5.0) == b.antiderivative(1.0)
    # derivative of the antiderivative recovers the profile
    z = np.linspace(-0.9, 0.9, 7)
    h = 1e-6
    fd = (b.antiderivative(z + h) - b.antiderivative(z - h)) / (2 * h)
    assert np.max(np.abs(fd - b(z))) < 1e-9


def test_shifted_bump_requires_shift():
    with pytest.raises(ValueError):
        make_profile_1d("shifted_bump", center=0.0)
    s = make_profile_1d("shifted_bump", center=2.0, radius=0.5)
    assert s(2.0) == 1.0 and s(1.4) == 0.0


def test_zero_profile():
    z = zero_profile()
    assert z.is_zero
    assert z(3.0) == 0.0 and z.sup == 0.0 and z.total_integral == 0.0


def test_product_profile_and_norms():
    f = make_profile_2d("bump2d", 0, 1, 0.5, 1, 1.0)
    assert f(0.0, 0.5) == 1.0
    assert f(1.0, 0.5) == 0.0
    assert f.sup == 1.0
    # max |d/dz (1-z^2)^2| = 8 / (3 sqrt(3))
    expected = 8.0 / (3.0 * np.sqrt(3.0))
    assert f.w1inf == pytest.approx(expected, rel=1e-12)
    assert f.support_x() == (-1.0, 1.0)
    assert f.support_v() == (-0.5, 1.5)


def test_partials_match_finite_differences(rng):
    f = make_profile_2d("bump2d", 0.2, 1.1, -0.3, 0.8, 1.5)
    x = rng.uniform(-1.0, 1.4, 20)
    v = rng.uniform(-1.2, 0.6, 20)
    h = 1e-5
    assert np.max(np.abs((f(x + h, v) - f(x - h, v)) / (2 * h)
                         - f.dx(x, v))) < 1e-8
    assert np.max(np.abs((f(x, v + h) - f(x, v - h)) / (2 * h)
                         - f.dv(x, v))) < 1e-8


def test_initial_data_support_union():
    init = InitialData(
        f0=make_profile_2d("bump2d", 0, 1, 0, 1, 1),
        a0=make_profile_1d("bump", 2.0, 1.0, 0.5),
        a1=make_profile_1d("zero"))
    assert init.field_data_support_x() == (-1.0, 3.0)
    assert init.data_term == pytest.approx(0.5 * 8 / (3 * np.sqrt(3)))


def test_unknown_presets_raise():
    with pytest.raises(ValueError):
        make_profile_1d("gaussian")
    with pytest.raises(ValueError):
        make_profile_2d("gaussian2d")
    with pytest.raises(ValueError):
        Profile1D("bump", radius=-1.0)
