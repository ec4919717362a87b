import numpy as np
import pytest

from advect2d import (
    DoswellParams,
    angular_velocity,
    doswell_exact,
    doswell_field,
    doswell_velocity,
    make_grid,
    negated,
    sample_components,
    tangential_speed,
    uniform_field,
)

VBAR = 2.59807


def test_tangential_speed_zero_at_origin():
    assert tangential_speed(0.0, VBAR) == 0.0


def test_tangential_speed_peak_is_unity():
    r = np.linspace(0.0, 10.0, 200001)
    assert tangential_speed(r, VBAR).max() == pytest.approx(1.0, abs=1e-3)


def test_tangential_speed_spot_value():
    # vbar * sech^2(1) * tanh(1), evaluated independently beforehand
    assert tangential_speed(1.0, VBAR) == pytest.approx(0.8309927004758384, rel=1e-12)


def test_tangential_speed_no_overflow_far_out():
    assert tangential_speed(1e6, VBAR) == 0.0
    assert np.isfinite(tangential_speed(np.array([0.0, 400.0, 1e308]), VBAR)).all()


def test_angular_velocity_origin_limit():
    assert angular_velocity(0.0, VBAR) == VBAR
    assert angular_velocity(1e-8, VBAR) == pytest.approx(VBAR, rel=1e-12)


def test_angular_velocity_decays():
    assert angular_velocity(5.0, VBAR) < 1e-3


def test_angular_velocity_times_r_is_tangential_speed():
    r = np.linspace(0.0, 8.0, 100)
    np.testing.assert_allclose(
        angular_velocity(r, VBAR) * r, tangential_speed(r, VBAR), atol=1e-15
    )


def test_doswell_velocity_origin_and_symmetry():
    assert doswell_velocity(0.0, 0.0, VBAR) == (0.0, 0.0)
    rng = np.random.RandomState(5)
    x, y = rng.uniform(-5, 5, 20), rng.uniform(-5, 5, 20)
    vx, vy = doswell_velocity(x, y, VBAR)
    mx, my = doswell_velocity(-x, -y, VBAR)
    np.testing.assert_allclose(mx, -vx)
    np.testing.assert_allclose(my, -vy)


def test_doswell_velocity_magnitude_is_tangential_speed():
    rng = np.random.RandomState(6)
    x, y = rng.uniform(-5, 5, 50), rng.uniform(-5, 5, 50)
    vx, vy = doswell_velocity(x, y, VBAR)
    np.testing.assert_allclose(np.hypot(vx, vy), tangential_speed(np.hypot(x, y), VBAR))


def test_doswell_exact_initial_front():
    g = make_grid(-5, 5, -5, 5, 40, 40)
    xx, yy = g.meshgrid()
    params = DoswellParams(VBAR, 1.0)
    np.testing.assert_allclose(doswell_exact(xx, yy, 0.0, params), np.tanh(yy))
    assert doswell_exact(0.0, 0.0, 2.7, params) == 0.0


def test_doswell_exact_constant_along_characteristics():
    params = DoswellParams(VBAR, 1.0)
    rng = np.random.RandomState(8)
    for _ in range(20):
        x, y = rng.uniform(-4, 4, 2)
        t, lag = rng.uniform(0.0, 6.0, 2)
        w = angular_velocity(np.hypot(x, y), VBAR)
        # rotate the point forward by lag; the solution value rides along
        xr = x * np.cos(w * lag) - y * np.sin(w * lag)
        yr = x * np.sin(w * lag) + y * np.cos(w * lag)
        assert doswell_exact(xr, yr, t + lag, params) == pytest.approx(
            doswell_exact(x, y, t, params), abs=1e-12
        )


def test_component_speed_bound_on_benchmark_grid():
    g = make_grid(-5, 5, -5, 5, 160, 160)
    field = doswell_field(VBAR)
    vx, vy = sample_components(field, g)
    observed = max(np.abs(vx).max(), np.abs(vy).max())
    assert observed <= field.max_component_speed
    assert observed <= 1.0 + 1e-6


def test_discrete_divergence_vanishes_at_second_order():
    field = doswell_field(VBAR)

    def max_divergence(n):
        g = make_grid(-5, 5, -5, 5, n, n)
        vx, vy = sample_components(field, g)
        div = (vx[1:-1, 2:] - vx[1:-1, :-2]) / (2 * g.dx) + (
            vy[2:, 1:-1] - vy[:-2, 1:-1]
        ) / (2 * g.dy)
        return np.abs(div).max()

    d1, d2 = max_divergence(40), max_divergence(80)
    assert d1 / d2 == pytest.approx(4.0, rel=0.25)


def test_uniform_and_negated_fields():
    field = uniform_field(0.3, -1.2)
    vx, vy = field.evaluate(np.zeros(4), np.zeros(4))
    np.testing.assert_allclose(vx, 0.3)
    np.testing.assert_allclose(vy, -1.2)
    assert field.max_component_speed == 1.2
    flipped = negated(field)
    nvx, nvy = flipped.evaluate(np.zeros(4), np.zeros(4))
    np.testing.assert_allclose(nvx, -0.3)
    np.testing.assert_allclose(nvy, 1.2)
    assert flipped.max_component_speed == 1.2


def test_doswell_params_validation():
    with pytest.raises(ValueError):
        DoswellParams(vbar=-1.0)
    with pytest.raises(ValueError):
        DoswellParams(delta=0.0)
