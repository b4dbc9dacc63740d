import numpy as np
import pytest

from vlasovwave.grid import build_grid
from vlasovwave.presets import InitialData, make_profile_1d, make_profile_2d
from vlasovwave.transport import (evaluate_f, fill_distribution, moments,
                                  trace_backward, trace_forward, v_hat,
                                  v_hat_prime)
from vlasovwave.wave import FieldHistory

from conftest import desk_grid, desk_initial_data


def zero_field_history(grid, n_steps=None):
    h = FieldHistory(grid)
    for _ in range((n_steps if n_steps is not None else grid.n_steps) + 1):
        h.append(np.zeros(grid.nx + 1))
    return h


def constant_field_history(grid, c, n_steps=None):
    h = FieldHistory(grid)
    for _ in range((n_steps if n_steps is not None else grid.n_steps) + 1):
        h.append(np.full(grid.nx + 1, c))
    return h


def test_v_hat_values():
    assert v_hat(0.0) == 0.0
    assert v_hat(1.0) == pytest.approx(1.0 / np.sqrt(2.0), rel=1e-15)
    # at v = 1e8 the exact value sits within 1e-15 of one (and rounds to it)
    assert v_hat(1e8) == pytest.approx(1.0, abs=1e-15)
    v = np.linspace(-30, 30, 1001)
    assert np.all(np.abs(v_hat(v)) < 1.0)
    assert np.all(np.diff(v_hat(v)) > 0.0)
    fd = (v_hat(v + 1e-6) - v_hat(v - 1e-6)) / 2e-6
    assert np.max(np.abs(fd - v_hat_prime(v))) < 1e-9


def test_free_streaming_departure_exact():
    init = desk_initial_data()
    grid = desk_grid(32, t_final=2.0, init=init)
    field = zero_field_history(grid)
    t = grid.t_final
    xs, vs = trace_backward(t, 0.5, 0.75, field)
    assert vs == pytest.approx(0.75, abs=1e-14)
    assert xs == pytest.approx(0.5 - v_hat(0.75) * t, abs=1e-13)


def test_constant_field_departure():
    init = desk_initial_data()
    grid = desk_grid(32, t_final=1.0, init=init)
    c = 0.3
    field = constant_field_history(grid, c)
    t = grid.t_final
    # dV/ds = -c backward from v: V(0) = v + c t
    _, vs = trace_backward(t, 0.0, 0.2, field)
    assert vs == pytest.approx(0.2 + c * t, abs=1e-12)


def test_backward_then_forward_returns():
    init = desk_initial_data()
    grid = desk_grid(48, t_final=1.5, init=init)
    # smooth nontrivial field history
    field = FieldHistory(grid)
    x = grid.x_nodes
    for k in range(grid.n_steps + 1):
        t = grid.time_at(k)
        field.append(0.3 * np.sin(x + t) * np.exp(-0.1 * x * x))
    k = grid.n_steps
    x0 = np.array([0.4, -1.1, 2.0])
    v0 = np.array([0.6, -0.2, 1.4])
    xb, vb = trace_backward(grid.time_at(k), x0, v0, field, on_exit="allow")
    xf, vf = trace_forward(xb, vb, field, 0, k)
    assert np.max(np.abs(xf - x0)) < 1e-5
    assert np.max(np.abs(vf - v0)) < 1e-5


def test_rk4_order_on_manufactured_field():
    """Halving the step cuts the departure error by at least 2^4 against a
    dt/8 reference. The manufactured field is linear in time so the stored
    rows represent it exactly and only the integrator error is measured."""
    dep = []
    for nx in (24, 48, 192):
        grid = build_grid(-6, 6, -4, 4, nx, nx, 1.0)
        field = FieldHistory(grid)
        x = grid.x_nodes
        for k in range(grid.n_steps + 1):
            t = grid.time_at(k)
            field.append(np.sin(1.3 * x) * (0.2 + 0.3 * t))
        dep.append(trace_backward(1.0, 0.3, 0.5, field))
    ref = dep[-1]
    e1 = abs(dep[0][0] - ref[0]) + abs(dep[0][1] - ref[1])
    e2 = abs(dep[1][0] - ref[0]) + abs(dep[1][1] - ref[1])
    assert e1 / e2 >= 14.0


def test_evaluate_f_identity_and_streaming():
    init = desk_initial_data()
    grid = desk_grid(64, t_final=1.0, init=init)
    field = zero_field_history(grid)
    assert evaluate_f(0.0, 0.2, 0.5, init, field) == pytest.approx(
        float(init.f0(0.2, 0.5)), abs=1e-14)
    t = grid.t_final
    x, v = 0.3, 0.9
    want = float(init.f0(x - v_hat(v) * t, v))
    assert evaluate_f(t, x, v, init, field) == pytest.approx(want, abs=1e-12)


def test_sup_norm_preserved_zero_field():
    init = desk_initial_data()
    grid = desk_grid(64, t_final=2.0, init=init)
    field = zero_field_history(grid)
    values = fill_distribution(grid.n_steps, init, field, grid)
    assert values.max() <= init.f0_sup + 1e-12
    assert values.min() >= 0.0
    X, V = np.meshgrid(grid.x_nodes, grid.v_nodes, indexing="ij")
    exact = init.f0(X - v_hat(V) * grid.t_final, V)
    assert np.max(np.abs(values - exact)) < 1e-10


def test_departure_map_lipschitz(small_coupled_run):
    """Nearby arrival points depart within three times their separation on
    this short-horizon check."""
    result, init, grid = small_coupled_run
    field = result.state.field_history
    t = grid.time_at(5)
    base = np.array([[0.0, 0.5], [0.5, 0.2], [-0.3, 0.8]])
    h = 1e-4
    for x0, v0 in base:
        xb, vb = trace_backward(t, np.array([x0, x0 + h, x0]),
                                np.array([v0, v0, v0 + h]), field,
                                on_exit="allow")
        for i in (1, 2):
            d = np.hypot(xb[i] - xb[0], vb[i] - vb[0])
            assert d <= 3.0 * h


def test_moments_zero_and_symmetry():
    init = desk_initial_data(v_center=0.0)
    grid = desk_grid(64, t_final=1.0, init=init)
    z = np.zeros((grid.nx + 1, grid.nv + 1))
    rho, j = moments(z, grid)
    assert not rho.any() and not j.any()
    X, V = np.meshgrid(grid.x_nodes, grid.v_nodes, indexing="ij")
    f = init.f0(X, V)                       # even in v
    rho, j = moments(f, grid)
    assert np.all(rho >= 0.0)
    assert np.max(np.abs(j)) < 1e-15
    assert np.all(np.abs(j) <= rho + 1e-15)


def test_current_of_velocity_box():
    """f = 1 on v in [0, 1]: j = sqrt(2) - 1 (antiderivative of vhat is
    sqrt(1+v^2)), up to the half-cell bias of trapezoid at the jump."""
    grid = build_grid(-1, 1, -2, 2, 4, 512, 0.25)
    f = np.zeros((grid.nx + 1, grid.nv + 1))
    v = grid.v_nodes
    f[:, (v >= 0.0) & (v <= 1.0)] = 1.0
    _, j = moments(f, grid)
    want = np.sqrt(2.0) - 1.0
    assert abs(j[2] - want) < grid.dv


def test_coupled_moments_bounds(small_coupled_run):
    result, init, grid = small_coupled_run
    rho, j = moments(result.state.distribution.values, grid)
    assert np.all(rho >= -1e-15)
    assert np.all(np.abs(j) <= rho + 1e-14)
