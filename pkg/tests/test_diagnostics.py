import numpy as np
import pytest

from vlasovwave.coupling import RunOptions, run
from vlasovwave.diagnostics import (GronwallConstants,
                                    derivative_transport_audit, energy,
                                    gronwall_audit, momentum_support,
                                    prop32_bound_check)
from vlasovwave.grid import build_grid
from vlasovwave.presets import InitialData, make_profile_1d, make_profile_2d
from vlasovwave.states import FieldState
from vlasovwave.transport import v_hat

from conftest import desk_grid, desk_initial_data


def test_zero_state_energy():
    grid = build_grid(-4, 4, -2, 2, 32, 16, 1.0)
    z = np.zeros((grid.nx + 1, grid.nv + 1))
    field = FieldState(b_plus=np.zeros(grid.nx + 1),
                       b_minus=np.zeros(grid.nx + 1), time=0.0)
    kin, fld, tot = energy(z, field, grid)
    assert kin == 0.0 and fld == 0.0 and tot == 0.0


def test_wave_data_energy_value_and_exact_conservation():
    """f0 = 0, A1 = bump: field energy is (1/2) integral of A1^2
    = 128/315 (from int (1-z^2)^4 over [-1,1] = 256/315), and the free-wave
    shift conserves the trapezoid energy bit-exactly until the cone leaves
    the domain."""
    init = InitialData(f0=make_profile_2d("zero"),
                       a0=make_profile_1d("zero"),
                       a1=make_profile_1d("bump", 0.0, 1.0, 1.0))
    grid = build_grid(-8, 8, -4, 4, 512, 16, 2.0,
                      support_x=init.field_data_support_x())
    result = run(grid, init)
    e0 = result.records[0].field
    assert e0 == pytest.approx(128.0 / 315.0, abs=2e-5)
    drifts = [abs(r.field - e0) for r in result.records]
    assert max(drifts) < 1e-15


def test_momentum_support_by_construction():
    init = desk_initial_data()
    grid = desk_grid(128, t_final=1.0, init=init)
    X, V = np.meshgrid(grid.x_nodes, grid.v_nodes, indexing="ij")
    f = init.f0(X, V)
    p = momentum_support(f, grid, init.f0_sup)
    assert abs(p - 1.5) <= grid.dv
    assert momentum_support(np.zeros_like(f), grid, init.f0_sup) == 0.0


def test_momentum_support_constant_under_free_streaming():
    init = desk_initial_data()
    grid = desk_grid(64, t_final=2.0, init=init)
    result = run(grid, init, RunOptions(coupling_enabled=False))
    ps = [r.p_of_t for r in result.records]
    assert max(ps) - min(ps) <= grid.dv + 1e-12


def test_gronwall_margins_on_coupled_run(small_coupled_run):
    result, init, grid = small_coupled_run
    report = gronwall_audit(result.records, result.constants, grid)
    assert report["passed_i"] and report["passed_ii"] and report["passed_iii"]
    assert report["min_margin_i"] >= -1e-6
    assert report["min_margin_ii"] >= -1e-6
    assert report["min_margin_iii"] >= -1e-6
    assert report["envelope_holds"]
    # margins got written back into the records
    assert np.isfinite(result.records[-1].margin_i)


def test_gronwall_zero_run_margins_are_data_terms():
    init = InitialData(f0=make_profile_2d("zero"),
                       a0=make_profile_1d("zero"),
                       a1=make_profile_1d("zero"))
    grid = build_grid(-4, 4, -2, 2, 16, 8, 0.5)
    result = run(grid, init)
    report = gronwall_audit(result.records, result.constants, grid)
    assert report["min_margin_i"] == 0.0        # D = 0 and everything zero
    assert report["min_margin_iii"] == pytest.approx(grid.dv)
    assert report["passed_i"] and report["passed_ii"] and report["passed_iii"]


def test_prop32_style_bound(small_coupled_run):
    result, init, grid = small_coupled_run
    report = prop32_bound_check(result.records, result.constants)
    assert report["holds"]
    assert report["measured"] > 0.0
    assert report["bound"] > report["measured"]


def test_flow_mass_beats_sampled_mass(small_coupled_run):
    result, init, grid = small_coupled_run
    r0 = result.records[0]
    flow = max(abs(r.mass_flow - r0.mass_flow) for r in result.records)
    sampled = max(abs(r.mass - r0.mass) for r in result.records)
    assert flow < sampled / 50.0


def test_derivative_stencils_match_closed_form_free_streaming():
    """Zero field: f(t,x,v) = f0(x - vhat t, v) in closed form, so the
    centered stencils the audit relies on can be checked directly. Away
    from the support edge they converge at second order."""
    init = desk_initial_data()
    errs = {}
    for nx in (48, 96):
        grid = desk_grid(nx, t_final=1.0, init=init)
        result = run(grid, init, RunOptions(coupling_enabled=False))
        k = grid.n_steps // 2
        t = grid.time_at(k)
        f = result.state.f_rows[k]
        dx, dv = grid.dx, grid.dv
        fx = (f[2:, 1:-1] - f[:-2, 1:-1]) / (2 * dx)
        fv = (f[1:-1, 2:] - f[1:-1, :-2]) / (2 * dv)
        X, V = np.meshgrid(grid.x_nodes[1:-1], grid.v_nodes[1:-1],
                           indexing="ij")
        vh = v_hat(V)
        vhp = (1.0 + V * V) ** -1.5
        xi = X - vh * t
        fx_exact = init.f0.dx(xi, V)
        fv_exact = -vhp * t * init.f0.dx(xi, V) + init.f0.dv(xi, V)
        interior = (init.f0(xi, V) > 1e-3) \
            & (init.f0(xi - 0.45, V) > 1e-3) & (init.f0(xi + 0.45, V) > 1e-3) \
            & (init.f0(xi, V - 0.45) > 1e-3) & (init.f0(xi, V + 0.45) > 1e-3)
        errs[nx] = (np.max(np.abs((fx - fx_exact)[interior])),
                    np.max(np.abs((fv - fv_exact)[interior])))
    assert errs[48][0] / errs[96][0] > 3.0
    assert errs[48][1] / errs[96][1] > 3.0


def test_derivative_transport_residual_shrinks():
    """The audit's assembled system residuals shrink under refinement on the
    support interior (the fv component carries shear-grown mixed derivatives
    and is the slowest to enter its asymptotic range)."""
    init = desk_initial_data()
    res_int = {}
    for nx in (48, 96):
        grid = desk_grid(nx, t_final=1.5, init=init)
        result = run(grid, init, RunOptions(coupling_enabled=False))
        report = derivative_transport_audit(result.state.f_rows,
                                            result.state.field_history, grid)
        res_int[nx] = report["residual_interior"]
        assert report["max_sup_fx"] < 10.0
        assert report["max_sup_fv"] < 10.0
    assert res_int[48]["transport"] / res_int[96]["transport"] > 3.0
    assert res_int[48]["fx"] / res_int[96]["fx"] > 3.0
    assert res_int[48]["fv"] / res_int[96]["fv"] > 1.7


def test_derivative_audit_reports_bounded_sups(small_coupled_run):
    result, init, grid = small_coupled_run
    report = derivative_transport_audit(result.state.f_rows,
                                        result.state.field_history, grid)
    assert np.isfinite(report["max_sup_fx"])
    assert np.isfinite(report["max_sup_fv"])
    assert report["residual_interior"]["transport"] <= \
        report["residual_max"]["transport"] + 1e-15


def test_constants_from_initial_data():
    init = InitialData(f0=make_profile_2d("bump2d", 0, 1, 0.5, 1, 1),
                       a0=make_profile_1d("bump", 0, 2, 0.5),
                       a1=make_profile_1d("bump", 0, 1, 0.25))
    c = GronwallConstants.from_initial_data(init)
    assert c.p0 == 1.5
    assert c.f0_sup == 1.0
    want = 0.5 * 8 / (3 * np.sqrt(3)) / 2 + 0.25
    assert c.data_term == pytest.approx(want, rel=1e-12)
    assert c.envelope_rate == pytest.approx(2 * 1.0 * 2.5)
