"""Characteristic tracing and semi-Lagrangian evaluation of f.

Characteristics obey dX/ds = vhat(V), dV/ds = -dtA(s, X). The default
("analytic") mode traces every grid node all the way back to s = 0 and
evaluates the initial profile there, so no interpolation of f ever happens
and the sup norm is preserved exactly up to the integrator tolerance. A
"depth_one" mode traces one step and interpolates the previous stored grid,
trading accuracy for per-step cost on long horizons.
"""

from __future__ import annotations

import numpy as np

from ._kernels import HAVE_NUMBA, rk4_sweep_kernel
from .errors import LightConeViolationError
from .grid import PhaseGrid
from .interp import interp_2d
from .wave import FieldHistory


def v_hat(v):
    """Relativistic velocity v / sqrt(1 + v^2); strictly inside (-1, 1)."""
    v = np.asarray(v, dtype=float)
    out = v / np.sqrt(1.0 + v * v)
    return float(out) if out.ndim == 0 else out


def v_hat_prime(v):
    """d vhat / dv = (1 + v^2)^{-3/2}."""
    v = np.asarray(v, dtype=float)
    out = (1.0 + v * v) ** -1.5
    return float(out) if out.ndim == 0 else out


def _rk4_sweep(x, v, field: FieldHistory, k_from: int, k_to: int):
    """March (x, v) from step k_from to step k_to (backward when k_to is
    smaller). Times are derived from step indices so no float accumulation
    drifts across resolutions. Dispatches to the jitted kernel when numba
    is importable; the fallback below carries the identical arithmetic."""
    x = np.array(x, dtype=float, copy=True).ravel()
    v = np.array(v, dtype=float, copy=True).ravel()
    if HAVE_NUMBA and k_from != k_to:
        rows = field.padded_matrix()
        rk4_sweep_kernel(x, v, rows, k_from, k_to, field.grid.x_min,
                         field.grid.dx, field.grid.dt)
        return x, v
    dt = field.grid.dt
    n = abs(k_from - k_to)
    direction = -1 if k_to < k_from else 1
    h = direction * dt
    for m in range(n):
        k = k_from + direction * m
        s0 = k * dt
        s1 = (k + 0.5 * direction) * dt
        s2 = (k + direction) * dt
        a1x = v / np.sqrt(1.0 + v * v)
        a1v = -field.dt_a_at(s0, x)
        v2 = v + 0.5 * h * a1v
        a2x = v2 / np.sqrt(1.0 + v2 * v2)
        a2v = -field.dt_a_at(s1, x + 0.5 * h * a1x)
        v3 = v + 0.5 * h * a2v
        a3x = v3 / np.sqrt(1.0 + v3 * v3)
        a3v = -field.dt_a_at(s1, x + 0.5 * h * a2x)
        v4 = v + h * a3v
        a4x = v4 / np.sqrt(1.0 + v4 * v4)
        a4v = -field.dt_a_at(s2, x + h * a3x)
        x = x + h / 6.0 * (a1x + 2.0 * a2x + 2.0 * a3x + a4x)
        v = v + h / 6.0 * (a1v + 2.0 * a2v + 2.0 * a3v + a4v)
    return x, v


def trace_backward(t: float, x, v, field: FieldHistory, on_exit="error"):
    """Departure point (x_start, v_start) of the characteristic arriving at
    (t, x, v), integrated backward to s = 0 with classical RK4 at the grid
    step. on_exit controls what happens when the trace leaves the domain:
    "error" raises (the public contract: legitimate traces stay inside),
    "allow" lets it continue through the zero-extended field, which is exact
    for points whose departure lies outside every support.
    """
    grid = field.grid
    k = int(round(t / grid.dt))
    if abs(t - k * grid.dt) > 1e-9 * grid.dt:
        raise ValueError(f"t={t} is not a multiple of dt={grid.dt}")
    scalar = np.ndim(x) == 0 and np.ndim(v) == 0
    xb, vb = np.broadcast_arrays(np.asarray(x, dtype=float),
                                 np.asarray(v, dtype=float))
    shape = xb.shape
    xs, vs = _rk4_sweep(xb, vb, field, k, 0)
    if on_exit == "error":
        bad = (xs < grid.x_min) | (xs > grid.x_max)
        if np.any(bad):
            raise LightConeViolationError(
                "characteristic trace left the spatial domain; the light-cone "
                "margin was not honored by this configuration")
    xs = xs.reshape(shape)
    vs = vs.reshape(shape)
    if scalar:
        return float(xs), float(vs)
    return xs, vs


def trace_forward(x, v, field: FieldHistory, k_from: int, k_to: int):
    """Forward march between step indices (used by the flow-volume tracker
    and the invertibility checks)."""
    return _rk4_sweep(np.asarray(x, dtype=float), np.asarray(v, dtype=float),
                      field, k_from, k_to)


def evaluate_f(t: float, x, v, init, field: FieldHistory):
    """f(t, x, v) = f0(departure point): exact composition with the analytic
    initial profile, no grid interpolation of f."""
    xs, vs = trace_backward(t, x, v, field, on_exit="allow")
    return init.f0(xs, vs)


def support_envelope(init, field: FieldHistory, k: int, grid: PhaseGrid):
    """Guaranteed bounding box of supp f(t_k): initial box grown by speed 1
    in x and by the accumulated field bound in v, padded by two cells.
    Outside it, f vanishes identically (finite propagation), so the grid
    fill can skip those nodes and write exact zeros."""
    t = grid.time_at(k)
    x_lo, x_hi = init.f0.support_x()
    v_lo, v_hi = init.f0.support_v()
    sup = field.sup_series()
    if len(sup) > 1:
        m = min(k + 1, len(sup))
        # upper-sum in time so the envelope is rigorous
        growth = grid.dt * float(np.sum(np.maximum(sup[:m - 1], sup[1:m])))
    else:
        growth = 0.0
    pad_x = 2.0 * grid.dx
    pad_v = 2.0 * grid.dv + 1e-9
    return (x_lo - t - pad_x, x_hi + t + pad_x,
            v_lo - growth - pad_v, v_hi + growth + pad_v)


def fill_distribution(k: int, init, field: FieldHistory, grid: PhaseGrid,
                      mode: str = "analytic", prev_values=None,
                      clamp: bool = False) -> np.ndarray:
    """Fill f(t_k) on the whole grid.

    analytic: backward trace to s = 0, evaluate f0 (default).
    depth_one: one backward step, cubic interpolation of prev_values.
    """
    xs = grid.x_nodes
    vs = grid.v_nodes
    values = np.zeros((grid.nx + 1, grid.nv + 1))
    if init.f0.is_zero or k < 0:
        return values
    if k == 0:
        X, V = np.meshgrid(xs, vs, indexing="ij")
        return init.f0(X, V)

    box = support_envelope(init, field, k, grid)
    isel = np.nonzero((xs >= box[0]) & (xs <= box[1]))[0]
    jsel = np.nonzero((vs >= box[2]) & (vs <= box[3]))[0]
    if isel.size == 0 or jsel.size == 0:
        return values
    X, V = np.meshgrid(xs[isel], vs[jsel], indexing="ij")
    shape = X.shape
    if mode == "analytic":
        xd, vd = _rk4_sweep(X.ravel(), V.ravel(), field, k, 0)
        block = init.f0(xd, vd).reshape(shape)
    elif mode == "depth_one":
        if prev_values is None:
            raise ValueError("depth_one mode needs the previous grid")
        xd, vd = _rk4_sweep(X.ravel(), V.ravel(), field, k, k - 1)
        xd = np.clip(xd, grid.x_min, grid.x_max)
        vd = np.clip(vd, grid.v_min, grid.v_max)
        block = interp_2d(prev_values, grid.x_min, grid.dx,
                          grid.v_min, grid.dv, xd, vd).reshape(shape)
    else:
        raise ValueError(f"unknown transport mode {mode!r}")
    if clamp:
        np.clip(block, 0.0, init.f0_sup, out=block)
    values[np.ix_(isel, jsel)] = block
    return values


# ---------------------------------------------------------------------------
# velocity moments


def moment_weights(grid: PhaseGrid):
    """Trapezoid weights over v-nodes, plain and vhat-weighted."""
    w = np.full(grid.nv + 1, grid.dv)
    w[0] *= 0.5
    w[-1] *= 0.5
    vh = v_hat(grid.v_nodes)
    return w, w * vh


def moments(values: np.ndarray, grid: PhaseGrid):
    """Charge density rho = int f dv and current j = int vhat f dv by
    trapezoid over the v-nodes. |j| <= rho pointwise since |vhat| < 1."""
    w, wv = moment_weights(grid)
    rho = values @ w
    j = values @ wv
    return rho, j
