"""Wave solver on the line via characteristic variables.

b_plus = dtA + dxA rides left-moving rays, b_minus rides right-moving ones,
and both integrate the current density j along their ray. With dt = dx the
homogeneous part of the update is an exact index shift, so the field scheme
has zero dispersion; the source enters through a trapezoid along the ray.

The module also evaluates the closed-form representations of A, dtA and
dx dtA by direct quadrature. These are deliberately independent of the
stepping scheme: they are the cross-validation oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LightConeViolationError, UnsupportedConfigurationError
from .grid import PhaseGrid
from .interp import (eval_padded, eval_padded_derivative,
                     interp_1d_zero_extended, pad_row)
from .states import FieldState


@dataclass
class SourceHistory:
    """Current density rows j(t_k, x_i), appended as the run advances."""

    grid: PhaseGrid
    rows: list

    @staticmethod
    def empty(grid: PhaseGrid) -> "SourceHistory":
        return SourceHistory(grid=grid, rows=[])

    def append(self, j_row: np.ndarray):
        self.rows.append(np.asarray(j_row, dtype=float))

    def __len__(self):
        return len(self.rows)

    def row(self, k: int) -> np.ndarray:
        return self.rows[k]

    def sup_series(self) -> np.ndarray:
        return np.array([np.max(np.abs(r)) for r in self.rows])


class FieldHistory:
    """Dense per-step rows of dtA, queried along characteristic traces.

    Time lookups interpolate linearly between stored steps; space lookups
    use the cubic kernel on zero-padded rows (the fields vanish outside the
    grid, so the padding is the exact continuation). Rows are capped: past
    the cap the history refuses to grow rather than silently subsampling.
    """

    def __init__(self, grid: PhaseGrid, cap: int = 4096):
        self.grid = grid
        self.cap = int(cap)
        self.rows = []
        self._padded = []
        self._matrix = None

    def append(self, dt_a_row: np.ndarray):
        if len(self.rows) > self.cap:
            raise UnsupportedConfigurationError(
                f"field history exceeded its cap of {self.cap} rows")
        row = np.asarray(dt_a_row, dtype=float)
        self.rows.append(row)
        self._padded.append(pad_row(row))
        self._matrix = None

    def replace_last(self, dt_a_row: np.ndarray):
        row = np.asarray(dt_a_row, dtype=float)
        self.rows[-1] = row
        self._padded[-1] = pad_row(row)
        self._matrix = None

    def __len__(self):
        return len(self.rows)

    def padded_matrix(self) -> np.ndarray:
        """All padded rows stacked (n_rows, nx + 9); cached between edits."""
        if self._matrix is None:
            self._matrix = np.vstack(self._padded) if self._padded else \
                np.zeros((1, self.grid.nx + 9))
        return self._matrix

    def _padded_at(self, s: float) -> np.ndarray:
        pos = s / self.grid.dt
        k = int(np.floor(pos + 1e-9))
        k = max(0, min(k, len(self.rows) - 1))
        theta = pos - k
        if theta <= 1e-9 or k == len(self.rows) - 1:
            return self._padded[k]
        return (1.0 - theta) * self._padded[k] + theta * self._padded[k + 1]

    def row_at(self, s: float) -> np.ndarray:
        """Time-blended dtA row at time s (linear between stored steps)."""
        p = self._padded_at(s)
        from .interp import _PAD
        return p[_PAD:p.shape[0] - _PAD]

    def dt_a_at(self, s: float, x) -> np.ndarray:
        return eval_padded(self._padded_at(s), self.grid.x_min,
                           self.grid.dx, x)

    def dx_dt_a_at(self, s: float, x) -> np.ndarray:
        """Spatial derivative of the interpolated dtA row (for tangent flows)."""
        return eval_padded_derivative(self._padded_at(s), self.grid.x_min,
                                      self.grid.dx, x)

    def sup_series(self) -> np.ndarray:
        return np.array([np.max(np.abs(r)) for r in self.rows])


# ---------------------------------------------------------------------------
# field stepping


def step_b_fields(field: FieldState, j_old: np.ndarray, j_new: np.ndarray,
                  grid: PhaseGrid) -> FieldState:
    """Advance both characteristic fields by one unit-CFL step.

    b_plus(t+dt, x_i) = b_plus(t, x_{i+1}) + (dt/2) (j(t, x_{i+1}) + j(t+dt, x_i))
    and mirrored for b_minus. Inflow nodes are set to zero; a nonzero source
    at the boundary would make that wrong, so it is refused.
    """
    _check_source_clear_of_boundary(j_old, j_new)
    dt = grid.dt
    bp = field.b_plus
    bm = field.b_minus
    bp_new = np.empty_like(bp)
    bm_new = np.empty_like(bm)
    bp_new[:-1] = bp[1:] + 0.5 * dt * (j_old[1:] + j_new[:-1])
    bp_new[-1] = 0.0
    bm_new[1:] = bm[:-1] + 0.5 * dt * (j_old[:-1] + j_new[1:])
    bm_new[0] = 0.0
    return FieldState(b_plus=bp_new, b_minus=bm_new, time=field.time + dt)


def _check_source_clear_of_boundary(j_old, j_new):
    scale = max(np.max(np.abs(j_old)), np.max(np.abs(j_new)), 1.0)
    for row in (j_old, j_new):
        if abs(row[0]) > 1e-12 * scale or abs(row[-1]) > 1e-12 * scale:
            raise LightConeViolationError(
                "source support reached the domain boundary; "
                "enlarge the domain or shorten the run")


# ---------------------------------------------------------------------------
# closed-form representations (quadrature oracles)


def _trapezoid_on_interval(samples, origin, h, a, b):
    """Integral of the piecewise-linear interpolant of samples over [a, b],
    clipped to the grid. Exact composite trapezoid when a, b are nodes."""
    if b <= a:
        return 0.0
    n = samples.shape[0] - 1
    lo = origin
    hi = origin + n * h
    a = max(a, lo)
    b = min(b, hi)
    if b <= a:
        return 0.0
    pa = (a - origin) / h
    pb = (b - origin) / h
    ia = int(np.ceil(pa - 1e-12))
    ib = int(np.floor(pb + 1e-12))
    ia = max(0, min(ia, n))
    ib = max(0, min(ib, n))
    total = 0.0
    if ia > ib:
        # both endpoints inside one cell
        fa = _lin(samples, pa)
        fb = _lin(samples, pb)
        return 0.5 * (fa + fb) * (b - a)
    if ib > ia:
        core = samples[ia:ib + 1]
        total += h * (np.sum(core) - 0.5 * core[0] - 0.5 * core[-1])
    left = (ia - pa) * h
    if left > 1e-14 * h:
        total += 0.5 * (_lin(samples, pa) + samples[ia]) * left
    right = (pb - ib) * h
    if right > 1e-14 * h:
        total += 0.5 * (samples[ib] + _lin(samples, pb)) * right
    return total


def _lin(samples, pos):
    n = samples.shape[0] - 1
    k = int(np.floor(pos))
    k = max(0, min(k, n - 1))
    th = pos - k
    return (1.0 - th) * samples[k] + th * samples[k + 1]


def dalembert_a(init, source: SourceHistory, grid: PhaseGrid, t: float,
                x: float) -> float:
    """Potential at (t, x) by the d'Alembert formula:

        A = (A0(x+t) + A0(x-t))/2 + (1/2) int_{x-t}^{x+t} A1
            + (1/2) int_0^t int_{x-(t-s)}^{x+(t-s)} j(s, y) dy ds

    evaluated by trapezoid over the stored source rows. Independent of
    step_b_fields by construction.
    """
    n_rows = len(source)
    k = _step_index(t, grid.dt, n_rows)
    a = 0.5 * float(init.a0(x + t) + init.a0(x - t))
    a += 0.5 * float(init.a1.antiderivative(x + t)
                     - init.a1.antiderivative(x - t))
    if k > 0:
        inner = np.empty(k + 1)
        for m in range(k + 1):
            s = grid.time_at(m)
            inner[m] = _trapezoid_on_interval(
                source.row(m), grid.x_min, grid.dx, x - (t - s), x + (t - s))
        a += 0.5 * np.trapezoid(inner, dx=grid.dt)
    return a


def dt_a_representation(init, source: SourceHistory, grid: PhaseGrid,
                        t: float, x: float) -> float:
    """Time derivative of the potential by its ray representation:

        dtA = (A0'(x+t) - A0'(x-t) + A1(x+t) + A1(x-t))/2
              + (1/2) int_0^t [ j(s, x-(t-s)) + j(s, x+(t-s)) ] ds
    """
    n_rows = len(source)
    k = _step_index(t, grid.dt, n_rows)
    val = 0.5 * float(init.a0.derivative(x + t) - init.a0.derivative(x - t)
                      + init.a1(x + t) + init.a1(x - t))
    if k > 0:
        rays = np.empty(k + 1)
        for m in range(k + 1):
            s = grid.time_at(m)
            jm = source.row(m)
            rays[m] = (interp_1d_zero_extended(jm, grid.x_min, grid.dx,
                                               x - (t - s))
                       + interp_1d_zero_extended(jm, grid.x_min, grid.dx,
                                                 x + (t - s)))
        val += 0.5 * np.trapezoid(rays, dx=grid.dt)
    return val


def _step_index(t, dt, n_rows):
    k = int(round(t / dt))
    if abs(t - k * dt) > 1e-9 * dt:
        raise UnsupportedConfigurationError(
            f"time {t} is not a step multiple of dt={dt}")
    if k < 0 or k > n_rows - 1:
        raise UnsupportedConfigurationError(
            f"time {t} is outside the stored history [0, {(n_rows - 1) * dt}]")
    return k


# ---------------------------------------------------------------------------
# kernel table and the dx dtA representation


@dataclass(frozen=True)
class KernelTable:
    """K_plus/K_minus(v) = (v -/+ sqrt(1+v^2)) / (1+v^2 +/- v sqrt(1+v^2)),
    the v-derivative kernels -/+ d/dv [1/(1 +/- vhat)] of the ray term.

    The magnitude envelope is reported, not asserted: max |K| equals
    (sqrt(1+v^2)+|v|)^2 / sqrt(1+v^2), which stays below 4 sqrt(1+v^2)
    (asymptotically tight) but exceeds 2 sqrt(1+v^2) once |v| > 0.455.
    """

    v_nodes: np.ndarray
    k_plus: np.ndarray
    k_minus: np.ndarray

    @property
    def envelope_ratio_2(self) -> float:
        """max over nodes of |K| / (2 sqrt(1+v^2))."""
        b = 2.0 * np.sqrt(1.0 + self.v_nodes**2)
        return float(max(np.max(np.abs(self.k_plus) / b),
                         np.max(np.abs(self.k_minus) / b)))

    @property
    def envelope_ratio_4(self) -> float:
        b = 4.0 * np.sqrt(1.0 + self.v_nodes**2)
        return float(max(np.max(np.abs(self.k_plus) / b),
                         np.max(np.abs(self.k_minus) / b)))


def kernel_table(v_nodes) -> KernelTable:
    """Tabulate both kernels with cancellation-free arithmetic."""
    v = np.asarray(v_nodes, dtype=float)
    v0 = np.sqrt(1.0 + v * v)
    w = v0 + np.abs(v)          # well conditioned for every v
    pos = v >= 0.0
    # (v0 - v)(v0 + v) = 1 turns the small factor into a reciprocal
    k_plus = np.where(pos, -1.0 / (v0 * w * w), -w * w / v0)
    k_minus = np.where(pos, w * w / v0, 1.0 / (v0 * w * w))
    return KernelTable(v_nodes=v, k_plus=k_plus, k_minus=k_minus)


def dxdt_a_representation(f_rows, field: FieldHistory, init,
                          grid: PhaseGrid, t: float, x: float) -> dict:
    """Assemble dx dtA(t, x) from its ray representation, valid for zero
    field initial data:

        dx dtA = I_a + I_b + II + int v^2 f(t, x, v) dv

    with
        I_a = (1/2) sum_pm int int_0^t K_pm(v) dtA(t-s, x pm s)
                                         f(t-s, x pm s, v) ds dv,
        I_b = -(1/2) int [ f(0, x+t, v)/(1 + vhat)
                           + f(0, x-t, v)/(1 - vhat) ] dv,
        II  = (1/2) sum_pm rho(0, x pm t),

    where K_pm = d/dv [1/(1 pm vhat)]. The assembly follows from writing
    dx dtA as ray integrals of dx j, trading dx j for -dt rho (continuity),
    splitting off total ray derivatives, and eliminating dx f along each ray
    through the transport equation; it vanishes identically at t = 0, which
    pins every sign. Each term group is returned separately with the total.
    """
    if not (init.a0.is_zero and init.a1.is_zero):
        raise UnsupportedConfigurationError(
            "the dx dtA representation assumes zero field initial data")
    k = _step_index(t, grid.dt, min(len(f_rows), len(field)))
    v = grid.v_nodes
    vhat = v / np.sqrt(1.0 + v * v)
    table = kernel_table(v)
    dx = grid.dx
    x_idx = (x - grid.x_min) / dx
    i0 = int(round(x_idx))
    if abs(x_idx - i0) > 1e-9:
        raise UnsupportedConfigurationError(
            f"x={x} is not a grid node; the ray quadrature needs node-aligned "
            "sample points")

    # I_a: for s = m dt the ray points x +/- s are nodes, so no interpolation
    nxp = grid.nx + 1
    ray = np.zeros(k + 1)
    for m in range(k + 1):
        row_t = k - m                 # time index of t - s
        dtA_row = field.rows[row_t]
        f_row = f_rows[row_t]
        acc = 0.0
        ip = i0 + m
        if 0 <= ip < nxp:
            gp = table.k_plus * f_row[ip, :]
            acc += 0.5 * dtA_row[ip] * np.trapezoid(gp, dx=grid.dv)
        im = i0 - m
        if 0 <= im < nxp:
            gm = table.k_minus * f_row[im, :]
            acc += 0.5 * dtA_row[im] * np.trapezoid(gm, dx=grid.dv)
        ray[m] = acc
    i_a = float(np.trapezoid(ray, dx=grid.dt)) if k > 0 else 0.0

    # I_b and II: traces of the initial data on the cone boundary
    xp = x + t
    xm = x - t
    f0p = init.f0(xp, v)
    f0m = init.f0(xm, v)
    i_b = -0.5 * float(np.trapezoid(f0p / (1.0 + vhat), dx=grid.dv)
                       + np.trapezoid(f0m / (1.0 - vhat), dx=grid.dv))
    ii = 0.5 * float(np.trapezoid(f0p, dx=grid.dv)
                     + np.trapezoid(f0m, dx=grid.dv))

    # local moment at (t, x)
    f_here = f_rows[k][i0, :]
    local = float(np.trapezoid(v * v * f_here, dx=grid.dv))

    total = i_a + i_b + ii + local
    return {"I_a": i_a, "I_b": i_b, "II": ii, "local_moment": local,
            "total": total}
