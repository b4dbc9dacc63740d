"""Conserved and bounded quantities, and the inequality audits.

Everything here is a read-only reduction over run state. The audits
evaluate the bound chain

    (i)   sup_x |dtA(t)|  <=  D + int_0^t sup_x |j|،
    (ii)  sup_x |j(t)|    <=  2 ||f0||_inf P(t),
    (iii) P(t)            <=  P(0) + int_0^t sup_x |dtA| + dv,

with D = sup|A0'| + sup|A1|, all integrals by trapezoid over the recorded
series, plus the closed-form exponential envelope that follows from them.
Margins are reported (bound minus measured); a healthy run keeps every
margin above a small negative quadrature slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .grid import PhaseGrid
from .states import FieldState, refined_sup
from .transport import moment_weights, v_hat, v_hat_prime
from .wave import FieldHistory


@dataclass
class DiagnosticsRecord:
    t: float
    mass: float
    mass_flow: float
    kinetic: float
    field: float
    total: float
    total_flow: float
    p_of_t: float
    sup_j: float
    sup_dtA: float
    sup_dxdtA: float
    grid_max: float
    sup_refined: float
    undershoot: float
    margin_i: float = np.nan
    margin_ii: float = np.nan
    margin_iii: float = np.nan


@dataclass(frozen=True)
class GronwallConstants:
    """Data-dependent constants of the bound chain, computed analytically
    from the presets."""

    data_term: float        # sup |A0'| + sup |A1|
    f0_sup: float
    p0: float               # momentum support radius at t = 0

    @staticmethod
    def from_initial_data(init) -> "GronwallConstants":
        return GronwallConstants(data_term=init.data_term,
                                 f0_sup=init.f0_sup,
                                 p0=init.support_radius_v)

    @property
    def envelope_rate(self) -> float:
        return 2.0 * self.f0_sup * max(1.0, self.p0 + 1.0)


def grid_quadrature_weights(grid: PhaseGrid):
    wx = np.full(grid.nx + 1, grid.dx)
    wx[0] *= 0.5
    wx[-1] *= 0.5
    wv = np.full(grid.nv + 1, grid.dv)
    wv[0] *= 0.5
    wv[-1] *= 0.5
    return wx, wv


def mass(values, grid: PhaseGrid) -> float:
    wx, wv = grid_quadrature_weights(grid)
    return float(wx @ (values @ wv))


def energy(values, field_state: FieldState, grid: PhaseGrid):
    """(kinetic, field, total) with kinetic = iint sqrt(1+v^2) f and
    field = (1/2) int (dtA^2 + dxA^2), all by trapezoid."""
    wx, wv = grid_quadrature_weights(grid)
    v0 = np.sqrt(1.0 + grid.v_nodes**2)
    kinetic = float(wx @ (values @ (wv * v0)))
    dta = field_state.dt_a
    dxa = field_state.dx_a
    fld = 0.5 * float(wx @ (dta * dta + dxa * dxa))
    return kinetic, fld, kinetic + fld


def momentum_support(values, grid: PhaseGrid, f0_sup: float,
                     eps_supp: float = 1e-12) -> float:
    """P(t): largest |v-node| whose x-row holds a sample above the support
    threshold; 0 when the state is empty."""
    thresh = eps_supp * f0_sup if f0_sup > 0.0 else eps_supp
    rows = (values > thresh).any(axis=0)
    idx = np.nonzero(rows)[0]
    if idx.size == 0:
        return 0.0
    vn = grid.v_nodes
    return float(max(abs(vn[idx[0]]), abs(vn[idx[-1]])))


def sup_dx_dt_a(field_state: FieldState, grid: PhaseGrid) -> float:
    """sup |dx dtA| estimated by centered differences of the dtA row."""
    dta = field_state.dt_a
    interior = np.abs(dta[2:] - dta[:-2]) / (2.0 * grid.dx)
    edges = np.abs(np.diff(dta[:2])) / grid.dx, np.abs(np.diff(dta[-2:])) / grid.dx
    return float(max(interior.max(initial=0.0), edges[0][0], edges[1][0]))


# ---------------------------------------------------------------------------
# flow-volume mass tracker


class FlowVolumeTracker:
    """Mass of the numerical solution measured in departure coordinates.

    Integrating f(t) on the arrival grid rides on how the moving support
    edge samples the mesh, which fluctuates at fixed order h^3 even for the
    exact solution. This tracker instead carries the initial support nodes
    forward along the numerical characteristics together with the tangent
    flow, and evaluates iint f0 * det(J) over the fixed initial grid. The
    quadrature bias is then frozen at its t = 0 value and cancels exactly in
    mass differences, leaving the genuine volume (non)conservation of the
    traced flow.
    """

    def __init__(self, init, grid: PhaseGrid):
        self.grid = grid
        xs = grid.x_nodes
        vs = grid.v_nodes
        x_lo, x_hi = init.f0.support_x()
        v_lo, v_hi = init.f0.support_v()
        isel = np.nonzero((xs > x_lo - grid.dx) & (xs < x_hi + grid.dx))[0]
        jsel = np.nonzero((vs > v_lo - grid.dv) & (vs < v_hi + grid.dv))[0]
        if isel.size == 0 or jsel.size == 0 or init.f0.is_zero:
            self.empty = True
            self.mass0 = 0.0
            return
        self.empty = False
        X, V = np.meshgrid(xs[isel], vs[jsel], indexing="ij")
        self.f0_vals = init.f0(X, V).ravel()
        self.cell = grid.dx * grid.dv
        self.x = X.ravel().copy()
        self.v = V.ravel().copy()
        n = self.x.size
        self.jxx = np.ones(n)
        self.jxv = np.zeros(n)
        self.jvx = np.zeros(n)
        self.jvv = np.ones(n)
        self.mass0 = self.mass()

    def mass(self) -> float:
        if self.empty:
            return 0.0
        det = self.jxx * self.jvv - self.jxv * self.jvx
        return float(np.sum(self.f0_vals * det) * self.cell)

    def kinetic(self) -> float:
        """iint sqrt(1+v^2) f in departure coordinates: the energy weight is
        evaluated on the carried momenta, the quadrature stays on the fixed
        initial grid. Shares the frozen-bias property of mass()."""
        if self.empty:
            return 0.0
        det = self.jxx * self.jvv - self.jxv * self.jvx
        w = np.sqrt(1.0 + self.v * self.v)
        return float(np.sum(self.f0_vals * w * det) * self.cell)

    def step(self, field: FieldHistory, k_from: int):
        """One forward RK4 step of positions and tangents over
        [k_from, k_from + 1] using the corrected field rows."""
        if self.empty:
            return
        dt = self.grid.dt
        h = dt
        x, v = self.x, self.v
        jxx, jxv, jvx, jvv = self.jxx, self.jxv, self.jvx, self.jvv
        s0 = k_from * dt
        s1 = (k_from + 0.5) * dt
        s2 = (k_from + 1) * dt

        def deriv(s, x_, v_, jxx_, jxv_, jvx_, jvv_):
            dta = field.dt_a_at(s, x_)
            ddta = field.dx_dt_a_at(s, x_)
            vp = v_hat_prime(v_)
            return (v_hat(v_), -dta,
                    vp * jvx_, vp * jvv_,
                    -ddta * jxx_, -ddta * jxv_)

        k1 = deriv(s0, x, v, jxx, jxv, jvx, jvv)
        k2 = deriv(s1, x + 0.5 * h * k1[0], v + 0.5 * h * k1[1],
                   jxx + 0.5 * h * k1[2], jxv + 0.5 * h * k1[3],
                   jvx + 0.5 * h * k1[4], jvv + 0.5 * h * k1[5])
        k3 = deriv(s1, x + 0.5 * h * k2[0], v + 0.5 * h * k2[1],
                   jxx + 0.5 * h * k2[2], jxv + 0.5 * h * k2[3],
                   jvx + 0.5 * h * k2[4], jvv + 0.5 * h * k2[5])
        k4 = deriv(s2, x + h * k3[0], v + h * k3[1],
                   jxx + h * k3[2], jxv + h * k3[3],
                   jvx + h * k3[4], jvv + h * k3[5])
        c = h / 6.0
        self.x = x + c * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        self.v = v + c * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        self.jxx = jxx + c * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        self.jxv = jxv + c * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
        self.jvx = jvx + c * (k1[4] + 2 * k2[4] + 2 * k3[4] + k4[4])
        self.jvv = jvv + c * (k1[5] + 2 * k2[5] + 2 * k3[5] + k4[5])


# ---------------------------------------------------------------------------
# bound-chain audit


def gronwall_audit(records, constants: GronwallConstants, grid: PhaseGrid,
                   quadrature_slack: float = 1e-6) -> dict:
    """Evaluate inequalities (i)-(iii) at every recorded step and fill the
    margin fields of the records in place. Reporting only; nothing raises."""
    t = np.array([r.t for r in records])
    sup_j = np.array([r.sup_j for r in records])
    sup_dta = np.array([r.sup_dtA for r in records])
    p = np.array([r.p_of_t for r in records])
    d = constants.data_term

    int_j = _cumtrapz(sup_j, t)
    int_dta = _cumtrapz(sup_dta, t)
    margin_i = d + int_j - sup_dta
    margin_ii = 2.0 * constants.f0_sup * p - sup_j
    margin_iii = constants.p0 + int_dta + grid.dv - p

    c = constants.envelope_rate
    envelope = (d + c) * np.exp(c * t)
    env_ok = bool(np.all(sup_dta <= envelope))

    for r, mi, mii, miii in zip(records, margin_i, margin_ii, margin_iii):
        r.margin_i = float(mi)
        r.margin_ii = float(mii)
        r.margin_iii = float(miii)

    def _ok(m):
        return bool(np.all(m >= -quadrature_slack))

    return {
        "quadrature_slack": quadrature_slack,
        "data_term": d,
        "min_margin_i": float(margin_i.min()),
        "min_margin_ii": float(margin_ii.min()),
        "min_margin_iii": float(margin_iii.min()),
        "passed_i": _ok(margin_i),
        "passed_ii": _ok(margin_ii),
        "passed_iii": _ok(margin_iii),
        "envelope_rate": c,
        "envelope_holds": env_ok,
        "max_sup_dtA": float(sup_dta.max(initial=0.0)),
    }


def _cumtrapz(y, t):
    out = np.zeros_like(y)
    if y.shape[0] > 1:
        steps = 0.5 * np.diff(t) * (y[1:] + y[:-1])
        np.cumsum(steps, out=out[1:])
    return out


def prop32_bound_check(records, constants: GronwallConstants) -> dict:
    """Assembled a-priori bound on sup |dx dtA| evaluated from the run's own
    measured quantities: data + C P (T (1+P) sup|dtA| + 2 + P^2) ||f0||
    with the explicit kernel constant C = 2."""
    if not records:
        return {"holds": True, "bound": 0.0, "measured": 0.0}
    t_end = records[-1].t
    p_max = max(r.p_of_t for r in records)
    sup_dta = max(r.sup_dtA for r in records)
    measured = max(r.sup_dxdtA for r in records)
    c_kernel = 2.0
    bound = (constants.data_term
             + c_kernel * p_max * constants.f0_sup
             * (t_end * (1.0 + p_max) * sup_dta + 2.0 + p_max**2))
    return {"holds": bool(measured <= bound), "bound": float(bound),
            "measured": float(measured), "kernel_constant": c_kernel}


# ---------------------------------------------------------------------------
# derivative transport audit


def derivative_transport_audit(f_rows, field: FieldHistory, grid: PhaseGrid,
                               sample_steps=None,
                               edge_margin: float = 0.4) -> dict:
    """Residuals of the transported-derivative system along the run:

        (dt + vhat dx - dtA dv) fx = (dx dtA) fv
        (dt + vhat dx - dtA dv) fv = -(1+v^2)^{-3/2} fx

    with every derivative replaced by centered second-order stencils on the
    stored history. Residuals are reported twice: over the full support and
    masked to its interior, a fixed physical margin edge_margin away from
    the support boundary (the profiles are smooth inside their support, so
    only the interior residual is expected to shrink at second order; the
    margin is in phase-space units so refinements measure the same region).
    """
    n = len(f_rows)
    if sample_steps is None:
        sample_steps = [k for k in (n // 4, n // 2, (3 * n) // 4) if 0 < k < n - 1]
    dt = grid.dt
    dx = grid.dx
    dv = grid.dv
    vh = v_hat(grid.v_nodes)[None, :]
    vhp = v_hat_prime(grid.v_nodes)[None, :]

    def ddx(a):
        out = np.zeros_like(a)
        out[1:-1, :] = (a[2:, :] - a[:-2, :]) / (2.0 * dx)
        return out

    def ddv(a):
        out = np.zeros_like(a)
        out[:, 1:-1] = (a[:, 2:] - a[:, :-2]) / (2.0 * dv)
        return out

    max_all = {"transport": 0.0, "fx": 0.0, "fv": 0.0}
    max_interior = {"transport": 0.0, "fx": 0.0, "fv": 0.0}
    samples = []
    for k in sample_steps:
        fm, f0, fp = f_rows[k - 1], f_rows[k], f_rows[k + 1]
        ft = (fp - fm) / (2.0 * dt)
        fx = ddx(f0)
        fv = ddv(f0)
        fxt = (ddx(fp) - ddx(fm)) / (2.0 * dt)
        fvt = (ddv(fp) - ddv(fm)) / (2.0 * dt)
        dta = field.rows[k][:, None]
        ddta = np.zeros_like(field.rows[k])
        ddta[1:-1] = (field.rows[k][2:] - field.rows[k][:-2]) / (2.0 * dx)
        ddta = ddta[:, None]

        r0 = ft + vh * fx - dta * fv
        r1 = fxt + vh * ddx(fx) - dta * ddv(fx) - ddta * fv
        r2 = fvt + vh * ddx(fv) - dta * ddv(fv) + vhp * fx

        support = f0 > 1e-3 * max(f0.max(), 1e-300)
        interior = _erode(support, int(np.ceil(edge_margin / dx)),
                          int(np.ceil(edge_margin / dv)))
        for name, r in (("transport", r0), ("fx", r1), ("fv", r2)):
            m_all = float(np.abs(r[support]).max()) if support.any() else 0.0
            m_int = float(np.abs(r[interior]).max()) if interior.any() else 0.0
            max_all[name] = max(max_all[name], m_all)
            max_interior[name] = max(max_interior[name], m_int)
        samples.append({"step": k, "t": grid.time_at(k),
                        "sup_fx": float(np.abs(fx).max()),
                        "sup_fv": float(np.abs(fv).max())})

    sup_fx_series = [float(np.abs(ddx(f)).max()) for f in f_rows]
    sup_fv_series = [float(np.abs(ddv(f)).max()) for f in f_rows]
    return {
        "sampled_steps": [s["step"] for s in samples],
        "samples": samples,
        "residual_max": max_all,
        "residual_interior": max_interior,
        "max_sup_fx": max(sup_fx_series) if sup_fx_series else 0.0,
        "max_sup_fv": max(sup_fv_series) if sup_fv_series else 0.0,
    }


def _erode(mask, iter_x, iter_v):
    m = mask.copy()
    for _ in range(iter_x):
        inner = m[1:-1, :] & m[:-2, :] & m[2:, :]
        m = np.zeros_like(m)
        m[1:-1, :] = inner
    for _ in range(iter_v):
        inner = m[:, 1:-1] & m[:, :-2] & m[:, 2:]
        m = np.zeros_like(m)
        m[:, 1:-1] = inner
    return m


def record_step(values, field_state: FieldState, grid: PhaseGrid, init,
                tracker: FlowVolumeTracker, eps_supp: float) -> DiagnosticsRecord:
    """Assemble the per-step scalar diagnostics."""
    kin, fld, tot = energy(values, field_state, grid)
    _, wv = moment_weights(grid)
    j_row = values @ wv
    return DiagnosticsRecord(
        t=field_state.time,
        mass=mass(values, grid),
        mass_flow=tracker.mass(),
        kinetic=kin,
        field=fld,
        total=tot,
        total_flow=tracker.kinetic() + fld,
        p_of_t=momentum_support(values, grid, init.f0_sup, eps_supp),
        sup_j=float(np.max(np.abs(j_row))),
        sup_dtA=float(np.max(np.abs(field_state.dt_a))),
        sup_dxdtA=sup_dx_dt_a(field_state, grid),
        grid_max=float(values.max()),
        sup_refined=refined_sup(values, grid),
        undershoot=float(min(values.min(), 0.0)),
    )
