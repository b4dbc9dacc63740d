"""Numerical check of the distributional splitting of dx^2 Y.

Y = (1/2) 1_{|x| <= t} is the forward fundamental solution of the 1d wave
operator. For a transport speed a in (-1, 1), the object m dxY with
m(t, x) = x / (a x - t) pairs against a test function phi as two closed-form
ray integrals; applying the transport operator T = dt + a dx by adjointness
and comparing with the direct right-hand side,

    <T(m dxY), phi> = -phi(0,0) / (a^2 - 1)
                      + (1/2) int_0^inf (dxphi(t, t) - dxphi(t, -t)) dt,

turns the identity into a pair of quadratures that must agree. Nothing here
is ever discretized on a grid: every pairing reduces to one-dimensional
integrals over ray segments, evaluated adaptively to fixed tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .presets import Profile1D

QUAD_TOL = 1e-12


@dataclass(frozen=True)
class TestFunction:
    """Separable smooth test function phi(t, x) = bt(t) * bx(x) with analytic
    partial derivatives and closed-form support."""

    __test__ = False            # not a pytest item despite the name

    name: str
    bt: Profile1D
    bx: Profile1D

    def value(self, t, x):
        return float(self.bt(t) * self.bx(x))

    def dt(self, t, x):
        return float(self.bt.derivative(t) * self.bx(x))

    def dx(self, t, x):
        return float(self.bt(t) * self.bx.derivative(x))

    def ray_support(self, sign: int):
        """Parameter interval where t -> phi(t, sign*t) can be nonzero,
        clipped to t >= 0."""
        t_lo, t_hi = self.bt.support()
        x_lo, x_hi = self.bx.support()
        if sign > 0:
            s_lo, s_hi = x_lo, x_hi
        else:
            s_lo, s_hi = -x_hi, -x_lo
        lo = max(0.0, t_lo, s_lo)
        hi = min(t_hi, s_hi)
        return lo, hi


TEST_FUNCTIONS = {
    "centered": TestFunction("centered",
                             Profile1D("bump", 0.0, 1.0, 1.0),
                             Profile1D("bump", 0.0, 1.0, 1.0)),
    "offset": TestFunction("offset",
                           Profile1D("bump", 1.5, 1.0, 1.0),
                           Profile1D("bump", 0.5, 1.0, 1.0)),
    "anisotropic": TestFunction("anisotropic",
                                Profile1D("bump", 0.4, 0.8, 1.0),
                                Profile1D("bump", -0.2, 1.3, 1.0)),
}


def adaptive_simpson(f, a, b, tol=QUAD_TOL, max_depth=60):
    """Adaptive Simpson quadrature with Richardson acceptance."""
    if b <= a:
        return 0.0

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = f(lm)
        frm = f(rm)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (recurse(lo, mid, flo, flm, fmid, left, tol / 2.0, depth + 1)
                + recurse(mid, hi, fmid, frm, fhi, right, tol / 2.0, depth + 1))

    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def _require_speed(a: float):
    if not -1.0 < a < 1.0:
        raise ValueError(f"transport speed a={a} must lie in (-1, 1)")


def _ray_pairing(a: float, value_at, support_of) -> float:
    """(1/2) [ 1/(a+1) int phi(t,-t) - 1/(a-1) int phi(t,t) ] dt over t >= 0."""
    lo_m, hi_m = support_of(-1)
    lo_p, hi_p = support_of(+1)
    left = adaptive_simpson(lambda t: value_at(t, -t), lo_m, hi_m)
    right = adaptive_simpson(lambda t: value_at(t, t), lo_p, hi_p)
    return 0.5 / (a + 1.0) * left - 0.5 / (a - 1.0) * right


def pair_m_dxY(a: float, phi: TestFunction) -> float:
    """<m dxY, phi>: the explicit two-ray pairing."""
    _require_speed(a)
    return _ray_pairing(a, phi.value, phi.ray_support)


def pair_lhs(a: float, phi: TestFunction) -> float:
    """<T(m dxY), phi> = -<m dxY, T phi> with T phi = dtphi + a dxphi."""
    _require_speed(a)

    def t_phi(t, x):
        return phi.dt(t, x) + a * phi.dx(t, x)

    return -_ray_pairing(a, t_phi, phi.ray_support)


def pair_rhs(a: float, phi: TestFunction) -> float:
    """-phi(0,0)/(a^2-1) + (1/2) int_0^inf (dxphi(t,t) - dxphi(t,-t)) dt."""
    _require_speed(a)
    lo_p, hi_p = phi.ray_support(+1)
    lo_m, hi_m = phi.ray_support(-1)
    plus = adaptive_simpson(lambda t: phi.dx(t, t), lo_p, hi_p)
    minus = adaptive_simpson(lambda t: phi.dx(t, -t), lo_m, hi_m)
    return -phi.value(0.0, 0.0) / (a * a - 1.0) + 0.5 * (plus - minus)


DEFAULT_SWEEP = (-0.9, -0.5, 0.0, 0.5, 0.9)


def division_sweep(a_values=DEFAULT_SWEEP, functions=None) -> dict:
    """Evaluate both sides of the identity over a grid of speeds and test
    functions; returns the report rows and the worst absolute mismatch."""
    functions = functions or TEST_FUNCTIONS
    rows = []
    for name, phi in functions.items():
        for a in a_values:
            lhs = pair_lhs(a, phi)
            rhs = pair_rhs(a, phi)
            rows.append({"a": a, "phi_preset": name, "lhs": lhs, "rhs": rhs,
                         "abs_err": abs(lhs - rhs)})
    return {"rows": rows,
            "max_abs_err": max(r["abs_err"] for r in rows) if rows else 0.0}
