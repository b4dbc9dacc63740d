"""Jitted hot loops for characteristic tracing.

The backward sweep re-traces the whole field history for every grid node at
every step, which is quadratic work that dominates a run; the scalar loop
form compiles to machine code with numba. A pure-numpy fallback with the
same arithmetic lives in transport.py, so the package still works (slowly)
without a compiler.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:                           # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap


@njit(cache=True, inline="always")
def _eval_blend(rows, ka, kb, th_t, xq, x_min, dx, ncells):
    """Cubic evaluation of the zero-padded dtA row blend at one point."""
    pos = (xq - x_min) / dx
    fid = np.floor(pos)
    th = pos - fid
    i = int(fid)
    if i < -3:
        i = -3
    if i > ncells + 2:
        i = ncells + 2
    g = i + 4
    p1 = th - 1.0
    p2 = th - 2.0
    tp1 = th + 1.0
    a = th * p2
    b = p1 * tp1
    wm1 = a * p1 / -6.0
    w0 = b * p2 * 0.5
    w1 = a * tp1 * -0.5
    w2 = th * b / 6.0
    va = (wm1 * rows[ka, g - 1] + w0 * rows[ka, g]
          + w1 * rows[ka, g + 1] + w2 * rows[ka, g + 2])
    if th_t == 0.0 or ka == kb:
        return va
    vb = (wm1 * rows[kb, g - 1] + w0 * rows[kb, g]
          + w1 * rows[kb, g + 1] + w2 * rows[kb, g + 2])
    return (1.0 - th_t) * va + th_t * vb


@njit(cache=True)
def rk4_sweep_kernel(x, v, rows, k_from, k_to, x_min, dx, dt):
    """In-place RK4 march of (x, v) between step indices along the padded
    field rows; backward when k_to < k_from."""
    n = x.shape[0]
    ncells = rows.shape[1] - 9
    step = -1 if k_to < k_from else 1
    h = step * dt
    nsteps = k_from - k_to if step < 0 else k_to - k_from
    for p in range(n):
        xp = x[p]
        vp = v[p]
        for m in range(nsteps):
            k = k_from + step * m
            k1 = k + step
            a1x = vp / np.sqrt(1.0 + vp * vp)
            a1v = -_eval_blend(rows, k, k, 0.0, xp, x_min, dx, ncells)
            v2 = vp + 0.5 * h * a1v
            a2x = v2 / np.sqrt(1.0 + v2 * v2)
            a2v = -_eval_blend(rows, k, k1, 0.5, xp + 0.5 * h * a1x,
                               x_min, dx, ncells)
            v3 = vp + 0.5 * h * a2v
            a3x = v3 / np.sqrt(1.0 + v3 * v3)
            a3v = -_eval_blend(rows, k, k1, 0.5, xp + 0.5 * h * a2x,
                               x_min, dx, ncells)
            v4 = vp + h * a3v
            a4x = v4 / np.sqrt(1.0 + v4 * v4)
            a4v = -_eval_blend(rows, k1, k1, 0.0, xp + h * a3x,
                               x_min, dx, ncells)
            xp = xp + h / 6.0 * (a1x + 2.0 * a2x + 2.0 * a3x + a4x)
            vp = vp + h / 6.0 * (a1v + 2.0 * a2v + 2.0 * a3v + a4v)
        x[p] = xp
        v[p] = vp
