"""Cubic Lagrange interpolation on uniform grids.

Four-point stencils in the interior (exact on cubics), two-point linear
fallback in the first and last cell. Queries outside the grid raise: the
light-cone margin guarantees legitimate evaluations never leave the domain,
so an out-of-range query is a bug upstream, never something to extrapolate.
"""

from __future__ import annotations

import numpy as np

from .errors import OutOfDomainError

# relative slack for queries sitting on the boundary up to roundoff
_EDGE_RTOL = 1e-12


def _locate(origin, h, n_cells, xq, what):
    pos = (np.asarray(xq, dtype=float) - origin) / h
    span = float(n_cells)
    bad = (pos < -_EDGE_RTOL * span) | (pos > span * (1.0 + _EDGE_RTOL))
    if np.any(bad):
        x_bad = np.asarray(xq, dtype=float)[bad] if np.ndim(xq) else xq
        raise OutOfDomainError(
            f"{what} query outside grid: {np.atleast_1d(x_bad)[:3]} "
            f"not in [{origin}, {origin + h * n_cells}]")
    pos = np.clip(pos, 0.0, span)
    base = np.minimum(np.floor(pos).astype(np.int64), n_cells - 1)
    theta = pos - base
    return base, theta


def cubic_weights(theta):
    """Lagrange weights for nodes at offsets (-1, 0, 1, 2) from the cell base,
    evaluated at fractional position theta in [0, 1]."""
    th = np.asarray(theta, dtype=float)
    wm1 = -th * (th - 1.0) * (th - 2.0) / 6.0
    w0 = (th * th - 1.0) * (th - 2.0) / 2.0
    w1 = -th * (th + 1.0) * (th - 2.0) / 2.0
    w2 = th * (th * th - 1.0) / 6.0
    return wm1, w0, w1, w2


def interp_1d(samples, origin, h, xq, what="interpolation"):
    """Interpolate uniformly spaced samples at points xq.

    Exact at nodes and for cubic polynomials; linear in the two edge cells.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[0] - 1
    base, theta = _locate(origin, h, n, xq, what)
    scalar = np.ndim(base) == 0
    base = np.atleast_1d(base)
    theta = np.atleast_1d(theta)
    out = np.empty(base.shape, dtype=float)

    interior = (base >= 1) & (base <= n - 2)
    if np.any(interior):
        b = base[interior]
        wm1, w0, w1, w2 = cubic_weights(theta[interior])
        out[interior] = (wm1 * samples[b - 1] + w0 * samples[b]
                         + w1 * samples[b + 1] + w2 * samples[b + 2])
    edge = ~interior
    if np.any(edge):
        b = base[edge]
        t = theta[edge]
        out[edge] = (1.0 - t) * samples[b] + t * samples[b + 1]
    return out[0] if scalar else out


# Zero-extended fast path: rows are padded with four ghost zeros per side so
# stencil reads never need masking. Interpolating the zero-padded sequence is
# the exact continuation for compactly supported fields.

_PAD = 4


def pad_row(row) -> np.ndarray:
    row = np.asarray(row, dtype=float)
    out = np.zeros(row.shape[0] + 2 * _PAD)
    out[_PAD:_PAD + row.shape[0]] = row
    return out


def eval_padded(padded, origin, h, xq):
    """Cubic interpolation of a pad_row()-prepared sample row; returns 0 for
    queries beyond the padded range (hot path: no masks, no scatter)."""
    n = padded.shape[0] - 2 * _PAD - 1
    pos = (np.asarray(xq, dtype=float) - origin) / h
    scalar = pos.ndim == 0
    if scalar:
        pos = pos[None]
    idx = np.floor(pos)
    th = pos - idx
    i = idx.astype(np.int64)
    np.clip(i, -3, n + 2, out=i)
    g = i + _PAD
    p1 = th - 1.0
    p2 = th - 2.0
    tp1 = th + 1.0
    a = th * p2
    b = p1 * tp1
    wm1 = a * p1 / -6.0
    w0 = b * p2 * 0.5
    w1 = a * tp1 * -0.5
    w2 = th * b / 6.0
    out = (wm1 * padded[g - 1] + w0 * padded[g]
           + w1 * padded[g + 1] + w2 * padded[g + 2])
    return out[0] if scalar else out


def eval_padded_derivative(padded, origin, h, xq):
    """Spatial derivative of the interpolant of a pad_row()-prepared row."""
    n = padded.shape[0] - 2 * _PAD - 1
    pos = (np.asarray(xq, dtype=float) - origin) / h
    scalar = pos.ndim == 0
    if scalar:
        pos = pos[None]
    idx = np.floor(pos)
    th = pos - idx
    i = idx.astype(np.int64)
    np.clip(i, -3, n + 2, out=i)
    g = i + _PAD
    t2 = th * th
    dm1 = -(3.0 * t2 - 6.0 * th + 2.0) / 6.0
    d0 = (3.0 * t2 - 4.0 * th - 1.0) * 0.5
    d1 = -(3.0 * t2 - 2.0 * th - 2.0) * 0.5
    d2 = (3.0 * t2 - 1.0) / 6.0
    out = (dm1 * padded[g - 1] + d0 * padded[g]
           + d1 * padded[g + 1] + d2 * padded[g + 2]) / h
    return out[0] if scalar else out


def interp_1d_zero_extended(samples, origin, h, xq):
    """Cubic interpolation with zero extension outside the grid; convenience
    wrapper over the padded fast path."""
    return eval_padded(pad_row(samples), origin, h, xq)


def interp_2d(values, x_origin, dx, v_origin, dv, xq, vq,
              what="interpolation"):
    """Tensor-product cubic interpolation of values[(x-node, v-node)]."""
    values = np.asarray(values, dtype=float)
    nx = values.shape[0] - 1
    nv = values.shape[1] - 1
    bx, tx = _locate(x_origin, dx, nx, xq, what)
    bv, tv = _locate(v_origin, dv, nv, vq, what)
    scalar = np.ndim(bx) == 0 and np.ndim(bv) == 0
    bx, tx, bv, tv = map(np.atleast_1d, (bx, tx, bv, tv))
    bx, tx, bv, tv = np.broadcast_arrays(bx, tx, bv, tv)

    wx = _axis_weights(bx, tx, nx)
    wv = _axis_weights(bv, tv, nv)
    out = np.zeros(bx.shape, dtype=float)
    for ox, cx in wx:
        row = np.zeros(bx.shape, dtype=float)
        ix = np.clip(bx + ox, 0, nx)
        for ov, cv in wv:
            iv = np.clip(bv + ov, 0, nv)
            row += cv * values[ix, iv]
        out += cx * row
    return out[0] if scalar else out


def _axis_weights(base, theta, n):
    """Per-point stencil weights at offsets -1..2; edge cells fall back to
    linear by zeroing the outer weights."""
    interior = (base >= 1) & (base <= n - 2)
    wm1, w0, w1, w2 = cubic_weights(theta)
    lin0 = 1.0 - theta
    lin1 = theta
    wm1 = np.where(interior, wm1, 0.0)
    w2 = np.where(interior, w2, 0.0)
    w0 = np.where(interior, w0, lin0)
    w1 = np.where(interior, w1, lin1)
    return [(-1, wm1), (0, w0), (1, w1), (2, w2)]
