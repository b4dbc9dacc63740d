"""Grid-sampled states of the distribution and of the wave field."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .grid import PhaseGrid

# support threshold relative to the peak of f0: semi-Lagrangian evaluation
# leaves sub-tolerance dust, so exact zero tests would be meaningless
EPS_SUPP = 1e-12


@dataclass(frozen=True)
class DistributionState:
    """Samples of f(t, x_i, v_j) with the tracked support bounding box."""

    values: np.ndarray          # shape (nx+1, nv+1)
    time: float
    support_box: tuple          # (x_lo, x_hi, v_lo, v_hi); zeros if empty

    @staticmethod
    def from_values(values, time, grid: PhaseGrid, f0_sup: float,
                    eps_supp: float = EPS_SUPP) -> "DistributionState":
        box = support_box(values, grid, f0_sup, eps_supp)
        return DistributionState(values=values, time=float(time),
                                 support_box=box)

    @property
    def grid_max(self) -> float:
        return float(self.values.max())

    @property
    def undershoot(self) -> float:
        return float(min(self.values.min(), 0.0))


def support_box(values, grid: PhaseGrid, f0_sup: float,
                eps_supp: float = EPS_SUPP) -> tuple:
    """Bounding box of samples above eps_supp * f0_sup; all-zero box if empty."""
    thresh = eps_supp * f0_sup if f0_sup > 0.0 else eps_supp
    mask = values > thresh
    if not mask.any():
        return (0.0, 0.0, 0.0, 0.0)
    xi = np.nonzero(mask.any(axis=1))[0]
    vj = np.nonzero(mask.any(axis=0))[0]
    xs = grid.x_nodes
    vs = grid.v_nodes
    return (float(xs[xi[0]]), float(xs[xi[-1]]),
            float(vs[vj[0]]), float(vs[vj[-1]]))


@dataclass(frozen=True)
class FieldState:
    """Characteristic variables b_plus = dtA + dxA and b_minus = dtA - dxA.

    dtA and dxA are definitional combinations; the potential itself is
    reconstructed by integrating dxA from the left boundary, which the
    light-cone margin keeps outside every signal (so A = 0 there).
    """

    b_plus: np.ndarray          # shape (nx+1,)
    b_minus: np.ndarray
    time: float

    @property
    def dt_a(self) -> np.ndarray:
        return 0.5 * (self.b_plus + self.b_minus)

    @property
    def dx_a(self) -> np.ndarray:
        return 0.5 * (self.b_plus - self.b_minus)

    def potential(self, grid: PhaseGrid) -> np.ndarray:
        """Trapezoidal cumulative integral of dxA anchored at A(x_min) = 0."""
        dxa = self.dx_a
        steps = 0.5 * grid.dx * (dxa[1:] + dxa[:-1])
        out = np.empty_like(dxa)
        out[0] = 0.0
        np.cumsum(steps, out=out[1:])
        return out

    @staticmethod
    def from_initial_data(init, grid: PhaseGrid) -> "FieldState":
        x = grid.x_nodes
        a1 = init.a1(x)
        a0p = init.a0.derivative(x)
        return FieldState(b_plus=a1 + a0p, b_minus=a1 - a0p, time=0.0)

    def shifted_copy(self, b_plus, b_minus, time) -> "FieldState":
        return FieldState(b_plus=b_plus, b_minus=b_minus, time=float(time))


def refined_sup(values, grid: PhaseGrid) -> float:
    """Estimate the continuum sup of the sampled function by a parabolic fit
    through the grid argmax and its neighbors in x and v.

    The raw grid max understates the peak by up to curvature * (cell/2)^2
    whenever the peak sits between nodes; the fit removes that sampling
    artifact without touching the samples themselves.
    """
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    peak = float(values[i, j])
    corr = 0.0
    for axis, idx in ((0, i), (1, j)):
        n = values.shape[axis] - 1
        if 0 < idx < n:
            if axis == 0:
                fm, f0, fp = values[idx - 1, j], values[idx, j], values[idx + 1, j]
            else:
                fm, f0, fp = values[i, idx - 1], values[i, idx], values[i, idx + 1]
            denom = fm - 2.0 * f0 + fp
            if denom < 0.0:
                # vertex of the interpolating parabola along this axis
                corr += (fp - fm) ** 2 / (-8.0 * denom)
    return peak + corr
