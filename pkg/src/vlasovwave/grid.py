"""Uniform phase-space grid locked to unit CFL.

The single discretization choice everything else leans on: the time step
equals the spatial cell width, so wave characteristics advance by exactly
one node per step and the field update is an index shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainTooSmallError


@dataclass(frozen=True)
class PhaseGrid:
    """Tensor grid in (x, v) with nx, nv cells and nx+1, nv+1 nodes.

    Invariants checked on construction:
      * ordered bounds, at least 2 cells per axis,
      * dt == (x_max - x_min) / nx exactly (unit CFL).
    """

    x_min: float
    x_max: float
    v_min: float
    v_max: float
    nx: int
    nv: int
    dt: float
    n_steps: int

    def __post_init__(self):
        if self.x_max <= self.x_min or self.v_max <= self.v_min:
            raise ValueError("grid bounds must be ordered")
        if self.nx < 2 or self.nv < 2:
            raise ValueError("nx and nv must be >= 2")
        if self.n_steps < 0:
            raise ValueError("n_steps must be >= 0")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.dt != (self.x_max - self.x_min) / self.nx:
            raise ValueError("unit CFL broken: dt must equal dx exactly")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dv(self) -> float:
        return (self.v_max - self.v_min) / self.nv

    @cached_property
    def x_nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx + 1)

    @cached_property
    def v_nodes(self) -> np.ndarray:
        return np.linspace(self.v_min, self.v_max, self.nv + 1)

    @property
    def t_final(self) -> float:
        return self.n_steps * self.dt

    def time_at(self, step: int) -> float:
        return step * self.dt


def build_grid(x_min, x_max, v_min, v_max, nx, nv, t_final,
               support_x=None, support_v=None) -> PhaseGrid:
    """Construct a PhaseGrid with dt = dx and n_steps = ceil(t_final / dt).

    support_x / support_v, when given as (lo, hi) intervals (or a radius
    about 0), enable the light-cone containment check: every signal in the
    coupled system travels at speed <= 1, so the x-support grown by t_final
    must stay inside [x_min, x_max]. Runs that would let the cone reach the
    boundary are refused here instead of failing mid-flight.
    """
    if nx < 2 or nv < 2:
        raise ValueError("nx and nv must be >= 2")
    if x_max <= x_min or v_max <= v_min:
        raise ValueError("grid bounds must be ordered")
    if t_final <= 0.0:
        raise ValueError("t_final must be positive")
    dx = (x_max - x_min) / nx
    n_steps = math.ceil(t_final / dx - 1e-12)

    if support_x is not None:
        lo, hi = _as_interval(support_x)
        need_hi = hi + t_final
        need_lo = lo - t_final
        if need_hi > x_max or need_lo < x_min:
            raise DomainTooSmallError(
                "light-cone margin violated: x-support [%g, %g] grown by "
                "t_final=%g needs [%g, %g] but the domain is [%g, %g]"
                % (lo, hi, t_final, need_lo, need_hi, x_min, x_max))
    if support_v is not None:
        lo, hi = _as_interval(support_v)
        if hi > v_max or lo < v_min:
            raise DomainTooSmallError(
                "v-support [%g, %g] is not contained in [%g, %g]"
                % (lo, hi, v_min, v_max))

    return PhaseGrid(x_min=float(x_min), x_max=float(x_max),
                     v_min=float(v_min), v_max=float(v_max),
                     nx=int(nx), nv=int(nv), dt=dx, n_steps=n_steps)


def _as_interval(spec):
    if np.isscalar(spec):
        r = float(spec)
        return -r, r
    lo, hi = spec
    return float(lo), float(hi)
