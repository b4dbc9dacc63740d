"""Compactly supported C^1 initial-data presets.

All profiles are quartic bumps height*(1 - ((z-c)/r)^2)^2, which vanish
with their first derivative at the support edge. Gaussians are deliberately
not offered: the theory this artifact checks requires compact support, and
the support diagnostics would be meaningless without it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PROFILE_NAMES_1D = ("bump", "shifted_bump", "zero")
PROFILE_NAMES_2D = ("bump2d", "zero")


@dataclass(frozen=True)
class Profile1D:
    """One-variable bump descriptor with analytic derivative and antiderivative."""

    name: str
    center: float = 0.0
    radius: float = 1.0
    height: float = 1.0

    def __post_init__(self):
        if self.name not in PROFILE_NAMES_1D:
            raise ValueError(f"unknown 1d preset {self.name!r}")
        if self.radius <= 0.0:
            raise ValueError("radius must be positive")

    @property
    def is_zero(self) -> bool:
        return self.name == "zero" or self.height == 0.0

    def support(self):
        if self.is_zero:
            return (0.0, 0.0)
        return (self.center - self.radius, self.center + self.radius)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.is_zero:
            return np.zeros_like(z)
        u = (z - self.center) / self.radius
        inside = np.abs(u) < 1.0
        w = 1.0 - u * u
        return np.where(inside, self.height * w * w, 0.0)

    def derivative(self, z):
        z = np.asarray(z, dtype=float)
        if self.is_zero:
            return np.zeros_like(z)
        u = (z - self.center) / self.radius
        inside = np.abs(u) < 1.0
        val = -4.0 * self.height / self.radius * u * (1.0 - u * u)
        return np.where(inside, val, 0.0)

    def antiderivative(self, z):
        """Integral from -infinity to z (the profile has compact support)."""
        z = np.asarray(z, dtype=float)
        if self.is_zero:
            return np.zeros_like(z)
        u = np.clip((z - self.center) / self.radius, -1.0, 1.0)
        # int (1-u^2)^2 du anchored at u=-1, in the exactly-rooted factored
        # form (u+1)^3 (3u^2 - 9u + 8) / 15 so the support edge is a true zero
        prim = (u + 1.0) ** 3 * (3.0 * u * u - 9.0 * u + 8.0) / 15.0
        return self.height * self.radius * prim

    @property
    def sup(self) -> float:
        return 0.0 if self.is_zero else abs(self.height)

    @property
    def sup_derivative(self) -> float:
        # max of |4u(1-u^2)| on [-1,1] is 8/(3*sqrt(3)), at u = 1/sqrt(3)
        if self.is_zero:
            return 0.0
        return abs(self.height) / self.radius * 8.0 / (3.0 * np.sqrt(3.0))

    @property
    def total_integral(self) -> float:
        return 0.0 if self.is_zero else self.height * self.radius * 16.0 / 15.0


def zero_profile() -> Profile1D:
    return Profile1D("zero", 0.0, 1.0, 0.0)


@dataclass(frozen=True)
class Profile2D:
    """Product bump f(x, v) = height * bump_x(x) * bump_v(v)."""

    name: str
    x: Profile1D = field(default_factory=lambda: Profile1D("bump"))
    v: Profile1D = field(default_factory=lambda: Profile1D("bump"))
    height: float = 1.0

    def __post_init__(self):
        if self.name not in PROFILE_NAMES_2D:
            raise ValueError(f"unknown 2d preset {self.name!r}")

    @property
    def is_zero(self) -> bool:
        return (self.name == "zero" or self.height == 0.0
                or self.x.is_zero or self.v.is_zero)

    def __call__(self, x, v):
        if self.is_zero:
            return np.zeros(np.broadcast(np.asarray(x), np.asarray(v)).shape)
        return self.height * self.x(x) * self.v(v)

    def dx(self, x, v):
        if self.is_zero:
            return np.zeros(np.broadcast(np.asarray(x), np.asarray(v)).shape)
        return self.height * self.x.derivative(x) * self.v(v)

    def dv(self, x, v):
        if self.is_zero:
            return np.zeros(np.broadcast(np.asarray(x), np.asarray(v)).shape)
        return self.height * self.x(x) * self.v.derivative(v)

    def support_x(self):
        return self.x.support()

    def support_v(self):
        return self.v.support()

    @property
    def sup(self) -> float:
        if self.is_zero:
            return 0.0
        return abs(self.height) * self.x.sup * self.v.sup

    @property
    def w1inf(self) -> float:
        """max(sup |f|, sup |df/dx|, sup |df/dv|), the W^{1,inf} norm."""
        if self.is_zero:
            return 0.0
        h = abs(self.height)
        return max(h * self.x.sup * self.v.sup,
                   h * self.x.sup_derivative * self.v.sup,
                   h * self.x.sup * self.v.sup_derivative)


def make_profile_1d(name, center=0.0, radius=1.0, height=1.0) -> Profile1D:
    """Build a named 1d preset. "shifted_bump" is a bump that must actually
    be shifted; "zero" ignores its parameters."""
    if name == "zero":
        return zero_profile()
    if name == "shifted_bump" and center == 0.0:
        raise ValueError("shifted_bump requires a nonzero center")
    if name not in PROFILE_NAMES_1D:
        raise ValueError(f"unknown 1d preset {name!r}")
    return Profile1D(name, float(center), float(radius), float(height))


def make_profile_2d(name, x_center=0.0, x_radius=1.0, v_center=0.0,
                    v_radius=1.0, height=1.0) -> Profile2D:
    if name == "zero":
        return Profile2D("zero", zero_profile(), zero_profile(), 0.0)
    if name not in PROFILE_NAMES_2D:
        raise ValueError(f"unknown 2d preset {name!r}")
    return Profile2D("bump2d",
                     Profile1D("bump", float(x_center), float(x_radius), 1.0),
                     Profile1D("bump", float(v_center), float(v_radius), 1.0),
                     float(height))


@dataclass(frozen=True)
class InitialData:
    """The triple (f0, a0, a1): phase-space density, potential, and its
    initial time derivative. f0 and a0 are C^1 with compact support, a1
    continuous with compact support; the presets guarantee this."""

    f0: Profile2D
    a0: Profile1D
    a1: Profile1D

    @property
    def f0_sup(self) -> float:
        return self.f0.sup

    @property
    def f0_w1inf(self) -> float:
        return self.f0.w1inf

    @property
    def support_radius_x(self) -> float:
        lo, hi = self.f0.support_x()
        return max(abs(lo), abs(hi))

    @property
    def support_radius_v(self) -> float:
        lo, hi = self.f0.support_v()
        return max(abs(lo), abs(hi))

    def field_data_support_x(self):
        """Union of the x-supports of f0, a0 and a1 (the sources of signals)."""
        los, his = [], []
        for s in (self.f0.support_x(), self.a0.support(), self.a1.support()):
            los.append(s[0])
            his.append(s[1])
        return (min(los), max(his))

    @property
    def data_term(self) -> float:
        """sup |a0'| + sup |a1|, the field-data constant of the bound chain."""
        return self.a0.sup_derivative + self.a1.sup
