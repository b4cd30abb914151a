"""Continuum-limit numerics: du/dm = u_xx + 2u + u^3.

The homogeneous ODE du/dm = 2u + u^3 blows up at
m* = ln(1 + 2/u0^2) / 4. Dropping the time derivative leaves the undamped
Duffing oscillator u'' + 2u + u^3 = 0 with first integral
E = v^2/2 + u^2 + u^4/4.

ODE and Duffing use classical RK4; the PDE uses explicit Euler method of
lines with the stability guard dt <= dx^2/2.

For comparison with Rule 30, `pde_integrate` can add the transport term
-v(u) u_x with v(u) = 3(u + 1). There is no characteristics solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .rule_algebra import DomainError

__all__ = [
    "BLOW_UP_THRESHOLD",
    "BlowUpError",
    "OdeTrajectory",
    "PdeGrid",
    "StabilityError",
    "blow_up_time",
    "duffing_energy",
    "duffing_integrate",
    "ode_closed_form",
    "ode_integrate",
    "pde_integrate",
    "rule30_transport_speed",
]

# |u| above this counts as blow-up; the first crossing undershoots m* by O(threshold**-2)
BLOW_UP_THRESHOLD = 1e8


class BlowUpError(ArithmeticError):
    pass


class StabilityError(ValueError):
    pass


def blow_up_time(u0: float) -> float:
    if not u0 > 0:
        raise DomainError(f"u0 must be > 0, got {u0!r}")
    return 0.25 * math.log1p(2.0 / (u0 * u0))


def ode_closed_form(u0: float, m: float) -> float:
    """u(m) = u0 sqrt(2) e^{2m} / sqrt(2 + u0^2 (1 - e^{4m}))."""
    m_star = blow_up_time(u0)
    if m < 0:
        raise DomainError("m must be >= 0")
    if m >= m_star:
        raise BlowUpError(f"m={m} is at or past the blow-up time {m_star}")
    denom = 2.0 - u0 * u0 * math.expm1(4.0 * m)
    return u0 * math.sqrt(2.0) * math.exp(2.0 * m) / math.sqrt(denom)


def _n_steps(span: float, dt: float) -> int:
    # round first so that e.g. 0.04 / 0.004 counts as 10 steps, not 11
    return max(0, math.ceil(round(span / dt, 9)))


def _ode_rhs(u: float) -> float:
    return 2.0 * u + u * u * u


@dataclass
class OdeTrajectory:
    m: np.ndarray
    u: np.ndarray
    blown_up_at: float | None = None

    @property
    def blown_up(self) -> bool:
        return self.blown_up_at is not None


def ode_integrate(u0: float, m_end: float, dt: float, threshold: float = BLOW_UP_THRESHOLD) -> OdeTrajectory:
    """RK4 for du/dm = 2u + u^3, stopping early if |u| exceeds `threshold`."""
    if not dt > 0:
        raise DomainError("dt must be > 0")
    n = _n_steps(m_end, dt)
    ms, us = [0.0], [float(u0)]
    u = float(u0)
    blown = None
    for i in range(n):
        h = min(dt, m_end - i * dt)
        k1 = _ode_rhs(u)
        k2 = _ode_rhs(u + 0.5 * h * k1)
        k3 = _ode_rhs(u + 0.5 * h * k2)
        k4 = _ode_rhs(u + h * k3)
        u = u + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        m = i * dt + h
        ms.append(m)
        us.append(u)
        if not math.isfinite(u) or abs(u) > threshold:
            blown = m
            break
    return OdeTrajectory(np.array(ms), np.array(us), blown)


def duffing_energy(u, v):
    return 0.5 * v * v + u * u + 0.25 * u ** 4


@dataclass
class DuffingTrajectory:
    m: np.ndarray
    u: np.ndarray
    v: np.ndarray
    energy: np.ndarray

    @property
    def energy_drift(self) -> float:
        e0 = self.energy[0]
        return float(abs(self.energy[-1] - e0) / e0) if e0 else float(abs(self.energy[-1]))

    def period(self) -> float | None:
        """Time between successive upward zero crossings of v, if any."""
        v = self.v
        idx = np.nonzero((v[:-1] < 0) & (v[1:] >= 0))[0]
        if len(idx) < 2:
            return None
        # linear interpolation of the crossing times
        tc = self.m[idx] - v[idx] * (self.m[idx + 1] - self.m[idx]) / (v[idx + 1] - v[idx])
        return float(np.mean(np.diff(tc)))


def duffing_integrate(u0: float, v0: float, m_end: float, dt: float) -> DuffingTrajectory:
    """RK4 for u' = v, v' = -2u - u^3, logging the energy at every step."""
    if not dt > 0:
        raise DomainError("dt must be > 0")
    n = _n_steps(m_end, dt)
    u, v = float(u0), float(v0)
    ms = np.empty(n + 1)
    us = np.empty(n + 1)
    vs = np.empty(n + 1)
    ms[0], us[0], vs[0] = 0.0, u, v
    for i in range(n):
        h = min(dt, m_end - i * dt)
        a1 = -2.0 * u - u * u * u
        u2, v2 = u + 0.5 * h * v, v + 0.5 * h * a1
        a2 = -2.0 * u2 - u2 * u2 * u2
        u3, v3 = u + 0.5 * h * v2, v + 0.5 * h * a2
        a3 = -2.0 * u3 - u3 * u3 * u3
        u4, v4 = u + h * v3, v + h * a3
        a4 = -2.0 * u4 - u4 * u4 * u4
        u = u + h / 6.0 * (v + 2 * v2 + 2 * v3 + v4)
        v = v + h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4)
        ms[i + 1], us[i + 1], vs[i + 1] = i * dt + h, u, v
    return DuffingTrajectory(ms, us, vs, duffing_energy(us, vs))


def rule30_transport_speed(u):
    """v(u) = 3(u + 1), the advection speed in Rule 30's continuum limit."""
    return 3.0 * (np.asarray(u) + 1.0)


@dataclass(frozen=True)
class PdeGrid:
    values: np.ndarray
    dx: float
    dt: float
    m: float = 0.0
    blown_up_at: float | None = None
    boundary: str = "periodic"

    @classmethod
    def constant(cls, u0: float, n: int, dx: float, dt: float, boundary: str = "periodic") -> PdeGrid:
        return cls(np.full(n, float(u0)), dx, dt, boundary=boundary)

    @classmethod
    def bump(cls, amplitude: float, width: float, n: int, dx: float, dt: float,
             boundary: str = "zero") -> PdeGrid:
        """Gaussian amplitude * exp(-(x/width)^2) on a grid symmetric about x = 0."""
        return cls(amplitude * np.exp(-((cls.coordinates(n, dx) / width) ** 2)), dx, dt, boundary=boundary)

    @staticmethod
    def coordinates(n: int, dx: float) -> np.ndarray:
        return (np.arange(n) - (n - 1) / 2.0) * dx

    @property
    def x(self) -> np.ndarray:
        return self.coordinates(len(self.values), self.dx)


def pde_integrate(
    initial: PdeGrid,
    m_end: float,
    enforce_stability: bool = True,
    advect: bool = False,
    threshold: float = BLOW_UP_THRESHOLD,
    record_every: int = 0,
):
    """Explicit Euler method of lines for u_m = u_xx + 2u + u^3.

    Boundary is ``periodic`` or ``zero`` (homogeneous Dirichlet: the ghost
    cells outside the grid hold 0). Stops at `m_end` or as soon as
    max|u| > threshold, in which case `blown_up_at` is set.

    With ``record_every=k > 0`` also returns the list of (m, values)
    snapshots taken every k steps.
    """
    dx, dt = initial.dx, initial.dt
    if not (dx > 0 and dt > 0):
        raise DomainError("dx and dt must be > 0")
    if enforce_stability and dt > 0.5 * dx * dx:
        raise StabilityError(f"dt={dt} exceeds the explicit diffusion limit dx^2/2={0.5 * dx * dx}")
    if initial.boundary not in ("periodic", "zero"):
        raise DomainError(f"unknown boundary {initial.boundary!r}")
    periodic = initial.boundary == "periodic"

    u = np.array(initial.values, dtype=float)
    m = initial.m
    n_steps = _n_steps(m_end - m, dt)
    inv_dx2 = 1.0 / (dx * dx)
    snaps = [(m, u.copy())] if record_every else None
    padded = np.zeros(len(u) + 2)
    blown = initial.blown_up_at
    m0 = m
    for i in range(n_steps):
        padded[1:-1] = u
        if periodic:
            padded[0], padded[-1] = u[-1], u[0]
        else:
            padded[0] = padded[-1] = 0.0
        left, right = padded[:-2], padded[2:]
        # left + right is commutative, so even data stays exactly even
        rhs = ((left + right) - 2.0 * u) * inv_dx2 + 2.0 * u + u * u * u
        if advect:
            rhs = rhs - rule30_transport_speed(u) * (right - left) / (2.0 * dx)
        h = min(dt, m_end - (m0 + i * dt))
        u = u + h * rhs
        m = m0 + i * dt + h
        if record_every and (i + 1) % record_every == 0:
            snaps.append((m, u.copy()))
        if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > threshold:
            blown = m
            break
    grid = replace(initial, values=u, m=m, blown_up_at=blown)
    return (grid, snaps) if record_every else grid
