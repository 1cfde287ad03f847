"""Electrostatics of slightly eccentric cylinders held at a potential difference V.

The inner cylinder is grounded, the outer one is at V. Forces are reported
along increasing axis offset; both Casimir and electrostatic forces push the
axes apart.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import CONSTANTS, EccentricCylinders, RegimeWarning
from .pfa import _peak_points, _quad, force_step, r_of_theta


class PointOutsideGap(ValueError):
    pass


@dataclass(frozen=True)
class ElectrostaticConfig:
    geometry: EccentricCylinders
    V: float

    def __post_init__(self):
        if not math.isfinite(self.V):
            raise ValueError("V must be finite")


@dataclass(frozen=True)
class GridSpec:
    """Polar grid over the annulus a < r < a + gap (gap = narrowest spacing)."""

    n_r: int = 64
    n_theta: int = 128


def _phi(g, V, r, theta):
    a, b, eps = g.a, g.b, g.epsilon
    return V / math.log(b / a) * (np.log(r / a) - eps * (r**2 - a**2) / (b**2 - a**2) * np.sin(theta) / r)


def potential(config: ElectrostaticConfig, r, theta):
    """First-order (in eps/b) potential between the cylinders, volts."""
    g = config.geometry
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    slack = 1e-12 * g.b
    if np.any(r < g.a - slack) or np.any(r > r_of_theta(g, theta) + slack):
        raise PointOutsideGap("point lies outside the gap between the cylinders")
    out = _phi(g, config.V, r, theta)
    return float(out) if out.ndim == 0 else out


def laplace_residual(config: ElectrostaticConfig, grid: GridSpec = GridSpec()) -> float:
    """Max |discrete Laplacian of phi| on the grid, in units of V/(b-a)^2."""
    g = config.geometry
    h = g.gap / grid.n_r
    k = 2 * math.pi / grid.n_theta
    r = (g.a + h * np.arange(1, grid.n_r))[:, None]
    th = (k * np.arange(grid.n_theta))[None, :]
    f = lambda rr, tt: _phi(g, config.V, rr, tt)
    c = f(r, th)
    lap = ((f(r + h, th) - 2 * c + f(r - h, th)) / h**2
           + (f(r + h, th) - f(r - h, th)) / (2 * h * r)
           + (f(r, th + k) - 2 * c + f(r, th - k)) / (k**2 * r**2))
    if config.V == 0:
        return 0.0
    return float(np.max(np.abs(lap)) * (g.b - g.a) ** 2 / abs(config.V))


def _energy(g, V, eps, rtol):
    a, b, eps = g.a, g.b, abs(eps)
    pref = 0.5 * CONSTANTS.eps0 * V**2 * g.L * a

    def integrand(phi):
        r = math.sqrt(b * b - eps * eps * math.sin(phi) ** 2) - eps * math.cos(phi)
        return 1.0 / (r - a)

    width = math.sqrt(2.0 * (b - a - eps) / (b - a))
    res = _quad(integrand, -math.pi, math.pi, _peak_points(width), rtol)
    return pref * res.value


def electrostatic_energy_pfa(config: ElectrostaticConfig, rtol: float = 1e-11) -> float:
    """Proximity estimate of the field energy, J."""
    return _energy(config.geometry, config.V, config.geometry.epsilon, rtol)


def electrostatic_energy_leading_order(config: ElectrostaticConfig) -> float:
    g = config.geometry
    return (math.pi * CONSTANTS.eps0 * config.V**2 * g.L * g.a
            / ((g.b - g.a) * math.sqrt(1.0 - g.eps_tilde**2)))


def electrostatic_force(config: ElectrostaticConfig, method: str = "closed_form") -> float:
    """Force along increasing axis offset at constant V, N.

    At constant potential the mechanical force is +dU/d(eps) of the field
    energy (battery work included), which is positive here.
    """
    g, V = config.geometry, config.V
    if method == "closed_form":
        if g.eps_tilde >= 0.2:
            warnings.warn(f"eps_tilde={g.eps_tilde:.3g}: linear law outside eps_tilde < 0.2", RegimeWarning)
        return CONSTANTS.eps0 * math.pi * V**2 * g.L * g.a * g.epsilon / (g.b - g.a) ** 3
    if method == "quadrature":
        if V == 0 or g.epsilon == 0:
            return 0.0
        h = force_step(g)
        e = g.epsilon
        U = lambda x: _energy(g, V, x, 1e-12)
        coarse = (U(e + h) - U(e - h)) / (2 * h)
        fine = (U(e + h / 2) - U(e - h / 2)) / h
        return (4 * fine - coarse) / 3
    raise ValueError(f"unknown method {method!r}")
