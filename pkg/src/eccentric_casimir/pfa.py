"""Proximity-force integrals over the eccentric-cylinder and cylinder-plane gaps.

Any plate-plate energy profile ``l -> E(l)`` (J/m^2) can be fed in; with the
ideal profile the results serve as independent checks of the closed forms in
:mod:`eccentric_casimir.ideal_forces`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .core import CONSTANTS, CylinderPlane, EccentricCylinders
from .ideal_forces import energy_per_area_pp

DEFAULT_RTOL = 1e-9
MAX_SUBINTERVALS = 1000


class QuadratureNonConvergence(RuntimeError):
    pass


class ProfileEvaluationFailure(RuntimeError):
    pass


class StencilOutOfDomain(ValueError):
    pass


@dataclass(frozen=True)
class PlatePlateEnergyProfile:
    """Energy per unit area between two parallel plates as a function of spacing.

    ``derivative`` is optional; without it ``dE/dl`` is taken with a
    five-point stencil of relative step 1e-3.
    """

    evaluate: Callable[[float], float]
    label: str
    derivative: Optional[Callable[[float], float]] = None

    def __call__(self, l: float) -> float:
        return self.evaluate(l)

    def dE_dl(self, l: float) -> float:
        if self.derivative is not None:
            return self.derivative(l)
        h = 1e-3 * l
        f = self.evaluate
        return (f(l - 2 * h) - 8 * f(l - h) + 8 * f(l + h) - f(l + 2 * h)) / (12 * h)

    def scaled(self, kappa: float) -> "PlatePlateEnergyProfile":
        deriv = None if self.derivative is None else (lambda l: kappa * self.derivative(l))
        return PlatePlateEnergyProfile(lambda l: kappa * self.evaluate(l), f"{kappa}*{self.label}", deriv)


def _ideal_derivative(l: float) -> float:
    return math.pi**2 * CONSTANTS.hbar_c / (240.0 * l**4)


def ideal_profile() -> PlatePlateEnergyProfile:
    return PlatePlateEnergyProfile(energy_per_area_pp, "ideal T=0", _ideal_derivative)


@dataclass
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def r_of_theta(g: EccentricCylinders, theta):
    """Distance from the inner axis to the outer surface along direction theta."""
    eps = g.epsilon
    return np.sqrt(g.b**2 - eps**2 * np.cos(theta) ** 2) + eps * np.sin(theta)


def dA_eff_of_theta(g: EccentricCylinders, theta):
    """Geometric-mean area element per radian, sqrt(dS1 dS2) / dtheta."""
    return g.L * np.sqrt(g.a * g.b + g.epsilon * g.a * np.sin(theta))


def _quad(f, lo, hi, points, rtol, atol=0.0):
    points = sorted(p for p in points if lo < p < hi) or None
    calls = 0

    def counted(x):
        nonlocal calls
        calls += 1
        return f(x)

    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            out = quad(counted, lo, hi, points=points, epsabs=atol, epsrel=rtol,
                       limit=MAX_SUBINTERVALS, full_output=1)
        except IntegrationWarning as exc:
            raise QuadratureNonConvergence(str(exc)) from exc
    if len(out) > 3:
        raise QuadratureNonConvergence(out[3])
    return QuadratureResult(out[0], out[1], calls)


def _peak_points(width: float, centre: float = 0.0):
    # Breakpoints clustered around a peak of the given angular width.
    pts = [centre]
    for k in (0.25, 1.0, 4.0, 16.0):
        pts += [centre - k * width, centre + k * width]
    return pts


def _profile_value(prof, l):
    try:
        val = prof(l)
    except Exception as exc:
        raise ProfileEvaluationFailure(f"profile {prof.label!r} failed at l={l!r}: {exc}") from exc
    if not math.isfinite(val):
        raise ProfileEvaluationFailure(f"profile {prof.label!r} returned {val!r} at l={l!r}")
    return val


def _energy(a, b, L, eps, prof, rtol):
    eps = abs(eps)  # E_I is even in the axis offset
    # phi = theta + pi/2 puts the narrowest gap at phi = 0.
    def integrand(phi):
        s = -math.cos(phi)  # sin(theta)
        c2 = math.sin(phi) ** 2  # cos(theta)^2
        r = math.sqrt(b * b - eps * eps * c2) + eps * s
        return L * math.sqrt(a * b + eps * a * s) * _profile_value(prof, r - a)

    width = math.sqrt(2.0 * (b - a - eps) / (b - a))
    return _quad(integrand, -math.pi, math.pi, _peak_points(width), rtol)


def interaction_energy(g: EccentricCylinders, prof: PlatePlateEnergyProfile,
                       rtol: float = DEFAULT_RTOL) -> QuadratureResult:
    """Proximity interaction energy (J) integrated over the full angle."""
    return _energy(g.a, g.b, g.L, g.epsilon, prof, rtol)


def force_step(g: EccentricCylinders) -> float:
    if g.epsilon > 0:
        return max(1e-4 * g.gap, 1e-3 * g.epsilon)
    return 1e-4 * g.gap


def force_from_energy(g: EccentricCylinders, prof: PlatePlateEnergyProfile,
                      rtol: float = DEFAULT_RTOL, h: Optional[float] = None) -> QuadratureResult:
    """-dE_I/d(epsilon) by Richardson-extrapolated central differences.

    Positive values push the axes further apart (destabilizing).
    """
    h = force_step(g) if h is None else h
    if not g.epsilon + h < g.b - g.a:
        raise StencilOutOfDomain(f"epsilon + h = {g.epsilon + h} reaches b - a = {g.b - g.a}")

    def E(eps):
        return _energy(g.a, g.b, g.L, eps, prof, rtol)

    e = g.epsilon
    p1, m1 = E(e + h), E(e - h)
    p2, m2 = E(e + h / 2), E(e - h / 2)
    coarse = -(p1.value - m1.value) / (2 * h)
    fine = -(p2.value - m2.value) / h
    force = (4 * fine - coarse) / 3
    err = (abs(fine - coarse) / 3
           + (4 / 3) * (p2.abs_error_estimate + m2.abs_error_estimate) / h
           + (1 / 3) * (p1.abs_error_estimate + m1.abs_error_estimate) / (2 * h))
    evals = p1.evaluations + m1.evaluations + p2.evaluations + m2.evaluations
    return QuadratureResult(force, err, evals)


def leading_order_integral(eps_tilde: float, rtol: float = 1e-13) -> QuadratureResult:
    """Integral of sin(t) / (1 + eps_tilde sin(t))^4 over one period (negative)."""
    def integrand(phi):
        s = -math.cos(phi)
        return s / (1.0 + eps_tilde * s) ** 4

    width = math.sqrt(2.0 * (1.0 - eps_tilde)) if eps_tilde < 1 else 0.0
    # the integrand is O(1) and the integral vanishes at eps_tilde = 0
    return _quad(integrand, -math.pi, math.pi, _peak_points(width), rtol, atol=1e-13)


def force_integral_leading_order(g: EccentricCylinders) -> float:
    pref = math.pi**2 * CONSTANTS.hbar_c * g.L * g.a / (240.0 * (g.b - g.a) ** 4)
    return -pref * leading_order_integral(g.eps_tilde).value


def cylinder_plane_pfa(g: CylinderPlane, prof: PlatePlateEnergyProfile, area: str = "cylinder",
                       rtol: float = DEFAULT_RTOL) -> QuadratureResult:
    """Proximity force (N, negative) between a cylinder and a plane.

    ``area="cylinder"`` uses the bare cylinder area element L a dtheta, which
    reproduces the ideal closed form exactly; ``area="geometric_mean"`` uses
    sqrt(dS_cyl dS_plane) = L a sqrt(cos theta) dtheta.
    """
    if area == "cylinder":
        weight = lambda t: 1.0
    elif area == "geometric_mean":
        weight = lambda t: math.sqrt(max(math.cos(t), 0.0))
    else:
        raise ValueError(f"unknown area prescription {area!r}")

    a, d = g.a, g.d

    def integrand(t):
        l = d + a * (1.0 - math.cos(t))
        try:
            dE = prof.dE_dl(l)
        except Exception as exc:
            raise ProfileEvaluationFailure(f"profile {prof.label!r} failed at l={l!r}: {exc}") from exc
        return weight(t) * dE

    width = math.sqrt(2.0 * d / a)
    res = _quad(integrand, 0.0, math.pi / 2, _peak_points(width)[1:], rtol)
    scale = -2.0 * g.L * a
    return QuadratureResult(scale * res.value, abs(scale) * res.abs_error_estimate, res.evaluations)
