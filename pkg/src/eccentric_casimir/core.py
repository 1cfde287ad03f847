"""Physical constants and validated geometry types.

All lengths are SI meters. Geometry objects validate themselves on
construction; soft regime warnings are collected by :func:`validate_geometry`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 recommended values (SI)."""

    hbar: float = 1.054571817e-34  # J s
    c: float = 299792458.0  # m / s
    k_B: float = 1.380649e-23  # J / K
    eps0: float = 8.8541878128e-12  # F / m
    electron_charge: float = 1.602176634e-19  # C

    def __post_init__(self):
        for name in ("hbar", "c", "k_B", "eps0", "electron_charge"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c

    def ev_to_rad_per_s(self, energy_ev: float) -> float:
        return energy_ev * self.electron_charge / self.hbar


CONSTANTS = PhysicalConstants()


class GeometryError(ValueError):
    """Hard invariant violation of a geometry."""


class RegimeWarning(UserWarning):
    """Inputs outside the regime where an approximation is intended."""


class NonPositiveLength(GeometryError):
    pass


class SurfacesIntersect(GeometryError):
    pass


class InnerNotInsideOuter(GeometryError):
    pass


# Soft-warning thresholds (regime flags, never hard errors).
MIN_LENGTH_OVER_RADIUS = 20.0
MAX_GAP_OVER_RADIUS = 0.1
MAX_EPS_OVER_B = 0.01
LARGE_ECCENTRICITY = 0.5
TOUCH_RTOL = 1e-12


def _require_positive(**lengths):
    for name, value in lengths.items():
        if not (value > 0 and math.isfinite(value)):
            raise NonPositiveLength(f"{name} must be a positive finite length, got {value!r}")


@dataclass(frozen=True)
class ParallelPlates:
    A: float
    d: float

    def __post_init__(self):
        _require_positive(A=self.A, d=self.d)


@dataclass(frozen=True)
class SpherePlane:
    R: float
    d: float

    def __post_init__(self):
        _require_positive(R=self.R, d=self.d)


@dataclass(frozen=True)
class CylinderPlane:
    a: float
    L: float
    d: float

    def __post_init__(self):
        _require_positive(a=self.a, L=self.L, d=self.d)


@dataclass(frozen=True)
class EccentricCylinders:
    """Inner cylinder of radius ``a`` inside a hollow cylinder of radius ``b``.

    ``epsilon`` is the distance between the two axes.
    """

    a: float
    b: float
    L: float
    epsilon: float = 0.0

    def __post_init__(self):
        _require_positive(a=self.a, b=self.b, L=self.L)
        if not (self.epsilon >= 0 and math.isfinite(self.epsilon)):
            raise NonPositiveLength(f"epsilon must be >= 0, got {self.epsilon!r}")
        if not self.a < self.b:
            raise InnerNotInsideOuter(f"inner radius a={self.a} must be < outer radius b={self.b}")
        # offsets within rounding of b - a count as touching
        if not self.epsilon < (self.b - self.a) * (1.0 - TOUCH_RTOL):
            raise SurfacesIntersect(
                f"epsilon must be < b-a (epsilon={self.epsilon}, b-a={self.b - self.a})"
            )

    @property
    def eps_tilde(self) -> float:
        return self.epsilon / (self.b - self.a)

    @property
    def gap(self) -> float:
        """Closest surface separation ``b - a - epsilon``."""
        return self.b - self.a - self.epsilon

    @property
    def eps_over_b(self) -> float:
        return self.epsilon / self.b

    def with_epsilon(self, epsilon: float) -> "EccentricCylinders":
        return EccentricCylinders(self.a, self.b, self.L, epsilon)

    def scaled(self, lam: float) -> "EccentricCylinders":
        return EccentricCylinders(lam * self.a, lam * self.b, lam * self.L, lam * self.epsilon)


Geometry = Union[ParallelPlates, SpherePlane, CylinderPlane, EccentricCylinders]


@dataclass
class ValidationReport:
    geometry: Geometry
    warnings: list[str] = field(default_factory=list)


def validate_geometry(g: Geometry) -> ValidationReport:
    """Collect soft regime warnings for an (already invariant-checked) geometry.

    Hard violations raise at construction time, so reaching this function
    means ``g`` is a legal configuration.
    """
    report = ValidationReport(g)
    w = report.warnings
    if isinstance(g, EccentricCylinders):
        if g.L / g.b < MIN_LENGTH_OVER_RADIUS:
            w.append(f"L/b={g.L / g.b:.3g}: finite-length edge effects not negligible")
        if g.eps_over_b > MAX_EPS_OVER_B:
            w.append(f"eps/b={g.eps_over_b:.3g}: beyond leading order in eps/b")
        if g.eps_tilde > LARGE_ECCENTRICITY:
            w.append(f"eps_tilde={g.eps_tilde:.3g}: large eccentricity regime")
        if g.gap / g.a > MAX_GAP_OVER_RADIUS:
            w.append(f"d/a={g.gap / g.a:.3g}: proximity approximation questionable")
    elif isinstance(g, CylinderPlane):
        if g.d / g.a > MAX_GAP_OVER_RADIUS:
            w.append(f"d/a={g.d / g.a:.3g}: proximity approximation questionable")
    elif isinstance(g, SpherePlane):
        if g.d / g.R > MAX_GAP_OVER_RADIUS:
            w.append(f"d/R={g.d / g.R:.3g}: proximity approximation questionable")
    return report


def derived_parameters(g: EccentricCylinders) -> dict[str, float]:
    return {"eps_tilde": g.eps_tilde, "gap_d": g.gap, "eps_over_b": g.eps_over_b}
