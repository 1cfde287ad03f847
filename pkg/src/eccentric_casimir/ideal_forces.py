"""Closed-form Casimir energies and forces for perfect conductors at T = 0.

Surface-to-surface forces (plates, sphere-plane, cylinder-plane) are negative
(attractive). The eccentric-cylinder force is reported along the direction of
increasing axis offset and is positive: the coaxial position is unstable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy.integrate import quad

from .core import (
    CONSTANTS,
    CylinderPlane,
    EccentricCylinders,
    ParallelPlates,
    SpherePlane,
    validate_geometry,
)

SIGN_CONVENTION = (
    "eccentric cylinders: force > 0 along increasing axis offset (destabilizing); "
    "surface-to-surface forces < 0 (attractive)"
)

# Prefactors of the force ratios, from the closed forms (never hard-coded).
PP_OVER_CP_PREFACTOR = 384.0 * math.sqrt(2.0) / (240.0 * math.pi)
CP_OVER_SP_PREFACTOR = 360.0 / (384.0 * math.sqrt(2.0))


class NonPositiveSeparation(ValueError):
    pass


class EccentricityOutOfRange(ValueError):
    pass


class DegenerateGap(ValueError):
    pass


class MismatchedSeparation(ValueError):
    pass


class Formula(str, enum.Enum):
    CLOSED_FORM = "ClosedForm"
    SMALL_ECCENTRICITY = "SmallEccentricity"
    LARGE_ECCENTRICITY = "LargeEccentricity"


@dataclass
class IdealForceResult:
    force: float
    formula: Formula
    F0_magnitude: float
    warnings: list[str] = field(default_factory=list)
    sign_convention: str = SIGN_CONVENTION


def energy_per_area_pp(l: float) -> float:
    """Ideal plate-plate Casimir energy per unit area, J/m^2."""
    if not l > 0:
        raise NonPositiveSeparation(f"separation must be > 0, got {l!r}")
    return -math.pi**2 * CONSTANTS.hbar_c / (720.0 * l**3)


def force_pp(plates: ParallelPlates) -> float:
    return -math.pi**2 * CONSTANTS.hbar_c * plates.A / (240.0 * plates.d**4)


def force_sp(sp: SpherePlane) -> float:
    """Sphere-plane force from the energy-based proximity rule 2 pi R E_pp(d)."""
    return -math.pi**3 * CONSTANTS.hbar_c * sp.R / (360.0 * sp.d**3)


def f0_magnitude(g: EccentricCylinders) -> float:
    """Magnitude of twice the plate force for area 2 pi a L at spacing b - a."""
    return math.pi**3 * CONSTANTS.hbar_c * g.L * g.a / (60.0 * (g.b - g.a) ** 4)


def eccentric_shape_factor(eps_tilde: float) -> float:
    """eps_t (1 + eps_t^2/4) / (1 - eps_t^2)^(7/2)."""
    if not 0 <= eps_tilde < 1:
        raise EccentricityOutOfRange(f"reduced eccentricity must lie in [0, 1), got {eps_tilde!r}")
    return eps_tilde * (1.0 + eps_tilde**2 / 4.0) / (1.0 - eps_tilde**2) ** 3.5


def force_eccentric_closed_form(g: EccentricCylinders) -> IdealForceResult:
    F0 = f0_magnitude(g)
    warnings = [w for w in validate_geometry(g).warnings if w.startswith("eps/b")]
    return IdealForceResult(F0 * eccentric_shape_factor(g.eps_tilde), Formula.CLOSED_FORM, F0, warnings)


def force_eccentric_small(g: EccentricCylinders) -> IdealForceResult:
    """Linear (inverted harmonic oscillator) law, valid for eps_tilde << 1."""
    F0 = f0_magnitude(g)
    warnings = []
    if g.eps_tilde >= 0.2:
        warnings.append(f"eps_tilde={g.eps_tilde:.3g}: linear law outside eps_tilde < 0.2")
    return IdealForceResult(g.eps_tilde * F0, Formula.SMALL_ECCENTRICITY, F0, warnings)


def spring_constant_ideal(g: EccentricCylinders) -> float:
    """|F|/epsilon of the linear law, N/m."""
    return f0_magnitude(g) / (g.b - g.a)


def force_eccentric_large(g: EccentricCylinders) -> IdealForceResult:
    """Near-contact asymptote, diverging as gap^(-7/2)."""
    d = g.gap
    if not d > 0:
        raise DegenerateGap(f"gap must be > 0, got {d!r}")
    F0 = f0_magnitude(g)
    warnings = []
    if g.eps_tilde <= 0.8:
        warnings.append(f"eps_tilde={g.eps_tilde:.3g}: asymptote intended for eps_tilde > 0.8")
    force = 5.0 / (32.0 * math.sqrt(2.0)) * ((g.b - g.a) / d) ** 3.5 * F0
    return IdealForceResult(force, Formula.LARGE_ECCENTRICITY, F0, warnings)


def force_cylinder_plane(g: CylinderPlane, form: str = "asymptotic") -> float:
    """Cylinder parallel to a plane.

    ``form="asymptotic"`` gives the d << a power law; ``form="integral"``
    evaluates the proximity integral over the facing half of the cylinder.
    """
    hc = CONSTANTS.hbar_c
    if form == "asymptotic":
        return -math.pi**3 * hc * g.L * math.sqrt(g.a) / (384.0 * math.sqrt(2.0) * g.d**3.5)
    if form == "integral":
        x = g.d / g.a
        w = math.sqrt(2.0 * x)
        val, _ = quad(
            lambda t: (1.0 + x - math.cos(t)) ** -4,
            0.0,
            math.pi / 2,
            points=[w, 4 * w, 16 * w] if 16 * w < math.pi / 2 else None,
            epsabs=0.0,
            epsrel=1e-12,
            limit=200,
        )
        return -math.pi**2 * hc * g.L / (120.0 * g.a**3) * val
    raise ValueError(f"unknown form {form!r}")


def force_ratios(pp: ParallelPlates, cp: CylinderPlane, sp: SpherePlane) -> dict[str, float]:
    if not (pp.d == cp.d == sp.d):
        raise MismatchedSeparation(f"separations differ: pp={pp.d}, cp={cp.d}, sp={sp.d}")
    d = pp.d
    return {
        "pp_over_cp": PP_OVER_CP_PREFACTOR * pp.A / (cp.L * math.sqrt(cp.a * d)),
        "cp_over_sp": CP_OVER_SP_PREFACTOR * (cp.L / sp.R) * math.sqrt(cp.a / d),
    }
