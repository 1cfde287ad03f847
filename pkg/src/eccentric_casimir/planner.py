"""Numbers for planning a measurement with cylinders."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import CylinderPlane, EccentricCylinders, ParallelPlates, SpherePlane
from .ideal_forces import force_cylinder_plane, force_pp, force_ratios, force_sp, spring_constant_ideal
from .lifshitz import (
    DielectricModel,
    PerfectConductor,
    ThermalState,
    ZERO_T_ROUTE,
    second_derivative_energy_pp,
)

SMALL_SHIFT_LIMIT = 0.5


class ShiftTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ResonatorSpec:
    M: float  # kg
    omega0: float  # rad/s

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("effective mass must be positive")
        if not self.omega0 > 0:
            raise ValueError("natural angular frequency must be positive")


def is_ideal(model: DielectricModel, thermal: ThermalState) -> bool:
    return isinstance(model, PerfectConductor) and thermal.T < ZERO_T_ROUTE


def casimir_spring_constant(g: EccentricCylinders, model: DielectricModel = PerfectConductor(),
                            thermal: ThermalState = ThermalState(0.0)) -> float:
    """Magnitude of the (negative) Casimir spring constant near coaxiality, N/m."""
    if is_ideal(model, thermal):
        return spring_constant_ideal(g)
    return math.pi * g.L * g.a * abs(second_derivative_energy_pp(g.b - g.a, model, thermal))


def frequency_shift(g: EccentricCylinders, res: ResonatorSpec, model: DielectricModel = PerfectConductor(),
                    thermal: ThermalState = ThermalState(0.0)) -> float:
    """Relative shift of the resonator frequency, d(omega)/omega0 (negative)."""
    k = casimir_spring_constant(g, model, thermal)
    stiffness = res.M * res.omega0**2
    if k / stiffness >= SMALL_SHIFT_LIMIT:
        raise ShiftTooLarge(
            f"Casimir spring constant {k:.3e} N/m is not small against M omega0^2 = {stiffness:.3e} N/m"
        )
    return -k / (2.0 * stiffness)


def compare_geometries(A: float, a: float, R: float, L: float, d: float) -> dict[str, float]:
    """Ideal forces for plates, cylinder-plane and sphere-plane at a common distance."""
    pp, cp, sp = ParallelPlates(A, d), CylinderPlane(a, L, d), SpherePlane(R, d)
    out = {"F_pp": force_pp(pp), "F_cp": force_cylinder_plane(cp), "F_sp": force_sp(sp)}
    out.update(force_ratios(pp, cp, sp))
    return out
