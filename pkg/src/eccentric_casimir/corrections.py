"""Combined thermal and finite-conductivity corrections for four geometries.

Every corrected force is built from the plate-plate Lifshitz free energy via
the proximity approximation:

* plane-plane:   F = A * P(d)
* sphere-plane:  F = 2 pi R E(d)
* cylinder-plane: proximity integral of dE/dl over the facing half cylinder
* eccentric cylinders (eps_tilde << 1): F = -eps pi L a E''(b - a)
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .core import CylinderPlane, EccentricCylinders, ParallelPlates, RegimeWarning, SpherePlane
from .ideal_forces import f0_magnitude, force_pp, force_sp
from .lifshitz import (
    DielectricModel,
    GOLD_OMEGA_P,
    Plasma,
    PlasmaNoTEZero,
    ThermalState,
    free_energy_pp,
    lifshitz_profile,
    model_label,
    pressure_pp,
    second_derivative_energy_pp,
)
from .pfa import cylinder_plane_pfa, ideal_profile

GEOMETRY_KINDS = ("sphere-plane", "cylinder-plane", "plane-plane", "eccentric")


@dataclass(frozen=True)
class CurveParams:
    """Body sizes shared along a distance sweep (SI units).

    ``eps_tilde`` fixes the axis offset of the eccentric pair as a fraction of
    the swept gap; the correction ratio does not depend on it.
    """

    A: float = 1e-6
    R: float = 100e-6
    a: float = 100e-6
    L: float = 5e-3
    eps_tilde: float = 0.1


@dataclass
class CurveRow:
    d: float
    F_ideal: float
    F_corrected: float
    ratio: float


@dataclass
class CorrectionCurve:
    geometry_kind: str
    model: str
    T: float
    rows: list[CurveRow] = field(default_factory=list)


def corrected_force_eccentric(g: EccentricCylinders, model: DielectricModel, thermal: ThermalState) -> float:
    """Small-offset force from the curvature of the plate-plate energy (N, destabilizing > 0)."""
    if g.eps_tilde > 0.2:
        warnings.warn(f"eps_tilde={g.eps_tilde:.3g} outside the small-offset regime", RegimeWarning)
    if g.epsilon == 0:
        return 0.0
    return -g.epsilon * math.pi * g.L * g.a * second_derivative_energy_pp(g.b - g.a, model, thermal)


def _eccentric_at(params: CurveParams, d: float) -> EccentricCylinders:
    return EccentricCylinders(params.a, params.a + d, params.L, params.eps_tilde * d)


def ideal_force(kind: str, params: CurveParams, d: float) -> float:
    if kind == "plane-plane":
        return force_pp(ParallelPlates(params.A, d))
    if kind == "sphere-plane":
        return force_sp(SpherePlane(params.R, d))
    if kind == "cylinder-plane":
        return cylinder_plane_pfa(CylinderPlane(params.a, params.L, d), ideal_profile()).value
    if kind == "eccentric":
        g = _eccentric_at(params, d)
        return g.eps_tilde * f0_magnitude(g)
    raise ValueError(f"unknown geometry kind {kind!r}")


def corrected_force(kind: str, params: CurveParams, d: float, model: DielectricModel,
                    thermal: ThermalState) -> float:
    if kind == "plane-plane":
        return params.A * pressure_pp(d, model, thermal)
    if kind == "sphere-plane":
        return 2.0 * math.pi * params.R * free_energy_pp(d, model, thermal)
    if kind == "cylinder-plane":
        prof = lifshitz_profile(model, thermal)
        return cylinder_plane_pfa(CylinderPlane(params.a, params.L, d), prof).value
    if kind == "eccentric":
        return corrected_force_eccentric(_eccentric_at(params, d), model, thermal)
    raise ValueError(f"unknown geometry kind {kind!r}")


def _row(kind, params, d, model, thermal):
    ideal = ideal_force(kind, params, d)
    corr = corrected_force(kind, params, d, model, thermal)
    return CurveRow(d, ideal, corr, corr / ideal)


def correction_curve(kind: str, params: CurveParams, model: DielectricModel, thermal: ThermalState,
                     d_grid, threads: int = 1) -> CorrectionCurve:
    d_grid = [float(d) for d in d_grid]
    if any(b <= a for a, b in zip(d_grid, d_grid[1:])):
        raise ValueError("distance grid must be strictly increasing")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda d: _row(kind, params, d, model, thermal), d_grid))
    else:
        rows = [_row(kind, params, d, model, thermal) for d in d_grid]
    return CorrectionCurve(kind, model_label(model, thermal), thermal.T, rows)


def model_discrepancy(kind: str, params: CurveParams, d: float, thermal: ThermalState,
                      omega_p: float = GOLD_OMEGA_P) -> float:
    """F(plasma) / F(plasma without the TE zero mode) at one distance."""
    num = corrected_force(kind, params, d, Plasma(omega_p), thermal)
    den = corrected_force(kind, params, d, PlasmaNoTEZero(omega_p), thermal)
    return num / den
