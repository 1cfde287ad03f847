"""Plate-plate Casimir free energy from the Lifshitz formula.

Standard Lifshitz, reconstructed (the finite-temperature Matsubara form):

    E(l, T) = (k_B T / 2 pi) sum'_n int_0^inf k dk
              [ln(1 - r_TM^2 e^{-2 q_n l}) + ln(1 - r_TE^2 e^{-2 q_n l})]

with q_n = sqrt(k^2 + xi_n^2/c^2), k_n = sqrt(k^2 + eps(i xi_n) xi_n^2/c^2),
r_TM = (eps q_n - k_n)/(eps q_n + k_n), r_TE = (q_n - k_n)/(q_n + k_n) and the
n = 0 term halved. The k integral is done in u = 2 q_n l, for which
k dk = u du / (4 l^2); the integrand decays like u exp(-u).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

from .core import CONSTANTS
from .ideal_forces import NonPositiveSeparation, energy_per_area_pp
from .pfa import PlatePlateEnergyProfile

HBAR, C, KB = CONSTANTS.hbar, CONSTANTS.c, CONSTANTS.k_B

# Literature convention for gold (9.0 eV); not a fitted value.
GOLD_OMEGA_P = CONSTANTS.ev_to_rad_per_s(9.0)

ZERO_T_ROUTE = 1.0  # K; below this the Matsubara sum is replaced by the xi integral
U_MAX = 50.0
SUM_RTOL = 1e-12
SUM_PATIENCE = 5
N_MAX_CAP = 1_000_000
STENCIL_STEP = 1e-3


class SumNonConvergence(RuntimeError):
    pass


class TableRangeExceeded(ValueError):
    pass


class InvalidPermittivityTable(ValueError):
    pass


def _graded_rule(u_max: float = U_MAX, order: int = 20):
    # Composite Gauss-Legendre, geometrically graded towards u = 0 so the
    # u log(u) behaviour of the n = 0 term is integrated to full precision.
    edges = [0.0] + [10.0**k for k in range(-12, 1)] + [2.0, 4.0, 8.0, 16.0, 24.0, 32.0, 40.0, u_max]
    x, w = leggauss(order)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
        weights.append(0.5 * (hi - lo) * w)
    return np.concatenate(nodes), np.concatenate(weights)


_T_NODES, _T_WEIGHTS = _graded_rule()


@dataclass(frozen=True)
class PermittivityTable:
    """eps(i xi) sampled on the imaginary frequency axis (xi in rad/s)."""

    xi: np.ndarray
    eps: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        eps = np.asarray(self.eps, dtype=float)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eps", eps)
        if xi.ndim != 1 or xi.shape != eps.shape or len(xi) < 2:
            raise InvalidPermittivityTable("need two equal-length columns with at least two rows")
        if not np.all(np.isfinite(xi)) or not np.all(np.isfinite(eps)):
            raise InvalidPermittivityTable("non-finite entries")
        if xi[0] <= 0:
            raise InvalidPermittivityTable("xi must be positive")
        if np.any(np.diff(xi) <= 0):
            raise InvalidPermittivityTable("xi must be strictly increasing")
        if np.any(eps <= 1):
            raise InvalidPermittivityTable("eps(i xi) must exceed 1")
        if np.any(np.diff(eps) > 0):
            raise InvalidPermittivityTable("eps(i xi) must be non-increasing in xi")

    @classmethod
    def from_csv(cls, path) -> "PermittivityTable":
        """Read a headerless ``xi_rad_per_s,eps_at_i_xi`` file; ``#`` starts a comment."""
        try:
            data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        except ValueError as exc:
            raise InvalidPermittivityTable(str(exc)) from exc
        if data.shape[1] != 2:
            raise InvalidPermittivityTable(f"expected 2 columns, found {data.shape[1]}")
        return cls(data[:, 0], data[:, 1])

    def eps_minus_one(self, xi, low_freq_omega_p: Optional[float] = None):
        """Log-log interpolated eps(i xi) - 1 with plasma-like extensions at both ends."""
        xi = np.asarray(xi, dtype=float)
        lo, hi = self.xi[0], self.xi[-1]
        if np.any(xi < lo) and low_freq_omega_p is None:
            raise TableRangeExceeded(f"xi below table start {lo:.3e} rad/s and no low-frequency extension")
        logx = np.log(np.clip(xi, lo, hi))
        out = np.exp(np.interp(logx, np.log(self.xi), np.log(self.eps - 1.0)))
        tail = (self.eps[-1] - 1.0) * hi**2
        with np.errstate(divide="ignore"):
            out = np.where(xi > hi, tail / xi**2, out)
            if low_freq_omega_p is not None:
                out = np.where(xi < lo, low_freq_omega_p**2 / xi**2, out)
        return out

    def summary(self) -> dict:
        return {
            "rows": int(len(self.xi)),
            "xi_min_rad_per_s": float(self.xi[0]),
            "xi_max_rad_per_s": float(self.xi[-1]),
            "eps_max": float(self.eps[0]),
            "eps_min": float(self.eps[-1]),
            "monotone_non_increasing": True,
        }


@dataclass(frozen=True)
class PerfectConductor:
    label = "perfect"


@dataclass(frozen=True)
class Plasma:
    omega_p: float = GOLD_OMEGA_P
    label = "plasma"

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("omega_p must be positive")


@dataclass(frozen=True)
class PlasmaNoTEZero(Plasma):
    """Plasma model with the n = 0 transverse-electric term removed."""

    label = "plasma-no-te0"


@dataclass(frozen=True)
class Tabulated:
    table: PermittivityTable
    low_freq_omega_p: Optional[float] = None
    label = "tabulated"


DielectricModel = Union[PerfectConductor, Plasma, PlasmaNoTEZero, Tabulated]


@dataclass(frozen=True)
class ThermalState:
    T: float = 0.0

    def __post_init__(self):
        if not (self.T >= 0 and math.isfinite(self.T)):
            raise ValueError(f"temperature must be >= 0, got {self.T!r}")


@dataclass
class MatsubaraSum:
    n: np.ndarray
    xi: np.ndarray
    contributions: np.ndarray  # J/m^2, n = 0 already halved

    @property
    def total(self) -> float:
        return float(math.fsum(self.contributions))


def _one_minus_r2(model, xi, q, zero_mode):
    """Return (1 - r_TM^2, 1 - r_TE^2) on the (xi, q) grid.

    Computed as 4AB/(A+B)^2 for r = (A-B)/(A+B), which stays accurate when
    r^2 is close to 1.
    """
    if isinstance(model, PerfectConductor):
        z = np.zeros_like(q)
        return z, z
    if isinstance(model, Plasma):
        wp2 = (model.omega_p / C) ** 2
        kn = np.sqrt(q**2 + wp2)
        with np.errstate(divide="ignore", invalid="ignore"):
            eps = 1.0 + (model.omega_p / xi) ** 2
    elif isinstance(model, Tabulated):
        em1 = model.table.eps_minus_one(np.where(zero_mode, 1.0, xi).ravel(), model.low_freq_omega_p)
        em1 = em1.reshape(np.shape(xi))
        if np.any(zero_mode) and model.low_freq_omega_p is None:
            raise TableRangeExceeded("the n = 0 term needs a low-frequency plasma extension")
        wp0 = model.low_freq_omega_p or 0.0
        extra = np.where(zero_mode, (wp0 / C) ** 2, em1 * (xi / C) ** 2)
        kn = np.sqrt(q**2 + extra)
        eps = 1.0 + em1
    else:
        raise TypeError(f"unsupported dielectric model {model!r}")

    def omr2(A, B):
        return 4.0 * A * B / (A + B) ** 2

    te = omr2(q, kn)
    tm = np.where(zero_mode, 0.0, omr2(np.where(zero_mode, 1.0, eps) * q, kn))
    if isinstance(model, PlasmaNoTEZero):
        te = np.where(zero_mode, 1.0, te)
    return tm, te


def _u_integrals(l, model, xi):
    """int u [ln(1 - r_TM^2 e^-u) + ln(1 - r_TE^2 e^-u)] du from u0 = 2 xi l / c, per xi."""
    xi = np.asarray(xi, dtype=float)[:, None]
    u = 2.0 * xi * l / C + _T_NODES[None, :]
    q = u / (2.0 * l)
    zero_mode = xi == 0.0
    tm, te = _one_minus_r2(model, xi, q, zero_mode)
    eu = np.exp(-u)
    base = -np.expm1(-u)
    f = u * (np.log(base + tm * eu) + np.log(base + te * eu))
    return f @ _T_WEIGHTS


def matsubara_terms(l: float, model: DielectricModel, thermal: ThermalState, n: np.ndarray) -> MatsubaraSum:
    n = np.asarray(n, dtype=np.int64)
    xi = 2.0 * math.pi * n * KB * thermal.T / HBAR
    contrib = KB * thermal.T / (2.0 * math.pi) / (4.0 * l * l) * _u_integrals(l, model, xi)
    contrib = np.where(n == 0, 0.5 * contrib, contrib)
    return MatsubaraSum(n, xi, contrib)


def _converged_length(contrib: np.ndarray) -> Optional[int]:
    # First index after which SUM_PATIENCE consecutive terms are each negligible.
    totals = np.abs(np.cumsum(contrib))
    small = np.abs(contrib) < SUM_RTOL * totals
    run = 0
    for i, s in enumerate(small):
        run = run + 1 if s else 0
        if run == SUM_PATIENCE:
            return i + 1
    return None


def _adaptive_sum(l, model, thermal):
    contrib = np.empty(0)
    block = 64
    while len(contrib) < N_MAX_CAP:
        n = np.arange(len(contrib), min(len(contrib) + block, N_MAX_CAP))
        contrib = np.concatenate([contrib, matsubara_terms(l, model, thermal, n).contributions])
        stop = _converged_length(contrib)
        if stop is not None:
            return contrib[:stop]
        block = min(2 * block, 65536)
    raise SumNonConvergence(f"Matsubara sum not converged after {N_MAX_CAP} terms at l={l:.3e} m")


def adaptive_n_max(l: float, model: DielectricModel, thermal: ThermalState) -> int:
    """Number of Matsubara terms (n = 0 .. n_max-1) needed by the truncation rule."""
    return len(_adaptive_sum(l, model, thermal))


def _zero_temperature_energy(l, model):
    # (hbar / 2 pi) int dxi replaces k_B T sum'; with s = 2 xi l / c:
    # E = hbar c / (32 pi^2 l^3) int_0^inf ds G(s).
    s = _T_NODES
    xi = s * C / (2.0 * l)
    G = _u_integrals(l, model, xi)
    return HBAR * C / (32.0 * math.pi**2 * l**3) * float(G @ _T_WEIGHTS)


def _uses_zero_t(model, thermal):
    return thermal.T < ZERO_T_ROUTE


def free_energy_pp(l: float, model: DielectricModel, thermal: ThermalState,
                   n_max: Optional[int] = None) -> float:
    """Plate-plate free energy per unit area, J/m^2 (negative).

    Temperatures below 1 K use the zero-temperature branch; for the perfect
    conductor that is the closed form.
    """
    if not l > 0:
        raise NonPositiveSeparation(f"separation must be > 0, got {l!r}")
    if _uses_zero_t(model, thermal):
        if isinstance(model, PerfectConductor):
            return energy_per_area_pp(l)
        return _zero_temperature_energy(l, model)
    if n_max is None:
        return float(math.fsum(_adaptive_sum(l, model, thermal)))
    return matsubara_terms(l, model, thermal, np.arange(n_max)).total


def _stencil_values(l, model, thermal, rel_step):
    h = rel_step * l
    pts = l + h * np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    if pts[0] <= 0:
        raise NonPositiveSeparation("stencil reaches non-positive separation")
    n_max = None
    if not _uses_zero_t(model, thermal):
        # One truncation for the whole stencil keeps the differences smooth.
        n_max = adaptive_n_max(pts[0], model, thermal)
    return h, [free_energy_pp(p, model, thermal, n_max=n_max) for p in pts]


def pressure_pp(l: float, model: DielectricModel, thermal: ThermalState,
                rel_step: float = STENCIL_STEP) -> float:
    """-dE/dl, N/m^2 (negative means attraction)."""
    if _uses_zero_t(model, thermal) and isinstance(model, PerfectConductor):
        if not l > 0:
            raise NonPositiveSeparation(f"separation must be > 0, got {l!r}")
        return -math.pi**2 * CONSTANTS.hbar_c / (240.0 * l**4)
    h, f = _stencil_values(l, model, thermal, rel_step)
    return -(f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)


def second_derivative_energy_pp(l: float, model: DielectricModel, thermal: ThermalState,
                                rel_step: float = STENCIL_STEP) -> float:
    """d^2E/dl^2, J/m^4."""
    if _uses_zero_t(model, thermal) and isinstance(model, PerfectConductor):
        if not l > 0:
            raise NonPositiveSeparation(f"separation must be > 0, got {l!r}")
        return -math.pi**2 * CONSTANTS.hbar_c / (60.0 * l**5)
    h, f = _stencil_values(l, model, thermal, rel_step)
    return (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)


def model_label(model: DielectricModel, thermal: ThermalState) -> str:
    return f"{model.label} T={thermal.T:g}K"


def lifshitz_profile(model: DielectricModel, thermal: ThermalState) -> PlatePlateEnergyProfile:
    return PlatePlateEnergyProfile(
        evaluate=lambda l: free_energy_pp(l, model, thermal),
        label=model_label(model, thermal),
        derivative=lambda l: -pressure_pp(l, model, thermal),
    )
