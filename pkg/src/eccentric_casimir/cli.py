"""Command-line front end.

Lengths must carry a unit suffix (nm, um, mm, cm, m), e.g. ``--a 100um``.
Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import logging
import math
import re
import sys
import warnings
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from . import __version__
from .core import (
    CONSTANTS,
    CylinderPlane,
    EccentricCylinders,
    GeometryError,
    InnerNotInsideOuter,
    NonPositiveLength,
    ParallelPlates,
    RegimeWarning,
    SpherePlane,
    SurfacesIntersect,
    validate_geometry,
)
from .corrections import GEOMETRY_KINDS, CurveParams, correction_curve, corrected_force_eccentric
from .electrostatics import ElectrostaticConfig, electrostatic_energy_pfa, electrostatic_force
from .ideal_forces import (
    SIGN_CONVENTION,
    force_cylinder_plane,
    force_eccentric_closed_form,
    force_eccentric_large,
    force_eccentric_small,
    force_pp,
    force_sp,
)
from .lifshitz import (
    InvalidPermittivityTable,
    PerfectConductor,
    PermittivityTable,
    Plasma,
    PlasmaNoTEZero,
    SumNonConvergence,
    Tabulated,
    TableRangeExceeded,
    ThermalState,
    free_energy_pp,
    lifshitz_profile,
    pressure_pp,
)
from .pfa import (
    ProfileEvaluationFailure,
    QuadratureNonConvergence,
    StencilOutOfDomain,
    cylinder_plane_pfa,
    force_from_energy,
    ideal_profile,
)
from .planner import ResonatorSpec, ShiftTooLarge, casimir_spring_constant, compare_geometries, frequency_shift

log = logging.getLogger(__name__)

GEOMETRY_ALIASES = {"ecc": "eccentric", "cp": "cylinder-plane", "pp": "plane-plane", "sp": "sphere-plane"}
MODELS = ("ideal", "perfect", "plasma", "plasma-no-te0", "tabulated")

_NUMBER = r"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
_LENGTH_UNITS = {"nm": 1e-9, "um": 1e-6, "µm": 1e-6, "mm": 1e-3, "cm": 1e-2, "m": 1.0}
_AREA_UNITS = {"nm2": 1e-18, "um2": 1e-12, "µm2": 1e-12, "mm2": 1e-6, "cm2": 1e-4, "m2": 1.0}
_VOLT_UNITS = {"uV": 1e-6, "µV": 1e-6, "mV": 1e-3, "V": 1.0, "": 1.0}
_MASS_UNITS = {"ug": 1e-9, "µg": 1e-9, "mg": 1e-6, "g": 1e-3, "kg": 1.0, "": 1.0}


class UsageError(Exception):
    pass


def _with_units(text: str, units: dict, what: str) -> float:
    m = re.fullmatch(_NUMBER + r"\s*(\S*)", text.strip())
    if not m or m.group(2) not in units:
        allowed = ", ".join(u for u in units if u) or "none"
        raise argparse.ArgumentTypeError(f"invalid {what} {text!r} (unit suffixes: {allowed})")
    return float(m.group(1)) * units[m.group(2)]


def parse_length(text: str) -> float:
    return _with_units(text, _LENGTH_UNITS, "length")


def parse_area(text: str) -> float:
    return _with_units(text, _AREA_UNITS, "area")


def parse_voltage(text: str) -> float:
    return _with_units(text, _VOLT_UNITS, "voltage")


def parse_mass(text: str) -> float:
    return _with_units(text, _MASS_UNITS, "mass")


def fmt(x) -> str:
    return f"{x:.9e}"


@dataclass
class RunConfig:
    """Everything needed to reproduce one run; lengths in meters."""

    subcommand: str
    geometry: Optional[str] = None
    a: Optional[float] = None
    b: Optional[float] = None
    L: Optional[float] = None
    eps: Optional[float] = None
    d: Optional[float] = None
    A: Optional[float] = None
    R: Optional[float] = None
    model: str = "ideal"
    T: float = 300.0
    omega_p: float = CONSTANTS.ev_to_rad_per_s(9.0)
    table: Optional[str] = None
    formula: str = "closed"
    cp_form: str = "asymptotic"
    rtol: float = 1e-9
    M: Optional[float] = None
    omega0: Optional[float] = None
    V: Optional[float] = None
    electrostatic: bool = False
    compare: bool = False
    all_geometries: bool = False
    d_min: Optional[float] = None
    d_max: Optional[float] = None
    points: int = 25
    spacing: str = "linear"
    threads: int = 1
    format: str = "json"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


def _model(cfg: RunConfig):
    if cfg.model == "ideal":
        return PerfectConductor(), ThermalState(0.0)
    thermal = ThermalState(cfg.T)
    if cfg.model == "perfect":
        return PerfectConductor(), thermal
    if cfg.model == "plasma":
        return Plasma(cfg.omega_p), thermal
    if cfg.model == "plasma-no-te0":
        return PlasmaNoTEZero(cfg.omega_p), thermal
    if cfg.model == "tabulated":
        if cfg.table is None:
            raise UsageError("--table: required with --model tabulated")
        return Tabulated(PermittivityTable.from_csv(cfg.table), cfg.omega_p), thermal
    raise UsageError(f"--model: unknown model {cfg.model!r}")


def _need(cfg: RunConfig, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(", ".join(f"--{n}" for n in missing) + ": required")


def _geometry_error(exc: GeometryError) -> UsageError:
    if isinstance(exc, SurfacesIntersect):
        return UsageError(f"--eps: {exc}")
    if isinstance(exc, InnerNotInsideOuter):
        return UsageError(f"--b: {exc}")
    if isinstance(exc, NonPositiveLength):
        name = str(exc).split()[0]
        return UsageError(f"--{name}: {exc}")
    return UsageError(str(exc))


@contextlib.contextmanager
def _collect_warnings(sink: list):
    # Regime warnings belong in the output record, not on stderr.
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RegimeWarning)
        yield
    for w in caught:
        if issubclass(w.category, RegimeWarning):
            sink.append(str(w.message))
        else:
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)


def _eccentric(cfg):
    _need(cfg, "a", "b", "L")
    return EccentricCylinders(cfg.a, cfg.b, cfg.L, cfg.eps or 0.0)


def run_force(cfg: RunConfig) -> tuple[dict, dict]:
    kind = GEOMETRY_ALIASES.get(cfg.geometry, cfg.geometry)
    model, thermal = _model(cfg)
    ideal = cfg.model == "ideal"
    out: dict = {}
    meta: dict = {}
    if kind == "eccentric":
        g = _eccentric(cfg)
        out["warnings"] = validate_geometry(g).warnings
        if cfg.formula == "pfa":
            prof = ideal_profile() if ideal else lifshitz_profile(model, thermal)
            res = force_from_energy(g, prof, rtol=cfg.rtol)
            out.update(force_N=res.value, abs_error_estimate_N=res.abs_error_estimate)
            meta["formula"] = f"proximity quadrature, -dE_I/d(eps), profile {prof.label}"
        elif ideal:
            fn = {"closed": force_eccentric_closed_form, "small": force_eccentric_small,
                  "large": force_eccentric_large}.get(cfg.formula)
            if fn is None:
                raise UsageError(f"--formula: {cfg.formula!r} not available for the ideal model")
            res = fn(g)
            out.update(force_N=res.force, F0_magnitude_N=res.F0_magnitude,
                       force_over_F0=res.force / res.F0_magnitude)
            out["warnings"] += res.warnings
            meta["formula"] = res.formula.value
        else:
            with _collect_warnings(out["warnings"]):
                out["force_N"] = corrected_force_eccentric(g, model, thermal)
            out["spring_constant_N_per_m"] = casimir_spring_constant(g, model, thermal)
            meta["formula"] = "small-offset curvature law, -eps pi L a E''(b-a)"
        out.update(eps_tilde=g.eps_tilde, gap_m=g.gap)
    elif kind == "cylinder-plane":
        _need(cfg, "a", "L", "d")
        g = CylinderPlane(cfg.a, cfg.L, cfg.d)
        out["warnings"] = validate_geometry(g).warnings
        if ideal and cfg.formula != "pfa":
            out["force_N"] = force_cylinder_plane(g, cfg.cp_form)
            meta["formula"] = f"ideal cylinder-plane ({cfg.cp_form})"
        else:
            prof = ideal_profile() if ideal else lifshitz_profile(model, thermal)
            res = cylinder_plane_pfa(g, prof, rtol=cfg.rtol)
            out.update(force_N=res.value, abs_error_estimate_N=res.abs_error_estimate)
            meta["formula"] = f"proximity quadrature, profile {prof.label}"
    elif kind == "plane-plane":
        _need(cfg, "A", "d")
        g = ParallelPlates(cfg.A, cfg.d)
        out["warnings"] = []
        out["force_N"] = force_pp(g) if ideal else cfg.A * pressure_pp(cfg.d, model, thermal)
        meta["formula"] = "ideal plates" if ideal else "A * Lifshitz pressure"
    elif kind == "sphere-plane":
        _need(cfg, "R", "d")
        g = SpherePlane(cfg.R, cfg.d)
        out["warnings"] = validate_geometry(g).warnings
        out["force_N"] = force_sp(g) if ideal else 2 * math.pi * cfg.R * free_energy_pp(cfg.d, model, thermal)
        meta["formula"] = "ideal 2 pi R E_pp" if ideal else "2 pi R E_pp (Lifshitz)"
    else:
        raise UsageError(f"--geometry: unknown geometry {cfg.geometry!r}")
    return out, meta


def _d_grid(cfg: RunConfig):
    _need(cfg, "d_min", "d_max")
    if not 0 < cfg.d_min < cfg.d_max:
        raise UsageError("--d-min/--d-max: need 0 < d-min < d-max")
    if cfg.points < 2:
        raise UsageError("--points: need at least 2 points")
    if cfg.spacing == "log":
        return np.geomspace(cfg.d_min, cfg.d_max, cfg.points)
    return np.linspace(cfg.d_min, cfg.d_max, cfg.points)


def run_curve(cfg: RunConfig):
    model, thermal = _model(cfg)
    params = CurveParams(A=cfg.A or 1e-6, R=cfg.R or 100e-6, a=cfg.a or 100e-6, L=cfg.L or 5e-3)
    if cfg.all_geometries:
        kinds = list(GEOMETRY_KINDS)
    elif cfg.geometry:
        kinds = [GEOMETRY_ALIASES.get(cfg.geometry, cfg.geometry)]
        if kinds[0] not in GEOMETRY_KINDS:
            raise UsageError(f"--geometry: unknown geometry {cfg.geometry!r}")
    else:
        raise UsageError("--geometry: required unless --all-geometries is given")
    grid = _d_grid(cfg)
    return [correction_curve(k, params, model, thermal, grid, threads=cfg.threads) for k in kinds]


def run_plan(cfg: RunConfig) -> tuple[dict, dict]:
    out: dict = {}
    meta: dict = {}
    if cfg.compare:
        _need(cfg, "A", "a", "R", "L", "d")
        out.update(compare_geometries(cfg.A, cfg.a, cfg.R, cfg.L, cfg.d))
        meta["formula"] = "ideal closed forms"
    if cfg.electrostatic:
        _need(cfg, "a", "b", "L", "V")
        es = ElectrostaticConfig(_eccentric(cfg), cfg.V)
        out["warnings"] = []
        with _collect_warnings(out["warnings"]):
            out["electrostatic_force_N"] = electrostatic_force(es)
        out["electrostatic_force_quadrature_N"] = electrostatic_force(es, "quadrature")
        out["electrostatic_energy_J"] = electrostatic_energy_pfa(es)
        out["electrostatic_spring_constant_N_per_m"] = (
            CONSTANTS.eps0 * math.pi * cfg.V**2 * cfg.L * cfg.a / (cfg.b - cfg.a) ** 3)
    if not (cfg.compare or cfg.electrostatic) or cfg.M is not None or cfg.omega0 is not None:
        _need(cfg, "a", "b", "L", "M", "omega0")
        g = _eccentric(cfg)
        model, thermal = _model(cfg)
        res = ResonatorSpec(cfg.M, cfg.omega0)
        out["casimir_spring_constant_N_per_m"] = casimir_spring_constant(g, model, thermal)
        out["frequency_shift"] = frequency_shift(g, res, model, thermal)
        meta["frequency_shift_model"] = (
            "ideal: -F0/(2(b-a) M omega0^2)" if cfg.model == "ideal"
            else "generalized: spring constant pi L a |E''(b-a)| from the Lifshitz energy")
    return out, meta


def _metadata(extra: dict) -> dict:
    meta = {"version": __version__, "sign_convention": SIGN_CONVENTION}
    meta.update(extra)
    return meta


def _dump(obj, indent=0, exact=False) -> str:
    # Outputs use 10 significant digits; ``exact`` keeps full precision so
    # echoed inputs reproduce the run bit for bit.
    pad = "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps(str(obj))
        return f"{obj:.16e}" if exact else fmt(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, indent + 1, exact or k == 'inputs')}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + _dump(v, indent + 1, exact) for v in obj) + "\n" + "  " * indent + "]"
    if isinstance(obj, np.floating):
        return _dump(float(obj), indent, exact)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_record(cfg: RunConfig, outputs: dict, meta: dict) -> str:
    if cfg.format == "csv":
        flat = {k: v for k, v in outputs.items() if not isinstance(v, list)}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(flat.keys())
        w.writerow(fmt(v) if isinstance(v, float) else v for v in flat.values())
        for note in outputs.get("warnings", []):
            buf.write(f"# warning: {note}\n")
        return buf.getvalue()
    record = {"inputs": asdict(cfg), "outputs": outputs, "metadata": _metadata(meta)}
    return _dump(record) + "\n"


def render_curves(cfg: RunConfig, curves) -> str:
    with_kind = len(curves) > 1 or cfg.all_geometries
    if cfg.format == "json":
        outputs = {"curves": [
            {"geometry": c.geometry_kind, "model": c.model, "T_K": float(c.T),
             "rows": [{"d_m": r.d, "F_ideal_N": r.F_ideal, "F_corrected_N": r.F_corrected, "ratio": r.ratio}
                      for r in c.rows]}
            for c in curves]}
        return render_record(cfg, outputs, {"formula": "proximity approximation on the Lifshitz plate energy"})
    buf = io.StringIO()
    buf.write(f"# eccentric-casimir {__version__} correction curve, model={curves[0].model}\n")
    w = csv.writer(buf, lineterminator="\n")
    header = ["d_m", "F_ideal_N", "F_corrected_N", "ratio"]
    w.writerow((["geometry"] if with_kind else []) + header)
    for c in curves:
        for r in c.rows:
            row = [fmt(r.d), fmt(r.F_ideal), fmt(r.F_corrected), fmt(r.ratio)]
            w.writerow(([c.geometry_kind] if with_kind else []) + row)
    return buf.getvalue()


def run_ingest(path: str) -> dict:
    table = PermittivityTable.from_csv(path)
    return table.summary()


def execute(cfg: RunConfig) -> str:
    """Run a configuration and return the rendered output text."""
    try:
        if cfg.subcommand == "force":
            out, meta = run_force(cfg)
            return render_record(cfg, out, meta)
        if cfg.subcommand == "curve":
            return render_curves(cfg, run_curve(cfg))
        if cfg.subcommand in ("plan", "electrostatic"):
            if cfg.subcommand == "electrostatic":
                cfg.electrostatic = True
            out, meta = run_plan(cfg)
            return render_record(cfg, out, meta)
        if cfg.subcommand == "ingest-permittivity":
            return render_record(cfg, run_ingest(cfg.table), {"formula": "table validation"})
    except GeometryError as exc:
        raise _geometry_error(exc) from exc
    except (InvalidPermittivityTable, OSError) as exc:
        raise UsageError(f"--table: {exc}") from exc
    raise UsageError(f"unknown subcommand {cfg.subcommand!r}")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--output", "-o", default="-", help="output file (default stdout)")
    p.add_argument("--rtol", type=float, default=1e-9, help="quadrature relative tolerance")


def _model_args(p: argparse.ArgumentParser):
    p.add_argument("--model", choices=MODELS, default="ideal")
    p.add_argument("--T", type=float, default=300.0, help="temperature in K (ignored by --model ideal)")
    wp = p.add_mutually_exclusive_group()
    wp.add_argument("--omega-p-ev", type=float, default=None, help="plasma frequency in eV (default 9.0)")
    wp.add_argument("--omega-p-rad-s", type=float, default=None, help="plasma frequency in rad/s")
    p.add_argument("--table", default=None, help="permittivity table for --model tabulated")


def _geometry_args(p: argparse.ArgumentParser):
    p.add_argument("--a", type=parse_length, help="(inner) cylinder radius")
    p.add_argument("--b", type=parse_length, help="outer cylinder radius")
    p.add_argument("--L", type=parse_length, help="cylinder length")
    p.add_argument("--eps", type=parse_length, help="axis offset")
    p.add_argument("--d", type=parse_length, help="surface separation")
    p.add_argument("--A", type=parse_area, help="plate area, e.g. 1mm2")
    p.add_argument("--R", type=parse_length, help="sphere radius")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eccentric-casimir", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("force", help="force for one configuration")
    p.add_argument("--geometry", required=True, choices=sorted(GEOMETRY_ALIASES) + list(GEOMETRY_KINDS))
    _geometry_args(p)
    _model_args(p)
    p.add_argument("--formula", choices=("closed", "small", "large", "pfa"), default="closed")
    p.add_argument("--cp-form", choices=("asymptotic", "integral"), default="asymptotic")
    _common(p)

    p = sub.add_parser("curve", help="correction ratio versus distance")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--geometry", choices=sorted(GEOMETRY_ALIASES) + list(GEOMETRY_KINDS))
    g.add_argument("--all-geometries", action="store_true")
    _geometry_args(p)
    _model_args(p)
    p.add_argument("--d-min", type=parse_length, required=True)
    p.add_argument("--d-max", type=parse_length, required=True)
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--threads", type=int, default=1)
    _common(p)

    for name in ("plan", "electrostatic"):
        p = sub.add_parser(name, help="resonator frequency shift / electrostatic force"
                           if name == "plan" else "alias for plan --electrostatic")
        _geometry_args(p)
        _model_args(p)
        p.add_argument("--M", type=parse_mass, help="resonator effective mass (kg, or g/mg suffix)")
        p.add_argument("--omega0", type=float, help="resonator angular frequency, rad/s")
        p.add_argument("--V", type=parse_voltage, help="potential difference, e.g. 10mV")
        p.add_argument("--electrostatic", action="store_true")
        p.add_argument("--compare", action="store_true", help="plates / cylinder-plane / sphere-plane table")
        _common(p)

    p = sub.add_parser("ingest-permittivity", help="validate a permittivity table")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("rerun", help="repeat a run from the inputs block of a JSON output")
    p.add_argument("file")
    p.add_argument("--output", "-o", default="-")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.subcommand == "rerun":
        with open(args.file) as fh:
            return RunConfig.from_dict(json.load(fh)["inputs"])
    ns = vars(args).copy()
    if args.subcommand == "ingest-permittivity":
        ns["table"] = ns.pop("file")
    if ns.get("omega_p_rad_s") is not None:
        ns["omega_p"] = ns["omega_p_rad_s"]
    elif ns.get("omega_p_ev") is not None:
        ns["omega_p"] = CONSTANTS.ev_to_rad_per_s(ns["omega_p_ev"])
    if ns.get("format") is None:
        ns["format"] = "csv" if args.subcommand == "curve" else "json"
    return RunConfig.from_dict(ns)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors (and --help) this way
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = config_from_args(args)
        text = execute(cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureNonConvergence, SumNonConvergence, ProfileEvaluationFailure, StencilOutOfDomain,
            TableRangeExceeded, ShiftTooLarge, ArithmeticError) as exc:
        print(f"{parser.prog}: numerical failure: {exc}", file=sys.stderr)
        return 1
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
