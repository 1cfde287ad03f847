"""Write thermal + conductivity correction ratios for all four geometries.

Usage: python3 scripts/correction_curves.py [outdir]

Produces one CSV per dielectric model (plasma, plasma without the TE zero
mode) at T = 300 K on d in [0.5, 7] um, ready for an external plotter.
"""

import sys
from pathlib import Path

import numpy as np

from eccentric_casimir.corrections import GEOMETRY_KINDS, CurveParams, correction_curve
from eccentric_casimir.lifshitz import GOLD_OMEGA_P, Plasma, PlasmaNoTEZero, ThermalState


def main(outdir="curves"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    grid = np.linspace(0.5e-6, 7e-6, 27)
    params = CurveParams(a=100e-6, R=100e-6)
    thermal = ThermalState(300.0)
    for model in (Plasma(GOLD_OMEGA_P), PlasmaNoTEZero(GOLD_OMEGA_P)):
        curves = {k: correction_curve(k, params, model, thermal, grid, threads=4) for k in GEOMETRY_KINDS}
        path = out / f"ratios_{model.label}.csv"
        with open(path, "w") as fh:
            fh.write("d_um," + ",".join(GEOMETRY_KINDS) + "\n")
            for i, d in enumerate(grid):
                fh.write(f"{d * 1e6:.4f}," + ",".join(f"{curves[k].rows[i].ratio:.6f}" for k in GEOMETRY_KINDS) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main(*sys.argv[1:])
