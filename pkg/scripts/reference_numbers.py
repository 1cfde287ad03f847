"""Print the headline numbers of the reference cylinder scenario (CODATA 2018 constants)."""

from eccentric_casimir.core import EccentricCylinders
from eccentric_casimir.electrostatics import ElectrostaticConfig, electrostatic_force
from eccentric_casimir.ideal_forces import f0_magnitude, force_eccentric_closed_form, spring_constant_ideal
from eccentric_casimir.lifshitz import ThermalState
from eccentric_casimir.corrections import CurveParams, model_discrepancy
from eccentric_casimir.planner import ResonatorSpec, compare_geometries, frequency_shift

UM = 1e-6


def main():
    g = EccentricCylinders(100 * UM, 101 * UM, 5e-3)
    print(f"F0 magnitude            {f0_magnitude(g):.6e} N")
    print(f"spring constant         {spring_constant_ideal(g):.6e} N/m")
    half = force_eccentric_closed_form(g.with_epsilon(0.5 * UM))
    print(f"F/F0 at eps_tilde=0.5   {half.force / half.F0_magnitude:.6f}")
    print(f"frequency shift         {frequency_shift(g, ResonatorSpec(1e-6, 1e3)):.6e}")
    cmp = compare_geometries(A=1e-6, a=100 * UM, R=100 * UM, L=5e-3, d=1 * UM)
    for k, v in cmp.items():
        print(f"{k:<23} {v:.6e}")
    es = electrostatic_force(ElectrostaticConfig(g.with_epsilon(0.1 * UM), 10e-3))
    print(f"electrostatic, 10 mV    {es:.6e} N (eps = 0.1 um)")
    r = model_discrepancy("plane-plane", CurveParams(), 7 * UM, ThermalState(300.0))
    print(f"plasma / no-TE0 at 7um  {r:.4f}")


if __name__ == "__main__":
    main()
