"""CODATA constants and unit conversions (SI throughout)."""

BOLTZMANN = 1.380649e-23          # J/K
HBAR = 1.054571817e-34            # J s
SPEED_OF_LIGHT = 2.99792458e8     # m/s
AVOGADRO = 6.02214076e23          # 1/mol

AIR_MOLAR_MASS = 28.97e-3         # kg/mol
AIR_MOLECULE_MASS = AIR_MOLAR_MASS / AVOGADRO   # ~4.81e-26 kg

PA_PER_MBAR = 100.0


def mbar_to_pa(pressure_mbar: float) -> float:
    return pressure_mbar * PA_PER_MBAR


def pa_to_mbar(pressure_pa: float) -> float:
    return pressure_pa / PA_PER_MBAR
