"""Physical constants used throughout the package.

Values are pinned to CODATA 2018 so that results are reproducible regardless
of the installed scipy version (scipy switched its bundled tables to CODATA
2022, which moves eps0 in the tenth digit).
"""

from dataclasses import dataclass

# CODATA 2018
HBAR = 1.054_571_817e-34  # reduced Planck constant, J s
C = 299_792_458.0  # speed of light, m / s
K_B = 1.380_649e-23  # Boltzmann constant, J / K
EPS0 = 8.854_187_8128e-12  # vacuum permittivity, F / m
ELECTRON_VOLT = 1.602_176_634e-19  # J per eV


@dataclass(frozen=True)
class PhysicalConstants:
    """Bundle of the constants the formulas depend on (SI)."""

    hbar: float = HBAR
    c: float = C
    kB: float = K_B
    eps0: float = EPS0


CONSTANTS = PhysicalConstants()


def ev_to_rad_per_s(energy_ev: float) -> float:
    """Convert a photon energy in eV to an angular frequency in rad/s."""
    return energy_ev * ELECTRON_VOLT / HBAR
