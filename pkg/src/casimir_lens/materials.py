"""Dielectric permittivity along the imaginary frequency axis and the
reflection coefficients entering the Lifshitz-type sums.

All models return eps(i xi) as a real number >= 1.  The reflection
coefficients are expressed in the dimensionless variables (zeta, v) with
zeta = 2 a xi / c and v >= zeta; the zero-frequency terms have dedicated
analytic branches because the zeta -> 0 limit differs between models.
"""

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .constants import CONSTANTS, ev_to_rad_per_s

# Gold parameters commonly used with the Drude / plasma models.
GOLD_PLASMA_EV = 9.0
GOLD_GAMMA_EV = 0.035


@dataclass(frozen=True)
class IdealMetal:
    """Perfect reflector: eps = +inf, |r| = 1 for both polarizations."""


@dataclass(frozen=True)
class Plasma:
    """Lossless plasma model eps(i xi) = 1 + omega_p^2 / xi^2."""

    omega_p: float  # rad / s

    def __post_init__(self) -> None:
        if not self.omega_p > 0.0:
            raise ValueError("omega_p must be positive")


@dataclass(frozen=True)
class Drude:
    """Dissipative metal eps(i xi) = 1 + omega_p^2 / (xi (xi + gamma))."""

    omega_p: float  # rad / s
    gamma: float  # rad / s

    def __post_init__(self) -> None:
        if not self.omega_p > 0.0 or not self.gamma > 0.0:
            raise ValueError("omega_p and gamma must be positive")


@dataclass(frozen=True)
class Tabulated:
    """Permittivity sampled on an imaginary-frequency grid.

    Interpolation is linear in log-log space.  The grid must be strictly
    increasing and eps must be >= 1 and non-increasing (a causal response
    decays toward 1 at high frequency).  Queries outside the grid raise.

    At zero frequency the table cannot express a metallic divergence, so the
    dedicated zeta = 0 branch clamps eps to the lowest tabulated value
    (dielectric-like limit: finite r_TM, r_TE = 0).
    """

    xi_grid: np.ndarray
    eps_grid: np.ndarray
    _log_xi: np.ndarray = field(init=False, repr=False, compare=False)
    _log_eps: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        xi = np.asarray(self.xi_grid, dtype=float)
        eps = np.asarray(self.eps_grid, dtype=float)
        if xi.ndim != 1 or xi.size < 2 or eps.shape != xi.shape:
            raise ValueError("xi_grid and eps_grid must be 1-D arrays of equal length >= 2")
        if not np.all(xi > 0.0):
            raise ValueError("tabulated frequencies must be positive")
        if not np.all(np.diff(xi) > 0.0):
            raise ValueError("tabulated frequency grid must be strictly increasing")
        if not np.all(eps >= 1.0):
            raise ValueError("tabulated eps(i xi) must be >= 1")
        if np.any(np.diff(eps) > 0.0):
            raise ValueError("tabulated eps(i xi) must decrease monotonically toward 1")
        object.__setattr__(self, "xi_grid", xi)
        object.__setattr__(self, "eps_grid", eps)
        object.__setattr__(self, "_log_xi", np.log(xi))
        object.__setattr__(self, "_log_eps", np.log(eps))

    @classmethod
    def from_file(cls, path) -> "Tabulated":
        """Load a two-column text table: xi in rad/s, eps(i xi).

        Blank lines and '#' comments are ignored.  Malformed lines raise a
        ValueError naming the offending line number.
        """
        xis: list[float] = []
        epss: list[float] = []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise ValueError(
                        f"{path}:{lineno}: expected two columns, got {len(parts)}")
                try:
                    xis.append(float(parts[0]))
                    epss.append(float(parts[1]))
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from None
        if len(xis) < 2:
            raise ValueError(f"{path}: at least two data rows are required")
        return cls(np.asarray(xis), np.asarray(epss))


PermittivityModel = Union[IdealMetal, Plasma, Drude, Tabulated]


def gold_drude() -> Drude:
    """Drude model with the standard gold parameters (9 eV, 0.035 eV)."""
    return Drude(omega_p=ev_to_rad_per_s(GOLD_PLASMA_EV),
                 gamma=ev_to_rad_per_s(GOLD_GAMMA_EV))


def gold_plasma() -> Plasma:
    """Plasma model with the standard gold plasma frequency (9 eV)."""
    return Plasma(omega_p=ev_to_rad_per_s(GOLD_PLASMA_EV))


def epsilon_at_imaginary(model: PermittivityModel, xi: float) -> float:
    """Permittivity eps(i xi) for xi > 0; IdealMetal returns +inf.

    Tabulated models raise on queries outside their grid rather than
    extrapolating silently.
    """
    if not xi > 0.0:
        raise ValueError("xi must be positive; zero frequency has dedicated branches")
    if isinstance(model, IdealMetal):
        return math.inf
    if isinstance(model, Plasma):
        return 1.0 + (model.omega_p / xi) ** 2
    if isinstance(model, Drude):
        return 1.0 + model.omega_p ** 2 / (xi * (xi + model.gamma))
    if isinstance(model, Tabulated):
        if xi < model.xi_grid[0] or xi > model.xi_grid[-1]:
            raise ValueError(
                f"xi = {xi:.6g} outside the tabulated range "
                f"[{model.xi_grid[0]:.6g}, {model.xi_grid[-1]:.6g}]")
        return float(np.exp(np.interp(math.log(xi), model._log_xi, model._log_eps)))
    raise TypeError(f"unknown permittivity model {model!r}")


@dataclass(frozen=True)
class ReflectionPair:
    """TM and TE amplitude reflection coefficients at one (zeta, v) point."""

    r_tm: float
    r_te: float


def reflection_coefficients(model: PermittivityModel, zeta: float, v: float,
                            a: float) -> ReflectionPair:
    """Reflection coefficients in the (zeta, v) variables.

    For zeta > 0 both coefficients follow from eps(i xi) with
    xi = c zeta / (2 a); the v >= zeta sector is the physical one.  At
    zeta = 0 the limit depends on the model:

    * IdealMetal: (1, -1) at any v.
    * Drude: (1, 0) -- dissipation removes the zero-frequency TE mode.
    * Plasma: r_TM = 1 and a finite r_TE set by 2 a omega_p / c.
    * Tabulated: dielectric-like, eps clamped to its lowest-frequency value.

    Parameters
    ----------
    model : PermittivityModel
    zeta : float
        Dimensionless Matsubara frequency 2 a xi / c, >= 0.
    v : float
        Dimensionless integration variable, v >= zeta and v > 0.
    a : float
        Separation in m (enters through the dimensionless plasma frequency).
    """
    if not v > 0.0:
        raise ValueError("v must be positive")
    if zeta < 0.0 or v < zeta:
        raise ValueError("require 0 <= zeta <= v")
    if not a > 0.0:
        raise ValueError("separation a must be positive")

    if isinstance(model, IdealMetal):
        return ReflectionPair(1.0, -1.0)

    if zeta == 0.0:
        if isinstance(model, Drude):
            return ReflectionPair(1.0, 0.0)
        if isinstance(model, Plasma):
            wp = 2.0 * a * model.omega_p / CONSTANTS.c
            root = math.hypot(v, wp)
            return ReflectionPair(1.0, (v - root) / (v + root))
        # Tabulated: finite dielectric limit
        eps0 = float(model.eps_grid[0])
        return ReflectionPair((eps0 - 1.0) / (eps0 + 1.0), 0.0)

    eps = epsilon_at_imaginary(model, CONSTANTS.c * zeta / (2.0 * a))
    root = math.sqrt(v * v + (eps - 1.0) * zeta * zeta)
    return ReflectionPair((eps * v - root) / (eps * v + root),
                          (v - root) / (v + root))


# ---------------------------------------------------------------------------
# vectorized squared coefficients for the engine


def reflection_sq_grid(model: PermittivityModel, zeta: float, v: np.ndarray,
                       a: float):
    """(r_TM^2, r_TE^2) over an array of v values at fixed zeta >= 0."""
    if zeta == 0.0:
        return reflection_sq_zero(model, v, a)
    if isinstance(model, IdealMetal):
        one = np.ones_like(v)
        return one, one
    eps = epsilon_at_imaginary(model, CONSTANTS.c * zeta / (2.0 * a))
    root = np.sqrt(v * v + (eps - 1.0) * zeta * zeta)
    r_tm = (eps * v - root) / (eps * v + root)
    r_te = (v - root) / (v + root)
    return r_tm * r_tm, r_te * r_te


def reflection_sq_zero(model: PermittivityModel, v: np.ndarray, a: float):
    """(r_TM^2, r_TE^2) on the zero-frequency branch."""
    one = np.ones_like(v)
    if isinstance(model, IdealMetal):
        return one, one
    if isinstance(model, Drude):
        return one, np.zeros_like(v)
    if isinstance(model, Plasma):
        wp = 2.0 * a * model.omega_p / CONSTANTS.c
        root = np.hypot(v, wp)
        r_te = (v - root) / (v + root)
        return one, r_te * r_te
    eps0 = float(model.eps_grid[0])
    r = (eps0 - 1.0) / (eps0 + 1.0)
    return np.full_like(v, r * r), np.zeros_like(v)
