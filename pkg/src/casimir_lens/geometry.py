"""Lens geometries, environment state and Matsubara frequencies.

The lens is a section of an elliptic cylinder (semiaxes A >= B, length L)
facing a plane plate: thickness h, width 2d, cylinder axis parallel to the
plate.  Three variants are supported: the symmetric lens (vertical semiaxis
B), a lens glued from two halves with different semiaxes, and a lens cut
from the cylinder at an angle phi and re-seated so its base is parallel to
the plate.
"""

import math
from dataclasses import dataclass, field
from typing import Union

from .constants import CONSTANTS, PhysicalConstants


def _require_positive(**lengths: float) -> None:
    for name, value in lengths.items():
        if not value > 0.0:
            raise ValueError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class EllipticLens:
    """Symmetric lens: semiaxis A along the plate, B normal to it.

    Parameters
    ----------
    A, B : float
        Horizontal and vertical semiaxes in m, A >= B.
    h, d : float
        Lens thickness and half-width in m, d <= A.
    L : float
        Cylinder length in m.
    """

    A: float
    B: float
    h: float
    d: float
    L: float

    def __post_init__(self) -> None:
        _require_positive(A=self.A, B=self.B, h=self.h, d=self.d, L=self.L)
        if self.A < self.B:
            raise ValueError("semiaxes must satisfy A >= B; rotate the lens instead")
        if self.d > self.A:
            raise ValueError("half-width d cannot exceed the semiaxis A")


@dataclass(frozen=True)
class TwoHalvesLens:
    """Lens glued from two halves with semiaxes (A1, B1) and (A2, B2).

    Both halves share the same thickness h, so the joint is smooth at the
    apex.  Fields mirror EllipticLens otherwise.
    """

    A1: float
    B1: float
    A2: float
    B2: float
    h: float
    d: float
    L: float

    def __post_init__(self) -> None:
        _require_positive(A1=self.A1, B1=self.B1, A2=self.A2, B2=self.B2,
                          h=self.h, d=self.d, L=self.L)
        if self.A1 < self.B1 or self.A2 < self.B2:
            raise ValueError("each half must satisfy A >= B")
        if self.d > min(self.A1, self.A2):
            raise ValueError("half-width d cannot exceed either semiaxis A")


@dataclass(frozen=True)
class RotatedLens:
    """Lens cut from the cylinder at angle phi and seated base-down.

    phi is the angle between the cut and the major axis, 0 <= phi <= pi/2.
    """

    A: float
    B: float
    phi: float
    h: float
    d: float
    L: float

    def __post_init__(self) -> None:
        _require_positive(A=self.A, B=self.B, h=self.h, d=self.d, L=self.L)
        if self.A < self.B:
            raise ValueError("semiaxes must satisfy A >= B")
        if not 0.0 <= self.phi <= math.pi / 2.0:
            raise ValueError("phi must lie in [0, pi/2]")


LensGeometry = Union[EllipticLens, TwoHalvesLens, RotatedLens]


def thickness_for_width(A: float, B: float, d: float) -> float:
    """Thickness of the cap cut from the cylinder at half-width d."""
    _require_positive(A=A, B=B, d=d)
    if d > A:
        raise ValueError("half-width d cannot exceed the semiaxis A")
    return B * (1.0 - math.sqrt(1.0 - (d / A) ** 2))


def width_for_thickness(A: float, B: float, h: float) -> float:
    """Half-width of the cap cut from the cylinder at thickness h <= B."""
    _require_positive(A=A, B=B, h=h)
    if h > B:
        raise ValueError("a cap thinner than the semiaxis is required (h <= B)")
    return (A / B) * math.sqrt(h * (2.0 * B - h))


def symmetric_lens(A: float, B: float, L: float, *, d: float | None = None,
                   h: float | None = None) -> EllipticLens:
    """Build a symmetric lens from either its width or its thickness.

    Exactly one of d, h may be given; the other is derived from the cylinder
    surface.  With neither given, d defaults to 0.9 A.
    """
    if d is not None and h is not None:
        return EllipticLens(A=A, B=B, h=h, d=d, L=L)
    if d is None:
        d = 0.9 * A if h is None else width_for_thickness(A, B, h)
    if h is None:
        h = thickness_for_width(A, B, d)
    return EllipticLens(A=A, B=B, h=h, d=d, L=L)


@dataclass(frozen=True)
class Environment:
    """Separation a (m) between lens apex and plate, temperature T (K)."""

    a: float
    T: float

    def __post_init__(self) -> None:
        if not self.a > 0.0:
            raise ValueError("separation a must be positive")
        if self.T < 0.0:
            raise ValueError("temperature T cannot be negative")


@dataclass(frozen=True)
class MatsubaraPoint:
    """Thermal frequency xi_l = 2 pi kB T l / hbar and its dimensionless form."""

    index: int
    xi: float  # rad / s
    zeta: float  # 2 a xi / c


def matsubara_point(index: int, env: Environment,
                    consts: PhysicalConstants = CONSTANTS) -> MatsubaraPoint:
    """Matsubara frequency number `index` for the given environment."""
    if index < 0:
        raise ValueError("Matsubara index must be >= 0")
    xi = 2.0 * math.pi * consts.kB * env.T * index / consts.hbar
    return MatsubaraPoint(index=index, xi=xi, zeta=2.0 * env.a * xi / consts.c)


# Ratio of curvature (or thickness) to separation above which the proximity
# force approximation degrades noticeably.
PFA_RATIO_WARN = 0.1


@dataclass
class ValidityReport:
    """Outcome of validate_geometry: hard errors, soft warnings, error estimate."""

    ok: bool
    hard_errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    a_over_B: float = 0.0
    a_over_h: float = 0.0
    pfa_error_estimate: float = 0.0


def _min_vertical_semiaxis(geom: LensGeometry) -> float:
    if isinstance(geom, TwoHalvesLens):
        return min(geom.B1, geom.B2)
    return geom.B


def validate_geometry(geom: LensGeometry, env: Environment) -> ValidityReport:
    """Check PFA applicability of a lens/environment combination.

    Nonpositive lengths are rejected by the dataclass constructors already;
    this re-checks them defensively and flags the soft conditions: the
    fractional PFA error is estimated as 0.3 * a/B and a warning is issued
    when a/B or a/h exceeds 0.1.
    """
    report = ValidityReport(ok=True)
    fields_to_check = {"a": env.a, "L": geom.L, "h": geom.h, "d": geom.d}
    if isinstance(geom, TwoHalvesLens):
        fields_to_check.update(A1=geom.A1, B1=geom.B1, A2=geom.A2, B2=geom.B2)
    else:
        fields_to_check.update(A=geom.A, B=geom.B)
    for name, value in fields_to_check.items():
        if not value > 0.0:
            report.hard_errors.append(f"{name} must be positive")
    if env.T < 0.0:
        report.hard_errors.append("T cannot be negative")
    if report.hard_errors:
        report.ok = False
        return report

    B = _min_vertical_semiaxis(geom)
    report.a_over_B = env.a / B
    report.a_over_h = env.a / geom.h
    report.pfa_error_estimate = 0.3 * report.a_over_B
    if report.a_over_B > PFA_RATIO_WARN:
        report.warnings.append(
            f"a/B = {report.a_over_B:.3g} exceeds {PFA_RATIO_WARN}; "
            f"PFA error estimate {report.pfa_error_estimate:.2%}")
    if report.a_over_h > PFA_RATIO_WARN:
        report.warnings.append(
            f"a/h = {report.a_over_h:.3g} exceeds {PFA_RATIO_WARN}; "
            "the lens is thin compared to the separation")
    return report
