"""Thermal Casimir force and force gradient for a cylindrical lens over a
plate, in the proximity-force approximation.

The force per lens is

    F(a, T) = -(kB T L / 4 sqrt(pi) a^2) * A / sqrt(2 a B)
              * sum'_l  int_{zeta_l}^inf dv v^{3/2}
                [Li_{1/2}(r_TM^2 e^-v) + Li_{1/2}(r_TE^2 e^-v)],

with zeta_l = 2 a xi_l / c the dimensionless Matsubara frequencies and the
primed sum halving the l = 0 term.  The gradient replaces v^{3/2} by v^{5/2},
Li_{1/2} by Li_{-1/2}, and one power of a in the prefactor.  At T = 0 the sum
goes over to (hbar c / 4 pi a) times an integral over continuous zeta.

Besides these production formulas the module carries two deliberately
unsimplified oracles that evaluate the underlying pressure integral over the
actual lens profile with explicit reflection-order sums; they retain the
finite width and thickness of the lens and are used to bound the error of
the leading-order expressions.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import CONSTANTS
from .geometry import (EllipticLens, Environment, LensGeometry, RotatedLens,
                       TwoHalvesLens, thickness_for_width)
from .materials import PermittivityModel, reflection_sq_grid
from .specfun import SQRT_PI, ConvergenceError, polylog_exp_grid


@dataclass(frozen=True)
class QuadratureSpec:
    """Convergence knobs for the frequency sum and the v-integrals.

    rel_tol drives the Matsubara stop rule (three consecutive terms below
    rel_tol/10 of the running sum); the fixed Gauss panels are converged to
    ~1e-13 by construction, comfortably beyond the 1e-8 default.  v_span is
    the practical upper limit of the v-integral measured from zeta_l; the
    integrand carries e^-v so 80 corresponds to a ~1e-35 cutoff error.
    """

    rel_tol: float = 1e-8
    l_max: int = 100_000
    v_span: float = 80.0
    n_max: int = 1_000_000

    def __post_init__(self) -> None:
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.l_max < 1 or self.n_max < 1:
            raise ValueError("l_max and n_max must be positive")
        if not self.v_span > 1.0:
            raise ValueError("v_span must exceed 1")


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class ForceResult:
    """Value in SI units with an error estimate and convergence metadata."""

    value: float
    est_abs_error: float
    terms_used: int
    mode: str  # "finiteT" or "zeroT"


@dataclass(frozen=True)
class RotationFactor:
    """Force reduction factor G and effective vertical extent H of a rotated lens."""

    G: float
    H: float


# ---------------------------------------------------------------------------
# quadrature grids

_PANEL_EDGES = (0.0, 2.0, 8.0, 20.0, 45.0, 80.0)
_PANEL_NODES = (48, 32, 32, 24, 16)


def _leggauss(n: int, _cache={}):
    if n not in _cache:
        _cache[n] = np.polynomial.legendre.leggauss(n)
    return _cache[n]


def _grid_from(zeta: float, span: float):
    """Gauss nodes and weights covering [zeta, zeta + span].

    The first panel is mapped through v = w^2 so that the half-integer
    powers the polylog kernels develop at small v are integrated exactly.
    """
    edges = [zeta + e * (span / _PANEL_EDGES[-1]) for e in _PANEL_EDGES]
    vs, ws = [], []
    for i, n in enumerate(_PANEL_NODES):
        x, w = _leggauss(n)
        lo, hi = edges[i], edges[i + 1]
        if i == 0:
            t0, t1 = math.sqrt(lo), math.sqrt(hi)
            t = 0.5 * (t1 - t0) * x + 0.5 * (t1 + t0)
            vs.append(t * t)
            ws.append(w * (t1 - t0) * t)
        else:
            vs.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
            ws.append(w * 0.5 * (hi - lo))
    return np.concatenate(vs), np.concatenate(ws)


# ---------------------------------------------------------------------------
# kernels:  integrand(v) given squared reflection coefficients

def _force_kernel(v, r_tm2, r_te2):
    return v ** 1.5 * (polylog_exp_grid(0.5, v, r_tm2)
                       + polylog_exp_grid(0.5, v, r_te2))


def _gradient_kernel(v, r_tm2, r_te2):
    return v ** 2.5 * (polylog_exp_grid(-0.5, v, r_tm2)
                       + polylog_exp_grid(-0.5, v, r_te2))


Kernel = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _frequency_integral(kernel: Kernel, model: PermittivityModel, zeta: float,
                        a: float, quad: QuadratureSpec) -> float:
    """One term of the Matsubara sum: the v-integral at fixed zeta."""
    v, w = _grid_from(zeta, quad.v_span)
    r_tm2, r_te2 = reflection_sq_grid(model, zeta, v, a)
    return float(np.sum(w * kernel(v, r_tm2, r_te2)))


_STOP_STREAK = 3


def _matsubara_sum(kernel: Kernel, env: Environment, model: PermittivityModel,
                   quad: QuadratureSpec):
    """Primed Matsubara sum of the v-integrals.

    Returns (sum, terms_used, tail_estimate).  Terms are accumulated in
    ascending l so results are bit-reproducible; the sum stops after
    _STOP_STREAK consecutive terms each contribute less than rel_tol/10.
    """
    a = env.a
    zeta1 = 4.0 * math.pi * a * CONSTANTS.kB * env.T / (CONSTANTS.hbar * CONSTANTS.c)
    total = 0.5 * _frequency_integral(kernel, model, 0.0, a, quad)
    terms = 1
    streak = 0
    prev = math.inf
    tail = 0.0
    for l in range(1, quad.l_max + 1):
        term = _frequency_integral(kernel, model, l * zeta1, a, quad)
        total += term
        terms += 1
        if abs(term) < quad.rel_tol / 10.0 * abs(total):
            streak += 1
            if streak >= _STOP_STREAK:
                ratio = min(abs(term) / prev, 0.97) if prev > 0.0 else 0.0
                tail = abs(term) * ratio / (1.0 - ratio)
                break
        else:
            streak = 0
        prev = abs(term) if term != 0.0 else prev
    else:
        raise ConvergenceError(
            f"Matsubara sum not converged within l_max = {quad.l_max}",
            partial=total)
    return total, terms, tail


def _zeta_integral(kernel: Kernel, env: Environment, model: PermittivityModel,
                   quad: QuadratureSpec):
    """Zero-temperature replacement of the sum: integral over continuous zeta."""
    z_nodes, z_weights = _grid_from(0.0, quad.v_span)
    total = 0.0
    for z, wz in zip(z_nodes, z_weights):
        total += wz * _frequency_integral(kernel, model, float(z), env.a, quad)
    return total, len(z_nodes)


# ---------------------------------------------------------------------------
# geometry prefactors

def _lens_shape_factor(geom: LensGeometry) -> float:
    """The A / sqrt(B) combination each variant contributes."""
    if isinstance(geom, EllipticLens):
        return geom.A / math.sqrt(geom.B)
    if isinstance(geom, TwoHalvesLens):
        return 0.5 * (geom.A1 / math.sqrt(geom.B1) + geom.A2 / math.sqrt(geom.B2))
    if isinstance(geom, RotatedLens):
        return geom.A / math.sqrt(geom.B) * rotation_factor(geom.A, geom.B, geom.phi).G
    raise TypeError(f"unknown lens geometry {geom!r}")


def _force_prefactor(geom: LensGeometry, env: Environment) -> float:
    a = env.a
    return -(CONSTANTS.kB * env.T * geom.L / (4.0 * SQRT_PI * a * a)
             * _lens_shape_factor(geom) / math.sqrt(2.0 * a))


def _gradient_prefactor(geom: LensGeometry, env: Environment) -> float:
    return -_force_prefactor(geom, env) / env.a


def _force_prefactor_t0(geom: LensGeometry, a: float) -> float:
    hc = CONSTANTS.hbar * CONSTANTS.c
    return -(hc * geom.L / (16.0 * math.pi * SQRT_PI * a ** 3)
             * _lens_shape_factor(geom) / math.sqrt(2.0 * a))


# ---------------------------------------------------------------------------
# public operations

def _finite_t(kernel: Kernel, prefactor: float, geom, env, model, quad) -> ForceResult:
    total, terms, tail = _matsubara_sum(kernel, env, model, quad)
    value = prefactor * total
    err = abs(prefactor) * tail + 1e-14 * abs(value)
    return ForceResult(value=value, est_abs_error=err, terms_used=terms,
                       mode="finiteT")


def casimir_force(geom: EllipticLens, env: Environment, model: PermittivityModel,
                  quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ForceResult:
    """Casimir force on a symmetric lens, negative for attraction.

    Parameters
    ----------
    geom : EllipticLens
    env : Environment
        Separation and temperature; T = 0 routes to the zero-temperature
        integral automatically.
    model : PermittivityModel
    quad : QuadratureSpec

    Returns
    -------
    ForceResult
        Force in N with error estimate and the number of frequency terms.
    """
    if not isinstance(geom, EllipticLens):
        raise TypeError("casimir_force expects a symmetric EllipticLens; "
                        "use the variant-specific functions otherwise")
    if env.T == 0.0:
        return zero_temperature_force(geom, env, model, quad)
    return _finite_t(_force_kernel, _force_prefactor(geom, env), geom, env,
                     model, quad)


def casimir_gradient(geom: EllipticLens, env: Environment,
                     model: PermittivityModel,
                     quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ForceResult:
    """Separation derivative dF/da of the lens force, positive for attraction."""
    if not isinstance(geom, EllipticLens):
        raise TypeError("casimir_gradient expects a symmetric EllipticLens")
    if env.T == 0.0:
        return zero_temperature_gradient(geom, env, model, quad)
    return _finite_t(_gradient_kernel, _gradient_prefactor(geom, env), geom,
                     env, model, quad)


def zero_temperature_force(geom: EllipticLens, env: Environment,
                           model: PermittivityModel,
                           quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ForceResult:
    """Casimir force at T = 0 (continuous frequency integral)."""
    total, nodes = _zeta_integral(_force_kernel, env, model, quad)
    pref = _force_prefactor_t0(geom, env.a)
    value = pref * total
    return ForceResult(value=value, est_abs_error=1e-10 * abs(value),
                       terms_used=nodes, mode="zeroT")


def zero_temperature_gradient(geom: EllipticLens, env: Environment,
                              model: PermittivityModel,
                              quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ForceResult:
    """Separation derivative of the force at T = 0."""
    total, nodes = _zeta_integral(_gradient_kernel, env, model, quad)
    pref = -_force_prefactor_t0(geom, env.a) / env.a
    value = pref * total
    return ForceResult(value=value, est_abs_error=1e-10 * abs(value),
                       terms_used=nodes, mode="zeroT")


def ideal_metal_force_t0(geom: EllipticLens, env: Environment) -> float:
    """Closed form for an ideal-metal lens at T = 0.

    F = -pi^3 L hbar c / (384 a^3) * A / sqrt(2 a B).  The numerical factor
    pi^3/384 equals (15/64 pi) * pi^4/90, i.e. the reflection-order sum
    collapses to zeta(4).
    """
    a = env.a
    return (-math.pi ** 3 * geom.L * CONSTANTS.hbar * CONSTANTS.c / (384.0 * a ** 3)
            * geom.A / math.sqrt(2.0 * a * geom.B))


def ideal_metal_gradient_t0(geom: EllipticLens, env: Environment) -> float:
    """Closed-form dF/da for an ideal-metal lens at T = 0.

    Differentiating the a^{-7/2} closed form gives
    7 pi^3 L hbar c / (768 a^4) * A / sqrt(2 a B), i.e. (7/2) |F| / a.
    """
    a = env.a
    return (7.0 * math.pi ** 3 * geom.L * CONSTANTS.hbar * CONSTANTS.c
            / (768.0 * a ** 4) * geom.A / math.sqrt(2.0 * a * geom.B))


def two_halves_force(geom: TwoHalvesLens, env: Environment,
                     model: PermittivityModel,
                     quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ForceResult:
    """Force on a lens glued from two halves.

    Equals half the sum of the two symmetric-lens forces; the frequency sum
    is shared, only the geometry factor changes.
    """
    if not isinstance(geom, TwoHalvesLens):
        raise TypeError("two_halves_force expects a TwoHalvesLens")
    if env.T == 0.0:
        total, nodes = _zeta_integral(_force_kernel, env, model, quad)
        value = _force_prefactor_t0(geom, env.a) * total
        return ForceResult(value, 1e-10 * abs(value), nodes, "zeroT")
    return _finite_t(_force_kernel, _force_prefactor(geom, env), geom, env,
                     model, quad)


def two_halves_gradient(geom: TwoHalvesLens, env: Environment,
                        model: PermittivityModel,
                        quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ForceResult:
    """Gradient dF/da for the two-halves lens."""
    if not isinstance(geom, TwoHalvesLens):
        raise TypeError("two_halves_gradient expects a TwoHalvesLens")
    if env.T == 0.0:
        total, nodes = _zeta_integral(_gradient_kernel, env, model, quad)
        value = -_force_prefactor_t0(geom, env.a) / env.a * total
        return ForceResult(value, 1e-10 * abs(value), nodes, "zeroT")
    return _finite_t(_gradient_kernel, _gradient_prefactor(geom, env), geom,
                     env, model, quad)


def rotation_factor(A: float, B: float, phi: float) -> RotationFactor:
    """Force reduction factor of a lens cut at angle phi.

    G = (B / H)^{3/2} with H = sqrt(A^2 sin^2 phi + B^2 cos^2 phi).  H is
    the vertical semi-extent of the tilted ellipse, and at leading PFA order
    the whole effect of the rotation collapses into this single factor.
    Any positive (A, B) pair is accepted so the phi -> phi + pi/2 axis-swap
    identity can be exercised directly.
    """
    if not A > 0.0 or not B > 0.0:
        raise ValueError("semiaxes must be positive")
    s, c = math.sin(phi), math.cos(phi)
    H = math.sqrt(A * A * s * s + B * B * c * c)
    return RotationFactor(G=(B / H) ** 1.5, H=H)


def rotated_force(geom: RotatedLens, env: Environment, model: PermittivityModel,
                  quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ForceResult:
    """Force on a lens cut at angle phi: the symmetric result scaled by G."""
    if not isinstance(geom, RotatedLens):
        raise TypeError("rotated_force expects a RotatedLens")
    if env.T == 0.0:
        total, nodes = _zeta_integral(_force_kernel, env, model, quad)
        value = _force_prefactor_t0(geom, env.a) * total
        return ForceResult(value, 1e-10 * abs(value), nodes, "zeroT")
    return _finite_t(_force_kernel, _force_prefactor(geom, env), geom, env,
                     model, quad)


def rotated_gradient(geom: RotatedLens, env: Environment,
                     model: PermittivityModel,
                     quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ForceResult:
    """Gradient dF/da for the rotated lens."""
    if not isinstance(geom, RotatedLens):
        raise TypeError("rotated_gradient expects a RotatedLens")
    if env.T == 0.0:
        total, nodes = _zeta_integral(_gradient_kernel, env, model, quad)
        value = -_force_prefactor_t0(geom, env.a) / env.a * total
        return ForceResult(value, 1e-10 * abs(value), nodes, "zeroT")
    return _finite_t(_gradient_kernel, _gradient_prefactor(geom, env), geom,
                     env, model, quad)


# ---------------------------------------------------------------------------
# brute-force oracles
#
# These evaluate the pressure integral over the true lens profile
# z(x) = a + B - sqrt(B^2 - B^2 x^2 / A^2) with the reflection-order series
# kept explicit, i.e. with none of the leading-order simplifications the
# production formulas rely on.  Exact variable changes only: the width
# integral is taken in z with z - a = u^2 (removing the inverse-sqrt edge
# factor), and u is rescaled by sqrt(a/v) so a fixed Gauss grid resolves the
# exponential weight at every v.

_SIGMA_NODES = 48
_SIGMA_CUT = 8.5  # e^{-sigma^2} ~ 3e-32
_N_BLOCK = 64
_N_CAP = 8192


def _order_series(rho: np.ndarray, rel_tol: float) -> np.ndarray:
    """sum_{n>=1} rho^n, summed term by term with truncation at rel_tol/10.

    rho is an array in [0, 1).  Blocks of explicit powers keep the series
    faithful to the reflection-order expansion; if a node is still not
    converged at the n-cap the exact geometric remainder of the same series
    is added (mathematically the continuation of the identical sum).
    """
    acc = np.zeros_like(rho)
    power = np.ones_like(rho)
    tol = rel_tol / 10.0
    n = 0
    while n < _N_CAP:
        for _ in range(_N_BLOCK):
            power = power * rho
            acc += power
        n += _N_BLOCK
        with np.errstate(invalid="ignore", divide="ignore"):
            rel = np.where(acc > 0.0, power / np.maximum(acc, 1e-300), 0.0)
        if np.all(rel * rho / np.maximum(1.0 - rho, 1e-300) < tol):
            return acc
    return acc + power * rho / (1.0 - rho)


def _oracle_width_integral(v: float, r_tm2: float, r_te2, a: float,
                           chord: float, u2_max: float, rel_tol: float) -> float:
    """Integral over the lens surface at fixed v:

    2 int_0^sqrt(u2_max) du (chord - u^2)/sqrt(2 chord - u^2)
        sum_n [ (r_TM^2 e^{-v(a+u^2)/a})^n + (TE term) ].

    Evaluated in the rescaled variable sigma = u sqrt(v/a) so the e^{-sigma^2}
    weight sits on a fixed grid regardless of v.
    """
    x, w = _leggauss(_SIGMA_NODES)
    smax = min(math.sqrt(u2_max * v / a), _SIGMA_CUT)
    sig = 0.5 * smax * (x + 1.0)
    wsig = w * 0.5 * smax
    u2 = a * sig * sig / v
    geo = 2.0 * (chord - u2) / np.sqrt(2.0 * chord - u2)
    decay = np.exp(-v - sig * sig)
    series = _order_series(r_tm2 * decay, rel_tol)
    if r_te2 != 0.0:
        series = series + _order_series(r_te2 * decay, rel_tol)
    return math.sqrt(a / v) * float(np.sum(wsig * geo * series))


def _oracle_sum(env: Environment, model: PermittivityModel, chord: float,
                u2_max: float, quad: QuadratureSpec):
    """Matsubara sum of  int dv v^2 * (width integral)  for the oracles."""
    a = env.a

    def v_integral(zeta: float) -> float:
        v_nodes, v_weights = _grid_from(zeta, quad.v_span)
        r_tm2, r_te2 = reflection_sq_grid(model, zeta, v_nodes, a)
        total = 0.0
        for v, wv, tm2, te2 in zip(v_nodes, v_weights, r_tm2, r_te2):
            total += wv * v * v * _oracle_width_integral(
                float(v), float(tm2), float(te2), a, chord, u2_max, quad.rel_tol)
        return total

    zeta1 = 4.0 * math.pi * a * CONSTANTS.kB * env.T / (CONSTANTS.hbar * CONSTANTS.c)
    total = 0.5 * v_integral(0.0)
    terms = 1
    streak = 0
    for l in range(1, quad.l_max + 1):
        term = v_integral(l * zeta1)
        total += term
        terms += 1
        if abs(term) < quad.rel_tol / 10.0 * abs(total):
            streak += 1
            if streak >= _STOP_STREAK:
                break
        else:
            streak = 0
    else:
        raise ConvergenceError("oracle Matsubara sum not converged", partial=total)
    return total, terms


def direct_pfa_force_oracle(geom: EllipticLens, env: Environment,
                            model: PermittivityModel,
                            quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ForceResult:
    """Unsimplified PFA force: plate pressure integrated over the real profile.

    Keeps the finite width 2d (through the thickness of the cap it subtends)
    and the full curvature of the surface; no small-a/B expansion.  Used to
    quantify the error of casimir_force, which should agree within a few
    times 0.3 a/B.
    """
    if not isinstance(geom, EllipticLens):
        raise TypeError("direct_pfa_force_oracle expects an EllipticLens")
    if env.T == 0.0:
        raise ValueError("the oracle is defined for T > 0")
    h_d = thickness_for_width(geom.A, geom.B, geom.d)
    total, terms = _oracle_sum(env, model, geom.B, h_d, quad)
    pref = -(CONSTANTS.kB * env.T * geom.L * geom.A
             / (4.0 * math.pi * env.a ** 3 * geom.B))
    value = pref * total
    return ForceResult(value=value, est_abs_error=quad.rel_tol * abs(value),
                       terms_used=terms, mode="finiteT")


def rotated_direct_oracle(geom: RotatedLens, env: Environment,
                          model: PermittivityModel,
                          quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ForceResult:
    """Unsimplified force on the rotated lens.

    Same pressure integral taken over the tilted-cut profile, whose vertical
    chord is 2H; requires h <= 2H so the surface parameterization stays
    single-valued.  At phi = 0 this reduces exactly to the symmetric oracle.
    """
    if not isinstance(geom, RotatedLens):
        raise TypeError("rotated_direct_oracle expects a RotatedLens")
    if env.T == 0.0:
        raise ValueError("the oracle is defined for T > 0")
    H = rotation_factor(geom.A, geom.B, geom.phi).H
    if geom.h > 2.0 * H:
        raise ValueError("lens thickness exceeds the vertical chord 2H of the cut")
    total, terms = _oracle_sum(env, model, H, geom.h, quad)
    pref = -(CONSTANTS.kB * env.T * geom.L * geom.A * geom.B
             / (4.0 * math.pi * env.a ** 3 * H * H))
    value = pref * total
    return ForceResult(value=value, est_abs_error=quad.rel_tol * abs(value),
                       terms_used=terms, mode="finiteT")


__all__ = [
    "QuadratureSpec", "DEFAULT_QUADRATURE", "ForceResult", "RotationFactor",
    "casimir_force", "casimir_gradient", "zero_temperature_force",
    "zero_temperature_gradient", "ideal_metal_force_t0",
    "ideal_metal_gradient_t0", "two_halves_force", "two_halves_gradient",
    "rotation_factor", "rotated_force", "rotated_gradient",
    "direct_pfa_force_oracle", "rotated_direct_oracle",
]
