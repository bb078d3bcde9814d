"""Frequency response of the lens mounted as a torsional/flexural oscillator.

The Casimir force shifts the resonance of the oscillator carrying the lens.
For drive amplitude A_z along the separation axis the shift of the squared
frequency is, keeping the full nonlinearity of the force,

    omega_r^2 - omega_0^2 = -(C kB T L / 2 sqrt(pi) a^2 A_z) A/sqrt(2 a B)
        * sum'_l sum_n n^{-1/2} int_{zeta_l}^inf dv v^{3/2}
          (r_TM^{2n} + r_TE^{2n}) e^{-n v} I_1(A_z n v / a),

with C the coupling constant of the mount (C = b^2 / I for a torsional
oscillator with lever arm b and moment of inertia I).  For A_z << a the
Bessel kernel linearizes and the shift reduces to -C dF/da.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import CONSTANTS
from .engine import (DEFAULT_QUADRATURE, QuadratureSpec, _frequency_integral,
                     _grid_from, _lens_shape_factor, _STOP_STREAK,
                     casimir_gradient, casimir_force, rotated_gradient,
                     two_halves_gradient, zero_temperature_force)
from .geometry import EllipticLens, Environment, LensGeometry, TwoHalvesLens
from .materials import PermittivityModel
from .specfun import SQRT_PI, ConvergenceError, bessel_i1_scaled


@dataclass(frozen=True)
class OscillatorParams:
    """Oscillator carrying the lens.

    Parameters
    ----------
    omega0 : float
        Unperturbed angular resonance frequency, rad/s.
    C : float
        Force-to-frequency coupling, s^-2 per (N/m) * m ... i.e. the shift is
        Delta(omega^2) = -C dF/da in the linear regime.  For a torsional
        mount C = b^2 / I.
    Az : float
        Drive amplitude along the separation axis, m.  Must stay below the
        separation a (checked at evaluation time).
    """

    omega0: float
    C: float
    Az: float

    def __post_init__(self) -> None:
        if not self.omega0 > 0.0:
            raise ValueError("omega0 must be positive")
        if not self.C > 0.0:
            raise ValueError("coupling C must be positive")
        if not self.Az > 0.0:
            raise ValueError("drive amplitude Az must be positive")

    @classmethod
    def torsional(cls, omega0: float, b: float, I: float, Az: float) -> "OscillatorParams":
        """Build from lever arm b and moment of inertia I (C = b^2 / I)."""
        if not b > 0.0 or not I > 0.0:
            raise ValueError("b and I must be positive")
        return cls(omega0=omega0, C=b * b / I, Az=Az)


@dataclass(frozen=True)
class LinearShift:
    """Linearized response: shift of omega^2 and the shifted frequency."""

    delta_omega2: float
    omega_r: float


def _check_amplitude(env: Environment, osc: OscillatorParams) -> None:
    if osc.Az >= env.a:
        raise ValueError(
            f"drive amplitude Az = {osc.Az:.3g} must be smaller than the "
            f"separation a = {env.a:.3g}")


# ---------------------------------------------------------------------------
# nonlinear kernel: sum over reflection orders with the Bessel weight

_NL_BLOCK = 64
_NL_CAP = 8192
_LAGUERRE_NODES = 48


def _laguerre(_cache={}):
    if "xw" not in _cache:
        _cache["xw"] = np.polynomial.laguerre.laggauss(_LAGUERRE_NODES)
    return _cache["xw"]


def _bessel_series_tail(mu: float, q: float, n_from: float) -> float:
    """Euler-Maclaurin tail of sum_n n^{-1/2} e^{-mu n} I_1(q n) from n_from.

    Only exercised when the series is still unconverged at the n-cap, which
    happens for the few smallest v nodes where mu - q is tiny.  The sum is
    replaced by the midpoint integral int_{n_from - 1/2}^inf f(x) dx evaluated
    with Gauss-Laguerre in the decaying variable; the midpoint rule's error
    is O(f''/24), far below the contribution of these nodes to the total.
    """
    # e^{-mu x} I_1(q x) = e^{-lam x} [e^{-q x} I_1(q x)] with lam = mu - q > 0
    # (Az < a keeps q = beta v < mu).  Substituting x = x0 + y/lam turns the
    # integral into a Gauss-Laguerre sum over the slowly varying remainder.
    lam = mu - q
    x0 = n_from - 0.5
    y, wy = _laguerre()
    x = x0 + y / lam
    vals = x ** (-0.5) * bessel_i1_scaled(q * x)
    return float(np.sum(wy * vals)) * math.exp(-lam * x0) / lam


def _nonlinear_kernel(v: np.ndarray, r_tm2: np.ndarray, r_te2: np.ndarray,
                      beta: float, rel_tol: float) -> np.ndarray:
    """v^{3/2} sum_n n^{-1/2} (r_TM^{2n} + r_TE^{2n}) e^{-nv} I_1(beta n v)."""
    out = np.zeros_like(v)
    for r2 in (r_tm2, r_te2):
        mask = r2 > 0.0
        if not np.any(mask):
            continue
        vv = v[mask]
        mu = vv - np.log(r2[mask])  # e^{-mu n} absorbs r^{2n} e^{-nv}
        q = beta * vv
        lam = mu - q
        acc = np.zeros_like(vv)
        active = np.ones(vv.shape, dtype=bool)
        n0 = 0
        while n0 < _NL_CAP and np.any(active):
            n = np.arange(n0 + 1, n0 + _NL_BLOCK + 1, dtype=float)
            idx = np.where(active)[0]
            nv = np.outer(n, q[idx])
            block = (n[:, None] ** -0.5 * bessel_i1_scaled(nv)
                     * np.exp(-np.outer(n, lam[idx])))
            acc[idx] += block.sum(axis=0)
            n0 += _NL_BLOCK
            # geometric bound on the remainder: term ratio is at most
            # e^{-lam} (1 + 1/(2 n)), the algebraic factor covering the rise
            # of e^{-x} I_1(x) against n^{-1/2} while beta n v is small
            last = block[-1]
            rho = np.exp(-lam[idx]) * (1.0 + 0.5 / n0)
            rho = np.minimum(rho, 0.999999)
            bound = last * rho / (1.0 - rho)
            still = bound >= rel_tol / 10.0 * np.maximum(acc[idx], 1e-300)
            active[idx] = still
        if np.any(active):
            for i in np.where(active)[0]:
                acc[i] += _bessel_series_tail(float(mu[i]), float(q[i]),
                                              float(_NL_CAP + 1))
        out[mask] += acc
    return v ** 1.5 * out


def frequency_shift_nonlinear(geom: EllipticLens, env: Environment,
                              model: PermittivityModel, osc: OscillatorParams,
                              quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Shift of omega^2 with the full force nonlinearity retained, rad^2/s^2.

    Negative for the attractive force (the resonance softens).  Requires
    0 < Az < a; T = 0 uses the continuous-frequency integral.
    """
    if not isinstance(geom, EllipticLens):
        raise TypeError("frequency_shift_nonlinear expects a symmetric lens; "
                        "use frequency_shift_for_variant otherwise")
    return _shift_nonlinear_any(geom, env, model, osc, quad)


def _shift_nonlinear_any(geom: LensGeometry, env: Environment,
                         model: PermittivityModel, osc: OscillatorParams,
                         quad: QuadratureSpec) -> float:
    _check_amplitude(env, osc)
    a = env.a
    beta = osc.Az / a

    def kernel(v, r_tm2, r_te2):
        return _nonlinear_kernel(v, r_tm2, r_te2, beta, quad.rel_tol)

    pref_geo = _lens_shape_factor(geom) / math.sqrt(2.0 * a)
    if env.T == 0.0:
        z_nodes, z_weights = _grid_from(0.0, quad.v_span)
        total = 0.0
        for z, wz in zip(z_nodes, z_weights):
            total += wz * _frequency_integral(kernel, model, float(z), a, quad)
        hc = CONSTANTS.hbar * CONSTANTS.c
        return (-osc.C * hc * geom.L / (8.0 * math.pi * SQRT_PI * a ** 3 * osc.Az)
                * pref_geo * total)

    zeta1 = 4.0 * math.pi * a * CONSTANTS.kB * env.T / (CONSTANTS.hbar * CONSTANTS.c)
    total = 0.5 * _frequency_integral(kernel, model, 0.0, a, quad)
    streak = 0
    for l in range(1, quad.l_max + 1):
        term = _frequency_integral(kernel, model, l * zeta1, a, quad)
        total += term
        if abs(term) < quad.rel_tol / 10.0 * abs(total):
            streak += 1
            if streak >= _STOP_STREAK:
                break
        else:
            streak = 0
    else:
        raise ConvergenceError("frequency-shift sum not converged", partial=total)
    return (-osc.C * CONSTANTS.kB * env.T * geom.L
            / (2.0 * SQRT_PI * a * a * osc.Az) * pref_geo * total)


def frequency_shift_linear(geom: LensGeometry, env: Environment,
                           model: PermittivityModel, osc: OscillatorParams,
                           quad: QuadratureSpec = DEFAULT_QUADRATURE) -> LinearShift:
    """Small-amplitude limit: Delta(omega^2) = -C dF/da and the shifted omega_r.

    omega_r is evaluated to first order, omega_r = omega0 (1 - C/(2 omega0^2)
    dF/da); with the gradient positive for attraction the resonance softens.
    Accepts any lens variant.
    """
    _check_amplitude(env, osc)
    if isinstance(geom, EllipticLens):
        grad = casimir_gradient(geom, env, model, quad).value
    elif isinstance(geom, TwoHalvesLens):
        grad = two_halves_gradient(geom, env, model, quad).value
    else:
        grad = rotated_gradient(geom, env, model, quad).value
    delta = -osc.C * grad
    omega_r = osc.omega0 * (1.0 - osc.C * grad / (2.0 * osc.omega0 ** 2))
    return LinearShift(delta_omega2=delta, omega_r=omega_r)


def frequency_shift_direct_oracle(geom: EllipticLens, env: Environment,
                                  model: PermittivityModel, osc: OscillatorParams,
                                  quad: QuadratureSpec = DEFAULT_QUADRATURE,
                                  theta_tol: float = 1e-9) -> float:
    """Time-domain evaluation of the shift: force averaged over one cycle.

    Delta(omega^2) = -(C / pi A_z) int_0^{2pi} dtheta cos(theta)
    F(a + A_z cos(theta)); the oscillation phase theta = omega_r t makes the
    measure independent of omega_r, so no self-consistency loop is needed.
    The periodic trapezoid rule is spectrally convergent here; the grid is
    doubled until the result is stable to theta_tol.  Force values are
    reused across doublings (the grids nest).
    """
    if not isinstance(geom, EllipticLens):
        raise TypeError("frequency_shift_direct_oracle expects a symmetric lens")
    _check_amplitude(env, osc)
    cache: dict[float, float] = {}

    def force_at(sep: float) -> float:
        if sep not in cache:
            e = Environment(a=sep, T=env.T)
            if env.T == 0.0:
                cache[sep] = zero_temperature_force(geom, e, model, quad).value
            else:
                cache[sep] = casimir_force(geom, e, model, quad).value
        return cache[sep]

    prev = None
    for m in (16, 32, 64, 128, 256):
        theta = 2.0 * math.pi * np.arange(m) / m
        cos = np.cos(theta)
        vals = np.array([force_at(env.a + osc.Az * c) for c in cos])
        integral = 2.0 * math.pi / m * float(np.sum(cos * vals))
        shift = -osc.C / (math.pi * osc.Az) * integral
        if prev is not None and abs(shift - prev) <= theta_tol * max(abs(shift), 1e-300):
            return shift
        prev = shift
    return prev


def frequency_shift_for_variant(geom: LensGeometry, env: Environment,
                                model: PermittivityModel, osc: OscillatorParams,
                                quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Nonlinear frequency shift for any lens variant.

    The two-halves lens averages the A/sqrt(B) factors; the rotated lens is
    scaled by G.  Geometry enters the kernel only through that prefactor, so
    the variants share the frequency sum.
    """
    return _shift_nonlinear_any(geom, env, model, osc, quad)
