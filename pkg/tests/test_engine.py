"""Force engine: closed forms, limits, consistency and convergence behavior."""

import math

import numpy as np
import pytest

from casimir_lens.constants import CONSTANTS
from casimir_lens.engine import (DEFAULT_QUADRATURE, QuadratureSpec,
                                 casimir_force, casimir_gradient,
                                 ideal_metal_force_t0, ideal_metal_gradient_t0,
                                 rotated_force, rotation_factor,
                                 two_halves_force, two_halves_gradient,
                                 zero_temperature_force,
                                 zero_temperature_gradient)
from casimir_lens.geometry import (Environment, RotatedLens, TwoHalvesLens,
                                   symmetric_lens)
from casimir_lens.materials import IdealMetal, gold_drude, gold_plasma
from casimir_lens.specfun import ConvergenceError

LENS = symmetric_lens(100e-6, 100e-6, 1e-3)
T300 = 300.0


def env(a, T=T300):
    return Environment(a=a, T=T)


def test_closed_form_reference_magnitude():
    # -5.045 nN at a = 200 nm, A = B = 100 um, L = 1 mm
    f = ideal_metal_force_t0(LENS, env(200e-9, 0.0))
    assert f == pytest.approx(-5.045e-9, rel=1e-3)
    g = ideal_metal_gradient_t0(LENS, env(200e-9, 0.0))
    assert g == pytest.approx(8.83e-2, rel=1e-3)
    # gradient = (7/2) |F| / a for the a^{-7/2} law
    assert g == pytest.approx(3.5 * abs(f) / 200e-9, rel=1e-12)


def test_zero_temperature_matches_closed_form():
    for a in (100e-9, 200e-9, 1e-6):
        e = env(a, 0.0)
        closed = ideal_metal_force_t0(LENS, e)
        engine = zero_temperature_force(LENS, e, IdealMetal())
        assert engine.value == pytest.approx(closed, rel=1e-10)
        assert engine.mode == "zeroT"
        closed_g = ideal_metal_gradient_t0(LENS, e)
        engine_g = zero_temperature_gradient(LENS, e, IdealMetal())
        assert engine_g.value == pytest.approx(closed_g, rel=1e-10)


def test_closed_form_gradient_is_derivative():
    a = 200e-9
    d = 1e-5 * a
    fd = (ideal_metal_force_t0(LENS, env(a + d, 0.0))
          - ideal_metal_force_t0(LENS, env(a - d, 0.0))) / (2.0 * d)
    assert ideal_metal_gradient_t0(LENS, env(a, 0.0)) == \
        pytest.approx(fd, rel=1e-8)


@pytest.mark.parametrize("model", [IdealMetal(), gold_drude(), gold_plasma()],
                         ids=["ideal", "drude", "plasma"])
def test_gradient_consistent_with_force(model):
    a = 200e-9
    d = 1e-4 * a
    fp = casimir_force(LENS, env(a + d), model).value
    fm = casimir_force(LENS, env(a - d), model).value
    grad = casimir_gradient(LENS, env(a), model).value
    assert grad == pytest.approx((fp - fm) / (2.0 * d), rel=1e-4)
    assert grad > 0.0  # attraction strengthens as the lens approaches


def test_force_attractive_and_monotone():
    values = [casimir_force(LENS, env(a), gold_drude()).value
              for a in (150e-9, 300e-9, 600e-9)]
    assert all(v < 0.0 for v in values)
    assert values[0] < values[1] < values[2]  # magnitude decreases with a


def test_small_temperature_approaches_zero_t():
    a = 200e-9
    f_cold = casimir_force(LENS, env(a, 1.0), IdealMetal()).value
    f_zero = zero_temperature_force(LENS, env(a, 0.0), IdealMetal()).value
    assert f_cold == pytest.approx(f_zero, rel=1e-5)


def test_zero_temperature_routing():
    res = casimir_force(LENS, env(200e-9, 0.0), IdealMetal())
    assert res.mode == "zeroT"


def test_ideal_metal_thermal_force_exceeds_zero_t():
    # extra thermal photons only strengthen the ideal-metal attraction
    a = 1e-6
    f_t = casimir_force(LENS, env(a), IdealMetal()).value
    f_0 = zero_temperature_force(LENS, env(a, 0.0), IdealMetal()).value
    assert abs(f_t) > abs(f_0)


def test_classical_limit_ratios():
    # at a = 5 um the l = 0 term dominates; Drude keeps only TM
    a = 5e-6
    shape = LENS.A / math.sqrt(2.0 * a * LENS.B)
    zeta3 = 1.2020569031595943
    l0 = -(CONSTANTS.kB * T300 * LENS.L / (4.0 * math.sqrt(math.pi) * a * a)
           * shape * math.gamma(2.5) * zeta3)
    f_drude = casimir_force(LENS, env(a), gold_drude()).value
    f_plasma = casimir_force(LENS, env(a), gold_plasma()).value
    assert f_drude / l0 == pytest.approx(0.5, abs=0.02)
    assert f_plasma / l0 == pytest.approx(1.0, rel=0.05)


def test_matsubara_sum_stable_under_lmax_doubling():
    a = 500e-9
    loose = QuadratureSpec(rel_tol=1e-8, l_max=400)
    tight = QuadratureSpec(rel_tol=1e-8, l_max=800)
    f1 = casimir_force(LENS, env(a), gold_drude(), loose).value
    f2 = casimir_force(LENS, env(a), gold_drude(), tight).value
    assert f1 == f2  # the stop rule, not the cap, decides


def test_matsubara_cap_raises_with_partial():
    # at 1 K the sum needs thousands of terms; a tiny cap must fail loudly
    with pytest.raises(ConvergenceError) as info:
        casimir_force(LENS, env(200e-9, 1.0), IdealMetal(),
                      QuadratureSpec(rel_tol=1e-8, l_max=5))
    assert info.value.partial != 0.0


def test_independent_matsubara_term_spot_check():
    # recompute the l = 1 integrand with mpmath-free brute force:
    # int_zeta^inf v^{3/2} [Li_{1/2}(e^-v) * 2] dv for the ideal metal
    from casimir_lens.engine import _force_kernel, _frequency_integral
    a = 200e-9
    zeta1 = 4.0 * math.pi * a * CONSTANTS.kB * T300 / (CONSTANTS.hbar * CONSTANTS.c)
    ours = _frequency_integral(_force_kernel, IdealMetal(), zeta1, a,
                               DEFAULT_QUADRATURE)
    import scipy.integrate
    from casimir_lens.specfun import polylog

    def integrand(v):
        return v ** 1.5 * 2.0 * polylog(0.5, math.exp(-v))

    ref, _ = scipy.integrate.quad(integrand, zeta1, zeta1 + 80.0, limit=400)
    assert ours == pytest.approx(ref, rel=1e-9)


def test_result_error_estimate_brackets_truth():
    a = 400e-9
    res = casimir_force(LENS, env(a), gold_drude())
    precise = casimir_force(LENS, env(a), gold_drude(),
                            QuadratureSpec(rel_tol=1e-12))
    assert abs(res.value - precise.value) <= max(res.est_abs_error,
                                                 1e-12 * abs(res.value))


def test_two_halves_equal_halves_is_symmetric():
    lens2 = TwoHalvesLens(A1=LENS.A, B1=LENS.B, A2=LENS.A, B2=LENS.B,
                          h=LENS.h, d=LENS.d, L=LENS.L)
    for T in (0.0, T300):
        f_sym = casimir_force(LENS, env(200e-9, T), gold_drude()).value
        f_two = two_halves_force(lens2, env(200e-9, T), gold_drude()).value
        assert f_two == f_sym
        g_sym = casimir_gradient(LENS, env(200e-9, T), gold_drude()).value
        g_two = two_halves_gradient(lens2, env(200e-9, T), gold_drude()).value
        assert g_two == g_sym


def test_two_halves_averages_shape_factors():
    lens2 = TwoHalvesLens(A1=100e-6, B1=100e-6, A2=200e-6, B2=50e-6,
                          h=5e-6, d=90e-6, L=1e-3)
    e = env(200e-9)
    f_two = two_halves_force(lens2, e, IdealMetal()).value
    f1 = casimir_force(symmetric_lens(100e-6, 100e-6, 1e-3), e, IdealMetal()).value
    f2 = casimir_force(symmetric_lens(200e-6, 50e-6, 1e-3), e, IdealMetal()).value
    assert f_two == pytest.approx(0.5 * (f1 + f2), rel=1e-14)


def test_rotation_factor_limits():
    assert rotation_factor(1.3, 1.0, 0.0).G == 1.0
    # phi = pi/2 seats the lens on its major axis: H = A
    end = rotation_factor(1.3, 1.0, math.pi / 2.0)
    assert end.H == pytest.approx(1.3, rel=1e-15)
    assert end.G == pytest.approx((1.0 / 1.3) ** 1.5, rel=1e-14)


def test_rotation_factor_monotone_decreasing():
    phis = np.linspace(0.0, math.pi / 2.0, 40)
    gs = [rotation_factor(1.2, 1.0, p).G for p in phis]
    assert all(g1 > g2 for g1, g2 in zip(gs, gs[1:]))


def test_rotated_phi_zero_equals_symmetric():
    rot = RotatedLens(A=LENS.A, B=LENS.B, phi=0.0, h=LENS.h, d=LENS.d, L=LENS.L)
    for T in (0.0, T300):
        f_sym = casimir_force(LENS, env(200e-9, T), gold_plasma()).value
        f_rot = rotated_force(rot, env(200e-9, T), gold_plasma()).value
        assert f_rot == f_sym


def test_elliptic_equals_circular_with_effective_radius():
    # A/sqrt(B) = sqrt(A^2/B): the elliptic lens force equals that of a
    # circular cylinder with R = A^2/B
    A, B = 141e-6, 87e-6
    R = A * A / B
    e = env(250e-9)
    f_ell = casimir_force(symmetric_lens(A, B, 1e-3), e, gold_drude()).value
    f_cir = casimir_force(symmetric_lens(R, R, 1e-3), e, gold_drude()).value
    assert f_cir == pytest.approx(f_ell, rel=1e-14)


def test_variant_type_checks():
    with pytest.raises(TypeError):
        casimir_force(RotatedLens(A=1e-4, B=1e-4, phi=0.1, h=1e-6, d=1e-5,
                                  L=1e-3), env(200e-9), IdealMetal())
    with pytest.raises(TypeError):
        two_halves_force(LENS, env(200e-9), IdealMetal())
    with pytest.raises(TypeError):
        rotated_force(LENS, env(200e-9), IdealMetal())
