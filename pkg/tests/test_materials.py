"""Permittivity models and reflection coefficients."""

import math

import numpy as np
import pytest

from casimir_lens.constants import CONSTANTS, ev_to_rad_per_s
from casimir_lens.materials import (Drude, IdealMetal, Plasma, Tabulated,
                                    epsilon_at_imaginary, gold_drude,
                                    gold_plasma, reflection_coefficients,
                                    reflection_sq_grid)


def test_gold_drude_frozen_epsilon():
    # eps(i xi) at xi = 1 eV: 1 + 81/(1 * 1.035) = 79.26...
    xi = ev_to_rad_per_s(1.0)
    eps = epsilon_at_imaginary(gold_drude(), xi)
    assert eps == pytest.approx(1.0 + 81.0 / 1.035, rel=1e-12)


def test_plasma_epsilon_scaling():
    xi = ev_to_rad_per_s(3.0)
    eps = epsilon_at_imaginary(gold_plasma(), xi)
    assert eps == pytest.approx(1.0 + 9.0, rel=1e-12)  # 1 + (9/3)^2


def test_plasma_exceeds_drude_on_imaginary_axis():
    # 1 + wp^2/xi^2 > 1 + wp^2/(xi (xi + gamma)) for any xi, gamma > 0.
    for ev in (0.01, 1.0, 100.0):
        xi = ev_to_rad_per_s(ev)
        assert epsilon_at_imaginary(gold_plasma(), xi) > \
            epsilon_at_imaginary(gold_drude(), xi)


def test_ideal_metal_epsilon_infinite():
    assert math.isinf(epsilon_at_imaginary(IdealMetal(), 1e15))


def test_epsilon_requires_positive_frequency():
    with pytest.raises(ValueError):
        epsilon_at_imaginary(gold_drude(), 0.0)


def test_model_parameter_validation():
    with pytest.raises(ValueError):
        Plasma(omega_p=-1.0)
    with pytest.raises(ValueError):
        Drude(omega_p=1e16, gamma=-1.0)


def test_ideal_metal_reflection_everywhere():
    for zeta in (0.0, 0.5, 3.0):
        pair = reflection_coefficients(IdealMetal(), zeta, zeta + 1.7, 200e-9)
        assert pair.r_tm == 1.0 and pair.r_te == -1.0


def test_zero_frequency_branches():
    a, v = 200e-9, 1.3
    drude = reflection_coefficients(gold_drude(), 0.0, v, a)
    assert drude.r_tm == 1.0 and drude.r_te == 0.0
    plasma = reflection_coefficients(gold_plasma(), 0.0, v, a)
    wp = 2.0 * a * gold_plasma().omega_p / CONSTANTS.c
    root = math.hypot(v, wp)
    assert plasma.r_tm == 1.0
    assert plasma.r_te == pytest.approx((v - root) / (v + root), rel=1e-15)


def test_plasma_zero_frequency_continuity():
    # The plasma TE branch is the zeta -> 0 limit of the general formula.
    a, v = 200e-9, 2.0
    at_zero = reflection_coefficients(gold_plasma(), 0.0, v, a)
    near_zero = reflection_coefficients(gold_plasma(), 1e-8, v, a)
    assert near_zero.r_te == pytest.approx(at_zero.r_te, rel=1e-6)
    assert near_zero.r_tm == pytest.approx(at_zero.r_tm, rel=1e-6)


def test_ideal_metal_zero_frequency_continuity():
    a, v = 200e-9, 2.0
    at_zero = reflection_coefficients(IdealMetal(), 0.0, v, a)
    near_zero = reflection_coefficients(IdealMetal(), 1e-8, v, a)
    assert near_zero.r_te == pytest.approx(at_zero.r_te, rel=1e-12)
    assert near_zero.r_tm == pytest.approx(at_zero.r_tm, rel=1e-12)


def test_tm_dominates_te():
    # |r_TM| >= |r_TE| for any dielectric at imaginary frequency.
    rng = np.random.default_rng(42)
    a = 200e-9
    for model in (gold_drude(), gold_plasma()):
        for _ in range(50):
            zeta = float(rng.uniform(0.01, 20.0))
            v = float(rng.uniform(zeta, zeta + 40.0) + 1e-6)
            pair = reflection_coefficients(model, zeta, v, a)
            assert abs(pair.r_tm) >= abs(pair.r_te)
            assert 0.0 <= pair.r_tm <= 1.0
            assert -1.0 <= pair.r_te <= 0.0


def test_reflection_grid_matches_scalar():
    a, zeta = 150e-9, 0.8
    v = np.linspace(zeta + 1e-3, zeta + 30.0, 17)
    tm2, te2 = reflection_sq_grid(gold_drude(), zeta, v, a)
    for i, vi in enumerate(v):
        pair = reflection_coefficients(gold_drude(), zeta, float(vi), a)
        assert tm2[i] == pytest.approx(pair.r_tm ** 2, rel=1e-14)
        assert te2[i] == pytest.approx(pair.r_te ** 2, rel=1e-14)


def test_reflection_requires_v_at_least_zeta():
    with pytest.raises(ValueError):
        reflection_coefficients(gold_drude(), 2.0, 1.0, 200e-9)


# ---------------------------------------------------------------------------
# tabulated model

GOOD_TABLE = """\
# xi_rad_per_s   epsilon
1.0e13  5000.0
1.0e14  120.0
1.0e15  8.0
1.0e16  1.5
"""


def test_tabulated_from_file(tmp_path):
    path = tmp_path / "eps.dat"
    path.write_text(GOOD_TABLE)
    model = Tabulated.from_file(str(path))
    # exact at a grid point
    assert epsilon_at_imaginary(model, 1.0e14) == pytest.approx(120.0)
    # log-log interpolation between grid points
    mid = epsilon_at_imaginary(model, math.sqrt(1.0e14 * 1.0e15))
    assert mid == pytest.approx(math.sqrt(120.0 * 8.0), rel=1e-12)


def test_tabulated_zero_frequency_uses_first_entry(tmp_path):
    path = tmp_path / "eps.dat"
    path.write_text(GOOD_TABLE)
    model = Tabulated.from_file(str(path))
    pair = reflection_coefficients(model, 0.0, 1.0, 200e-9)
    assert pair.r_tm == pytest.approx(4999.0 / 5001.0)
    assert pair.r_te == 0.0


def test_tabulated_range_enforced(tmp_path):
    path = tmp_path / "eps.dat"
    path.write_text(GOOD_TABLE)
    model = Tabulated.from_file(str(path))
    with pytest.raises(ValueError):
        epsilon_at_imaginary(model, 1.0e12)
    with pytest.raises(ValueError):
        epsilon_at_imaginary(model, 1.0e17)


def test_tabulated_malformed_line_reports_number(tmp_path):
    path = tmp_path / "eps.dat"
    path.write_text("1.0e13 5000.0\nnot-a-number 3.0\n")
    with pytest.raises(ValueError, match=":2:"):
        Tabulated.from_file(str(path))


def test_tabulated_grid_must_increase(tmp_path):
    path = tmp_path / "eps.dat"
    path.write_text("1.0e14 100.0\n1.0e13 200.0\n")
    with pytest.raises(ValueError):
        Tabulated.from_file(str(path))


def test_tabulated_epsilon_floor(tmp_path):
    path = tmp_path / "eps.dat"
    path.write_text("1.0e13 2.0\n1.0e14 0.5\n")
    with pytest.raises(ValueError):
        Tabulated.from_file(str(path))
