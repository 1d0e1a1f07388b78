import math

import numpy as np
import pytest
from scipy.optimize import bisect

from lasekk.errors import NonConvergence
from lasekk.laser_clamp import (CavityParams, LasingBand, NoLasing, SampledProfile,
                                clamped_susceptibility, detect_kinks, edge_slope_jump,
                                find_kinks, lasing_band, relax_field, sample_profile)
from lasekk.medium import MediumParams, susceptibility

TWO_PI = 2 * math.pi
NU0 = TWO_PI * 3.8e14
Q = 3.8e8


def setup(qg, gamma=TWO_PI * 1e9):
    return MediumParams(gamma, NU0, qg / Q), CavityParams(Q, NU0)


def test_cavity_linewidth():
    c = CavityParams(Q, NU0)
    assert c.linewidth * c.q_factor == pytest.approx(NU0, rel=1e-12)
    assert c.linewidth == pytest.approx(TWO_PI * 1e6, rel=1e-12)


def test_band_half_width_matches_bisection(fig1):
    m, c = fig1
    band = lasing_band(m, c)
    assert isinstance(band, LasingBand)
    assert band.half_width == pytest.approx(m.gamma_medium / math.sqrt(2), rel=1e-12)
    root = bisect(lambda x: susceptibility(m, x).chi_double_prime + 1 / c.q_factor,
                  0.0, 3 * m.gamma_medium, xtol=1e-9, rtol=1e-15, maxiter=500)
    assert band.half_width == pytest.approx(root, rel=1e-6)
    assert band.nu2_offset == -band.nu1_offset == band.half_width
    assert band.half_width == pytest.approx(TWO_PI * 7.0711e8, rel=1e-5)


@pytest.mark.parametrize("qg", [1.0, 0.5])
def test_no_lasing(qg):
    assert lasing_band(*setup(qg)) == NoLasing(qg)


def test_centre_point(fig1):
    m, c = fig1
    p = clamped_susceptibility(m, c, 0.0)
    assert p.chi_double_prime == -1 / Q
    assert p.chi_prime == 0.0
    # (QG - 1) Gamma^2 / 2 with QG = 3
    assert p.omega_sq == pytest.approx(m.gamma_medium ** 2, rel=1e-12)


def test_band_edge_continuity(fig1):
    m, c = fig1
    hw = lasing_band(m, c).half_width
    for edge in (-hw, hw):
        inside = clamped_susceptibility(m, c, edge * (1 - 1e-12))
        outside = clamped_susceptibility(m, c, edge * (1 + 1e-12))
        assert abs(inside.chi_double_prime - outside.chi_double_prime) < 1e-12 * m.gain_g
        assert abs(inside.chi_prime - outside.chi_prime) < 1e-12 * m.gain_g
        assert inside.omega_sq == pytest.approx(0.0, abs=1e-9 * m.gamma_medium ** 2)
        assert outside.omega_sq == 0.0


def test_outside_band_value(fig1):
    m, c = fig1
    p = clamped_susceptibility(m, c, m.gamma_medium)
    assert p.chi_double_prime == pytest.approx(-m.gain_g / 5, rel=1e-14)
    assert p.chi_prime == pytest.approx(2 * m.gain_g / 5, rel=1e-14)
    assert p.omega_sq == 0.0


def test_profile_invariants(fig1):
    m, c = fig1
    hw = lasing_band(m, c).half_width
    x = np.linspace(-3, 3, 4001) * m.gamma_medium
    p = sample_profile(m, c, x)
    inside = np.abs(x) < hw
    assert np.all(p.omega_sq >= 0)
    assert np.array_equal(p.omega_sq > 0, inside)
    assert np.all(p.chi_double_prime[inside] == -1 / Q)
    nz = x != 0
    np.testing.assert_allclose(p.chi_prime[nz] / p.chi_double_prime[nz],
                               -2 * x[nz] / m.gamma_medium, rtol=1e-12)
    # downward parabola through (QG-1) Gamma^2 / 2 at the centre
    np.testing.assert_allclose(p.omega_sq[inside],
                               0.5 * ((3 - 1) * m.gamma_medium ** 2 - 4 * x[inside] ** 2),
                               rtol=1e-12)
    # saturating the medium with this field reproduces the clamped gain
    sat = susceptibility(m, x[inside], p.omega_sq[inside])
    np.testing.assert_allclose(sat.chi_double_prime, -1 / Q, rtol=1e-12)


def test_below_threshold_is_unsaturated():
    m, c = setup(0.5)
    x = np.linspace(-3, 3, 101) * m.gamma_medium
    p = clamped_susceptibility(m, c, x)
    s = susceptibility(m, x)
    assert np.all(p.omega_sq == 0)
    np.testing.assert_array_equal(p.chi_double_prime, s.chi_double_prime)


def test_relax_field_centre_from_both_sides(fig1):
    m, c = fig1
    g2 = m.gamma_medium ** 2
    for seed in (1e-3 * g2, 10 * g2):
        assert relax_field(m, c, 0.0, seed) == pytest.approx(g2, rel=1e-3)


def test_relax_field_decays_outside(fig1):
    m, c = fig1
    hw = lasing_band(m, c).half_width
    seed = m.gamma_medium ** 2
    assert relax_field(m, c, 1.2 * hw, seed) < 1e-6 * seed


def test_relax_field_errors(fig1):
    m, c = fig1
    with pytest.raises(ValueError):
        relax_field(m, c, 0.0, 0.0)
    with pytest.raises(ValueError):
        relax_field(m, c, 0.0, 1.0, dt=1.0)
    with pytest.raises(NonConvergence):
        relax_field(m, c, 0.0, 1e-3 * m.gamma_medium ** 2, t_max=1e-7)


def test_kinks_on_clamped_profile(fig1):
    m, c = fig1
    hw = lasing_band(m, c).half_width
    x = np.arange(-600, 601) * (m.gamma_medium / 200)
    prof = sample_profile(m, c, x)
    h = prof.step
    for which in ("chi_prime", "chi_double_prime"):
        k = detect_kinks(prof, which)
        assert len(k) == 2
        assert abs(k[0] + hw) <= h and abs(k[1] - hw) <= h


def test_no_kinks_on_smooth_profiles(fig1):
    m, _ = fig1
    x = np.linspace(-3, 3, 4001) * m.gamma_medium
    s = susceptibility(m, x)
    assert find_kinks(x, s.chi_double_prime) == []
    assert find_kinks(x, s.chi_prime) == []
    assert find_kinks(x, 3.7 * x) == []


def test_kink_detector_needs_points():
    with pytest.raises(ValueError):
        find_kinks([0, 1, 2, 3], [0, 1, 0, 1])


def test_slope_jump_matches_finite_differences(fig1):
    m, c = fig1
    hw = lasing_band(m, c).half_width
    h = 1e-4 * m.gamma_medium
    f = lambda x: clamped_susceptibility(m, c, x).chi_prime
    left = (f(hw - h) - f(hw - 2 * h)) / h
    right = (f(hw + 2 * h) - f(hw + h)) / h
    jump = edge_slope_jump(m, c)
    assert jump > 0
    assert abs(right - left) == pytest.approx(jump, rel=1e-2)


def test_sampled_profile_rejects_non_uniform():
    x = np.array([0.0, 1.0, 3.0])
    with pytest.raises(ValueError):
        SampledProfile(x, x, x, x)


def test_mismatched_nu0():
    m = MediumParams(1.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        lasing_band(m, CavityParams(10.0, 3.0))
