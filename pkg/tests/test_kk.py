import numpy as np
import pytest
from scipy.integrate import quad

from lasekk.errors import BadTailFit, EdgeEvaluation
from lasekk.kk import (SampledSpectrum, central_mask, hilbert_pv, kk_check, lorentzian_pair,
                       tail_integral)

ETA = 1.7


def rel_l2(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


@pytest.fixture
def lor():
    return lorentzian_pair(ETA, np.linspace(-50 * ETA, 50 * ETA, 4096))


def test_lorentzian_pair_values():
    s = lorentzian_pair(ETA, np.linspace(-ETA, ETA, 65))
    assert s.chi_prime[32] == 0.0
    assert s.chi_double_prime[32] == pytest.approx(-1 / ETA, rel=1e-15)
    assert s.chi_prime[0] == pytest.approx(-1 / (2 * ETA), rel=1e-15)
    assert s.chi_prime[-1] == pytest.approx(1 / (2 * ETA), rel=1e-15)
    fine = lorentzian_pair(ETA, np.linspace(-3 * ETA, 3 * ETA, 6001))
    k = np.argmax(fine.chi_prime)
    assert fine.grid[k] == pytest.approx(ETA, abs=fine.step)


def test_hilbert_of_lorentzian(lor):
    m = central_mask(lor.grid)
    out = hilbert_pv(lor.chi_double_prime, lor.grid, tail_exponent=2)
    assert rel_l2(out, lor.chi_prime[m]) < 1e-3


def test_hilbert_of_zero(lor):
    assert np.all(hilbert_pv(np.zeros_like(lor.grid), lor.grid) == 0)


def test_involution(lor):
    m = central_mask(lor.grid)
    first = hilbert_pv(lor.chi_double_prime, lor.grid, tail_exponent=2)
    sub = lor.grid[m]
    second = hilbert_pv(first, sub, tail_exponent=1)
    inner = central_mask(sub)
    assert rel_l2(second, -lor.chi_double_prime[m][inner]) < 5e-3


def test_window_part_against_quad():
    x = np.linspace(-6, 6, 2001)
    f = np.exp(-x ** 2) * (1 + 0.3 * x)
    nodes = x[[800, 1000, 1111, 1200]]
    got = hilbert_pv(f, x, eval_points=nodes, tail=False)
    for xi, g in zip(nodes, got):
        ref, _ = quad(lambda t: np.exp(-t ** 2) * (1 + 0.3 * t), -6, 6, weight="cauchy",
                      wvar=xi, epsabs=1e-14, epsrel=1e-13, limit=200)
        assert g == pytest.approx(ref / np.pi, abs=1e-7)


@pytest.mark.parametrize("p", [1, 2])
@pytest.mark.parametrize("edge", [7.0, -7.0])
@pytest.mark.parametrize("x", [-5.0, -0.3, 0.0, 1e-9, 2.0, 6.5])
def test_tail_integral_against_quad(p, edge, x):
    coeff = 1.3
    f = lambda t: coeff * t ** -p / (t - x)
    lo, hi = (edge, np.inf) if edge > 0 else (-np.inf, edge)
    ref, _ = quad(f, lo, hi, epsabs=1e-15, epsrel=1e-12)
    assert tail_integral(p, coeff, edge, x) == pytest.approx(ref, rel=1e-10, abs=1e-15)


def test_antisymmetry():
    x = np.linspace(-40, 40, 2049)
    even = 1 / (1 + x ** 2)
    odd = x / (1 + x ** 2)
    m = central_mask(x)
    xm = x[m]
    assert np.allclose(xm, -xm[::-1], rtol=0, atol=1e-12)
    h_even = hilbert_pv(even, x, tail_exponent=2)
    h_odd = hilbert_pv(odd, x, tail_exponent=1)
    assert np.max(np.abs(h_even + h_even[::-1])) <= 1e-10 * np.max(np.abs(h_even))
    assert np.max(np.abs(h_odd - h_odd[::-1])) <= 1e-10 * np.max(np.abs(h_odd))


def test_convergence_under_refinement():
    errs = []
    for n in (1024, 2048):
        r = kk_check(lorentzian_pair(ETA, np.linspace(-50 * ETA, 50 * ETA, n)))
        errs.append((r.rel_l2_forward, r.rel_l2_backward))
    assert errs[0][0] / errs[1][0] >= 3
    assert errs[0][1] / errs[1][1] >= 3


def test_tail_model_matters():
    s = lorentzian_pair(ETA, np.linspace(-20 * ETA, 20 * ETA, 2048))
    with_tail, without = kk_check(s), kk_check(s, tail=False)
    assert with_tail.rel_l2_backward < 0.1 * without.rel_l2_backward


def test_kk_check_lorentzian(lor):
    r = kk_check(lor)
    assert r.rel_l2_forward < 1e-3 and r.rel_l2_backward < 1e-3
    assert r.residual_forward.shape == lor.grid.shape
    m = central_mask(lor.grid)
    assert np.all(np.isnan(r.residual_forward[~m])) and np.all(np.isfinite(r.residual_forward[m]))
    c_left, c_right = r.tail_coefficients["forward"]
    assert c_left == pytest.approx(-ETA, rel=1e-2) and c_right == pytest.approx(-ETA, rel=1e-2)


def test_edge_evaluation(lor):
    with pytest.raises(EdgeEvaluation):
        hilbert_pv(lor.chi_double_prime, lor.grid, eval_points=lor.grid[:3])


def test_off_grid_evaluation(lor):
    with pytest.raises(ValueError):
        hilbert_pv(lor.chi_double_prime, lor.grid, eval_points=[0.25 * lor.step])


def test_bad_tail_fit():
    x = np.linspace(-10, 10, 512)
    with pytest.raises(BadTailFit):
        hilbert_pv(np.sin(3 * x), x, tail_exponent=2)
    with pytest.raises(BadTailFit):
        hilbert_pv(np.exp(-x ** 2), np.linspace(1, 21, 512), tail_exponent=2)


def test_spectrum_validation():
    x = np.linspace(-1, 1, 32)
    with pytest.raises(ValueError):
        SampledSpectrum(x, x, x)
    x = np.linspace(-1, 1, 128)
    with pytest.raises(ValueError):
        SampledSpectrum(x, x, np.full_like(x, np.nan))
    with pytest.raises(ValueError):
        SampledSpectrum(x ** 3, x, x)
    with pytest.raises(ValueError):
        SampledSpectrum(x, x, x, tail_prime=3)
