"""Numerical Kramers-Kronig relations on uniformly sampled spectra.

The principal-value Hilbert transform

    H[f](x) = (1/pi) PV int f(x') / (x' - x) dx'

is evaluated by singularity subtraction on the sampled window plus analytic
integrals of a fitted power-law tail ``C / x'**p`` beyond it. For a response
analytic in the upper half plane, ``chi' = H[chi'']`` and ``chi'' = -H[chi']``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .errors import BadTailFit, EdgeEvaluation

__all__ = [
    "SampledSpectrum",
    "KKReport",
    "hilbert_pv",
    "kk_check",
    "lorentzian_pair",
    "tail_integral",
    "central_mask",
]

CENTRAL = 0.6
TAIL_FRACTION = 0.1
MAX_TAIL_MISFIT = 0.2


def _uniform_step(grid):
    x = np.asarray(grid, dtype=float)
    if x.ndim != 1 or x.size < 3:
        raise ValueError("grid must be 1-D with at least 3 points")
    h = np.diff(x)
    if np.any(h <= 0):
        raise ValueError("grid must be strictly increasing")
    step = (x[-1] - x[0]) / (x.size - 1)
    if np.max(np.abs(h - step)) > 1e-9 * step:
        raise ValueError("grid must be uniform")
    return x, step


def central_mask(grid, central=CENTRAL):
    """Boolean mask of grid nodes inside the central ``central`` fraction."""
    x = np.asarray(grid, dtype=float)
    a, b = x[0], x[-1]
    margin = 0.5 * (1.0 - central) * (b - a)
    return (x >= a + margin) & (x <= b - margin)


@dataclass(frozen=True)
class SampledSpectrum:
    """Complex response sampled on a uniform grid.

    ``tail_prime`` and ``tail_double_prime`` are the expected power-law decay
    exponents of the two parts far from resonance.
    """

    grid: np.ndarray
    chi_prime: np.ndarray
    chi_double_prime: np.ndarray
    tail_prime: int = 1
    tail_double_prime: int = 2

    def __post_init__(self):
        x, _ = _uniform_step(self.grid)
        if x.size < 64:
            raise ValueError("a spectrum needs at least 64 samples")
        for name in ("chi_prime", "chi_double_prime"):
            v = np.asarray(getattr(self, name))
            if v.shape != x.shape:
                raise ValueError(f"{name} must have the grid's length")
            if not np.all(np.isfinite(v)):
                raise ValueError(f"{name} contains non-finite values")
        for p in (self.tail_prime, self.tail_double_prime):
            if p not in (1, 2):
                raise ValueError("tail exponents must be 1 or 2")

    @classmethod
    def from_complex(cls, grid, chi, **kw):
        chi = np.asarray(chi)
        return cls(np.asarray(grid, dtype=float), chi.real.copy(), chi.imag.copy(), **kw)

    @property
    def chi(self):
        return self.chi_prime + 1j * self.chi_double_prime

    @property
    def step(self):
        return float(self.grid[1] - self.grid[0])


@dataclass(frozen=True)
class KKReport:
    """Both directions of the KK test.

    Reconstructions and residuals are NaN outside the central window.
    ``tail_coefficients`` maps ``"forward"``/``"backward"`` to the fitted
    ``(C_left, C_right)`` of the transformed input.
    """

    grid: np.ndarray
    chi_prime: np.ndarray
    chi_double_prime: np.ndarray
    chi_prime_kk: np.ndarray
    chi_double_prime_kk: np.ndarray
    residual_forward: np.ndarray
    residual_backward: np.ndarray
    rel_l2_forward: float
    rel_l2_backward: float
    tail_coefficients: dict = field(default_factory=dict)


def _tail_kernel(p, u):
    """J_p(u) = int_0^1 s**(p-1) / (1 - u s) ds for |u| < 1."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = np.abs(u) < 0.25
    us = u[small]
    acc = np.zeros_like(us)
    term = np.ones_like(us)
    for k in range(48):
        acc += term / (p + k)
        term = term * us
    out[small] = acc
    ul = u[~small]
    j1 = -np.log1p(-ul) / ul
    out[~small] = j1 if p == 1 else (j1 - 1.0) / ul
    return out


def tail_integral(p, coeff, edge, x):
    """Integral of ``coeff * x'**-p / (x' - x)`` from ``edge`` to +-infinity.

    ``edge > 0`` integrates over ``(edge, inf)``; ``edge < 0`` over
    ``(-inf, edge)``. Requires ``|x| < |edge|``.
    """
    x = np.asarray(x, dtype=float)
    if edge > 0:
        return coeff * edge ** -p * _tail_kernel(p, x / edge)
    e = -edge
    return -((-1) ** p) * coeff * e ** -p * _tail_kernel(p, -x / e)


def _fit_tail(x, f, p, side):
    if (side == "right" and np.any(x <= 0)) or (side == "left" and np.any(x >= 0)):
        raise BadTailFit(
            "tail window straddles zero; centre the grid on the resonance "
            "and widen it")
    g = x ** -float(p)
    coeff = float(np.dot(f, g) / np.dot(g, g))
    norm = np.linalg.norm(f)
    if norm > 0:
        misfit = np.linalg.norm(f - coeff * g) / norm
        if misfit > MAX_TAIL_MISFIT:
            raise BadTailFit(
                f"{side} tail misfit {misfit:.1%} exceeds {MAX_TAIL_MISFIT:.0%} "
                f"for a 1/x^{p} model; widen the window")
    return coeff


def _hilbert(samples, grid, eval_points, tail_exponent, tail=True):
    x, h = _uniform_step(grid)
    f = np.asarray(samples, dtype=float)
    if f.shape != x.shape:
        raise ValueError("samples and grid differ in length")
    n = x.size
    if eval_points is None:
        idx = np.flatnonzero(central_mask(x))
    else:
        e = np.atleast_1d(np.asarray(eval_points, dtype=float))
        idx = np.rint((e - x[0]) / h).astype(np.int64)
        if np.any(idx < 0) or np.any(idx >= n) or np.any(np.abs(x[idx] - e) > 1e-6 * h):
            raise ValueError("eval_points must coincide with grid nodes")
        if not np.all(central_mask(x)[idx]):
            raise EdgeEvaluation("evaluation outside the central 60% of the window")
    a, b = x[0], x[-1]
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    m = np.arange(-(n - 1), n, dtype=float)
    m[n - 1] = 1.0
    kern = -1.0 / m
    kern[n - 1] = 0.0
    # sum_{j != i} w_j (f_j - f_i) / (j - i), by convolution
    conv_wf = fftconvolve(w * f, kern)[n - 1:2 * n - 1]
    conv_w = fftconvolve(w, kern)[n - 1:2 * n - 1]
    df = np.gradient(f, h, edge_order=2)
    xi, fi = x[idx], f[idx]
    total = conv_wf[idx] - fi * conv_w[idx] + h * w[idx] * df[idx]
    total += fi * np.log((b - xi) / (xi - a))
    coeffs = (0.0, 0.0)
    if tail:
        k = max(2, int(round(TAIL_FRACTION * n)))
        c_left = _fit_tail(x[:k], f[:k], tail_exponent, "left")
        c_right = _fit_tail(x[-k:], f[-k:], tail_exponent, "right")
        total += tail_integral(tail_exponent, c_left, a, xi)
        total += tail_integral(tail_exponent, c_right, b, xi)
        coeffs = (c_left, c_right)
    return total / np.pi, idx, coeffs


def hilbert_pv(samples, grid, eval_points=None, tail_exponent=2, tail=True):
    """(1/pi) PV int f(x')/(x'-x) dx' of sampled ``f`` at ``eval_points``.

    Parameters
    ----------
    samples, grid : array_like
        Values of f on a uniform, increasing grid.
    eval_points : array_like, optional
        Grid nodes inside the central 60% of the window. Defaults to all of them.
    tail_exponent : {1, 2}
        Decay exponent of the power-law model fitted to the outer 10% on each
        side and integrated analytically to infinity.
    tail : bool
        Set False to truncate the integral at the window edges.

    Raises
    ------
    EdgeEvaluation
        An evaluation point lies outside the central window.
    BadTailFit
        The tail model misfits the outer samples by more than 20%.
    """
    return _hilbert(samples, grid, eval_points, tail_exponent, tail)[0]


def _rel_l2(residual, reference):
    den = np.linalg.norm(reference)
    num = np.linalg.norm(residual)
    if den == 0:
        return 0.0 if num == 0 else float("inf")
    return float(num / den)


def kk_check(s: SampledSpectrum, tail=True) -> KKReport:
    """Reconstruct each part of ``s`` from the other and measure the mismatch."""
    x = s.grid
    fwd, idx, c_fwd = _hilbert(s.chi_double_prime, x, None, s.tail_double_prime, tail)
    h_back, _, c_back = _hilbert(s.chi_prime, x, None, s.tail_prime, tail)
    bwd = -h_back
    nan = np.full(x.shape, np.nan)
    chi1_kk, chi2_kk, r_f, r_b = nan.copy(), nan.copy(), nan.copy(), nan.copy()
    chi1_kk[idx], chi2_kk[idx] = fwd, bwd
    r_f[idx] = fwd - s.chi_prime[idx]
    r_b[idx] = bwd - s.chi_double_prime[idx]
    return KKReport(
        grid=x,
        chi_prime=s.chi_prime,
        chi_double_prime=s.chi_double_prime,
        chi_prime_kk=chi1_kk,
        chi_double_prime_kk=chi2_kk,
        residual_forward=r_f,
        residual_backward=r_b,
        rel_l2_forward=_rel_l2(r_f[idx], s.chi_prime[idx]),
        rel_l2_backward=_rel_l2(r_b[idx], s.chi_double_prime[idx]),
        tail_coefficients={"forward": c_fwd, "backward": c_back},
    )


def lorentzian_pair(eta, grid) -> SampledSpectrum:
    """Exact pair of ``1 / (x + i eta)``: chi' = x/(x^2+eta^2), chi'' = -eta/(x^2+eta^2)."""
    if not eta > 0:
        raise ValueError("eta must be > 0")
    x = np.asarray(grid, dtype=float)
    den = x * x + eta * eta
    return SampledSpectrum(x, x / den, -eta / den)
