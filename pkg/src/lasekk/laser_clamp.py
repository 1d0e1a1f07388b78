"""Steady-state gain-clamped profile of a single-mode ring laser.

Inside the lasing band the saturated gain is pinned to the cavity loss
(``chi_double_prime = -1/Q``); outside it the field is zero and the medium shows
its unsaturated Lorentzian response. The two branches meet continuously but with
a jump in slope at the band edges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import median_filter

from .errors import NonConvergence
from .medium import MediumParams, susceptibility

__all__ = [
    "CavityParams",
    "LasingBand",
    "NoLasing",
    "ClampedPoint",
    "SampledProfile",
    "lasing_band",
    "clamped_susceptibility",
    "sample_profile",
    "relax_field",
    "find_kinks",
    "detect_kinks",
    "edge_slope_jump",
]


@dataclass(frozen=True)
class CavityParams:
    q_factor: float
    nu0: float

    def __post_init__(self):
        for name in ("q_factor", "nu0"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")

    @property
    def linewidth(self):
        """Empty-cavity linewidth nu0 / Q (rad/s)."""
        return self.nu0 / self.q_factor


@dataclass(frozen=True)
class LasingBand:
    half_width: float

    @property
    def nu1_offset(self):
        return -self.half_width

    @property
    def nu2_offset(self):
        return self.half_width


@dataclass(frozen=True)
class NoLasing:
    """Gain never exceeds the cavity loss; ``qg`` is the threshold ratio Q*G."""

    qg: float


@dataclass(frozen=True)
class ClampedPoint:
    detuning: np.ndarray | float
    chi_prime: np.ndarray | float
    chi_double_prime: np.ndarray | float
    omega_sq: np.ndarray | float


@dataclass(frozen=True)
class SampledProfile:
    """Clamped profile on a uniform detuning grid."""

    detuning: np.ndarray
    chi_prime: np.ndarray
    chi_double_prime: np.ndarray
    omega_sq: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.detuning, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise ValueError("detuning grid must be 1-D with at least 2 points")
        h = np.diff(x)
        if np.any(h <= 0) or np.max(np.abs(h - h[0])) > 1e-12 * abs(h[0]) * x.size:
            raise ValueError("detuning grid must be strictly increasing and uniform")
        for name in ("chi_prime", "chi_double_prime", "omega_sq"):
            if np.shape(getattr(self, name)) != x.shape:
                raise ValueError(f"{name} must match the grid length")

    @property
    def step(self):
        return float(self.detuning[1] - self.detuning[0])


def _check_medium_cavity(m: MediumParams, c: CavityParams):
    if not math.isclose(m.nu0, c.nu0, rel_tol=1e-12):
        raise ValueError("medium and cavity must share nu0")


def lasing_band(m: MediumParams, c: CavityParams) -> LasingBand | NoLasing:
    """Band of detunings where unsaturated gain beats the cavity loss.

    The threshold case ``Q*G == 1`` is reported as :class:`NoLasing`.
    """
    _check_medium_cavity(m, c)
    qg = c.q_factor * m.gain_g
    if qg <= 1.0:
        return NoLasing(qg)
    return LasingBand(0.5 * m.gamma_medium * math.sqrt(qg - 1.0))


def clamped_susceptibility(m: MediumParams, c: CavityParams, detuning) -> ClampedPoint:
    """Lasing-mode susceptibility and intensity (as Rabi frequency squared).

    Inside the band ``chi'' = -1/Q``, ``chi' = 2x/(Q Gamma)`` and
    ``W = (Q G Gamma**2 - Gamma**2 - 4 x**2) / 2``, the field at which the
    saturated gain equals the loss. Outside, the unsaturated response with W = 0.

    Vectorised over ``detuning``. Below threshold every point takes the
    unsaturated branch with zero field.
    """
    _check_medium_cavity(m, c)
    x = np.asarray(detuning, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("detuning must be finite")
    q, g2 = c.q_factor, m.gamma_medium ** 2
    unsat = susceptibility(m, x, 0.0)
    # chi'' saturates with 2*W, so pinning chi'' = -1/Q gives half of Q G G^2 - G^2 - 4x^2
    w2 = 0.5 * (q * m.gain_g * g2 - g2 - 4.0 * x * x)
    inside = w2 > 0
    chi2 = np.where(inside, -1.0 / q, unsat.chi_double_prime)
    chi1 = np.where(inside, 2.0 * x / (q * m.gamma_medium), unsat.chi_prime)
    w2 = np.where(inside, w2, 0.0)
    if x.ndim == 0:
        return ClampedPoint(float(x), float(chi1), float(chi2), float(w2))
    return ClampedPoint(x, chi1, chi2, w2)


def sample_profile(m: MediumParams, c: CavityParams, grid) -> SampledProfile:
    p = clamped_susceptibility(m, c, np.asarray(grid, dtype=float))
    return SampledProfile(p.detuning, p.chi_prime, p.chi_double_prime, p.omega_sq)


def relax_field(m: MediumParams, c: CavityParams, detuning, e0_rabi_sq,
                dt=None, t_max=None, rtol=1e-10, collapse=1e-12):
    """Integrate the intensity form of the field amplitude equation to steady state.

    Solves ``d(W)/dt = -(nu0/Q) W - nu0 W chi''(detuning, W)`` with ``W`` the
    Rabi frequency squared (``nu ~ nu0`` in the prefactors), using fixed-step RK4.
    Stops when the per-step relative change drops below ``rtol`` (steady lasing)
    or ``W`` falls below ``collapse * e0_rabi_sq`` (field dies). Returns the
    terminal ``W``.

    Raises
    ------
    NonConvergence
        If neither stopping rule triggers before ``t_max``.
    """
    _check_medium_cavity(m, c)
    if not e0_rabi_sq > 0:
        raise ValueError("the seed e0_rabi_sq must be > 0; W = 0 is a fixed point")
    loss = c.linewidth
    rate = max(loss, 0.5 * m.nu0 * m.gain_g)
    if dt is None:
        dt = 0.05 / rate
    if dt * rate >= 0.1:
        raise ValueError(f"dt too large for stability: dt*rate = {dt * rate:.3g} >= 0.1")
    if t_max is None:
        t_max = 5000.0 / loss
    nu0, g, g2 = m.nu0, m.gain_g, m.gamma_medium ** 2
    base = g2 + 4.0 * float(detuning) ** 2

    def rhs(w):
        return -loss * w + nu0 * w * g * g2 / (2.0 * w + base)

    w = float(e0_rabi_sq)
    floor = collapse * w
    for _ in range(int(math.ceil(t_max / dt))):
        k1 = rhs(w)
        k2 = rhs(w + 0.5 * dt * k1)
        k3 = rhs(w + 0.5 * dt * k2)
        k4 = rhs(w + dt * k3)
        w_new = w + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if w_new < floor:
            return w_new
        if abs(w_new - w) <= rtol * w:
            return w_new
        w = w_new
    raise NonConvergence(
        f"field did not settle within t_max={t_max:.3g} s (W={w:.6g}); "
        "check the step size or move away from the band edge")


def find_kinks(x, f, factor=20.0, window=21):
    """Locations where ``f`` has a slope discontinuity.

    A node is flagged when its centred second difference exceeds ``factor``
    times the running median of ``|second difference|`` over ``window`` nodes.
    Adjacent flagged nodes are merged and the largest one is reported.
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if x.size < 5:
        raise ValueError("need at least 5 grid points")
    d2 = np.abs(f[2:] - 2.0 * f[1:-1] + f[:-2])
    # roundoff floor so exactly linear stretches do not trigger
    floor = 1e-11 * max(np.max(np.abs(f)), np.finfo(float).tiny)
    ref = np.maximum(median_filter(d2, size=window, mode="nearest"), floor)
    hits = np.flatnonzero(d2 > factor * ref)
    kinks = []
    start = 0
    for k in range(1, len(hits) + 1):
        if k == len(hits) or hits[k] != hits[k - 1] + 1:
            run = hits[start:k]
            kinks.append(x[1 + run[np.argmax(d2[run])]])
            start = k
    return kinks


def detect_kinks(profile: SampledProfile, which="chi_prime", **kw):
    """Kinks of ``profile.chi_prime`` or ``profile.chi_double_prime``."""
    if which not in ("chi_prime", "chi_double_prime"):
        raise ValueError("which must be 'chi_prime' or 'chi_double_prime'")
    return find_kinks(profile.detuning, getattr(profile, which), **kw)


def edge_slope_jump(m: MediumParams, c: CavityParams):
    """Magnitude of the jump in d(chi')/d(detuning) at the band edges."""
    band = lasing_band(m, c)
    if isinstance(band, NoLasing):
        return 0.0
    x, gam = band.half_width, m.gamma_medium
    d_unsat = 2.0 * m.gain_g * gam * (gam ** 2 - 4 * x * x) / (gam ** 2 + 4 * x * x) ** 2
    return abs(2.0 / (c.q_factor * gam) - d_unsat)
