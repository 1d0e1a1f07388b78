"""Weak-probe susceptibility of an incoherently pumped, strongly driven two-level atom.

Levels: ``a`` ground, ``b`` excited. The pump (Rabi frequency ``omega1``,
detuning ``delta_pump`` from the atom) plays the role of the lasing mode; the
probe sits at ``delta`` from the pump. The density matrix obeys

    d(rho_ba)/dt = -(eta - i Delta) rho_ba - (i/2) W(t) n
    d(rho_bb)/dt = r rho_aa - Gamma rho_bb - Im(W(t) conj(rho_ba))
    d(rho_aa)/dt = -d(rho_bb)/dt

with ``W(t) = omega1 + omega2 exp(-i delta t)``, ``n = rho_bb - rho_aa``,
``eta = gamma_ba + r/2`` and ``theta = r + Gamma``.

Three routes to the probe response are provided and must agree: a closed form,
a 3x3 harmonic-balance solve, and brute-force time integration. Here
``chi_double_prime > 0`` is absorption and ``< 0`` is gain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, PoleOnRealAxis, SingularSystem
from .kk import SampledSpectrum

__all__ = [
    "PumpProbeParams",
    "ZerothOrder",
    "HarmonicState",
    "PoleReport",
    "zeroth_order",
    "probe_chi_closed",
    "probe_chi_solve",
    "probe_chi_timedomain",
    "probe_chi_linear",
    "response_poles",
    "effective_rabi",
    "spectrum_sweep",
    "chi2_extrema",
    "nearest_extremum",
]


@dataclass(frozen=True)
class PumpProbeParams:
    """Rates in rad/s. ``omega1`` is real and non-negative (the pump phase is a gauge)."""

    gamma_parallel: float
    gamma_ba: float
    r_op: float
    delta_pump: float
    omega1: float
    gain_g: float = 1.0

    def __post_init__(self):
        for name in ("gamma_parallel", "gamma_ba", "r_op", "delta_pump",
                     "omega1", "gain_g"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma_parallel <= 0 or self.gamma_ba <= 0:
            raise ValueError("decay rates must be > 0")
        if self.r_op < 0 or self.omega1 < 0:
            raise ValueError("r_op and omega1 must be >= 0")
        if self.gain_g <= 0:
            raise ValueError("gain_g must be > 0")

    @property
    def eta(self):
        return self.gamma_ba + 0.5 * self.r_op

    @property
    def theta(self):
        return self.r_op + self.gamma_parallel


@dataclass(frozen=True)
class ZerothOrder:
    n0: float
    rho_ba_0: complex


@dataclass(frozen=True)
class HarmonicState:
    """First-order amplitudes for probe strength ``omega2``.

    ``rho_ba_p1``/``rho_ba_m1`` multiply ``exp(-i delta t)``/``exp(+i delta t)``
    in ``rho_ba``; ``n1``/``n_m1`` likewise in ``n``. ``n_m1`` is recomputed
    from its own balance equation, so ``n_m1 - conj(n1)`` is a consistency check.
    """

    rho_ba_0: complex
    n0: float
    rho_ba_p1: np.ndarray
    rho_ba_m1: np.ndarray
    n1: np.ndarray
    n_m1: np.ndarray
    omega2: float

    @property
    def smallness(self):
        """|rho_ba^1| / |rho_ba^0|; NaN when the pump coherence vanishes."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.abs(self.rho_ba_p1) / abs(self.rho_ba_0) if self.rho_ba_0 else (
                np.full(np.shape(self.rho_ba_p1), np.nan))


@dataclass(frozen=True)
class PoleReport:
    roots: np.ndarray
    stable: bool


def effective_rabi(p: PumpProbeParams):
    """Dressed-state splitting sqrt(omega1**2 + delta_pump**2)."""
    return math.hypot(p.omega1, p.delta_pump)


def zeroth_order(p: PumpProbeParams) -> ZerothOrder:
    """Pump-only steady state."""
    eta, d = p.eta, p.delta_pump
    n0 = (p.r_op - p.gamma_parallel) / (p.theta + p.omega1 ** 2 * eta / (d * d + eta * eta))
    return ZerothOrder(n0, -0.5j * p.omega1 * n0 / (eta - 1j * d))


def _denominator(p, delta):
    eta, th, d, w2 = p.eta, p.theta, p.delta_pump, p.omega1 ** 2
    a = delta + 1j * th
    b = d + delta + 1j * eta
    c = delta - d + 1j * eta
    val = a * b * c - w2 * (delta + 1j * eta)
    mag = np.abs(delta)
    scale = (mag + th + abs(d) + eta) ** 3 + w2 * (mag + eta)
    return val, scale


def probe_chi_closed(p: PumpProbeParams, delta, n0=None):
    """Closed-form probe susceptibility.

    ``chi = G n0 gamma_ba / (Delta + delta + i eta) * [1 - R]`` with

        R = (omega1**2/2) (delta + 2i eta)(delta - Delta + i eta)
            / ((Delta - i eta) D(delta))
        D = (delta + i theta)(Delta + delta + i eta)(delta - Delta + i eta)
            - omega1**2 (delta + i eta)

    ``n0`` overrides the pump-only inversion (the result is linear in it).

    Raises
    ------
    PoleOnRealAxis
        If ``|D|`` falls below 1e-12 of its scale at any requested detuning.
    """
    dl = np.asarray(delta, dtype=float)
    if n0 is None:
        n0 = zeroth_order(p).n0
    eta, d, w2 = p.eta, p.delta_pump, p.omega1 ** 2
    den, scale = _denominator(p, dl)
    if np.any(np.abs(den) < 1e-12 * scale):
        bad = dl[np.abs(den) < 1e-12 * scale] if dl.ndim else dl
        raise PoleOnRealAxis(f"response denominator vanishes near delta={np.ravel(bad)[0]!r}")
    ratio = 0.5 * w2 * (dl + 2j * eta) * (dl - d + 1j * eta) / ((d - 1j * eta) * den)
    chi = p.gain_g * n0 * p.gamma_ba / (d + dl + 1j * eta) * (1.0 - ratio)
    return complex(chi) if chi.ndim == 0 else chi


def probe_chi_linear(p: PumpProbeParams, delta):
    """Weak-pump limit G n0 gamma_ba / (Delta + delta + i eta)."""
    dl = np.asarray(delta, dtype=float)
    chi = p.gain_g * zeroth_order(p).n0 * p.gamma_ba / (p.delta_pump + dl + 1j * p.eta)
    return complex(chi) if chi.ndim == 0 else chi


def probe_chi_solve(p: PumpProbeParams, delta, omega2=1.0):
    """Probe susceptibility from the first-order harmonic-balance equations.

    Unknowns ``(rho_ba^1, conj(rho_ba^-1), n^1)`` satisfy::

        [eta - i(Delta+delta)] rho1      = -(i/2)(omega1 n1 + omega2 n0)
        [eta + i(Delta-delta)] conj(rho-1) = (i/2) omega1 n1
        (theta - i delta) n1 = i omega1 conj(rho-1) - i omega1 rho1 + i omega2 conj(rho0)

    and ``chi = 2 G gamma_ba rho1 / omega2``. Returns ``(chi, HarmonicState)``.
    """
    dl = np.asarray(delta, dtype=float)
    flat = np.atleast_1d(dl)
    z = zeroth_order(p)
    eta, th, d, w1 = p.eta, p.theta, p.delta_pump, p.omega1
    k = flat.size
    mat = np.zeros((k, 3, 3), dtype=complex)
    mat[:, 0, 0] = eta - 1j * (d + flat)
    mat[:, 0, 2] = 0.5j * w1
    mat[:, 1, 1] = eta + 1j * (d - flat)
    mat[:, 1, 2] = -0.5j * w1
    mat[:, 2, 0] = 1j * w1
    mat[:, 2, 1] = -1j * w1
    mat[:, 2, 2] = th - 1j * flat
    rhs = np.zeros((k, 3), dtype=complex)
    rhs[:, 0] = -0.5j * omega2 * z.n0
    rhs[:, 2] = 1j * omega2 * np.conj(z.rho_ba_0)
    det = np.linalg.det(mat)
    scale = np.prod(np.linalg.norm(mat, axis=2), axis=1)
    if np.any(np.abs(det) <= 1e-14 * scale):
        raise SingularSystem("harmonic-balance matrix is singular; parameters are marginal")
    sol = np.linalg.solve(mat, rhs[..., None])[..., 0]
    rho1, rho_m1, n1 = sol[:, 0], np.conj(sol[:, 1]), sol[:, 2]
    n_m1 = (1j * w1 * np.conj(rho1) - 1j * w1 * rho_m1
            - 1j * omega2 * z.rho_ba_0) / (th + 1j * flat)
    chi = 2.0 * p.gain_g * p.gamma_ba * rho1 / omega2
    shape = dl.shape
    state = HarmonicState(z.rho_ba_0, z.n0, rho1.reshape(shape), rho_m1.reshape(shape),
                          n1.reshape(shape), n_m1.reshape(shape), omega2)
    chi = chi.reshape(shape)
    return (complex(chi) if chi.ndim == 0 else chi), state


def probe_chi_timedomain(p: PumpProbeParams, delta, omega2=None, dt=None,
                         n_settle=30, n_project=16, courant=0.04):
    """Probe susceptibility by integrating the density-matrix equations directly.

    Starts from the ground state, settles for ``n_settle`` times
    ``1/min(theta, eta)`` with fixed-step RK4, then projects ``rho_ba(t)`` onto
    ``exp(-i delta t)`` over ``n_project`` probe periods. The step divides the
    probe period exactly so the pump-only and ``exp(+i delta t)`` parts cancel.

    Raises
    ------
    NonConvergence
        If the two halves of the projection window disagree by more than 1e-3,
        or the trace drifts by more than 1e-9.
    """
    delta = float(delta)
    eta, th, dp, w1 = p.eta, p.theta, p.delta_pump, p.omega1
    if omega2 is None:
        omega2 = 1e-4 * max(w1, eta)
    if not 0 < omega2 <= 1e-3 * max(w1, eta) * (1 + 1e-12):
        raise ValueError("omega2 must lie in (0, 1e-3 * max(omega1, eta)]")
    if n_project < 2 or n_project % 2:
        raise ValueError("n_project must be an even count >= 2")
    fastest = max(eta, th, effective_rabi(p), abs(delta), abs(dp + delta))
    dt_max = courant / fastest
    if dt is not None:
        if dt * fastest >= 0.05:
            raise ValueError("dt too large: dt * fastest rate must stay below 0.05")
        dt_max = dt
    if delta == 0.0:
        if w1 != 0.0:
            raise ValueError("delta = 0 is degenerate with the pump unless omega1 = 0")
        step = dt_max
        n_window = int(math.ceil(n_project / min(th, eta) / step))
        n_window += n_window % 2
    else:
        period = 2.0 * math.pi / abs(delta)
        per = int(math.ceil(period / dt_max))
        step = period / per
        n_window = per * n_project
    n_set = int(math.ceil(n_settle / min(th, eta) / step))

    r, gp = p.r_op, p.gamma_parallel
    half = 0.5 * step
    rot_half = complex(math.cos(delta * half), -math.sin(delta * half))

    def deriv(raa, rbb, rba, w):
        d_ba = -(eta - 1j * dp) * rba - 0.5j * w * (rbb - raa)
        d_bb = r * raa - gp * rbb - (w * rba.conjugate()).imag
        return -d_bb, d_bb, d_ba

    raa, rbb, rba = 1.0, 0.0, 0j
    phase = 1.0 + 0j  # exp(-i delta t)
    acc = [0j, 0j]
    total = n_set + n_window
    for k in range(total):
        if k >= n_set:
            acc[(2 * (k - n_set)) // n_window] += rba / phase
        ph_mid = phase * rot_half
        ph_end = ph_mid * rot_half
        w0, wm, we = w1 + omega2 * phase, w1 + omega2 * ph_mid, w1 + omega2 * ph_end
        a1, b1, c1 = deriv(raa, rbb, rba, w0)
        a2, b2, c2 = deriv(raa + half * a1, rbb + half * b1, rba + half * c1, wm)
        a3, b3, c3 = deriv(raa + half * a2, rbb + half * b2, rba + half * c2, wm)
        a4, b4, c4 = deriv(raa + step * a3, rbb + step * b3, rba + step * c3, we)
        s6 = step / 6.0
        raa += s6 * (a1 + 2 * a2 + 2 * a3 + a4)
        rbb += s6 * (b1 + 2 * b2 + 2 * b3 + b4)
        rba += s6 * (c1 + 2 * c2 + 2 * c3 + c4)
        # re-anchor the phase periodically to stop roundoff accumulating
        if delta != 0.0 and (k + 1) % 4096 == 0:
            t = (k + 1) * step
            phase = complex(math.cos(delta * t), -math.sin(delta * t))
        else:
            phase = ph_end
    drift = abs(raa + rbb - 1.0)
    if drift > 1e-9:
        raise NonConvergence(f"trace drifted by {drift:.3g}")
    halves = [2.0 * a / n_window for a in acc]
    rho1 = 0.5 * (halves[0] + halves[1])
    # absolute floor covers n0 = 0, where the response vanishes identically
    floor = 1e-10 * omega2 / min(th, eta)
    if abs(halves[0] - halves[1]) > 1e-3 * max(abs(rho1), floor):
        raise NonConvergence(
            "probe projection not stationary between windows; raise n_settle")
    return 2.0 * p.gain_g * p.gamma_ba * rho1 / omega2


def response_poles(p: PumpProbeParams) -> PoleReport:
    """Roots in ``delta`` of the response denominator.

    ``stable`` is True when every root lies strictly in the lower half plane,
    i.e. the probe response is analytic in the upper half plane.
    """
    eta, th, d, w2 = p.eta, p.theta, p.delta_pump, p.omega1 ** 2
    if w2 == 0.0:
        roots = np.array([-1j * th, -d - 1j * eta, d - 1j * eta])
    else:
        poly = np.polymul(np.polymul([1, 1j * th], [1, d + 1j * eta]), [1, -d + 1j * eta])
        poly = np.polysub(poly, w2 * np.array([0, 0, 1, 1j * eta]))
        roots = np.roots(poly)
        dpoly = np.polyder(poly)
        for _ in range(3):
            dv = np.polyval(dpoly, roots)
            ok = dv != 0
            roots[ok] -= np.polyval(poly, roots[ok]) / dv[ok]
    roots = roots[np.lexsort((roots.real, roots.imag))]
    return PoleReport(roots, bool(np.all(roots.imag < 0)))


def spectrum_sweep(p: PumpProbeParams, delta_grid) -> SampledSpectrum:
    """Closed-form spectrum on a uniform probe-detuning grid."""
    grid = np.asarray(delta_grid, dtype=float)
    return SampledSpectrum.from_complex(grid, probe_chi_closed(p, grid))


def chi2_extrema(s: SampledSpectrum):
    """Interior local extrema of chi'' as ``(positions, values)``."""
    f = s.chi_double_prime
    slope = np.sign(np.diff(f))
    idx = np.flatnonzero(slope[1:] * slope[:-1] < 0) + 1
    return s.grid[idx], f[idx]


def nearest_extremum(s: SampledSpectrum, target):
    """The chi'' extremum closest to ``target`` as ``(position, value)``."""
    pos, val = chi2_extrema(s)
    if pos.size == 0:
        raise ValueError("spectrum has no interior extrema")
    k = int(np.argmin(np.abs(pos - target)))
    return float(pos[k]), float(val[k])
