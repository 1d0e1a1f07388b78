"""Saturable susceptibility of an inverted two-level gain medium.

Convention used everywhere in the package: ``chi = chi_prime + 1j * chi_double_prime``
with ``chi_double_prime < 0`` meaning gain. All frequencies are angular (rad/s)
and every spectral function takes the detuning ``nu - nu0`` rather than the
absolute optical frequency.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import epsilon_0, hbar

__all__ = [
    "MediumParams",
    "Susceptibility",
    "susceptibility",
    "derive_coupling",
    "rabi_sq_from_field",
]


def _require_positive(**values):
    for name, v in values.items():
        if not np.isfinite(v) or v <= 0:
            raise ValueError(f"{name} must be finite and > 0, got {v!r}")


@dataclass(frozen=True)
class MediumParams:
    """Two-level medium constants.

    Attributes
    ----------
    gamma_medium : float
        Linewidth of the transition (rad/s).
    nu0 : float
        Line centre (rad/s).
    gain_g : float
        Dimensionless gain parameter G; the unsaturated line-centre gain is
        ``chi_double_prime = -G``.
    """

    gamma_medium: float
    nu0: float
    gain_g: float

    def __post_init__(self):
        _require_positive(gamma_medium=self.gamma_medium, nu0=self.nu0,
                          gain_g=self.gain_g)

    @classmethod
    def from_microscopic(cls, n_density, dipole, gamma_medium, nu0):
        """Build from atom density (m^-3) and dipole moment (C m)."""
        _, gain = derive_coupling(n_density, dipole, gamma_medium)
        return cls(gamma_medium=gamma_medium, nu0=nu0, gain_g=gain)


@dataclass(frozen=True)
class Susceptibility:
    chi_prime: np.ndarray | float
    chi_double_prime: np.ndarray | float

    @property
    def complex(self):
        return np.asarray(self.chi_prime) + 1j * np.asarray(self.chi_double_prime)


def susceptibility(m: MediumParams, detuning, rabi_sq=0.0) -> Susceptibility:
    """Saturated two-level susceptibility at ``detuning`` with field strength ``rabi_sq``.

    Both arguments broadcast against each other; scalars in give scalars out.
    """
    x = np.asarray(detuning, dtype=float)
    w2 = np.asarray(rabi_sq, dtype=float)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w2))):
        raise ValueError("detuning and rabi_sq must be finite")
    if np.any(w2 < 0):
        raise ValueError("rabi_sq must be >= 0")
    g2 = m.gamma_medium ** 2
    lor = g2 / (2.0 * w2 + g2 + 4.0 * x * x)
    chi2 = -m.gain_g * lor
    chi1 = m.gain_g * (2.0 * x / m.gamma_medium) * lor
    if chi2.ndim == 0:
        return Susceptibility(float(chi1), float(chi2))
    return Susceptibility(chi1, chi2)


def derive_coupling(n_density, dipole, gamma_medium):
    """Return ``(xi, gain_g)`` with ``xi = dipole**2 / (hbar**2 * gamma)`` and
    ``gain_g = hbar * n_density * xi / epsilon_0``."""
    _require_positive(n_density=n_density, dipole=dipole, gamma_medium=gamma_medium)
    xi = dipole ** 2 / (hbar ** 2 * gamma_medium)
    return xi, hbar * n_density * xi / epsilon_0


def rabi_sq_from_field(field, gamma_medium, xi):
    """Rabi frequency squared ``gamma * E**2 * xi`` for field amplitude E (V/m)."""
    return gamma_medium * np.asarray(field, dtype=float) ** 2 * xi
