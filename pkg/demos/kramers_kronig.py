"""
Kramers-Kronig on smooth and kinked spectra
===========================================

The probe spectrum is analytic in the upper half plane, so its real and
imaginary parts are Hilbert pairs. The clamped laser profile is not: the
reconstruction misses by tens of percent and the error gathers around the
band edges.
"""
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lasekk import SampledSpectrum, kk_check, lasing_band, lorentzian_pair, sample_profile, spectrum_sweep
from lasekk.config import PRESETS, laser_params, probe_params

n = 2 ** 14

# calibration on a Lorentzian first
lor = kk_check(lorentzian_pair(1.0, np.linspace(-50, 50, 4096)))
print(f"Lorentzian: forward {lor.rel_l2_forward:.1e}, backward {lor.rel_l2_backward:.1e}")

p = probe_params(PRESETS["fig4a"])
probe = kk_check(spectrum_sweep(p, np.linspace(-100 * p.eta, 100 * p.eta, n)))
print(f"probe fig4a: forward {probe.rel_l2_forward:.1e}, backward {probe.rel_l2_backward:.1e}")

m, c = laser_params(PRESETS["fig1"])
gam = m.gamma_medium
x = np.linspace(-10 * gam, 10 * gam, n)
prof = sample_profile(m, c, x)
laser = kk_check(SampledSpectrum(x, prof.chi_prime, prof.chi_double_prime))
hw = lasing_band(m, c).half_width
print(f"clamped laser: forward {laser.rel_l2_forward:.3f}, backward {laser.rel_l2_backward:.3f}")
print(f"ratio to the probe: {laser.rel_l2_forward / probe.rel_l2_forward:.1e}")

fig, ax = plt.subplots(2, 1, figsize=(6, 7))
ax[0].plot(x / hw, laser.chi_prime * c.q_factor, label="chi'")
ax[0].plot(x / hw, laser.chi_prime_kk * c.q_factor, "--", label="H[chi'']")
ax[0].set_ylabel("Q chi'")
ax[0].legend()
ax[1].plot(x / hw, laser.residual_forward * c.q_factor)
for e in (-1, 1):
    ax[1].axvline(e, color="0.6", lw=0.5)
ax[1].set_ylabel("Q residual")
ax[1].set_xlabel("detuning / half width")
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else "kramers_kronig.png"
fig.savefig(out, dpi=120)
print("wrote", out)
