"""
Gain clamping in a homogeneously broadened laser
================================================

Inside the lasing band the saturated medium pins chi'' to the cavity loss
-1/Q. Outside it the field dies and the bare two-level line comes back.
The joins are continuous but the slope jumps.
"""
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lasekk import detect_kinks, lasing_band, relax_field, sample_profile, susceptibility
from lasekk.config import PRESETS, laser_params

m, c = laser_params(PRESETS["fig1"])
gam = m.gamma_medium
band = lasing_band(m, c)
print(f"Q = {c.q_factor:.3g}, QG = {c.q_factor * m.gain_g:.3g}")
print(f"lasing band half width = {band.half_width / gam:.6f} Gamma")

# clamped profile next to the unsaturated one
x = np.linspace(-3 * gam, 3 * gam, 4001)
prof = sample_profile(m, c, x)
bare = susceptibility(m, x)

# the kinks sit at the band edges
for which in ("chi_prime", "chi_double_prime"):
    ks = detect_kinks(prof, which)
    print(which, "kinks at", np.round(np.array(ks) / band.half_width, 4), "x half width")

# the clamped intensity is also where the field equation settles
for frac in (0.0, 0.5, 0.9):
    w = relax_field(m, c, frac * band.half_width, 1e-3 * gam ** 2)
    print(f"x = {frac:.1f} hw: relaxed Omega^2 / Gamma^2 = {w / gam ** 2:.6f}")

fig, ax = plt.subplots(3, 1, sharex=True, figsize=(6, 8))
ax[0].plot(x / gam, prof.chi_prime * c.q_factor, label="clamped")
ax[0].plot(x / gam, bare.chi_prime * c.q_factor, "--", label="unsaturated")
ax[0].set_ylabel("Q chi'")
ax[0].legend()
ax[1].plot(x / gam, -prof.chi_double_prime * c.q_factor)
ax[1].plot(x / gam, -bare.chi_double_prime * c.q_factor, "--")
ax[1].set_ylabel("-Q chi''")
ax[2].plot(x / gam, prof.omega_sq / gam ** 2)
ax[2].set_ylabel("Omega^2 / Gamma^2")
ax[2].set_xlabel("detuning / Gamma")
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else "gain_clamping.png"
fig.savefig(out, dpi=120)
print("wrote", out)
