"""
Probe spectra of a strongly driven two-level medium
====================================================

A strong pump dresses the transition and the weak probe sees features at
delta = +-Omega'. Pumping the upper level incoherently inverts the medium
and the sideband signs swap.
"""
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lasekk import effective_rabi, response_poles, spectrum_sweep, zeroth_order
from lasekk.config import PRESETS, probe_params
from lasekk.pump_probe import nearest_extremum

fig, axes = plt.subplots(2, 2, figsize=(9, 7))
for ax, name in zip(axes.flat, ["fig4a", "fig4b", "fig4c", "fig4d"]):
    p = probe_params(PRESETS[name])
    wp = effective_rabi(p)
    d = np.linspace(-5 * wp, 5 * wp, 4096)
    s = spectrum_sweep(p, d)
    z = zeroth_order(p)

    # sign of chi'' at the feature nearest each sideband
    side = [nearest_extremum(s, t) for t in (-wp, wp)]
    signs = ["gain" if v < 0 else "absorption" for _, v in side]
    print(f"{name}: n0 = {z.n0:.4f}, stable = {response_poles(p).stable}, "
          f"sidebands: {signs[0]} / {signs[1]}")

    ax.plot(d / wp, s.chi_double_prime, label="chi''")
    ax.plot(d / wp, s.chi_prime, "--", label="chi'")
    ax.axhline(0, color="0.7", lw=0.5)
    ax.set_title(name)
    ax.set_xlabel("delta / Omega'")
axes[0, 0].legend()
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else "mollow_spectra.png"
fig.savefig(out, dpi=120)
print("wrote", out)
