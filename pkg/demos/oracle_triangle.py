"""
Three ways to get the probe susceptibility
==========================================

Closed form, a 3x3 harmonic-balance solve, and brute-force RK4 of the
density matrix with a weak probe switched on. They should agree.
"""
import time

import numpy as np

from lasekk import effective_rabi, probe_chi_closed, probe_chi_solve, probe_chi_timedomain
from lasekk.config import PRESETS, probe_params

p = probe_params(PRESETS["fig4c"])
wp = effective_rabi(p)
deltas = wp * np.array([-1.5, -1.0, -0.5, 0.5, 1.0])

closed = probe_chi_closed(p, deltas)
solve, _ = probe_chi_solve(p, deltas)
print("max |closed - solve| / |solve| =", float(np.max(np.abs(closed - solve) / np.abs(solve))))

for d, s in zip(deltas, solve):
    t0 = time.perf_counter()
    td = probe_chi_timedomain(p, d)
    print(f"delta = {d / wp:+.2f} Omega': solve {complex(s):.6e}  "
          f"time domain {complex(td):.6e}  ({time.perf_counter() - t0:.2f} s)")

