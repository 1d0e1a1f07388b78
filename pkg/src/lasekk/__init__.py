"""Gain-clamped laser susceptibility, pump-probe spectra and numerical Kramers-Kronig tests."""
from .errors import (BadTailFit, EdgeEvaluation, LaseKKError, NonConvergence,
                     PoleOnRealAxis, SingularSystem)
from .kk import KKReport, SampledSpectrum, hilbert_pv, kk_check, lorentzian_pair
from .laser_clamp import (CavityParams, ClampedPoint, LasingBand, NoLasing, SampledProfile,
                          clamped_susceptibility, detect_kinks, lasing_band, relax_field,
                          sample_profile)
from .medium import MediumParams, Susceptibility, derive_coupling, susceptibility
from .pump_probe import (PumpProbeParams, effective_rabi, probe_chi_closed, probe_chi_solve,
                         probe_chi_timedomain, response_poles, spectrum_sweep, zeroth_order)

__version__ = "0.1.0"
