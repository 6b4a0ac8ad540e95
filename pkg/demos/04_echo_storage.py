"""Storing a pulse in a comb, with and without the cavity.

A 250 ns pulse tuned to a four-tooth comb (1 MHz spacing) is re-emitted as an
echo 1 us later. As a bare single pass the weak comb returns under a percent
of the energy; inside an impedance-matched cavity the same comb returns most
of it, a better than 20-fold enhancement.
"""
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from afcsim import (AfcParams, CavitySpec, carve_pit, cavity_response, cavity_transfer,
                    enhancement_factor, gaussian_pulse, inhomogeneous_line,
                    kramers_kronig, make_grid, match_mirror, measure_efficiency,
                    medium_transfer, propagate, round_trip, tune_length_offset,
                    write_afc)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# comb written inside a pit at a weakly absorbing spectral position
grid = make_grid(0.0, 200e6, 2 ** 18)
profile = inhomogeneous_line(grid, 375.0, 9e9, length=2e-3)
profile = carve_pit(profile, 0.0, 18e6, edge_width=0.5e6)
params = AfcParams(delta=1e6, gamma=1e6 / 7, peak_count=4, d_peak=0.75)
profile = write_afc(profile, params, 0.0)
index = kramers_kronig(profile, 1.8, 605.977e-9)

pulse = gaussian_pulse(250e-9, center_time=1.5e-6)

# bare medium: one pass through the crystal
bare_out = propagate(pulse, medium_transfer(profile, index))
bare = measure_efficiency(bare_out, pulse, params.delta)

# matched cavity: mirror balanced against the comb's round-trip absorption,
# a resonance tuned onto the comb center, echo collected in reflection
spec = CavitySpec(length=2e-3, r1=match_mirror(params.d_tilde, 1.0), r2=1.0, n_bg=1.8)
spec = tune_length_offset(index, profile, spec, target_hz=0.0)
spectra = cavity_response(round_trip(index, profile, spec), spec)
cav_out = propagate(pulse, cavity_transfer(spectra, "reflection"))
cav = measure_efficiency(cav_out, pulse, params.delta)

print(f"bare single pass: {bare.efficiency * 100:5.2f}% echo at "
      f"{(bare.echo_time - pulse.centroid()) * 1e6:.3f} us")
print(f"matched cavity:   {cav.efficiency * 100:5.2f}% echo, "
      f"direct reflection {cav.direct_fraction * 100:.1f}%")
print(f"enhancement:      {enhancement_factor(cav.efficiency, bare.efficiency):.0f}-fold")

fig, ax = plt.subplots(figsize=(8, 4.5))
us = pulse.times * 1e6
ax.plot(us, pulse.intensity / pulse.intensity.max(), "r--", lw=0.8, label="input")
ax.plot(us, cav_out.intensity / pulse.intensity.max(), "k", lw=0.9, label="cavity reflection")
ax.plot(us, 20 * bare_out.intensity / pulse.intensity.max(), "C0", lw=0.8,
        label="bare output (x20)")
ax.set_xlim(1.0, 4.0)
ax.set_xlabel("time (us)")
ax.set_ylabel("intensity (normalised)")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "04_echo_storage.png", dpi=150)
print(f"figure saved to {OUT / '04_echo_storage.png'}")
