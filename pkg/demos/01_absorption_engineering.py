"""Engineering an absorption spectrum: line, pit, comb.

Starting from the broad inhomogeneous absorption of a rare-earth-doped
crystal, we burn a transparency window (spectral pit) into it and then write
a periodic comb of narrow peaks inside the window. The comb is what stores a
pulse and re-emits it as an echo one comb period later.
"""
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from afcsim import AfcParams, afc_metrics, carve_pit, inhomogeneous_line, make_grid, write_afc

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# a 2 mm crystal with ~2000/m peak absorption over a ~9 GHz line, sampled
# around the line center on a 200 MHz window
grid = make_grid(0.0, 200e6, 2 ** 18)
line = inhomogeneous_line(grid, alpha_peak=2000.0, fwhm=9e9, length=2e-3)

# an 18 MHz pit with gentle half-MHz edges keeps the later dispersion
# transform free of ringing
pitted = carve_pit(line, pit_center=0.0, pit_width=18e6, residual_alpha=0.0,
                   edge_width=0.5e6)

# four comb teeth, 1 MHz apart, finesse 7, peak optical depth 0.75
params = AfcParams(delta=1e6, gamma=1e6 / 7, peak_count=4, d_peak=0.75)
comb = write_afc(pitted, params, comb_center=0.0)

est = afc_metrics(comb, (-3e6, 3e6))
print(f"written comb:   spacing {params.delta / 1e6:.3f} MHz, finesse {params.f_afc:.2f}")
print(f"measured back:  spacing {est.delta / 1e6:.3f} MHz, finesse {est.f_afc:.2f}, "
      f"effective depth {est.d_tilde:.4f}")

fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
mhz = grid.axis / 1e6
axes[0].plot(mhz, pitted.depth, lw=0.8, label="spectral pit")
axes[0].plot(mhz, line.depth, lw=0.8, ls="--", label="original line")
axes[0].set_xlim(-15, 15)
axes[0].set_xlabel("detuning (MHz)")
axes[0].set_ylabel("optical depth")
axes[0].legend()
axes[1].plot(mhz, comb.depth, lw=0.8)
axes[1].set_xlim(-3, 3)
axes[1].set_xlabel("detuning (MHz)")
axes[1].set_title("comb inside the pit")
fig.tight_layout()
fig.savefig(OUT / "01_absorption_engineering.png", dpi=150)
print(f"figure saved to {OUT / '01_absorption_engineering.png'}")
