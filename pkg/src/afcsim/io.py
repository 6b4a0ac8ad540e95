"""CSV and JSON serialisation of spectra, index profiles, cavity spectra and traces.

All CSV numbers use plain decimal notation (no exponents) with at least nine
significant digits so files round-trip losslessly enough for re-ingestion.
"""
from __future__ import annotations

import csv
import json
import math

import numpy as np

from .spectra import AbsorptionProfile, make_grid

_SIG_DIGITS = 12


def fmt(x, sig=_SIG_DIGITS):
    """Plain decimal representation of ``x`` with ``sig`` significant digits."""
    x = float(x)
    if x == 0 or not math.isfinite(x):
        return f"{x:.{sig - 1}f}" if math.isfinite(x) else repr(x)
    decimals = sig - 1 - int(math.floor(math.log10(abs(x))))
    decimals = min(max(decimals, 0), 40)
    return f"{x:.{decimals}f}"


def write_profile_csv(profile, path):
    """``frequency_hz,alpha_per_m``, one row per grid point, ascending."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["frequency_hz", "alpha_per_m"])
        for f, a in zip(profile.grid.axis, profile.alpha):
            w.writerow([fmt(f), fmt(a)])


def read_absorption_csv(path):
    """Read ``frequency_hz,alpha_per_m`` rows; frequencies must be monotone.

    Returns ``(frequencies, alpha)`` as arrays. Unparseable rows raise
    ``ValueError`` naming the line number.
    """
    freqs, alphas = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: file is empty")
    start = 1 if rows[0] and not _is_number(rows[0][0]) else 0
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) < 2:
            raise ValueError(f"{path}: line {lineno}: expected two columns")
        try:
            freqs.append(float(row[0]))
            alphas.append(float(row[1]))
        except ValueError:
            raise ValueError(f"{path}: line {lineno}: unparseable number") from None
    if len(freqs) < 2:
        raise ValueError(f"{path}: need at least two data rows")
    f = np.asarray(freqs)
    a = np.asarray(alphas)
    df = np.diff(f)
    if np.all(df > 0):
        return f, a
    if np.all(df < 0):
        return f[::-1], a[::-1]
    raise ValueError(f"{path}: frequency column is not monotone")


def profile_from_samples(freqs, alpha, length, count=None):
    """Resample measured absorption onto a uniform power-of-two grid.

    Linear interpolation; the grid spans the sampled interval. ``count``
    defaults to the next power of two at or above the sample count.
    """
    freqs = np.asarray(freqs, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if count is None:
        count = 1 << max(1, int(np.ceil(np.log2(len(freqs)))))
    span = freqs[-1] - freqs[0]
    grid = make_grid(center=(freqs[0] + freqs[-1]) / 2, span=span, count=count)
    resampled = np.interp(grid.axis, freqs, alpha)
    return AbsorptionProfile(grid=grid, alpha=np.maximum(resampled, 0.0), length=length)


def write_index_csv(profile, index, path):
    """``frequency_hz,alpha_per_m,n_r,n_g``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["frequency_hz", "alpha_per_m", "n_r", "n_g"])
        for f, a, nr, ng in zip(profile.grid.axis, profile.alpha, index.n_r, index.n_g):
            w.writerow([fmt(f), fmt(a), fmt(nr), fmt(ng)])


def write_cavity_csv(spectra, path):
    """``frequency_hz,reflectance,transmittance,absorbed``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["frequency_hz", "reflectance", "transmittance", "absorbed"])
        for f, r, t, a in zip(spectra.grid.axis, spectra.reflectance,
                              spectra.transmittance, spectra.absorbed):
            w.writerow([fmt(f), fmt(r), fmt(t), fmt(a)])


def write_modes_csv(modes, path):
    """``mode_hz,fwhm_hz,peak_t``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["mode_hz", "fwhm_hz", "peak_t"])
        for f, fw, p in zip(modes.mode_frequencies, modes.mode_fwhm,
                            modes.mode_peak_transmission):
            w.writerow([fmt(f), fmt(fw), fmt(p)])


def write_trace_csv(trace, path):
    """``time_s,intensity,real,imag``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time_s", "intensity", "real", "imag"])
        for t, a in zip(trace.times, trace.samples):
            w.writerow([fmt(t), fmt(abs(a) ** 2), fmt(a.real), fmt(a.imag)])


def write_result_json(result, path):
    with open(path, "w") as fh:
        json.dump(result.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_candidates_csv(candidates, path):
    """``f_afc,d,r1,eta,delta_cav_hz`` for every feasible design candidate."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["f_afc", "d", "r1", "eta", "delta_cav_hz"])
        for c in candidates:
            w.writerow([fmt(c["f_afc"]), fmt(c["d"]), fmt(c["r1"]),
                        fmt(c["eta"]), fmt(c["delta_cav_hz"])])


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False
