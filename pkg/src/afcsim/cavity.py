"""Two-mirror cavity around a dispersive absorber.

The complex round-trip factor combines the double-pass Beer-Lambert
attenuation with the dispersive phase from the real index; the reflection and
transmission spectra follow from the usual Airy sums. The sign convention is
fixed so that at impedance matching the directly reflected field and the field
leaking back out of the cavity cancel and the on-resonance reflectance
vanishes.

All spectral computations are pure; parameter sweeps over mirror
reflectivities, depths or the length offset are embarrassingly parallel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.constants as const
from scipy.signal import find_peaks

from .dispersion import IndexProfile
from .errors import GridMismatchError, PreconditionError
from .spectra import FrequencyGrid, _readonly


@dataclass(frozen=True)
class CavitySpec:
    """Mirror and geometry parameters of a plane Fabry-Perot cavity.

    ``length_offset`` models sub-wavelength tuning of the optical length (a
    wedge translated across the beam): it enters only as a carrier-referenced
    round-trip phase, so spectra are exactly periodic in half the material
    wavelength of the offset.
    """

    length: float
    r1: float
    r2: float
    n_bg: float
    length_offset: float = 0.0

    def __post_init__(self):
        if not (self.length > 0):
            raise ValueError("cavity length must be positive")
        for name, r in (("r1", self.r1), ("r2", self.r2)):
            if not (0.0 <= r <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1]")
        if not (self.n_bg > 0):
            raise ValueError("n_bg must be positive")
        if abs(self.length_offset) >= 2e-6:
            raise ValueError("length_offset is a sub-wavelength tuning parameter (|dL| < 2 um)")


@dataclass(frozen=True)
class RoundTripFactor:
    """Complex per-point round-trip field factor, tied to its grid."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.count,):
            raise ValueError("round-trip factor must have one value per grid point")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class CavitySpectra:
    """Complex reflection/transmission amplitudes of the loaded cavity."""

    grid: FrequencyGrid
    r_amp: np.ndarray
    t_amp: np.ndarray
    spec: CavitySpec

    def __post_init__(self):
        r = np.asarray(self.r_amp, dtype=complex)
        t = np.asarray(self.t_amp, dtype=complex)
        if r.shape != (self.grid.count,) or t.shape != (self.grid.count,):
            raise ValueError("spectra must have one value per grid point")
        absorbed = 1.0 - np.abs(r) ** 2 - np.abs(t) ** 2
        if absorbed.min() < -1e-9:
            raise ValueError("non-passive cavity response (|r|^2 + |t|^2 > 1)")
        r.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "r_amp", r)
        object.__setattr__(self, "t_amp", t)

    @property
    def reflectance(self):
        return _readonly(np.abs(self.r_amp) ** 2)

    @property
    def transmittance(self):
        return _readonly(np.abs(self.t_amp) ** 2)

    @property
    def absorbed(self):
        return _readonly(1.0 - np.abs(self.r_amp) ** 2 - np.abs(self.t_amp) ** 2)


@dataclass(frozen=True)
class CavityModeList:
    """Detected transmission resonances: position, width, height."""

    mode_frequencies: np.ndarray
    mode_fwhm: np.ndarray
    mode_peak_transmission: np.ndarray

    def __post_init__(self):
        f = _readonly(self.mode_frequencies)
        w = _readonly(self.mode_fwhm)
        p = _readonly(self.mode_peak_transmission)
        if np.any(np.diff(f) <= 0):
            raise ValueError("mode frequencies must be strictly increasing")
        if np.any(w <= 0):
            raise ValueError("mode widths must be positive")
        object.__setattr__(self, "mode_frequencies", f)
        object.__setattr__(self, "mode_fwhm", w)
        object.__setattr__(self, "mode_peak_transmission", p)

    @property
    def spacings(self):
        """Consecutive mode-frequency differences."""
        return _readonly(np.diff(self.mode_frequencies))

    def __len__(self):
        return len(self.mode_frequencies)


def _offset_phase(spec, carrier_hz):
    # carrier-referenced phase of the length offset; exactly 2*pi periodic in
    # half the material wavelength
    return 4 * np.pi * carrier_hz * spec.n_bg * spec.length_offset / const.c


def round_trip(index, profile, spec):
    """Complex round-trip field factor ``g`` of the loaded cavity.

    ``|g| = exp(-d)`` with ``d = alpha * length`` the single-pass intensity
    depth, and the phase is ``4 pi nu n_r L / c0`` plus the carrier-referenced
    offset phase of the wedge tuning.
    """
    _require_same(index, profile)
    if abs(index.n_bg - spec.n_bg) > 1e-12:
        raise PreconditionError("round_trip: index and cavity disagree on the background index")
    if abs(spec.length_offset) > const.c / index.carrier_hz:
        raise PreconditionError("round_trip: |length_offset| exceeds one vacuum wavelength")
    nu_abs = index.absolute_frequencies
    phase = 4 * np.pi * nu_abs * index.n_r * spec.length / const.c
    phase = phase + _offset_phase(spec, index.carrier_hz)
    g = np.exp(-profile.alpha * spec.length + 1j * phase)
    return RoundTripFactor(grid=index.grid, values=g)


def _require_same(index, profile):
    if index.grid != profile.grid:
        raise GridMismatchError("round_trip: index and absorption profiles live on different grids")


def cavity_response(rt, spec):
    """Reflection and transmission spectra from the round-trip factor.

    Reflection: ``(-sqrt(R1) + sqrt(R2) g) / (1 - sqrt(R1 R2) g)``; the minus
    sign on the direct reflection makes the impedance-matched response vanish
    on resonance. Transmission carries a half-round-trip field factor
    ``sqrt(g)``, reconstructed with an unwrapped phase so it stays continuous
    across the grid.
    """
    g = rt.values
    sq = np.sqrt(spec.r1 * spec.r2)
    denom = 1 - sq * g
    r = (-np.sqrt(spec.r1) + np.sqrt(spec.r2) * g) / denom
    half = np.sqrt(np.abs(g)) * np.exp(0.5j * np.unwrap(np.angle(g)))
    t = np.sqrt((1 - spec.r1) * (1 - spec.r2)) * half / denom
    return CavitySpectra(grid=rt.grid, r_amp=r, t_amp=t, spec=spec)


def find_modes(spectra, threshold=0.5):
    """Locate transmission resonances above ``threshold`` times the global maximum.

    Each mode's FWHM is measured on the transmitted intensity with linear
    interpolation between grid points at the half-maximum crossings.
    """
    T = spectra.transmittance
    ax = spectra.grid.axis
    height = threshold * T.max()
    peaks, _ = find_peaks(T, height=height)
    if len(peaks) == 0:
        raise PreconditionError("find_modes: no transmission maxima above threshold")
    freqs, widths, tops = [], [], []
    for p in peaks:
        half = T[p] / 2
        i = p
        while i > 0 and T[i] > half:
            i -= 1
        j = p
        while j < len(T) - 1 and T[j] > half:
            j += 1
        if T[i] > half or T[j] > half:
            continue  # truncated by the grid edge
        fl = np.interp(half, [T[i], T[i + 1]], [ax[i], ax[i + 1]])
        fr = np.interp(half, [T[j], T[j - 1]], [ax[j], ax[j - 1]])
        freqs.append(ax[p])
        widths.append(fr - fl)
        tops.append(T[p])
    if not freqs:
        raise PreconditionError("find_modes: every candidate mode is clipped by the grid")
    return CavityModeList(mode_frequencies=np.array(freqs), mode_fwhm=np.array(widths),
                          mode_peak_transmission=np.array(tops))


def cold_cavity_fsr(spec):
    """Empty-cavity mode spacing ``c0 / (2 n L)``."""
    return const.c / (2 * spec.n_bg * spec.length)


def cavity_finesse(r_round_trip):
    """Finesse ``pi R^(1/4) / (1 - sqrt(R))`` of a cavity with round-trip
    intensity reflectance ``R``.

    For two mirrors pass the product ``R1 * R2``; this reproduces the standard
    symmetric-cavity formula evaluated at the geometric-mean mirror.
    """
    if not (0 < r_round_trip < 1):
        raise ValueError("cavity_finesse: round-trip reflectance must lie in (0, 1)")
    return np.pi * r_round_trip ** 0.25 / (1 - np.sqrt(r_round_trip))


@dataclass(frozen=True)
class MatchedFinesse:
    """Finesse of an impedance-matched cavity, exact and to first order."""

    exact: float
    first_order: float
    small_depth: bool

    @property
    def relative_gap(self):
        return abs(self.exact - self.first_order) / self.exact


def matched_finesse(d_tilde):
    """Finesse when the mirror balance equals ``exp(-2 d_tilde)``.

    Returns the exact value together with the first-order estimate
    ``pi / d_tilde``; ``small_depth`` reports whether ``2 d_tilde << 1`` so the
    first-order form applies.
    """
    if not (d_tilde > 0):
        raise ValueError("matched_finesse: d_tilde must be positive")
    exact = cavity_finesse(np.exp(-2 * d_tilde))
    return MatchedFinesse(exact=float(exact), first_order=float(np.pi / d_tilde),
                          small_depth=bool(2 * d_tilde <= 0.3))


def matched_linewidth(pit_width, f_cav, d_pit):
    """Cavity line width ``pi Gamma / (F_cav d_pit)`` for a matched cavity."""
    if not (pit_width > 0 and f_cav > 0 and d_pit > 0):
        raise ValueError("matched_linewidth: all arguments must be positive")
    return np.pi * pit_width / (f_cav * d_pit)


def matched_linewidth_afc(pit_width, f_afc):
    """First-order matched-cavity line width ``Gamma / F_AFC``."""
    if not (pit_width > 0 and f_afc > 0):
        raise ValueError("matched_linewidth_afc: all arguments must be positive")
    return pit_width / f_afc


def impedance_mismatch(r1, r2, d):
    """On-resonance intensity reflectance for single-pass depth ``d``.

    Zero exactly when ``sqrt(r1) = sqrt(r2) exp(-d)``, i.e. when the direct
    reflection cancels against the field leaking out of the cavity.
    """
    if not (0 <= r1 <= 1 and 0 <= r2 <= 1):
        raise ValueError("impedance_mismatch: reflectivities must lie in [0, 1]")
    if d < 0:
        raise ValueError("impedance_mismatch: depth must be non-negative")
    a = np.exp(-d)
    return abs((-np.sqrt(r1) + np.sqrt(r2) * a) / (1 - np.sqrt(r1 * r2) * a)) ** 2


def pit_depth_ratio(delta_c, delta_qm, d_pit_c):
    """Pit depth at a second spectral position from the line-width ratio.

    ``d_pit_qm = d_pit_c * delta_c / delta_qm`` assuming pit width and cavity
    finesse are the same at both positions.
    """
    if not (delta_c > 0 and delta_qm > 0 and d_pit_c > 0):
        raise ValueError("pit_depth_ratio: all arguments must be positive")
    return d_pit_c * delta_c / delta_qm


def tune_length_offset(index, profile, spec, target_hz, cycle_fraction=0.0):
    """Length offset placing a resonance relative to ``target_hz``.

    With ``cycle_fraction = 0`` a transmission resonance is centered at the
    target frequency; fractional values shift the whole mode ladder by that
    fraction of one free spectral range (the wedge-translation knob).
    Returns a new :class:`CavitySpec` with the offset applied.
    """
    grid = index.grid
    i = grid.index_of(target_hz)
    nu = index.absolute_frequencies[i]
    phase = 4 * np.pi * nu * index.n_r[i] * spec.length / const.c
    want = 2 * np.pi * cycle_fraction
    offset_phase = (want - phase) % (2 * np.pi)
    d_l = offset_phase * const.c / (4 * np.pi * index.carrier_hz * spec.n_bg)
    return CavitySpec(length=spec.length, r1=spec.r1, r2=spec.r2,
                      n_bg=spec.n_bg, length_offset=d_l)
