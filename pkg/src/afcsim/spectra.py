"""Engineered absorption spectra: inhomogeneous lines, spectral pits, frequency combs.

All profiles live on a shared uniform :class:`FrequencyGrid`. Operations are
pure: they return new objects and never mutate their inputs, so everything in
this module is safe to use from concurrent workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.signal import find_peaks

from .errors import GridMismatchError, PreconditionError

LINE_SHAPES = ("gaussian", "lorentzian")
PEAK_SHAPES = ("gaussian", "square")


def _readonly(a):
    out = np.asarray(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency axis shared by all spectral profiles.

    Point ``i`` sits at ``center + (i - count/2) * spacing`` (Hz), so the axis
    is strictly increasing and symmetric about ``center`` up to one spacing.
    Grids centered near zero are detuning axes relative to an optical carrier;
    grids centered at hundreds of THz are absolute optical frequencies.
    """

    center: float
    spacing: float
    count: int

    def __post_init__(self):
        if not np.isfinite(self.center):
            raise ValueError("grid center must be finite")
        if not (self.spacing > 0):
            raise ValueError("grid spacing must be positive")
        if self.count < 2:
            raise ValueError("grid needs at least 2 points")

    @cached_property
    def axis(self):
        """Frequency of every grid point, ascending (Hz)."""
        i = np.arange(self.count, dtype=float)
        return _readonly(self.center + (i - self.count / 2) * self.spacing)

    @property
    def span(self):
        return self.spacing * self.count

    def index_of(self, frequency):
        """Index of the grid point closest to ``frequency``."""
        i = int(round((frequency - self.center) / self.spacing + self.count / 2))
        if i < 0 or i >= self.count:
            raise ValueError(f"frequency {frequency} Hz lies outside the grid")
        return i

    def contains(self, frequency):
        ax = self.axis
        return ax[0] <= frequency <= ax[-1]


def make_grid(center, span, count):
    """Build a uniform grid of ``count`` points covering ``span`` around ``center``.

    ``count`` must be a power of two so the Fourier-based dispersion transform
    downstream stays fast.
    """
    if not (span > 0):
        raise ValueError("make_grid: span must be positive")
    count = int(count)
    if count < 2 or (count & (count - 1)) != 0:
        raise ValueError("make_grid: count must be a power of two, at least 2")
    return FrequencyGrid(center=float(center), spacing=float(span) / count, count=count)


def _require_same_grid(op, a, b):
    if a != b:
        raise GridMismatchError(f"{op}: operands live on different frequency grids")


@dataclass(frozen=True)
class AbsorptionProfile:
    """Absorption coefficient (1/m) sampled on a grid, plus propagation length.

    The dimensionless optical depth at any point is ``alpha * length``
    (Beer-Lambert intensity exponent). ``alpha`` is non-negative everywhere:
    the medium is passive.
    """

    grid: FrequencyGrid
    alpha: np.ndarray
    length: float

    def __post_init__(self):
        alpha = _readonly(self.alpha)
        if alpha.shape != (self.grid.count,):
            raise ValueError("alpha must have one value per grid point")
        if not np.all(np.isfinite(alpha)):
            raise ValueError("alpha contains NaN or infinite entries")
        if np.any(alpha < 0):
            raise ValueError("alpha must be non-negative (passive medium)")
        if not (self.length > 0):
            raise ValueError("propagation length must be positive")
        object.__setattr__(self, "alpha", alpha)

    @property
    def depth(self):
        """Optical depth per point, ``alpha * length`` (dimensionless)."""
        return _readonly(self.alpha * self.length)

    def with_alpha(self, alpha):
        """Copy of this profile with a new absorption array (value semantics)."""
        return AbsorptionProfile(grid=self.grid, alpha=alpha, length=self.length)


@dataclass(frozen=True)
class AfcParams:
    """Parameters of a periodic comb of absorption peaks.

    ``delta`` is the peak separation, ``gamma`` the FWHM of a single peak,
    ``d_peak``/``d0`` the peak and background optical depths. The comb finesse
    ``delta / gamma`` must exceed one, i.e. the peaks are resolved.
    """

    delta: float
    gamma: float
    peak_count: int
    d_peak: float
    d0: float = 0.0
    peak_shape: str = "gaussian"

    def __post_init__(self):
        if not (self.gamma > 0):
            raise ValueError("gamma must be positive")
        if not (self.delta > self.gamma):
            raise ValueError("delta must exceed gamma (comb finesse > 1)")
        if self.peak_count < 0:
            raise ValueError("peak_count must be non-negative")
        if self.d0 < 0 or self.d_peak < self.d0:
            raise ValueError("need d_peak >= d0 >= 0")
        if self.peak_shape not in PEAK_SHAPES:
            raise ValueError(f"peak_shape must be one of {PEAK_SHAPES}")

    @property
    def f_afc(self):
        """Comb finesse delta/gamma."""
        return self.delta / self.gamma

    @property
    def d_tilde(self):
        """Effective depth (d_peak - d0) / f_afc seen by a broadband pulse."""
        return (self.d_peak - self.d0) / self.f_afc

    @property
    def bandwidth(self):
        return self.peak_count * self.delta


def inhomogeneous_line(grid, alpha_peak, fwhm, center=0.0, shape="gaussian", length=2e-3):
    """Broad absorption line of peak coefficient ``alpha_peak`` and width ``fwhm``.

    The maximum equals ``alpha_peak`` at ``center``; when the line fits inside
    the grid its half-maximum separation equals ``fwhm`` to within one grid
    spacing. Lines much wider than the grid are legal and come out nearly flat.
    """
    if alpha_peak < 0:
        raise ValueError("inhomogeneous_line: alpha_peak must be >= 0")
    if not (fwhm > 0):
        raise ValueError("inhomogeneous_line: fwhm must be positive")
    if fwhm < 4 * grid.spacing:
        raise PreconditionError("inhomogeneous_line: fwhm below 4 grid spacings is unresolvable")
    if shape not in LINE_SHAPES:
        raise ValueError(f"inhomogeneous_line: shape must be one of {LINE_SHAPES}")
    x = grid.axis - center
    if shape == "gaussian":
        alpha = alpha_peak * np.exp(-4 * np.log(2) * (x / fwhm) ** 2)
    else:
        alpha = alpha_peak / (1 + (2 * x / fwhm) ** 2)
    return AbsorptionProfile(grid=grid, alpha=alpha, length=float(length))


def carve_pit(profile, pit_center, pit_width, residual_alpha=0.0, edge_width=1e6):
    """Burn a transparency window into an absorption profile.

    ``alpha`` is set to ``residual_alpha`` inside ``pit_center +- pit_width/2``
    and rejoins the original profile through a raised-cosine ramp of width
    ``edge_width`` on each side. The default 1 MHz edge keeps the dispersion
    transform free of truncation ringing.
    """
    if not (pit_width > 0):
        raise ValueError("carve_pit: pit_width must be positive")
    if residual_alpha < 0:
        raise ValueError("carve_pit: residual_alpha must be >= 0")
    if edge_width < 0:
        raise ValueError("carve_pit: edge_width must be >= 0")
    ax = profile.grid.axis
    lo = pit_center - pit_width / 2
    hi = pit_center + pit_width / 2
    if lo - edge_width < ax[0] or hi + edge_width > ax[-1]:
        raise PreconditionError("carve_pit: pit (with edges) extends beyond the grid")
    inside = (ax >= lo) & (ax <= hi)
    if np.any(profile.alpha[inside] < residual_alpha):
        raise PreconditionError("carve_pit: residual_alpha exceeds the original alpha in the window")
    alpha = np.array(profile.alpha, dtype=float)
    alpha[inside] = residual_alpha
    if edge_width > 0:
        left = (ax >= lo - edge_width) & (ax < lo)
        s = (lo - ax[left]) / edge_width
        alpha[left] = residual_alpha + (alpha[left] - residual_alpha) * 0.5 * (1 - np.cos(np.pi * s))
        right = (ax > hi) & (ax <= hi + edge_width)
        s = (ax[right] - hi) / edge_width
        alpha[right] = residual_alpha + (alpha[right] - residual_alpha) * 0.5 * (1 - np.cos(np.pi * s))
    return profile.with_alpha(np.maximum(alpha, 0.0))


def write_afc(profile, params, comb_center=0.0):
    """Write a comb of absorption peaks into a transparent region of the profile.

    Adds ``params.peak_count`` peaks with spacing ``delta``, FWHM ``gamma`` and
    peak optical depth ``d_peak`` on top of a flat background of depth ``d0``
    applied across the comb bandwidth. The target band must already be
    (nearly) transparent, e.g. a previously carved pit.
    """
    if params.peak_count == 0:
        return profile.with_alpha(profile.alpha)
    grid = profile.grid
    if params.gamma < 4 * grid.spacing:
        raise PreconditionError("write_afc: gamma below 4 grid spacings is unresolvable")
    ax = grid.axis
    half_band = params.bandwidth / 2
    if comb_center - half_band < ax[0] or comb_center + half_band > ax[-1]:
        raise PreconditionError("write_afc: comb bandwidth extends beyond the grid")
    band = np.abs(ax - comb_center) <= half_band
    allowed = params.d0 + 0.05 * params.d_peak + 1e-12
    if np.any(profile.depth[band] > allowed):
        raise PreconditionError("write_afc: comb band is not transparent (comb wider than the pit?)")
    alpha = np.array(profile.alpha, dtype=float)
    contrast = (params.d_peak - params.d0) / profile.length
    for k in range(params.peak_count):
        ck = comb_center + (k - (params.peak_count - 1) / 2) * params.delta
        if params.peak_shape == "gaussian":
            alpha += contrast * np.exp(-4 * np.log(2) * ((ax - ck) / params.gamma) ** 2)
        else:
            alpha[np.abs(ax - ck) <= params.gamma / 2] += contrast
    alpha[band] += params.d0 / profile.length
    return profile.with_alpha(alpha)


def afc_metrics(profile, band):
    """Estimate comb parameters from a written profile.

    ``band`` is a ``(low, high)`` frequency interval containing the comb. Local
    maxima of the optical depth exceeding the band minimum by 10 % of the
    band's depth range count as peaks; ties sit on the lower-frequency sample.
    Returns an :class:`AfcParams` whose ``peak_shape`` is left at the default
    (the shape is not estimated).
    """
    lo, hi = band
    ax = profile.grid.axis
    sel = (ax >= lo) & (ax <= hi)
    if np.count_nonzero(sel) < 5:
        raise PreconditionError("afc_metrics: band contains too few grid points")
    d = profile.depth[sel]
    f = ax[sel]
    d_lo, d_hi = d.min(), d.max()
    if d_hi <= d_lo:
        raise PreconditionError("afc_metrics: flat profile, no peaks found")
    height = d_lo + 0.1 * (d_hi - d_lo)
    peaks, _ = find_peaks(d, height=height)
    if len(peaks) < 2:
        raise PreconditionError("afc_metrics: fewer than 2 peaks found in band")

    delta = float(np.mean(np.diff(f[peaks])))
    d_peak = float(np.mean(d[peaks]))
    gap_minima = [float(d[peaks[i]:peaks[i + 1]].min()) for i in range(len(peaks) - 1)]
    d0 = max(float(np.mean(gap_minima)), 0.0)

    widths = []
    for p in peaks:
        half = d0 + (d[p] - d0) / 2
        i = p
        while i > 0 and d[i] > half:
            i -= 1
        j = p
        while j < len(d) - 1 and d[j] > half:
            j += 1
        if d[i] > half or d[j] > half:
            continue  # no crossing inside the band on one side
        fl = np.interp(half, [d[i], d[i + 1]], [f[i], f[i + 1]])
        fr = np.interp(half, [d[j], d[j - 1]], [f[j], f[j - 1]])
        widths.append(fr - fl)
    if not widths:
        raise PreconditionError("afc_metrics: could not measure any peak width")
    gamma = float(np.mean(widths))
    return AfcParams(delta=delta, gamma=gamma, peak_count=len(peaks), d_peak=d_peak, d0=d0)
