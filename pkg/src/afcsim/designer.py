"""Impedance-matched comb designs under a bandwidth constraint.

The mirror balance is matched to the comb's effective round-trip absorption,
the cavity line width follows the first-order matched relation, and the comb
parameters are chosen by a deterministic grid search maximizing the analytic
bare-medium efficiency. Candidate evaluations are independent and could fan
out across workers; the reduction picks the maximum with a fixed tie-breaking
order, so results never depend on evaluation order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cavity import impedance_mismatch, matched_linewidth_afc
from .errors import PreconditionError
from .storage import afc_efficiency_analytic

_F_MIN, _F_MAX, _F_STEP = 2.0, 20.0, 0.25
_DEPTH_POINTS = 64
_DEPTH_DECADES = 3  # depth grid spans three decades below the available maximum


@dataclass(frozen=True)
class DesignConstraints:
    """What the material and the protocol leave free.

    ``gamma_pit`` is the widest transparency window the level structure
    allows; ``alpha_available`` the absorption coefficient at the chosen
    spectral position; ``min_peak_count`` and ``delta_min`` the smallest comb
    that still meets the application's bandwidth and storage-time needs.
    """

    gamma_pit: float
    alpha_available: float
    length: float
    d0: float = 0.0
    r2: float = 1.0
    min_peak_count: int = 4
    delta_min: float = 1e6

    def __post_init__(self):
        if not (self.gamma_pit > 0 and self.alpha_available > 0 and self.length > 0):
            raise ValueError("gamma_pit, alpha_available and length must be positive")
        if self.d0 < 0:
            raise ValueError("d0 must be non-negative")
        if not (0 < self.r2 <= 1):
            raise ValueError("r2 must lie in (0, 1]")
        if self.min_peak_count < 1 or self.delta_min <= 0:
            raise ValueError("min_peak_count and delta_min must be positive")


@dataclass(frozen=True)
class DesignResult:
    """A matched design: mirror, comb, and its predicted performance."""

    r1: float
    f_afc: float
    delta: float
    d: float
    predicted_eta_bare: float
    predicted_delta_cav: float
    bandwidth_ok: bool
    mismatch_residual: float

    def as_dict(self):
        return {
            "r1": self.r1,
            "f_afc": self.f_afc,
            "delta_hz": self.delta,
            "d": self.d,
            "predicted_eta_bare": self.predicted_eta_bare,
            "predicted_delta_cav_hz": self.predicted_delta_cav,
            "bandwidth_ok": self.bandwidth_ok,
            "mismatch_residual": self.mismatch_residual,
        }


def match_mirror(d_tilde, r2):
    """Input-mirror reflectance balancing the comb's round-trip absorption.

    Returns ``r2 * exp(-4 d_tilde)`` so that the field balance
    ``sqrt(r1) = sqrt(r2) exp(-2 d_tilde)`` holds with the round-trip
    effective depth ``2 d_tilde``; by construction
    ``impedance_mismatch(match_mirror(dt, r2), r2, 2 dt) == 0``.
    """
    if d_tilde < 0:
        raise ValueError("match_mirror: d_tilde must be non-negative")
    if not (0 < r2 <= 1):
        raise ValueError("match_mirror: r2 must lie in (0, 1]")
    return r2 * np.exp(-4 * d_tilde)


def bandwidth_check(delta, peak_count, delta_cav):
    """True when a comb of ``peak_count`` teeth at spacing ``delta`` fits
    inside the cavity line width ``delta_cav`` (inclusive)."""
    if not (delta > 0 and delta_cav > 0) or peak_count < 1:
        raise ValueError("bandwidth_check: arguments must be positive")
    return peak_count * delta <= delta_cav


def design_candidates(constraints):
    """All feasible (finesse, depth) candidates of the deterministic search.

    Finesse runs over ``[2, 20]`` in steps of 0.25 and the peak depth over 64
    log-spaced values up to ``alpha_available * length``. A candidate is
    feasible when the minimal comb fits inside the first-order matched cavity
    line width. Yields dicts sorted by ascending finesse, then depth.
    """
    d_max = constraints.alpha_available * constraints.length
    f_grid = np.arange(_F_MIN, _F_MAX + 1e-12, _F_STEP)
    d_grid = np.logspace(np.log10(d_max) - _DEPTH_DECADES, np.log10(d_max), _DEPTH_POINTS)
    out = []
    for f in f_grid:
        delta_cav = matched_linewidth_afc(constraints.gamma_pit, f)
        if not bandwidth_check(constraints.delta_min, constraints.min_peak_count, delta_cav):
            continue
        for d in d_grid:
            if d < constraints.d0:
                continue
            d_tilde = (d - constraints.d0) / f
            r1 = match_mirror(d_tilde, constraints.r2)
            eta = afc_efficiency_analytic(d, constraints.d0, f)
            out.append({"f_afc": float(f), "d": float(d), "r1": float(r1),
                        "eta": float(eta), "delta_cav_hz": float(delta_cav)})
    return out


def optimize_afc(constraints):
    """Best matched design under the constraints.

    Maximizes the analytic bare-medium efficiency over the candidate grid;
    ties break toward smaller comb finesse, then smaller depth (first hit
    wins, candidates are enumerated in that order).
    """
    candidates = design_candidates(constraints)
    if not candidates:
        raise PreconditionError("optimize_afc: no feasible design "
                                "(comb bandwidth exceeds every matched line width)")
    best = candidates[0]
    for c in candidates[1:]:
        if c["eta"] > best["eta"]:
            best = c
    d_tilde = (best["d"] - constraints.d0) / best["f_afc"]
    residual = impedance_mismatch(best["r1"], constraints.r2, 2 * d_tilde)
    return DesignResult(
        r1=best["r1"],
        f_afc=best["f_afc"],
        delta=constraints.delta_min,
        d=best["d"],
        predicted_eta_bare=best["eta"],
        predicted_delta_cav=best["delta_cav_hz"],
        bandwidth_ok=bandwidth_check(constraints.delta_min, constraints.min_peak_count,
                                     best["delta_cav_hz"]),
        mismatch_residual=float(residual),
    )
