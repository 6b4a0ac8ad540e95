"""End-to-end acceptance checks, one test per criterion, pinned tolerances.

Run ``pytest -s tests/test_acceptance.py -v`` to see one pass/fail line per
criterion. Criterion 9b documents a known gap between the rigorous transform
and the first-order slow-light formula for flat-bottomed pits (see the
assertion message); it fails by design rather than being papered over.
"""
import time

import numpy as np
import pytest
import scipy.constants as const

from afcsim import (AfcParams, CavitySpec, afc_efficiency_analytic, afc_metrics,
                    carve_pit, cavity_finesse, cavity_response, cavity_transfer,
                    cold_cavity_fsr, find_modes, gaussian_pulse, group_index,
                    impedance_mismatch, inhomogeneous_line, kramers_kronig, make_grid,
                    match_mirror, matched_finesse, matched_linewidth,
                    matched_linewidth_afc, measure_efficiency, medium_transfer,
                    optimize_afc, pit_depth_ratio, propagate, round_trip, spectrum,
                    tune_length_offset, write_afc, DesignConstraints, PulseTrace)

WAVELENGTH = 605.977e-9
N_BG = 1.8
L = 2e-3


def report(criterion, ok, detail):
    print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


@pytest.fixture(scope="module")
def cold_run():
    start = time.perf_counter()
    grid = make_grid(494.7266e12, 125e9, 1 << 20)
    profile = inhomogeneous_line(grid, 0.0, 9e9, length=L)
    index = kramers_kronig(profile, N_BG, WAVELENGTH)
    spec = CavitySpec(length=L, r1=0.8, r2=0.997, n_bg=N_BG)
    spectra = cavity_response(round_trip(index, profile, spec), spec)
    modes = find_modes(spectra, threshold=0.5)
    elapsed = time.perf_counter() - start
    return spec, spectra, modes, elapsed


@pytest.fixture(scope="module")
def pit_run():
    start = time.perf_counter()
    grid = make_grid(0.0, 200e6, 1 << 18)
    profile = inhomogeneous_line(grid, 2000.0, 9e9, length=L)
    profile = carve_pit(profile, 0.0, 18e6, residual_alpha=0.0, edge_width=0.5e6)
    index = kramers_kronig(profile, N_BG, WAVELENGTH)
    spec = CavitySpec(length=L, r1=0.8, r2=0.997, n_bg=N_BG)
    spec = tune_length_offset(index, profile, spec, target_hz=0.0, cycle_fraction=0.25)
    spectra = cavity_response(round_trip(index, profile, spec), spec)
    modes = find_modes(spectra, threshold=0.05)
    elapsed = time.perf_counter() - start
    return spec, index, modes, elapsed


@pytest.fixture(scope="module")
def storage_run():
    """Full comb-in-pit medium at the low-absorption spectral position."""
    start = time.perf_counter()
    grid = make_grid(0.0, 200e6, 1 << 18)
    profile = inhomogeneous_line(grid, 375.0, 9e9, length=L)
    profile = carve_pit(profile, 0.0, 18e6, residual_alpha=0.0, edge_width=0.5e6)
    params = AfcParams(delta=1e6, gamma=1e6 / 7, peak_count=4, d_peak=0.75)
    profile = write_afc(profile, params, 0.0)
    index = kramers_kronig(profile, N_BG, WAVELENGTH)
    pulse = gaussian_pulse(250e-9, 1.5e-6)
    bare_out = propagate(pulse, medium_transfer(profile, index))
    bare = measure_efficiency(bare_out, pulse, params.delta)
    elapsed = time.perf_counter() - start
    return profile, index, params, pulse, bare, elapsed


def test_c01_cold_cavity_fsr(cold_run):
    spec, spectra, modes, elapsed = cold_run
    spacing = float(np.mean(modes.spacings))
    ok = abs(spacing - 41.6e9) / 41.6e9 < 0.005 and elapsed < 2.0
    assert report("01 cold-cavity mode spacing", ok,
                  f"{spacing / 1e9:.4f} GHz vs 41.6 GHz, {elapsed:.2f} s on 2^20 points")


def test_c02_cold_cavity_finesse(cold_run):
    spec, spectra, modes, elapsed = cold_run
    f_formula = cavity_finesse(spec.r1 * spec.r2)
    f_airy = cold_cavity_fsr(spec) / float(modes.mode_fwhm[1])
    ok = (abs(f_formula - f_airy) / f_airy < 0.05
          and abs(f_formula - 25.0) / 25.0 < 0.15)
    assert report("02 cold-cavity finesse", ok,
                  f"formula {f_formula:.2f}, spectrum {f_airy:.2f}, quoted 25")


def test_c03_slow_light_mode_compression(pit_run):
    spec, index, modes, elapsed = pit_run
    in_pit = modes.mode_frequencies[np.abs(modes.mode_frequencies) <= 9e6]
    spacing = float(np.mean(np.diff(in_pit)))
    ratio = cold_cavity_fsr(spec) / spacing
    ok = (len(in_pit) >= 2 and 10e6 <= spacing <= 16e6 and ratio > 2500
          and elapsed < 10.0)
    assert report("03 slow-light mode compression", ok,
                  f"in-pit spacing {spacing / 1e6:.2f} MHz, compression {ratio:.0f}x, "
                  f"{elapsed:.2f} s")


def test_c04_matched_linewidth():
    first_order = matched_linewidth_afc(18e6, 7.0)
    ok = abs(first_order - 2e6) / 2e6 < 0.35
    d_pit = 0.75
    d_tilde = d_pit / 7.0
    via_finesse = matched_linewidth(18e6, matched_finesse(d_tilde).exact, d_pit)
    ok = ok and abs(via_finesse - first_order) / first_order < 0.01
    assert report("04 matched line width", ok,
                  f"{first_order / 1e6:.3f} MHz vs observed 2 MHz; "
                  f"finesse route {via_finesse / 1e6:.3f} MHz")


def test_c05_pit_depth_ratio_point():
    value = pit_depth_ratio(1.5e6, 8e6, 4.0)
    ok = value == pytest.approx(0.75, rel=1e-15)
    assert report("05 pit-depth ratio point", ok, f"{value!r}")


def test_c06_analytic_efficiency_point():
    value = afc_efficiency_analytic(0.75, 0.0, 7.0)
    frozen = 0.0089403151117890865  # 30-digit evaluation of the same expression
    ok = abs(value - frozen) <= 1e-12 and value < 0.01
    assert report("06 analytic efficiency point", ok, f"{value:.12f} (<1%)")


def test_c07_echo_timing(storage_run):
    profile, index, params, pulse, bare, elapsed = storage_run
    delay = bare.echo_time - pulse.centroid()
    ok = abs(delay - 1e-6) <= 8e-9 and elapsed < 5.0
    assert report("07 echo timing", ok,
                  f"first echo {delay * 1e6:.4f} us after the input, {elapsed:.2f} s")


def test_c08a_analytic_numeric_efficiency_table():
    grid = make_grid(0.0, 200e6, 1 << 18)
    worst = 0.0
    slowest = 0.0
    for f_afc in (4.0, 7.0, 10.0):
        for d_tilde in (0.2, 0.5, 1.0, 1.5):
            start = time.perf_counter()
            d = d_tilde * f_afc
            params = AfcParams(delta=1e6, gamma=1e6 / f_afc, peak_count=12, d_peak=d)
            base = inhomogeneous_line(grid, 0.0, 9e9, length=L)
            profile = write_afc(base, params, 0.0)
            index = kramers_kronig(profile, N_BG, WAVELENGTH)
            pulse = gaussian_pulse(250e-9, 1.5e-6)
            res = measure_efficiency(propagate(pulse, medium_transfer(profile, index)),
                                     pulse, params.delta)
            analytic = afc_efficiency_analytic(d, 0.0, f_afc)
            worst = max(worst, abs(res.efficiency - analytic) / analytic)
            slowest = max(slowest, time.perf_counter() - start)
    ok = worst <= 0.15 and slowest < 5.0
    assert report("08a simulated vs analytic efficiency (12 cases)", ok,
                  f"worst {worst * 100:.1f}% <= 15%, slowest case {slowest:.2f} s")


def test_c08b_matched_cavity_enhancement(storage_run):
    profile, index, params, pulse, bare, _ = storage_run
    spec = CavitySpec(length=L, r1=match_mirror(params.d_tilde, 1.0), r2=1.0, n_bg=N_BG)
    spec = tune_length_offset(index, profile, spec, target_hz=0.0)
    spectra = cavity_response(round_trip(index, profile, spec), spec)
    out = propagate(pulse, cavity_transfer(spectra, "reflection"))
    cav = measure_efficiency(out, pulse, params.delta)
    ratio = cav.efficiency / bare.efficiency
    ok = cav.efficiency >= 0.22 and ratio >= 20.0
    assert report("08b matched-cavity enhancement", ok,
                  f"cavity {cav.efficiency:.3f} >= 0.22, {ratio:.1f}-fold >= 20")


def test_c09a_kramers_kronig_oracle():
    grid = make_grid(0.0, 200e6, 1 << 16)
    alpha0, fwhm = 100.0, 1e6
    profile = inhomogeneous_line(grid, alpha0, fwhm, shape="lorentzian", length=L)
    index = kramers_kronig(profile, N_BG, WAVELENGTH)
    nu0 = const.c / WAVELENGTH
    kappa0 = const.c * alpha0 / (4 * np.pi * nu0)
    x = 2 * grid.axis / fwhm
    analytic = N_BG - kappa0 * x / (1 + x ** 2)
    central = np.abs(grid.axis) <= 0.8 * (grid.span / 2)
    err = np.max(np.abs(index.n_r[central] - analytic[central])) / (kappa0 / 2)
    ok = err < 0.01
    assert report("09a dispersive-partner oracle", ok,
                  f"max error {err * 100:.3f}% of the extremum")


def test_c09b_pit_group_index_vs_first_order_formula(pit_run):
    spec, index, modes, _ = pit_run
    measured = group_index(index, 0.0)
    first_order = const.c * 2000.0 / (2 * np.pi * 18e6)  # 5.30e3
    deviation = abs(measured - first_order) / first_order
    ok = deviation <= 0.30
    # Known gap: the rigorous transform of a flat-bottomed pit gives a center
    # slope 4 kappa0/(pi W), i.e. 2/pi of the Lorentzian-hole value the
    # first-order formula assumes, so the deviation sits near 38%, outside
    # the 30% band. The pit-average group index inferred from the in-pit mode
    # spacing (c0 / (2 L spacing)) does land within the band; the pointwise
    # center value cannot.
    assert report("09b pit-center group index vs 2*pi*Gamma/alpha", ok,
                  f"n_g {measured:.0f} vs {first_order:.0f}, off {deviation * 100:.1f}% "
                  f"(> 30%: flat-bottom pit slope is 2/pi of the Lorentzian-hole value)")


def test_c10_invariant_suite(pit_run, storage_run):
    checks = {}

    spec, index, modes, _ = pit_run
    grid = make_grid(0.0, 200e6, 1 << 14)
    profile = inhomogeneous_line(grid, 2000.0, 9e9, length=L)
    profile = carve_pit(profile, 0.0, 18e6, edge_width=0.5e6)
    idx = kramers_kronig(profile, N_BG, WAVELENGTH)
    cav = CavitySpec(length=L, r1=0.8, r2=0.997, n_bg=N_BG)
    spectra = cavity_response(round_trip(idx, profile, cav), cav)
    checks["passivity"] = spectra.absorbed.min() >= -1e-12

    pulse = gaussian_pulse(250e-9, 1.5e-6, carrier_detuning=0.5e6)
    freqs, amps = spectrum(pulse)
    df = freqs[1] - freqs[0]
    checks["parseval"] = abs(np.sum(np.abs(amps) ** 2) * df - pulse.energy) < 1e-10

    med_profile, med_index, params, med_pulse, bare, _ = storage_run
    transfer = medium_transfer(med_profile, med_index)
    out1 = propagate(med_pulse, transfer)
    scaled = PulseTrace(t0=med_pulse.t0, dt=med_pulse.dt, samples=2.0 * med_pulse.samples)
    out2 = propagate(scaled, transfer)
    checks["linearity"] = (np.max(np.abs(out2.samples - 2.0 * out1.samples))
                           < 1e-9 * np.max(np.abs(out2.samples)))

    d = 0.3
    flat = inhomogeneous_line(grid, 0.0, 9e9, length=L).with_alpha(np.full(grid.count, d / L))
    flat_index = kramers_kronig(flat, N_BG, WAVELENGTH)
    matched = CavitySpec(length=L, r1=float(np.exp(-2 * d)), r2=1.0, n_bg=N_BG)
    matched = tune_length_offset(flat_index, flat, matched, target_hz=0.0)
    ms = cavity_response(round_trip(flat_index, flat, matched), matched)
    checks["matching_null"] = ms.reflectance[grid.index_of(0.0)] < 1e-4

    est = afc_metrics(med_profile, (-2.5e6, 2.5e6))
    g = med_profile.grid
    checks["comb_round_trip"] = (abs(est.delta - params.delta) <= 2 * g.spacing
                                 and abs(est.gamma - params.gamma) <= 2 * g.spacing
                                 and abs(est.d_peak - params.d_peak) <= 0.02 * params.d_peak
                                 and abs(est.d0 - params.d0) <= 0.02 * params.d_peak)

    tight = optimize_afc(DesignConstraints(gamma_pit=18e6, alpha_available=375.0,
                                           length=L, min_peak_count=4, delta_min=1e6))
    loose = optimize_afc(DesignConstraints(gamma_pit=18e6, alpha_available=375.0,
                                           length=L, min_peak_count=4, delta_min=0.5e6))
    checks["optimizer_monotonicity"] = (loose.predicted_eta_bare
                                        >= tight.predicted_eta_bare)
    checks["design_matched"] = tight.mismatch_residual < 1e-6 and tight.bandwidth_ok

    failed = [k for k, v in checks.items() if not v]
    assert report("10 invariant suite", not failed,
                  "all quantified invariants hold" if not failed
                  else f"failed: {', '.join(failed)}")
