"""Scenario configs: one JSON file in, a directory of CSV/JSON artifacts out.

A scenario describes material, pit, comb, cavity and pulse in SI base units
(Hz, m, s, 1/m). Validation happens before any computation and all artifacts
are buffered and written only after the full pipeline succeeded, so a failing
run leaves no partial output. Reruns of the same config are bit-identical;
the manifest records a hash of the config and of every artifact.
"""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from . import io as aio
from .cavity import (CavitySpec, cavity_finesse, cavity_response, cold_cavity_fsr,
                     find_modes, round_trip, tune_length_offset)
from .designer import DesignConstraints, design_candidates, optimize_afc
from .dispersion import group_index, kramers_kronig
from .errors import ConfigError, PreconditionError
from .spectra import AfcParams, carve_pit, inhomogeneous_line, make_grid, write_afc
from .storage import (afc_efficiency_analytic, cavity_transfer, enhancement_factor,
                      gaussian_pulse, measure_efficiency, medium_transfer, propagate)

_DEFAULT_GRID = {"center_hz": 0.0, "span_hz": 2.0e8, "count": 1 << 18}
_DEFAULT_WAVELENGTH = 605.977e-9

_KNOWN_OUTPUTS = ("absorption_csv", "index_csv", "cavity_csv", "modes_csv",
                  "bare_trace_csv", "bare_result_json", "cavity_trace_csv",
                  "cavity_result_json", "summary_json")


def load_config(path):
    try:
        text = Path(path).read_text()
    except OSError:
        raise
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: not valid JSON ({exc})") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config: top level must be a JSON object")
    return cfg


_MISSING = object()


def _field(cfg, dotted, kind=float, default=_MISSING):
    node = cfg
    parts = dotted.split(".")
    for p in parts[:-1]:
        node = node.get(p, {}) if isinstance(node, dict) else {}
    if not isinstance(node, dict) or parts[-1] not in node:
        if default is not _MISSING:
            return default
        raise ConfigError(f"config field '{dotted}' is missing")
    value = node[parts[-1]]
    try:
        if kind is bool:
            if not isinstance(value, bool):
                raise TypeError
            return value
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"config field '{dotted}' has the wrong type") from None


def set_by_path(cfg, dotted, value):
    """Set a dotted-path field (used by parameter sweeps)."""
    node = cfg
    parts = dotted.split(".")
    for p in parts[:-1]:
        if p not in node or not isinstance(node[p], dict):
            raise ConfigError(f"config field '{dotted}' does not exist")
        node = node[p]
    if parts[-1] not in node:
        raise ConfigError(f"config field '{dotted}' does not exist")
    node[parts[-1]] = value


def run_scenario(cfg, out_dir):
    """Execute one validated scenario; returns the manifest dictionary."""
    name = _field(cfg, "name", str, "scenario")
    if "design" in cfg:
        artifacts, summary = _run_design(cfg)
    elif "eq9_grid" in cfg:
        artifacts, summary = _run_eq9_grid(cfg)
    else:
        artifacts, summary = _run_physics(cfg)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {}
    for fname, writer in artifacts:
        path = out / fname
        writer(path)
        written[fname] = _sha256_file(path)
    manifest = {
        "scenario": name,
        "config_sha256": hashlib.sha256(
            json.dumps(cfg, sort_keys=True).encode()).hexdigest(),
        "outputs": written,
        "summary": summary,
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def _run_physics(cfg):
    grid = make_grid(center=_field(cfg, "grid.center_hz", float, _DEFAULT_GRID["center_hz"]),
                     span=_field(cfg, "grid.span_hz", float, _DEFAULT_GRID["span_hz"]),
                     count=_field(cfg, "grid.count", int, _DEFAULT_GRID["count"]))
    alpha_peak = _field(cfg, "material.alpha_per_m")
    n_bg = _field(cfg, "material.n_bg")
    length = _field(cfg, "material.length_m")
    wavelength = _field(cfg, "material.wavelength_m", float, _DEFAULT_WAVELENGTH)
    line_fwhm = _field(cfg, "material.inhomogeneous_fwhm_hz", float, 9e9)
    line_shape = _field(cfg, "material.line_shape", str, "gaussian")
    line_center = _field(cfg, "material.line_center_hz", float, grid.center)

    profile = inhomogeneous_line(grid, alpha_peak, line_fwhm, center=line_center,
                                 shape=line_shape, length=length)
    if "pit" in cfg:
        profile = carve_pit(profile,
                            pit_center=_field(cfg, "pit.center_hz"),
                            pit_width=_field(cfg, "pit.width_hz"),
                            residual_alpha=_field(cfg, "pit.residual_alpha_per_m", float, 0.0),
                            edge_width=_field(cfg, "pit.edge_width_hz", float, 1e6))
    params = None
    comb_center = grid.center
    if "afc" in cfg:
        params = AfcParams(delta=_field(cfg, "afc.delta_hz"),
                           gamma=_field(cfg, "afc.gamma_hz"),
                           peak_count=_field(cfg, "afc.peak_count", int),
                           d_peak=_field(cfg, "afc.d_peak"),
                           d0=_field(cfg, "afc.d0", float, 0.0),
                           peak_shape=_field(cfg, "afc.peak_shape", str, "gaussian"))
        comb_center = _field(cfg, "afc.center_hz", float, grid.center)
        profile = write_afc(profile, params, comb_center)

    index = kramers_kronig(profile, n_bg, wavelength)

    summary = {"grid_points": grid.count, "grid_span_hz": grid.span}
    artifacts = []
    outputs = cfg.get("outputs", ["summary_json"])
    for o in outputs:
        if o not in _KNOWN_OUTPUTS:
            raise ConfigError(f"config field 'outputs' contains unknown artifact '{o}'")

    spectra = None
    if "cavity" in cfg:
        spec = CavitySpec(length=_field(cfg, "cavity.length_m", float, length),
                          r1=_field(cfg, "cavity.r1"),
                          r2=_field(cfg, "cavity.r2"),
                          n_bg=n_bg,
                          length_offset=_field(cfg, "cavity.length_offset_m", float, 0.0))
        if "tune" in cfg["cavity"]:
            spec = tune_length_offset(index, profile, spec,
                                      target_hz=_field(cfg, "cavity.tune.target_hz"),
                                      cycle_fraction=_field(cfg, "cavity.tune.cycle_fraction",
                                                            float, 0.0))
        rt = round_trip(index, profile, spec)
        spectra = cavity_response(rt, spec)
        summary["cold_fsr_hz"] = cold_cavity_fsr(spec)
        summary["cold_finesse"] = float(cavity_finesse(spec.r1 * spec.r2))
        summary["length_offset_m"] = spec.length_offset
        if "modes_csv" in outputs:
            modes = find_modes(spectra, threshold=_field(cfg, "cavity.mode_threshold",
                                                         float, 0.5))
            summary["mode_count"] = len(modes)
            summary["mode_spacings_hz"] = [float(s) for s in modes.spacings]
            artifacts.append(("modes.csv", lambda p, m=modes: aio.write_modes_csv(m, p)))

    if "pit" in cfg:
        pit_center = _field(cfg, "pit.center_hz")
        summary["group_index_pit_center"] = group_index(index, pit_center)
        summary["edge_leakage"] = index.edge_leakage

    if "pulse" in cfg:
        pulse_res = _run_storage(cfg, profile, index, params, comb_center, spectra)
        summary.update(pulse_res["summary"])
        artifacts.extend(pulse_res["artifacts"])

    if "absorption_csv" in outputs:
        artifacts.append(("absorption.csv", lambda p: aio.write_profile_csv(profile, p)))
    if "index_csv" in outputs:
        artifacts.append(("index.csv", lambda p: aio.write_index_csv(profile, index, p)))
    if "cavity_csv" in outputs:
        if spectra is None:
            raise ConfigError("config field 'outputs' asks for cavity_csv without a cavity")
        artifacts.append(("cavity.csv", lambda p: aio.write_cavity_csv(spectra, p)))
    if "summary_json" in outputs:
        artifacts.append(("summary.json", lambda p: _dump_json(summary, p)))
    return artifacts, summary


def _run_storage(cfg, profile, index, params, comb_center, spectra):
    if params is None:
        raise ConfigError("config field 'pulse' requires an 'afc' section")
    fwhm = _field(cfg, "pulse.fwhm_s")
    span = _field(cfg, "pulse.span_s", float, 8.192e-6)
    dt = _field(cfg, "pulse.dt_s", float, 4e-9)
    center_time = _field(cfg, "pulse.center_time_s", float, 1.5e-6)
    detuning = _field(cfg, "pulse.detuning_hz", float, 0.0)
    apply_t2 = _field(cfg, "pulse.apply_t2", bool, False)
    t2 = _field(cfg, "material.t2_s", float, 0.0) if apply_t2 else None
    if span < 4 / params.delta:
        raise PreconditionError("run: trace span must cover at least 4 rephasing periods")

    pulse = gaussian_pulse(fwhm, center_time, carrier_detuning=detuning,
                           trace_span=span, dt=dt)
    bare_out = propagate(pulse, medium_transfer(profile, index, origin_hz=comb_center))
    bare = measure_efficiency(bare_out, pulse, params.delta, t2=t2)
    summary = {
        "bare_efficiency": bare.efficiency,
        "bare_echo_time_s": bare.echo_time,
        "bare_echo_delay_s": bare.echo_time - pulse.centroid(),
        "analytic_efficiency": float(afc_efficiency_analytic(params.d_peak, params.d0,
                                                             params.f_afc)),
    }
    artifacts = []
    outputs = cfg.get("outputs", [])
    if "bare_trace_csv" in outputs:
        artifacts.append(("bare_trace.csv", lambda p: aio.write_trace_csv(bare_out, p)))
    if "bare_result_json" in outputs:
        artifacts.append(("bare_result.json", lambda p: aio.write_result_json(bare, p)))

    if spectra is not None:
        port = _field(cfg, "pulse.port", str, "reflection")
        matching = _field(cfg, "cavity.mode_matching", float, 1.0)
        cav_out = propagate(pulse, cavity_transfer(spectra, port=port,
                                                   mode_matching=matching,
                                                   origin_hz=comb_center))
        cav = measure_efficiency(cav_out, pulse, params.delta, t2=t2)
        summary.update({
            "cavity_efficiency": cav.efficiency,
            "cavity_echo_time_s": cav.echo_time,
            "cavity_direct_fraction": cav.direct_fraction,
            "enhancement": float(enhancement_factor(cav.efficiency, bare.efficiency)),
        })
        if "cavity_trace_csv" in outputs:
            artifacts.append(("cavity_trace.csv", lambda p: aio.write_trace_csv(cav_out, p)))
        if "cavity_result_json" in outputs:
            artifacts.append(("cavity_result.json", lambda p: aio.write_result_json(cav, p)))
    return {"summary": summary, "artifacts": artifacts}


def _run_eq9_grid(cfg):
    """Analytic-vs-simulated first-echo efficiency over a comb-parameter grid."""
    f_values = cfg["eq9_grid"].get("f_afc", [4.0, 7.0, 10.0])
    dt_values = cfg["eq9_grid"].get("d_tilde", [0.2, 0.5, 1.0, 1.5])
    delta = _field(cfg, "eq9_grid.delta_hz", float, 1e6)
    peak_count = _field(cfg, "eq9_grid.peak_count", int, 12)
    length = _field(cfg, "eq9_grid.length_m", float, 2e-3)
    n_bg = _field(cfg, "eq9_grid.n_bg", float, 1.8)
    wavelength = _field(cfg, "eq9_grid.wavelength_m", float, _DEFAULT_WAVELENGTH)
    fwhm = _field(cfg, "eq9_grid.pulse_fwhm_s", float, 250e-9)

    grid = make_grid(0.0, 2e8, 1 << 18)
    rows = []
    worst = 0.0
    for f in f_values:
        for d_tilde in dt_values:
            d = float(d_tilde) * float(f)
            params = AfcParams(delta=delta, gamma=delta / float(f),
                               peak_count=peak_count, d_peak=d)
            base = inhomogeneous_line(grid, 0.0, 9e9, length=length)
            profile = write_afc(base, params, 0.0)
            index = kramers_kronig(profile, n_bg, wavelength)
            pulse = gaussian_pulse(fwhm, 1.5e-6)
            out = propagate(pulse, medium_transfer(profile, index))
            res = measure_efficiency(out, pulse, delta)
            ana = float(afc_efficiency_analytic(d, 0.0, float(f)))
            rel = (res.efficiency - ana) / ana
            worst = max(worst, abs(rel))
            rows.append({"f_afc": float(f), "d_tilde": float(d_tilde),
                         "eta_sim": res.efficiency, "eta_analytic": ana,
                         "rel_err": rel})
    summary = {"cases": len(rows), "max_abs_rel_err": worst}

    def write_rows(path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["f_afc", "d_tilde", "eta_sim", "eta_analytic", "rel_err"])
            for r in rows:
                w.writerow([aio.fmt(r["f_afc"]), aio.fmt(r["d_tilde"]),
                            aio.fmt(r["eta_sim"]), aio.fmt(r["eta_analytic"]),
                            aio.fmt(r["rel_err"])])

    artifacts = [("eq9_sweep.csv", write_rows),
                 ("summary.json", lambda p: _dump_json(summary, p))]
    return artifacts, summary


def _run_design(cfg):
    constraints = DesignConstraints(
        gamma_pit=_field(cfg, "design.gamma_pit_hz"),
        alpha_available=_field(cfg, "design.alpha_available_per_m"),
        length=_field(cfg, "design.length_m"),
        d0=_field(cfg, "design.d0", float, 0.0),
        r2=_field(cfg, "design.r2", float, 1.0),
        min_peak_count=_field(cfg, "design.min_peak_count", int, 4),
        delta_min=_field(cfg, "design.delta_min_hz", float, 1e6),
    )
    result = optimize_afc(constraints)
    candidates = design_candidates(constraints)
    summary = result.as_dict()

    if _field(cfg, "design.verify", bool, False):
        summary["verified_eta_sim"] = _verify_design(result, constraints)

    artifacts = [
        ("design.json", lambda p: _dump_json(result.as_dict(), p)),
        ("candidates.csv", lambda p: aio.write_candidates_csv(candidates, p)),
        ("summary.json", lambda p: _dump_json(summary, p)),
    ]
    return artifacts, summary


def _verify_design(result, constraints):
    """Re-run the winning design through the full storage simulation."""
    grid = make_grid(0.0, 2e8, 1 << 18)
    peak_count = max(constraints.min_peak_count, 12)
    params = AfcParams(delta=result.delta, gamma=result.delta / result.f_afc,
                       peak_count=peak_count, d_peak=result.d, d0=constraints.d0)
    base = inhomogeneous_line(grid, 0.0, 9e9, length=constraints.length)
    profile = write_afc(base, params, 0.0)
    index = kramers_kronig(profile, 1.8, _DEFAULT_WAVELENGTH)
    fwhm = 250e-9 * (1e6 / result.delta)
    pulse = gaussian_pulse(fwhm, 1.5e-6)
    out = propagate(pulse, medium_transfer(profile, index))
    return measure_efficiency(out, pulse, result.delta).efficiency


def _dump_json(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o)}")


def _sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()
