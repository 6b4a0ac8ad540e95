"""afcsim: cavity-enhanced atomic-frequency-comb memory simulation and design.

The pipeline mirrors the physics: engineer an absorption spectrum
(:mod:`afcsim.spectra`), derive the dispersive index from it
(:mod:`afcsim.dispersion`), wrap the medium in a two-mirror cavity
(:mod:`afcsim.cavity`), push pulses through the resulting spectral filters
(:mod:`afcsim.storage`) and search for impedance-matched designs
(:mod:`afcsim.designer`). Every operation is a pure function over immutable
values; nothing here keeps global state.
"""
from .cavity import (CavityModeList, CavitySpec, CavitySpectra, MatchedFinesse,
                     RoundTripFactor, cavity_finesse, cavity_response, cold_cavity_fsr,
                     find_modes, impedance_mismatch, matched_finesse, matched_linewidth,
                     matched_linewidth_afc, pit_depth_ratio, round_trip,
                     tune_length_offset)
from .designer import (DesignConstraints, DesignResult, bandwidth_check,
                       design_candidates, match_mirror, optimize_afc)
from .dispersion import (IndexProfile, absorption_deviation_from_index, group_index,
                         kramers_kronig, slow_light_vg)
from .errors import AfcsimError, ConfigError, GridMismatchError, PreconditionError
from .spectra import (AbsorptionProfile, AfcParams, FrequencyGrid, afc_metrics,
                      carve_pit, inhomogeneous_line, make_grid, write_afc)
from .storage import (PulseTrace, SpectralResponse, StorageResult,
                      afc_efficiency_analytic, cavity_transfer, enhancement_factor,
                      gaussian_pulse, measure_efficiency, medium_transfer, propagate,
                      spectrum)

__version__ = "0.1.0"

__all__ = [
    "AbsorptionProfile", "AfcParams", "AfcsimError", "CavityModeList", "CavitySpec",
    "CavitySpectra", "ConfigError", "DesignConstraints", "DesignResult",
    "FrequencyGrid", "GridMismatchError", "IndexProfile", "MatchedFinesse",
    "PreconditionError", "PulseTrace", "RoundTripFactor", "SpectralResponse",
    "StorageResult", "absorption_deviation_from_index", "afc_efficiency_analytic",
    "afc_metrics", "bandwidth_check", "carve_pit", "cavity_finesse", "cavity_response",
    "cavity_transfer", "cold_cavity_fsr", "design_candidates", "enhancement_factor",
    "find_modes", "gaussian_pulse", "group_index", "impedance_mismatch",
    "inhomogeneous_line", "kramers_kronig", "make_grid", "match_mirror",
    "matched_finesse", "matched_linewidth", "matched_linewidth_afc",
    "measure_efficiency", "medium_transfer", "optimize_afc", "pit_depth_ratio",
    "propagate", "round_trip", "slow_light_vg", "spectrum", "tune_length_offset",
    "write_afc",
]
