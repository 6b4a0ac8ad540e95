"""Shared fixtures: the expensive spectral pipelines are built once per session."""
import numpy as np
import pytest

from afcsim import (CavitySpec, carve_pit, cavity_response, inhomogeneous_line,
                    kramers_kronig, make_grid, round_trip, tune_length_offset)

WAVELENGTH = 605.977e-9
N_BG = 1.8
LENGTH = 2e-3


@pytest.fixture(scope="session")
def pit_setup():
    """2000/m line with an 18 MHz pit on the fine 200 MHz grid, plus its index."""
    grid = make_grid(0.0, 200e6, 1 << 18)
    profile = inhomogeneous_line(grid, 2000.0, 9e9, length=LENGTH)
    profile = carve_pit(profile, 0.0, 18e6, residual_alpha=0.0, edge_width=0.5e6)
    index = kramers_kronig(profile, N_BG, WAVELENGTH)
    return profile, index


@pytest.fixture(scope="session")
def pit_cavity(pit_setup):
    """Loaded cavity around the pit, wedge-tuned a quarter cycle off center."""
    profile, index = pit_setup
    spec = CavitySpec(length=LENGTH, r1=0.8, r2=0.997, n_bg=N_BG)
    spec = tune_length_offset(index, profile, spec, target_hz=0.0, cycle_fraction=0.25)
    spectra = cavity_response(round_trip(index, profile, spec), spec)
    return spec, spectra


@pytest.fixture(scope="session")
def cold_setup():
    """Empty cavity on an absolute-frequency grid wide enough for three modes."""
    grid = make_grid(494.7266e12, 125e9, 1 << 20)
    profile = inhomogeneous_line(grid, 0.0, 9e9, length=LENGTH)
    index = kramers_kronig(profile, N_BG, WAVELENGTH)
    spec = CavitySpec(length=LENGTH, r1=0.8, r2=0.997, n_bg=N_BG)
    spectra = cavity_response(round_trip(index, profile, spec), spec)
    return spec, spectra
