"""Shared fixtures: the bundled crystal and the two reference designs.

The two designs exercised throughout are a 5-mm crystal pumped at 740 nm at
room temperature (strong pump-signal walk-off) and an 80-mm crystal pumped
at 775 nm at 11 °C (group-velocity matched). Heavy pipeline products (JSA
grids, decompositions, length scans) are session-scoped so the suite builds
each of them once.
"""

import numpy as np
import pytest

import pdcmodes as p

ROOM_T_C = 24.5


@pytest.fixture(scope="session")
def crystal():
    return p.load_bundled_crystal()


@pytest.fixture(scope="session")
def walkoff_config(crystal):
    return p.PdcConfig(crystal=crystal, pdc_type="type-I",
                       pump_axis="e", signal_axis="o",
                       pump_wavelength_um=0.740, temperature_c=ROOM_T_C,
                       length_m=5e-3)


@pytest.fixture(scope="session")
def matched_config(crystal):
    return p.PdcConfig(crystal=crystal, pdc_type="type-I",
                       pump_axis="e", signal_axis="o",
                       pump_wavelength_um=0.775, temperature_c=11.0,
                       length_m=80e-3)


@pytest.fixture(scope="session")
def pump740():
    return p.PumpPulse(wavelength_um=0.740, bandwidth_fwhm_nm=4.0,
                       mean_power_w=12e-3, rep_rate_hz=1e8)


@pytest.fixture(scope="session")
def pump775():
    return p.PumpPulse(wavelength_um=0.775, bandwidth_fwhm_nm=4.0,
                       mean_power_w=12e-3, rep_rate_hz=1e8)


@pytest.fixture(scope="session")
def walkoff_jsa(walkoff_config, pump740):
    grid = p.default_grid(walkoff_config, pump740)
    return p.compute_jsa(walkoff_config, pump740, grid)


@pytest.fixture(scope="session")
def matched_jsa(matched_config, pump775):
    grid = p.default_grid(matched_config, pump775)
    return p.compute_jsa(matched_config, pump775, grid)


@pytest.fixture(scope="session")
def walkoff_decomp(walkoff_jsa):
    return p.schmidt_decompose(walkoff_jsa)


@pytest.fixture(scope="session")
def matched_decomp(matched_jsa):
    return p.schmidt_decompose(matched_jsa)


def _schmidt_number_at(config, pump, n):
    grid = p.default_grid(config, pump, n=n)
    return p.schmidt_decompose(p.compute_jsa(config, pump, grid)).schmidt_number


@pytest.fixture(scope="session")
def walkoff_k_1024(walkoff_config, pump740):
    return _schmidt_number_at(walkoff_config, pump740, 1024)


@pytest.fixture(scope="session")
def matched_k_1024(matched_config, pump775):
    return _schmidt_number_at(matched_config, pump775, 1024)


@pytest.fixture(scope="session")
def cgvm_scan(matched_config, pump775):
    lengths = [10e-3, 20e-3, 40e-3, 80e-3]
    return p.length_scan(matched_config, pump775, lengths)


@pytest.fixture(scope="session")
def no_cgvm_scan(walkoff_config, pump740):
    lengths = [2e-3, 4e-3, 8e-3, 16e-3]
    return p.length_scan(walkoff_config, pump740, lengths)


@pytest.fixture(scope="session")
def matched_squeezing(matched_config, pump775):
    return p.squeezing_spectrum(matched_config, pump775)


def assert_within(value, target, rel, label=""):
    ok = abs(value - target) <= rel * abs(target)
    assert ok, f"{label}: {value!r} not within {rel:.1%} of {target!r}"


@pytest.fixture
def rng():
    return np.random.default_rng(20240814)
