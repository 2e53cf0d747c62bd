"""Tests for the spectrum maps, cuts and pulse-compression profiles.

Map peak locations are checked against the independently computed
spatial-frequency pairs of the scene's sources; the upsampled
compression profile is checked against an explicit Fourier-sum oracle
built from the documented spectrum embedding.
"""
import numpy as np
import pytest

from fda_waveopt import (
    Source,
    SourceSet,
    SpectrumGrid,
    default_grid,
    mvdr_weights,
    output_spectrum_map,
    point_output_power,
    pulse_compression,
    scene_power_map,
    spatial_frequencies,
    spectrum_cut,
)
from fda_waveopt.analysis import DB_FLOOR


def nearest_cell(grid: np.ndarray, freqs) -> tuple:
    return (int(np.argmin(np.abs(grid - freqs.f_tx))),
            int(np.argmin(np.abs(grid - freqs.f_rx))))


def as_target(src: Source) -> SourceSet:
    alone = Source(range_m=src.range_m, angle_rad=src.angle_rad,
                   power_db=src.power_db, kind="target")
    return SourceSet(target=alone, interferences=())


# -- grids -------------------------------------------------------------

def test_default_grid_properties():
    grid = default_grid()
    assert grid.size == 201
    assert grid[-1] == 0.5
    assert grid[0] > -0.5            # half-open principal interval
    assert np.all(np.diff(grid) > 0)
    assert default_grid(10).size == 10
    for bad in (1, 0, -3):
        with pytest.raises(ValueError):
            default_grid(bad)


def test_spectrum_grid_validation():
    axis = np.linspace(-0.5, 0.5, 5)
    good = np.zeros((5, 5)) - 10.0
    good[2, 2] = 0.0
    SpectrumGrid(f_tx=axis, f_rx=axis, values_db=good)
    with pytest.raises(ValueError):
        SpectrumGrid(f_tx=axis[:1], f_rx=axis, values_db=good[:1, :])
    with pytest.raises(ValueError):
        SpectrumGrid(f_tx=axis, f_rx=axis, values_db=good[:, :4])
    with pytest.raises(ValueError):
        SpectrumGrid(f_tx=axis, f_rx=axis, values_db=good + 10.0)


# -- scene maps --------------------------------------------------------

def test_single_source_scene_peaks_at_its_frequencies(cfg, sources, reference):
    grid = default_grid()
    for src in sources:
        mapped = scene_power_map(cfg, as_target(src), reference.antenna_vec)
        peak = np.unravel_index(np.argmax(mapped.values_db),
                                mapped.values_db.shape)
        cell = nearest_cell(grid, spatial_frequencies(cfg, src))
        assert max(abs(peak[0] - cell[0]), abs(peak[1] - cell[1])) <= 1


def test_full_scene_dominated_by_strong_interferences(cfg, sources, reference):
    grid = default_grid()
    mapped = scene_power_map(cfg, sources, reference.antenna_vec)
    peak = np.unravel_index(np.argmax(mapped.values_db),
                            mapped.values_db.shape)
    cells = [nearest_cell(grid, spatial_frequencies(cfg, s))
             for s in sources.interferences]
    assert any(max(abs(peak[0] - i), abs(peak[1] - j)) <= 1
               for i, j in cells)
    # both 30 dB interferences show up within a decibel of the peak
    for i, j in cells:
        window = mapped.values_db[i - 1:i + 2, j - 1:j + 2]
        assert window.max() >= -1.0


def test_scene_map_invariances(cfg, sources, reference):
    axis = np.linspace(-0.45, 0.5, 39)
    base = scene_power_map(cfg, sources, reference.antenna_vec,
                           f_tx_axis=axis, f_rx_axis=axis)
    rotated = scene_power_map(cfg, sources,
                              np.exp(1.2j) * reference.antenna_vec,
                              f_tx_axis=axis, f_rx_axis=axis)
    scaled = scene_power_map(cfg, sources, 3.0 * reference.antenna_vec,
                             f_tx_axis=axis, f_rx_axis=axis)
    assert np.allclose(base.values_db, rotated.values_db, atol=1e-9)
    assert np.allclose(base.values_db, scaled.values_db, atol=1e-9)


def test_zero_waveform_floors_the_map(cfg, sources):
    axis = np.linspace(-0.4, 0.4, 11)
    mapped = scene_power_map(cfg, sources, np.zeros(120, dtype=complex),
                             f_tx_axis=axis, f_rx_axis=axis)
    assert np.all(mapped.values_db == DB_FLOOR)


# -- output maps -------------------------------------------------------

def test_output_map_peaks_at_target(cfg, sources, reference):
    grid = default_grid()
    weights = mvdr_weights(reference.antenna_vec, cfg, sources)
    mapped = output_spectrum_map(cfg, sources, reference.antenna_vec, weights)
    peak = np.unravel_index(np.argmax(mapped.values_db),
                            mapped.values_db.shape)
    cell = nearest_cell(grid, spatial_frequencies(cfg, sources.target))
    assert max(abs(peak[0] - cell[0]), abs(peak[1] - cell[1])) <= 1


def test_point_response_is_distortionless_at_target(cfg, sources, reference):
    weights = mvdr_weights(reference.antenna_vec, cfg, sources)
    freqs = spatial_frequencies(cfg, sources.target)
    value = point_output_power(cfg, sources, reference.antenna_vec, weights,
                               freqs.f_tx, freqs.f_rx)
    assert value == pytest.approx(1.0, abs=1e-8)


# -- cuts --------------------------------------------------------------

def small_map(cfg, sources, reference):
    axis = np.linspace(-0.4, 0.4, 17)
    return scene_power_map(cfg, sources, reference.antenna_vec,
                           f_tx_axis=axis, f_rx_axis=axis)


def test_cut_slices_rows_and_columns_exactly(cfg, sources, reference):
    mapped = small_map(cfg, sources, reference)
    row = spectrum_cut(mapped, "f_tx", float(mapped.f_tx[6]))
    assert row.fixed_value == mapped.f_tx[6]
    assert np.array_equal(row.axis, mapped.f_rx)
    assert np.array_equal(row.values_db, mapped.values_db[6, :])
    col = spectrum_cut(mapped, "f_rx", float(mapped.f_rx[3]))
    assert col.fixed_value == mapped.f_rx[3]
    assert np.array_equal(col.axis, mapped.f_tx)
    assert np.array_equal(col.values_db, mapped.values_db[:, 3])


def test_cut_snaps_to_nearest_line(cfg, sources, reference):
    mapped = small_map(cfg, sources, reference)
    step = mapped.f_tx[1] - mapped.f_tx[0]
    probe = float(mapped.f_tx[8]) + 0.3 * step
    cut = spectrum_cut(mapped, "f_tx", probe)
    assert cut.fixed_value == mapped.f_tx[8]


def test_cut_rejects_bad_requests(cfg, sources, reference):
    mapped = small_map(cfg, sources, reference)
    with pytest.raises(ValueError):
        spectrum_cut(mapped, "f_tx", 0.49)
    with pytest.raises(ValueError):
        spectrum_cut(mapped, "angle", 0.0)


# -- pulse compression -------------------------------------------------

def oracle_profile(row: np.ndarray, upsample_to: int,
                   window: str) -> np.ndarray:
    """Direct Fourier sum over the documented spectrum embedding."""
    row = np.asarray(row, dtype=complex)
    n = row.size
    spec = np.abs(np.fft.fft(row)) ** 2
    if window == "hamming":
        spec = spec * np.hamming(n)
    half = n // 2
    terms = []  # (frequency index, coefficient)
    if upsample_to == n:
        terms = [(k, spec[k]) for k in range(n)]
    elif n % 2 == 0:
        terms += [(k, spec[k]) for k in range(half)]
        terms += [(half, 0.5 * spec[half]), (-half, 0.5 * spec[half])]
        terms += [(k - n, spec[k]) for k in range(half + 1, n)]
    else:
        terms += [(k, spec[k]) for k in range(half + 1)]
        terms += [(k - n, spec[k]) for k in range(half + 1, n)]
    t = np.arange(upsample_to) - upsample_to // 2
    prof = np.zeros(upsample_to, dtype=complex)
    for nu, coeff in terms:
        prof += coeff * np.exp(2j * np.pi * nu * t / upsample_to)
    mag = np.abs(prof) / upsample_to
    mag = mag / mag.max()
    return 20.0 * np.log10(np.maximum(mag, 1e-6))


def test_profile_matches_fourier_oracle():
    rng = np.random.default_rng(101)
    impulse = np.zeros(20, dtype=complex)
    impulse[0] = 1.0
    cases = [
        (impulse, 1000, "hamming"),
        (rng.standard_normal(20) + 1j * rng.standard_normal(20), 1000,
         "hamming"),
        (rng.standard_normal(20) + 1j * rng.standard_normal(20), 400,
         "none"),
        (rng.standard_normal(7) + 1j * rng.standard_normal(7), 301, "none"),
        (rng.standard_normal(6) + 1j * rng.standard_normal(6), 6, "none"),
    ]
    for row, upsample, window in cases:
        prof = pulse_compression(row, upsample_to=upsample, window=window)
        assert prof.values_db.size == upsample
        assert np.allclose(prof.values_db,
                           oracle_profile(row, upsample, window), atol=1e-6)


def test_impulse_profile_peaks_at_zero_lag():
    impulse = np.zeros(20, dtype=complex)
    impulse[0] = 1.0
    prof = pulse_compression(impulse)
    mid = 1000 // 2
    assert prof.lag[mid] == 0.0
    assert int(np.argmax(prof.values_db)) == mid
    assert prof.values_db[mid] == 0.0
    assert prof.lag[1] - prof.lag[0] == pytest.approx(20 / 1000)


def test_profile_magnitude_is_even():
    """The embedded spectrum is real, so the delay profile is symmetric."""
    rng = np.random.default_rng(103)
    row = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    prof = pulse_compression(row)
    mid = 1000 // 2
    for k in (1, 17, 133, 499):
        assert prof.values_db[mid + k] == pytest.approx(
            prof.values_db[mid - k], abs=1e-6)


def test_reference_row_profile_shape(reference):
    prof = pulse_compression(reference.entries[0])
    assert np.count_nonzero(prof.values_db == 0.0) == 1
    assert 0.0 < prof.width_3db < 2.0
    assert prof.peak_sidelobe_db < 0.0


def test_pulse_compression_validation():
    row = np.ones(8, dtype=complex)
    with pytest.raises(ValueError):
        pulse_compression(row, upsample_to=7)
    with pytest.raises(ValueError):
        pulse_compression(row, window="hann")
    with pytest.raises(ValueError):
        pulse_compression(np.ones(1, dtype=complex))
    with pytest.raises(ValueError):
        pulse_compression(np.zeros(8, dtype=complex))
