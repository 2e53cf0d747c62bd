"""Post-processing: spatial-frequency power maps, cuts, pulse compression.

The maps scan a probe response over transmit/receive spatial frequency
pairs and reduce every grid value to a small bilinear form, so a full
201x201 sweep costs three matrix products instead of a quarter-million
operator builds.  Pulse compression is the self-matched filter of one
antenna's waveform with frequency-domain Hamming weighting and an
upsampling inverse transform.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .mvdr import SinrModel
from .signal_model import (
    SourceSet,
    SystemConfig,
    WaveformMatrix,
    receive_steering,
    response_operator,
    shift_matrix,
    source_response,
    transmit_steering,
    _overlap_parameter,
)

__all__ = [
    "DB_FLOOR",
    "SpectrumGrid",
    "SpectrumCut",
    "CompressionProfile",
    "default_grid",
    "scene_power_map",
    "output_spectrum_map",
    "point_output_power",
    "spectrum_cut",
    "pulse_compression",
]

DB_FLOOR = -80.0
_PROFILE_FLOOR = 1e-6  # amplitude ratio floor, -120 dB


@dataclass(frozen=True)
class SpectrumGrid:
    """Power map over transmit/receive spatial-frequency pairs.

    ``values_db[i, j]`` is the peak-normalized power in dB at
    ``(f_tx[i], f_rx[j])``; the peak sits at 0 dB and everything is
    clipped at the display floor.
    """

    f_tx: np.ndarray
    f_rx: np.ndarray
    values_db: np.ndarray

    def __post_init__(self):
        if self.f_tx.size < 2 or self.f_rx.size < 2:
            raise ValueError("grid axes need at least two points")
        if self.values_db.shape != (self.f_tx.size, self.f_rx.size):
            raise ValueError("map shape does not match the axes")
        if self.values_db.max() > 1e-9:
            raise ValueError("map must be peak-normalized (max 0 dB)")


@dataclass(frozen=True)
class SpectrumCut:
    """One-dimensional slice of a map along a fixed grid line."""

    fixed_axis: str  # "f_tx" or "f_rx"
    fixed_value: float  # the grid line actually used
    axis: np.ndarray  # the free axis
    values_db: np.ndarray


@dataclass(frozen=True)
class CompressionProfile:
    """Self-matched filter response of one waveform row.

    ``lag`` is in units of original samples (zero lag at the center),
    ``values_db`` the 20*log10 normalized magnitude; the mainlobe width
    is measured at -3 dB with linear interpolation between bins.
    """

    lag: np.ndarray
    values_db: np.ndarray
    width_3db: float
    peak_sidelobe_db: float


def default_grid(points: int = 201) -> np.ndarray:
    """Uniform frequency axis over the principal interval (-0.5, 0.5]."""
    if points < 2:
        raise ValueError("need at least two grid points")
    return np.linspace(-0.5, 0.5, points + 1)[1:]


def _steering_table(axis: np.ndarray, n: int) -> np.ndarray:
    """Rows of per-element phasors for every frequency on the axis."""
    return np.exp(2j * np.pi * np.outer(axis, np.arange(n)))


def _shifted_rows(cfg: SystemConfig, sources: SourceSet,
                  s_t: np.ndarray) -> np.ndarray:
    """Waveform rows pushed through the probe's window shift.

    The probe uses the target's range gate, so the map's value at the
    exact target frequency pair coincides with the receive filter's
    distortionless response.
    """
    gate = source_response(cfg, sources.target).gate
    k = shift_matrix(_overlap_parameter(gate, cfg), cfg.n_samples,
                     cfg.n_window, gate.case)
    entries = WaveformMatrix.from_antenna_vec(np.asarray(s_t, dtype=complex),
                                              cfg.n_tx).entries
    return entries @ k


def _bilinear_kernel(cfg: SystemConfig, x: np.ndarray,
                     shifted: np.ndarray) -> np.ndarray:
    """Collapse a snapshot-space vector against the shifted waveform rows.

    Returns C with x^H (probe response) = u_tx^T C u_rx for any frequency
    pair; rows of the snapshot stack run (window slot, receive element,
    transmit element) with the slot slowest.
    """
    x3 = np.asarray(x, dtype=complex).reshape(cfg.n_window, cfg.n_rx,
                                              cfg.n_tx)
    return np.einsum("ipq,qi->qp", x3.conj(), shifted)


def _to_db(power: np.ndarray) -> np.ndarray:
    peak = float(power.max())
    if peak <= 0.0:
        return np.full(power.shape, DB_FLOOR)
    return np.maximum(10.0 * np.log10(np.maximum(power / peak, 1e-300)),
                      DB_FLOOR)


def scene_power_map(cfg: SystemConfig, sources: SourceSet, s_t: np.ndarray,
                    f_tx_axis: Optional[np.ndarray] = None,
                    f_rx_axis: Optional[np.ndarray] = None) -> SpectrumGrid:
    """Power each source deposits on a probe steered across the grid.

    Every source contributes its power times the squared correlation
    between its own received return and the probe response, so the map
    peaks where a matched probe would find the scene's energy.
    """
    f_tx_axis = default_grid() if f_tx_axis is None else np.asarray(f_tx_axis)
    f_rx_axis = default_grid() if f_rx_axis is None else np.asarray(f_rx_axis)
    s_t = np.asarray(s_t, dtype=complex)
    model = SinrModel(cfg, sources)
    shifted = _shifted_rows(cfg, sources, s_t)
    u_tx = _steering_table(f_tx_axis, cfg.n_tx)
    u_rx = _steering_table(f_rx_axis, cfg.n_rx)
    power = np.zeros((f_tx_axis.size, f_rx_axis.size))
    returns = [(model.snr_linear, model.target_response @ s_t)]
    returns += [(p, lam @ s_t) for p, lam in
                zip(model.inr_linear, model.interference_responses)]
    scale = 1.0 / cfg.n_rx  # probe normalization, cancelled by peak scaling
    for pow_lin, g in returns:
        c = _bilinear_kernel(cfg, g, shifted)
        power += pow_lin * scale * np.abs(u_tx @ c @ u_rx.T) ** 2
    return SpectrumGrid(f_tx=f_tx_axis, f_rx=f_rx_axis,
                        values_db=_to_db(power))


def output_spectrum_map(cfg: SystemConfig, sources: SourceSet,
                        s_t: np.ndarray, weights: np.ndarray,
                        f_tx_axis: Optional[np.ndarray] = None,
                        f_rx_axis: Optional[np.ndarray] = None) -> SpectrumGrid:
    """Squared receive-filter response across the frequency grid."""
    f_tx_axis = default_grid() if f_tx_axis is None else np.asarray(f_tx_axis)
    f_rx_axis = default_grid() if f_rx_axis is None else np.asarray(f_rx_axis)
    shifted = _shifted_rows(cfg, sources, np.asarray(s_t, dtype=complex))
    c = _bilinear_kernel(cfg, np.asarray(weights, dtype=complex), shifted)
    u_tx = _steering_table(f_tx_axis, cfg.n_tx)
    u_rx = _steering_table(f_rx_axis, cfg.n_rx)
    power = np.abs(u_tx @ c @ u_rx.T) ** 2 / cfg.n_rx
    return SpectrumGrid(f_tx=f_tx_axis, f_rx=f_rx_axis,
                        values_db=_to_db(power))


def point_output_power(cfg: SystemConfig, sources: SourceSet,
                       s_t: np.ndarray, weights: np.ndarray,
                       f_tx: float, f_rx: float) -> float:
    """|w^H (probe response) s|^2 at one exact frequency pair.

    Uses the same probe gate as the maps (the target's), with the
    receive filter's per-element noise referencing, so the value at the
    target pair equals one for distortionless weights.
    """
    shifted = _shifted_rows(cfg, sources, np.asarray(s_t, dtype=complex))
    c = _bilinear_kernel(cfg, np.asarray(weights, dtype=complex), shifted)
    val = transmit_steering(f_tx, cfg.n_tx) @ c @ receive_steering(f_rx,
                                                                   cfg.n_rx)
    return float(np.abs(val) ** 2 / cfg.n_rx)


def spectrum_cut(grid: SpectrumGrid, fixed_axis: str,
                 value: float) -> SpectrumCut:
    """Nearest-grid-line slice of a map at a fixed frequency."""
    if fixed_axis not in ("f_tx", "f_rx"):
        raise ValueError("fixed_axis must be 'f_tx' or 'f_rx'")
    axis = grid.f_tx if fixed_axis == "f_tx" else grid.f_rx
    if value < axis.min() - 1e-12 or value > axis.max() + 1e-12:
        raise ValueError(f"{fixed_axis}={value} lies outside the grid")
    idx = int(np.argmin(np.abs(axis - value)))
    if fixed_axis == "f_tx":
        return SpectrumCut(fixed_axis=fixed_axis, fixed_value=float(axis[idx]),
                           axis=grid.f_rx, values_db=grid.values_db[idx, :])
    return SpectrumCut(fixed_axis=fixed_axis, fixed_value=float(axis[idx]),
                       axis=grid.f_tx, values_db=grid.values_db[:, idx])


def _crossing(lag: np.ndarray, vals: np.ndarray, i_in: int, i_out: int,
              level: float) -> float:
    """Linear interpolation of the lag where the profile crosses a level."""
    v_in, v_out = vals[i_in], vals[i_out]
    if v_out == v_in:
        return float(lag[i_out])
    frac = (level - v_in) / (v_out - v_in)
    return float(lag[i_in] + frac * (lag[i_out] - lag[i_in]))


def _width_at_level(lag: np.ndarray, vals: np.ndarray, peak_idx: int,
                    level: float) -> float:
    right = peak_idx
    while right + 1 < vals.size and vals[right + 1] >= level:
        right += 1
    left = peak_idx
    while left - 1 >= 0 and vals[left - 1] >= level:
        left -= 1
    hi = lag[right] if right + 1 == vals.size else _crossing(
        lag, vals, right, right + 1, level)
    lo = lag[left] if left == 0 else _crossing(lag, vals, left, left - 1,
                                               level)
    return float(hi - lo)


def _peak_sidelobe(vals: np.ndarray, peak_idx: int) -> float:
    right = peak_idx
    while right + 1 < vals.size and vals[right + 1] <= vals[right]:
        right += 1
    left = peak_idx
    while left - 1 >= 0 and vals[left - 1] <= vals[left]:
        left -= 1
    candidates = []
    if left > 0:
        candidates.append(float(vals[:left].max()))
    if right + 1 < vals.size:
        candidates.append(float(vals[right + 1:].max()))
    return max(candidates) if candidates else float(20 * np.log10(
        _PROFILE_FLOOR))


def pulse_compression(row: np.ndarray, upsample_to: int = 1000,
                      window: str = "hamming") -> CompressionProfile:
    """Self-matched filter profile of one antenna's waveform.

    The squared magnitude of the row's spectrum is weighted by a
    length-L window in natural transform order, zero-padded in the
    middle of the spectrum (splitting the Nyquist bin for even L) to
    ``upsample_to`` bins, and inverse-transformed; the shifted magnitude
    is the delay profile.
    """
    row = np.asarray(row, dtype=complex).ravel()
    n = row.size
    if n < 2:
        raise ValueError("need at least two samples")
    if upsample_to < n:
        raise ValueError("upsample_to must be at least the row length")
    if window not in ("hamming", "none"):
        raise ValueError("window must be 'hamming' or 'none'")
    spec = np.abs(np.fft.fft(row)) ** 2
    if window == "hamming":
        spec = spec * np.hamming(n)
    padded = np.zeros(upsample_to)
    half = n // 2
    if upsample_to == n:
        padded[:] = spec
    elif n % 2 == 0:
        padded[:half] = spec[:half]
        padded[half] = 0.5 * spec[half]
        padded[upsample_to - half] = 0.5 * spec[half]
        if half > 1:
            padded[upsample_to - half + 1:] = spec[half + 1:]
    else:
        padded[:half + 1] = spec[:half + 1]
        padded[upsample_to - half:] = spec[half + 1:]
    prof = np.fft.fftshift(np.fft.ifft(padded))
    mag = np.abs(prof)
    peak = float(mag.max())
    if peak <= 0.0:
        raise ValueError("profile is identically zero")
    vals = 20.0 * np.log10(np.maximum(mag / peak, _PROFILE_FLOOR))
    lag = (np.arange(upsample_to) - upsample_to // 2) * (n / upsample_to)
    peak_idx = int(np.argmax(vals))
    return CompressionProfile(
        lag=lag, values_db=vals,
        width_3db=_width_at_level(lag, vals, peak_idx, -3.0),
        peak_sidelobe_db=_peak_sidelobe(vals, peak_idx))
