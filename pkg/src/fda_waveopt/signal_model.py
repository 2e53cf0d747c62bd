"""Receive-signal model for a frequency diverse array (FDA) radar.

Each transmit element radiates at the common carrier plus a small
per-element frequency offset.  After mixing and range-gated sampling the
two-way response of a scatterer depends on a *pair* of spatial
frequencies: the transmit one couples range and angle, the receive one
is the usual angle-only term.  This module builds those frequencies,
the steering vectors, the window shift matrices and the stacked
space-time response operator that the beamformer and both waveform
optimizers consume.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

__all__ = [
    "C_LIGHT",
    "SystemConfig",
    "Source",
    "SourceSet",
    "SpatialFrequencies",
    "RangeGate",
    "WaveformMatrix",
    "ResponseOperator",
    "wrap_frequency",
    "spatial_frequencies",
    "transmit_steering",
    "receive_steering",
    "commutation_matrix",
    "range_gate",
    "shift_matrix",
    "response_operator",
    "reference_olfm",
    "simulate_snapshot",
]

C_LIGHT = 3.0e8  # propagation speed (m/s); keeps a 10 GHz carrier at 3 cm


def _as_per_antenna(value: Union[float, Sequence[float]], n: int,
                    name: str) -> Tuple[float, ...]:
    """Broadcast a scalar to an n-tuple, or validate a length-n sequence."""
    if np.isscalar(value):
        return (float(value),) * n
    vals = tuple(float(v) for v in value)
    if len(vals) != n:
        raise ValueError(
            f"{name} expects {n} per-antenna values, got {len(vals)}")
    return vals


@dataclass(frozen=True)
class SystemConfig:
    """Geometry, timing and filtering parameters of the radar.

    Lengths are in meters, rates in Hz, durations in seconds.  The
    low-pass cutoffs and in-band energy floors are per transmit antenna.
    """

    n_tx: int = 6
    n_rx: int = 6
    carrier_hz: float = 10.0e9          # common carrier
    freq_step_hz: float = 1.0e6         # per-element transmit offset
    d_tx_m: float = 0.015               # transmit element spacing
    d_rx_m: float = 0.015               # receive element spacing
    pulse_s: float = 20.0e-6            # pulse duration
    sample_hz: float = 1.0e6            # complex sampling rate
    n_window: int = 30                  # receive window length (samples)
    window_start_m: float = 11220.0     # range of the first window sample
    lpf_cutoff_hz: Union[float, Tuple[float, ...]] = 900.0e3
    band_energy_floor: Union[float, Tuple[float, ...]] = 0.91

    def __post_init__(self):
        if self.n_tx < 1 or self.n_rx < 1:
            raise ValueError("need at least one transmit and one receive element")
        for name in ("carrier_hz", "freq_step_hz", "d_tx_m", "d_rx_m",
                     "pulse_s", "sample_hz"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        object.__setattr__(self, "lpf_cutoff_hz",
                           _as_per_antenna(self.lpf_cutoff_hz, self.n_tx,
                                           "lpf_cutoff_hz"))
        object.__setattr__(self, "band_energy_floor",
                           _as_per_antenna(self.band_energy_floor, self.n_tx,
                                           "band_energy_floor"))
        if self.n_samples < 1:
            raise ValueError("pulse_s * sample_hz must round to >= 1 sample")
        if self.n_window < self.n_samples:
            raise ValueError("receive window must be at least one pulse long")
        for f_lp in self.lpf_cutoff_hz:
            if not 0.0 < f_lp <= self.freq_step_hz:
                raise ValueError(
                    "low-pass cutoff must lie in (0, freq_step_hz] so that "
                    "neighbouring transmit bands do not overlap")
        for g in self.band_energy_floor:
            if not 0.0 < g <= 1.0:
                raise ValueError("band_energy_floor entries must lie in (0, 1]")

    @property
    def wavelength_m(self) -> float:
        return C_LIGHT / self.carrier_hz

    @property
    def n_samples(self) -> int:
        """Samples per pulse (pulse duration times sampling rate)."""
        return int(round(self.pulse_s * self.sample_hz))

    @property
    def range_cell_m(self) -> float:
        """One-sample round-trip range resolution."""
        return C_LIGHT / (2.0 * self.sample_hz)

    @property
    def lpf_cutoff_normalized(self) -> Tuple[float, ...]:
        """Per-antenna low-pass cutoffs as fractions of the sampling rate."""
        return tuple(f / self.sample_hz for f in self.lpf_cutoff_hz)

    @property
    def snapshot_dim(self) -> int:
        """Length of the stacked receive snapshot."""
        return self.n_tx * self.n_rx * self.n_window


@dataclass(frozen=True)
class Source:
    """A point scatterer: the target or one interference."""

    range_m: float
    angle_rad: float
    power_db: float  # SNR for the target, INR for an interference
    kind: str = "interference"

    def __post_init__(self):
        if self.kind not in ("target", "interference"):
            raise ValueError(f"unknown source kind {self.kind!r}")
        if self.range_m <= 0:
            raise ValueError("range_m must be positive")

    @property
    def power_linear(self) -> float:
        return 10.0 ** (self.power_db / 10.0)


@dataclass(frozen=True)
class SourceSet:
    """Exactly one target plus any number of interferences."""

    target: Source
    interferences: Tuple[Source, ...] = ()

    def __post_init__(self):
        if self.target.kind != "target":
            raise ValueError("SourceSet.target must have kind='target'")
        for s in self.interferences:
            if s.kind != "interference":
                raise ValueError("interference entries must have kind='interference'")

    @classmethod
    def from_list(cls, sources: Sequence[Source]) -> "SourceSet":
        targets = [s for s in sources if s.kind == "target"]
        if len(targets) != 1:
            raise ValueError(f"need exactly one target source, got {len(targets)}")
        interf = tuple(s for s in sources if s.kind != "target")
        return cls(target=targets[0], interferences=interf)

    def __iter__(self):
        yield self.target
        yield from self.interferences


@dataclass(frozen=True)
class SpatialFrequencies:
    """Transmit/receive spatial frequency pair, each wrapped to (-0.5, 0.5]."""

    f_tx: float
    f_rx: float


@dataclass(frozen=True)
class RangeGate:
    """Integer window gate of a source and how its pulse meets the window.

    ``gate`` is the round-trip delay of the leading pulse sample measured
    in window samples from the window start; it may be negative.  ``case``
    is ``inside`` when the whole pulse fits the window and ``early``/``late``
    when it is clipped at one end.
    """

    gate: int
    case: str

    @property
    def inside(self) -> bool:
        return self.case == "inside"


def wrap_frequency(x: float) -> float:
    """Wrap a normalized frequency into the principal interval (-0.5, 0.5]."""
    return float(x - np.ceil(x - 0.5))


def spatial_frequencies(cfg: SystemConfig, source: Source) -> SpatialFrequencies:
    """Spatial frequency pair of a scatterer at (range, angle).

    The transmit frequency mixes the range term ``2*freq_step*r/c`` with
    the usual angle term, which is what lets a frequency diverse array
    separate scatterers in range at a fixed angle.  The receive frequency
    carries the angle only.
    """
    sin_theta = np.sin(source.angle_rad)
    f_tx = 2.0 * cfg.freq_step_hz * source.range_m / C_LIGHT \
        - cfg.d_tx_m * sin_theta / cfg.wavelength_m
    f_rx = -cfg.d_rx_m * sin_theta / cfg.wavelength_m
    return SpatialFrequencies(wrap_frequency(f_tx), wrap_frequency(f_rx))


def transmit_steering(f_tx: float, n_tx: int) -> np.ndarray:
    """Unit-modulus transmit steering vector exp(j*2*pi*m*f_tx), m=0..n_tx-1."""
    return np.exp(2j * np.pi * f_tx * np.arange(n_tx))


def receive_steering(f_rx: float, n_rx: int) -> np.ndarray:
    """Unit-modulus receive steering vector exp(j*2*pi*n*f_rx), n=0..n_rx-1."""
    return np.exp(2j * np.pi * f_rx * np.arange(n_rx))


def commutation_matrix(n_rows: int, n_cols: int) -> np.ndarray:
    """Permutation T with ``T @ vec(S) = vec(S.T)`` for S of shape (n_rows, n_cols).

    ``vec`` stacks columns.  The transpose identity ``T(m, n).T == T(n, m)``
    makes the pair mutually inverse.
    """
    size = n_rows * n_cols
    # position of entry (i, j) inside vec(S), then read off in vec(S.T) order
    perm = np.arange(size).reshape((n_rows, n_cols), order="F").ravel(order="C")
    t = np.zeros((size, size))
    t[np.arange(size), perm] = 1.0
    return t


def range_gate(cfg: SystemConfig, source: Source) -> RangeGate:
    """Window gate index of a source and its early/inside/late classification."""
    delay_samples = 2.0 * (source.range_m - cfg.window_start_m) / C_LIGHT * cfg.sample_hz
    gate = int(np.floor(delay_samples + 0.5))
    n_samples, n_window = cfg.n_samples, cfg.n_window
    if gate < -n_samples or gate > n_window:
        raise ValueError(
            f"source at {source.range_m} m (gate {gate}) shares no sample with "
            f"the receive window [0, {n_window})")
    if gate < 0:
        case = "early"
    elif gate + n_samples > n_window:
        case = "late"
    else:
        case = "inside"
    return RangeGate(gate=gate, case=case)


def shift_matrix(l: int, n_samples: int, n_window: int, gate_case: str) -> np.ndarray:
    """0/1 matrix placing pulse samples into receive window slots.

    Shape is (n_samples, n_window); row p carries pulse sample p.  For the
    ``inside`` case ``l`` is the gate offset and every sample lands in a
    slot.  For ``early``/``late`` the pulse is clipped and ``l`` is the
    number of samples that remain in the window, placed per the fixed
    corner layouts (identity block in the top-right, resp. bottom-right).
    """
    k = np.zeros((n_samples, n_window))
    if gate_case == "inside":
        if not 0 <= l <= n_window - n_samples:
            raise ValueError("inside gate offset out of range")
        k[:, l:l + n_samples] = np.eye(n_samples)
    elif gate_case == "early":
        if not 0 <= l <= n_samples:
            raise ValueError("early-case overlap must lie in [0, n_samples]")
        if l:
            k[:l, n_window - l:] = np.eye(l)
    elif gate_case == "late":
        if not 0 <= l <= n_samples:
            raise ValueError("late-case overlap must lie in [0, n_samples]")
        if l:
            k[n_samples - l:, n_window - l:] = np.eye(l)
    else:
        raise ValueError(f"unknown gate case {gate_case!r}")
    return k


def _overlap_parameter(gate: RangeGate, cfg: SystemConfig) -> int:
    """Shift-matrix parameter for a gate: offset inside, retained count otherwise."""
    if gate.case == "inside":
        return gate.gate
    if gate.case == "early":
        return cfg.n_samples + gate.gate
    return cfg.n_window - gate.gate  # late


@dataclass(frozen=True)
class WaveformMatrix:
    """Transmit waveform bank, one row per antenna, one column per sample."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 2:
            raise ValueError("waveform entries must be a 2-D array")
        object.__setattr__(self, "entries", e)

    @property
    def n_tx(self) -> int:
        return self.entries.shape[0]

    @property
    def n_samples(self) -> int:
        return self.entries.shape[1]

    @property
    def sample_vec(self) -> np.ndarray:
        """Column stacking vec(S): all antennas at sample 0, then sample 1, ..."""
        return self.entries.ravel(order="F")

    @property
    def antenna_vec(self) -> np.ndarray:
        """Row stacking vec(S.T): antenna 0's samples, then antenna 1's, ..."""
        return self.entries.ravel(order="C")

    @classmethod
    def from_antenna_vec(cls, vec: np.ndarray, n_tx: int) -> "WaveformMatrix":
        vec = np.asarray(vec, dtype=complex).ravel()
        if vec.size % n_tx:
            raise ValueError("vector length is not a multiple of n_tx")
        return cls(vec.reshape((n_tx, vec.size // n_tx), order="C"))

    def row_energies(self) -> np.ndarray:
        return np.sum(np.abs(self.entries) ** 2, axis=1)


@dataclass(frozen=True)
class ResponseOperator:
    """Stacked space-time response of one scatterer.

    ``time_major`` acts on vec(S) (sample-major stacking), ``antenna_major``
    on vec(S.T) (per-antenna stacking); the two are column permutations of
    each other.  Rows run over (window slot, receive element, transmit
    element), slot slowest.
    """

    freqs: SpatialFrequencies
    gate: RangeGate
    time_major: np.ndarray
    antenna_major: np.ndarray

    def apply(self, waveform: WaveformMatrix) -> np.ndarray:
        return self.time_major @ waveform.sample_vec


def response_operator(cfg: SystemConfig, f_tx: float, f_rx: float,
                      gate: RangeGate) -> ResponseOperator:
    """Build the response operator for a spatial-frequency pair at a gate.

    The time-major form is ``kron(K.T, kron(u_rx, diag(u_tx)))`` with K the
    window shift matrix; right-multiplying by the commutation matrix gives
    the antenna-major form used by the optimizers.
    """
    u_tx = transmit_steering(f_tx, cfg.n_tx)
    u_rx = receive_steering(f_rx, cfg.n_rx)
    k = shift_matrix(_overlap_parameter(gate, cfg), cfg.n_samples,
                     cfg.n_window, gate.case)
    per_sample = np.kron(u_rx[:, None], np.diag(u_tx))  # (n_rx*n_tx, n_tx)
    time_major = np.kron(k.T, per_sample)
    antenna_major = time_major @ commutation_matrix(cfg.n_samples, cfg.n_tx)
    return ResponseOperator(freqs=SpatialFrequencies(f_tx, f_rx), gate=gate,
                            time_major=time_major, antenna_major=antenna_major)


def source_response(cfg: SystemConfig, source: Source) -> ResponseOperator:
    """Response operator of a source from its range/angle."""
    freqs = spatial_frequencies(cfg, source)
    gate = range_gate(cfg, source)
    return response_operator(cfg, freqs.f_tx, freqs.f_rx, gate)


def reference_olfm(cfg: SystemConfig, bandwidth_hz: float = 900.0e3) -> WaveformMatrix:
    """Offset-LFM reference bank: a common chirp plus per-antenna offsets.

    Row m is ``exp(j*2*pi*m*step*t) * exp(j*pi*(B/T)*t^2)`` sampled at
    t = l/sample_hz from t = 0, with step = bandwidth/n_tx, then scaled so
    every row has energy 1/n_tx (unit total energy).
    """
    if bandwidth_hz < 0:
        raise ValueError("bandwidth_hz must be nonnegative")
    if bandwidth_hz > min(cfg.lpf_cutoff_hz):
        raise ValueError("reference bandwidth exceeds a low-pass cutoff")
    t = np.arange(cfg.n_samples) / cfg.sample_hz
    step = bandwidth_hz / cfg.n_tx
    chirp = np.exp(1j * np.pi * (bandwidth_hz / cfg.pulse_s) * t ** 2)
    rows = np.exp(2j * np.pi * step * np.outer(np.arange(cfg.n_tx), t)) * chirp
    rows *= 1.0 / np.sqrt(cfg.n_tx * cfg.n_samples)
    return WaveformMatrix(rows)


def simulate_snapshot(cfg: SystemConfig, sources: SourceSet,
                      waveform: WaveformMatrix, noise_power: float = 1.0,
                      seed: Optional[int] = None,
                      rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """One receive snapshot: random-amplitude source returns plus noise.

    Each source contributes ``amp * A @ vec(S)`` with ``amp`` drawn from a
    circular complex normal of its linear power; the noise is circular
    complex normal with the given per-sample power.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    dim = cfg.snapshot_dim
    snap = np.zeros(dim, dtype=complex)
    for src in sources:
        op = source_response(cfg, src)
        scale = np.sqrt(src.power_linear / 2.0)
        amp = scale * (rng.standard_normal() + 1j * rng.standard_normal())
        snap += amp * op.apply(waveform)
    noise = np.sqrt(noise_power / 2.0) * (rng.standard_normal(dim)
                                          + 1j * rng.standard_normal(dim))
    return snap + noise
