"""Waveform design constraints: per-antenna energy, similarity, bandwidth.

All three act on the antenna-major stacked waveform vector.  Energy is a
per-antenna equality, similarity bounds every coordinate's deviation from
the reference, and the bandwidth constraint keeps a fraction of each
antenna's energy inside its low-pass band through a fixed Hermitian
in-band operator.  The proximal projections used by the multiplier
method live here as well.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .signal_model import SystemConfig, WaveformMatrix

__all__ = [
    "band_matrix",
    "band_root",
    "ConstraintSet",
    "build_constraints",
    "FeasibilityReport",
    "feasibility_report",
    "project_similarity_ball",
    "project_energy_sphere",
    "project_band_exterior",
    "clip_to_similarity",
    "rescale_to_antenna_energy",
    "polish_feasibility",
]

_EIG_CLIP = 1e-12


def band_matrix(cutoff: float, n_samples: int) -> np.ndarray:
    """Hermitian in-band energy operator for one antenna.

    ``s^H H s`` integrates the row's energy spectral density over the
    low-pass band; ``cutoff`` is normalized to the sampling rate.  Entry
    (p, q) is ``cutoff`` on the diagonal and
    ``(exp(j*2*pi*cutoff*(p-q)) - 1) / (j*2*pi*(p-q))`` off it.
    """
    if not 0.0 < cutoff <= 1.0:
        raise ValueError("cutoff must lie in (0, 1] (normalized to sample rate)")
    p = np.arange(n_samples)
    d = p[:, None] - p[None, :]
    h = np.empty((n_samples, n_samples), dtype=complex)
    off = d != 0
    h[off] = (np.exp(2j * np.pi * cutoff * d[off]) - 1.0) / (2j * np.pi * d[off])
    h[~off] = cutoff
    return h


def band_root(h: np.ndarray) -> np.ndarray:
    """Factor ``root`` with ``root^H root = h`` for a Hermitian PSD ``h``.

    Uses the eigendecomposition with small negative eigenvalues clipped,
    so nearly-singular in-band operators still factor stably.
    """
    vals, vecs = np.linalg.eigh(0.5 * (h + h.conj().T))
    vals = np.clip(vals, _EIG_CLIP, None)
    return (np.sqrt(vals)[:, None] * vecs.conj().T)


@dataclass(frozen=True)
class ConstraintSet:
    """Bundled constraint data for one design run.

    ``epsilon`` is the per-coordinate similarity radius actually enforced
    (0 pins the waveform to the reference) and ``similarity_level`` the
    dimensionless level it was derived from: the level counts multiples
    of the r.m.s. coordinate modulus of a unit-energy waveform,
    ``1/sqrt(n_tx * n_samples)``, so level 2 lets a constant-modulus
    reference coordinate invert its sign while level 0.2 permits only
    small perturbations.  ``gammas`` holds the per-antenna in-band energy
    floors, and the band operators/roots are per antenna.  Selectors for
    antenna blocks are kept as index masks; dense matrices are available
    for checks.
    """

    epsilon: float
    similarity_level: float
    reference: WaveformMatrix
    n_tx: int
    n_samples: int
    gammas: Tuple[float, ...]
    band_ops: Tuple[np.ndarray, ...]
    band_roots: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.epsilon < 0 or self.similarity_level < 0:
            raise ValueError("similarity radius must be >= 0")
        if len(self.gammas) != self.n_tx or len(self.band_ops) != self.n_tx:
            raise ValueError("need one band operator and floor per antenna")

    @property
    def n_coeffs(self) -> int:
        return self.n_tx * self.n_samples

    @property
    def energy_target(self) -> float:
        """Per-antenna energy share (total transmit energy is one)."""
        return 1.0 / self.n_tx

    def antenna_slice(self, m: int) -> slice:
        return slice(m * self.n_samples, (m + 1) * self.n_samples)

    def antenna_selector(self, m: int) -> np.ndarray:
        """Dense 0/1 diagonal selecting antenna m's block."""
        d = np.zeros(self.n_coeffs)
        d[self.antenna_slice(m)] = 1.0
        return np.diag(d)

    def coordinate_selector(self, j: int) -> np.ndarray:
        """Dense 0/1 diagonal selecting the single coordinate j."""
        d = np.zeros(self.n_coeffs)
        d[j] = 1.0
        return np.diag(d)

    def band_apply(self, x: np.ndarray, m: int) -> np.ndarray:
        """Blockwise product of the embedded band operator with a vector."""
        out = np.zeros_like(np.asarray(x, dtype=complex))
        sl = self.antenna_slice(m)
        out[sl] = self.band_ops[m] @ x[sl]
        return out

    def band_energy(self, s_t: np.ndarray, m: int) -> float:
        sl = self.antenna_slice(m)
        return float(np.real(s_t[sl].conj() @ (self.band_ops[m] @ s_t[sl])))

    def antenna_energy(self, s_t: np.ndarray, m: int) -> float:
        sl = self.antenna_slice(m)
        return float(np.real(s_t[sl].conj() @ s_t[sl]))


def build_constraints(cfg: SystemConfig, reference: WaveformMatrix,
                      similarity_level: float) -> ConstraintSet:
    """Assemble the constraint bundle for one design run.

    ``similarity_level`` is the dimensionless similarity budget; the
    enforced per-coordinate radius is the level times the r.m.s.
    coordinate modulus ``1/sqrt(n_tx * n_samples)`` of a unit-energy
    waveform, keeping the budget scale-free with respect to the array
    size and pulse length.
    """
    if reference.n_tx != cfg.n_tx or reference.n_samples != cfg.n_samples:
        raise ValueError("reference waveform shape does not match the config")
    radius = similarity_level / np.sqrt(cfg.n_tx * cfg.n_samples)
    ops = tuple(band_matrix(c, cfg.n_samples) for c in cfg.lpf_cutoff_normalized)
    roots = tuple(band_root(h) for h in ops)
    return ConstraintSet(epsilon=radius, similarity_level=similarity_level,
                         reference=reference, n_tx=cfg.n_tx,
                         n_samples=cfg.n_samples, gammas=cfg.band_energy_floor,
                         band_ops=ops, band_roots=roots)


@dataclass(frozen=True)
class FeasibilityReport:
    """Signed residuals, positive where a constraint is violated."""

    similarity: np.ndarray      # per-coordinate |s_j - ref_j|^2 - eps^2
    energy: np.ndarray          # per-antenna block energy minus its target
    band: np.ndarray            # per-antenna gamma/n_tx minus in-band energy

    @property
    def max_violation(self) -> float:
        return float(max(self.similarity.max(), np.abs(self.energy).max(),
                         self.band.max()))

    def feasible(self, tol: float = 1e-9) -> bool:
        return self.max_violation <= tol


def feasibility_report(s_t: np.ndarray, cs: ConstraintSet) -> FeasibilityReport:
    s_t = np.asarray(s_t, dtype=complex).ravel()
    if s_t.size != cs.n_coeffs:
        raise ValueError("waveform vector length does not match constraint set")
    dev = np.abs(s_t - cs.reference.antenna_vec) ** 2 - cs.epsilon ** 2
    energy = np.array([cs.antenna_energy(s_t, m) - cs.energy_target
                       for m in range(cs.n_tx)])
    band = np.array([cs.gammas[m] * cs.energy_target - cs.band_energy(s_t, m)
                     for m in range(cs.n_tx)])
    return FeasibilityReport(similarity=dev, energy=energy, band=band)


# -- proximal projections ----------------------------------------------

def project_similarity_ball(x: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection onto the closed ball of the given radius."""
    x = np.asarray(x)
    nrm = np.linalg.norm(x)
    if nrm <= radius:
        return x.copy()
    return x * (radius / nrm)


def project_energy_sphere(x: np.ndarray, energy: float) -> np.ndarray:
    """Euclidean projection onto the sphere ||u||^2 = energy (nonzero input)."""
    x = np.asarray(x)
    nrm = np.linalg.norm(x)
    if nrm == 0.0:
        raise ValueError("sphere projection undefined at the origin")
    return x * (np.sqrt(energy) / nrm)


def project_band_exterior(x: np.ndarray, energy_floor: float) -> np.ndarray:
    """Euclidean projection onto ||v||^2 >= energy_floor.

    The origin maps to the lexicographically smallest point of the
    bounding sphere, i.e. -sqrt(floor) on the first coordinate; every
    other input projects radially.
    """
    x = np.asarray(x)
    nrm = np.linalg.norm(x)
    target = np.sqrt(energy_floor)
    if nrm >= target:
        return x.copy()
    if nrm == 0.0:
        out = np.zeros_like(x)
        out[(0,) * out.ndim] = -target
        return out
    return x * (target / nrm)


def clip_to_similarity(s_t: np.ndarray, cs: ConstraintSet) -> np.ndarray:
    """Exact per-coordinate projection onto the similarity constraint.

    Every coordinate whose deviation from the reference exceeds the
    radius is pulled radially back to the ball boundary; coordinates
    already within budget are untouched.
    """
    out = np.array(s_t, dtype=complex)
    ref = cs.reference.antenna_vec
    dev = out - ref
    mag = np.abs(dev)
    over = mag > cs.epsilon
    if np.any(over):
        dev[over] *= cs.epsilon / mag[over]
        out = ref + dev
    return out


def rescale_to_antenna_energy(s_t: np.ndarray, cs: ConstraintSet) -> np.ndarray:
    """Rescale each antenna block to exactly its energy share."""
    out = np.array(s_t, dtype=complex)
    for m in range(cs.n_tx):
        sl = cs.antenna_slice(m)
        nrm = np.linalg.norm(out[sl])
        if nrm == 0.0:
            raise ValueError(f"antenna {m} has an all-zero block; cannot rescale")
        out[sl] *= np.sqrt(cs.energy_target) / nrm
    return out


def _raise_band_energy(block: np.ndarray, op: np.ndarray, floor: float) -> np.ndarray:
    """Project one antenna block onto the exterior of the in-band ellipsoid.

    Works in the eigenbasis of the in-band operator: the projection keeps
    the block fixed when the floor is already met, otherwise it solves the
    secular equation sum_i lam_i |z_i|^2 / (1 - t lam_i)^2 = floor for the
    multiplier t by bisection, which inflates in-band components just
    enough to reach the boundary.
    """
    vals, vecs = np.linalg.eigh(op)
    vals = np.clip(vals, 0.0, None)
    z = vecs.conj().T @ block
    if float(np.real(z.conj() @ (vals * z))) >= floor:
        return block.copy()
    lam_max = float(vals.max())
    if lam_max == 0.0:
        raise ValueError("in-band operator is zero; floor unreachable")
    weight = float(np.sum((np.abs(z) ** 2)[vals >= lam_max * (1 - 1e-12)]))
    if weight == 0.0:
        # no overlap with the top eigenspace: seed it minimally
        z = z + np.sqrt(floor / lam_max) * np.eye(len(z))[:, int(np.argmax(vals))]
    lo, hi = 0.0, (1.0 - 1e-9) / lam_max

    def inband(t: float) -> float:
        return float(np.real(np.sum(vals * np.abs(z / (1.0 - t * vals)) ** 2)))

    while inband(hi) < floor:
        hi = (hi + 1.0 / lam_max) / 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if inband(mid) < floor:
            lo = mid
        else:
            hi = mid
    z = z / (1.0 - hi * vals)
    return vecs @ z


def polish_feasibility(s_t: np.ndarray, cs: ConstraintSet,
                       max_rounds: int = 2000, tol: float = 1e-11) -> np.ndarray:
    """Alternate exact projections until all constraint residuals vanish.

    Each round clips the per-coordinate deviation to the similarity ball,
    restores any in-band energy deficit, and ends with the exact antenna
    energy rescale, so the returned vector always meets the energy
    equality exactly; the loop exits once the similarity and band
    residuals are below ``tol`` as well.  Intended for final iterates that
    are already nearly feasible; returns the best effort after
    ``max_rounds`` otherwise.
    """
    out = np.array(s_t, dtype=complex)
    for _ in range(max_rounds):
        out = clip_to_similarity(out, cs)
        for m in range(cs.n_tx):
            sl = cs.antenna_slice(m)
            out[sl] = _raise_band_energy(out[sl], cs.band_ops[m],
                                         cs.gammas[m] * cs.energy_target)
        out = rescale_to_antenna_energy(out, cs)
        rep = feasibility_report(out, cs)
        if max(rep.similarity.max(), rep.band.max()) <= tol:
            break
    return out
