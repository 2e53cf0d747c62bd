"""Per-iteration records, stopping rules and run results shared by both optimizers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

__all__ = ["TraceRecord", "StopRule", "SolverResult"]


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    sinr_db: float              # output SINR of the energy-repaired iterate
    primal_residual: float      # split-variable mismatch norm
    energy_residual: float      # worst per-antenna energy violation


@dataclass(frozen=True)
class StopRule:
    """Stop on iteration budget, split agreement, or an SINR plateau."""

    max_iter: int = 500
    primal_tol: float = 1e-6
    plateau_tol_db: float = 1e-3
    plateau_window: int = 5

    def plateaued(self, trace: List[TraceRecord]) -> bool:
        if len(trace) <= self.plateau_window:
            return False
        recent = [r.sinr_db for r in trace[-(self.plateau_window + 1):]]
        return max(recent) - min(recent) <= self.plateau_tol_db


@dataclass(frozen=True)
class SolverResult:
    """Outcome of one optimizer run on a fixed scenario."""

    waveform: np.ndarray        # energy-repaired final waveform vector
    trace: List[TraceRecord]
    status: str                 # converged | plateau | max_iter
    iterations: int

    @property
    def sinr_db(self) -> float:
        return self.trace[-1].sinr_db
