"""Dense convex quadratic programming over complex variables.

Problems minimize ``0.5 x^H Q x + Re(q^H x)`` subject to half-space
constraints ``Re(a_i^H x) <= b_i`` with Hermitian PSD ``Q``.  The solver
lifts everything to real composite form and runs a primal active-set
iteration: feasibility first (a phase-one linear program), then
equality-constrained steps on the working set with standard add/drop
rules.  Infeasible constraint sets raise with a Farkas-style certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Set

import numpy as np
from scipy.optimize import linprog

__all__ = [
    "QpProblem",
    "QpSolution",
    "QpInfeasibleError",
    "solve_qp",
]

_EIG_CLIP = 1e-12


@dataclass
class QpProblem:
    """min 0.5 x^H Q x + Re(q^H x)  s.t.  Re(a_i^H x) <= b_i."""

    quad: np.ndarray            # (n, n) Hermitian PSD
    lin: np.ndarray             # (n,) complex
    ineq_vectors: np.ndarray    # (m, n) complex rows a_i
    ineq_bounds: np.ndarray     # (m,) real

    def __post_init__(self):
        self.quad = np.asarray(self.quad, dtype=complex)
        self.lin = np.asarray(self.lin, dtype=complex).ravel()
        self.ineq_vectors = np.atleast_2d(np.asarray(self.ineq_vectors,
                                                     dtype=complex))
        self.ineq_bounds = np.atleast_1d(np.asarray(self.ineq_bounds,
                                                    dtype=float))
        n = self.lin.size
        if self.quad.shape != (n, n):
            raise ValueError("quadratic term shape does not match the linear term")
        if self.ineq_vectors.shape[1] != n and self.ineq_vectors.size:
            raise ValueError("constraint vectors have the wrong length")
        if self.ineq_vectors.shape[0] != self.ineq_bounds.size:
            raise ValueError("constraint count mismatch")
        herm_gap = np.max(np.abs(self.quad - self.quad.conj().T)) if n else 0.0
        if herm_gap > 1e-8 * max(1.0, np.max(np.abs(self.quad))):
            raise ValueError("quadratic term must be Hermitian")


@dataclass
class QpSolution:
    x: np.ndarray               # (n,) complex minimizer
    multipliers: np.ndarray     # (m,) nonnegative, complementary slackness
    active: List[int]           # final working set (original constraint indices)
    iterations: int
    objective: float
    kkt_residual: float         # stationarity norm of the lifted problem


class QpInfeasibleError(RuntimeError):
    """No point satisfies the constraints; carries a Farkas certificate.

    The certificate y >= 0 combines the constraint rows into an
    impossible inequality: G^T y ~ 0 while b^T y < 0.
    """

    def __init__(self, certificate: np.ndarray, combined_row_norm: float,
                 combined_bound: float):
        self.certificate = certificate
        self.combined_row_norm = combined_row_norm
        self.combined_bound = combined_bound
        super().__init__(
            f"infeasible constraint set: certificate combines rows to "
            f"|G^T y| = {combined_row_norm:.3e} with b^T y = {combined_bound:.3e}")


def _lift_matrix(q: np.ndarray) -> np.ndarray:
    re, im = q.real, q.imag
    return np.block([[re, -im], [im, re]])


def _lift_vec(v: np.ndarray) -> np.ndarray:
    return np.concatenate([v.real, v.imag])


def _unlift_vec(x: np.ndarray) -> np.ndarray:
    n = x.size // 2
    return x[:n] + 1j * x[n:]


def _repair_psd(q: np.ndarray) -> np.ndarray:
    """Symmetrize and clip tiny negative eigenvalues (keeps steps downhill)."""
    q = 0.5 * (q + q.T)
    vals, vecs = np.linalg.eigh(q)
    floor = _EIG_CLIP * max(1.0, float(vals.max(initial=0.0)))
    if vals.min(initial=0.0) >= floor:
        return q
    return (vecs * np.clip(vals, floor, None)) @ vecs.T


def _phase_one(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Feasible point for G x <= h via linear programming, or a certificate."""
    m, n = g.shape
    res = linprog(c=np.zeros(n), A_ub=g, b_ub=h,
                  bounds=[(None, None)] * n, method="highs")
    if res.status == 0:
        return res.x
    # minimize the worst violation to expose a Farkas combination
    c = np.zeros(n + 1)
    c[-1] = 1.0
    a = np.hstack([g, -np.ones((m, 1))])
    res2 = linprog(c=c, A_ub=a, b_ub=h, bounds=[(None, None)] * n + [(0, None)],
                   method="highs")
    if res2.status == 0 and res2.x[-1] <= 1e-9:
        return res2.x[:n]
    y = np.zeros(m)
    if res2.status == 0 and res2.ineqlin is not None:
        y = np.abs(np.asarray(res2.ineqlin.marginals))
    raise QpInfeasibleError(certificate=y,
                            combined_row_norm=float(np.linalg.norm(g.T @ y)),
                            combined_bound=float(h @ y))


def _solve_kkt(q: np.ndarray, grad: np.ndarray, g_w: np.ndarray):
    """Step and multipliers for the equality-constrained subproblem."""
    n = q.shape[0]
    k = g_w.shape[0]
    kkt = np.zeros((n + k, n + k))
    kkt[:n, :n] = q
    if k:
        kkt[:n, n:] = g_w.T
        kkt[n:, :n] = g_w
    rhs = np.concatenate([-grad, np.zeros(k)])
    try:
        sol = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    return sol[:n], sol[n:]


def _active_set(q: np.ndarray, c: np.ndarray, g: np.ndarray, h: np.ndarray,
                x0: np.ndarray, tol: float, max_iter: int):
    """Primal active-set iteration for min 0.5 x'Qx + c'x, Gx <= h."""
    m = g.shape[0]
    x = x0.copy()
    slack = h - g @ x
    work: List[int] = [int(i) for i in np.flatnonzero(slack <= tol)]
    lam_full = np.zeros(m)
    for it in range(1, max_iter + 1):
        grad = q @ x + c
        g_w = g[work] if work else np.zeros((0, x.size))
        p, lam = _solve_kkt(q, grad, g_w)
        if np.linalg.norm(p) <= tol * max(1.0, np.linalg.norm(x)):
            lam_full[:] = 0.0
            for idx, li in zip(work, lam):
                lam_full[idx] = li
            if not work or lam.min(initial=0.0) >= -tol:
                return x, lam_full, work, it
            work.pop(int(np.argmin(lam)))
            continue
        # longest step keeping all inactive constraints satisfied
        alpha, blocking = 1.0, None
        denom = g @ p
        for i in range(m):
            if i in work or denom[i] <= tol:
                continue
            a_i = (h[i] - g[i] @ x) / denom[i]
            if a_i < alpha:
                alpha, blocking = max(a_i, 0.0), i
        x = x + alpha * p
        if blocking is not None:
            work.append(blocking)
    return x, lam_full, work, max_iter


def solve_qp(problem: QpProblem, x0: Optional[np.ndarray] = None,
             tol: float = 1e-9, max_iter: Optional[int] = None) -> QpSolution:
    """Solve a complex half-space-constrained convex QP.

    A provided ``x0`` is used directly when feasible (warm start);
    otherwise phase one finds a starting point.  Determinism: identical
    inputs take identical pivots, so outputs are reproducible.
    """
    n = problem.lin.size
    q_r = _repair_psd(_lift_matrix(problem.quad))
    c_r = _lift_vec(problem.lin)
    if problem.ineq_vectors.size:
        g_r = np.hstack([problem.ineq_vectors.real, problem.ineq_vectors.imag])
    else:
        g_r = np.zeros((0, 2 * n))
    h_r = problem.ineq_bounds.astype(float)
    if max_iter is None:
        max_iter = 50 + 10 * (g_r.shape[0] + 2 * n)

    feas_tol = max(tol, 1e-10)
    start = None
    if x0 is not None:
        x0_r = _lift_vec(np.asarray(x0, dtype=complex).ravel())
        if not g_r.size or np.all(g_r @ x0_r <= h_r + feas_tol):
            start = x0_r
    if start is None:
        if g_r.size:
            start = _phase_one(g_r, h_r)
        else:
            start = np.zeros(2 * n)

    x_r, lam, work, iters = _active_set(q_r, c_r, g_r, h_r, start,
                                        feas_tol, max_iter)
    grad = q_r @ x_r + c_r + (g_r[work].T @ lam[work] if work else 0.0)
    x = _unlift_vec(x_r)
    obj = float(0.5 * x_r @ q_r @ x_r + c_r @ x_r)
    return QpSolution(x=x, multipliers=lam, active=sorted(work),
                      iterations=iters, objective=obj,
                      kkt_residual=float(np.linalg.norm(grad)))
