"""Constraint tests: band operators, feasibility residuals, projections.

The in-band energy operator is checked against a dense numerical
quadrature of the spectral density (independent of the closed form); the
reference waveform's per-antenna in-band fractions are frozen from that
oracle.  All projections are exercised for idempotence, set membership
and nonexpansiveness.
"""
import numpy as np
import pytest

from fda_waveopt import (
    SystemConfig,
    WaveformMatrix,
    band_matrix,
    band_root,
    build_constraints,
    clip_to_similarity,
    feasibility_report,
    polish_feasibility,
    project_band_exterior,
    project_energy_sphere,
    project_similarity_ball,
    reference_olfm,
    rescale_to_antenna_energy,
)

# Per-antenna in-band energy fractions of the reference waveform at the
# 0.9 normalized cutoff, frozen from the quadrature oracle below.  Rows
# 2 through 5 sit below the 0.91 containment floor: the sampled
# reference is *not* bandwidth-feasible, which the solvers must repair.
REFERENCE_INBAND_FRACTIONS = [0.9692, 0.9214, 0.8710, 0.8826, 0.8826, 0.8702]


# -- oracle ------------------------------------------------------------

def inband_quadrature_oracle(row: np.ndarray, cutoff: float,
                             points: int = 200_001) -> float:
    """In-band energy by direct quadrature of |sum_l s_l e^{-j2pi f l}|^2.

    Integrates the energy spectral density over [0, cutoff] with the
    trapezoid rule on a dense frequency grid; never touches the closed
    form under test.
    """
    f = np.linspace(0.0, cutoff, points)
    spectrum = np.exp(-2j * np.pi * np.outer(f, np.arange(row.size))) @ row
    return float(np.trapezoid(np.abs(spectrum) ** 2, f))


# -- band operator -----------------------------------------------------

def test_band_matrix_full_band_is_identity():
    assert np.allclose(band_matrix(1.0, 7), np.eye(7), atol=1e-12)


def test_band_matrix_half_band_entry():
    h = band_matrix(0.5, 4)
    assert h[1, 0] == pytest.approx(1j / np.pi, abs=1e-12)
    assert h[0, 1] == pytest.approx(-1j / np.pi, abs=1e-12)
    assert np.allclose(np.diag(h), 0.5)


def test_band_matrix_hermitian_and_psd():
    rng = np.random.default_rng(3)
    for cutoff in rng.uniform(0.05, 1.0, 10):
        h = band_matrix(float(cutoff), 12)
        assert np.max(np.abs(h - h.conj().T)) < 1e-12
        assert np.linalg.eigvalsh(h).min() > -1e-10


def test_band_matrix_loewner_monotone():
    rng = np.random.default_rng(5)
    for _ in range(10):
        f1, f2 = np.sort(rng.uniform(0.05, 1.0, 2))
        if f2 - f1 < 1e-3:
            continue
        diff = band_matrix(float(f2), 10) - band_matrix(float(f1), 10)
        assert np.linalg.eigvalsh(diff).min() >= -1e-10


def test_band_matrix_matches_quadrature(cfg):
    h = band_matrix(0.9, cfg.n_samples)
    rng = np.random.default_rng(7)
    for _ in range(5):
        s = rng.standard_normal(cfg.n_samples) \
            + 1j * rng.standard_normal(cfg.n_samples)
        closed = float(np.real(s.conj() @ (h @ s)))
        assert closed == pytest.approx(inband_quadrature_oracle(s, 0.9),
                                       rel=1e-6)


def test_band_matrix_rejects_bad_cutoff():
    for bad in (0.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            band_matrix(bad, 5)


def test_band_root_reconstructs():
    for cutoff in (0.3, 0.9):
        h = band_matrix(cutoff, 9)
        root = band_root(h)
        assert np.max(np.abs(root.conj().T @ root - h)) < 1e-10


# -- constraint bundle -------------------------------------------------

def test_similarity_level_scaling(cfg, reference):
    cs = build_constraints(cfg, reference, 1.0)
    assert cs.epsilon == pytest.approx(1.0 / np.sqrt(cfg.n_tx
                                                     * cfg.n_samples))
    assert cs.similarity_level == 1.0
    assert build_constraints(cfg, reference, 0.0).epsilon == 0.0
    with pytest.raises(ValueError):
        build_constraints(cfg, reference, -0.5)


def test_constraints_shape_mismatch(cfg):
    small = WaveformMatrix(np.ones((2, 3), dtype=complex))
    with pytest.raises(ValueError):
        build_constraints(cfg, small, 1.0)


def test_selectors_partition_energy(cfg, reference):
    cs = build_constraints(cfg, reference, 1.0)
    rng = np.random.default_rng(11)
    s = rng.standard_normal(cs.n_coeffs) + 1j * rng.standard_normal(cs.n_coeffs)
    total = sum(cs.antenna_energy(s, m) for m in range(cs.n_tx))
    assert total == pytest.approx(np.linalg.norm(s) ** 2, rel=1e-12)
    sel_sum = sum(cs.antenna_selector(m) for m in range(cs.n_tx))
    assert np.array_equal(sel_sum, np.eye(cs.n_coeffs))
    sel = cs.antenna_selector(2)
    assert np.array_equal(sel @ sel, sel)
    e = cs.coordinate_selector(37)
    assert e.sum() == 1.0 and e[37, 37] == 1.0


def test_inband_energy_bounded_by_total(cfg, reference):
    cs = build_constraints(cfg, reference, 1.0)
    rng = np.random.default_rng(13)
    for _ in range(20):
        s = rng.standard_normal(cs.n_coeffs) \
            + 1j * rng.standard_normal(cs.n_coeffs)
        for m in range(cs.n_tx):
            inband = cs.band_energy(s, m)
            assert -1e-10 <= inband <= cs.antenna_energy(s, m) + 1e-10


# -- feasibility reporting ---------------------------------------------

def test_reference_feasibility_truth(cfg, reference):
    """The reference meets similarity and energy but not the band floor."""
    cs = build_constraints(cfg, reference, 1.0)
    rep = feasibility_report(reference.antenna_vec, cs)
    assert rep.similarity.max() <= 0.0
    assert np.max(np.abs(rep.energy)) < 1e-12
    fractions = [cs.band_energy(reference.antenna_vec, m) / cs.energy_target
                 for m in range(cs.n_tx)]
    for got, frozen, row in zip(fractions, REFERENCE_INBAND_FRACTIONS,
                                reference.entries):
        assert got == pytest.approx(frozen, abs=5e-5)
        oracle = inband_quadrature_oracle(row, 0.9) / cs.energy_target
        assert got == pytest.approx(oracle, rel=1e-6)
    worst = (0.91 - min(REFERENCE_INBAND_FRACTIONS)) * cs.energy_target
    assert rep.band.max() == pytest.approx(worst, abs=1e-5)
    assert not rep.feasible()


def test_feasibility_quadratic_energy_scaling(cfg, reference):
    """Doubling the waveform quadruples per-antenna energy: residual 3/6."""
    cs = build_constraints(cfg, reference, 1.0)
    rep = feasibility_report(2.0 * reference.antenna_vec, cs)
    assert np.allclose(rep.energy, 3.0 * cs.energy_target, atol=1e-12)


def test_feasibility_single_coordinate_violation(cfg, reference):
    cs = build_constraints(cfg, reference, 1.0)
    bumped = reference.antenna_vec.copy()
    bumped[0] += (cs.epsilon + 0.01)
    rep = feasibility_report(bumped, cs)
    assert rep.similarity[0] > 0.0
    assert np.all(rep.similarity[1:] <= 0.0)


def test_feasibility_rejects_wrong_length(cfg, reference):
    cs = build_constraints(cfg, reference, 1.0)
    with pytest.raises(ValueError):
        feasibility_report(np.zeros(7), cs)


# -- projections -------------------------------------------------------

def test_similarity_ball_projection():
    h = np.array([0.3 + 0.4j])  # norm 0.5
    assert np.array_equal(project_similarity_ball(h, 1.0), h)
    big = np.array([2.0 + 0.0j, 0.0j])
    assert np.allclose(project_similarity_ball(big, 1.0), [1.0, 0.0])
    rng = np.random.default_rng(17)
    for _ in range(50):
        x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        eps = float(rng.uniform(0.1, 2.0))
        p = project_similarity_ball(x, eps)
        assert np.linalg.norm(p) <= eps + 1e-12
        assert np.allclose(project_similarity_ball(p, eps), p, atol=1e-12)


def test_energy_sphere_projection():
    u = np.zeros(4, dtype=complex)
    u[0] = 1.0
    assert np.allclose(project_energy_sphere(u, 0.25), 0.5 * u)
    rng = np.random.default_rng(19)
    for _ in range(50):
        x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        p = project_energy_sphere(x, 1.0 / 6.0)
        assert np.linalg.norm(p) ** 2 == pytest.approx(1.0 / 6.0, rel=1e-12)
        assert np.allclose(project_energy_sphere(p, 1.0 / 6.0), p, atol=1e-12)
    on_sphere = np.ones(4) / np.sqrt(4 * 6.0)
    assert np.allclose(project_energy_sphere(on_sphere, 1.0 / 6.0), on_sphere)
    with pytest.raises(ValueError):
        project_energy_sphere(np.zeros(3), 1.0)


def test_band_exterior_projection():
    floor = 0.2
    far = np.ones(3) * 10.0
    assert np.array_equal(project_band_exterior(far, floor), far)
    rng = np.random.default_rng(23)
    for _ in range(50):
        x = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        x *= rng.uniform(0.0, 0.3)
        p = project_band_exterior(x, floor)
        assert np.linalg.norm(p) ** 2 >= floor - 1e-12
        assert np.allclose(project_band_exterior(p, floor), p, atol=1e-12)
    half = np.zeros(2, dtype=complex)
    half[0] = np.sqrt(floor) / 2.0
    assert np.linalg.norm(project_band_exterior(half, floor)) ** 2 == \
        pytest.approx(floor, rel=1e-12)
    zero = project_band_exterior(np.zeros(3), floor)
    assert zero[0] == pytest.approx(-np.sqrt(floor))
    assert np.all(zero[1:] == 0.0)


def test_projections_nonexpansive():
    rng = np.random.default_rng(29)
    for _ in range(30):
        x = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        y = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        gap = np.linalg.norm(x - y)
        assert np.linalg.norm(project_similarity_ball(x, 1.0)
                              - project_similarity_ball(y, 1.0)) <= gap + 1e-12
        # sphere and exterior projections: nonexpansive from outside
        xo, yo = x + 5.0, y + 5.0
        assert np.linalg.norm(project_energy_sphere(xo, 0.5)
                              - project_energy_sphere(yo, 0.5)) \
            <= np.linalg.norm(xo - yo) + 1e-12
        assert np.linalg.norm(project_band_exterior(xo, 0.5)
                              - project_band_exterior(yo, 0.5)) \
            <= np.linalg.norm(xo - yo) + 1e-12


# -- repairs -----------------------------------------------------------

def test_clip_to_similarity_exact(cfg, reference):
    cs = build_constraints(cfg, reference, 0.2)
    rng = np.random.default_rng(31)
    s = reference.antenna_vec + 0.1 * (rng.standard_normal(cs.n_coeffs)
                                       + 1j * rng.standard_normal(cs.n_coeffs))
    clipped = clip_to_similarity(s, cs)
    dev = np.abs(clipped - reference.antenna_vec)
    assert dev.max() <= cs.epsilon + 1e-12
    assert np.allclose(clip_to_similarity(clipped, cs), clipped,
                       rtol=0.0, atol=1e-14)


def test_rescale_exact_energy(cfg, reference):
    cs = build_constraints(cfg, reference, 1.0)
    rng = np.random.default_rng(37)
    s = rng.standard_normal(cs.n_coeffs) + 1j * rng.standard_normal(cs.n_coeffs)
    fixed = rescale_to_antenna_energy(s, cs)
    for m in range(cs.n_tx):
        assert cs.antenna_energy(fixed, m) == pytest.approx(cs.energy_target,
                                                            rel=1e-12)
    bad = s.copy()
    bad[cs.antenna_slice(2)] = 0.0
    with pytest.raises(ValueError):
        rescale_to_antenna_energy(bad, cs)


def test_polish_reaches_feasibility(cfg, reference):
    cs = build_constraints(cfg, reference, 1.0)
    rng = np.random.default_rng(41)
    rough = reference.antenna_vec + 0.05 * (
        rng.standard_normal(cs.n_coeffs) + 1j * rng.standard_normal(cs.n_coeffs))
    polished = polish_feasibility(rough, cs)
    rep = feasibility_report(polished, cs)
    assert rep.feasible(1e-9)
    # energy holds exactly, not just within tolerance
    for m in range(cs.n_tx):
        assert cs.antenna_energy(polished, m) == pytest.approx(
            cs.energy_target, rel=1e-12)
