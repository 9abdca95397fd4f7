"""Nonlinear runs: conservation, linear-rate probes, detectors, determinism."""

import math

import numpy as np
import pytest
import scipy.linalg as sla

from turing4 import (
    BoundaryCondition,
    Classification,
    EigenBranchId,
    Method,
    Parity,
    SimConfig,
    TensionedOperator,
    build_diffusion_matrix,
    fd_eigensolve,
    free_branch_mu,
    gm_steady_state,
    initial_state,
    probe_linear_rate,
    run,
    spectrum_list,
    step_imex,
)


def make_cfg(gm_reference, **overrides):
    base = dict(
        R=20.0, tau=0.5, k=30.0, kinetics=gm_reference, seed=1,
        n_grid=256, dt=1e-3, t_max=1.0,
    )
    base.update(overrides)
    return SimConfig(**base)


@pytest.mark.parametrize("tau", [0.5, -0.3])
def test_diffusion_only_mass_conservation(gm_reference, tau):
    cfg = make_cfg(gm_reference, tau=tau, seed=2)
    report, _ = run(cfg, reaction=lambda u, v: (0.0, 0.0))
    assert report.classification is Classification.RUNNING
    assert report.mass_drift_u < 1e-10
    assert report.mass_drift_v < 1e-10


def test_steady_state_is_discrete_fixed_point(gm_reference):
    cfg = make_cfg(gm_reference, seed=2, perturbation_amplitude=0.0)
    ss = gm_steady_state(gm_reference)
    state = initial_state(cfg)
    assert np.max(np.abs(np.asarray(state.u) - ss.u0)) == 0.0
    assert np.max(np.abs(np.asarray(state.v) - ss.v0)) == 0.0
    for _ in range(10):
        state = step_imex(state, cfg)
    assert np.max(np.abs(np.asarray(state.u) - ss.u0)) < 1e-12
    assert np.max(np.abs(np.asarray(state.v) - ss.v0)) < 1e-12


def test_unperturbed_run_reports_decayed(gm_reference):
    cfg = make_cfg(gm_reference, perturbation_amplitude=0.0, t_max=5.0, n_grid=128)
    report, _ = run(cfg)
    assert report.classification is Classification.DECAYED


def test_stable_gap_decays(gm_reference):
    # At small radius every positive branch sits far above the band and the
    # lone negative branch stays above level A: nothing can grow.
    cfg = make_cfg(gm_reference, R=0.5, tau=-0.001, seed=5, n_grid=128, t_max=60.0)
    report, _ = run(cfg)
    assert report.classification is Classification.DECAYED


PROBES = [
    (EigenBranchId(Parity.EVEN, 1), 0.01),   # inside the band, growing
    (EigenBranchId(Parity.ODD, 4), 0.01),    # above the band, decaying
    (EigenBranchId(Parity.ZERO, 0), 0.01),   # uniform mode
]


@pytest.mark.parametrize("branch,tol", PROBES)
def test_probe_linear_rate(gm_reference, branch, tol):
    cfg = make_cfg(gm_reference, n_grid=512)
    probe = probe_linear_rate(cfg, branch)
    assert probe.measured_rate == pytest.approx(probe.predicted_rate, rel=tol)


def test_probe_growing_mode_sign(gm_reference):
    cfg = make_cfg(gm_reference, n_grid=512)
    probe = probe_linear_rate(cfg, EigenBranchId(Parity.EVEN, 1))
    assert probe.predicted_rate > 0.0
    assert probe.measured_rate > 0.0


def test_probe_oscillatory_mode(gm_reference):
    # Below level A the dispersion roots are a complex pair; the envelope
    # rate over whole periods still matches the prediction.
    cfg = make_cfg(gm_reference, tau=-0.3, n_grid=512)
    probe = probe_linear_rate(cfg, EigenBranchId(Parity.ODD, 0))
    assert probe.mu < 0.0
    assert probe.predicted_rate > 1.0
    assert probe.measured_rate == pytest.approx(probe.predicted_rate, rel=5e-3)


def test_fd_refinement_is_second_order():
    op = TensionedOperator(tau=0.5, bc=BoundaryCondition.FREE)
    exact_pts = spectrum_list(op, 20.0, 8, Method.PARAMETERIZED)
    rank = next(
        i for i, pt in enumerate(exact_pts)
        if pt.branch == EigenBranchId(Parity.EVEN, 1)
    )
    exact = free_branch_mu(EigenBranchId(Parity.EVEN, 1), 0.5, 20.0)
    errs = [
        abs(fd_eigensolve(op, 20.0, n_grid=n, count=8)[rank] - exact)
        for n in (128, 256, 512)
    ]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert all(1.8 <= o <= 2.2 for o in orders)


def test_build_diffusion_matrix_contract():
    K, M = build_diffusion_matrix(1.0, 0.0, 512)
    assert K.shape == (3, 513)
    assert M.shape == (513,)
    n = K.shape[1]
    dense = np.zeros((n, n))
    for d in range(K.shape[0]):
        idx = np.arange(n - d)
        dense[idx + d, idx] = K[d, : n - d]
        dense[idx, idx + d] = K[d, : n - d]
    assert np.max(np.abs(dense @ np.ones(n))) == 0.0
    eigs = sla.eigh(dense, np.diag(M), eigvals_only=True, subset_by_index=(0, 2))
    # tau = 0 carries a double kernel (constants and the linear profile);
    # the dense solve resolves it only to roundoff on the stiffness scale.
    assert abs(eigs[0]) < 1e-4 and abs(eigs[1]) < 1e-4
    assert eigs[2] == pytest.approx(31.28524385877703, rel=1e-3)


def test_blowup_detected_quickly_below_level_A(gm_reference):
    # Oscillatory growth at rate ~1.1 drives the inhibitor through zero by
    # t ~ 6; once the division guard engages, the activator source explodes.
    cfg = make_cfg(gm_reference, tau=-0.3, n_grid=512, t_max=50.0)
    report, snaps = run(cfg)
    assert report.classification is Classification.BLOWN_UP
    assert report.t_final < 10.0
    assert report.floor_activations > 0
    assert snaps[-1].classification is Classification.BLOWN_UP


def test_run_is_bitwise_deterministic(gm_reference):
    cfg = make_cfg(gm_reference, n_grid=128, t_max=0.5, seed=9)
    rep1, snaps1 = run(cfg)
    rep2, snaps2 = run(cfg)
    assert rep1 == rep2
    assert len(snaps1) == len(snaps2)
    for a, b in zip(snaps1, snaps2):
        assert a.t == b.t
        assert np.array_equal(np.asarray(a.u), np.asarray(b.u))
        assert np.array_equal(np.asarray(a.v), np.asarray(b.v))


def test_seed_changes_noise(gm_reference):
    cfg1 = make_cfg(gm_reference, n_grid=128, seed=1)
    cfg2 = make_cfg(gm_reference, n_grid=128, seed=2)
    s1, s2 = initial_state(cfg1), initial_state(cfg2)
    assert not np.array_equal(np.asarray(s1.u), np.asarray(s2.u))


def test_step_imex_requires_running(gm_reference):
    cfg = make_cfg(gm_reference, n_grid=128)
    state = initial_state(cfg)
    bad = type(state)(
        t=state.t, u=state.u, v=state.v, mass_u=state.mass_u,
        classification=Classification.DECAYED,
    )
    with pytest.raises(ValueError):
        step_imex(bad, cfg)


@pytest.mark.parametrize(
    "overrides",
    [
        dict(R=0.0),
        dict(k=-1.0),
        dict(n_grid=64),
        dict(dt=0.02),
        dict(dt=0.0),
        dict(t_max=-1.0),
        dict(perturbation_amplitude=-0.1),
        dict(snapshot_stride=0),
    ],
)
def test_config_validation(gm_reference, overrides):
    with pytest.raises(ValueError):
        make_cfg(gm_reference, **overrides)
