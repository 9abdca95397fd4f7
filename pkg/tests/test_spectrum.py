"""Free and periodic spectra: anchors, orderings, and the method triangle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from turing4 import (
    BoundaryCondition,
    BranchNotFoundError,
    EigenBranchId,
    Method,
    MuastNotFoundError,
    Parity,
    TensionedOperator,
    branch_parameterization,
    characteristic_det,
    crossing_tau,
    fd_eigensolve,
    find_muast,
    free_branch_mu,
    negative_eigenvalues,
    periodic_mu,
    rescale_mu,
    spectrum_list,
)

FREE = TensionedOperator(tau=0.0, bc=BoundaryCondition.FREE)

# Unit-interval eigenvalues at zero tension, frozen from the closed-form
# alpha = beta root systems (tan/tanh for odd, cot/coth pattern for even).
TAU0_ANCHORS = [
    (Parity.EVEN, 0, 31.28524385877703),
    (Parity.ODD, 1, 237.7210675311166),
    (Parity.EVEN, 1, 913.6018831951466),
    (Parity.ODD, 2, 2496.487437856832),
    (Parity.EVEN, 2, 5570.9629785737725),
]


@pytest.mark.parametrize("parity,l,mu", TAU0_ANCHORS)
def test_zero_tension_anchors(parity, l, mu):
    assert branch_parameterization(parity, l, 0.0).mu == pytest.approx(mu, rel=1e-13)


def test_negative_anchors_tau_minus_30():
    even = negative_eigenvalues(-30.0)
    odd_mus = [pt.mu for pt in even if pt.branch.parity is Parity.ODD]
    even_mus = [pt.mu for pt in even if pt.branch.parity is Parity.EVEN]
    assert even_mus == pytest.approx(
        [-901.109001633328, -147.0511877757039], rel=1e-13
    )
    assert odd_mus == pytest.approx(
        [-898.9518067357726, -69.21763810488501], rel=1e-13
    )


def test_negative_anchors_tau_minus_5():
    pts = negative_eigenvalues(-5.0)
    by_branch = {(pt.branch.parity, pt.branch.index): pt.mu for pt in pts}
    assert by_branch[(Parity.EVEN, 0)] == pytest.approx(-34.128865103892984, rel=1e-13)
    assert by_branch[(Parity.ODD, 0)] == pytest.approx(-18.029557823933718, rel=1e-13)


def test_negative_counts_and_extremes_tau_minus_120():
    pts = negative_eigenvalues(-120.0)
    evens = [pt.mu for pt in pts if pt.branch.parity is Parity.EVEN]
    odds = [pt.mu for pt in pts if pt.branch.parity is Parity.ODD]
    assert len(evens) == 3 and len(odds) == 4
    assert min(odds) == pytest.approx(-14400.143951254007, rel=1e-13)
    assert min(evens) == pytest.approx(-14399.856108310734, rel=1e-13)


def test_crossing_anchors_give_exact_zeros():
    # cos(pi x / 2) at tau = -pi^2/4 (even), sin(pi x) at tau = -pi^2 (odd)
    assert crossing_tau(Parity.EVEN, 0) == pytest.approx(-math.pi**2 / 4, rel=1e-15)
    assert crossing_tau(Parity.ODD, 1) == pytest.approx(-math.pi**2, rel=1e-15)
    assert branch_parameterization(Parity.EVEN, 0, crossing_tau(Parity.EVEN, 0)).mu == 0.0
    assert branch_parameterization(Parity.ODD, 1, crossing_tau(Parity.ODD, 1)).mu == 0.0


def test_first_odd_branch_slope_is_three():
    # The zero crossing of the first odd branch sits at tau = 0 where the
    # eigenfunction degenerates to u = x; the branch leaves the origin with
    # slope exactly 3 (quadratic form ratio int 3x^2 / int x^2 on (-1,1)).
    h = 1e-6
    slope = (
        branch_parameterization(Parity.ODD, 0, h).mu
        - free_branch_mu(EigenBranchId(Parity.ODD, 0), -h, 1.0)
    ) / (2 * h)
    assert slope == pytest.approx(3.0, rel=1e-6)


def test_odd0_negative_side_tracks_slope_three():
    for tau in (-1e-3, -1e-5, -1e-8):
        mu = free_branch_mu(EigenBranchId(Parity.ODD, 0), tau, 1.0)
        assert mu == pytest.approx(3.0 * tau, rel=5e-3 + 10.0 * abs(tau))


def test_rescaled_branch_anchors():
    odd1 = free_branch_mu(EigenBranchId(Parity.ODD, 1), 0.5, 20.0)
    even1 = free_branch_mu(EigenBranchId(Parity.EVEN, 1), 0.5, 20.0)
    assert odd1 == pytest.approx(0.030395691700985765, rel=1e-13)
    assert even1 == pytest.approx(0.057673877535685356, rel=1e-13)


def test_rescaling_identity():
    for tau, R, branch in [
        (0.5, 3.0, EigenBranchId(Parity.EVEN, 1)),
        (-0.7, 0.5, EigenBranchId(Parity.ODD, 0)),
        (2.0, 10.0, EigenBranchId(Parity.ODD, 2)),
    ]:
        direct = free_branch_mu(branch, tau, R)
        unit = free_branch_mu(branch, tau * R * R, 1.0)
        assert direct == pytest.approx(unit / R**4, rel=1e-12)
        mu_scaled, tau_scaled = rescale_mu(unit, tau * R * R, R)
        assert mu_scaled == pytest.approx(direct, rel=1e-12)
        assert tau_scaled == pytest.approx(tau, rel=1e-12)


def test_periodic_anchors():
    assert periodic_mu(1, 5.0, 1.0) == pytest.approx(146.75711303944922, rel=1e-13)
    assert periodic_mu(2, -1.0, 2.0) == pytest.approx(87.53948663291305, rel=1e-13)
    assert periodic_mu(0, 3.0, 2.0) == 0.0


def test_characteristic_det_vanishes_on_branches():
    for parity, l, _ in TAU0_ANCHORS:
        for tau in (0.0, 4.0, -2.4):
            mu = free_branch_mu(EigenBranchId(parity, l), tau, 1.0)
            here = characteristic_det(tau, mu)
            nearby = abs(characteristic_det(tau, mu * (1.0 + 1e-6)))
            assert abs(here) < 1e-7 * max(nearby, 1e-300)


def test_spectrum_list_is_sorted_and_labeled():
    op = TensionedOperator(tau=-5.0, bc=BoundaryCondition.FREE)
    pts = spectrum_list(op, 1.0, 8, Method.PARAMETERIZED)
    mus = [pt.mu for pt in pts]
    assert mus == sorted(mus)
    assert len(pts) == 8
    assert sum(1 for pt in pts if pt.mu < 0.0) == 2
    zero = [pt for pt in pts if pt.branch.parity is Parity.ZERO]
    assert len(zero) == 1 and zero[0].mu == 0.0


def test_spectrum_list_methods_agree():
    op = TensionedOperator(tau=3.0, bc=BoundaryCondition.FREE)
    param = spectrum_list(op, 1.0, 7, Method.PARAMETERIZED)
    det = spectrum_list(op, 1.0, 7, Method.DETERMINANT)
    fd = spectrum_list(op, 1.0, 7, Method.FINITE_DIFFERENCE)
    for a, b in zip(param, det):
        assert a.branch == b.branch
        assert b.mu == pytest.approx(a.mu, rel=1e-9, abs=1e-9)
    for a, c in zip(param, fd):
        assert a.branch == c.branch
        assert c.mu == pytest.approx(a.mu, rel=1e-3, abs=1e-4)


def test_branch_monotone_in_tension():
    taus = np.linspace(-8.0, 8.0, 33)
    values = [free_branch_mu(EigenBranchId(Parity.EVEN, 0), t, 1.0) for t in taus]
    assert all(lo < hi for lo, hi in zip(values, values[1:]))


def test_branch_below_crossing_raises():
    with pytest.raises(BranchNotFoundError):
        branch_parameterization(Parity.EVEN, 1, -200.0)


def test_fd_periodic_matches_degenerate_pairs():
    # Nonzero periodic modes are doubly degenerate (cos and sin pair).
    op = TensionedOperator(tau=2.0, bc=BoundaryCondition.PERIODIC)
    pts = fd_eigensolve(op, 1.5, n_grid=256, count=5)
    exact = sorted(periodic_mu(l, 2.0, 1.5) for l in (0, 1, 1, 2, 2))
    assert pts[0] == pytest.approx(0.0, abs=1e-10)
    assert pts[1] == pts[2] and pts[3] == pts[4]
    assert pts == pytest.approx(exact, rel=1e-3, abs=1e-10)


def test_find_muast_anchor():
    res = find_muast(-1.0, 10.0)
    assert res.R == pytest.approx(0.49, rel=1e-12)
    assert res.mu1 == pytest.approx(-12.553454268185906, rel=1e-12)
    assert res.mu1 <= res.target == -10.0
    assert res.threshold_R == pytest.approx(0.5490625, rel=1e-10)
    assert res.tested[-1][0] == res.R


def test_find_muast_validation():
    with pytest.raises(ValueError):
        find_muast(0.0, 1.0)
    with pytest.raises(ValueError):
        find_muast(-1.0, -2.0)
    with pytest.raises(MuastNotFoundError):
        find_muast(-1.0, 1e12)


@settings(max_examples=40, deadline=None)
@given(
    tau=st.floats(min_value=-25.0, max_value=25.0),
    l=st.integers(min_value=0, max_value=3),
    parity=st.sampled_from([Parity.EVEN, Parity.ODD]),
)
def test_parameterization_window_property(tau, l, parity):
    cross = crossing_tau(parity, l)
    if tau < cross:
        return
    b = branch_parameterization(parity, l, tau)
    if parity is Parity.ODD:
        lo, hi = l * math.pi, (2 * l + 1) * math.pi / 2
    else:
        lo, hi = (2 * l + 1) * math.pi / 2, (l + 1) * math.pi
    assert lo <= b.alpha < hi
    assert b.beta >= 0.0
    assert b.beta**2 - b.alpha**2 == pytest.approx(tau, rel=1e-9, abs=1e-9)
