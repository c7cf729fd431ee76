import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abdirac import spinor
from abdirac.cylinder import chi_finite
from abdirac.errors import DomainError, UsageError
from abdirac.halfint import HalfInteger, half_odd_range
from abdirac.params import CylinderConfig, RingConfig
from abdirac.ring import partial_current_ring
from abdirac.spinor import (
    FiniteMode,
    InfiniteMode,
    MixedState,
    PolarizationMix,
    RingState,
    apply_K,
    current_bilinear,
    dirac_system_residual,
    eval_finite_spinor,
    eval_infinite_spinor,
    eval_ring_spinor,
    gram_matrix,
    scalar_product,
)

labels = st.integers(-15, 14).map(lambda t: HalfInteger(2 * t + 1))
signs = st.sampled_from([1, -1])
betas = st.floats(-0.45, 0.45)


def test_gamma_matrices_form_clifford_algebra():
    assert spinor.clifford_defect() == 0.0
    assert np.allclose(spinor.GAMMA[0], np.diag([1, 1, -1, -1]))
    broken = spinor.GAMMA.copy()
    broken[1, 0, 3] += 1e-3
    assert spinor.clifford_defect(broken) > 1e-4


def test_ring_state_norm_and_orthogonality():
    cfg = RingConfig(2.0, 0.1)
    up, down = RingState(cfg, 1.5, 1), RingState(cfg, 1.5, -1)
    assert scalar_product(up, up, nodes=256).real == pytest.approx(1.0, abs=1e-12)
    assert abs(scalar_product(up, down)) < 1e-12
    assert abs(scalar_product(up, RingState(cfg, 2.5, 1))) < 1e-12


def test_ring_gram_is_identity():
    cfg = RingConfig(0.6, -0.2)
    states = [RingState(cfg, lam, k) for k in (1, -1) for lam in half_odd_range("7/2")]
    assert np.abs(gram_matrix(states) - np.eye(16)).max() < 1e-10


def test_finite_gram_is_identity():
    cfg = CylinderConfig(1.5, 0.05, 0.6)
    modes = [FiniteMode(cfg, n, lam, s) for s in (1, -1) for n in (1, 2, 3) for lam in half_odd_range("5/2")]
    assert np.abs(gram_matrix(modes) - np.eye(len(modes))).max() < 1e-10


def test_finite_modes_orthogonal_in_n():
    cfg = CylinderConfig(0.4, 0.3, 2.2)
    for s in (1, -1):
        assert abs(scalar_product(FiniteMode(cfg, 1, 0.5, s), FiniteMode(cfg, 4, 0.5, s))) < 1e-10
        assert scalar_product(FiniteMode(cfg, 2, -1.5, s), FiniteMode(cfg, 2, -1.5, s)).real == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("k, k2", [(0.5, 0.5), (0.5, 0.55), (1.0, 2.0), (-0.3, 0.4)])
def test_infinite_modes_box_overlap(k, k2):
    cfg, half = CylinderConfig(0.8, 0.1), 15.0
    u, v = InfiniteMode(cfg, k, 0.5, 1), InfiniteMode(cfg, k2, 0.5, 1)
    got = scalar_product(u, v, z_range=(-half, half))
    spin = 2 * math.pi * np.vdot(u.coefficients(), v.coefficients())
    box = (2 * half / (2 * math.pi)) * np.sinc((k2 - k) * half / math.pi)
    assert abs(got - spin * box) < 1e-10


def test_mixed_state_is_normalized():
    w = PolarizationMix(0.6, 0.8j)
    for mode in (RingState(RingConfig(1.0, 0.1), 0.5), FiniteMode(CylinderConfig(1.0, 0.1, 1.0), 2, -2.5, -1)):
        psi = MixedState(mode, w)
        assert scalar_product(psi, psi).real == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(DomainError):
        PolarizationMix(1.0, 0.5)


def test_quadrature_rejects_mixed_geometries():
    ring_state = RingState(RingConfig(1.0), 0.5)
    with pytest.raises(UsageError):
        scalar_product(ring_state, FiniteMode(CylinderConfig(1.0, 0.0, 1.0), 1, 0.5))
    with pytest.raises(UsageError):
        scalar_product(ring_state, RingState(RingConfig(2.0), 0.5))
    with pytest.raises(UsageError):
        scalar_product(InfiniteMode(CylinderConfig(1.0), 0.1, 0.5), InfiniteMode(CylinderConfig(1.0), 0.1, 0.5))


def test_evaluators():
    mode = FiniteMode(CylinderConfig(1.0, 0.0, 1.0), 2, 0.5)
    assert eval_finite_spinor(mode, 0.0, 0.3, 0.5).components.shape == (4,)
    assert np.allclose(eval_finite_spinor(mode, 0.0, 0.3, 0.0).components[:2], 0)
    with pytest.raises(DomainError):
        eval_finite_spinor(mode, 0.0, 0.3, 1.2)
    ring_sample = eval_ring_spinor(RingState(RingConfig(1.0), 0.5), 0.0, np.linspace(0, 1, 5))
    assert ring_sample.components.shape == (4, 5)
    inf = eval_infinite_spinor(InfiniteMode(CylinderConfig(1.0), 0.5, 0.5), 1.0, 0.2, 3.0)
    assert np.linalg.norm(inf.components) > 0


@settings(max_examples=100)
@given(st.floats(0, 30), betas, labels, signs)
def test_ring_residual(mu, beta, lam, kappa):
    assert dirac_system_residual(RingState(RingConfig(mu, beta), lam, kappa)) < 1e-12


@settings(max_examples=100)
@given(st.floats(0, 30), betas, st.floats(0.05, 5), st.integers(1, 8), labels, signs)
def test_finite_residual(mu, beta, aspect, n, lam, sigma):
    assert dirac_system_residual(FiniteMode(CylinderConfig(mu, beta, aspect), n, lam, sigma)) < 1e-12


@settings(max_examples=100)
@given(st.floats(0, 30), betas, st.floats(-20, 20), labels, signs)
def test_infinite_residual(mu, beta, k, lam, sigma):
    assert dirac_system_residual(InfiniteMode(CylinderConfig(mu, beta), k, lam, sigma)) < 1e-12


def test_residual_detects_wrong_energy():
    mode = FiniteMode(CylinderConfig(1.0, 0.1, 1.0), 1, 0.5)
    assert dirac_system_residual(mode, energy=mode.energy + 0.1) > 0.01
    assert dirac_system_residual(RingState(RingConfig(0.0, 0.2), -1.5, -1)) < 1e-12


def test_polarization_operator():
    cfg = RingConfig(0.9, 0.05)
    for lam in half_odd_range(2.5):
        assert apply_K(RingState(cfg, lam, 1)) == pytest.approx(1.0, abs=1e-12)
        assert apply_K(RingState(cfg, lam, -1)) == pytest.approx(-1.0, abs=1e-12)
        assert abs(apply_K(MixedState(RingState(cfg, lam), PolarizationMix(0.6**0.5, 0.4**0.5)))
                   - 0.2) < 1e-12
        assert abs(apply_K(MixedState(RingState(cfg, lam), PolarizationMix(2**-0.5, 2**-0.5)))) < 1e-12
    at_rest = CylinderConfig(0.9, 0.05)
    for lam in half_odd_range(3.5):
        assert apply_K(InfiniteMode(at_rest, 0.0, lam, 1)) == pytest.approx(float(lam), abs=1e-12)
        assert apply_K(InfiniteMode(at_rest, 0.0, lam, -1)) == pytest.approx(-float(lam), abs=1e-12)


@given(st.floats(0, 5), betas, st.floats(-5, 5), labels, signs)
def test_polarization_with_momentum(mu, beta, k, lam, sigma):
    mode = InfiniteMode(CylinderConfig(mu, beta), k, lam, sigma)
    E = mode.energy
    expected = sigma * float(lam) * (1 - k * k / (E * (E + mu)))
    assert apply_K(mode) == pytest.approx(expected, abs=1e-11)


def test_polarization_finite_differences():
    modes = [
        FiniteMode(CylinderConfig(1.1, 0.2, 1.3), 2, 1.5, 1),
        FiniteMode(CylinderConfig(0.3, -0.1, 0.5), 1, -2.5, -1),
        InfiniteMode(CylinderConfig(1.1), 0.7, -2.5, -1),
    ]
    for m in modes:
        assert apply_K(m, l3="fd", h=1e-5) == pytest.approx(apply_K(m), abs=1e-6)


def test_ring_cross_current_vanishes():
    cfg = RingConfig(1.7, 0.05)
    phi = np.random.default_rng(7).uniform(0, 2 * math.pi, 32)
    for lam in half_odd_range(3.5):
        up, down = RingState(cfg, lam, 1), RingState(cfg, lam, -1)
        assert np.abs(current_bilinear(up, down, "phi", 0.3, phi)).max() < 1e-14


def test_ring_current_bilinear_is_chi():
    cfg = RingConfig(1.7, 0.05)
    for lam in half_odd_range(4.5):
        for kappa in (1, -1):
            st_ = RingState(cfg, lam, kappa)
            got = 2 * math.pi * current_bilinear(st_, st_, "phi", 0.0, np.linspace(0, 6, 7))
            assert np.allclose(got, partial_current_ring(1.7, 0.05, lam), atol=1e-14)


def test_finite_axial_current_vanishes():
    cfg = CylinderConfig(1.2, 0.1, 0.9)
    zeta = np.linspace(0, 1, 33)
    for lam in half_odd_range(2.5):
        for n in (1, 2, 3):
            for s, s2 in ((1, 1), (-1, -1), (1, -1)):
                val = current_bilinear(FiniteMode(cfg, n, lam, s), FiniteMode(cfg, n, lam, s2), "z", 0.2, 1.0, zeta)
                assert np.abs(val).max() < 1e-14


def test_finite_circular_density_at_midpoint():
    cfg = CylinderConfig(1.2, 0.1, 0.9)
    for n in (1, 3):
        for lam in (0.5, -1.5):
            m = FiniteMode(cfg, n, lam, 1)
            got = current_bilinear(m, m, "phi", 0.0, 0.4, 0.5)
            assert got.real == pytest.approx(m.nu / (math.pi * cfg.length * m.energy), rel=1e-13)


def test_finite_circular_density_integrates_to_chi():
    cfg = CylinderConfig(0.7, -0.2, 1.9)
    x, w = np.polynomial.legendre.leggauss(48)
    for n, lam, s in ((1, 0.5, 1), (2, -2.5, -1), (3, 1.5, 1)):
        m = FiniteMode(cfg, n, lam, s)
        dens = current_bilinear(m, m, "phi", 0.0, 1.0, 0.5 * (x + 1)).real
        assert 2 * math.pi * np.sum(0.5 * w * cfg.length * dens) == pytest.approx(chi_finite(cfg, n, lam), abs=1e-13)


@given(st.floats(0, 10), betas, labels)
def test_gauge_shift(mu, beta, lam):
    a = RingState(RingConfig(mu, beta), lam)
    b = RingState(RingConfig(mu, beta + 1), lam.shift(-1))
    assert a.energy == pytest.approx(b.energy, abs=1e-13)
    ja = current_bilinear(a, a, "phi", 0.0, 0.3)
    jb = current_bilinear(b, b, "phi", 0.0, 0.3)
    assert abs(ja - jb) < 1e-13


def test_flipped_modes():
    cfg = CylinderConfig(1.0, 0.0, 1.0)
    m = FiniteMode(cfg, 1, 0.5, 1)
    assert m.flipped().flipped() == m
    assert RingState(RingConfig(1.0), 0.5, 1).flipped().kappa == -1
