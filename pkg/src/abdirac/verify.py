"""Self-verification suites run by ``abdirac verify``.

Each check recomputes an invariant from scratch and compares an error
measure against a fixed limit. Checks read module globals (for instance
``spinor.GAMMA``) at call time, so a corrupted constant shows up here.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.differentiate import derivative

from . import cylinder, ring, spinor, wavepacket
from .halfint import HalfInteger, half_odd_range
from .params import ELECTRON_MASS, CylinderConfig, RingConfig, mu_from_physical

SUITES = ("spinor", "currents", "sums")


@dataclass
class Check:
    suite: str
    name: str
    observed: float
    limit: float
    passed: bool

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.suite:<8} {self.name:<44} observed={self.observed:.3e} limit={self.limit:.1e}"


_REGISTRY: dict[str, list[tuple[str, Callable[[], tuple[float, float]]]]] = {s: [] for s in SUITES}


def _check(suite: str, name: str):
    def register(fn):
        _REGISTRY[suite].append((name, fn))
        return fn

    return register


def _below(observed: float, limit: float) -> tuple[float, float]:
    return float(observed), float(limit)


def _rng():
    return np.random.default_rng(20240611)


def _fd_beta(f, beta: float) -> float:
    return float(derivative(f, beta, tolerances=dict(atol=0.0, rtol=1e-13)).df)


# ---------------------------------------------------------------- spinor


@_check("spinor", "clifford algebra of gamma matrices")
def _clifford():
    return _below(spinor.clifford_defect(spinor.GAMMA), 1e-14)


@_check("spinor", "ring Gram matrix is identity")
def _ring_gram():
    cfg = RingConfig(mu=1.3, beta=0.2)
    states = [spinor.RingState(cfg, lam, k) for k in (1, -1) for lam in half_odd_range(3.5)]
    return _below(np.abs(spinor.gram_matrix(states) - np.eye(len(states))).max(), 1e-10)


@_check("spinor", "finite-cylinder Gram matrix is identity")
def _finite_gram():
    cfg = CylinderConfig(mu=2.0, beta=0.1, aspect=0.8)
    modes = [spinor.FiniteMode(cfg, n, lam, s) for s in (1, -1) for n in (1, 2, 3) for lam in half_odd_range(2.5)]
    return _below(np.abs(spinor.gram_matrix(modes) - np.eye(len(modes))).max(), 1e-10)


@_check("spinor", "Dirac residual, random ring states")
def _ring_residual():
    rng = _rng()
    worst = 0.0
    for _ in range(100):
        cfg = RingConfig(mu=rng.uniform(0, 20), beta=rng.uniform(-0.45, 0.45))
        st = spinor.RingState(cfg, HalfInteger(2 * int(rng.integers(-15, 15)) + 1), int(rng.choice([1, -1])))
        worst = max(worst, spinor.dirac_system_residual(st))
    return _below(worst, 1e-12)


@_check("spinor", "Dirac residual, random finite modes")
def _finite_residual():
    rng = _rng()
    worst = 0.0
    for _ in range(100):
        cfg = CylinderConfig(mu=rng.uniform(0, 20), beta=rng.uniform(-0.45, 0.45), aspect=rng.uniform(0.1, 5))
        m = spinor.FiniteMode(cfg, int(rng.integers(1, 8)), HalfInteger(2 * int(rng.integers(-15, 15)) + 1),
                              int(rng.choice([1, -1])))
        worst = max(worst, spinor.dirac_system_residual(m))
    return _below(worst, 1e-12)


@_check("spinor", "Dirac residual, random infinite modes")
def _infinite_residual():
    rng = _rng()
    worst = 0.0
    for _ in range(100):
        cfg = CylinderConfig(mu=rng.uniform(0, 20), beta=rng.uniform(-0.45, 0.45))
        m = spinor.InfiniteMode(cfg, rng.uniform(-10, 10), HalfInteger(2 * int(rng.integers(-15, 15)) + 1),
                                int(rng.choice([1, -1])))
        worst = max(worst, spinor.dirac_system_residual(m))
    return _below(worst, 1e-12)


@_check("spinor", "K eigenvalues +-1 on ring states")
def _k_ring():
    cfg = RingConfig(mu=0.9, beta=0.03)
    errs = [abs(spinor.apply_K(spinor.RingState(cfg, lam, k)) - k) for k in (1, -1) for lam in half_odd_range(2.5)]
    return _below(max(errs), 1e-12)


@_check("spinor", "K eigenvalues +-lambda at k = 0")
def _k_cylinder():
    cfg = CylinderConfig(mu=0.9, beta=0.03)
    errs = [
        abs(spinor.apply_K(spinor.InfiniteMode(cfg, 0.0, lam, s)) - s * float(lam))
        for s in (1, -1)
        for lam in half_odd_range(2.5)
    ]
    return _below(max(errs), 1e-12)


@_check("spinor", "analytic L3 agrees with finite differences")
def _k_fd():
    cfg = CylinderConfig(mu=1.1, beta=0.2, aspect=1.3)
    modes = [spinor.FiniteMode(cfg, 2, HalfInteger(3), 1), spinor.InfiniteMode(CylinderConfig(mu=1.1), 0.7, HalfInteger(-5), -1)]
    return _below(max(abs(spinor.apply_K(m) - spinor.apply_K(m, l3="fd")) for m in modes), 1e-6)


@_check("spinor", "infinite modes: box overlap is a sinc")
def _box():
    cfg = CylinderConfig(mu=1.0, beta=0.1)
    half = 20.0
    worst = 0.0
    for k, k2 in ((0.5, 0.5), (0.5, 0.6), (1.0, 1.3)):
        u, u2 = spinor.InfiniteMode(cfg, k, HalfInteger(1)), spinor.InfiniteMode(cfg, k2, HalfInteger(1))
        got = spinor.scalar_product(u, u2, z_range=(-half, half))
        spin = 2 * math.pi * np.vdot(u.coefficients(), u2.coefficients())
        q = k2 - k
        box = 2 * half / (2 * math.pi) * (np.sinc(q * half / math.pi))
        worst = max(worst, abs(got - spin * box))
    return _below(worst, 1e-10)


# ---------------------------------------------------------------- currents


@_check("currents", "ring cross term psi+ gamma^phi psi- vanishes")
def _ring_cross():
    cfg = RingConfig(mu=1.7, beta=0.05)
    phi = _rng().uniform(0, 2 * math.pi, 32)
    worst = max(
        np.abs(spinor.current_bilinear(spinor.RingState(cfg, lam, 1), spinor.RingState(cfg, lam, -1), "phi", 0.0, phi)).max()
        for lam in half_odd_range(3.5)
    )
    return _below(worst, 1e-14)


@_check("currents", "ring bilinear current equals chi, both kappa")
def _ring_bilinear():
    cfg = RingConfig(mu=1.7, beta=0.05)
    phi = np.linspace(0, 2 * math.pi, 9)
    worst = 0.0
    for lam in half_odd_range(5.5):
        for k in (1, -1):
            st = spinor.RingState(cfg, lam, k)
            got = 2 * math.pi * spinor.current_bilinear(st, st, "phi", 0.0, phi)
            worst = max(worst, np.abs(got - ring.partial_current_ring(cfg.mu, cfg.beta, lam)).max())
    return _below(worst, 1e-13)


@_check("currents", "finite cylinder axial bilinears vanish")
def _finite_axial():
    cfg = CylinderConfig(mu=1.2, beta=0.1, aspect=0.9)
    zeta = np.linspace(0, 1, 17)
    worst = 0.0
    for lam in half_odd_range(2.5):
        for n in (1, 2, 3):
            p, m = spinor.FiniteMode(cfg, n, lam, 1), spinor.FiniteMode(cfg, n, lam, -1)
            for a, b in ((p, p), (m, m), (p, m), (m, p)):
                worst = max(worst, np.abs(spinor.current_bilinear(a, b, "z", 0.3, 0.7, zeta)).max())
    return _below(worst, 1e-14)


@_check("currents", "finite cylinder z-integrated current equals chi")
def _finite_circular():
    cfg = CylinderConfig(mu=1.2, beta=0.1, aspect=0.9)
    x, w = np.polynomial.legendre.leggauss(64)
    zeta, wz = 0.5 * (x + 1), 0.5 * w * cfg.length
    worst = 0.0
    for lam in half_odd_range(2.5):
        for n in (1, 2):
            for s in (1, -1):
                m = spinor.FiniteMode(cfg, n, lam, s)
                got = 2 * math.pi * np.sum(wz * spinor.current_bilinear(m, m, "phi", 0.0, 0.4, zeta).real)
                worst = max(worst, abs(got - cylinder.chi_finite(cfg, n, lam)))
    return _below(worst, 1e-12)


@_check("currents", "ring current = dE/dbeta (100 samples, rel.)")
def _ring_derivative():
    rng = _rng()
    worst = 0.0
    for _ in range(100):
        mu, b, lam = rng.uniform(0, 50), rng.uniform(-0.45, 0.45), (2 * int(rng.integers(-20, 20)) + 1) / 2
        exact = ring.partial_current_ring(mu, b, lam)
        fd = _fd_beta(lambda x: ring.ring_energy(mu, x, lam), b)
        worst = max(worst, abs(fd - exact) / abs(exact))
    return _below(worst, 1e-8)


@_check("currents", "cylinder current = dE/dbeta (100 samples, rel.)")
def _cyl_derivative():
    rng = _rng()
    worst = 0.0
    for _ in range(100):
        cfg = CylinderConfig(mu=rng.uniform(0, 50), beta=rng.uniform(-0.45, 0.45), aspect=rng.uniform(0.05, 5))
        n, lam = int(rng.integers(1, 11)), (2 * int(rng.integers(-20, 20)) + 1) / 2
        exact = cylinder.chi_finite(cfg, n, lam)
        fd = _fd_beta(lambda x: cylinder.energy_finite(cfg, n, lam, beta=x), cfg.beta)
        worst = max(worst, abs(fd - exact) / abs(exact))
    return _below(worst, 1e-8)


@_check("currents", "saturation |chi(mu, 5 mu)| = 0.98058")
def _saturation():
    return _below(max(abs(abs(ring.chi(mu, s * 5 * mu)) - 0.98058) for mu in (0.5, 1, 10, 3495) for s in (1, -1)), 5e-6)


@_check("currents", "|chi - nu/mu| on |nu| < mu/2 below 1/2 - 1/sqrt5")
def _linear_regime():
    # the deviation grows monotonically towards the interval ends, where it is 0.0528
    worst = 0.0
    for mu in (1.0, 10.0, 100.0):
        nu = np.linspace(-mu / 2, mu / 2, 10_002)[1:-1]
        worst = max(worst, float(np.max(np.abs(ring.chi(mu, nu) - nu / mu))))
    return _below(worst, 0.5 - 1 / math.sqrt(5))


@_check("currents", "gauge shift (beta+1, lambda-1) invariance")
def _gauge():
    rng = _rng()
    worst = 0.0
    for _ in range(50):
        mu, b, lam = rng.uniform(0, 10), rng.uniform(-0.45, 0.45), HalfInteger(2 * int(rng.integers(-9, 9)) + 1)
        s1 = spinor.RingState(RingConfig(mu, b), lam, 1)
        s2 = spinor.RingState(RingConfig(mu, b + 1), lam.shift(-1), 1)
        worst = max(worst, abs(s1.energy - s2.energy),
                    abs(spinor.current_bilinear(s1, s1, "phi", 0, 0.3) - spinor.current_bilinear(s2, s2, "phi", 0, 0.3)))
    return _below(worst, 1e-13)


@_check("currents", "packet saturation 1 - 2 pi R I^c at lambda=1e4")
def _packet_saturation():
    spec = wavepacket.gaussian_packet(0.0, 1.0)
    return _below(1 - wavepacket.circular_current_packet(CylinderConfig(mu=1.0), 10000.5, spec), 1e-6)


@_check("currents", "packet current = d<E>/dbeta")
def _packet_derivative():
    cfg = CylinderConfig(mu=1.0, beta=0.01)
    spec = wavepacket.gaussian_packet(1.0, 0.3, plus_weight=0.7)
    exact = wavepacket.circular_current_packet(cfg, 1.5, spec)
    fd = _fd_beta(np.vectorize(lambda b: wavepacket.packet_energy(cfg, 1.5, spec, beta=b)), cfg.beta)
    return _below(abs(fd - exact), 1e-8)


@_check("currents", "longitudinal current is real")
def _hermitian():
    cfg = CylinderConfig(mu=0.8, beta=0.05)
    spec = wavepacket.gaussian_packet(1.0, 0.3, nodes=513, plus_weight=0.6)
    spec = wavepacket.PacketSpec(spec.k_grid, spec.a_plus, spec.a_minus * np.exp(1j * spec.k_grid))
    worst = max(abs(wavepacket.longitudinal_current_complex(cfg, 1.5, spec, t, z).imag) for t, z in ((0, 0), (2, 1), (5, -3)))
    return _below(worst, 1e-10)


@_check("currents", "symmetric packet at t=0 carries no axial current")
def _symmetric():
    spec = wavepacket.gaussian_packet(1.5, 0.3, nodes=513, symmetric=True)
    cfg = CylinderConfig(mu=1.0)
    return _below(max(abs(wavepacket.longitudinal_current(cfg, 0.5, spec, 0.0, z)) for z in (0.0, 1.0, 4.0)), 1e-10)


# ---------------------------------------------------------------- sums


@_check("sums", "max of j(mu, 1/2) is 0.7698 at mu = 1/sqrt(2)")
def _j_max():
    mus = np.linspace(0.5, 1.0, 50_001)
    vals = ring.j_ring(mus, 0.5)
    i = int(np.argmax(vals))
    return _below(max(abs(vals[i] - 0.7698) / 1e-4, abs(mus[i] - 2**-0.5) / 0.01), 1.0)


@_check("sums", "ring pairing remainder scales as beta^3")
def _cubic_ring():
    r = [abs(ring.chi_pair(1.0, 1.5, b) - 2 * b * ring.j_ring(1.0, 1.5)) for b in (1e-4, 1e-5)]
    return _below(abs(math.log10(r[0] / r[1]) - 3), 0.1)


@_check("sums", "cylinder pairing remainder scales as beta^3")
def _cubic_cyl():
    m_eff = math.hypot(1.0, 0.5 * 2)
    r = [abs(ring.chi_pair(m_eff, 2.5, b) - 2 * b * cylinder.j_finite(1.0, 0.5, 2, 2.5)) for b in (1e-4, 1e-5)]
    return _below(abs(math.log10(r[0] / r[1]) - 3), 0.1)


@_check("sums", "ring closed form within 1e-5 (mu = 200, 1000, 3495)")
def _ring_approx():
    worst = 0.0
    for mu in (200.0, 1000.0, 3495.0):
        fill = ring.FermiFillingRing.from_ratio(mu, 0.5)
        exact = ring.persistent_ring_exact(mu, fill).c
        worst = max(worst, abs(exact - ring.persistent_ring_approx(mu, fill.lambda_f)))
    return _below(worst, 1e-5)


@_check("sums", "c(mu) spread for lambda_F = 5 mu, mu in [100, 1000]")
def _narrow():
    cs = [ring.persistent_ring_exact(mu, ring.FermiFillingRing.from_ratio(mu, 5.0)).c for mu in range(100, 1001, 10)]
    return _below(max(cs) - min(cs), 5e-5)


@_check("sums", "enumeration matches brute force (50 cases)")
def _enumeration():
    rng = _rng()
    bad = 0
    for _ in range(50):
        aspect, alpha = rng.uniform(0.1, 3.0), rng.uniform(0.0, 12.0)
        occ = cylinder.enumerate_occupied(CylinderConfig(mu=1.0, aspect=aspect), alpha)
        brute = {
            (n, HalfInteger(t))
            for n in range(1, 200)
            for t in range(1, 60, 2)
            if aspect**2 * n * n + (t / 2) ** 2 <= alpha**2
        }
        bad += set(occ.states()) != brute
        bad += occ.n_electrons != occ.n_f + 2 * occ.shell_sum
    return _below(bad, 0)


@_check("sums", "shell sum vs its integral (nu=0.1, n_F=200), rel.")
def _shell():
    return _below(abs(cylinder.lambda_shell_sum(0.1, 200).relative_gap), 5e-3)


@_check("sums", "short-cylinder formula within 5% of exact sum")
def _short():
    cfg = CylinderConfig(mu=500.0, beta=1e-6, aspect=40.0)
    exact = cylinder.persistent_finite_exact(cfg, 60.0).c
    approx = cylinder.persistent_short_cylinder(500.0, 40.0, 60.0)
    return _below(abs(approx - exact) / exact, 0.05)


@_check("sums", "mu for InSb (0.0135 m_e, 100 nm) near 3495")
def _insb():
    return _below(abs(mu_from_physical(0.0135 * ELECTRON_MASS, 100e-9) - 3495.0), 1.0)


def run(suite: str = "all") -> list[Check]:
    names = SUITES if suite == "all" else (suite,)
    if any(n not in _REGISTRY for n in names):
        raise ValueError(f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    results = []
    for sname in names:
        for name, fn in _REGISTRY[sname]:
            try:
                observed, limit = fn()
                passed = bool(observed <= limit)
            except Exception as exc:  # a crashing invariant is a failed invariant
                observed, limit, passed = math.nan, math.nan, False
                name = f"{name} [{type(exc).__name__}: {exc}]"
            results.append(Check(sname, name, observed, limit, passed))
    return results


def report_json(checks: list[Check]) -> str:
    return json.dumps(
        {"passed": all(c.passed for c in checks), "checks": [asdict(c) for c in checks]}, indent=1
    )
