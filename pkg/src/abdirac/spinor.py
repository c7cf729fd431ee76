"""Normalised Dirac eigenspinors on rings and cylinders.

Gamma matrices are in the standard (Dirac) representation with diagonal
gamma^0. All lengths are in units of R, so energies are E*R and momenta kR.
Every spinor has the form

    psi = profile(z) * exp(i m phi) * exp(-i E t),
    m = (lambda - 1/2, lambda + 1/2, lambda - 1/2, lambda + 1/2),

componentwise, which lets L_3 = -i d/dphi act analytically.

Ring spinors are the k = 0 members of the infinite-cylinder family,
normalised on the circle; they satisfy the reduced algebraic Dirac system
exactly, which the residual check below certifies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import ClassVar, Literal, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, UsageError
from .halfint import HalfInteger, HalfLike, half_odd
from .params import CylinderConfig, RingConfig

__all__ = [
    "GAMMA", "HalfInteger", "RingState", "InfiniteMode", "FiniteMode", "SpinorSample",
    "PolarizationMix", "MixedState", "eval_ring_spinor", "eval_finite_spinor",
    "eval_infinite_spinor", "scalar_product", "gram_matrix", "dirac_system_residual",
    "apply_K", "current_bilinear",
]

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)
PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
)


def _dirac_gammas() -> np.ndarray:
    g0 = np.block([[_I2, _Z2], [_Z2, -_I2]])
    gs = [np.block([[_Z2, s], [-s, _Z2]]) for s in PAULI]
    return np.array([g0, *gs])


GAMMA = _dirac_gammas()
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
# S_3 = diag(sigma_3, sigma_3) / 2
S3 = 0.5 * np.array([1.0, -1.0, 1.0, -1.0])
GAMMA0_DIAG = np.array([1.0, 1.0, -1.0, -1.0])


def _angular_orders(lam: HalfInteger) -> np.ndarray:
    l = float(lam)
    return np.array([l - 0.5, l + 0.5, l - 0.5, l + 0.5])


def _sign(sigma: HalfLike) -> int:
    """Sign of sigma; accepts +-1/2 or the bare signs +-1."""
    if isinstance(sigma, (int, np.integer)) and sigma in (1, -1):
        return int(sigma)
    s = HalfInteger.of(sigma)
    if s.twice not in (1, -1):
        raise DomainError(f"polarization sigma must be +-1/2, got {s}")
    return s.twice


@dataclass(frozen=True)
class _Mode:
    geometry: ClassVar[str]

    @property
    def nu(self) -> float:
        return self.config.beta + float(self.lam)

    def orders(self) -> np.ndarray:
        return _angular_orders(self.lam)

    def evaluate(self, t, phi, z=0.0) -> np.ndarray:
        """Spinor components, shape (4, *broadcast(t, phi, z))."""
        t, phi, z = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (t, phi, z)))
        prof = self.profile(z)
        phase = np.exp(1j * self.orders().reshape((4,) + (1,) * phi.ndim) * phi)
        return prof * phase * np.exp(-1j * self.energy * t)


@dataclass(frozen=True)
class RingState(_Mode):
    """Eigenstate U^kappa_lambda of a ring; kappa = +-1 is the eigenvalue of K = 2 gamma^0 S_3."""

    config: RingConfig
    lam: HalfInteger
    kappa: int = 1
    geometry: ClassVar[str] = "ring"

    def __post_init__(self):
        object.__setattr__(self, "lam", half_odd(self.lam))
        if self.kappa not in (1, -1):
            raise DomainError(f"kappa must be +-1, got {self.kappa}")

    @property
    def energy(self) -> float:
        return math.hypot(self.config.mu, self.nu)

    def coefficients(self) -> np.ndarray:
        """Normalised (f1, f2, g1, g2)."""
        E, M, nu = self.energy, self.config.mu, self.nu
        if E == 0:
            raise DomainError("massless state with beta + lambda = 0 has no spinor")
        eps = E + M
        norm = math.sqrt(eps / (2.0 * E)) / math.sqrt(2.0 * math.pi)
        if self.kappa == 1:
            v = [1.0, 0.0, 0.0, 1j * nu / eps]
        else:
            v = [0.0, 1.0, -1j * nu / eps, 0.0]
        return norm * np.array(v, dtype=complex)

    def profile(self, z) -> np.ndarray:
        return self.coefficients().reshape((4,) + (1,) * np.ndim(z)) * np.ones_like(z)

    def flipped(self) -> RingState:
        return replace(self, kappa=-self.kappa)


@dataclass(frozen=True)
class InfiniteMode(_Mode):
    """Momentum eigenstate U^sigma_{k,lambda} on an infinite cylinder, delta-normalised in k."""

    config: CylinderConfig
    k: float
    lam: HalfInteger
    sigma: HalfInteger = HalfInteger(1)
    geometry: ClassVar[str] = "infinite"

    def __post_init__(self):
        object.__setattr__(self, "lam", half_odd(self.lam))
        object.__setattr__(self, "sigma", HalfInteger(_sign(self.sigma)))
        object.__setattr__(self, "k", float(self.k))

    @property
    def energy(self) -> float:
        return math.sqrt(self.config.mu**2 + self.k**2 + self.nu**2)

    def coefficients(self) -> np.ndarray:
        """u^sigma_{k,lambda} amplitudes without the exp(ikz)/sqrt(2 pi) factor."""
        E, M, nu, k = self.energy, self.config.mu, self.nu, self.k
        if E == 0:
            raise DomainError("zero-energy mode has no spinor")
        eps = E + M
        norm = math.sqrt(eps / (2.0 * E)) / math.sqrt(2.0 * math.pi)
        if self.sigma.twice == 1:
            v = [1.0, 0.0, k / eps, 1j * nu / eps]
        else:
            v = [0.0, 1.0, -1j * nu / eps, -k / eps]
        return norm * np.array(v, dtype=complex)

    def profile(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        c = self.coefficients().reshape((4,) + (1,) * z.ndim)
        return c * np.exp(1j * self.k * z) / math.sqrt(2.0 * math.pi)

    def flipped(self) -> InfiniteMode:
        return replace(self, sigma=-self.sigma)


@dataclass(frozen=True)
class FiniteMode(_Mode):
    """Standing-wave eigenstate U^sigma_{n,lambda} on a finite cylinder.

    ``evaluate`` takes zeta = z / L in [0, 1] as its third coordinate.
    """

    config: CylinderConfig
    n: int
    lam: HalfInteger
    sigma: HalfInteger = HalfInteger(1)
    geometry: ClassVar[str] = "finite"

    def __post_init__(self):
        if self.config.aspect is None:
            raise DomainError("a finite mode needs an aspect ratio")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "lam", half_odd(self.lam))
        object.__setattr__(self, "sigma", HalfInteger(_sign(self.sigma)))

    @property
    def k(self) -> float:
        return self.config.aspect * self.n

    @property
    def energy(self) -> float:
        return math.sqrt(self.config.mu**2 + self.k**2 + self.nu**2)

    def trig_coefficients(self) -> np.ndarray:
        """Normalised amplitudes as a (4, 2) array of [sin(k z), cos(k z)] coefficients."""
        E, M, nu, k = self.energy, self.config.mu, self.nu, self.k
        eps = E + M
        norm = math.sqrt(eps / (2.0 * E)) / math.sqrt(math.pi * self.config.length)
        c = np.zeros((4, 2), dtype=complex)
        if self.sigma.twice == 1:
            c[0, 0] = 1.0
            c[2, 1] = -1j * k / eps
            c[3, 0] = 1j * nu / eps
        else:
            c[1, 0] = 1.0
            c[2, 0] = -1j * nu / eps
            c[3, 1] = 1j * k / eps
        return norm * c

    def profile(self, zeta) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=float)
        arg = self.k * self.config.length * zeta
        c = self.trig_coefficients()
        shape = (4,) + (1,) * zeta.ndim
        return c[:, 0].reshape(shape) * np.sin(arg) + c[:, 1].reshape(shape) * np.cos(arg)

    def flipped(self) -> FiniteMode:
        return replace(self, sigma=-self.sigma)


Mode = Union[RingState, InfiniteMode, FiniteMode]


@dataclass(frozen=True)
class PolarizationMix:
    c_plus: complex
    c_minus: complex

    def __post_init__(self):
        total = abs(self.c_plus) ** 2 + abs(self.c_minus) ** 2
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"|c+|^2 + |c-|^2 = {total}, expected 1")

    @property
    def degree(self) -> float:
        """|c+|^2 - |c-|^2."""
        return abs(self.c_plus) ** 2 - abs(self.c_minus) ** 2


@dataclass(frozen=True)
class MixedState:
    """c+ U^+ + c- U^- built from one mode of either polarization."""

    mode: Mode
    weights: PolarizationMix

    @property
    def geometry(self) -> str:
        return self.mode.geometry

    @property
    def config(self):
        return self.mode.config

    @property
    def lam(self) -> HalfInteger:
        return self.mode.lam

    @property
    def plus(self) -> Mode:
        return self.mode if _polarity(self.mode) == 1 else self.mode.flipped()

    @property
    def minus(self) -> Mode:
        return self.plus.flipped()

    def orders(self) -> np.ndarray:
        return _angular_orders(self.lam)

    def evaluate(self, t, phi, z=0.0) -> np.ndarray:
        return self.weights.c_plus * self.plus.evaluate(t, phi, z) + self.weights.c_minus * self.minus.evaluate(
            t, phi, z
        )


Field = Union[Mode, MixedState]


def _polarity(mode: Mode) -> int:
    return mode.kappa if isinstance(mode, RingState) else mode.sigma.twice


@dataclass(frozen=True)
class SpinorSample:
    components: np.ndarray
    at: tuple

    def __post_init__(self):
        if not np.all(np.isfinite(self.components)):
            raise DomainError("non-finite spinor components")


def eval_ring_spinor(state: RingState, t, phi) -> SpinorSample:
    return SpinorSample(state.evaluate(t, phi), (t, phi))


def eval_finite_spinor(mode: FiniteMode, t, phi, zeta) -> SpinorSample:
    """Evaluate at zeta = z / L, which must lie in [0, 1]."""
    zeta_arr = np.asarray(zeta, dtype=float)
    if np.any((zeta_arr < 0) | (zeta_arr > 1)):
        raise DomainError(f"z/L must lie in [0, 1], got {zeta}")
    return SpinorSample(mode.evaluate(t, phi, zeta_arr), (t, phi, zeta))


def eval_infinite_spinor(mode: InfiniteMode, t, phi, z) -> SpinorSample:
    return SpinorSample(mode.evaluate(t, phi, z), (t, phi, z))


# --------------------------------------------------------------------------
# quadrature


def _gauss_panels(a: float, b: float, panels: int, per_panel: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(per_panel)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _max_k(f: Field) -> float:
    mode = f.mode if isinstance(f, MixedState) else f
    return abs(getattr(mode, "k", 0.0))


def _check_same_geometry(fields: Sequence[Field]):
    geoms = {f.geometry for f in fields}
    if len(geoms) != 1:
        raise UsageError(f"fields live on different geometries: {sorted(geoms)}")
    configs = {f.config for f in fields}
    if len(configs) != 1:
        raise UsageError("fields have different configurations")


def _grid(fields: Sequence[Field], nodes: int, z_nodes: int, z_range):
    """Quadrature nodes (phi, z) and weights of the scalar product <psi, psi'>."""
    _check_same_geometry(fields)
    geometry = fields[0].geometry
    phi = 2.0 * math.pi * np.arange(nodes) / nodes
    wphi = np.full(nodes, 2.0 * math.pi / nodes)
    if geometry == "ring":
        if z_range is not None:
            raise UsageError("a ring has no z direction")
        z, wz = np.zeros(1), np.ones(1)
    elif geometry == "finite":
        if z_range is not None:
            raise UsageError("finite cylinders integrate over their own length")
        panels = max(f.mode.n if isinstance(f, MixedState) else f.n for f in fields)
        z, wz = _gauss_panels(0.0, 1.0, panels, z_nodes)
        wz = wz * fields[0].config.length
    else:
        if z_range is None:
            raise UsageError("infinite-cylinder products need a finite z_range box")
        a, b = z_range
        kmax = max(_max_k(f) for f in fields)
        panels = max(1, int(math.ceil(kmax * (b - a) / math.pi)))
        z, wz = _gauss_panels(a, b, panels, z_nodes)
    return phi[:, None], z[None, :], wphi[:, None] * wz[None, :]


def scalar_product(
    psi: Field,
    psi2: Field,
    nodes: int = 256,
    z_nodes: int = 64,
    z_range: Optional[tuple[float, float]] = None,
    t: float = 0.0,
) -> complex:
    """<psi, psi2> = R int dphi [int dz] psi^dagger psi2 by quadrature.

    phi uses the uniform trapezoid rule (exact for the trigonometric
    integrands here); z uses Gauss-Legendre panels, one per half-wavelength.
    Infinite cylinders need ``z_range`` and give the finite-box overlap.
    """
    phi, z, w = _grid([psi, psi2], nodes, z_nodes, z_range)
    v1 = psi.evaluate(t, phi, z)
    v2 = psi2.evaluate(t, phi, z)
    return complex(np.sum(np.conj(v1) * v2 * w))


def gram_matrix(fields: Sequence[Field], nodes: int = 256, z_nodes: int = 64, t: float = 0.0) -> np.ndarray:
    """Matrix of scalar products over a common quadrature grid."""
    phi, z, w = _grid(list(fields), nodes, z_nodes, None)
    vals = np.array([f.evaluate(t, phi, z) for f in fields])  # (F, 4, P, Z)
    flat = (vals * np.sqrt(w)).reshape(len(fields), -1)
    return np.conj(flat) @ flat.T


# --------------------------------------------------------------------------
# operators


def _dirac_matrix(energy: float, mass: float, nu: float) -> np.ndarray:
    """z-independent part of the reduced system acting on (f1, f2, g1, g2)."""
    a = 1j * nu
    return np.array(
        [
            [energy - mass, 0, 0, a],
            [0, energy - mass, -a, 0],
            [0, -a, -energy - mass, 0],
            [a, 0, 0, -energy - mass],
        ],
        dtype=complex,
    )


# coefficient of d/dz in the reduced system
_DZ_PATTERN = np.array(
    [[0, 0, 1j, 0], [0, 0, 0, -1j], [-1j, 0, 0, 0], [0, 1j, 0, 0]], dtype=complex
)


def dirac_system_residual(mode: Mode, energy: Optional[float] = None) -> float:
    """Euclidean norm of the reduced Dirac system applied to the mode's amplitudes.

    ``energy`` overrides the dispersion-relation energy, which is how a
    non-solution is manufactured for testing.
    """
    E = mode.energy if energy is None else energy
    A = _dirac_matrix(E, mode.config.mu, mode.nu)
    if isinstance(mode, RingState):
        return float(np.linalg.norm(A @ mode.coefficients()))
    if isinstance(mode, InfiniteMode):
        op = A + _DZ_PATTERN * (1j * mode.k)
        return float(np.linalg.norm(op @ mode.coefficients()))
    if isinstance(mode, FiniteMode):
        k = mode.k
        # d/dz on (sin, cos) coefficients: a sin + b cos -> -k b sin + k a cos
        D = np.array([[0.0, -k], [k, 0.0]])
        op = np.kron(A, np.eye(2)) + np.kron(_DZ_PATTERN, D)
        return float(np.linalg.norm(op @ mode.trig_coefficients().ravel()))
    raise TypeError(f"no algebraic system for {type(mode).__name__}")


def _apply_K_values(f: Field, values, t, phi, z, l3: str, h: float):
    g0 = GAMMA0_DIAG.reshape((4,) + (1,) * (values.ndim - 1))
    s3 = S3.reshape(g0.shape)
    if f.geometry == "ring":
        return g0 * 2.0 * s3 * values
    if l3 == "analytic":
        l3v = f.orders().reshape(g0.shape) * values
    elif l3 == "fd":
        l3v = -1j * (f.evaluate(t, phi + h, z) - f.evaluate(t, phi - h, z)) / (2.0 * h)
    else:
        raise ValueError(f"unknown l3 mode {l3!r}")
    return g0 * (2.0 * s3 * l3v + 0.5 * values)


def apply_K(
    f: Field, l3: Literal["analytic", "fd"] = "analytic", nodes: int = 256, z_nodes: int = 64, h: float = 1e-5
) -> float:
    """Rayleigh quotient <psi, K psi> / <psi, psi> of the polarization operator.

    K = 2 gamma^0 S_3 on rings and gamma^0 (2 S_3 L_3 + 1/2) on cylinders.
    L_3 acts on the known phase orders, or by central differences in phi
    with ``l3="fd"``. Infinite-cylinder modes are sampled on the z = 0 slice,
    where their density is already z-independent.
    """
    if f.geometry == "infinite":
        phi = 2.0 * math.pi * np.arange(nodes)[:, None] / nodes
        z = np.zeros((1, 1))
        w = np.full((nodes, 1), 2.0 * math.pi / nodes)
    else:
        phi, z, w = _grid([f], nodes, z_nodes, None)
    v = f.evaluate(0.0, phi, z)
    kv = _apply_K_values(f, v, 0.0, phi, z, l3, h)
    num = np.sum(np.conj(v) * kv * w)
    den = np.sum(np.abs(v) ** 2 * w)
    return float((num / den).real)


def current_bilinear(
    psi: Field, psi2: Field, direction: Literal["phi", "z"], t, phi, z=0.0
) -> np.ndarray:
    """Pointwise psi-bar gamma^mu psi2 for mu = phi or the axial direction.

    gamma^phi = -gamma^1 sin(phi) + gamma^2 cos(phi) (R = 1). For finite
    cylinders ``z`` is zeta = z / L.
    """
    _check_same_geometry([psi, psi2])
    v1 = np.conj(psi.evaluate(t, phi, z))
    v2 = psi2.evaluate(t, phi, z)
    g0 = GAMMA[0]
    if direction == "z":
        out = np.einsum("a...,ab,b...->...", v1, g0 @ GAMMA[3], v2)
    elif direction == "phi":
        b1 = np.einsum("a...,ab,b...->...", v1, g0 @ GAMMA[1], v2)
        b2 = np.einsum("a...,ab,b...->...", v1, g0 @ GAMMA[2], v2)
        ph = np.broadcast_to(np.asarray(phi, dtype=float), b1.shape)
        out = -np.sin(ph) * b1 + np.cos(ph) * b2
    else:
        raise ValueError(f"direction must be 'phi' or 'z', got {direction!r}")
    return out[()] if out.ndim == 0 else out


def clifford_defect(gammas: Optional[np.ndarray] = None) -> float:
    """max |{gamma^mu, gamma^nu} - 2 eta^{mu nu}|."""
    g = GAMMA if gammas is None else gammas
    worst = 0.0
    for a in range(4):
        for b in range(4):
            anti = g[a] @ g[b] + g[b] @ g[a]
            worst = max(worst, float(np.max(np.abs(anti - 2.0 * METRIC[a, b] * np.eye(4)))))
    return worst
