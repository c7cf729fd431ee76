"""Square-integrable packets of fixed lambda on an infinite cylinder.

A packet is sampled on a uniform grid of kR values with amplitude densities
a_plus(k), a_minus(k) for the two polarizations. All k integrals use
composite Simpson weights on that grid.
"""
from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.integrate import simpson

from .cylinder import energy_infinite
from .errors import AccuracyError, DomainError, UsageError
from .halfint import HalfLike, half_odd
from .params import CylinderConfig

NORM_TOLERANCE = 1e-8
CSV_COLUMNS = ("k", "re_a_plus", "im_a_plus", "re_a_minus", "im_a_minus")


def simpson_weights(x: np.ndarray) -> np.ndarray:
    """Weights w with sum(w * f) == scipy.integrate.simpson(f, x=x)."""
    eye = np.eye(len(x))
    return simpson(eye, x=x, axis=1)


@dataclass(frozen=True)
class PacketSpec:
    k_grid: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.k_grid, dtype=float)
        ap = np.asarray(self.a_plus, dtype=complex)
        am = np.asarray(self.a_minus, dtype=complex)
        if k.ndim != 1 or len(k) < 3:
            raise DomainError("k_grid must be 1-D with at least 3 nodes")
        if not np.all(np.diff(k) > 0):
            raise DomainError("k_grid must be strictly increasing")
        if ap.shape != k.shape or am.shape != k.shape:
            raise DomainError("amplitude arrays must match k_grid")
        for name, arr in (("k_grid", k), ("a_plus", ap), ("a_minus", am)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def weights(self) -> np.ndarray:
        return simpson_weights(self.k_grid)

    @property
    def density(self) -> np.ndarray:
        """|a_plus|^2 + |a_minus|^2 on the grid."""
        return np.abs(self.a_plus) ** 2 + np.abs(self.a_minus) ** 2

    def norm(self) -> float:
        return float(simpson(self.density, x=self.k_grid))

    def is_normalized(self, tol: float = NORM_TOLERANCE) -> bool:
        return abs(self.norm() - 1.0) <= tol


def gaussian_packet(
    k0: float,
    width: float,
    nodes: int = 1025,
    span: float = 6.0,
    plus_weight: float = 1.0,
    symmetric: bool = False,
) -> PacketSpec:
    """Normalised packet with a(k) proportional to exp(-(k - k0)^2 / (2 width^2)).

    ``plus_weight`` is the share of the norm carried by a_plus. With
    ``symmetric=True`` the amplitude is the even combination of bumps at
    +-k0 on a grid symmetric about k = 0.
    """
    if not width > 0:
        raise DomainError("packet width must be > 0")
    if not 0.0 <= plus_weight <= 1.0:
        raise DomainError("plus_weight must lie in [0, 1]")
    if symmetric:
        top = abs(k0) + span * width
        k = np.linspace(-top, top, nodes)
        g = np.exp(-((k - k0) ** 2) / (2 * width**2)) + np.exp(-((k + k0) ** 2) / (2 * width**2))
    else:
        k = np.linspace(k0 - span * width, k0 + span * width, nodes)
        g = np.exp(-((k - k0) ** 2) / (2 * width**2))
    spec = PacketSpec(k, math.sqrt(plus_weight) * g, math.sqrt(1.0 - plus_weight) * g)
    return normalize_packet(spec)


def normalize_packet(spec: PacketSpec) -> PacketSpec:
    """Rescale so that the Simpson norm of |a_plus|^2 + |a_minus|^2 is 1."""
    total = spec.norm()
    if not total > 0:
        raise DomainError("cannot normalise a zero packet")
    scale = 1.0 / math.sqrt(total)
    return PacketSpec(spec.k_grid, spec.a_plus * scale, spec.a_minus * scale)


def _require_normalized(spec: PacketSpec):
    if not spec.is_normalized():
        raise UsageError(f"packet norm is {spec.norm():.12g}; normalise it first")


def _infinite(config: CylinderConfig):
    if config.aspect is not None:
        raise UsageError("packets live on infinite cylinders (aspect must be None)")


def _energies(config: CylinderConfig, lam, spec: PacketSpec, beta: Optional[float]):
    b = config.beta if beta is None else beta
    return np.asarray(energy_infinite(config.mu, spec.k_grid, b, float(half_odd(lam)))), b


def packet_energy(config: CylinderConfig, lam: HalfLike, spec: PacketSpec, beta: Optional[float] = None) -> float:
    """<E> R = int dk E_{k,lambda} R (|a_plus|^2 + |a_minus|^2)."""
    _infinite(config)
    _require_normalized(spec)
    E, _ = _energies(config, lam, spec, beta)
    return float(simpson(E * spec.density, x=spec.k_grid))


def circular_current_packet(
    config: CylinderConfig, lam: HalfLike, spec: PacketSpec, beta: Optional[float] = None
) -> float:
    """2 pi R I^c = (lambda + beta) int dk (|a_plus|^2 + |a_minus|^2) / (E R).

    Time- and z-independent; polarization cross terms do not contribute.
    """
    _infinite(config)
    _require_normalized(spec)
    E, b = _energies(config, lam, spec, beta)
    nu = b + float(half_odd(lam))
    return float(nu * simpson(spec.density / E, x=spec.k_grid))


def polarization_degree(lam: HalfLike, spec: PacketSpec) -> float:
    """lambda * int dk (|a_plus|^2 - |a_minus|^2)."""
    _require_normalized(spec)
    diff = np.abs(spec.a_plus) ** 2 - np.abs(spec.a_minus) ** 2
    return float(float(half_odd(lam)) * simpson(diff, x=spec.k_grid))


def _phase_check(E: np.ndarray, k: np.ndarray, t: float, z: float):
    advance = np.abs(t * np.diff(E) - z * np.diff(k))
    worst = float(advance.max()) if advance.size else 0.0
    if worst > math.pi / 2:
        raise AccuracyError(
            f"phase advances by {worst:.3g} rad per k-cell at t={t}, z={z}; refine the k grid"
        )


def longitudinal_current_complex(
    config: CylinderConfig, lam: HalfLike, spec: PacketSpec, t: float, z: float, beta: Optional[float] = None
) -> complex:
    """Double k-integral for I^3 = R int dphi psi-bar gamma^3 psi, before taking the real part.

    The kernel between k and k' is

        exp(i t (E - E') - i z (k - k')) / sqrt(E E' (E + M)(E' + M)) / (4 pi)
        * { [k E' + k' E + M (k + k')] (a+* a+' + a-* a-')
            - i nu (E - E') (a+* a-' + a-* a+') },

    with E = E_{k,lambda}. The mass term multiplies k + k', so a single
    momentum carries the velocity k / E.
    """
    _infinite(config)
    _require_normalized(spec)
    E, b = _energies(config, lam, spec, beta)
    k = spec.k_grid
    M = config.mu
    nu = b + float(half_odd(lam))
    _phase_check(E, k, t, z)
    w = spec.weights
    # fold weights, phases and the 1/sqrt(E (E+M)) factors into the amplitudes
    fac = w * np.exp(-1j * (E * t - k * z)) / np.sqrt(E * (E + M))
    ap = spec.a_plus * fac
    am = spec.a_minus * fac
    same = np.outer(np.conj(ap), ap) + np.outer(np.conj(am), am)
    cross = np.outer(np.conj(ap), am) + np.outer(np.conj(am), ap)
    coef = np.outer(k, E) + np.outer(E, k) + M * (k[:, None] + k[None, :])
    dE = E[:, None] - E[None, :]
    total = np.sum(coef * same) - 1j * nu * np.sum(dE * cross)
    return complex(total / (4.0 * math.pi))


def longitudinal_current(
    config: CylinderConfig, lam: HalfLike, spec: PacketSpec, t: float, z: float, beta: Optional[float] = None
) -> float:
    """Longitudinal current I^3 (units of 1/R) at time t and height z; real by Hermiticity."""
    return longitudinal_current_complex(config, lam, spec, t, z, beta).real


@dataclass(frozen=True)
class PacketObservables:
    energy_scaled: float
    circular_current_scaled: float
    polarization: float

    def to_dict(self) -> dict:
        return asdict(self)


def packet_observables(
    config: CylinderConfig, lam: HalfLike, spec: PacketSpec, beta: Optional[float] = None
) -> PacketObservables:
    return PacketObservables(
        packet_energy(config, lam, spec, beta),
        circular_current_packet(config, lam, spec, beta),
        polarization_degree(lam, spec),
    )


def read_packet_csv(path: str | Path) -> PacketSpec:
    """Read a packet with header ``k,re_a_plus,im_a_plus,re_a_minus,im_a_minus``."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(row for row in fh if not row.lstrip().startswith("#"))
        missing = set(CSV_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise UsageError(f"{path}: missing packet columns {sorted(missing)}")
        rows = [[float(r[c]) for c in CSV_COLUMNS] for r in reader]
    if not rows:
        raise UsageError(f"{path}: no packet rows")
    data = np.array(rows)
    return PacketSpec(data[:, 0], data[:, 1] + 1j * data[:, 2], data[:, 3] + 1j * data[:, 4])


def write_packet_csv(spec: PacketSpec, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for k, ap, am in zip(spec.k_grid, spec.a_plus, spec.a_minus):
            writer.writerow([f"{v:.17g}" for v in (k, ap.real, ap.imag, am.real, am.imag)])
