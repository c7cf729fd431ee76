"""Scalar formulas for an ideal Aharonov-Bohm ring.

Energies are returned as E*R and currents as 2*pi*R*I, so every function is
dimensionless. The flux enters only through nu = beta + lambda.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .errors import DomainError
from .halfint import HalfInteger, HalfLike, half_odd, nearest_half_odd


def _check_not_both_zero(a, b, what: str):
    if np.any((np.asarray(a) == 0) & (np.asarray(b) == 0)):
        raise DomainError(f"{what} is undefined when both arguments vanish")


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _lam(lam):
    return float(lam) if isinstance(lam, HalfInteger) else np.asarray(lam, dtype=float)


def ring_energy(mu, beta, lam):
    """E*R = sqrt(mu^2 + (beta + lambda)^2)."""
    return _scalar(np.hypot(mu, np.add(beta, _lam(lam))))


def chi(mu, nu):
    """Saturation function nu / sqrt(mu^2 + nu^2); equals sign(nu) when mu = 0."""
    _check_not_both_zero(mu, nu, "chi")
    return _scalar(np.divide(nu, np.hypot(mu, nu)))


def partial_current_ring(mu, beta, lam):
    """Partial current of the state lambda, as 2*pi*R*I."""
    return chi(mu, np.add(beta, _lam(lam)))


def nonrel_energy_and_current(mu, beta, lam):
    """Non-relativistic pair (E~ R, 2 pi R I~) = (nu^2 / 2 mu, nu / mu)."""
    if np.any(np.asarray(mu) <= 0):
        raise DomainError("the non-relativistic limit needs mu > 0")
    nu = np.add(beta, _lam(lam))
    return _scalar(nu**2 / (2.0 * np.asarray(mu))), _scalar(nu / np.asarray(mu))


def j_ring(mu, lam):
    """Pair-current slope mu^2 / (mu^2 + lambda^2)^(3/2)."""
    lam = _lam(lam)
    _check_not_both_zero(mu, lam, "j")
    mu = np.asarray(mu, dtype=float)
    return _scalar(mu**2 / np.hypot(mu, lam) ** 3)


def chi_pair(mu, lam, beta):
    """chi(mu, lambda + beta) + chi(mu, -lambda + beta), free of cancellation.

    For |beta| < lambda the two terms nearly cancel; the sum is rewritten as
    4 mu^2 lambda beta / [((lambda+beta) B + (lambda-beta) A) A B] with
    A, B the two square roots, which has no subtraction.
    """
    lam = _lam(lam)
    mu = np.asarray(mu, dtype=float)
    a = lam + beta
    b = beta - lam
    A = np.hypot(mu, a)
    B = np.hypot(mu, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        stable = 4.0 * mu**2 * lam * beta / ((a * B - b * A) * A * B)
        naive = a / A + b / B
    out = np.where(np.abs(beta) < np.abs(lam), stable, naive)
    return _scalar(out)


@dataclass(frozen=True)
class RingSpectrumRow:
    lam: HalfInteger
    energy_scaled: float
    current_scaled: float


def ring_spectrum(mu: float, beta: float, lambda_max: HalfLike) -> list[RingSpectrumRow]:
    """Rows for every lambda with |lambda| <= lambda_max, ascending."""
    from .halfint import half_odd_range

    return [
        RingSpectrumRow(lam, ring_energy(mu, beta, lam), partial_current_ring(mu, beta, lam))
        for lam in half_odd_range(lambda_max)
    ]


@dataclass(frozen=True)
class FermiFillingRing:
    """Ground-state filling of N_e electrons, both signs of lambda up to lambda_F."""

    n_electrons: int

    def __post_init__(self):
        n = self.n_electrons
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise TypeError("n_electrons must be an integer")
        if n < 2 or n % 2:
            raise DomainError(f"ring filling needs an even N_e >= 2, got {n}")
        object.__setattr__(self, "n_electrons", int(n))

    @property
    def lambda_f(self) -> HalfInteger:
        return HalfInteger(self.n_electrons - 1)

    @classmethod
    def from_lambda_f(cls, lambda_f: HalfLike) -> FermiFillingRing:
        return cls(half_odd(lambda_f).twice + 1)

    @classmethod
    def from_ratio(cls, mu: float, ratio: float) -> FermiFillingRing:
        """Filling with lambda_F the half-odd integer nearest ratio * mu (ties downward)."""
        return cls.from_lambda_f(nearest_half_odd(ratio * mu))

    def k(self, mu: float) -> float:
        """k = N_e / (2 mu)."""
        return self.n_electrons / (2.0 * mu)


class PersistentSum(NamedTuple):
    """Linearised coefficient c and the unlinearised sum of 2 pi R I over occupied states."""

    c: float
    full_sum: float
    beta: float

    @property
    def i_over_imax(self) -> float:
        """I / I_max with I_max = beta / (pi R); the beta -> 0 limit is c."""
        if self.beta == 0:
            return self.c
        return self.full_sum / (2.0 * self.beta)


def _positive_labels(lambda_f: HalfInteger) -> np.ndarray:
    return (2.0 * np.arange((lambda_f.twice + 1) // 2) + 1.0) / 2.0


def persistent_ring_exact(mu: float, filling: FermiFillingRing, beta: float = 0.0) -> PersistentSum:
    """c(mu) = sum_{lambda=1/2}^{lambda_F} j(mu, lambda), plus the full current sum.

    Both sums run in ascending lambda and are accumulated with ``math.fsum``.
    """
    if mu < 0:
        raise DomainError(f"mu must be >= 0, got {mu}")
    lams = _positive_labels(filling.lambda_f)
    if mu == 0:
        c = 0.0
    else:
        c = math.fsum(j_ring(mu, lams))
    full = math.fsum(np.atleast_1d(chi_pair(mu, lams, beta)))
    return PersistentSum(c, full, float(beta))


def closed_form_c(k):
    """k / sqrt(1 + k^2), the large-mu limit of c at fixed k = lambda_F / mu."""
    k = np.asarray(k, dtype=float)
    return _scalar(k / np.sqrt(1.0 + k * k))


def persistent_ring_approx(
    mu: float, lambda_f: HalfLike, k_from: Literal["electrons", "fermi"] = "electrons"
) -> float:
    """Closed form k / sqrt(1 + k^2) for c(mu).

    ``k_from="electrons"`` uses k = N_e / (2 mu) = (lambda_F + 1/2) / mu, the
    upper edge of the last occupied unit cell, which is what the half-integer
    sum converges to. ``k_from="fermi"`` uses k = lambda_F / mu and carries an
    O(1/mu) offset.
    """
    if not mu > 0:
        raise DomainError(f"mu must be > 0, got {mu}")
    lf = float(HalfInteger.of(lambda_f))
    if k_from == "electrons":
        k = (lf + 0.5) / mu if lf > 0 else 0.0
    elif k_from == "fermi":
        k = lf / mu
    else:
        raise ValueError(f"unknown k_from {k_from!r}")
    return closed_form_c(k)
