"""Spectra, circular currents and persistent currents on Aharonov-Bohm cylinders.

The finite cylinder has k_n R = aspect * n, so a mode (n, lambda) behaves
like a ring state with the effective mass sqrt(mu^2 + aspect^2 n^2). Several
functions below lean on that identity.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator, Literal, Optional

import numpy as np
from scipy import integrate

from .errors import DomainError
from .halfint import HalfInteger, HalfLike
from .params import CylinderConfig
from .ring import PersistentSum, _lam, _scalar, chi_pair

SHORT_CYLINDER_MIN_ASPECT = 10.0


class RegimeWarning(UserWarning):
    """A closed-form approximation is used outside its stated regime."""


def _require_finite(config: CylinderConfig) -> float:
    if config.aspect is None:
        raise DomainError("a finite cylinder needs an aspect ratio")
    return config.aspect


def _check_n(n):
    if np.any(np.asarray(n) < 1):
        raise DomainError(f"longitudinal quantum number must be >= 1, got {n}")


def energy_infinite(mu, k_scaled, beta, lam):
    """E*R = sqrt(mu^2 + (kR)^2 + (beta + lambda)^2)."""
    return _scalar(np.hypot(np.hypot(mu, k_scaled), np.add(beta, _lam(lam))))


def ground_lambda(beta: float) -> HalfInteger:
    """Angular label of the infinite-cylinder ground level (k = 0)."""
    return HalfInteger(-1) if beta > 0 else HalfInteger(1)


def energy_finite(config: CylinderConfig, n, lam, beta: Optional[float] = None):
    """E_{n,lambda} R on a finite cylinder."""
    aspect = _require_finite(config)
    _check_n(n)
    b = config.beta if beta is None else beta
    return energy_infinite(config.mu, aspect * np.asarray(n, dtype=float), b, lam)


def chi_finite(config: CylinderConfig, n, lam, beta: Optional[float] = None):
    """Circular current 2*pi*R*I^c of the mode (n, lambda)."""
    aspect = _require_finite(config)
    _check_n(n)
    b = config.beta if beta is None else beta
    nu = np.add(b, _lam(lam))
    return _scalar(nu / np.hypot(np.hypot(config.mu, aspect * np.asarray(n, dtype=float)), nu))


def j_finite(mu, aspect, n, lam):
    """(mu^2 + aspect^2 n^2) / (mu^2 + aspect^2 n^2 + lambda^2)^(3/2)."""
    lam = _lam(lam)
    transverse = np.hypot(mu, np.multiply(aspect, n))
    if np.any((transverse == 0) & (lam == 0)):
        raise DomainError("j is undefined when all arguments vanish")
    return _scalar(transverse**2 / np.hypot(transverse, lam) ** 3)


@dataclass(frozen=True)
class CylinderSpectrumRow:
    n: int
    lam: HalfInteger
    sigma: HalfInteger
    energy_scaled: float
    current_scaled: float


def cylinder_spectrum(config: CylinderConfig, n_max: int, lambda_max: HalfLike) -> list[CylinderSpectrumRow]:
    """One row per (n, lambda) with n <= n_max and |lambda| <= lambda_max; sigma = +1/2."""
    from .halfint import half_odd_range

    rows = []
    for n in range(1, n_max + 1):
        for lam in half_odd_range(lambda_max):
            rows.append(
                CylinderSpectrumRow(
                    n, lam, HalfInteger(1), energy_finite(config, n, lam), chi_finite(config, n, lam)
                )
            )
    return rows


@dataclass(frozen=True)
class OccupationSet:
    """States (n, +-lambda) inside the Fermi circle aspect^2 n^2 + lambda^2 <= alpha^2."""

    aspect: float
    alpha: float
    lambda_n: tuple[HalfInteger, ...]

    @property
    def n_f(self) -> int:
        return len(self.lambda_n)

    @property
    def lambda_f(self) -> Optional[HalfInteger]:
        return self.lambda_n[0] if self.lambda_n else None

    @property
    def n_electrons(self) -> int:
        return sum(lam.twice + 1 for lam in self.lambda_n)

    @property
    def shell_sum(self) -> Fraction:
        """Exact sum of lambda_n over the shells."""
        return sum((lam.value for lam in self.lambda_n), Fraction(0))

    @property
    def empty(self) -> bool:
        return not self.lambda_n

    def states(self) -> Iterator[tuple[int, HalfInteger]]:
        """Occupied (n, lambda > 0) pairs in ascending order."""
        for n, top in enumerate(self.lambda_n, 1):
            for twice in range(1, top.twice + 1, 2):
                yield n, HalfInteger(twice)


def enumerate_occupied(config: CylinderConfig, alpha: float) -> OccupationSet:
    """Exact enumeration of the Fermi sea; states on the boundary are included.

    The comparison aspect^2 n^2 + lambda^2 <= alpha^2 is done in rational
    arithmetic on the exact binary values of the inputs.
    """
    aspect = _require_finite(config)
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    a2 = Fraction(alpha) ** 2
    v2 = Fraction(aspect) ** 2
    quarter = Fraction(1, 4)
    lambda_n = []
    n = 1
    while v2 * n * n + quarter <= a2:
        rem4 = 4 * (a2 - v2 * n * n)  # (2 lambda)^2 bound
        m = isqrt(rem4.numerator // rem4.denominator)
        if m % 2 == 0:
            m -= 1
        lambda_n.append(HalfInteger(m))
        n += 1
    return OccupationSet(aspect=aspect, alpha=float(alpha), lambda_n=tuple(lambda_n))


def _occupation(config: CylinderConfig, occupation) -> OccupationSet:
    if isinstance(occupation, OccupationSet):
        return occupation
    return enumerate_occupied(config, occupation)


def persistent_finite_exact(config: CylinderConfig, occupation, beta: Optional[float] = None) -> PersistentSum:
    """c(mu, nu) summed over the occupied set, with the unlinearised current sum.

    ``occupation`` is an OccupationSet or a Fermi radius alpha.
    """
    aspect = _require_finite(config)
    occ = _occupation(config, occupation)
    b = config.beta if beta is None else float(beta)
    c_terms, full_terms = [], []
    for n, top in enumerate(occ.lambda_n, 1):
        lams = (np.arange(1, top.twice + 1, 2, dtype=float)) / 2.0
        c_terms.append(np.atleast_1d(j_finite(config.mu, aspect, n, lams)))
        m_eff = math.hypot(config.mu, aspect * n)
        full_terms.append(np.atleast_1d(chi_pair(m_eff, lams, b)))
    if not c_terms:
        return PersistentSum(0.0, 0.0, b)
    return PersistentSum(math.fsum(np.concatenate(c_terms)), math.fsum(np.concatenate(full_terms)), b)


def persistent_finite_approx(
    mu: float, occupation: OccupationSet, count_from: Literal["electrons", "fermi"] = "electrons"
) -> float:
    """Closed-form c(mu, nu) ~ (sum over shells) / sqrt(mu^2 + alpha^2).

    ``count_from="fermi"`` sums lambda_n per shell. The default sums
    lambda_n + 1/2, i.e. uses N_e / 2, which matches the half-integer sums to
    O(1/alpha^2) instead of O(1/alpha).
    """
    if occupation.empty:
        raise DomainError("the approximation needs at least one occupied state")
    if count_from == "electrons":
        total = occupation.n_electrons / 2.0
    elif count_from == "fermi":
        total = float(occupation.shell_sum)
    else:
        raise ValueError(f"unknown count_from {count_from!r}")
    return total / math.hypot(mu, occupation.alpha)


@dataclass(frozen=True)
class ShellSum:
    direct: float
    integral: float
    antiderivative: float
    inverted_form: float

    @property
    def relative_gap(self) -> float:
        return (self.direct - self.integral) / self.integral


def lambda_shell_sum(nu: float, n_f: int) -> ShellSum:
    """Sum over shells of sqrt(nu^2 (n_F^2 - n^2) + 1/4) against its integral.

    ``integral`` is adaptive quadrature, ``antiderivative`` the same integral
    in closed form, and ``inverted_form`` the value n_F (1 + pi n_F / nu) / 4, a
    closed form with nu inverted that overshoots by roughly 1 / nu^2.
    """
    if n_f < 1:
        raise DomainError(f"n_F must be >= 1, got {n_f}")
    if not nu > 0:
        raise DomainError(f"nu must be > 0, got {nu}")
    n = np.arange(1, n_f + 1, dtype=float)
    direct = math.fsum(np.sqrt(nu**2 * (n_f**2 - n**2) + 0.25))
    f = lambda x: math.sqrt(nu**2 * (n_f**2 - x * x) + 0.25)
    integral, _ = integrate.quad(f, 0.0, n_f, epsabs=0.0, epsrel=1e-12, limit=200)
    a2 = nu**2 * n_f**2 + 0.25
    top = nu * n_f
    anti = (top * 0.5 + a2 * math.asin(top / math.sqrt(a2))) / (2.0 * nu)
    inverted = 0.25 * n_f * (1.0 + math.pi * n_f / nu)
    return ShellSum(direct, integral, anti, inverted)


def short_cylinder_regime(aspect: float, alpha: float) -> bool:
    """True when aspect < alpha < 2 aspect, so only n = 1 is occupied."""
    return aspect < alpha < 2.0 * aspect


def persistent_short_cylinder(mu: float, aspect: float, alpha: float) -> float:
    """I_short / I_max = sqrt((alpha^2 - nu^2) / (alpha^2 + mu^2)) for very short cylinders."""
    if alpha < aspect:
        raise DomainError(f"no occupied state: alpha={alpha} < aspect={aspect}")
    if not alpha < 2.0 * aspect:
        warnings.warn(f"alpha={alpha} >= 2*aspect: more than one shell is occupied", RegimeWarning, stacklevel=2)
    if aspect < SHORT_CYLINDER_MIN_ASPECT:
        warnings.warn(f"aspect={aspect} is not >> 1", RegimeWarning, stacklevel=2)
    return math.sqrt((alpha**2 - aspect**2) / (alpha**2 + mu**2))


def nonrel_short_limit(mu: float, n_electrons: int) -> float:
    """Non-relativistic persistent current N_e / (2 mu) in units of I_max."""
    if not mu > 0:
        raise DomainError(f"mu must be > 0, got {mu}")
    return n_electrons / (2.0 * mu)
