"""Dirac fermions on ideal Aharonov-Bohm rings and cylinders."""

__version__ = "0.1.0"

from .cylinder import (
    OccupationSet,
    RegimeWarning,
    chi_finite,
    energy_finite,
    energy_infinite,
    enumerate_occupied,
    j_finite,
    lambda_shell_sum,
    persistent_finite_approx,
    persistent_finite_exact,
    persistent_short_cylinder,
)
from .errors import AccuracyError, DomainError, UsageError
from .halfint import HalfInteger, half_odd, half_odd_range
from .params import CylinderConfig, PhysicalInput, RingConfig, beta_from_field, mu_from_physical
from .ring import (
    FermiFillingRing,
    chi,
    chi_pair,
    j_ring,
    partial_current_ring,
    persistent_ring_approx,
    persistent_ring_exact,
    ring_energy,
)
from .spinor import FiniteMode, InfiniteMode, RingState
from .wavepacket import PacketSpec, gaussian_packet, packet_observables
