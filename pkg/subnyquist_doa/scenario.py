# -*- coding: utf-8 -*-
"""
Scenario constants and delay-pattern algebra.

Angles are degrees at the interface and radians inside computations,
frequencies are Hz, powers are linear.
"""
import enum
import logging
import math
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .exceptions import (
    FirstNotZero,
    InvalidSource,
    NonContiguousCoarray,
    NotAscending,
    ScenarioError,
)

logger = logging.getLogger(__name__)

C_LIGHT = 2.99792458e8

# Restricted minimum-redundancy patterns, all with a contiguous coarray
MRA_PATTERNS = {
    2: (0, 1),
    3: (0, 1, 3),
    4: (0, 1, 4, 6),
    5: (0, 1, 4, 7, 9),
    6: (0, 1, 6, 9, 11, 13),
}


class SourceKind(str, enum.Enum):
    COMPLEX_SINUSOID = 'complex-sinusoid'
    QPSK = 'qpsk'
    BANDLIMITED_NOISE = 'bandlimited-noise'


@dataclass(frozen=True)
class ArrayConstants:
    f_nyq: float
    tau: Optional[float] = None
    d: Optional[float] = None
    c_light: float = C_LIGHT

    def __post_init__(self):
        if not self.f_nyq > 0:
            raise ScenarioError('f_nyq must be positive, got {}'.format(
                self.f_nyq))
        if not self.c_light > 0:
            raise ScenarioError('c_light must be positive')
        # Frozen: derived defaults go through object.__setattr__
        if self.tau is None:
            object.__setattr__(self, 'tau', self.T)
        if self.d is None:
            object.__setattr__(self, 'd', self.c_light / (2.0 * self.f_nyq))
        if not self.tau > 0:
            raise ScenarioError('tau must be positive, got {}'.format(
                self.tau))
        if not self.d > 0:
            raise ScenarioError('d must be positive, got {}'.format(self.d))

    @property
    def T(self) -> float:
        return 1.0 / self.f_nyq

    @property
    def delay_is_nyquist(self) -> bool:
        return math.isclose(self.tau, self.T, rel_tol=1e-12)


@dataclass(frozen=True)
class DelayPattern:
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) < 2:
            raise ScenarioError(
                'A delay pattern needs at least 2 branches, got {}'.format(
                    len(coeffs)))
        if coeffs[0] != 0:
            raise FirstNotZero(
                'The first delay coefficient must be 0, got {}'.format(
                    coeffs[0]))
        if any(b <= a for a, b in zip(coeffs, coeffs[1:])):
            raise NotAscending(
                'Delay coefficients must be strictly ascending: {}'.format(
                    list(coeffs)))
        object.__setattr__(self, 'coeffs', coeffs)

    @classmethod
    def mra(cls, M: int) -> 'DelayPattern':
        try:
            return cls(MRA_PATTERNS[M])
        except KeyError:
            raise ScenarioError(
                'No built-in minimum-redundancy pattern for M={} '
                '(available: {})'.format(M, sorted(MRA_PATTERNS)))

    @property
    def M(self) -> int:
        return len(self.coeffs)

    @property
    def Q(self) -> int:
        return self.coeffs[-1] + 1


@dataclass(frozen=True)
class SourceParams:
    f_k: float
    theta_k: float
    W_k: float = 1.0
    kind: SourceKind = SourceKind.COMPLEX_SINUSOID
    B_k: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', SourceKind(self.kind))
        if not self.f_k >= 0:
            raise InvalidSource('Carrier must be non-negative, got {}'.format(
                self.f_k))
        if not -90.0 <= self.theta_k <= 90.0:
            raise InvalidSource('DOA must lie in [-90, 90] degrees, '
                                'got {}'.format(self.theta_k))
        if not self.W_k > 0:
            raise InvalidSource('Power must be positive, got {}'.format(
                self.W_k))
        if self.B_k < 0:
            raise InvalidSource('Bandwidth must be non-negative')
        if self.kind is SourceKind.COMPLEX_SINUSOID and self.B_k != 0:
            raise InvalidSource('A complex sinusoid has no bandwidth, '
                                'got B_k={}'.format(self.B_k))
        if self.kind is not SourceKind.COMPLEX_SINUSOID and self.B_k == 0:
            raise InvalidSource(
                '{} sources need a positive bandwidth'.format(self.kind.value))

    @property
    def band(self) -> Tuple[float, float]:
        return self.f_k - self.B_k / 2.0, self.f_k + self.B_k / 2.0


@dataclass(frozen=True)
class Scenario:
    constants: ArrayConstants
    pattern: DelayPattern
    L: int
    sources: Tuple[SourceParams, ...] = ()
    sigma2: float = 0.0
    n_snapshots: int = 1024
    dither_hz: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'sources', tuple(self.sources))
        if int(self.L) != self.L or self.L < 1:
            raise ScenarioError('L must be a positive integer, got {}'.format(
                self.L))
        if int(self.n_snapshots) != self.n_snapshots or self.n_snapshots < 1:
            raise ScenarioError('n_snapshots must be a positive integer')
        if self.sigma2 < 0:
            raise ScenarioError('sigma2 must be non-negative')
        for source in self.sources:
            if source.f_k >= self.constants.f_nyq:
                raise InvalidSource(
                    'Carrier {} Hz is outside [0, f_nyq={})'.format(
                        source.f_k, self.constants.f_nyq))
            if source.B_k >= self.constants.f_nyq:
                raise InvalidSource(
                    'Bandwidth {} Hz exceeds f_nyq'.format(source.B_k))
        check_disjoint_bands(self.sources)

    @property
    def K(self) -> int:
        return len(self.sources)

    @property
    def M(self) -> int:
        return self.pattern.M

    @property
    def f_sub(self) -> float:
        return self.constants.f_nyq / self.L

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([s.f_k for s in self.sources], dtype=float)

    @property
    def thetas(self) -> np.ndarray:
        return np.array([s.theta_k for s in self.sources], dtype=float)

    @property
    def powers(self) -> np.ndarray:
        return np.array([s.W_k for s in self.sources], dtype=float)


def check_disjoint_bands(sources):
    ordered = sorted(sources, key=lambda s: s.f_k)
    for left, right in zip(ordered, ordered[1:]):
        if left.f_k == right.f_k:
            raise InvalidSource(
                'Carrier frequencies must be distinct, {} Hz repeats'.format(
                    left.f_k))
        if left.band[1] > right.band[0]:
            raise InvalidSource(
                'Information bands around {} Hz and {} Hz overlap'.format(
                    left.f_k, right.f_k))


def validate_scenario(scenario: Scenario) -> Scenario:
    if scenario.K < 1:
        raise InvalidSource('A scenario needs at least one source')
    return scenario


def difference_coarray(pattern: DelayPattern) -> Dict[int, int]:
    """
    Every ordered-pair lag c_i - c_j with its multiplicity, ascending lags.
    """
    counts = Counter(ci - cj for ci in pattern.coeffs for cj in pattern.coeffs)
    return OrderedDict(sorted(counts.items()))


def validate_pattern(pattern: DelayPattern) -> int:
    coarray = difference_coarray(pattern)
    span = pattern.coeffs[-1]
    missing = [lag for lag in range(-span, span + 1) if lag not in coarray]
    if missing:
        raise NonContiguousCoarray(pattern.coeffs, missing)
    return pattern.Q


@dataclass(frozen=True)
class RateCheck:
    passed: bool
    margin: float
    f_sub: float
    max_bandwidth: float
    identifiable: bool
    capacity: Optional[int]
    K: int
    etm: bool
    total_rate: float
    nyquist_total_rate: float
    notes: Tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.passed and self.identifiable


def check_rate_condition(scenario: Scenario, etm: bool = True) -> RateCheck:
    """
    Evaluates both identifiability conditions: f_nyq / L >= max B_k and
    capacity >= K + 1, where capacity is Q with ETM and M without.
    """
    max_bandwidth = max((s.B_k for s in scenario.sources), default=0.0)
    margin = scenario.f_sub - max_bandwidth
    notes = []

    capacity = None  # type: Optional[int]
    if etm:
        try:
            capacity = validate_pattern(scenario.pattern)
        except NonContiguousCoarray as exc:
            notes.append(str(exc))
    else:
        capacity = scenario.M

    identifiable = capacity is not None and capacity >= scenario.K + 1
    if capacity is not None and not identifiable:
        notes.append('K={} sources need capacity >= {}, have {}'.format(
            scenario.K, scenario.K + 1, capacity))
    if margin < 0:
        notes.append('f_sub={} Hz is below the widest band {} Hz'.format(
            scenario.f_sub, max_bandwidth))

    return RateCheck(
        passed=margin >= 0,
        margin=margin,
        f_sub=scenario.f_sub,
        max_bandwidth=max_bandwidth,
        identifiable=identifiable,
        capacity=capacity,
        K=scenario.K,
        etm=etm,
        total_rate=2 * scenario.M * scenario.f_sub,
        nyquist_total_rate=2 * scenario.M * scenario.constants.f_nyq,
        notes=tuple(notes),
    )


def unit_phases(scenario: Scenario) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per-source (omega_k, phi_k): the phase step of one delay unit tau and
    the phase step across the two array elements.
    """
    constants = scenario.constants
    f = scenario.frequencies
    omega = np.mod(2 * np.pi * f * constants.tau, 2 * np.pi)
    phi = (2 * np.pi * constants.d * f
           * np.sin(np.deg2rad(scenario.thetas)) / constants.c_light)
    return omega, phi
