# -*- coding: utf-8 -*-
"""
MUSIC machinery and the twice-MUSIC joint frequency/DOA estimator.

Carrier frequencies come from the noise subspaces of the two diagonal
covariance blocks, DOAs from the noise subspace of the full stacked
covariance scanned at each estimated carrier, so every (f, theta) pair is
formed without a matching step.
"""
import csv
import enum
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.signal import argrelextrema

from .covariance import CovarianceSet, hermitian_part
from .exceptions import (
    DimensionMismatch,
    GridEmpty,
    KTooLarge,
    NonFinite,
    NotHermitian,
    TooFewPeaks,
)
from .manifold import ArrayManifold, EstimationGrids

logger = logging.getLogger(__name__)

HERMITIAN_ATOL = 1e-8
WRAP_GUARD_STEPS = 4


class SpectrumKind(str, enum.Enum):
    FREQUENCY = 'frequency'
    DOA = 'doa'


class EstimationMode(str, enum.Enum):
    PLAIN = 'plain'
    ETM = 'etm'


@dataclass(frozen=True, eq=False)
class EigenBasis:
    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class PseudoSpectrum:
    grid: np.ndarray
    values: np.ndarray
    kind: SpectrumKind
    f_hat: Optional[float] = None

    @property
    def circular(self) -> bool:
        return self.kind is SpectrumKind.FREQUENCY

    @property
    def period(self) -> float:
        # Uniform grid over one full turn of the time-delay manifold
        return float(self.grid[1] - self.grid[0]) * self.grid.shape[0]

    def to_csv(self, path) -> None:
        with open(path, 'w', newline='') as f:
            f.write('# kind={}, f_hat={}\n'.format(
                self.kind.value,
                'none' if self.f_hat is None else repr(float(self.f_hat))))
            writer = csv.writer(f)
            writer.writerow(['abscissa', 'value'])
            for x, y in zip(self.grid, self.values):
                writer.writerow([repr(float(x)), repr(float(y))])


@dataclass(frozen=True, eq=False)
class EstimateSet:
    frequencies: np.ndarray
    thetas: np.ndarray
    freq_heights: np.ndarray
    doa_heights: np.ndarray
    mode: EstimationMode = EstimationMode.PLAIN
    spectra: Tuple[PseudoSpectrum, ...] = field(default=())

    def __post_init__(self):
        order = np.argsort(self.frequencies, kind='stable')
        for name in ('frequencies', 'thetas', 'freq_heights', 'doa_heights'):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=float)[order])
        object.__setattr__(self, 'mode', EstimationMode(self.mode))

    @property
    def K(self) -> int:
        return self.frequencies.shape[0]

    @property
    def pairs(self) -> List[Tuple[float, float]]:
        return list(zip(self.frequencies.tolist(), self.thetas.tolist()))

    @property
    def frequency_spectra(self) -> Tuple[PseudoSpectrum, ...]:
        return tuple(s for s in self.spectra
                     if s.kind is SpectrumKind.FREQUENCY)

    @property
    def doa_spectra(self) -> Tuple[PseudoSpectrum, ...]:
        return tuple(s for s in self.spectra if s.kind is SpectrumKind.DOA)


def eigh(matrix: np.ndarray) -> EigenBasis:
    """
    Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch('Expected a square matrix, got {}'.format(
            matrix.shape))
    if not np.all(np.isfinite(matrix)):
        raise NonFinite('Matrix contains non-finite entries')
    scale = max(1.0, float(np.max(np.abs(matrix), initial=0.0)))
    asymmetry = float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0))
    if asymmetry > HERMITIAN_ATOL * scale:
        raise NotHermitian(
            'Matrix deviates from Hermitian by {:.3g}'.format(asymmetry))

    values, vectors = np.linalg.eigh(hermitian_part(matrix))
    return EigenBasis(values=values, vectors=vectors)


def noise_subspace(basis: EigenBasis, K: int) -> np.ndarray:
    if K < 0:
        raise ValueError('K must be non-negative, got {}'.format(K))
    if K >= basis.dim:
        raise KTooLarge(K, basis.dim)
    return basis.vectors[:, :basis.dim - K]


def _music(noise: np.ndarray, steering: np.ndarray) -> np.ndarray:
    projection = noise.conj().T @ steering
    denominator = np.sum(np.abs(projection) ** 2, axis=0)
    return 1.0 / np.maximum(denominator, np.finfo(float).tiny)


def freq_pseudospectrum(G: np.ndarray, manifold: ArrayManifold,
                        grid: Sequence[float]) -> PseudoSpectrum:
    """
    1 / (a_t^H G G^H a_t) over a carrier grid in Hz.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise GridEmpty('Frequency grid is empty')
    if G.shape[0] != manifold.size:
        raise DimensionMismatch(
            'Noise subspace has {} rows, manifold has {} lags'.format(
                G.shape[0], manifold.size))
    values = _music(G, manifold.time_delay(manifold.omega(grid)))
    return PseudoSpectrum(grid=grid, values=values,
                          kind=SpectrumKind.FREQUENCY)


def doa_pseudospectrum(U: np.ndarray, f_hat: float, manifold: ArrayManifold,
                       grid: Sequence[float]) -> PseudoSpectrum:
    """
    1 / (a^H U U^H a) over a DOA grid in degrees, a being the stacked
    manifold at the fixed carrier f_hat.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise GridEmpty('DOA grid is empty')
    if U.shape[0] != 2 * manifold.size:
        raise DimensionMismatch(
            'Noise subspace has {} rows, stacked manifold has {}'.format(
                U.shape[0], 2 * manifold.size))
    values = _music(U, manifold.stacked(f_hat, grid))
    return PseudoSpectrum(grid=grid, values=values, kind=SpectrumKind.DOA,
                          f_hat=float(f_hat))


def _vertex_offset(y0: float, y1: float, y2: float) -> float:
    curvature = y0 - 2 * y1 + y2
    if curvature == 0:
        return 0.0
    return 0.5 * (y0 - y2) / curvature


def refine_peak(spec: PseudoSpectrum, index: int, scale: str = 'linear',
                circular: Optional[bool] = None) -> float:
    """
    Vertex of the parabola through the peak sample and its two
    neighbours. With ``scale='reciprocal'`` the parabola is fitted to
    1 / values, which is locally quadratic at a MUSIC null.
    """
    circular = spec.circular if circular is None else circular
    n = spec.grid.shape[0]
    if not circular and (index == 0 or index == n - 1):
        return float(spec.grid[index])

    y = spec.values[[(index - 1) % n, index, (index + 1) % n]]
    if scale == 'reciprocal':
        delta = _vertex_offset(*(1.0 / y))
    elif scale == 'linear':
        delta = _vertex_offset(*y)
    else:
        raise ValueError('Unknown refinement scale {!r}'.format(scale))

    if circular:
        step = spec.grid[1] - spec.grid[0]
        return float(np.mod(spec.grid[index] + delta * step, spec.period))
    step = (spec.grid[index + 1] - spec.grid[index - 1]) / 2.0
    return float(spec.grid[index] + delta * step)


def pick_peaks(spec: PseudoSpectrum, K: int, scale: str = 'linear',
               circular: Optional[bool] = None) -> np.ndarray:
    """
    Refined abscissae of the K highest strict local maxima, ascending.
    """
    if spec.grid.shape[0] < 3:
        raise GridEmpty('Peak picking needs at least 3 grid points')
    if K < 1:
        raise ValueError('K must be at least 1, got {}'.format(K))
    circular = spec.circular if circular is None else circular

    # 'clip' compares the end points with themselves, so they never qualify
    candidates = argrelextrema(
        spec.values, np.greater, mode='wrap' if circular else 'clip')[0]
    if candidates.shape[0] < K:
        raise TooFewPeaks(candidates.shape[0], K)

    # Highest first, ties broken by the lower abscissa
    order = np.lexsort((spec.grid[candidates], -spec.values[candidates]))
    chosen = candidates[order[:K]]
    refined = [refine_peak(spec, i, scale, circular) for i in chosen]
    return np.sort(np.asarray(refined))


def peak_heights(spec: PseudoSpectrum, abscissae: Sequence[float]) -> np.ndarray:
    if spec.circular:
        period = spec.period
        index = [int(np.argmin(circular_distance(spec.grid, x, period)))
                 for x in abscissae]
    else:
        index = [int(np.argmin(np.abs(spec.grid - x))) for x in abscissae]
    return spec.values[index]


def circular_distance(a, b, period: float) -> np.ndarray:
    d = np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float), period)
    return np.minimum(d, period - d)


def wrapped_difference(a, b, period: float) -> np.ndarray:
    """
    a - b folded into [-period / 2, period / 2).
    """
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return np.mod(d + period / 2.0, period) - period / 2.0


def cyclic_shift(a: np.ndarray, b: np.ndarray, period: float) -> int:
    """
    Rotation s such that b[(i + s) % K] lies closest to a[i] on the circle,
    both lists ascending modulo the period.
    """
    K = len(a)
    costs = [np.sum(circular_distance(a, np.roll(b, -s), period) ** 2)
             for s in range(K)]
    return int(np.argmin(costs))


def circular_mean(a: Sequence[float], b: Sequence[float],
                  period: float) -> np.ndarray:
    """
    Pairs two peak lists on the circle of the given period and averages
    each pair as unit phasors. Result ascending in [0, period).
    """
    a = np.sort(np.mod(np.asarray(a, dtype=float), period))
    b = np.sort(np.mod(np.asarray(b, dtype=float), period))
    if a.shape != b.shape:
        raise DimensionMismatch('Cannot pair {} peaks with {}'.format(
            a.shape[0], b.shape[0]))
    b = np.roll(b, -cyclic_shift(a, b, period))
    scale = 2 * np.pi / period
    mean = np.mod(np.angle(np.exp(1j * scale * a) + np.exp(1j * scale * b))
                  / scale, period)
    return np.sort(np.where(mean >= period, mean - period, mean))


def _wrap_alternative(f_hat: float, period: float,
                      guard: float) -> Optional[float]:
    if f_hat < guard:
        return f_hat + period
    if f_hat > period - guard:
        return f_hat - period
    return None


def jdf4ba(cov: CovarianceSet, K: int, manifold: ArrayManifold,
           grids: Optional[EstimationGrids] = None,
           mode: EstimationMode = EstimationMode.PLAIN) -> EstimateSet:
    """
    Joint frequency/DOA estimation from a stacked covariance.

    1. eigendecompose the two diagonal blocks;
    2. pick K carrier peaks in each frequency pseudo-spectrum, pair the
       two lists on the circle [0, 1/tau) and average each pair;
    3. eigendecompose the full covariance;
    4. for every carrier, take the highest peak of the DOA pseudo-spectrum.

    A carrier within WRAP_GUARD_STEPS grid steps of the wrap is also
    scanned one period over, and the scan with the higher DOA peak decides
    which side of the wrap it lies on.
    """
    grids = grids or EstimationGrids()
    if cov.M != manifold.size:
        raise DimensionMismatch(
            'Covariance blocks are {0}x{0}, manifold has {1} lags'.format(
                cov.M, manifold.size))
    if K >= manifold.size:
        raise KTooLarge(K, manifold.size)

    frequency_grid = grids.frequency(manifold.constants)
    period = 1.0 / manifold.constants.tau
    block_spectra = []
    block_peaks = []
    for diagonal in (cov.xx, cov.x_bar_x_bar):
        G = noise_subspace(eigh(diagonal), K)
        spectrum = freq_pseudospectrum(G, manifold, frequency_grid)
        block_spectra.append(spectrum)
        block_peaks.append(pick_peaks(spectrum, K, scale='reciprocal'))
    logger.debug('Carrier peaks %s and %s', block_peaks[0], block_peaks[1])
    carriers = circular_mean(block_peaks[0], block_peaks[1], period)

    full_basis = eigh(cov.full)
    logger.debug('Full covariance eigenvalues %s', full_basis.values)
    U = noise_subspace(full_basis, K)

    doa_grid = grids.doa()
    guard = WRAP_GUARD_STEPS * grids.frequency_step(manifold.constants)
    scans = []
    for f_hat in carriers:
        spectrum = doa_pseudospectrum(U, f_hat, manifold, doa_grid)
        alternative = _wrap_alternative(f_hat, period, guard)
        if alternative is not None:
            other = doa_pseudospectrum(U, alternative, manifold, doa_grid)
            if other.values.max() > spectrum.values.max():
                logger.debug('Carrier %.6g Hz moved across the wrap to '
                             '%.6g Hz', f_hat, alternative)
                spectrum = other
        scans.append(spectrum)
    scans.sort(key=lambda s: s.f_hat)

    frequencies = np.array([s.f_hat for s in scans])
    thetas = []
    doa_heights = []
    for spectrum in scans:
        best = int(np.argmax(spectrum.values))
        theta = refine_peak(spectrum, best, scale='reciprocal')
        thetas.append(float(np.clip(theta, -90.0, 90.0)))
        doa_heights.append(float(spectrum.values[best]))

    return EstimateSet(
        frequencies=frequencies,
        thetas=np.asarray(thetas),
        freq_heights=peak_heights(block_spectra[0], frequencies),
        doa_heights=np.asarray(doa_heights),
        mode=mode,
        spectra=tuple(block_spectra) + tuple(scans),
    )
