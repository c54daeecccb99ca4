# -*- coding: utf-8 -*-
"""
Expansion of the time-delay manifold.

Each M x M covariance block is column-vectorized; because
vec(a a^H) = a* (x) a, entry (i, j) of a block carries the phase
e^{j omega (c_j - c_i)}. Averaging the entries per coarray lag gives a
(2Q-1)-vector on the contiguous lag range, and sliding a Q-window over it
yields a Q x Q Toeplitz covariance with the virtual manifold
[1, e^{-j omega}, ..., e^{-j omega (Q-1)}], so up to Q-1 sources can be
resolved with M < Q physical branches.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .covariance import CovarianceSet, hermitian_part
from .exceptions import DimensionMismatch, KTooLarge
from .manifold import ArrayManifold, EstimationGrids
from .scenario import ArrayConstants, DelayPattern, validate_pattern
from .subspace import EstimateSet, EstimationMode, jdf4ba

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class XiOperator:
    """
    Maps a column-vectorized M x M block onto the descending lag range
    Q-1, ..., -(Q-1), averaging duplicate lags with equal weights.

    ``mapping[p]`` lists the vec indices j * M + i (row i, column j)
    whose pair satisfies c_j - c_i = Q - 1 - p.
    """
    M: int
    Q: int
    mapping: Tuple[Tuple[int, ...], ...]
    matrix: np.ndarray

    @property
    def lags(self) -> np.ndarray:
        return np.arange(self.Q - 1, -self.Q, -1)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([len(sources) for sources in self.mapping])

    def apply(self, vector: np.ndarray) -> np.ndarray:
        vector = np.asarray(vector)
        if vector.shape != (self.M * self.M,):
            raise DimensionMismatch(
                'Expected a vector of length {}, got shape {}'.format(
                    self.M * self.M, vector.shape))
        return self.matrix @ vector


class BlockVectors(NamedTuple):
    xx: np.ndarray
    xx_bar: np.ndarray
    x_bar_x: np.ndarray
    x_bar_x_bar: np.ndarray


@dataclass(frozen=True, eq=False)
class VirtualCovariance(CovarianceSet):
    """
    2Q x 2Q covariance of the virtual branches, same block layout as
    CovarianceSet.
    """

    @property
    def Q(self) -> int:
        return self.M


def build_xi(pattern: DelayPattern) -> XiOperator:
    Q = validate_pattern(pattern)
    M = pattern.M
    coeffs = pattern.coeffs

    rows = [[] for _ in range(2 * Q - 1)]
    for j in range(M):
        for i in range(M):
            lag = coeffs[j] - coeffs[i]
            rows[Q - 1 - lag].append(j * M + i)

    matrix = np.zeros((2 * Q - 1, M * M))
    for p, sources in enumerate(rows):
        matrix[p, sources] = 1.0 / len(sources)
    matrix.setflags(write=False)

    return XiOperator(M=M, Q=Q, mapping=tuple(tuple(r) for r in rows),
                      matrix=matrix)


def vectorize_blocks(cov: CovarianceSet) -> BlockVectors:
    """
    Column-stacked vec() of the four blocks. The noise floor stays on the
    diagonal blocks; it lands on the lag-0 entry and is harmless to MUSIC.
    """
    return BlockVectors(*(
        np.asarray(b).reshape(-1, order='F')
        for b in (cov.xx, cov.xx_bar, cov.x_bar_x, cov.x_bar_x_bar)))


def virtual_vectors(xi: XiOperator, vectors: BlockVectors) -> BlockVectors:
    return BlockVectors(*(xi.apply(v) for v in vectors))


def toeplitz_window(z: np.ndarray, Q: int) -> np.ndarray:
    """
    Q x Q matrix whose column s is the Q-window of z starting at
    Q - 1 - s, i.e. [z_Q, ..., z_1] with z_i = z[i-1 : i-1+Q].
    """
    z = np.asarray(z)
    if z.shape != (2 * Q - 1,):
        raise DimensionMismatch(
            'Expected a vector of length {}, got shape {}'.format(
                2 * Q - 1, z.shape))
    return np.column_stack([z[i - 1:i - 1 + Q] for i in range(Q, 0, -1)])


def assemble_virtual(z_sets: BlockVectors, Q: int,
                     n_used: int = 0) -> VirtualCovariance:
    blocks = BlockVectors(*(toeplitz_window(z, Q) for z in z_sets))
    full = np.block([
        [blocks.xx, blocks.xx_bar],
        [blocks.x_bar_x, blocks.x_bar_x_bar],
    ])
    return VirtualCovariance(full=hermitian_part(full), n_used=n_used)


def expand(cov: CovarianceSet, pattern: DelayPattern,
           xi: Optional[XiOperator] = None) -> VirtualCovariance:
    xi = xi or build_xi(pattern)
    if cov.M != xi.M:
        raise DimensionMismatch(
            'Covariance has M={} branches, pattern has {}'.format(
                cov.M, xi.M))
    z_sets = virtual_vectors(xi, vectorize_blocks(cov))
    return assemble_virtual(z_sets, xi.Q, n_used=cov.n_used)


def jdf4ba_etm(cov: CovarianceSet, pattern: DelayPattern, K: int,
               constants: ArrayConstants,
               grids: Optional[EstimationGrids] = None,
               xi: Optional[XiOperator] = None) -> EstimateSet:
    Q = validate_pattern(pattern)
    if K >= Q:
        raise KTooLarge(K, Q)

    virtual = expand(cov, pattern, xi)
    logger.debug('Expanded %dx%d covariance to %dx%d', 2 * cov.M, 2 * cov.M,
                 2 * Q, 2 * Q)
    manifold = ArrayManifold(constants, np.arange(Q))
    return jdf4ba(virtual, K, manifold, grids, mode=EstimationMode.ETM)
