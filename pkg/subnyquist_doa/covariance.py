"""
Stacked 2M x 2M covariance of the two-element, M-branch receiver and its
four M x M blocks.

The covariance is estimated from time-domain sub-Nyquist snapshots: for
wide-sense-stationary sources the expected time-domain covariance has the
same A W A^H + noise * I structure as the aliased-spectrum formulation.
"""
import csv
import enum
import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import DegenerateSnapshots
from .manifold import steering_matrix
from .scenario import Scenario
from .synth import SnapshotMatrix

logger = logging.getLogger(__name__)


class Block(str, enum.Enum):
    XX = 'XX'
    XX_BAR = 'XXbar'
    X_BAR_X = 'XbarX'
    X_BAR_X_BAR = 'XbarXbar'


@dataclass(frozen=True, eq=False)
class CovarianceSet:
    """
    ``n_used`` is the number of snapshots behind the estimate, 0 for the
    analytic oracle.
    """
    full: np.ndarray
    n_used: int = 0

    def __post_init__(self):
        full = np.asarray(self.full, dtype=complex)
        if full.ndim != 2 or full.shape[0] != full.shape[1] or \
                full.shape[0] % 2:
            raise ValueError(
                'Covariance must be square with even size, got {}'.format(
                    full.shape))
        full.setflags(write=False)
        object.__setattr__(self, 'full', full)

    @property
    def M(self) -> int:
        return self.full.shape[0] // 2

    @property
    def xx(self) -> np.ndarray:
        return block(self, Block.XX)

    @property
    def xx_bar(self) -> np.ndarray:
        return block(self, Block.XX_BAR)

    @property
    def x_bar_x(self) -> np.ndarray:
        return block(self, Block.X_BAR_X)

    @property
    def x_bar_x_bar(self) -> np.ndarray:
        return block(self, Block.X_BAR_X_BAR)


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.conj().T) / 2.0


def sample_covariance(
        snapshots: Union[SnapshotMatrix, np.ndarray]) -> CovarianceSet:
    data = getattr(snapshots, 'data', snapshots)
    data = np.asarray(data, dtype=complex)
    n_rows, N = data.shape
    if N == 0:
        raise DegenerateSnapshots('Cannot estimate a covariance from 0 '
                                  'snapshots')
    if N < n_rows:
        logger.warning('Only %d snapshots for a %d x %d covariance, the '
                       'estimate is rank deficient', N, n_rows, n_rows)

    covariance = data @ data.conj().T / N
    return CovarianceSet(full=hermitian_part(covariance), n_used=N)


def analytic_covariance(scenario: Scenario,
                        noise_scale: float = 1) -> CovarianceSet:
    """
    A diag(W) A^H + noise_scale * sigma2 * I from ground truth.

    ``noise_scale=L`` reproduces the L sigma^2 noise floor of the
    aliased-spectrum formulation, 1 matches the time-domain snapshots.
    """
    a = steering_matrix(scenario)
    covariance = (a * scenario.powers[np.newaxis, :]) @ a.conj().T
    covariance = covariance + noise_scale * scenario.sigma2 * np.eye(
        2 * scenario.M)
    return CovarianceSet(full=hermitian_part(covariance), n_used=0)


def block(cov: CovarianceSet, which: Union[Block, str]) -> np.ndarray:
    which = Block(which)
    M = cov.M
    rows = slice(0, M) if which in (Block.XX, Block.XX_BAR) else slice(M, 2 * M)
    cols = slice(0, M) if which in (Block.XX, Block.X_BAR_X) else slice(M, 2 * M)
    return cov.full[rows, cols]


def write_covariance_csv(cov: CovarianceSet, path) -> None:
    """
    One matrix row per line, each entry written as a ``re,im`` pair.
    """
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        for row in cov.full:
            writer.writerow([
                repr(float(part)) for value in row
                for part in (value.real, value.imag)])
