"""
Time-delay and stacked two-element manifolds, scan grids.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .scenario import ArrayConstants, Scenario


@dataclass(frozen=True, eq=False)
class ArrayManifold:
    """
    Steering vectors of the binary array for a given set of delay lags.

    ``lags`` are the delay coefficients of the physical branches (plain
    mode) or 0..Q-1 for the virtual branches built by the ETM expansion.
    """
    constants: ArrayConstants
    lags: Sequence[int]

    def __post_init__(self):
        object.__setattr__(
            self, 'lags', np.asarray(self.lags, dtype=float).reshape(-1))

    @property
    def size(self) -> int:
        return self.lags.shape[0]

    def omega(self, f):
        return 2 * np.pi * np.asarray(f, dtype=float) * self.constants.tau

    def phi(self, f, theta_deg):
        constants = self.constants
        return (2 * np.pi * constants.d * np.asarray(f, dtype=float)
                * np.sin(np.deg2rad(theta_deg)) / constants.c_light)

    def time_delay(self, omega) -> np.ndarray:
        """
        size x G matrix with columns e^{-j omega lag}.
        """
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        return np.exp(-1j * np.outer(self.lags, omega))

    def stacked(self, f_hat: float, theta_deg) -> np.ndarray:
        """
        2*size x G stacked vectors [a_t; a_t e^{-j phi(theta)}] for a fixed
        carrier and a set of DOAs.
        """
        theta_deg = np.atleast_1d(np.asarray(theta_deg, dtype=float))
        a_t = self.time_delay(self.omega(f_hat))
        spatial = np.exp(-1j * self.phi(f_hat, theta_deg))
        return np.vstack([
            np.repeat(a_t, theta_deg.shape[0], axis=1),
            a_t * spatial[np.newaxis, :],
        ])

    def steering(self, f, theta_deg) -> np.ndarray:
        """
        2*size x K stacked vectors for paired (f_k, theta_k).
        """
        f = np.atleast_1d(np.asarray(f, dtype=float))
        a_t = self.time_delay(self.omega(f))
        spatial = np.exp(-1j * self.phi(f, theta_deg))
        return np.vstack([a_t, a_t * spatial[np.newaxis, :]])


def steering_matrix(scenario: Scenario) -> np.ndarray:
    manifold = ArrayManifold(scenario.constants, scenario.pattern.coeffs)
    return manifold.steering(scenario.frequencies, scenario.thetas)


@dataclass(frozen=True)
class EstimationGrids:
    n_freq: int = 4096
    n_doa: int = 721

    def frequency(self, constants: ArrayConstants) -> np.ndarray:
        # [0, 1/tau), endpoint excluded: the time-delay manifold is periodic
        return np.arange(self.n_freq) / (self.n_freq * constants.tau)

    def doa(self) -> np.ndarray:
        return np.linspace(-90.0, 90.0, self.n_doa)

    def frequency_step(self, constants: ArrayConstants) -> float:
        return 1.0 / (self.n_freq * constants.tau)

    def doa_step(self) -> float:
        return 180.0 / max(self.n_doa - 1, 1)
