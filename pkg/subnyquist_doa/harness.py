# -*- coding: utf-8 -*-
"""
Single-scenario runs, Monte Carlo SNR sweeps and CSV export.
"""
import csv
import logging
import os
from dataclasses import dataclass, field, replace
from functools import singledispatch
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .covariance import analytic_covariance, sample_covariance
from .etm import build_xi, jdf4ba_etm
from .exceptions import EstimationError
from .manifold import ArrayManifold, EstimationGrids
from .scenario import Scenario, SourceParams, validate_scenario
from .subspace import (
    EstimateSet,
    EstimationMode,
    cyclic_shift,
    jdf4ba,
    wrapped_difference,
)
from .synth import SynthesisMode, calibrate_sigma2, simulate_snapshots

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerances:
    """
    Success thresholds of a trial: carrier error as a fraction of f_nyq,
    DOA error in degrees.
    """
    freq_fraction: float = 0.002
    doa_deg: float = 3.0


@dataclass(frozen=True, eq=False)
class TrialResult:
    seed: Optional[int]
    truth: Tuple[SourceParams, ...]
    estimates: Optional[EstimateSet] = None
    freq_errors: np.ndarray = field(default_factory=lambda: np.empty(0))
    doa_errors: np.ndarray = field(default_factory=lambda: np.empty(0))
    success: bool = False
    error: Optional[str] = None

    @property
    def estimated(self) -> bool:
        return self.estimates is not None

    @property
    def matched_truth(self) -> Tuple[SourceParams, ...]:
        return tuple(sorted(self.truth, key=lambda s: s.f_k))


@dataclass(frozen=True)
class SweepPoint:
    snr_db: float
    rmse_freq_hz: float
    rmse_doa_deg: float
    n_trials: int
    n_estimated: int
    n_success: int
    median_freq_hz: float
    median_doa_deg: float

    @property
    def success_rate(self) -> float:
        return self.n_success / self.n_trials

    @property
    def n_failed(self) -> int:
        return self.n_trials - self.n_estimated


@dataclass(frozen=True)
class SweepResult:
    points: Tuple[SweepPoint, ...] = ()
    mode: EstimationMode = EstimationMode.ETM

    @property
    def axis(self) -> Tuple[float, ...]:
        return tuple(p.snr_db for p in self.points)


def score(estimates: EstimateSet, truth: Sequence[SourceParams],
          f_nyq: float, tolerances: Tolerances = Tolerances(),
          period: Optional[float] = None):
    """
    Errors of an estimate set against the truth. Carriers live on a
    circle of length ``period`` (1/tau, f_nyq by default): both lists are
    ordered along it and matched by the rotation that brings them closest,
    and carrier errors are circular. A wrong pairing shows up as a large
    DOA error.
    """
    period = f_nyq if period is None else period
    ordered = sorted(truth, key=lambda s: s.f_k)
    f_true = np.array([s.f_k for s in ordered])
    theta_true = np.array([s.theta_k for s in ordered])

    order = np.argsort(np.mod(estimates.frequencies, period), kind='stable')
    f_hat = estimates.frequencies[order]
    theta_hat = estimates.thetas[order]
    if f_hat.shape == f_true.shape and f_hat.size:
        shift = cyclic_shift(np.mod(f_true, period), np.mod(f_hat, period),
                             period)
        f_hat = np.roll(f_hat, -shift)
        theta_hat = np.roll(theta_hat, -shift)

    freq_errors = wrapped_difference(f_hat, f_true, period)
    doa_errors = theta_hat - theta_true
    success = bool(
        np.all(np.abs(freq_errors) <= tolerances.freq_fraction * f_nyq)
        and np.all(np.abs(doa_errors) <= tolerances.doa_deg))
    return freq_errors, doa_errors, success


def estimate(cov, scenario: Scenario,
             mode: Union[EstimationMode, str] = EstimationMode.ETM,
             grids: Optional[EstimationGrids] = None,
             xi=None) -> EstimateSet:
    mode = EstimationMode(mode)
    if mode is EstimationMode.ETM:
        return jdf4ba_etm(cov, scenario.pattern, scenario.K,
                          scenario.constants, grids, xi)
    manifold = ArrayManifold(scenario.constants, scenario.pattern.coeffs)
    return jdf4ba(cov, scenario.K, manifold, grids)


def run_scenario(scenario: Scenario,
                 mode: Union[EstimationMode, str] = EstimationMode.ETM,
                 seed: Optional[int] = 0,
                 synthesis: Union[SynthesisMode, str] = SynthesisMode.EXACT_DELAY,
                 analytic: bool = False,
                 spectra_dir=None,
                 grids: Optional[EstimationGrids] = None,
                 tolerances: Tolerances = Tolerances(),
                 xi=None,
                 raise_errors: bool = True) -> TrialResult:
    """
    Synthesize, estimate the covariance (or take the analytic one), run the
    estimator and score it against the truth.

    With ``raise_errors=False`` an EstimationError is recorded in the
    result instead of propagating.
    """
    validate_scenario(scenario)
    if analytic:
        cov = analytic_covariance(scenario)
    else:
        cov = sample_covariance(simulate_snapshots(scenario, synthesis, seed))

    try:
        estimates = estimate(cov, scenario, mode, grids, xi)
    except EstimationError as exc:
        if raise_errors:
            raise
        logger.info('Trial seed=%s failed: %s', seed, exc)
        return TrialResult(seed=seed, truth=scenario.sources, error=str(exc))

    freq_errors, doa_errors, success = score(
        estimates, scenario.sources, scenario.constants.f_nyq, tolerances,
        period=1.0 / scenario.constants.tau)
    if spectra_dir is not None:
        write_spectra(estimates, spectra_dir)

    return TrialResult(
        seed=seed,
        truth=scenario.sources,
        estimates=estimates,
        freq_errors=freq_errors,
        doa_errors=doa_errors,
        success=success,
    )


def write_spectra(estimates: EstimateSet, directory) -> None:
    os.makedirs(directory, exist_ok=True)
    for name, spectrum in zip(('freq_xx.csv', 'freq_xbarxbar.csv'),
                              estimates.frequency_spectra):
        spectrum.to_csv(os.path.join(directory, name))
    for k, spectrum in enumerate(estimates.doa_spectra, 1):
        spectrum.to_csv(os.path.join(directory, 'doa_{}.csv'.format(k)))


def rmse(errors: Sequence[np.ndarray]) -> float:
    """
    sqrt(1 / (N_m K) * sum over trials and sources of squared errors).
    """
    if not len(errors):
        return float('nan')
    stacked = np.concatenate([np.asarray(e, dtype=float) for e in errors])
    return float(np.sqrt(np.mean(stacked ** 2)))


def monte_carlo_rmse(scenario: Scenario, snr_list_db: Sequence[float],
                     n_trials: int,
                     mode: Union[EstimationMode, str] = EstimationMode.ETM,
                     base_seed: int = 0,
                     synthesis: Union[SynthesisMode, str] = SynthesisMode.EXACT_DELAY,
                     grids: Optional[EstimationGrids] = None,
                     tolerances: Tolerances = Tolerances()) -> SweepResult:
    if n_trials < 1:
        raise ValueError('n_trials must be at least 1, got {}'.format(
            n_trials))
    mode = EstimationMode(mode)
    validate_scenario(scenario)
    xi = build_xi(scenario.pattern) if mode is EstimationMode.ETM else None

    points = []
    for snr_db in snr_list_db:
        noisy = replace(scenario, sigma2=calibrate_sigma2(scenario, snr_db))
        trials = [
            run_scenario(noisy, mode, base_seed + t, synthesis,
                         grids=grids, tolerances=tolerances, xi=xi,
                         raise_errors=False)
            for t in range(n_trials)
        ]
        estimated = [t for t in trials if t.estimated]
        n_failed = len(trials) - len(estimated)
        if n_failed:
            logger.warning('SNR %s dB: %d of %d trials failed to estimate',
                           snr_db, n_failed, n_trials)

        point = SweepPoint(
            snr_db=float(snr_db),
            rmse_freq_hz=rmse([t.freq_errors for t in estimated]),
            rmse_doa_deg=rmse([t.doa_errors for t in estimated]),
            n_trials=n_trials,
            n_estimated=len(estimated),
            n_success=sum(t.success for t in trials),
            median_freq_hz=_median_rmse([t.freq_errors for t in estimated]),
            median_doa_deg=_median_rmse([t.doa_errors for t in estimated]),
        )
        logger.info('SNR %s dB: RMSE %.4g Hz / %.4g deg, success %.2f',
                    snr_db, point.rmse_freq_hz, point.rmse_doa_deg,
                    point.success_rate)
        points.append(point)

    return SweepResult(points=tuple(points), mode=mode)


def _median_rmse(errors) -> float:
    if not errors:
        return float('nan')
    return float(np.median([rmse([e]) for e in errors]))


def _format(value: float) -> str:
    return repr(float(value))


@singledispatch
def export_csv(result, path) -> None:
    raise TypeError('Cannot export {!r} to CSV'.format(type(result).__name__))


@export_csv.register(SweepResult)
def _export_sweep(result: SweepResult, path) -> None:
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(
            ['snr_db', 'rmse_freq_hz', 'rmse_doa_deg', 'n_trials',
             'success_rate'])
        for point in result.points:
            writer.writerow([
                _format(point.snr_db),
                _format(point.rmse_freq_hz),
                _format(point.rmse_doa_deg),
                point.n_trials,
                _format(point.success_rate),
            ])


@export_csv.register(TrialResult)
def _export_trial(result: TrialResult, path) -> None:
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['k', 'f_true', 'f_hat', 'theta_true', 'theta_hat'])
        if not result.estimated:
            return
        for k, (source, (f_hat, theta_hat)) in enumerate(
                zip(result.matched_truth, result.estimates.pairs), 1):
            writer.writerow([
                k,
                _format(source.f_k),
                _format(f_hat),
                _format(source.theta_k),
                _format(theta_hat),
            ])
