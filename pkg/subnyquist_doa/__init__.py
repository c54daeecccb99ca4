__title__ = 'subnyquist-doa'
__version__ = '0.1.0'
__author__ = 'subnyquist-doa developers'
__license__ = 'BSD 2-Clause'
__copyright__ = 'Copyright 2026 subnyquist-doa developers'

# Version synonym
VERSION = __version__


from .scenario import (
    ArrayConstants, DelayPattern, Scenario, SourceKind, SourceParams,
    check_rate_condition, difference_coarray, unit_phases, validate_pattern,
)
from .synth import SnapshotMatrix, calibrate_sigma2, simulate_snapshots
from .covariance import CovarianceSet, analytic_covariance, sample_covariance
from .subspace import EstimateSet, jdf4ba
from .etm import build_xi, jdf4ba_etm
from .harness import monte_carlo_rmse, run_scenario, export_csv
