class SubNyquistError(Exception):
    """
    Base class for every error raised by subnyquist_doa
    """


class ScenarioError(SubNyquistError, ValueError):
    """
    The scenario (delay pattern, sources, array constants) is inconsistent
    """


class NotAscending(ScenarioError):
    pass


class FirstNotZero(ScenarioError):
    pass


class NonContiguousCoarray(ScenarioError):
    def __init__(self, coeffs, missing):
        self.coeffs = tuple(coeffs)
        self.missing = tuple(missing)
        super(NonContiguousCoarray, self).__init__(
            'Difference coarray of pattern {} is not contiguous, '
            'missing lags: {}'.format(list(self.coeffs), list(self.missing)))


class InvalidSource(ScenarioError):
    pass


class ModeUnavailable(ScenarioError):
    pass


class EstimationError(SubNyquistError):
    """
    The estimator could not produce a result from the given data
    """


class KTooLarge(EstimationError):
    def __init__(self, K, capacity):
        self.K = K
        self.capacity = capacity
        super(KTooLarge, self).__init__(
            'Cannot resolve K={} sources with a {}-dimensional manifold '
            '(needs K < {})'.format(K, capacity, capacity))


class TooFewPeaks(EstimationError):
    def __init__(self, found, K):
        self.found = found
        self.K = K
        super(TooFewPeaks, self).__init__(
            'Pseudo-spectrum has {} local maxima, {} requested'.format(
                found, K))


class NotHermitian(EstimationError):
    pass


class NonFinite(EstimationError):
    pass


class GridEmpty(EstimationError):
    pass


class DegenerateSnapshots(EstimationError):
    pass


class DimensionMismatch(EstimationError):
    pass


class BandwidthExceedsSub(UserWarning):
    """
    A source is wider than the per-branch sampling rate f_nyq / L,
    its aliased copies overlap
    """
