# -*- coding: utf-8 -*-
"""
Signal synthesis: baseband sources, carrier modulation, the two-element
spatial phase, multi-coset delayed-branch sampling and receiver noise.
"""
import enum
import logging
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

import numpy as np
from scipy.signal import upfirdn

from .exceptions import (
    BandwidthExceedsSub,
    DegenerateSnapshots,
    ModeUnavailable,
)
from .manifold import ArrayManifold
from .scenario import Scenario, SourceKind, SourceParams, unit_phases

logger = logging.getLogger(__name__)

QPSK_ROLLOFF = 0.25
QPSK_SPAN = 8

SNAPSHOT_MAGIC = b'SNQSNAP1'


class SynthesisMode(str, enum.Enum):
    PHASE_MODEL = 'phase-model'
    EXACT_DELAY = 'exact-delay'


@dataclass(frozen=True, eq=False)
class NyquistTrace:
    """
    Modulated per-source streams at the Nyquist rate. Sample n of the
    trace is time (n - offset) * T, so every branch read n * L - c_m stays
    inside the buffer.
    """
    sources: np.ndarray
    offset: int

    @property
    def combined(self) -> np.ndarray:
        return self.sources.sum(axis=0)

    @property
    def length(self) -> int:
        return self.sources.shape[1]


@dataclass(frozen=True, eq=False)
class SnapshotMatrix:
    data: np.ndarray
    scenario: Optional[Scenario] = None
    seed: Optional[int] = None
    mode: Optional[SynthesisMode] = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        if data.ndim != 2 or data.shape[0] % 2 or data.shape[0] < 4:
            raise ValueError(
                'Snapshots must be a 2M x N matrix with M >= 2, '
                'got shape {}'.format(data.shape))
        if self.scenario is not None and data.shape[0] != 2 * self.scenario.M:
            raise ValueError('Expected {} rows for M={}, got {}'.format(
                2 * self.scenario.M, self.scenario.M, data.shape[0]))
        if data.shape[1] < 1:
            raise DegenerateSnapshots('A snapshot matrix needs N >= 1')
        if not np.all(np.isfinite(data)):
            raise ValueError('Snapshots contain non-finite entries')
        object.__setattr__(self, 'data', data)

    @property
    def M(self) -> int:
        return self.data.shape[0] // 2

    @property
    def N(self) -> int:
        return self.data.shape[1]

    @property
    def reference(self) -> np.ndarray:
        return self.data[:self.M]

    @property
    def second(self) -> np.ndarray:
        return self.data[self.M:]


def root_raised_cosine(beta: float, sps: int, span: int) -> np.ndarray:
    """
    Unit-energy root-raised-cosine taps, ``span`` symbols long.
    """
    t = np.arange(-span * sps // 2, span * sps // 2 + 1) / float(sps)
    taps = np.empty_like(t)

    at_zero = np.isclose(t, 0.0)
    at_singular = np.isclose(np.abs(4 * beta * t), 1.0)
    regular = ~(at_zero | at_singular)

    tr = t[regular]
    taps[regular] = (
        np.sin(np.pi * tr * (1 - beta))
        + 4 * beta * tr * np.cos(np.pi * tr * (1 + beta))
    ) / (np.pi * tr * (1 - (4 * beta * tr) ** 2))
    taps[at_zero] = 1 - beta + 4 * beta / np.pi
    taps[at_singular] = beta / np.sqrt(2) * (
        (1 + 2 / np.pi) * np.sin(np.pi / (4 * beta))
        + (1 - 2 / np.pi) * np.cos(np.pi / (4 * beta)))

    return taps / np.sqrt(np.sum(taps ** 2))


def gen_baseband(source: SourceParams, length: int, seed=None,
                 f_nyq: float = 1.0, L: Optional[int] = None) -> np.ndarray:
    """
    Complex baseband stream of ``length`` Nyquist-rate samples with
    average power W_k.

    ``seed`` may be an int, None or a ``numpy.random.Generator``; a
    generator is consumed in place.
    """
    rng = np.random.default_rng(seed)
    if L is not None and source.B_k > f_nyq / L:
        warnings.warn(
            'Source at {} Hz is {} Hz wide, wider than f_sub={} Hz'.format(
                source.f_k, source.B_k, f_nyq / L),
            BandwidthExceedsSub)

    if source.kind is SourceKind.COMPLEX_SINUSOID:
        return np.full(length, np.sqrt(source.W_k), dtype=complex)

    if source.kind is SourceKind.QPSK:
        symbol_rate = source.B_k / (1 + QPSK_ROLLOFF)
        sps = max(2, int(round(f_nyq / symbol_rate)))
        taps = root_raised_cosine(QPSK_ROLLOFF, sps, QPSK_SPAN)
        n_symbols = length // sps + QPSK_SPAN + 2
        symbols = np.exp(1j * (np.pi / 4 + np.pi / 2 * rng.integers(
            0, 4, n_symbols)))
        shaped = upfirdn(taps, symbols, up=sps)
        # Skip the filter transient
        start = taps.shape[0] - 1
        stream = shaped[start:start + length]
    else:
        white = (rng.standard_normal(length)
                 + 1j * rng.standard_normal(length)) / np.sqrt(2)
        spectrum = np.fft.fft(white)
        freqs = np.fft.fftfreq(length, d=1.0 / f_nyq)
        spectrum[np.abs(freqs) > source.B_k / 2.0] = 0
        stream = np.fft.ifft(spectrum)

    power = np.mean(np.abs(stream) ** 2)
    return stream * np.sqrt(source.W_k / power)


def build_trace(scenario: Scenario, seed=None) -> NyquistTrace:
    rng = np.random.default_rng(seed)
    constants = scenario.constants
    offset = scenario.pattern.coeffs[-1]
    length = scenario.n_snapshots * scenario.L + offset
    n = np.arange(length) - offset

    streams = np.zeros((scenario.K, length), dtype=complex)
    for k, source in enumerate(scenario.sources):
        carrier_phase = rng.uniform(0, 2 * np.pi)
        f_k = source.f_k
        if scenario.dither_hz and source.kind is SourceKind.COMPLEX_SINUSOID:
            f_k += rng.uniform(-scenario.dither_hz, scenario.dither_hz)
        baseband = gen_baseband(source, length, rng, constants.f_nyq,
                                scenario.L)
        # Reduce cycles mod 1 before scaling by 2 pi to keep the phase exact
        cycles = np.mod(f_k * constants.T * n, 1.0)
        streams[k] = baseband * np.exp(
            1j * (2 * np.pi * cycles + carrier_phase))

    return NyquistTrace(sources=streams, offset=offset)


def simulate_snapshots(scenario: Scenario,
                       mode: Union[SynthesisMode, str] = SynthesisMode.EXACT_DELAY,
                       seed: Optional[int] = None) -> SnapshotMatrix:
    mode = SynthesisMode(mode)
    if mode is SynthesisMode.EXACT_DELAY and \
            not scenario.constants.delay_is_nyquist:
        raise ModeUnavailable(
            'exact-delay synthesis needs tau = T, got tau={} T={}'.format(
                scenario.constants.tau, scenario.constants.T))

    rng = np.random.default_rng(seed)
    trace = build_trace(scenario, rng)
    omega, phi = unit_phases(scenario)
    spatial = np.exp(-1j * phi)
    coeffs = np.asarray(scenario.pattern.coeffs)
    N, L, M = scenario.n_snapshots, scenario.L, scenario.M
    sample_index = trace.offset + np.arange(N) * L

    if mode is SynthesisMode.PHASE_MODEL:
        s = trace.sources[:, sample_index]
        a_t = ArrayManifold(scenario.constants, coeffs).time_delay(omega)
        x = a_t @ s
        x_bar = a_t @ (spatial[:, np.newaxis] * s)
    else:
        branch_index = sample_index[np.newaxis, :] - coeffs[:, np.newaxis]
        delayed = trace.sources[:, branch_index]
        x = trace.combined[branch_index]
        x_bar = np.einsum('k,kmn->mn', spatial, delayed)

    noise = np.sqrt(scenario.sigma2 / 2.0) * (
        rng.standard_normal((2 * M, N)) + 1j * rng.standard_normal((2 * M, N)))
    data = np.vstack([x, x_bar]) + noise

    logger.debug('Synthesized %d x %d snapshots (%s, seed=%s)',
                 2 * M, N, mode.value, seed)
    return SnapshotMatrix(data=data, scenario=scenario, seed=seed, mode=mode)


def calibrate_sigma2(scenario: Union[Scenario, Iterable[SourceParams]],
                     target_snr_db: float) -> float:
    """
    Noise power per complex sample giving the requested per-branch SNR.
    """
    sources = getattr(scenario, 'sources', scenario)
    signal_power = float(sum(source.W_k for source in sources))
    return signal_power / 10 ** (target_snr_db / 10.0)


def write_snapshots(snapshots: SnapshotMatrix, path, L: int = 0) -> None:
    """
    Writes the 32-byte header (magic, M, N, L as little-endian uint64)
    followed by row-major interleaved little-endian float64 (re, im).
    """
    if not L and snapshots.scenario is not None:
        L = snapshots.scenario.L
    header = np.array([snapshots.M, snapshots.N, L], dtype='<u8')
    with open(path, 'wb') as f:
        f.write(SNAPSHOT_MAGIC)
        f.write(header.tobytes())
        f.write(np.ascontiguousarray(snapshots.data, dtype='<c16').tobytes())


def read_snapshots(path) -> Tuple[SnapshotMatrix, int]:
    with open(path, 'rb') as f:
        raw = f.read()
    if raw[:8] != SNAPSHOT_MAGIC:
        raise ValueError('{} is not a snapshot dump'.format(path))
    M, N, L = (int(v) for v in np.frombuffer(raw[8:32], dtype='<u8'))
    data = np.frombuffer(raw[32:], dtype='<c16')
    if data.shape[0] != 2 * M * N:
        raise ValueError('Truncated snapshot dump: expected {} samples, '
                         'found {}'.format(2 * M * N, data.shape[0]))
    return SnapshotMatrix(data=data.reshape(2 * M, N).copy()), L
