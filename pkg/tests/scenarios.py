"""
Reference scenarios shared by the test modules.
"""
from dataclasses import replace

import numpy as np

from subnyquist_doa.scenario import (
    ArrayConstants,
    DelayPattern,
    Scenario,
    SourceKind,
    SourceParams,
)

F_NYQ = 10e9
CARRIERS = (1.22e9, 2.77e9, 4.32e9, 6.54e9, 7.64e9, 8.48e9)
SIM1_DOAS = (45.0, 20.0, 0.0, -30.0, 10.0, -20.0)
SIM2_DOAS = (10.0, 20.0, 30.0, 30.0, 50.0, 80.0)
BANDWIDTH = 25e6


def sources(doas, kind=SourceKind.QPSK, count=None, W=1.0):
    B = 0.0 if kind is SourceKind.COMPLEX_SINUSOID else BANDWIDTH
    pairs = list(zip(CARRIERS, doas))[:count]
    return tuple(
        SourceParams(f_k=f, theta_k=theta, W_k=W, kind=kind, B_k=B)
        for f, theta in pairs)


def sim1(count=None, kind=SourceKind.QPSK, sigma2=0.0, n_snapshots=4096,
         pattern=(0, 1, 4, 6)):
    """
    f_nyq = 10 GHz, C = [0, 1, 4, 6], L = 400 (f_sub = B = 25 MHz).
    """
    return Scenario(
        constants=ArrayConstants(f_nyq=F_NYQ),
        pattern=DelayPattern(pattern),
        L=400,
        sources=sources(SIM1_DOAS, kind, count),
        sigma2=sigma2,
        n_snapshots=n_snapshots,
    )


def sim2(count=None, kind=SourceKind.COMPLEX_SINUSOID, sigma2=0.0,
         n_snapshots=1000, pattern=(0, 1, 4, 6)):
    """
    L = 40: every carrier aliases to a distinct multiple of f_sub / 25, so
    the sinusoids are exactly uncorrelated over a multiple of 25 snapshots.
    """
    return Scenario(
        constants=ArrayConstants(f_nyq=F_NYQ),
        pattern=DelayPattern(pattern),
        L=40,
        sources=sources(SIM2_DOAS, kind, count),
        sigma2=sigma2,
        n_snapshots=n_snapshots,
    )


def with_sigma2(scenario, sigma2):
    return replace(scenario, sigma2=sigma2)


def random_unitary(n, seed=0):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


SIM1_CONFIG = {
    'array': {'f_nyq': F_NYQ},
    'pattern': [0, 1, 4, 6],
    'L': 400,
    'sources': [
        {'f_k': f, 'theta_k': theta, 'W_k': 1.0, 'kind': 'qpsk',
         'B_k': BANDWIDTH}
        for f, theta in zip(CARRIERS, SIM1_DOAS)
    ],
    'snr_db': 10,
    'n_snapshots': 4096,
}


def near_wrap(f_k, sigma2=0.0, n_snapshots=1000):
    """
    Two sinusoids at L = 40, one of them at f_k next to the 0 / f_nyq wrap.
    """
    return Scenario(
        constants=ArrayConstants(f_nyq=F_NYQ),
        pattern=DelayPattern((0, 1, 4, 6)),
        L=40,
        sources=(
            SourceParams(f_k=f_k, theta_k=10.0),
            SourceParams(f_k=4.32e9, theta_k=30.0),
        ),
        sigma2=sigma2,
        n_snapshots=n_snapshots,
    )
