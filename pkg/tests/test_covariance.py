import csv
import os
import tempfile
from dataclasses import replace

import numpy as np
import pytest
from django.test import SimpleTestCase

from subnyquist_doa.covariance import (
    Block,
    CovarianceSet,
    analytic_covariance,
    block,
    sample_covariance,
    write_covariance_csv,
)
from subnyquist_doa.exceptions import DegenerateSnapshots
from subnyquist_doa.manifold import ArrayManifold
from subnyquist_doa.scenario import unit_phases
from subnyquist_doa.synth import simulate_snapshots

from . import scenarios


def time_delay_matrix(scenario):
    omega, _ = unit_phases(scenario)
    manifold = ArrayManifold(scenario.constants, scenario.pattern.coeffs)
    return manifold.time_delay(omega)


class SampleCovarianceTest(SimpleTestCase):
    def test_single_snapshot_of_ones(self):
        cov = sample_covariance(np.ones((8, 1)))

        np.testing.assert_allclose(cov.full, np.ones((8, 8)))
        self.assertEqual(cov.n_used, 1)

    def test_zero_snapshots(self):
        cov = sample_covariance(np.zeros((8, 5)))
        np.testing.assert_array_equal(cov.full, np.zeros((8, 8)))

    def test_no_snapshots(self):
        with self.assertRaises(DegenerateSnapshots):
            sample_covariance(np.zeros((8, 0)))

    def test_rank_deficient_warns(self):
        with self.assertLogs('subnyquist_doa.covariance', 'WARNING'):
            sample_covariance(np.ones((8, 3)))

    def test_hermitian(self):
        rng = np.random.default_rng(0)
        data = rng.standard_normal((8, 32)) + 1j * rng.standard_normal((8, 32))
        cov = sample_covariance(data)

        np.testing.assert_array_equal(cov.full, cov.full.conj().T)
        np.testing.assert_allclose(cov.x_bar_x, cov.xx_bar.conj().T)

    def test_snapshot_order_does_not_matter(self):
        rng = np.random.default_rng(1)
        data = rng.standard_normal((8, 40)) + 1j * rng.standard_normal((8, 40))
        shuffled = data[:, rng.permutation(40)]

        np.testing.assert_allclose(sample_covariance(shuffled).full,
                                   sample_covariance(data).full,
                                   rtol=1e-12, atol=1e-12)

    def test_read_only(self):
        cov = sample_covariance(np.ones((4, 2)))
        with self.assertRaises(ValueError):
            cov.full[0, 0] = 2

    @pytest.mark.slow
    def test_qpsk_converges_to_analytic(self):
        scenario = scenarios.sim1()
        cov = sample_covariance(simulate_snapshots(scenario, seed=0))
        expected = analytic_covariance(scenario)

        relative = (np.linalg.norm(cov.full - expected.full)
                    / np.linalg.norm(expected.full))
        self.assertLess(relative, 0.1)


class AnalyticCovarianceTest(SimpleTestCase):
    def test_noise_only(self):
        scenario = scenarios.sim1(count=0, sigma2=1.0)

        np.testing.assert_allclose(analytic_covariance(scenario).full,
                                   np.eye(8))
        np.testing.assert_allclose(
            analytic_covariance(scenario, noise_scale=400).full,
            400 * np.eye(8))

    def test_single_source_rank(self):
        values = np.linalg.eigvalsh(
            analytic_covariance(scenarios.sim1(count=1)).full)

        self.assertAlmostEqual(values[-1], 8.0)
        np.testing.assert_allclose(values[:-1], 0, atol=1e-10)

    def test_block_structure(self):
        scenario = scenarios.sim1(sigma2=0.5)
        cov = analytic_covariance(scenario)
        a_t = time_delay_matrix(scenario)
        _, phi = unit_phases(scenario)
        W = np.diag(scenario.powers)
        D = np.diag(np.exp(-1j * phi))

        np.testing.assert_allclose(
            cov.xx, a_t @ W @ a_t.conj().T + 0.5 * np.eye(4), atol=1e-12)
        np.testing.assert_allclose(cov.xx, cov.x_bar_x_bar, atol=1e-12)
        np.testing.assert_allclose(
            cov.x_bar_x, a_t @ W @ D @ a_t.conj().T, atol=1e-12)
        np.testing.assert_allclose(
            cov.xx_bar, a_t @ W @ D.conj() @ a_t.conj().T, atol=1e-12)

    def test_eigenvalues(self):
        scenario = scenarios.sim2(count=3, sigma2=0.25)
        values = np.linalg.eigvalsh(analytic_covariance(scenario).full)

        np.testing.assert_allclose(values[:5], 0.25, atol=1e-10)
        self.assertTrue(np.all(values[5:] > 0.25 + 1e-3))
        self.assertGreaterEqual(values.min(), -1e-10)

    def test_source_order_does_not_matter(self):
        scenario = scenarios.sim1(sigma2=0.1)
        shuffled = replace(scenario, sources=scenario.sources[::-1])

        np.testing.assert_allclose(analytic_covariance(scenario).full,
                                   analytic_covariance(shuffled).full,
                                   atol=1e-12)


class BlockTest(SimpleTestCase):
    def test_quadrants(self):
        full = np.arange(16).reshape(4, 4)
        cov = CovarianceSet(full=full)

        np.testing.assert_array_equal(block(cov, Block.XX), [[0, 1], [4, 5]])
        np.testing.assert_array_equal(block(cov, 'XXbar'), [[2, 3], [6, 7]])
        np.testing.assert_array_equal(block(cov, 'XbarX'),
                                      [[8, 9], [12, 13]])
        np.testing.assert_array_equal(cov.x_bar_x_bar, [[10, 11], [14, 15]])

    def test_odd_size(self):
        with self.assertRaises(ValueError):
            CovarianceSet(full=np.eye(3))


class CovarianceCsvTest(SimpleTestCase):
    def test_layout(self):
        cov = analytic_covariance(scenarios.sim1(count=2, sigma2=0.1))

        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'cov.csv')
            write_covariance_csv(cov, path)
            with open(path) as f:
                rows = list(csv.reader(f))

        self.assertEqual(len(rows), 8)
        self.assertTrue(all(len(row) == 16 for row in rows))
        self.assertAlmostEqual(float(rows[0][0]), cov.full[0, 0].real)
        self.assertAlmostEqual(float(rows[0][3]), cov.full[0, 1].imag)
