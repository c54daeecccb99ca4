import copy
import json
import os
import tempfile

from django.conf import settings
from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from subnyquist_doa.scenario import SourceKind
from subnyquist_doa.serializers import (
    ScenarioSerializer,
    SourceSerializer,
    load_scenario,
    parse_scenario,
)

from . import scenarios


def config(**overrides):
    data = copy.deepcopy(scenarios.SIM1_CONFIG)
    data.update(overrides)
    return data


def mixed_sources():
    return [
        {'f_k': 1e9, 'theta_k': 0},
        {'f_k': 2e9, 'theta_k': 10, 'kind': 'qpsk', 'B_k': 20e6},
        {'f_k': 3e9, 'theta_k': 20},
    ]


class ScenarioSerializerTest(SimpleTestCase):
    def test_create(self):
        serializer = ScenarioSerializer(data=config())
        serializer.is_valid(raise_exception=True)
        scenario = serializer.save()

        self.assertEqual(scenario.K, 6)
        self.assertEqual(scenario.pattern.coeffs, (0, 1, 4, 6))
        self.assertEqual(scenario.L, 400)
        self.assertEqual(scenario.constants.f_nyq, 10e9)
        self.assertEqual(scenario.constants.tau, 1e-10)
        self.assertIs(scenario.sources[0].kind, SourceKind.QPSK)
        self.assertAlmostEqual(scenario.sigma2, 0.6)

    def test_create_with_explicit_sigma2(self):
        data = config(sigma2=0.25)
        del data['snr_db']

        self.assertEqual(parse_scenario(data).sigma2, 0.25)

    def test_create_with_branch_count(self):
        scenario = parse_scenario(config(pattern=5))
        self.assertEqual(scenario.pattern.coeffs, (0, 1, 4, 7, 9))

    def test_comment_is_ignored(self):
        scenario = parse_scenario(config(comment='reference setup'))
        self.assertEqual(scenario.K, 6)

    def test_invalid_pattern(self):
        for pattern in ([0, 2, 1], [1, 2], 'abc', 17):
            serializer = ScenarioSerializer(data=config(pattern=pattern))
            self.assertFalse(serializer.is_valid())
            self.assertIn('pattern', serializer.errors)

    def test_noise_level_is_required_once(self):
        serializer = ScenarioSerializer(data=config(sigma2=0.1))
        self.assertFalse(serializer.is_valid())
        self.assertIn('non_field_errors', serializer.errors)

        data = config()
        del data['snr_db']
        serializer = ScenarioSerializer(data=data)
        self.assertFalse(serializer.is_valid())
        self.assertIn('non_field_errors', serializer.errors)

    def test_empty_sources(self):
        serializer = ScenarioSerializer(data=config(sources=[]))

        self.assertFalse(serializer.is_valid())
        self.assertIn('sources', serializer.errors)

    def test_nested_source_errors_are_positional(self):
        sources = mixed_sources()
        sources[1]['theta_k'] = 95
        serializer = ScenarioSerializer(data=config(sources=sources))

        self.assertFalse(serializer.is_valid())
        errors = serializer.errors['sources']
        self.assertEqual(errors[0], {})
        self.assertIn('theta_k', errors[1])
        self.assertEqual(errors[2], {})

    def test_carrier_above_nyquist(self):
        sources = mixed_sources()
        sources[2]['f_k'] = 12e9
        serializer = ScenarioSerializer(data=config(sources=sources))

        self.assertFalse(serializer.is_valid())
        errors = serializer.errors['sources']
        self.assertEqual(errors[:2], [{}, {}])
        self.assertIn('f_k', errors[2])

    def test_overlapping_bands(self):
        sources = mixed_sources()
        sources.append({'f_k': 2.005e9, 'theta_k': 30, 'kind': 'qpsk',
                        'B_k': 20e6})
        serializer = ScenarioSerializer(data=config(sources=sources))

        self.assertFalse(serializer.is_valid())
        self.assertIn('overlap', str(serializer.errors['sources'][0]))

    def test_invalid_array_constants(self):
        serializer = ScenarioSerializer(data=config(array={'f_nyq': -1}))

        self.assertFalse(serializer.is_valid())
        self.assertIn('f_nyq', serializer.errors['array'])

    def test_save_direct_nested_validation_error(self):
        serializer = ScenarioSerializer(data=config())
        serializer.is_valid(raise_exception=True)
        with self.assertRaises(ValidationError) as ctx:
            serializer.save(array={'tau': -1.0})

        self.assertEqual(
            ctx.exception.detail,
            {'array': {'non_field_errors': ['tau must be positive, got -1.0']}})

    def test_save_many_nested_validation_error(self):
        serializer = ScenarioSerializer(data=config(sources=mixed_sources()))
        serializer.is_valid(raise_exception=True)
        with self.assertRaises(ValidationError) as ctx:
            serializer.save(sources={'B_k': 0.0})

        self.assertEqual(
            ctx.exception.detail,
            {'sources': [
                {},
                {'non_field_errors': ['qpsk sources need a positive '
                                      'bandwidth']},
                {},
            ]})

    def test_build_error(self):
        sources = [{'f_k': 1e9, 'theta_k': 0, 'kind': 'bandlimited-noise',
                    'B_k': 2e10}]
        serializer = ScenarioSerializer(data=config(sources=sources))
        serializer.is_valid(raise_exception=True)

        with self.assertRaises(ValidationError) as ctx:
            serializer.save()
        self.assertIn('non_field_errors', ctx.exception.detail)

    def test_create_with_save_kwargs(self):
        scenario = parse_scenario(config(), array={'tau': 2e-10})

        self.assertEqual(scenario.constants.tau, 2e-10)
        self.assertFalse(scenario.constants.delay_is_nyquist)

    def test_create_with_save_kwargs_failed(self):
        serializer = ScenarioSerializer(data=config())
        serializer.is_valid(raise_exception=True)

        with self.assertRaises(TypeError):
            serializer.save(array=None)


class SourceSerializerTest(SimpleTestCase):
    def test_defaults(self):
        serializer = SourceSerializer(data={'f_k': 1e9, 'theta_k': -30})
        serializer.is_valid(raise_exception=True)
        source = serializer.save()

        self.assertEqual(source.W_k, 1.0)
        self.assertIs(source.kind, SourceKind.COMPLEX_SINUSOID)
        self.assertEqual(source.B_k, 0.0)

    def test_sinusoid_bandwidth(self):
        serializer = SourceSerializer(
            data={'f_k': 1e9, 'theta_k': 0, 'B_k': 1e6})

        self.assertFalse(serializer.is_valid())
        self.assertIn('B_k', serializer.errors)

    def test_modulated_bandwidth(self):
        serializer = SourceSerializer(
            data={'f_k': 1e9, 'theta_k': 0, 'kind': 'qpsk'})

        self.assertFalse(serializer.is_valid())
        self.assertIn('B_k', serializer.errors)

    def test_unknown_kind(self):
        serializer = SourceSerializer(
            data={'f_k': 1e9, 'theta_k': 0, 'kind': 'fm'})

        self.assertFalse(serializer.is_valid())
        self.assertIn('kind', serializer.errors)


class LoadScenarioTest(SimpleTestCase):
    def test_example_configs(self):
        expected = {'sim1.json': (6, 400), 'sim2.json': (6, 40),
                    'sim2_plain.json': (3, 40), 'sim2_nyquist.json': (6, 1)}

        for name, (K, L) in expected.items():
            scenario = load_scenario(os.path.join(settings.EXAMPLE_DIR, name))
            self.assertEqual((scenario.K, scenario.L), (K, L), msg=name)

    def test_malformed_json(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'broken.json')
            with open(path, 'w') as f:
                f.write('{"array": ')

            with self.assertRaises(ValidationError) as ctx:
                load_scenario(path)

        self.assertIn('json', ctx.exception.detail)

    def test_round_trip_through_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'config.json')
            with open(path, 'w') as f:
                json.dump(config(), f)

            scenario = load_scenario(path)

        self.assertEqual(scenario, parse_scenario(config()))

    def test_missing_file(self):
        with self.assertRaises(OSError):
            load_scenario('/nonexistent/config.json')
