import json

from . import conf  # noqa: F401

from django.utils.translation import gettext_lazy as _
from rest_framework import serializers
from rest_framework.exceptions import ValidationError

from .exceptions import ScenarioError
from .mixins import NestedBuildMixin
from .scenario import (
    ArrayConstants,
    DelayPattern,
    Scenario,
    SourceKind,
    SourceParams,
    check_disjoint_bands,
)
from .synth import calibrate_sigma2


def positive(value):
    if value <= 0:
        raise ValidationError(_('Ensure this value is greater than 0.'))
    return value


class PatternField(serializers.Field):
    """
    A delay pattern given either as a list of integer coefficients or as a
    branch count M, resolved through the built-in minimum-redundancy table.
    """
    default_error_messages = {
        'invalid': _('Expected a list of integer delay coefficients or '
                     'an integer branch count.'),
    }

    def to_internal_value(self, data):
        try:
            if isinstance(data, int) and not isinstance(data, bool):
                return DelayPattern.mra(data)
            if isinstance(data, (list, tuple)) and all(
                    isinstance(c, int) and not isinstance(c, bool)
                    for c in data):
                return DelayPattern(tuple(data))
        except ScenarioError as exc:
            raise ValidationError(str(exc))
        self.fail('invalid')

    def to_representation(self, value):
        return list(value.coeffs)


class ArrayConstantsSerializer(NestedBuildMixin, serializers.Serializer):
    f_nyq = serializers.FloatField(validators=[positive])
    tau = serializers.FloatField(required=False, validators=[positive])
    d = serializers.FloatField(required=False, validators=[positive])
    c_light = serializers.FloatField(required=False, validators=[positive])

    class Meta:
        dataclass = ArrayConstants


class SourceSerializer(NestedBuildMixin, serializers.Serializer):
    f_k = serializers.FloatField(min_value=0)
    theta_k = serializers.FloatField(min_value=-90, max_value=90)
    W_k = serializers.FloatField(default=1.0, validators=[positive])
    kind = serializers.ChoiceField(
        choices=[kind.value for kind in SourceKind],
        default=SourceKind.COMPLEX_SINUSOID.value)
    B_k = serializers.FloatField(default=0.0, min_value=0)

    class Meta:
        dataclass = SourceParams

    def validate(self, attrs):
        sinusoid = attrs['kind'] == SourceKind.COMPLEX_SINUSOID.value
        if sinusoid and attrs['B_k'] != 0:
            raise ValidationError(
                {'B_k': [_('A complex sinusoid has no bandwidth.')]})
        if not sinusoid and attrs['B_k'] == 0:
            raise ValidationError(
                {'B_k': [_('Modulated sources need a positive bandwidth.')]})
        return attrs


class ScenarioSerializer(NestedBuildMixin, serializers.Serializer):
    array = ArrayConstantsSerializer(source='constants')
    pattern = PatternField()
    L = serializers.IntegerField(min_value=1)
    sources = SourceSerializer(many=True, allow_empty=False)
    snr_db = serializers.FloatField(required=False)
    sigma2 = serializers.FloatField(required=False, min_value=0)
    n_snapshots = serializers.IntegerField(min_value=1)
    dither_hz = serializers.FloatField(default=0.0, min_value=0)
    comment = serializers.CharField(required=False, allow_blank=True)

    class Meta:
        dataclass = Scenario

    def validate(self, attrs):
        if ('snr_db' in attrs) == ('sigma2' in attrs):
            raise ValidationError(
                _('Exactly one of snr_db and sigma2 must be given.'))

        f_nyq = attrs['constants']['f_nyq']
        errors = []
        for source in attrs['sources']:
            if source['f_k'] >= f_nyq:
                errors.append({'f_k': [
                    _('Carrier must lie below f_nyq={}.').format(f_nyq)]})
            else:
                errors.append({})
        if any(errors):
            raise ValidationError({'sources': errors})

        try:
            check_disjoint_bands(
                [SourceParams(**source) for source in attrs['sources']])
        except ScenarioError as exc:
            raise ValidationError({'sources': [str(exc)]})
        return attrs

    def build(self, validated_data):
        validated_data.pop('comment', None)
        snr_db = validated_data.pop('snr_db', None)
        if snr_db is not None:
            validated_data['sigma2'] = calibrate_sigma2(
                validated_data['sources'], snr_db)
        return super(ScenarioSerializer, self).build(validated_data)


def parse_scenario(data, **save_kwargs) -> Scenario:
    serializer = ScenarioSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.save(**save_kwargs)


def load_scenario(path, **save_kwargs) -> Scenario:
    with open(path) as f:
        try:
            data = json.load(f)
        except ValueError as exc:
            raise ValidationError({'json': [str(exc)]})
    return parse_scenario(data, **save_kwargs)
