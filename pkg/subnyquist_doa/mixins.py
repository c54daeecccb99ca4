# -*- coding: utf-8 -*-
from collections import OrderedDict, defaultdict

from . import conf  # noqa: F401

from django.utils.translation import gettext_lazy as _
from rest_framework import serializers
from rest_framework.exceptions import ValidationError
from rest_framework.settings import api_settings

from .exceptions import ScenarioError


class BaseNestedSerializer(serializers.Serializer):
    def _extract_relations(self, validated_data):
        relations = OrderedDict()

        # Remove nested fields from validated data for future manipulations
        for field_name, field in self.fields.items():
            if field.read_only:
                continue

            if isinstance(field, serializers.ListSerializer) and \
                    isinstance(field.child, serializers.Serializer):
                if field.source not in validated_data:
                    # Skip field if field is not required
                    continue

                validated_data.pop(field.source)
                relations[field_name] = (field.child, field.source, True)

            elif isinstance(field, serializers.Serializer):
                if field.source not in validated_data:
                    continue

                if validated_data.get(field.source) is None:
                    # Null nested values are passed through untouched
                    continue

                validated_data.pop(field.source)
                relations[field_name] = (field, field.source, False)

        return relations

    def _get_serializer_for_field(self, field, **kwargs):
        kwargs.update({
            'context': self.context,
        })
        return field.__class__(**kwargs)

    def _build_one(self, field, data, save_kwargs):
        serializer = self._get_serializer_for_field(field, data=data)
        serializer.is_valid(raise_exception=True)
        return serializer.save(**save_kwargs)

    def build_relations(self, validated_data, relations):
        for field_name, (field, field_source, many) in relations.items():
            if field_name != field_source:
                # Nested save kwargs were merged in under the field name
                validated_data.pop(field_name, None)
            related_data = self.get_initial()[field_name]
            save_kwargs = self._get_save_kwargs(field_name)

            if not many:
                try:
                    validated_data[field_source] = self._build_one(
                        field, related_data, save_kwargs)
                except ValidationError as exc:
                    raise ValidationError({field_name: exc.detail})
                continue

            built = []
            errors = []
            for data in related_data:
                try:
                    built.append(self._build_one(field, data, save_kwargs))
                    errors.append({})
                except ValidationError as exc:
                    errors.append(exc.detail)

            if any(errors):
                raise ValidationError({field_name: errors})

            validated_data[field_source] = tuple(built)

    def save(self, **kwargs):
        self._save_kwargs = defaultdict(dict, kwargs)

        return super(BaseNestedSerializer, self).save(**kwargs)

    def _get_save_kwargs(self, field_name):
        save_kwargs = self._save_kwargs[field_name]
        if not isinstance(save_kwargs, dict):
            raise TypeError(
                _("Arguments to nested serializer's `save` must be dict's")
            )

        return save_kwargs


class NestedBuildMixin(BaseNestedSerializer):
    """
    Builds immutable domain objects from nested data: every nested
    serializer is validated and saved first, then the parent is built
    from the resulting objects.

    The target type is named by ``Meta.dataclass``; override ``build`` when
    the validated data needs reshaping first. Errors raised by the domain
    types while building are reported as ``ValidationError``.

    Example of usage:
    ```
    class SourceSerializer(NestedBuildMixin, serializers.Serializer):
        f_k = serializers.FloatField()

        class Meta:
            dataclass = SourceParams


    class ScenarioSerializer(NestedBuildMixin, serializers.Serializer):
        sources = SourceSerializer(many=True)

        class Meta:
            dataclass = Scenario
    ```
    """
    def create(self, validated_data):
        relations = self._extract_relations(validated_data)

        # Build nested objects first, the parent needs them
        self.build_relations(validated_data, relations)

        try:
            return self.build(validated_data)
        except ScenarioError as exc:
            raise ValidationError({
                api_settings.NON_FIELD_ERRORS_KEY: [str(exc)],
            })

    def build(self, validated_data):
        return self.Meta.dataclass(**validated_data)
