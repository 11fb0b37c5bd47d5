import math

from rest_framework import serializers

from chargroup.characters import DirichletCharacter
from chargroup.quadruple import Quadruple
from moments.determinant import DetScanRecord
from moments.prediction import MomentReport
from mollifier.parameters import MODES, MollifierSpec
from runs.models import Record, Run


class ComplexField(serializers.Field):
    """A complex number as {"re": float, "im": float}."""

    default_error_messages = {
        "invalid": "Expected an object with numeric 're' and 'im' entries.",
    }

    def to_representation(self, value):
        value = complex(value)
        return {"re": float(value.real), "im": float(value.imag)}

    def to_internal_value(self, data):
        try:
            return complex(float(data["re"]), float(data["im"]))
        except (KeyError, TypeError, ValueError):
            self.fail("invalid")


class CharacterField(serializers.Field):
    default_error_messages = {
        "invalid": "Expected an object with 'modulus' and 'exponents'.",
    }

    def to_representation(self, value):
        return {"modulus": value.modulus, "exponents": list(value.exponents), "label": value.label}

    def to_internal_value(self, data):
        try:
            return DirichletCharacter(int(data["modulus"]), tuple(int(r) for r in data["exponents"]))
        except (KeyError, TypeError, ValueError):
            self.fail("invalid")


class QuadrupleSerializer(serializers.Serializer):
    q = serializers.IntegerField(min_value=2)
    D = serializers.ListField(child=serializers.IntegerField(min_value=1), min_length=4, max_length=4)
    chars = serializers.ListField(child=CharacterField(), min_length=4, max_length=4)
    t = serializers.FloatField()
    ell = serializers.ListField(child=serializers.IntegerField(min_value=1), min_length=2, max_length=2)

    def validate(self, attrs):
        try:
            attrs["quadruple"] = Quadruple(**attrs)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data):
        return validated_data["quadruple"]


class MomentReportSerializer(serializers.Serializer):
    quadruple = QuadrupleSerializer()
    brute_force = ComplexField()
    diagonal_term = ComplexField()
    swap_terms = serializers.DictField(child=ComplexField())
    method = serializers.CharField()
    afe_tolerance = serializers.FloatField()
    character_count = serializers.IntegerField(min_value=0)
    prediction = ComplexField(read_only=True)
    relative_residual = serializers.FloatField(read_only=True)

    def create(self, validated_data):
        quadruple = validated_data.pop("quadruple")["quadruple"]
        return MomentReport(quadruple=quadruple, **validated_data)


class DetScanRecordSerializer(serializers.Serializer):
    D = serializers.ListField(child=serializers.IntegerField(min_value=1))
    characters = serializers.ListField(child=serializers.CharField())
    q_residue = serializers.IntegerField(allow_null=True)
    det_modulus = serializers.FloatField()
    vacuous = serializers.BooleanField()
    precision = serializers.CharField()

    def create(self, validated_data):
        validated_data["D"] = tuple(validated_data["D"])
        validated_data["characters"] = tuple(validated_data["characters"])
        return DetScanRecord(**validated_data)


class FuzzRecordSerializer(serializers.Serializer):
    config = serializers.DictField()
    lhs = ComplexField()
    rhs = ComplexField()
    residual = serializers.FloatField()


class MultKResidualSerializer(serializers.Serializer):
    residual = serializers.FloatField()
    literal_residual = serializers.FloatField()
    lhs = ComplexField()
    rhs = ComplexField()


class ScanResultSerializer(serializers.Serializer):
    modulus = serializers.IntegerField()
    minimum = serializers.FloatField()
    method = serializers.CharField()


class VoronoiResultSerializer(serializers.Serializer):
    config = serializers.SerializerMethodField()
    lhs = ComplexField()
    rhs = ComplexField(source="rhs.value")
    main_terms = serializers.ListField(child=ComplexField(), source="rhs.main_terms")
    dual = ComplexField(source="rhs.dual")
    prefactor = ComplexField(source="rhs.prefactor")
    dual_cutoff = serializers.IntegerField(source="rhs.dual_cutoff")
    tail = serializers.FloatField(source="rhs.tail")
    quadrature_error = serializers.FloatField(source="rhs.quadrature_error")
    residual = serializers.FloatField()
    budget = serializers.FloatField()
    passed = serializers.BooleanField()

    def get_config(self, obj):
        return obj.config.as_dict()


class MollifierSpecSerializer(serializers.Serializer):
    q = serializers.IntegerField()
    k = serializers.IntegerField(min_value=1)
    K = serializers.IntegerField(read_only=True)
    beta = serializers.ListField(child=serializers.FloatField())
    ell = serializers.ListField(child=serializers.IntegerField(min_value=0))
    s = serializers.ListField(child=serializers.IntegerField(min_value=0))
    lam = serializers.FloatField()
    mode = serializers.ChoiceField(choices=list(MODES))
    floored = serializers.ListField(child=serializers.IntegerField(), required=False)
    lemma_margin = serializers.SerializerMethodField()

    def get_lemma_margin(self, obj):
        return obj.lemma_margin()

    def create(self, validated_data):
        try:
            return MollifierSpec(**validated_data)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))


class HolderCheckSerializer(serializers.Serializer):
    q = serializers.IntegerField()
    D = serializers.ListField(child=serializers.IntegerField())
    t = serializers.FloatField()
    nonvanishing = serializers.IntegerField()
    character_count = serializers.IntegerField()
    sixth_moments = serializers.ListField(child=serializers.FloatField())
    lhs = serializers.FloatField()
    rhs = serializers.FloatField()
    holds = serializers.BooleanField()


class RecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = Record
        fields = ["index", "kind", "anchor", "provenance_tag", "residual", "passed", "payload"]


class RunSerializer(serializers.ModelSerializer):
    records = RecordSerializer(many=True, read_only=True)
    failed_count = serializers.SerializerMethodField()

    class Meta:
        model = Run
        fields = [
            "id",
            "command",
            "parameters",
            "seed",
            "workers",
            "status",
            "schema_version",
            "output_path",
            "created_at",
            "finished_at",
            "failed_count",
            "records",
        ]

    def get_failed_count(self, obj):
        return obj.failed_records().count()


def finite_or_none(value):
    """Residuals stored on records and in JSON must be finite."""
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None
