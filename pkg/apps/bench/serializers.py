"""
Serializers for the bench app.
"""

from rest_framework import serializers

from .models import BenchRun


class BenchRunSerializer(serializers.ModelSerializer):
    """
    Serializer for persisted benchmark runs.
    """

    class Meta:
        model = BenchRun
        fields = [
            "id",
            "suite",
            "schema_version",
            "matrix_id",
            "m",
            "n",
            "kappa",
            "method",
            "r",
            "nb",
            "workers",
            "passes",
            "predicted_passes",
            "bounds_source",
            "res",
            "orth_l",
            "orth_r",
            "min_eigenvalue",
            "fallback_count",
            "flops_mults",
            "flops_adds",
            "flops_reference",
            "equivalence_error",
            "status",
            "qr_seconds",
            "chol_seconds",
            "combine_seconds",
            "eig_seconds",
            "total_seconds",
            "reference_seconds",
            "load_balance",
            "created_at",
        ]
        read_only_fields = fields


class MethodSummarySerializer(serializers.Serializer):
    """
    Serializer for per-method aggregates.
    """

    method = serializers.CharField()
    runs = serializers.IntegerField()
    mean_res = serializers.FloatField(allow_null=True)
    mean_orth_l = serializers.FloatField(allow_null=True)
    mean_orth_r = serializers.FloatField(allow_null=True)
    mean_passes = serializers.FloatField(allow_null=True)
