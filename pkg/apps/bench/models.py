"""
Bench models for the polar-svd service.
Modelos de benchmark para o serviço polar-svd.
"""

from dataclasses import fields

from django.db import models

from apps.core.models import TimeStampedModel

from .reports import SCHEMA_VERSION, STATUS_NON_CONVERGENCE, STATUS_OK, BenchRecord


class BenchRun(TimeStampedModel):
    """
    One persisted benchmark record.
    Um registro de benchmark persistido.
    """

    STATUS_CHOICES = [
        (STATUS_OK, "OK"),
        (STATUS_NON_CONVERGENCE, "Non-convergence"),
    ]

    suite = models.CharField("Suite", max_length=32, db_index=True)
    schema_version = models.PositiveSmallIntegerField("Schema Version", default=SCHEMA_VERSION)
    matrix_id = models.CharField("Matrix", max_length=200, db_index=True)
    m = models.PositiveIntegerField("Rows")
    n = models.PositiveIntegerField("Columns")
    kappa = models.FloatField("Condition Number", null=True, blank=True)
    method = models.CharField("Method", max_length=32, db_index=True)
    r = models.PositiveSmallIntegerField("Zolotarev Order", default=1)
    nb = models.PositiveIntegerField("Block Size", null=True, blank=True)
    workers = models.PositiveIntegerField("Workers", null=True, blank=True)
    passes = models.PositiveIntegerField("Passes", null=True, blank=True)
    predicted_passes = models.PositiveIntegerField("Predicted Passes", null=True, blank=True)
    bounds_source = models.CharField("Bounds Source", max_length=16, blank=True)
    res = models.FloatField("Backward Error", null=True, blank=True)
    orth_l = models.FloatField("Left Orthogonality", null=True, blank=True)
    orth_r = models.FloatField("Right Orthogonality", null=True, blank=True)
    min_eigenvalue = models.FloatField("Min Eigenvalue", null=True, blank=True)
    fallback_count = models.PositiveIntegerField("Cholesky Fallbacks", default=0)
    flops_mults = models.BigIntegerField("Multiplies", null=True, blank=True)
    flops_adds = models.BigIntegerField("Adds", null=True, blank=True)
    flops_reference = models.BigIntegerField("Reference Multiplies", null=True, blank=True)
    equivalence_error = models.FloatField("Equivalence Error", null=True, blank=True)
    status = models.CharField("Status", max_length=20, choices=STATUS_CHOICES, default=STATUS_OK)
    qr_seconds = models.FloatField("QR Seconds", default=0.0)
    chol_seconds = models.FloatField("Cholesky Seconds", default=0.0)
    combine_seconds = models.FloatField("Combine Seconds", default=0.0)
    eig_seconds = models.FloatField("Eigensolver Seconds", default=0.0)
    total_seconds = models.FloatField("Total Seconds", default=0.0)
    reference_seconds = models.FloatField("Reference Seconds", default=0.0)
    load_balance = models.FloatField("Load Balance", null=True, blank=True)

    class Meta:
        verbose_name = "Bench Run"
        verbose_name_plural = "Bench Runs"
        ordering = ["-created_at"]
        indexes = [
            models.Index(fields=["suite", "method"], name="bench_bench_suite_3c1d2a_idx"),
            models.Index(fields=["matrix_id", "r"], name="bench_bench_matrix__8f4e71_idx"),
        ]

    def __str__(self):
        return f"{self.suite} {self.matrix_id} {self.method} r={self.r}"

    @classmethod
    def from_record(cls, record: BenchRecord) -> "BenchRun":
        """
        Build an unsaved row from a report record.
        Cria uma linha não salva a partir de um registro do relatório.
        """
        data = {f.name: getattr(record, f.name) for f in fields(record) if f.name != "created_at"}
        return cls(**data)
