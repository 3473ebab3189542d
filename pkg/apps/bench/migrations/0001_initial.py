# Generated by Django 5.1.5 on 2026-10-18 12:00

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="BenchRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True, db_index=True)),
                ("updated_at", models.DateTimeField(auto_now=True)),
                ("suite", models.CharField(db_index=True, max_length=32, verbose_name="Suite")),
                (
                    "schema_version",
                    models.PositiveSmallIntegerField(default=1, verbose_name="Schema Version"),
                ),
                ("matrix_id", models.CharField(db_index=True, max_length=200, verbose_name="Matrix")),
                ("m", models.PositiveIntegerField(verbose_name="Rows")),
                ("n", models.PositiveIntegerField(verbose_name="Columns")),
                ("kappa", models.FloatField(blank=True, null=True, verbose_name="Condition Number")),
                ("method", models.CharField(db_index=True, max_length=32, verbose_name="Method")),
                ("r", models.PositiveSmallIntegerField(default=1, verbose_name="Zolotarev Order")),
                ("nb", models.PositiveIntegerField(blank=True, null=True, verbose_name="Block Size")),
                ("workers", models.PositiveIntegerField(blank=True, null=True, verbose_name="Workers")),
                ("passes", models.PositiveIntegerField(blank=True, null=True, verbose_name="Passes")),
                (
                    "predicted_passes",
                    models.PositiveIntegerField(blank=True, null=True, verbose_name="Predicted Passes"),
                ),
                ("bounds_source", models.CharField(blank=True, max_length=16, verbose_name="Bounds Source")),
                ("res", models.FloatField(blank=True, null=True, verbose_name="Backward Error")),
                ("orth_l", models.FloatField(blank=True, null=True, verbose_name="Left Orthogonality")),
                ("orth_r", models.FloatField(blank=True, null=True, verbose_name="Right Orthogonality")),
                ("min_eigenvalue", models.FloatField(blank=True, null=True, verbose_name="Min Eigenvalue")),
                ("fallback_count", models.PositiveIntegerField(default=0, verbose_name="Cholesky Fallbacks")),
                ("flops_mults", models.BigIntegerField(blank=True, null=True, verbose_name="Multiplies")),
                ("flops_adds", models.BigIntegerField(blank=True, null=True, verbose_name="Adds")),
                (
                    "flops_reference",
                    models.BigIntegerField(blank=True, null=True, verbose_name="Reference Multiplies"),
                ),
                (
                    "equivalence_error",
                    models.FloatField(blank=True, null=True, verbose_name="Equivalence Error"),
                ),
                (
                    "status",
                    models.CharField(
                        choices=[("ok", "OK"), ("non_convergence", "Non-convergence")],
                        default="ok",
                        max_length=20,
                        verbose_name="Status",
                    ),
                ),
                ("qr_seconds", models.FloatField(default=0.0, verbose_name="QR Seconds")),
                ("chol_seconds", models.FloatField(default=0.0, verbose_name="Cholesky Seconds")),
                ("combine_seconds", models.FloatField(default=0.0, verbose_name="Combine Seconds")),
                ("eig_seconds", models.FloatField(default=0.0, verbose_name="Eigensolver Seconds")),
                ("total_seconds", models.FloatField(default=0.0, verbose_name="Total Seconds")),
                ("reference_seconds", models.FloatField(default=0.0, verbose_name="Reference Seconds")),
                ("load_balance", models.FloatField(blank=True, null=True, verbose_name="Load Balance")),
            ],
            options={
                "verbose_name": "Bench Run",
                "verbose_name_plural": "Bench Runs",
                "ordering": ["-created_at"],
                "indexes": [
                    models.Index(fields=["suite", "method"], name="bench_bench_suite_3c1d2a_idx"),
                    models.Index(fields=["matrix_id", "r"], name="bench_bench_matrix__8f4e71_idx"),
                ],
            },
        ),
    ]
