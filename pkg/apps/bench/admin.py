"""
Admin configuration for the bench app.
"""

from django.contrib import admin

from .models import BenchRun


@admin.register(BenchRun)
class BenchRunAdmin(admin.ModelAdmin):
    list_display = [
        "suite",
        "matrix_id",
        "method",
        "r",
        "kappa",
        "passes",
        "res",
        "status",
        "created_at",
    ]
    list_filter = ["suite", "method", "r", "status", "bounds_source"]
    search_fields = ["matrix_id"]
    readonly_fields = ["created_at", "updated_at", "schema_version"]
    date_hierarchy = "created_at"
