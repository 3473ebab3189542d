"""Parallel execution app configuration."""

from django.apps import AppConfig


class ParallelConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.parallel"
    verbose_name = "Parallel execution"
