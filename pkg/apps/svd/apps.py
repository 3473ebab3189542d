"""Singular value decomposition app configuration."""

from django.apps import AppConfig


class SvdConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.svd"
    verbose_name = "Singular value decomposition"
