"""Elliptic functions app configuration."""

from django.apps import AppConfig


class EllipticConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.elliptic"
    verbose_name = "Elliptic functions"
