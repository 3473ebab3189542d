"""Polar decomposition app configuration."""

from django.apps import AppConfig


class PolarConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.polar"
    verbose_name = "Polar decomposition"
