"""
URL patterns for the bench app.
Padrões de URL para o app de benchmark.
"""

from django.urls import include, path
from rest_framework.routers import DefaultRouter

from .views import BenchRunViewSet

router = DefaultRouter()
router.register("runs", BenchRunViewSet, basename="bench-run")

urlpatterns = [
    path("", include(router.urls)),
]
