"""
Filters for the bench app.
"""

from django_filters import rest_framework as filters

from .models import BenchRun


class BenchRunFilter(filters.FilterSet):
    """
    Filter for benchmark runs.
    """

    min_kappa = filters.NumberFilter(field_name="kappa", lookup_expr="gte")
    max_kappa = filters.NumberFilter(field_name="kappa", lookup_expr="lte")
    matrix = filters.CharFilter(field_name="matrix_id", lookup_expr="icontains")
    converged = filters.BooleanFilter(method="filter_converged")

    class Meta:
        model = BenchRun
        fields = [
            "suite",
            "method",
            "matrix_id",
            "r",
            "min_kappa",
            "max_kappa",
            "converged",
        ]

    def filter_converged(self, queryset, name, value):
        if value:
            return queryset.filter(status="ok")
        return queryset.exclude(status="ok")
