"""
Views for the bench app.
Views para o app de benchmark.
"""

from django.db.models import Avg, Count
from django_filters.rest_framework import DjangoFilterBackend
from rest_framework import filters, permissions, viewsets
from rest_framework.decorators import action
from rest_framework.response import Response

from apps.core.pagination import StandardResultsSetPagination

from .filters import BenchRunFilter
from .models import BenchRun
from .serializers import BenchRunSerializer, MethodSummarySerializer


class BenchRunViewSet(viewsets.ReadOnlyModelViewSet):
    """
    ViewSet for persisted benchmark runs.
    ViewSet para execuções de benchmark persistidas.
    """

    queryset = BenchRun.objects.all()
    serializer_class = BenchRunSerializer
    permission_classes = [permissions.AllowAny]
    pagination_class = StandardResultsSetPagination
    filter_backends = [DjangoFilterBackend, filters.SearchFilter, filters.OrderingFilter]
    filterset_class = BenchRunFilter
    search_fields = ["matrix_id", "suite"]
    ordering_fields = ["created_at", "kappa", "res", "passes", "total_seconds"]
    ordering = ["-created_at"]

    @action(detail=False, methods=["get"])
    def summary(self, request):
        """
        Mean accuracy and pass count per method over the filtered runs.
        Média de precisão e de passes por método sobre as execuções filtradas.
        """
        queryset = self.filter_queryset(self.get_queryset())
        rows = (
            queryset.order_by()
            .values("method")
            .annotate(
                runs=Count("id"),
                mean_res=Avg("res"),
                mean_orth_l=Avg("orth_l"),
                mean_orth_r=Avg("orth_r"),
                mean_passes=Avg("passes"),
            )
            .order_by("method")
        )
        serializer = MethodSummarySerializer(rows, many=True)
        return Response({"success": True, "data": serializer.data})
