"""
Pagination for the polar-svd API.
"""

from rest_framework.pagination import PageNumberPagination


class StandardResultsSetPagination(PageNumberPagination):
    """
    Page size for benchmark run listings.
    """

    page_size = 20
    page_size_query_param = "page_size"
    max_page_size = 100
