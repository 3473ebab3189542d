"""
Partition of a worker budget into r groups, one per Zolotarev term.
"""

import os
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from django.conf import settings

from apps.core.exceptions import InfeasiblePlanError


@dataclass(frozen=True)
class ExecutionPlan:
    """
    Worker groups for one Zolotarev pass.

    reduction_order is a permutation of 0..r-1; the terms are summed in
    that order whatever order the groups finish in.
    """

    total_workers: int
    r: int
    group_sizes: Tuple[int, ...]
    reduction_order: Tuple[int, ...]

    def __post_init__(self):
        if self.r < 1:
            raise InfeasiblePlanError(f"A plan needs at least one group, got r={self.r}.")
        if len(self.group_sizes) != self.r or any(size < 1 for size in self.group_sizes):
            raise InfeasiblePlanError(f"Need {self.r} groups of at least one worker, got {self.group_sizes}.")
        if sum(self.group_sizes) != self.total_workers:
            raise InfeasiblePlanError(
                f"Group sizes {self.group_sizes} do not add up to {self.total_workers} workers."
            )
        if sorted(self.reduction_order) != list(range(self.r)):
            raise InfeasiblePlanError(f"Reduction order {self.reduction_order} is not a permutation.")

    def as_dict(self) -> dict:
        return {
            "total_workers": self.total_workers,
            "r": self.r,
            "group_sizes": list(self.group_sizes),
            "reduction_order": list(self.reduction_order),
        }


def plan_groups(
    total_workers: int, r: int, reduction_order: Optional[Sequence[int]] = None
) -> ExecutionPlan:
    """
    Split total_workers into r near-equal groups, larger groups first.

    Args:
        total_workers: Worker budget, at least r
        r: Number of groups
        reduction_order: Optional summation order, identity by default

    Returns:
        ExecutionPlan whose group sizes differ by at most one
    """
    if r < 1 or total_workers < r:
        raise InfeasiblePlanError(f"Cannot split {total_workers} workers into {r} groups.")
    base, remainder = divmod(total_workers, r)
    sizes = tuple(base + 1 if j < remainder else base for j in range(r))
    order = tuple(range(r)) if reduction_order is None else tuple(reduction_order)
    return ExecutionPlan(total_workers, r, sizes, order)


def resolve_workers(workers: Optional[int] = None) -> int:
    """
    Worker budget from the argument or POLAR_SVD_WORKERS, else the core count.
    """
    if workers is None:
        workers = getattr(settings, "POLAR_SVD_WORKERS", None) or os.cpu_count() or 1
    text = str(workers).strip()
    if isinstance(workers, bool) or not text.isdigit() or int(text) < 1:
        raise InfeasiblePlanError(f"Worker count must be a positive integer, got {workers!r}.")
    return int(text)


def default_plan(r: int, workers: Optional[int] = None) -> ExecutionPlan:
    """Plan over the configured budget, raised to r so every group has a worker."""
    return plan_groups(max(resolve_workers(workers), r), r)
