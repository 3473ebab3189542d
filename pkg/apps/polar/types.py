"""
Result types shared by the polar iterations.
"""

from dataclasses import asdict, dataclass, field
from typing import Optional, Tuple

from apps.core.utils import DenseMatrix

QR = "qr"
CHOLESKY = "cholesky"
BRANCHES = (QR, CHOLESKY)

QDWH = "qdwh"
ZOLO = "zolo"
METHODS = (QDWH, ZOLO)


@dataclass(frozen=True)
class IterationRecord:
    """
    One pass of a polar iteration.

    For Zolo-PD, term_seconds holds the wall time of each group's term,
    combine_seconds the fixed-order reduction, and fallback_groups the
    groups whose Cholesky factorization fell back to the QR form.
    """

    index: int
    branch: str
    ell_before: float
    ell_after: float
    step_delta: float
    seconds: float
    term_seconds: Tuple[float, ...] = ()
    combine_seconds: float = 0.0
    fallback_groups: Tuple[int, ...] = ()

    @property
    def fallback(self) -> bool:
        return bool(self.fallback_groups)

    @property
    def load_balance(self) -> Optional[float]:
        """Slowest over fastest term time, None without term timings."""
        if not self.term_seconds or min(self.term_seconds) <= 0.0:
            return None
        return max(self.term_seconds) / min(self.term_seconds)

    def as_dict(self) -> dict:
        data = asdict(self)
        data["term_seconds"] = list(self.term_seconds)
        data["fallback_groups"] = list(self.fallback_groups)
        return data


@dataclass(frozen=True, eq=False)
class PolarResult:
    """A = q_p h with q_p orthonormal-column and h symmetric PSD."""

    q_p: DenseMatrix
    h: DenseMatrix
    iters: int
    log: Tuple[IterationRecord, ...] = field(default=())
    method: str = QDWH
    r: int = 1

    def stage_seconds(self, branch: str) -> float:
        """Total term time spent in one branch."""
        return sum(
            sum(record.term_seconds) if record.term_seconds else record.seconds
            for record in self.log
            if record.branch == branch
        )

    @property
    def combine_seconds(self) -> float:
        return sum(record.combine_seconds for record in self.log)
