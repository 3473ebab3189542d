"""
Backward error and orthogonality of a computed SVD.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from apps.core.exceptions import ShapeError
from apps.core.utils import as_dense, orthogonality_defect
from apps.linalg.kernels import two_norm_estimate


@dataclass(frozen=True)
class SvdMetrics:
    res: float
    orth_l: float
    orth_r: float
    # Smallest eigenvalue of H before clamping at zero.
    min_eigenvalue: Optional[float] = None

    def as_dict(self) -> dict:
        return asdict(self)


def metrics(a, u, sigma, v) -> SvdMetrics:
    """
    res = ||A - U diag(sigma) V^T||_F / ||A||_2, orth_l = ||I - U^T U||_F / n,
    orth_r likewise for V.
    """
    a = as_dense(a, "A")
    u = as_dense(u, "U")
    v = as_dense(v, "V")
    sigma = np.asarray(sigma, dtype=np.float64).reshape(-1)
    m, n = a.shape
    k = sigma.shape[0]
    if u.shape != (m, k) or v.shape != (n, k):
        raise ShapeError(
            f"Factors U {u.shape}, sigma ({k},), V {v.shape} do not conform to A {a.shape}."
        )
    residual = a - (u * sigma) @ v.T
    norm = two_norm_estimate(a)
    res = float(np.linalg.norm(residual)) / norm if norm > 0.0 else float(np.linalg.norm(residual))
    return SvdMetrics(res=res, orth_l=orthogonality_defect(u), orth_r=orthogonality_defect(v))
