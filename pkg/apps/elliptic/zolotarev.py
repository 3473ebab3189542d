"""
Scaled Zolotarev rational approximations to the sign function.

The type (2r+1, 2r) function on [ell, 1] is built from Jacobi elliptic
functions of modulus ell' = sqrt(1 - ell^2), scaled so that it maps [ell, 1]
into (0, 1] with Z(1) = 1. Composing these maps is what drives the Zolo-PD
iteration, and the same composition predicts its iteration count.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Union

import numpy as np

from apps.core.exceptions import DomainError, UnsupportedOrderError
from apps.core.utils import chebyshev_points

from .functions import complete_elliptic_K, jacobi_sn_cn_dn

logger = logging.getLogger(__name__)

MIN_ORDER = 1
MAX_ORDER = 8
DEFAULT_R_MAX = 8

# Interval edge used once the iterate is orthogonal to working precision.
ELL_CEILING = 1.0 - 1e-15
CONVERGED_EDGE = 1.0 - 1e-15
# Roundoff allowed on the guard points once the edge has converged.
GUARD_TOLERANCE = 4e-16
GUARD_POINTS = 17
MAX_PREDICTED_ITERATIONS = 32

# Condition numbers heading the columns of the reference iteration table.
KAPPA_GRID = (1.001, 1.01, 1.1, 1.2, 1.5, 2.0, 10.0, 1e2, 1e3, 1e5, 1e7, 1e16)


@dataclass(frozen=True, eq=False)
class ZolotarevParams:
    """
    Coefficients of one scaled Zolotarev function.

    c holds c_1..c_2r, a the partial-fraction weights a_1..a_r.
    """

    r: int
    ell: float
    c: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    m_hat: float

    @property
    def odd(self) -> np.ndarray:
        """c_1, c_3, ..., c_{2r-1}: the poles in x^2."""
        return self.c[0::2]

    @property
    def even(self) -> np.ndarray:
        """c_2, c_4, ..., c_2r: the zeros in x^2."""
        return self.c[1::2]


def check_order(r: int) -> int:
    if isinstance(r, bool) or int(r) != r or not MIN_ORDER <= r <= MAX_ORDER:
        raise UnsupportedOrderError(
            f"Zolotarev order must be an integer in {MIN_ORDER}..{MAX_ORDER}, got {r!r}."
        )
    return int(r)


def _check_ell(ell: float) -> float:
    ell = float(ell)
    if not math.isfinite(ell) or ell <= 0.0 or ell >= 1.0:
        raise DomainError(f"Interval edge ell must lie in (0, 1), got {ell!r}.")
    return ell


def zolotarev_coeffs(r: int, ell: float) -> ZolotarevParams:
    """
    Coefficients of the scaled type (2r+1, 2r) Zolotarev function on [ell, 1].

    Args:
        r: Order, 1..8
        ell: Lower edge of the interval, in (0, 1)

    Returns:
        ZolotarevParams with c strictly increasing, partial-fraction weights
        a_j = -prod_k(c_{2j-1} - c_{2k}) / prod_{k!=j}(c_{2j-1} - c_{2k-1})
        and the scaling m_hat = prod_j (1 + c_{2j-1}) / (1 + c_{2j}).
    """
    r = check_order(r)
    ell = _check_ell(ell)
    ell_prime = math.sqrt((1.0 - ell) * (1.0 + ell))
    quarter = complete_elliptic_K(ell_prime, kp=ell)

    c = np.empty(2 * r)
    for i in range(1, 2 * r + 1):
        sn, cn, _ = jacobi_sn_cn_dn(i * quarter / (2 * r + 1), ell_prime, kp=ell)
        c[i - 1] = (ell * sn / cn) ** 2
    if not np.all(c > 0.0) or not np.all(np.diff(c) > 0.0):
        raise DomainError(
            f"Zolotarev coefficients lost precision for r={r}, ell={ell!r}."
        )

    odd = c[0::2]
    even = c[1::2]
    m_hat = float(np.prod((1.0 + odd) / (1.0 + even)))

    a = np.empty(r)
    for j in range(r):
        numerator = np.prod(odd[j] - even)
        denominator = np.prod(np.delete(odd[j] - odd, j))
        a[j] = -numerator / denominator

    return ZolotarevParams(r=r, ell=ell, c=c, a=a, m_hat=m_hat)


def zolotarev_eval(x: Union[float, np.ndarray], p: ZolotarevParams):
    """
    Evaluate the scaled Zolotarev function in product form.

    Args:
        x: Scalar or array of real points
        p: Coefficients from zolotarev_coeffs

    Returns:
        m_hat * x * prod_j (x^2 + c_2j) / (x^2 + c_{2j-1}), shaped like x
    """
    values = np.asarray(x, dtype=np.float64)
    squares = (values * values)[..., np.newaxis]
    ratio = np.prod((squares + p.even) / (squares + p.odd), axis=-1)
    result = p.m_hat * values * ratio
    if np.ndim(x) == 0:
        return float(result)
    return result


def zolotarev_eval_partial_fraction(x: Union[float, np.ndarray], p: ZolotarevParams):
    """Evaluate m_hat * x * (1 + sum_j a_j / (x^2 + c_{2j-1}))."""
    values = np.asarray(x, dtype=np.float64)
    squares = (values * values)[..., np.newaxis]
    total = 1.0 + np.sum(p.a / (squares + p.odd), axis=-1)
    result = p.m_hat * values * total
    if np.ndim(x) == 0:
        return float(result)
    return result


def ell_update(p: ZolotarevParams) -> float:
    """Image of the lower interval edge, Z(ell; ell), capped at 1."""
    return min(zolotarev_eval(p.ell, p), 1.0)


def clamp_ell(ell: float) -> float:
    """Keep an interval edge inside the open domain of zolotarev_coeffs."""
    return min(float(ell), ELL_CEILING)


@lru_cache(maxsize=1024)
def predict_iterations(kappa: float, r: int) -> int:
    """
    Number of Zolotarev compositions needed to map [1/kappa, 1] into
    [1 - 1e-15, 1].

    The image of [ell, 1] is tracked through its lower edge, with a
    Chebyshev-point guard in case the image is not monotone near 1.

    Args:
        kappa: Condition number, at least 1
        r: Order, 1..8

    Returns:
        The smallest such composition count k
    """
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa < 1.0:
        raise DomainError(f"Condition number must be >= 1, got {kappa!r}.")
    r = check_order(r)

    ell = clamp_ell(1.0 / kappa)
    points = chebyshev_points(ell, 1.0, GUARD_POINTS)
    for k in range(1, MAX_PREDICTED_ITERATIONS + 1):
        p = zolotarev_coeffs(r, ell)
        points = zolotarev_eval(points, p)
        edge = ell_update(p)
        if edge >= CONVERGED_EDGE and float(points.min()) >= CONVERGED_EDGE - GUARD_TOLERANCE:
            return k
        ell = clamp_ell(max(edge, ell))
    raise DomainError(f"No convergence predicted for kappa={kappa!r}, r={r}.")


@dataclass(frozen=True)
class RPolicy:
    """How choose_r picks the order: from the prediction table or fixed."""

    kind: str = "table"
    r: int = 0

    def __post_init__(self):
        if self.kind not in ("table", "fixed"):
            raise DomainError(f"Unknown r policy {self.kind!r}.")
        if self.kind == "fixed":
            check_order(self.r)

    @classmethod
    def table(cls) -> "RPolicy":
        return cls("table")

    @classmethod
    def fixed(cls, r: int) -> "RPolicy":
        return cls("fixed", r)

    @classmethod
    def parse(cls, text: str) -> "RPolicy":
        """Parse 'table' or 'fixed:K'."""
        text = text.strip().lower()
        if text == "table":
            return cls.table()
        kind, _, value = text.partition(":")
        if kind == "fixed" and value.strip().isdigit():
            return cls.fixed(int(value))
        raise DomainError(f"r policy must be 'table' or 'fixed:K', got {text!r}.")

    def __str__(self):
        return "table" if self.kind == "table" else f"fixed:{self.r}"


class RChoice(NamedTuple):
    r: int
    predicted_iters: int


def choose_r(kappa: float, r_max: int = DEFAULT_R_MAX, policy: RPolicy = RPolicy()) -> RChoice:
    """
    Pick the Zolotarev order for a matrix of condition number kappa.

    Under the table policy this is the smallest r <= r_max predicted to
    converge in at most two passes, else r_max itself.
    """
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa < 1.0:
        raise DomainError(f"Condition number must be >= 1, got {kappa!r}.")
    if policy.kind == "fixed":
        return RChoice(policy.r, predict_iterations(kappa, policy.r))

    r_max = check_order(r_max)
    for r in range(MIN_ORDER, r_max + 1):
        k = predict_iterations(kappa, r)
        if k <= 2:
            return RChoice(r, k)
    return RChoice(r_max, predict_iterations(kappa, r_max))


def iteration_table(
    kappas: Iterable[float] = KAPPA_GRID, orders: Iterable[int] = range(1, MAX_ORDER + 1)
) -> dict:
    """Predicted iteration counts keyed by (r, kappa)."""
    kappas = tuple(kappas)
    return {(r, kappa): predict_iterations(kappa, r) for r in orders for kappa in kappas}
