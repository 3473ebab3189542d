"""
Blocked Householder QR and the structured QR of the stacked matrix [X; sqrt(c) I].

Both factorizations share one kernel. Panels of nb columns are reduced with
unblocked reflectors, accumulated into the compact WY form I - V T V^T and
applied to the trailing columns with matrix products. The only difference
is the row window each panel works on: the dense factorization uses every
row below the panel, the structured one stops at row m + j1. Below that row
the identity block is still zero in every remaining column.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from apps.core.exceptions import DomainError, ShapeError
from apps.core.utils import DenseMatrix, as_dense

from .flops import FlopCounter

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_SIZE = 64


class QrResult(NamedTuple):
    q: DenseMatrix
    r: DenseMatrix


@dataclass(frozen=True)
class StructuredQrResult:
    """Blocks of the thin QR factorization [X; sqrt(c) I] = [q1; q2] r_factor."""

    q1: DenseMatrix
    q2: DenseMatrix
    r_factor: DenseMatrix


@dataclass
class _Panel:
    start: int
    end: int
    v: np.ndarray
    t: np.ndarray


def _reflector(x: np.ndarray, counter: FlopCounter):
    """
    Householder vector for x, with v[0] = 1 and H = I - tau v v^T.

    Returns (v, tau, beta) where H x = beta e_1.
    """
    alpha = float(x[0])
    sigma = float(np.linalg.norm(x[1:])) if x.shape[0] > 1 else 0.0
    counter.dot(x.shape[0] - 1)
    if sigma == 0.0:
        v = np.zeros_like(x)
        v[0] = 1.0
        return v, 0.0, alpha
    beta = -math.copysign(math.hypot(alpha, sigma), alpha)
    tau = (beta - alpha) / beta
    v = x / (alpha - beta)
    v[0] = 1.0
    counter.update(x.shape[0] - 1, adds_each=0)
    return v, tau, beta


def _triangular_factor(v: np.ndarray, taus: np.ndarray, counter: FlopCounter) -> np.ndarray:
    """T such that H_0 H_1 ... H_{b-1} = I - V T V^T (forward, columnwise)."""
    b = v.shape[1]
    t = np.zeros((b, b))
    for i in range(b):
        t[i, i] = taus[i]
        if i == 0 or taus[i] == 0.0:
            continue
        length = v.shape[0] - i
        z = v[i:, :i].T @ v[i:, i]
        counter.matmul(i, length, 1)
        t[:i, i] = -taus[i] * (t[:i, :i] @ z)
        counter.matmul(i, i, 1)
        counter.update(i, adds_each=0)
    return t


def _factor_panel(panel: np.ndarray, counter: FlopCounter, support_limit: int):
    length, b = panel.shape
    v = np.zeros((length, b))
    taus = np.zeros(b)
    for i in range(b):
        assert length - i <= support_limit, "reflector exceeds its row support"
        vec, tau, beta = _reflector(panel[i:, i], counter)
        if tau != 0.0 and i + 1 < b:
            trailing = panel[i:, i + 1 :]
            w = vec @ trailing
            counter.matmul(1, length - i, b - i - 1)
            trailing -= np.outer(tau * vec, w)
            counter.update((length - i) * (b - i - 1))
            counter.update(length - i, adds_each=0)
        panel[i, i] = beta
        panel[i + 1 :, i] = 0.0
        v[i:, i] = vec
        taus[i] = tau
    return v, taus


def _apply_transpose(v, t, block, counter: FlopCounter) -> None:
    """block <- (I - V T V^T)^T block, in place."""
    length, b = v.shape
    cols = block.shape[1]
    w = v.T @ block
    counter.matmul(b, length, cols)
    w = t.T @ w
    counter.matmul(b, b, cols)
    block -= v @ w
    counter.matmul(length, b, cols)
    counter.update(length * cols, mults_each=0)


def _apply(v, t, block, counter: FlopCounter) -> None:
    """block <- (I - V T V^T) block, in place."""
    length, b = v.shape
    cols = block.shape[1]
    w = v.T @ block
    counter.matmul(b, length, cols)
    w = t @ w
    counter.matmul(b, b, cols)
    block -= v @ w
    counter.matmul(length, b, cols)
    counter.update(length * cols, mults_each=0)


def _blocked_householder(
    work: np.ndarray,
    nb: int,
    window_end: Callable[[int, int], int],
    support_limit: int,
    counter: FlopCounter,
) -> QrResult:
    """
    Factor work (rows x n, overwritten) and return the thin Q and R.
    """
    rows, n = work.shape
    panels: List[_Panel] = []

    for start in range(0, n, nb):
        stop = min(start + nb, n)
        end = window_end(start, stop)
        v, taus = _factor_panel(work[start:end, start:stop], counter, support_limit)
        t = _triangular_factor(v, taus, counter)
        if stop < n:
            _apply_transpose(v, t, work[start:end, stop:], counter)
        panels.append(_Panel(start, end, v, t))

    q = np.zeros((rows, n), order="F")
    q[np.arange(n), np.arange(n)] = 1.0
    for panel in reversed(panels):
        _apply(panel.v, panel.t, q[panel.start : panel.end, panel.start :], counter)

    r = np.triu(work[:n, :n])
    signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
    r *= signs[:, np.newaxis]
    q *= signs[np.newaxis, :]
    return QrResult(np.asfortranarray(q), np.asfortranarray(r))


def _check_block_size(nb: Optional[int], n: int) -> int:
    nb = DEFAULT_BLOCK_SIZE if nb is None else int(nb)
    if nb < 1:
        raise DomainError(f"Block size must be at least 1, got {nb}.")
    return min(nb, n)


def householder_qr(
    matrix, nb: Optional[int] = None, counter: Optional[FlopCounter] = None
) -> QrResult:
    """
    Thin blocked Householder QR with a nonnegative R diagonal.

    Args:
        matrix: m x n matrix with m >= n
        nb: Panel width, defaults to 64 (clamped to n)
        counter: Optional FlopCounter that receives the operation count

    Returns:
        QrResult(q, r) with q m x n orthonormal and r n x n upper triangular
    """
    work = np.array(as_dense(matrix, "M"), order="F", copy=True)
    rows, n = work.shape
    if rows < n:
        raise ShapeError(f"householder_qr needs m >= n, got {work.shape}.")
    nb = _check_block_size(nb, n)
    counter = counter if counter is not None else FlopCounter()
    return _blocked_householder(work, nb, lambda start, stop: rows, rows, counter)


def stacked_matrix(x: DenseMatrix, c: float) -> DenseMatrix:
    """The explicit (m+n) x n matrix [X; sqrt(c) I]."""
    n = x.shape[1]
    return np.asfortranarray(np.vstack([x, math.sqrt(c) * np.eye(n)]))


def structured_qr(
    x, c: float, nb: Optional[int] = None, counter: Optional[FlopCounter] = None
) -> StructuredQrResult:
    """
    QR factorization of [X; sqrt(c) I] exploiting the identity block.

    Every reflector of the panel starting at column j0 lives in rows
    [j0, m + j1), so it touches at most m + nb rows, and the identity
    columns beyond the panel are not read until their own panel.

    Args:
        x: m x n matrix
        c: Positive shift
        nb: Panel width, defaults to 64 (clamped to n)
        counter: Optional FlopCounter that receives the operation count

    Returns:
        StructuredQrResult with q1 (m x n), q2 (n x n) and r_factor (n x n)
    """
    x = as_dense(x, "X")
    c = float(c)
    if not math.isfinite(c) or c <= 0.0:
        raise DomainError(f"Shift c must be positive, got {c!r}.")
    m, n = x.shape
    nb = _check_block_size(nb, n)
    counter = counter if counter is not None else FlopCounter()

    work = stacked_matrix(x, c)
    q, r = _blocked_householder(work, nb, lambda start, stop: m + stop, m + nb, counter)
    return StructuredQrResult(
        q1=np.asfortranarray(q[:m]), q2=np.asfortranarray(q[m:]), r_factor=r
    )
