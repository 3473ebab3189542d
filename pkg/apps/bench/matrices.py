"""
Matrix ingestion (Matrix Market) and seeded synthetic test matrices.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from apps.core.exceptions import DomainError, MatrixMarketParseError, UsageError
from apps.core.utils import DenseMatrix

logger = logging.getLogger(__name__)

MATRIX_FILE = "matrix_market_file"
SYNTHETIC = "synthetic"

LOG_SPACED = "logspaced"
GAUSSIAN = "gaussian"
DISTRIBUTIONS = (LOG_SPACED, GAUSSIAN)

FORMATS = ("coordinate", "array")
FIELDS = ("real", "double", "integer")
SYMMETRIES = ("general", "symmetric", "skew-symmetric")

# Condition numbers of the sparse-collection and random test matrices.
CORPUS = {
    "nemeth03": 1.29,
    "fv1": 14.0,
    "linverse": 9.06e3,
    "bcsstk18": 3.46e11,
    "c-47": 3.16e8,
    "c-49": 6.02e8,
    "cvxbqp1": 1.09e11,
    "rand1": 3.97e7,
    "rand2": 1.24e7,
}
CORPUS_SIZE = 200
CORPUS_SEED = 1


@dataclass(frozen=True)
class MatrixSource:
    """
    Where a test matrix comes from: a Matrix Market file or a seeded generator.
    """

    kind: str
    path: Optional[Path] = None
    n: Optional[int] = None
    kappa: Optional[float] = None
    distribution: str = LOG_SPACED
    seed: int = 0
    name: Optional[str] = None
    densified: bool = True

    def __post_init__(self):
        if self.kind == MATRIX_FILE:
            if self.path is None:
                raise UsageError("A Matrix Market source needs a path.")
        elif self.kind == SYNTHETIC:
            if self.n is None or self.n < 2:
                raise DomainError(f"Synthetic matrices need n >= 2, got {self.n!r}.")
            if self.kappa is None or not math.isfinite(self.kappa) or self.kappa < 1.0:
                raise DomainError(f"Synthetic matrices need kappa >= 1, got {self.kappa!r}.")
            if self.distribution not in DISTRIBUTIONS:
                raise DomainError(f"Unknown distribution {self.distribution!r}, expected one of {DISTRIBUTIONS}.")
        else:
            raise UsageError(f"Unknown matrix source kind {self.kind!r}.")

    @classmethod
    def from_file(cls, path) -> "MatrixSource":
        return cls(MATRIX_FILE, path=Path(path))

    @classmethod
    def from_corpus(cls, name: str, n: int = CORPUS_SIZE, seed: int = CORPUS_SEED, distribution: str = LOG_SPACED):
        if name not in CORPUS:
            raise UsageError(f"Unknown corpus matrix {name!r}, expected one of {sorted(CORPUS)}.")
        return cls(SYNTHETIC, n=n, kappa=CORPUS[name], seed=seed, name=name, distribution=distribution)

    @classmethod
    def parse_synthetic(cls, text: str, distribution: str = LOG_SPACED) -> "MatrixSource":
        """
        Parse 'n,kappa,seed' or a corpus name.
        """
        text = text.strip()
        if text in CORPUS:
            return cls.from_corpus(text, distribution=distribution)
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 3:
            raise UsageError(f"--synthetic expects n,kappa,seed or a corpus name, got {text!r}.")
        try:
            n, kappa, seed = int(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError(f"--synthetic expects n,kappa,seed or a corpus name, got {text!r}.")
        return cls(SYNTHETIC, n=n, kappa=kappa, seed=seed, distribution=distribution)

    @property
    def matrix_id(self) -> str:
        if self.kind == MATRIX_FILE:
            return self.path.stem
        if self.name:
            return self.name
        return f"synthetic-n{self.n}-k{self.kappa:g}-s{self.seed}"

    def load(self) -> DenseMatrix:
        if self.kind == MATRIX_FILE:
            return read_matrix_market(self.path)
        return gen_synthetic(self.n, self.kappa, self.seed, self.distribution)


def _parse_banner(line: str):
    tokens = line.strip().lower().split()
    if len(tokens) != 5 or tokens[0] != "%%matrixmarket" or tokens[1] != "matrix":
        raise MatrixMarketParseError("malformed banner, expected '%%MatrixMarket matrix <format> <field> <symmetry>'", 1)
    _, _, fmt, field, symmetry = tokens
    if fmt not in FORMATS:
        raise MatrixMarketParseError(f"unsupported format {fmt!r}", 1)
    if field not in FIELDS:
        raise MatrixMarketParseError(f"unsupported field {field!r}, only real matrices are read", 1)
    if symmetry not in SYMMETRIES:
        raise MatrixMarketParseError(f"unsupported symmetry {symmetry!r}", 1)
    return fmt, symmetry


def _numbers(tokens, line_number, kinds):
    if len(tokens) != len(kinds):
        raise MatrixMarketParseError(f"expected {len(kinds)} fields, got {len(tokens)}", line_number)
    try:
        return [kind(token) for kind, token in zip(kinds, tokens)]
    except ValueError:
        raise MatrixMarketParseError(f"cannot parse {' '.join(tokens)!r}", line_number)


def _array_positions(m: int, n: int, symmetry: str):
    """Column-major positions in storage order; symmetric storage keeps the lower triangle."""
    for j in range(n):
        first = {"general": 0, "symmetric": j, "skew-symmetric": j + 1}[symmetry]
        for i in range(first, m):
            yield i, j


def read_matrix_market(path) -> DenseMatrix:
    """
    Read a real Matrix Market file into a dense column-major matrix.

    Coordinate duplicates are summed, and symmetric or skew-symmetric storage
    is expanded. Every parse error names the offending line.

    Args:
        path: File path

    Returns:
        The densified m x n matrix
    """
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not lines:
        raise MatrixMarketParseError("empty file", 1)
    fmt, symmetry = _parse_banner(lines[0])

    body = [
        (number, line.split())
        for number, line in enumerate(lines[1:], start=2)
        if line.strip() and not line.lstrip().startswith("%")
    ]
    if not body:
        raise MatrixMarketParseError("missing size line", len(lines))
    size_line, size_tokens = body[0]
    entries = body[1:]

    if fmt == "coordinate":
        m, n, nnz = _numbers(size_tokens, size_line, (int, int, int))
    else:
        m, n = _numbers(size_tokens, size_line, (int, int))
    if m < 1 or n < 1:
        raise MatrixMarketParseError(f"invalid size {m} x {n}", size_line)
    if symmetry != "general" and m != n:
        raise MatrixMarketParseError(f"{symmetry} matrix must be square, got {m} x {n}", size_line)

    dense = np.zeros((m, n), order="F")
    if fmt == "coordinate":
        if len(entries) != nnz:
            raise MatrixMarketParseError(f"expected {nnz} entries, found {len(entries)}", len(lines))
        for number, tokens in entries:
            i, j, value = _numbers(tokens, number, (int, int, float))
            if not (1 <= i <= m and 1 <= j <= n):
                raise MatrixMarketParseError(f"index ({i}, {j}) outside {m} x {n}", number)
            i, j = i - 1, j - 1
            if symmetry != "general" and i < j:
                raise MatrixMarketParseError(f"entry ({i + 1}, {j + 1}) above the diagonal in {symmetry} storage", number)
            if symmetry == "skew-symmetric" and i == j:
                raise MatrixMarketParseError("diagonal entry in skew-symmetric storage", number)
            dense[i, j] += value
            if symmetry == "symmetric" and i != j:
                dense[j, i] += value
            elif symmetry == "skew-symmetric":
                dense[j, i] -= value
    else:
        positions = list(_array_positions(m, n, symmetry))
        if len(entries) != len(positions):
            raise MatrixMarketParseError(f"expected {len(positions)} values, found {len(entries)}", len(lines))
        for (i, j), (number, tokens) in zip(positions, entries):
            (value,) = _numbers(tokens, number, (float,))
            dense[i, j] = value
            if symmetry == "symmetric":
                dense[j, i] = value
            elif symmetry == "skew-symmetric":
                dense[j, i] = -value

    if not np.all(np.isfinite(dense)):
        raise MatrixMarketParseError("non-finite entries", size_line)
    logger.info("Read %s: %d x %d %s %s", path.name, m, n, fmt, symmetry)
    return dense


def gen_synthetic(n: int, kappa: float, seed: int = 0, distribution: str = LOG_SPACED) -> DenseMatrix:
    """
    Seeded n x n test matrix.

    With the log-spaced distribution A = Q1 diag(sigma) Q2^T, sigma running
    from 1 down to 1/kappa and Q1, Q2 the QR factors of Gaussian matrices.
    The Gaussian distribution returns raw standard normal entries and
    ignores kappa.
    """
    source = MatrixSource(SYNTHETIC, n=int(n), kappa=float(kappa), seed=int(seed), distribution=distribution)
    rng = np.random.default_rng(source.seed)
    if source.distribution == GAUSSIAN:
        return np.asfortranarray(rng.standard_normal((source.n, source.n)))
    q1, _ = np.linalg.qr(rng.standard_normal((source.n, source.n)))
    q2, _ = np.linalg.qr(rng.standard_normal((source.n, source.n)))
    sigma = np.logspace(0.0, -math.log10(source.kappa), source.n)
    return np.asfortranarray((q1 * sigma) @ q2.T)
