"""
Multiply/add instrumentation for the factorization kernels.
"""

from dataclasses import dataclass


@dataclass
class FlopCounter:
    """
    Running totals of floating-point multiplies and adds.

    Divisions and square roots are booked as multiplies.
    """

    mults: int = 0
    adds: int = 0

    def matmul(self, rows: int, inner: int, cols: int) -> None:
        """Book a (rows x inner) @ (inner x cols) product."""
        self.mults += rows * inner * cols
        self.adds += rows * max(inner - 1, 0) * cols

    def update(self, count: int, mults_each: int = 1, adds_each: int = 1) -> None:
        """Book an elementwise operation over count entries."""
        self.mults += count * mults_each
        self.adds += count * adds_each

    def dot(self, length: int) -> None:
        self.mults += length
        self.adds += max(length - 1, 0)

    @property
    def total(self) -> int:
        return self.mults + self.adds

    def as_dict(self) -> dict:
        return {"mults": self.mults, "adds": self.adds}
