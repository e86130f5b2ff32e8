"""Request popularity models: uniform and Zipf over a ranked library."""

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Uniform:
    """Every file equally likely."""

    def weights(self, n_files: int) -> list[Fraction]:
        return [Fraction(1, n_files)] * n_files


@dataclass(frozen=True)
class Zipf:
    """p_i proportional to i^(-alpha), ranks 1..N assigned to file indices in order."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("zipf exponent must be > 0")

    def weights(self, n_files: int) -> list[Fraction]:
        # Raw weights are IEEE-754 floats (the true powers are irrational);
        # they are converted to exact rationals and normalized exactly, so
        # downstream enumeration weights sum to exactly 1.
        raw = [Fraction(float(r) ** -self.alpha) for r in range(1, n_files + 1)]
        total = sum(raw)
        return [w / total for w in raw]


PopularityModel = Uniform | Zipf
