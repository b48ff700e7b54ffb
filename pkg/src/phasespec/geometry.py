"""Collective damping rate of two parallel dipoles."""

from __future__ import annotations

import math
from dataclasses import dataclass

# below this separation the closed forms lose digits to cancellation
SERIES_THRESHOLD = 1.0
_SERIES_TERMS = 12


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class AtomPairGeometry:
    """Separation ``k r12`` and cosine between dipole and interatomic axis."""

    kr12: float
    cos_theta: float = 0.0

    def __post_init__(self):
        if not self.kr12 > 0:
            raise DomainError(f"kr12 must be positive, got {self.kr12}")
        if abs(self.cos_theta) > 1:
            raise DomainError(f"|cos_theta| must be <= 1, got {self.cos_theta}")


def _sinc(x: float) -> float:
    if x < 1e-4:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return math.sin(x) / x


def _near_field(x: float) -> float:
    # (x cos x - sin x) / x**3 = sum_k (-1)**k 2k x**(2k-2) / (2k+1)!
    if x < SERIES_THRESHOLD:
        x2 = x * x
        total, power = 0.0, 1.0
        for k in range(1, _SERIES_TERMS + 1):
            total += (-1) ** k * 2 * k * power / math.factorial(2 * k + 1)
            power *= x2
        return total
    return math.cos(x) / x**2 - math.sin(x) / x**3


def collective_damping(geom: AtomPairGeometry) -> float:
    """Return ``gamma12 / gamma`` for the pair geometry.

    Examples
    --------
    >>> round(collective_damping(AtomPairGeometry(1e-4, 0.3)), 6)
    1.0
    """
    x = geom.kr12
    if not x > 0:
        raise DomainError(f"kr12 must be positive, got {x}")
    c2 = geom.cos_theta**2
    return 1.5 * ((1.0 - c2) * _sinc(x) + (1.0 - 3.0 * c2) * _near_field(x))
