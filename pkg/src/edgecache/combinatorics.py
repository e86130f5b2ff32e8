"""Exact combinatorial primitives: big-integer counts and rational values.

Everything here is exact. Probabilities and expected loads are represented
as ``fractions.Fraction`` (aliased ``ExactValue``); counts are plain Python
integers, which are arbitrary precision.
"""

import math
from fractions import Fraction
from functools import lru_cache

# All probabilities in this package are Fractions. Floating point only
# appears at the display boundary: the head terms of the load sums
# alternate in sign and grow like N^u, so floats would cancel away.
ExactValue = Fraction


def binomial(n: int, k: int) -> int:
    """C(n, k), with the convention C(n, k) = 0 for k < 0 or k > n.

    Out-of-range k silently zeroes a summand, which lets callers sum over
    rectangular index boxes without re-deriving tight bounds.
    """
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def factorial(n: int) -> int:
    """n! for n >= 0."""
    return math.factorial(n)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k).

    Number of partitions of an n-set into k non-empty blocks. Uses the
    additive recurrence S(n,k) = k*S(n-1,k) + S(n-1,k-1), so there is no
    cancellation (the alternating-sum formula is avoided on purpose).
    """
    if k < 0 or k > n:
        return 0
    if n == 0:
        return 1  # S(0,0)
    if k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def diff_zeros(m: int, n: int) -> int:
    """Difference of zeros: the number of surjections from an n-set onto an m-set.

    Equals m! * S(n, m), and also the alternating sum
    sum_{i=0..m} (-1)^i C(m,i) (m-i)^n; the factorial form is used because
    it cannot cancel.
    """
    if m < 0:
        return 0
    return math.factorial(m) * stirling2(n, m)
