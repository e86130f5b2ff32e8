"""Balls-into-bins occupancy probabilities for request patterns.

Bins are library files, balls are user requests. Single-relay users come in
two colors (black = relay B only, white = relay W only); users connected to
both relays throw a third color on top. Every pmf here is exact.
"""

from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import binomial, diff_zeros, factorial, stirling2


@dataclass(frozen=True)
class Population:
    """Library size and the user split across connectivity classes."""

    n_bins: int  # library size
    u_b: int  # users connected only to relay B
    u_w: int  # users connected only to relay W
    u_2: int  # users connected to both relays

    def __post_init__(self):
        if self.n_bins < 1:
            raise ValueError("n_bins must be >= 1")
        if min(self.u_b, self.u_w, self.u_2) < 0:
            raise ValueError("user counts must be >= 0")

    @property
    def u_1(self) -> int:
        return self.u_b + self.u_w

    @property
    def u(self) -> int:
        return self.u_1 + self.u_2


@dataclass(frozen=True)
class Alphabets:
    """Closed-form support bounds for the occupancy statistics of a population."""

    pop: Population

    @property
    def beta_j(self) -> int:
        return min(self.pop.u_1, self.pop.n_bins)

    @property
    def beta_y(self) -> int:
        return min(self.pop.u_b, self.pop.n_bins)

    @property
    def beta_b(self) -> int:
        return min(self.pop.u_b, self.pop.n_bins)

    @property
    def beta_w(self) -> int:
        return min(self.pop.u_w, self.pop.n_bins - self.beta_b)

    @property
    def beta_1(self) -> int:
        return min(self.pop.u_1, self.pop.n_bins)

    @property
    def beta_2(self) -> int:
        return min(self.pop.u_2, self.pop.n_bins - self.beta_1)

    def alpha_b(self, y: int, k_w: int) -> int:
        return max(0, y - self.pop.u_w + k_w)

    def alpha_1(self, j: int) -> int:
        return max(0, j - self.pop.u_2)

    def z_max(self, y: int) -> int:
        return y

    # Conditional supports. The tabulated beta_2 / beta_w plug the *maximum*
    # of the conditioning variable into N - j (resp. N - y), which truncates
    # the support whenever the realized value is smaller; enumeration
    # confirms the bounds below, and the load sums use them.
    def k2_sup(self, j: int) -> int:
        return min(self.pop.u_2, self.pop.n_bins - j)

    def kw_sup(self, y: int) -> int:
        return min(self.pop.u_w, self.pop.n_bins - y)


def pmf_distinct(j: int, d: int, n_bins: int) -> Fraction:
    """Probability that d uniform independent requests cover exactly j distinct files.

    C(N,j) S(d,j) j! / N^d; zero outside 0 <= j <= min(d, N). The j = 0
    point mass appears only in the degenerate d = 0 case.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    num = binomial(n_bins, j) * stirling2(d, j) * factorial(max(j, 0))
    if num == 0:
        return Fraction(0)
    return Fraction(num, n_bins**d)


def _p_oc_num(j: int, k_b: int, k_w: int, u_w: int, n_bins: int) -> int:
    """Numerator of p_oc over the common denominator n_bins**u_w."""
    b_w = j - k_b + k_w  # bins the white balls must cover exactly
    if b_w < 0 or b_w > u_w:
        return 0
    return binomial(j, k_b) * binomial(n_bins - j, k_w) * diff_zeros(b_w, u_w)


def p_oc(j: int, k_b: int, k_w: int, u_w: int, n_bins: int) -> Fraction:
    """Two-color occupancy: j bins hold black balls; throw u_w white balls.

    Returns the probability that exactly k_b bins end up with only black
    balls and exactly k_w bins with only white balls. Infeasible (k_b, k_w)
    combinations return 0 rather than raising, so callers may sum over
    rectangular boxes.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    if not 0 <= j <= n_bins:
        raise ValueError(f"j={j} outside [0, {n_bins}]")
    if u_w < 0:
        raise ValueError("u_w must be >= 0")
    return Fraction(_p_oc_num(j, k_b, k_w, u_w, n_bins), n_bins**u_w)


def pmf_k2_given_j(k_2: int, j: int, pop: Population) -> Fraction:
    """Probability that dual-connected users add exactly k_2 new files.

    Conditioned on j distinct files already requested by single-relay users;
    the dual users' u_2 requests play the role of the white balls. Marginal
    over the count of single-relay files left untouched.
    """
    n = pop.n_bins
    if not 0 <= j <= n:
        raise ValueError(f"j={j} outside [0, {n}]")
    if k_2 < 0:
        return Fraction(0)
    num = sum(_p_oc_num(j, k_1, k_2, pop.u_2, n) for k_1 in range(0, j + 1))
    return Fraction(num, n**pop.u_2)


def pmf_kw_given_y(k_w: int, y: int, pop: Population) -> Fraction:
    """Probability that exactly k_w files are requested only at relay W.

    Conditioned on y distinct files requested by B-only users; the W-only
    users' u_w requests are the white balls. The effective lower bound on
    the summed-out black-only count is enforced by the zero-fill inside
    p_oc, so the sum may safely run over the whole 0..y range.
    """
    n = pop.n_bins
    if not 0 <= y <= n:
        raise ValueError(f"y={y} outside [0, {n}]")
    if k_w < 0:
        return Fraction(0)
    num = sum(_p_oc_num(y, k_b, k_w, pop.u_w, n) for k_b in range(0, y + 1))
    return Fraction(num, n**pop.u_w)


def pmf_z_given_y(z: int, y: int, pop: Population) -> Fraction:
    """Probability of exactly z coded-transmission opportunities given y.

    z = min(K_B, K_W): the smaller of the counts of files requested
    exclusively at one relay. Split over two disjoint events: {K_B = z,
    K_W >= z} and {K_B > z, K_W = z}. The ball count thrown against the y
    black bins is u_w, the number of W-only users; validated against
    exhaustive enumeration (see brute_force).
    """
    n = pop.n_bins
    if not 0 <= y <= n:
        raise ValueError(f"y={y} outside [0, {n}]")
    if z < 0 or z > y:
        return Fraction(0)
    u_w = pop.u_w
    num = sum(_p_oc_num(y, z, k_w, u_w, n) for k_w in range(z, n - y + 1))
    num += sum(_p_oc_num(y, k_b, z, u_w, n) for k_b in range(z + 1, y + 1))
    return Fraction(num, n**u_w)
