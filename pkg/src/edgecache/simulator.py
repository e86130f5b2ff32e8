"""Packet-level simulation of the placement and delivery protocols.

The protocol re-enactment works from the actual cached-fragment sets, not
from the closed-form counting identities, so it doubles as the runtime
oracle for them. Per-trial randomness comes from a counter-based generator
(Philox) keyed by the experiment seed with the trial index as the start
counter, so serial and parallel runs are bit-identical.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .load_analytic import Scenario, omega1
from .popularity import Uniform, Zipf

# user connectivity classes
B_ONLY = "B"
W_ONLY = "W"
BOTH = "BW"

MDS = "mds"
ECC = "ecc"
SCHEMES = (MDS, ECC)


@dataclass(frozen=True)
class Realization:
    """One sampled request vector: (user class, file index) per user."""

    requests: tuple[tuple[str, int], ...]

    @classmethod
    def from_class_files(cls, b=(), w=(), both=()) -> "Realization":
        reqs = [(B_ONLY, f) for f in b]
        reqs += [(W_ONLY, f) for f in w]
        reqs += [(BOTH, f) for f in both]
        return cls(tuple(reqs))

    def files_of(self, user_class: str) -> list[int]:
        return [f for c, f in self.requests if c == user_class]


@dataclass(frozen=True)
class OutcomeTally:
    """Occupancy statistics of one realization (see Alphabets for bounds)."""

    j: int  # distinct files requested by single-relay users
    y: int  # distinct files requested by B-only users
    k_b: int  # files requested by B-only users and by no W-only user
    k_w: int  # files requested by W-only users and by no B-only user
    k_1: int  # single-relay files not also requested by a dual user
    k_2: int  # dual-user files on top of the single-relay set
    z: int  # coded opportunities, min(k_b, k_w)


def tally(realization: Realization) -> OutcomeTally:
    """Exact set statistics of a realization."""
    d_b = set(realization.files_of(B_ONLY))
    d_w = set(realization.files_of(W_ONLY))
    d_2 = set(realization.files_of(BOTH))
    d_1 = d_b | d_w
    k_b = len(d_b - d_w)
    k_w = len(d_w - d_b)
    return OutcomeTally(
        j=len(d_1),
        y=len(d_b),
        k_b=k_b,
        k_w=k_w,
        k_1=len(d_1 - d_2),
        k_2=len(d_2 - d_1),
        z=min(k_b, k_w),
    )


@dataclass(frozen=True)
class PlacementMap:
    """Per-relay, per-file cached fragment (or coded-packet) index sets.

    Relays hold disjoint sets per file whenever the index space allows it;
    the edge-coded scheme wraps around once 2F > n_F because plain fragments
    only exist up to n_F, while the benchmark draws coded-packet indices
    from an unbounded space and never needs to overlap.
    """

    scheme: str
    n_fragments: int
    frag_b: tuple[frozenset[int], ...]
    frag_w: tuple[frozenset[int], ...]
    # per-file derived sizes, precomputed for the per-trial hot path
    only_b: tuple[int, ...]  # |Z_B \ Z_W|
    only_w: tuple[int, ...]  # |Z_W \ Z_B|
    sat_only: tuple[int, ...]  # n_F - |Z_B u Z_W|: fragments cached nowhere

    @classmethod
    def build(cls, scheme, n_fragments, frag_b, frag_w) -> "PlacementMap":
        frag_b = tuple(frozenset(s) for s in frag_b)
        frag_w = tuple(frozenset(s) for s in frag_w)
        only_b = tuple(len(b - w) for b, w in zip(frag_b, frag_w))
        only_w = tuple(len(w - b) for b, w in zip(frag_b, frag_w))
        sat = tuple(n_fragments - len(b | w) for b, w in zip(frag_b, frag_w))
        return cls(scheme, n_fragments, frag_b, frag_w, only_b, only_w, sat)

    @property
    def n_files(self) -> int:
        return len(self.frag_b)


def _file_sets(scheme: str, budget: int, n_fragments: int):
    """Deterministic per-file allocation: relay B from the front, W after it.

    For the edge-coded scheme the indices live in [0, n_F), so when the two
    budgets cannot fit disjointly the W set wraps back to the front; the
    benchmark's coded-packet indices are unbounded and never wrap.
    """
    b = frozenset(range(budget))
    if scheme == MDS or 2 * budget <= n_fragments:
        w = frozenset(range(budget, 2 * budget))
    else:
        w = frozenset(range(budget, n_fragments)) | frozenset(
            range(0, 2 * budget - n_fragments)
        )
    return b, w


def place_uniform(scenario: Scenario, scheme: str) -> PlacementMap:
    """Even placement: every file gets the same per-relay fragment budget."""
    f = scenario.fragments_per_file()
    n_f = scenario.n_fragments
    b, w = _file_sets(scheme, f, n_f)
    n = scenario.n_files
    return PlacementMap.build(scheme, n_f, (b,) * n, (w,) * n)


def popularity_budgets(scenario: Scenario) -> list[int]:
    """Per-file fragment budgets proportional to popularity mass.

    Largest-remainder rounding on exact rational quotas, capped at n_F per
    file, with any capped surplus redistributed down the popularity order.
    Ties break on the lower file index. Budgets sum to exactly M * n_F.
    """
    n, n_f = scenario.n_files, scenario.n_fragments
    total = scenario.cache_size * n_f
    weights = scenario.popularity.weights(n)
    quotas = [total * w for w in weights]
    budgets = [min(n_f, int(q)) for q in quotas]
    remaining = total - sum(budgets)
    # order: largest fractional remainder first, then rank order
    order = sorted(range(n), key=lambda i: (-(quotas[i] - int(quotas[i])), i))
    while remaining > 0:
        progressed = False
        for i in order:
            if remaining == 0:
                break
            if budgets[i] < n_f:
                budgets[i] += 1
                remaining -= 1
                progressed = True
        if not progressed:
            raise ValueError("cache budget exceeds total library size")
    return budgets


def place_popularity(scenario: Scenario, scheme: str) -> PlacementMap:
    """Popularity-weighted placement; reduces to place_uniform for equal masses."""
    budgets = popularity_budgets(scenario)
    n_f = scenario.n_fragments
    sets = [_file_sets(scheme, f, n_f) for f in budgets]
    return PlacementMap.build(
        scheme, n_f, tuple(s[0] for s in sets), tuple(s[1] for s in sets)
    )


def placement_for(scenario: Scenario, scheme: str) -> PlacementMap:
    if isinstance(scenario.popularity, Uniform):
        return place_uniform(scenario, scheme)
    return place_popularity(scenario, scheme)


def count_backhaul_mds(t: OutcomeTally, scenario: Scenario) -> int:
    """Benchmark packet count of a realization: (n_F - F) J + (n_F - 2F)^+ K2."""
    f = scenario.fragments_per_file()
    n_f = scenario.n_fragments
    return (n_f - f) * t.j + max(0, n_f - 2 * f) * t.k_2


def count_backhaul_ecc(t: OutcomeTally, scenario: Scenario) -> int:
    """Edge-coded packet count: (n_F - F)(Y + K_W) - omega1 Z + (n_F - 2F)^+ K2."""
    f = scenario.fragments_per_file()
    n_f = scenario.n_fragments
    return (
        (n_f - f) * (t.y + t.k_w)
        - omega1(scenario) * t.z
        + max(0, n_f - 2 * f) * t.k_2
    )


def count_backhaul(t: OutcomeTally, scenario: Scenario, scheme: str) -> int:
    if scheme == MDS:
        return count_backhaul_mds(t, scenario)
    if scheme == ECC:
        return count_backhaul_ecc(t, scenario)
    raise ValueError(f"unknown scheme {scheme!r}")


def _request_sets(realization: Realization):
    d_b, d_w, d_2 = set(), set(), set()
    for c, f in realization.requests:
        if c == B_ONLY:
            d_b.add(f)
        elif c == W_ONLY:
            d_w.add(f)
        else:
            d_2.add(f)
    return d_b, d_w, d_2


def simulate_protocol(
    realization: Realization,
    scenario: Scenario,
    scheme: str,
    placement: PlacementMap | None = None,
    collect: bool = False,
):
    """Execute the delivery protocol symbolically; return the packet count.

    With collect=True also returns the transmission list: ("frag", f, i) for
    a plain fragment, ("xor", (f, i), (g, j)) for a coded pair, and
    ("mds", f, i) for a fresh coded packet of the benchmark scheme.
    """
    if placement is None:
        placement = placement_for(scenario, scheme)
    if placement.scheme != scheme:
        raise ValueError(f"placement built for {placement.scheme!r}, not {scheme!r}")
    if (
        placement.n_fragments != scenario.n_fragments
        or placement.n_files != scenario.n_files
    ):
        raise ValueError("placement does not match scenario dimensions")

    d_b, d_w, d_2 = _request_sets(realization)
    d_1 = d_b | d_w
    aggregated = d_2 - d_1
    n_f = placement.n_fragments

    if scheme == MDS:
        count = 0
        for f in d_1:
            # one multicast stream of fresh coded packets per file; it must
            # cover the worst-off requester class
            need = 0
            if f in d_b:
                need = max(need, n_f - len(placement.frag_b[f]))
            if f in d_w:
                need = max(need, n_f - len(placement.frag_w[f]))
            if f in d_2:
                need = max(
                    need,
                    n_f - len(placement.frag_b[f]) - len(placement.frag_w[f]),
                )
            count += need
        for f in aggregated:
            count += max(
                0, n_f - len(placement.frag_b[f]) - len(placement.frag_w[f])
            )
        if not collect:
            return count
        packets = []
        for f in sorted(d_1 | aggregated):
            if f in d_1:
                need = max(
                    (n_f - len(placement.frag_b[f])) if f in d_b else 0,
                    (n_f - len(placement.frag_w[f])) if f in d_w else 0,
                    (n_f - len(placement.frag_b[f]) - len(placement.frag_w[f]))
                    if f in d_2
                    else 0,
                )
            else:
                need = max(
                    0, n_f - len(placement.frag_b[f]) - len(placement.frag_w[f])
                )
            # fresh indices start above every cached index of this file
            base = max(placement.frag_b[f] | placement.frag_w[f], default=-1) + 1
            packets.extend(("mds", f, base + i) for i in range(need))
        assert len(packets) == count
        return count, packets

    if scheme != ECC:
        raise ValueError(f"unknown scheme {scheme!r}")

    only_b, only_w, sat = placement.only_b, placement.only_w, placement.sat_only
    ex_b = sorted(d_b - d_w)
    ex_w = sorted(d_w - d_b)
    shared = d_b & d_w
    coded = 0
    plain = 0

    # stage 2a: a file wanted at both relays pairs its own complementary halves
    for f in shared:
        x = min(only_b[f], only_w[f])
        coded += x
        plain += (only_b[f] - x) + (only_w[f] - x) + sat[f]

    # stage 2b: greedy pairing of exclusive files across relays, sorted order
    n_pairs = min(len(ex_b), len(ex_w))
    for g, h in zip(ex_b[:n_pairs], ex_w[:n_pairs]):
        x = min(only_w[g], only_b[h])  # complementary fragments available
        coded += x
        plain += (sat[g] + only_w[g] - x) + (sat[h] + only_b[h] - x)

    # stage 3: everything else goes uncoded
    for g in ex_b[n_pairs:]:
        plain += sat[g] + only_w[g]  # = n_F - |Z_B(g)|
    for h in ex_w[n_pairs:]:
        plain += sat[h] + only_b[h]
    for f in aggregated:
        plain += sat[f]

    count = coded + plain
    if not collect:
        return count
    packets = _collect_ecc_packets(placement, ex_b, ex_w, shared, aggregated)
    assert len(packets) == count
    return count, packets


def _collect_ecc_packets(placement, ex_b, ex_w, shared, aggregated):
    """Materialize the edge-coded transmission list (test/reporting path)."""
    n_f = placement.n_fragments
    packets = []

    def missing_at_b(f):
        return sorted(set(range(n_f)) - placement.frag_b[f])

    def missing_at_w(f):
        return sorted(set(range(n_f)) - placement.frag_w[f])

    for f in sorted(shared):
        b_has = sorted(placement.frag_b[f] - placement.frag_w[f])
        w_has = sorted(placement.frag_w[f] - placement.frag_b[f])
        x = min(len(b_has), len(w_has))
        # W-cached fragment goes to relay B and vice versa
        packets.extend(
            ("xor", (f, w_has[i]), (f, b_has[i])) for i in range(x)
        )
        leftovers = set(b_has[x:]) | set(w_has[x:])
        leftovers |= set(range(n_f)) - placement.frag_b[f] - placement.frag_w[f]
        packets.extend(("frag", f, i) for i in sorted(leftovers))

    n_pairs = min(len(ex_b), len(ex_w))
    for g, h in zip(ex_b[:n_pairs], ex_w[:n_pairs]):
        g_from_w = sorted(placement.frag_w[g] - placement.frag_b[g])
        h_from_b = sorted(placement.frag_b[h] - placement.frag_w[h])
        x = min(len(g_from_w), len(h_from_b))
        packets.extend(
            ("xor", (h, h_from_b[i]), (g, g_from_w[i])) for i in range(x)
        )
        g_rest = sorted(set(missing_at_b(g)) - set(g_from_w[:x]))
        h_rest = sorted(set(missing_at_w(h)) - set(h_from_b[:x]))
        packets.extend(("frag", g, i) for i in g_rest)
        packets.extend(("frag", h, i) for i in h_rest)

    for g in ex_b[n_pairs:]:
        packets.extend(("frag", g, i) for i in missing_at_b(g))
    for h in ex_w[n_pairs:]:
        packets.extend(("frag", h, i) for i in missing_at_w(h))
    for f in sorted(aggregated):
        sat_frags = sorted(
            set(range(n_f)) - placement.frag_b[f] - placement.frag_w[f]
        )
        packets.extend(("frag", f, i) for i in sat_frags)
    return packets


# --- sampling and Monte Carlo ---------------------------------------------


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Philox stream for one trial: key = seed, 256-bit counter = trial * 2^64.

    Counter-based, so any partition of trials across workers reproduces the
    serial run exactly.
    """
    return np.random.Generator(np.random.Philox(key=seed, counter=trial << 64))


class _TrialStreams:
    """Reuses one Philox instance across trials by resetting its counter.

    Emits streams identical to trial_rng(seed, t) (asserted in tests) while
    skipping the per-trial bit-generator construction cost.
    """

    def __init__(self, seed: int):
        self._bg = np.random.Philox(key=seed)
        self._gen = np.random.Generator(self._bg)
        self._state = self._bg.state

    def rng(self, trial: int) -> np.random.Generator:
        st = self._state
        counter = st["state"]["counter"]
        counter[0] = counter[2] = counter[3] = 0
        counter[1] = trial  # counter words are little-endian: this is trial * 2^64
        st["buffer_pos"] = 4  # discard any buffered output
        st["has_uint32"] = 0
        st["uinteger"] = 0
        self._bg.state = st
        return self._gen


def _cdf_for(scenario: Scenario) -> np.ndarray | None:
    if isinstance(scenario.popularity, Uniform):
        return None
    weights = np.array(
        [float(w) for w in scenario.popularity.weights(scenario.n_files)]
    )
    cdf = np.cumsum(weights)
    cdf[-1] = 1.0  # guard the inverse-CDF lookup against rounding undershoot
    return cdf


def sample_realization(
    scenario: Scenario, rng: np.random.Generator, cdf: np.ndarray | None = None
) -> Realization:
    """Draw one i.i.d. request vector with the fixed class layout B, W, both."""
    pop = scenario.population
    if cdf is None and not isinstance(scenario.popularity, Uniform):
        cdf = _cdf_for(scenario)
    if cdf is None:
        files = rng.integers(0, scenario.n_files, size=pop.u)
    else:
        files = np.searchsorted(cdf, rng.random(pop.u), side="right")
    classes = [B_ONLY] * pop.u_b + [W_ONLY] * pop.u_w + [BOTH] * pop.u_2
    return Realization(tuple(zip(classes, files.tolist())))


@dataclass(frozen=True)
class LoadReport:
    """Monte-Carlo estimate of the average backhaul load."""

    scheme: str
    trials: int
    mean_load: float
    normalized_mean: float
    std_error: float  # nan when trials == 1
    seed: int


def monte_carlo(
    scenario: Scenario, scheme: str, trials: int, seed: int
) -> LoadReport:
    """Seeded Monte-Carlo estimate; bit-identical for a given (seed, trials)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    placement = placement_for(scenario, scheme)
    cdf = _cdf_for(scenario)
    streams = _TrialStreams(seed)
    total = 0
    total_sq = 0
    for t in range(trials):
        realization = sample_realization(scenario, streams.rng(t), cdf)
        c = simulate_protocol(realization, scenario, scheme, placement)
        total += c
        total_sq += c * c
    mean = Fraction(total, trials)
    if trials > 1:
        # squared standard error: sample variance / trials, all exact until sqrt
        se_sq = Fraction(
            total_sq * trials - total * total,
            trials * trials * (trials - 1),
        )
        se = math.sqrt(se_sq)
    else:
        se = math.nan
    return LoadReport(
        scheme=scheme,
        trials=trials,
        mean_load=float(mean),
        normalized_mean=float(mean / scenario.n_files),
        std_error=se,
        seed=seed,
    )
