"""Exact-expectation oracle by exhaustive enumeration of request vectors.

Arbiter for every formula dispute: it knows nothing about the closed forms,
it just walks all N^u class-labeled request vectors and weighs per-vector
statistics exactly.
"""

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .load_analytic import Scenario
from .occupancy import Population
from .popularity import PopularityModel, Uniform
from .simulator import B_ONLY, BOTH, W_ONLY, OutcomeTally, Realization, count_backhaul, tally

DEFAULT_MAX_STATES = 10**7

STATISTICS = ("J", "Y", "K_B", "K_W", "K_1", "K_2", "Z")


@dataclass(frozen=True)
class EnumerationBudget:
    """Refuses enumerations larger than max_states request vectors."""

    max_states: int = DEFAULT_MAX_STATES

    def check(self, pop: Population):
        states = pop.n_bins**pop.u
        if states > self.max_states:
            raise BudgetExceededError(
                f"enumeration needs {states} states "
                f"(N={pop.n_bins}, u={pop.u}) > budget {self.max_states}"
            )


class BudgetExceededError(ValueError):
    pass


def _tally_values(t) -> tuple[int, ...]:
    return (t.j, t.y, t.k_b, t.k_w, t.k_1, t.k_2, t.z)


@lru_cache(maxsize=256)
def _uniform_census(pop: Population) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Multiplicity of each tally tuple over all N^u equally likely vectors.

    Mixed-radix iteration, memory O(u); cached because the census is reused
    across every cache size and both schemes.
    """
    n = pop.n_bins
    census: Counter = Counter()
    classes = [B_ONLY] * pop.u_b + [W_ONLY] * pop.u_w + [BOTH] * pop.u_2
    for files in itertools.product(range(n), repeat=pop.u):
        t = tally(Realization(tuple(zip(classes, files))))
        census[_tally_values(t)] += 1
    return tuple(sorted(census.items()))


@lru_cache(maxsize=64)
def _weighted_census(
    pop: Population, popularity: PopularityModel
) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """Census with exact popularity weights instead of uniform multiplicities."""
    n = pop.n_bins
    weights = popularity.weights(n)
    census: dict[tuple[int, ...], Fraction] = {}
    classes = [B_ONLY] * pop.u_b + [W_ONLY] * pop.u_w + [BOTH] * pop.u_2
    for files in itertools.product(range(n), repeat=pop.u):
        w = Fraction(1)
        for f in files:
            w *= weights[f]
        t = tally(Realization(tuple(zip(classes, files))))
        key = _tally_values(t)
        census[key] = census.get(key, Fraction(0)) + w
    return tuple(sorted(census.items()))


def _census(scenario: Scenario) -> list[tuple[tuple[int, ...], Fraction]]:
    pop = scenario.population
    if isinstance(scenario.popularity, Uniform):
        denom = pop.n_bins**pop.u
        return [
            (vals, Fraction(mult, denom)) for vals, mult in _uniform_census(pop)
        ]
    return list(_weighted_census(pop, scenario.popularity))


def exact_expected_load(
    scenario: Scenario, scheme: str, budget: EnumerationBudget | None = None
) -> Fraction:
    """E[packet count] by full enumeration: sum of weight * per-vector count."""
    (budget or EnumerationBudget()).check(scenario.population)
    total = Fraction(0)
    for vals, w in _census(scenario):
        t = OutcomeTally(*vals)
        total += w * count_backhaul(t, scenario, scheme)
    return total


def exact_pmf(
    scenario: Scenario,
    statistic: str,
    conditioning: dict[str, int] | None = None,
    budget: EnumerationBudget | None = None,
) -> dict[int, Fraction]:
    """Exact (conditional) pmf of one occupancy statistic by enumeration.

    conditioning maps statistic names to required values, e.g. {"Y": 2}.
    """
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}")
    (budget or EnumerationBudget()).check(scenario.population)
    idx = STATISTICS.index(statistic)
    cond = [(STATISTICS.index(k), v) for k, v in (conditioning or {}).items()]
    acc: dict[int, Fraction] = {}
    mass = Fraction(0)
    for vals, w in _census(scenario):
        if any(vals[i] != v for i, v in cond):
            continue
        mass += w
        acc[vals[idx]] = acc.get(vals[idx], Fraction(0)) + w
    if mass == 0:
        raise ValueError(f"conditioning event {conditioning} has probability 0")
    return {v: p / mass for v, p in sorted(acc.items())}
