"""Built-in cross-validation suites: formulas vs the enumeration oracle.

Each suite walks a small exhaustive grid and returns a structured result;
the CLI validate subcommand prints one line per suite and exits non-zero if
any suite fails. Instances whose enumeration would exceed the state budget
are refused, not silently passed.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import brute_force
from .brute_force import BudgetExceededError, EnumerationBudget
from .load_analytic import (
    Scenario,
    ecc_load,
    ecc_load_compact,
    mds_load,
    mds_load_compact,
)
from .occupancy import (
    Alphabets,
    Population,
    p_oc,
    pmf_distinct,
    pmf_k2_given_j,
    pmf_kw_given_y,
    pmf_z_given_y,
)
from .simulator import (
    B_ONLY,
    BOTH,
    ECC,
    MDS,
    W_ONLY,
    Realization,
    count_backhaul,
    placement_for,
    sample_realization,
    simulate_protocol,
    tally,
    trial_rng,
)


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.name}: {self.checked} checks"
        if self.failures:
            line += f", {len(self.failures)} failures"
        if self.skipped:
            line += f", {len(self.skipped)} skipped (budget)"
        return line


def _populations(n_max: int, u_max: int):
    for n in range(1, n_max + 1):
        for u_b, u_w, u_2 in itertools.product(range(u_max + 1), repeat=3):
            if u_b + u_w + u_2 == 0:
                continue
            yield Population(n, u_b, u_w, u_2)


def _guard(budget: EnumerationBudget, pop: Population, result: CheckResult) -> bool:
    try:
        budget.check(pop)
        return True
    except BudgetExceededError as exc:
        result.skipped.append(str(exc))
        return False


def check_pmf_normalization(n_max=4, u_max=3) -> CheckResult:
    """Every conditional pmf sums to exactly 1 over its validated support."""
    result = CheckResult("pmf normalization")
    for pop in _populations(n_max, u_max):
        n = pop.n_bins
        ab = Alphabets(pop)
        if pop.u_1:
            total = sum(
                pmf_distinct(j, pop.u_1, n) for j in range(0, ab.beta_j + 1)
            )
            result.checked += 1
            if total != 1:
                result.failures.append(f"pmf_distinct sums to {total} for {pop}")
        for j in range(1, ab.beta_j + 1):
            total = sum(
                p_oc(j, k_b, k_w, pop.u_w, n)
                for k_b in range(0, j + 1)
                for k_w in range(0, n - j + 1)
            )
            result.checked += 1
            if total != 1:
                result.failures.append(f"p_oc sums to {total} for {pop}, j={j}")
            total = sum(
                pmf_k2_given_j(k_2, j, pop) for k_2 in range(0, ab.k2_sup(j) + 1)
            )
            result.checked += 1
            if total != 1:
                result.failures.append(
                    f"pmf_k2_given_j sums to {total} for {pop}, j={j}"
                )
        for y in range(1, ab.beta_y + 1):
            total = sum(
                pmf_kw_given_y(k_w, y, pop) for k_w in range(0, ab.kw_sup(y) + 1)
            )
            result.checked += 1
            if total != 1:
                result.failures.append(
                    f"pmf_kw_given_y sums to {total} for {pop}, y={y}"
                )
            total = sum(pmf_z_given_y(z, y, pop) for z in range(0, y + 1))
            result.checked += 1
            if total != 1:
                result.failures.append(
                    f"pmf_z_given_y sums to {total} for {pop}, y={y}"
                )
    return result


def check_pmf_oracle(n_max=4, u_max=3, budget=None) -> CheckResult:
    """Conditional pmfs equal the exact enumeration frequencies."""
    budget = budget or EnumerationBudget()
    result = CheckResult("pmf vs enumeration")
    for pop in _populations(n_max, u_max):
        if not _guard(budget, pop, result):
            continue
        n = pop.n_bins
        scenario = Scenario(n, n, 0, pop)
        if pop.u_1:
            for j, p in brute_force.exact_pmf(scenario, "J", budget=budget).items():
                result.checked += 1
                if p != pmf_distinct(j, pop.u_1, n):
                    result.failures.append(f"J pmf mismatch at {pop}, j={j}")
                k2_pmf = brute_force.exact_pmf(scenario, "K_2", {"J": j}, budget=budget)
                for k_2 in range(0, n + 1):
                    result.checked += 1
                    if k2_pmf.get(k_2, Fraction(0)) != pmf_k2_given_j(k_2, j, pop):
                        result.failures.append(
                            f"K_2 pmf mismatch at {pop}, j={j}, k_2={k_2}"
                        )
        if pop.u_b:
            for y in brute_force.exact_pmf(scenario, "Y", budget=budget):
                kw_pmf = brute_force.exact_pmf(scenario, "K_W", {"Y": y}, budget=budget)
                z_pmf = brute_force.exact_pmf(scenario, "Z", {"Y": y}, budget=budget)
                for k_w in range(0, n + 1):
                    result.checked += 1
                    if kw_pmf.get(k_w, Fraction(0)) != pmf_kw_given_y(k_w, y, pop):
                        result.failures.append(
                            f"K_W pmf mismatch at {pop}, y={y}, k_w={k_w}"
                        )
                for z in range(0, y + 1):
                    result.checked += 1
                    if z_pmf.get(z, Fraction(0)) != pmf_z_given_y(z, y, pop):
                        result.failures.append(
                            f"Z pmf mismatch at {pop}, y={y}, z={z}"
                        )
    return result


def check_load_oracle(n_max=4, u_max=3, budget=None) -> CheckResult:
    """Closed-form loads equal the enumeration oracle, all cache sizes."""
    budget = budget or EnumerationBudget()
    result = CheckResult("loads vs enumeration")
    for pop in _populations(n_max, u_max):
        if not _guard(budget, pop, result):
            continue
        for m in range(0, pop.n_bins + 1):
            scenario = Scenario(pop.n_bins, pop.n_bins, m, pop)
            for scheme, fn in ((MDS, mds_load), (ECC, ecc_load)):
                result.checked += 1
                analytic = fn(scenario).total
                oracle = brute_force.exact_expected_load(scenario, scheme, budget)
                if analytic != oracle:
                    result.failures.append(
                        f"{scheme} load mismatch at N={pop.n_bins}, M={m}, "
                        f"{pop}: analytic={analytic}, oracle={oracle}"
                    )
    return result


def check_dominance(n_max=4, u_max=3) -> CheckResult:
    """Edge-coded load never exceeds the benchmark, in expectation and per tally."""
    result = CheckResult("dominance (coded <= benchmark)")
    for pop in _populations(n_max, u_max):
        for m in range(0, pop.n_bins + 1):
            scenario = Scenario(pop.n_bins, pop.n_bins, m, pop)
            result.checked += 1
            e = ecc_load(scenario).total
            b = mds_load(scenario).total
            if e > b:
                result.failures.append(
                    f"expectation dominance violated at N={pop.n_bins}, "
                    f"M={m}, {pop}: ecc={e} > mds={b}"
                )
    return result


def check_protocol_equivalence(budget=None, random_trials=200) -> CheckResult:
    """Packet-level protocol replay equals the counting identities.

    Exhaustive on tiny instances, randomized at a larger library size.
    """
    budget = budget or EnumerationBudget()
    result = CheckResult("protocol vs counting identities")
    for pop in _populations(3, 2):
        if not _guard(budget, pop, result):
            continue
        n = pop.n_bins
        classes = [B_ONLY] * pop.u_b + [W_ONLY] * pop.u_w + [BOTH] * pop.u_2
        for m in range(0, n + 1):
            scenario = Scenario(n, n, m, pop)
            for scheme in (MDS, ECC):
                placement = placement_for(scenario, scheme)
                for files in itertools.product(range(n), repeat=pop.u):
                    r = Realization(tuple(zip(classes, files)))
                    result.checked += 1
                    got = simulate_protocol(r, scenario, scheme, placement)
                    want = count_backhaul(tally(r), scenario, scheme)
                    if got != want:
                        result.failures.append(
                            f"{scheme} protocol={got} != count={want} at "
                            f"N={n}, M={m}, {pop}, files={files}"
                        )
    # randomized spot checks at a larger size
    scenario = Scenario.uniform(20, 7, 4, 3, 2)
    for scheme in (MDS, ECC):
        placement = placement_for(scenario, scheme)
        for t in range(random_trials):
            r = sample_realization(scenario, trial_rng(20250101, t))
            result.checked += 1
            got = simulate_protocol(r, scenario, scheme, placement)
            want = count_backhaul(tally(r), scenario, scheme)
            if got != want:
                result.failures.append(
                    f"{scheme} protocol={got} != count={want} on random trial {t}"
                )
    return result


def compact_form_report(n_max=3, u_max=2, budget=None) -> tuple[int, list[str]]:
    """Compare the compact single-display load forms against the oracle.

    Informational: the transcriptions are known to carry index-bound defects,
    and this report pins down exactly where they deviate. Returns (number of
    instances compared, list of deviation descriptions).
    """
    budget = budget or EnumerationBudget()
    compared = 0
    deviations = []
    for pop in _populations(n_max, u_max):
        try:
            budget.check(pop)
        except BudgetExceededError:
            continue
        for m in range(0, pop.n_bins + 1):
            scenario = Scenario(pop.n_bins, pop.n_bins, m, pop)
            for scheme, fn in ((MDS, mds_load_compact), (ECC, ecc_load_compact)):
                compared += 1
                compact = fn(scenario)
                oracle = brute_force.exact_expected_load(scenario, scheme, budget)
                normalized = Fraction(oracle, scenario.n_files)
                if compact != normalized:
                    deviations.append(
                        f"compact {scheme} form: N={pop.n_bins}, M={m}, "
                        f"(u_b={pop.u_b}, u_w={pop.u_w}, u_2={pop.u_2}): "
                        f"display={compact}, oracle={normalized}"
                    )
    return compared, deviations


def run_all(budget=None, n_max=4, u_max=3) -> list[CheckResult]:
    budget = budget or EnumerationBudget()
    return [
        check_pmf_normalization(n_max, u_max),
        check_pmf_oracle(n_max, u_max, budget),
        check_load_oracle(n_max, u_max, budget),
        check_dominance(n_max, u_max),
        check_protocol_equivalence(budget),
    ]
