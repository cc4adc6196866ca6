"""Verification harness for the T(2,q) computations.

Every check returns a VerificationReport; failures are reported in-band with their operands.

Provides:
  - verify_identities: adjacent-degree identity families and evenness
  - check_degree_steps: index steps of 2 along each equal-degree chain
  - check_bijection / check_degree_structure / check_low_degree_seam: generator order
  - check_component_sums / check_cz_oracles / check_total_cz: index components
  - check_ledger / check_chern_values / check_pairings / check_trivialization_independence
  - check_spectrum_staircase: degrees, capacities and knot thresholds against N(2, q)
  - corrupted_index / corrupted_spectrum: fixtures proving the harness detects errors
  - run_suite / verify_all: every check for one q, and for several q concurrently
"""

import asyncio
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Callable

from loguru import logger

from torus_ech.core.ellipsoid import crosscheck_spectrum, crosscheck_windows
from torus_ech.core.exact import PerturbedValue, build_staircase, repeat_count
from torus_ech.core.index import (
    ChernClass,
    binding_index,
    cz,
    cz_via_ledger,
    cz_via_monodromy,
    derive_cover_self_pairing,
    ech_index,
    ech_index_components,
    q_pairing,
    q_pairing_binding,
    relative_chern,
    self_linking,
    total_cz,
    total_cz_direct,
)
from torus_ech.core.orbits import (
    FibrationParams,
    Orbit,
    ReebCurrent,
    degree,
    enumerate_generators,
    generator_count_bound,
    generators_of_degree,
)
from torus_ech.core.reports import VerificationReport
from torus_ech.core.spectral import (
    RotMode,
    SpectrumEntry,
    ech_spectrum,
    graded_complex,
    knot_filtered_group,
)
from torus_ech.core.trivializations import (
    Trivialization,
    cover_domains,
    get_ledger,
    triv_offset,
)
from torus_ech.errors import TrivializationDomainError

IndexFunction = Callable[[FibrationParams, ReebCurrent], int]


# =============================================================================
# Adjacent-degree identities
# =============================================================================


def _identity_pairs(
    params: FibrationParams, m: int
) -> list[tuple[str, int, ReebCurrent, ReebCurrent]]:
    """(family, i, lower, upper) with I(lower) + 2 = I(upper), for one m."""
    q = params.q
    half_down = (q - 1) // 2
    half_up = (q + 1) // 2
    pairs = []
    for i in range((q - 3) // 2 + 1):
        pairs.append(
            ("case1-e", i, ReebCurrent(m - 1, 1, i + half_down), ReebCurrent(0, 0, q * m + i))
        )
        pairs.append(
            ("case1-h", i, ReebCurrent(m, 0, i), ReebCurrent(0, 1, q * (m - 1) + i + half_up))
        )
    pairs.append(
        ("case2-e", half_down, ReebCurrent(m - 1, 1, q - 1), ReebCurrent(0, 0, q * m + half_down))
    )
    pairs.append(("case2-h", half_down, ReebCurrent(m, 0, half_down), ReebCurrent(0, 1, q * m)))
    for i in range(half_up, q):
        pairs.append(
            ("case3-e", i, ReebCurrent(m, 1, i - half_up), ReebCurrent(0, 0, q * m + i))
        )
        pairs.append(
            ("case3-h", i, ReebCurrent(m, 0, i), ReebCurrent(0, 1, q * m + i - half_down))
        )
    return pairs


def verify_identities(
    params: FibrationParams,
    max_m: int,
    index: IndexFunction = ech_index,
) -> VerificationReport:
    """Check the six adjacent-degree identity families and evenness.

    For 1 <= m <= max_m and every residue i, the highest-index generator of one degree and
    the lowest of the next differ by exactly 2. Each pure e^n appears in exactly one identity,
    so shifting I(e^q) by 2 yields one failure record (case1-e at m = 1).

    Args:
        params: fibration parameters
        max_m: largest m checked
        index: index function under test

    Returns:
        VerificationReport with family "case{1,2,3}-{e,h}" or "evenness" per failure
    """
    q = params.q
    report = VerificationReport(name="identities", q=q)
    for m in range(1, max_m + 1):
        for family, i, lower, upper in _identity_pairs(params, m):
            low, high = index(params, lower), index(params, upper)
            report.expect(
                low + 2 == high,
                family,
                f"I({lower.render()}) + 2 != I({upper.render()})",
                q=q, m=m, i=i,
                lower=lower.render(), upper=upper.render(),
                lower_index=low, upper_index=high,
            )
            for current, value in ((lower, low), (upper, high)):
                report.expect(
                    value % 2 == 0,
                    "evenness",
                    f"I({current.render()}) = {value} is odd",
                    q=q, m=m, i=i, current=current.render(), index=value,
                )

    if report.passed:
        logger.debug(f"Identities hold for q={q}, m <= {max_m} ({report.checked} checks)")
    else:
        logger.error(f"Identity check failed for q={q}: {report.failure_count} failures")
    return report


def corrupted_index(params: FibrationParams, target: ReebCurrent | None = None) -> IndexFunction:
    """ech_index with one value shifted by 2 (e^q unless another target is given)."""
    target = target or ReebCurrent(0, 0, params.q)

    def index(p: FibrationParams, current: ReebCurrent) -> int:
        value = ech_index(p, current)
        return value + 2 if current == target else value

    return index


def corrupted_spectrum(params: FibrationParams, count: int, k: int) -> list[SpectrumEntry]:
    """ech_spectrum with c_k shifted by 1/(2q)."""
    entries = ech_spectrum(params, count)
    entry = entries[k]
    entries[k] = SpectrumEntry(entry.k, entry.c_k + Fraction(1, 2 * params.q), entry.witness)
    return entries


# =============================================================================
# Generator order
# =============================================================================


def check_degree_steps(
    params: FibrationParams, max_m: int, index: IndexFunction = ech_index
) -> VerificationReport:
    """Along each equal-degree chain b^y h^H e^{q(m-y)+i}, consecutive y differ by 2 in index."""
    q = params.q
    report = VerificationReport(name="degree-steps", q=q)
    for m in range(1, max_m + 1):
        for i in range(q):
            for H in (0, 1):
                previous = index(params, ReebCurrent(0, H, q * m + i))
                for y in range(1, m + 1):
                    current = ReebCurrent(y, H, q * (m - y) + i)
                    value = index(params, current)
                    report.expect(
                        value - previous == 2,
                        "step",
                        f"I({current.render()}) - I(b^{y - 1}h^{H}e^{q * (m - y + 1) + i}) "
                        f"= {value - previous}",
                        q=q, m=m, i=i, y=y, H=H, current=current.render(),
                    )
                    previous = value
    return report


def check_bijection(
    params: FibrationParams, max_degree: int, index: IndexFunction = ech_index
) -> VerificationReport:
    """Indices of all generators up to max_degree are exactly 0, 2, 4, ... in enumeration order."""
    q = params.q
    report = VerificationReport(name="bijection", q=q)
    currents = enumerate_generators(params, max_degree)
    report.expect(
        len(currents) == generator_count_bound(params, max_degree),
        "count",
        f"{len(currents)} generators up to degree {max_degree}, lattice count differs",
    )
    previous_degree = 0
    for position, current in enumerate(currents):
        value = index(params, current)
        d = degree(params, current)
        report.expect(
            value == 2 * position,
            "grading",
            f"generator {position} ({current.render()}) has index {value}",
            position=position, current=current.render(), index=value, degree=d,
        )
        report.expect(
            d >= previous_degree,
            "degree-order",
            f"degree drops from {previous_degree} to {d} at index {value}",
            current=current.render(),
        )
        previous_degree = d
    return report


def check_degree_structure(
    params: FibrationParams, max_degree: int | None = None
) -> VerificationReport:
    """Per-degree counts and the equal-degree characterization up to 10q.

    Writing a generator as b^y h^H e^{qx+i}, two generators share a degree exactly when they
    share H and i and have the same x + y.
    """
    q = params.q
    max_degree = 10 * q if max_degree is None else max_degree
    report = VerificationReport(name="degree-structure", q=q)

    for d in range(max_degree + 1):
        H = d % 2
        expected = (d - q * H) // (2 * q) + 1 if d >= q * H else 0
        count = len(generators_of_degree(params, d))
        report.expect(count == expected, "count", f"degree {d}: {count} generators", degree=d)
        if d < 3 * q and (d % 2 == 0 and d < 2 * q or d % 2 == 1 and d >= q):
            report.expect(count == 1, "unique", f"degree {d} should carry one generator", degree=d)

    currents = enumerate_generators(params, max_degree)
    degrees = [degree(params, current) for current in currents]
    keys = []
    for current in currents:
        x, i = divmod(current.E, q)
        keys.append((current.H, i, x + current.B))
    for first in range(len(currents)):
        for second in range(first + 1, len(currents)):
            same_degree = degrees[first] == degrees[second]
            same_key = keys[first] == keys[second]
            report.expect(
                same_degree == same_key,
                "equal-degree",
                f"{currents[first].render()} vs {currents[second].render()}",
            )
    return report


def check_low_degree_seam(params: FibrationParams) -> VerificationReport:
    """Degrees 0..2q-1 carry the gradings 0, 2, ..., 3q-1 with the e/h interleaving."""
    q = params.q
    report = VerificationReport(name="low-degree-seam", q=q)
    currents = enumerate_generators(params, 2 * q - 1)
    indices = sorted(ech_index(params, current) for current in currents)
    report.expect(
        indices == list(range(0, 3 * q, 2)),
        "range",
        f"gradings below degree 2q are {indices[:3]}...{indices[-3:]}",
    )
    for i in range(q):
        expected = 2 * i if i <= (q - 1) // 2 else 4 * i - q + 1
        value = ech_index(params, ReebCurrent(0, 0, i))
        report.expect(value == expected, "e-power", f"I(e^{i}) = {value}", i=i)
    for j in range((q - 1) // 2 + 1):
        value = ech_index(params, ReebCurrent(0, 1, j))
        report.expect(value == q + 4 * j + 1, "h-power", f"I(he^{j}) = {value}", j=j)
    for j in range((q - 3) // 2 + 1):
        report.expect(
            ech_index(params, ReebCurrent(0, 1, j)) + 2
            == ech_index(params, ReebCurrent(0, 0, j + (q + 1) // 2)),
            "interleave",
            f"I(he^{j}) + 2 != I(e^{j + (q + 1) // 2})",
            j=j,
        )
    report.expect(
        ech_index(params, ReebCurrent(0, 0, q)) == 3 * q + 1,
        "e^q",
        "I(e^q) != 3q + 1",
    )
    return report


# =============================================================================
# Index components
# =============================================================================


def _prefix_sums(params: FibrationParams, orbit: Orbit, length: int) -> list[int]:
    values = (cz(params, orbit, k, Trivialization.ORB) for k in range(1, length + 1))
    return [0, *accumulate(values)]


def check_component_sums(params: FibrationParams, max_degree: int) -> VerificationReport:
    """ech_index = c + Q + CZ^I and closed-form CZ^I = iterate sum, for degree <= max_degree."""
    q = params.q
    report = VerificationReport(name="component-sums", q=q)
    sums = {
        Orbit.B: _prefix_sums(params, Orbit.B, max_degree // (2 * q) + 1),
        Orbit.H: _prefix_sums(params, Orbit.H, 1),
        Orbit.E: _prefix_sums(params, Orbit.E, max_degree // 2 + 1),
    }
    for current in enumerate_generators(params, max_degree):
        components = ech_index_components(params, current)
        index = ech_index(params, current)
        report.expect(
            components.total == index,
            "sum",
            f"{current.render()}: c + Q + CZ = {components.total}, I = {index}",
            current=current.render(), components=list(components.as_tuple()), index=index,
        )
        direct = sums[Orbit.B][current.B] + sums[Orbit.H][current.H] + sums[Orbit.E][current.E]
        report.expect(
            components.cz_total == direct,
            "cz-total",
            f"{current.render()}: closed CZ^I {components.cz_total}, iterate sum {direct}",
            current=current.render(),
        )
    return report


def check_cz_oracles(params: FibrationParams, max_k: int | None = None) -> VerificationReport:
    """Closed-form CZ against the monodromy and ledger oracles for k <= 10q."""
    q = params.q
    max_k = 10 * q if max_k is None else max_k
    report = VerificationReport(name="cz-oracles", q=q)
    for orbit in (Orbit.B, Orbit.H, Orbit.E):
        for k in range(1, max_k + 1):
            value = cz(params, orbit, k, Trivialization.ORB)
            report.expect(
                value == cz_via_monodromy(params, orbit, k),
                "monodromy",
                f"CZ_orb({orbit.value}^{k})",
                orbit=orbit.value, k=k,
            )
            # elliptic values and odd iterates of the hyperbolic orbit are odd
            expected_parity = 0 if orbit == Orbit.H and k % 2 == 0 else 1
            report.expect(
                value % 2 == expected_parity,
                "parity",
                f"CZ_orb({orbit.value}^{k}) = {value} has the wrong parity",
            )
            for triv in Trivialization:
                try:
                    closed = cz(params, orbit, k, triv)
                except TrivializationDomainError:
                    continue
                report.expect(
                    closed == cz_via_ledger(params, orbit, k, triv),
                    "ledger",
                    f"CZ_{triv.value}({orbit.value}^{k})",
                    orbit=orbit.value, k=k, triv=triv.value,
                )
                if orbit == Orbit.B:
                    report.expect(
                        closed == cz_via_monodromy(params, orbit, k, triv),
                        "monodromy-shift",
                        f"CZ_{triv.value}(b^{k})",
                        k=k, triv=triv.value,
                    )
    return report


def check_total_cz(
    params: FibrationParams, max_multiplicity: int | None = None
) -> VerificationReport:
    """Closed-form CZ^I of b^B, h^H and e^E against the direct sum for multiplicities <= 10q."""
    q = params.q
    limit = 10 * q if max_multiplicity is None else max_multiplicity
    report = VerificationReport(name="total-cz", q=q)
    for n in range(limit + 1):
        for current in (ReebCurrent(n, 0, 0), ReebCurrent(0, n, 0), ReebCurrent(0, 0, n)):
            report.expect(
                total_cz(params, current) == total_cz_direct(params, current),
                "closed-form",
                f"CZ^I({current.render()})",
                current=current.render(),
            )
    return report


# =============================================================================
# Trivializations
# =============================================================================


def check_ledger(params: FibrationParams) -> VerificationReport:
    """Antisymmetry, vanishing diagonal and cocycle identity for every stored triple."""
    q = params.q
    report = VerificationReport(name="ledger", q=q)
    ledger = get_ledger(params)
    for cover, domain in cover_domains(params).items():
        for first in domain:
            report.expect(ledger.offset(cover, first, first) == 0, "diagonal", cover.label())
            for second in domain:
                forward = ledger.offset(cover, first, second)
                report.expect(
                    forward == -ledger.offset(cover, second, first),
                    "antisymmetry",
                    f"{cover.label()}: {first.value} / {second.value}",
                )
                for third in domain:
                    report.expect(
                        ledger.offset(cover, first, third)
                        == forward + ledger.offset(cover, second, third),
                        "cocycle",
                        f"{cover.label()}: {first.value} / {second.value} / {third.value}",
                    )
    for cover, source, target, value in ledger.seeds:
        report.expect(
            triv_offset(params, cover, source, target) == value,
            "seed",
            f"{cover.label()}: {source.value} - {target.value} != {value}",
        )
    return report


def check_chern_values(params: FibrationParams) -> VerificationReport:
    """Tabulated relative Chern numbers and the self-linking number."""
    q = params.q
    report = VerificationReport(name="chern", q=q)
    expected = [
        (ChernClass.SIGMA, Trivialization.ORB, 0),
        (ChernClass.SIGMA, Trivialization.CONSTANT, 2 + q),
        (ChernClass.SIGMA, Trivialization.PAGE, 2 - q),
        (ChernClass.Z_EQ, Trivialization.SURFACE_E, 2 + q),
        (ChernClass.Z_H2, Trivialization.SURFACE_H, 2 + q),
        (ChernClass.Z_E, Trivialization.ORB, 0),
        (ChernClass.Z_H, Trivialization.ORB, 0),
    ]
    for cls, triv, value in expected:
        actual = relative_chern(params, cls, triv)
        report.expect(actual == value, "value", f"c_{triv.value}({cls.value}) = {actual}")
    report.expect(
        self_linking(params) == params.p * q - params.p - q,
        "self-linking",
        f"sl = {self_linking(params)}",
    )
    return report


def check_pairings(params: FibrationParams) -> VerificationReport:
    """Cover chains reproduce Q_orb(Z_e) = Q_orb(Z_h) = -1; binding pairings by trivialization."""
    q = params.q
    report = VerificationReport(name="pairings", q=q)
    for orbit, multiple in ((Orbit.E, -q * q), (Orbit.H, -4)):
        chain = derive_cover_self_pairing(params, orbit)
        report.expect(
            chain.multiple_value == multiple,
            "cover",
            f"Q_orb({chain.period}Z_{orbit.value}) = {chain.multiple_value}",
        )
        report.expect(
            chain.simple_value == q_pairing(params, f"Z_{orbit.value}") == -1,
            "simple",
            f"Q_orb(Z_{orbit.value}) = {chain.simple_value}",
        )
    for triv, value in (
        (Trivialization.PAGE, 0),
        (Trivialization.CONSTANT, 2 * q),
        (Trivialization.ORB, q - 2),
    ):
        actual = q_pairing_binding(params, triv)
        report.expect(actual == value, "binding", f"Q_{triv.value}(Z_b) = {actual}")
    report.expect(
        q_pairing_binding(params, Trivialization.ORB) == q_pairing(params, ChernClass.Z_B),
        "binding-orb",
        "Q_orb(Z_b) differs between the ledger and the table",
    )
    return report


def check_trivialization_independence(
    params: FibrationParams, max_b: int = 100
) -> VerificationReport:
    """I(b^B) agrees in every binding trivialization and equals 2qB^2 + (q+3)B."""
    q = params.q
    report = VerificationReport(name="trivialization-independence", q=q)
    for B in range(max_b + 1):
        expected = 2 * q * B * B + (q + 3) * B
        for triv in Trivialization:
            value = binding_index(params, B, triv)
            report.expect(value == expected, "binding", f"I_{triv.value}(b^{B}) = {value}", B=B)
    return report


# =============================================================================
# Spectrum and knot thresholds
# =============================================================================


def check_spectrum_staircase(params: FibrationParams, count: int) -> VerificationReport:
    """Degrees, capacities and both knot thresholds against N(2, q) and N(1/2, 1/q)."""
    q = params.q
    report = VerificationReport(name="spectrum-staircase", q=q)
    generators = graded_complex(params, count - 1)
    stair = build_staircase(2, q, count)
    scaled = build_staircase(Fraction(1, 2), Fraction(1, q), count)

    for k, generator in enumerate(generators):
        value = stair[k].value.base
        repeats = repeat_count(stair, k)
        report.expect(generator.degree == value, "degree", f"d(grading {2 * k}) != N_{k}", k=k)
        report.expect(2 * q * generator.action == value, "capacity", f"2q c_{k} != N_{k}", k=k)
        report.expect(
            generator.action == scaled[k].value.base,
            "scaled-capacity",
            f"c_{k} != N_{k}(1/2, 1/q)",
            k=k,
        )
        report.expect(
            generator.current.B == repeats - 1,
            "repeats",
            f"B of grading {2 * k} is {generator.current.B}, repeats {repeats}",
            k=k,
        )
        report.expect(
            generator.filtration_for(RotMode.EXACT) == PerturbedValue(value),
            "exact-threshold",
            f"exact threshold of grading {2 * k}",
            k=k,
        )
        threshold = PerturbedValue(value, repeats - 1)
        report.expect(
            generator.filtration_for(RotMode.PERTURBED) == threshold,
            "perturbed-threshold",
            f"perturbed threshold of grading {2 * k}",
            k=k,
        )
        report.expect(
            knot_filtered_group(params, 2 * k, threshold) == 1
            and knot_filtered_group(params, 2 * k, threshold - PerturbedValue(0, 1)) == 0,
            "knot-rank",
            f"knot-filtered rank of grading {2 * k} does not switch on at {threshold}",
            k=k,
        )
        if k > 0:
            report.expect(
                generators[k - 1].degree <= generator.degree,
                "monotone",
                f"degree decreases at grading {2 * k}",
                k=k,
            )

    for grading in range(1, 2 * count, 2):
        report.expect(
            knot_filtered_group(params, grading, PerturbedValue(10**9)) == 0,
            "odd-grading",
            f"odd grading {grading} has nonzero rank",
        )
    return report


# =============================================================================
# Suites
# =============================================================================


@dataclass(frozen=True)
class SuiteOptions:
    """Ranges for one verification run.

    Attributes:
        max_degree: enumeration bound for bijection and component checks
        max_m: largest m for the adjacent-degree identities
        count: number of spectrum entries and knot thresholds
        max_b: largest binding multiplicity for trivialization independence
        corrupt: inject an off-by-2 index and a shifted capacity
    """

    max_degree: int = 400
    max_m: int = 100
    count: int = 1000
    max_b: int = 100
    corrupt: bool = False


def run_suite(params: FibrationParams, options: SuiteOptions) -> list[VerificationReport]:
    """Every check for one q, in a fixed order."""
    q = params.q
    logger.info(f"Verifying T(2,{q})")
    index = corrupted_index(params) if options.corrupt else ech_index
    spectrum = (
        corrupted_spectrum(params, options.count, options.count // 2) if options.corrupt else None
    )
    reports = [
        verify_identities(params, options.max_m, index),
        check_degree_steps(params, options.max_m, index),
        check_bijection(params, options.max_degree, index),
        check_degree_structure(params),
        check_low_degree_seam(params),
        check_component_sums(params, options.max_degree),
        check_cz_oracles(params),
        check_total_cz(params),
        check_ledger(params),
        check_chern_values(params),
        check_pairings(params),
        check_trivialization_independence(params, options.max_b),
        check_spectrum_staircase(params, options.count),
        crosscheck_spectrum(params, options.count, spectrum),
        crosscheck_windows(params, options.max_degree),
    ]
    failed = [report.name for report in reports if not report.passed]
    if failed:
        logger.error(f"T(2,{q}): {len(failed)} checks failed: {', '.join(failed)}")
    else:
        logger.info(f"✅ T(2,{q}): all {len(reports)} checks passed")
    return reports


async def verify_all(
    q_values: list[int], options: SuiteOptions, workers: int = 4
) -> list[VerificationReport]:
    """Run the suite for every q concurrently; reports come back in the order of q_values."""
    semaphore = asyncio.Semaphore(workers)

    async def run_one(q: int) -> list[VerificationReport]:
        async with semaphore:
            return await asyncio.to_thread(run_suite, FibrationParams(q), options)

    results = await asyncio.gather(*(run_one(q) for q in q_values))
    return [report for reports in results for report in reports]
