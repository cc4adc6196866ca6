"""Irrational ellipsoid cross-check.

The boundary of E(a, b) with a/b irrational has exactly two embedded Reeb orbits, gamma1
and gamma2, and the grading-2k generator is gamma1^m1 gamma2^m2 for the k-th lattice point
of N(a, b). Irrationality is emulated with the formal δ.

Provides:
  - EllipsoidParams: the two radii, checked for an irrational (δ-separated) ratio
  - EllipsoidGenerator / ellipsoid_generators: generators in grading order
  - ellipsoid_capacities: N_k(a, b)
  - ellipsoid_filtration / unknot_threshold / unknot_filtered_group: filtration by gamma2
  - crosscheck_spectrum: T(2,q) spectrum against the staircase N(2, q)
  - crosscheck_windows: per-degree generator counts against E(2, q + δ)
  - crosscheck_unknot_filtration: ellipsoid filtration against N_k(1, b/a)
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from loguru import logger

from torus_ech.core.exact import (
    PerturbedLike,
    PerturbedValue,
    build_staircase,
    staircase_sequence,
)
from torus_ech.core.orbits import FibrationParams, generator_count_bound, generators_of_degree
from torus_ech.core.reports import VerificationReport
from torus_ech.core.spectral import SpectrumEntry, ech_spectrum
from torus_ech.errors import RejectedInputError


@dataclass(frozen=True)
class EllipsoidParams:
    """Radii of an ellipsoid whose ratio behaves as irrational.

    Attributes:
        a: action of gamma1
        b: action of gamma2
    """

    a: PerturbedValue
    b: PerturbedValue

    def __post_init__(self):
        a = PerturbedValue.coerce(self.a)
        b = PerturbedValue.coerce(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a <= 0 or b <= 0:
            raise RejectedInputError(f"ellipsoid radii must be positive, got a={a}, b={b}")
        # a*n = b*m for positive m, n exactly when (base, delta) of a and b are proportional
        if a.base * b.delta == b.base * a.delta:
            raise RejectedInputError(
                f"degenerate ratio: a={a} and b={b} are commensurable under δ-comparison"
            )

    @property
    def rot(self) -> PerturbedValue:
        """b / a, the rotation number of gamma2.

        The infinitesimal is rescaled along with the base (δ/a is again a positive
        infinitesimal), so the δ coefficient of b carries over unchanged.

        Raises:
            RejectedInputError: if a itself carries δ
        """
        if not self.a.is_exact:
            raise RejectedInputError(f"rotation number needs a δ-free radius a, got {self.a}")
        return PerturbedValue(self.b.base / self.a.base, self.b.delta)


@dataclass(frozen=True)
class EllipsoidGenerator:
    """gamma1^m1 gamma2^m2 in grading 2k."""

    k: int
    m1: int
    m2: int
    action: PerturbedValue

    @property
    def grading(self) -> int:
        return 2 * self.k


def ellipsoid_generators(params: EllipsoidParams, max_k: int) -> list[EllipsoidGenerator]:
    """Generators of gradings 0..2*max_k, ordered by action."""
    if max_k < 0:
        raise RejectedInputError(f"max_k must be nonnegative, got {max_k}")
    entries = staircase_sequence(params.a, params.b, max_k + 1)
    generators = [
        EllipsoidGenerator(k=k, m1=entry.m, m2=entry.n, action=entry.value)
        for k, entry in enumerate(entries)
    ]
    logger.debug(f"E({params.a}, {params.b}): {len(generators)} generators")
    return generators


def ellipsoid_capacities(a: PerturbedLike, b: PerturbedLike, count: int) -> list[PerturbedValue]:
    """ECH capacities c_0..c_{count-1} of E(a, b): the values N_k(a, b)."""
    return [entry.value for entry in staircase_sequence(a, b, count)]


def ellipsoid_filtration(params: EllipsoidParams, m1: int, m2: int) -> PerturbedValue:
    """Filtration by gamma2: m1 + m2 * (b/a), i.e. action / a."""
    return params.rot * m2 + m1


def unknot_threshold(k: int, rot: PerturbedLike) -> PerturbedValue:
    """N_k(1, rot): least filtration level carrying grading 2k for the unknot."""
    rot = PerturbedValue.coerce(rot)
    if rot <= 0:
        raise RejectedInputError(f"rotation number must be positive, got {rot}")
    if k < 0:
        raise RejectedInputError(f"k must be nonnegative, got {k}")
    return staircase_sequence(1, rot, k + 1)[k].value


def unknot_filtered_group(grading: int, K: PerturbedLike, rot: PerturbedLike) -> int:
    """Rank of knot-filtered ECH of the unknot in the given grading at level K."""
    if grading < 0 or grading % 2:
        return 0
    return 1 if PerturbedValue.coerce(K) >= unknot_threshold(grading // 2, rot) else 0


# =============================================================================
# Cross-checks
# =============================================================================


def crosscheck_spectrum(
    params: FibrationParams, count: int, spectrum: list[SpectrumEntry] | None = None
) -> VerificationReport:
    """Check 2q c_k = N_k(2, q) and witness degree = N_k(2, q) for k < count.

    Args:
        params: fibration parameters
        count: number of spectrum entries to compare
        spectrum: precomputed entries; computed with ech_spectrum when omitted

    Returns:
        VerificationReport naming every mismatching k
    """
    if count < 1:
        raise RejectedInputError(f"count must be at least 1, got {count}")
    q = params.q
    report = VerificationReport(name="crosscheck-spectrum", q=q)
    entries = spectrum if spectrum is not None else ech_spectrum(params, count)
    stair = build_staircase(2, q, count)

    report.expect(
        len(entries) >= count, "length", f"expected {count} entries, got {len(entries)}"
    )
    for k, entry in enumerate(entries[:count]):
        expected = stair[k].value.base
        report.expect(
            2 * q * entry.c_k == expected,
            "capacity",
            f"2q*c_{k} != N_{k}(2,{q})",
            k=k,
            c_k=entry.c_k,
            staircase=expected,
        )
        report.expect(
            Fraction(entry.witness.degree) == expected,
            "witness-degree",
            f"degree of the grading-{2 * k} witness != N_{k}(2,{q})",
            k=k,
            degree=entry.witness.degree,
            staircase=expected,
        )

    if not report.passed:
        logger.error(f"Spectrum crosscheck failed for q={q}: {report.failure_count} mismatches")
    return report


def crosscheck_windows(params: FibrationParams, max_degree: int) -> VerificationReport:
    """Per-degree generator counts of T(2,q) against action windows of E(2, q + δ)."""
    q = params.q
    report = VerificationReport(name="crosscheck-windows", q=q)
    ellipsoid = EllipsoidParams(PerturbedValue(Fraction(2)), PerturbedValue(Fraction(q), 1))
    total = generator_count_bound(params, max_degree)
    # one extra entry confirms nothing else lands inside the last window
    generators = ellipsoid_generators(ellipsoid, total)
    windows = Counter(int(g.action.base) for g in generators if g.action.base <= max_degree)

    report.expect(
        generators[-1].action.base > max_degree,
        "window-closure",
        f"entry {total} of N(2,{q}+δ) should lie beyond degree {max_degree}",
        action=str(generators[-1].action),
    )
    for d in range(max_degree + 1):
        expected = len(generators_of_degree(params, d))
        report.expect(
            windows.get(d, 0) == expected,
            "window-count",
            f"degree {d}: {windows.get(d, 0)} ellipsoid generators vs {expected}",
            degree=d,
        )
    return report


def crosscheck_unknot_filtration(params: EllipsoidParams, max_k: int) -> VerificationReport:
    """Filtration of the grading-2k generator equals N_k(1, b/a) for k <= max_k."""
    report = VerificationReport(name="crosscheck-unknot-filtration")
    rot = params.rot
    thresholds = [entry.value for entry in staircase_sequence(1, rot, max_k + 1)]
    previous = None
    for generator in ellipsoid_generators(params, max_k):
        filtration = ellipsoid_filtration(params, generator.m1, generator.m2)
        report.expect(
            filtration == thresholds[generator.k],
            "threshold",
            f"F(gamma1^{generator.m1} gamma2^{generator.m2}) != N_{generator.k}(1, {rot})",
            k=generator.k,
            filtration=str(filtration),
            expected=str(thresholds[generator.k]),
        )
        scaled_action = PerturbedValue(
            generator.action.base / params.a.base, generator.action.delta
        )
        report.expect(
            filtration == scaled_action,
            "action-ratio",
            f"filtration of grading {generator.grading} is not action / a",
            k=generator.k,
        )
        if previous is not None:
            report.expect(
                previous < generator.action,
                "strict-order",
                f"actions tie at k={generator.k} despite the irrational ratio",
                k=generator.k,
            )
        previous = generator.action
    return report
