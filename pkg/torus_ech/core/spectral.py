"""Graded complex, ECH spectrum and knot-filtered ranks for T(2,q).

Every generator has even grading, so the differential vanishes and each even grading
carries exactly one generator.

Provides:
  - RotMode: exact (rot(b) = 2q) or perturbed (rot(b) = 2q + δ)
  - GradedGenerator / SpectrumEntry: generator records
  - certified_degree_bound: degree cutoff certifying gradings up to 2*max_k
  - graded_complex / graded_generator: grading -> generator bijection, checked for gaps and
    duplicates, cached per q and extended on demand
  - ech_spectrum: c_k = action of the grading-2k generator
  - knot_filtration / knot_thresholds / knot_filtered_group: knot-filtered ECH
  - action_filtered_group: action-filtered ECH below a level L
"""

import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from loguru import logger

from torus_ech.core.exact import PerturbedLike, PerturbedValue, staircase_sequence
from torus_ech.core.index import ech_index
from torus_ech.core.orbits import (
    FibrationParams,
    Orbit,
    ReebCurrent,
    action,
    degree,
    enumerate_generators,
    linking,
)
from torus_ech.core.trivializations import rotation_number
from torus_ech.errors import RejectedInputError, VerificationError


class RotMode(str, Enum):
    """Rotation number used for the binding in the knot filtration."""

    EXACT = "exact"  # 2q
    PERTURBED = "perturbed"  # 2q + δ

    @classmethod
    def parse(cls, value: "str | RotMode") -> "RotMode":
        if isinstance(value, RotMode):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise RejectedInputError(f"rot mode must be exact or perturbed, got {value!r}")


@dataclass(frozen=True)
class GradedGenerator:
    """The unique generator in grading 2k.

    Attributes:
        grading: ECH index, even
        current: the Reeb current
        degree: 2qB + qH + 2E
        action: degree / (2q)
        filtration: knot filtration with rot(b) = 2q + δ, i.e. degree + B·δ
    """

    grading: int
    current: ReebCurrent
    degree: int
    action: Fraction
    filtration: PerturbedValue

    @property
    def k(self) -> int:
        return self.grading // 2

    def filtration_for(self, rot_mode: "RotMode | str") -> PerturbedValue:
        if RotMode.parse(rot_mode) == RotMode.EXACT:
            return PerturbedValue(Fraction(self.degree), 0)
        return self.filtration


@dataclass(frozen=True)
class SpectrumEntry:
    """c_k together with the generator realising it."""

    k: int
    c_k: Fraction
    witness: GradedGenerator


# =============================================================================
# Knot filtration
# =============================================================================


def knot_filtration(
    params: FibrationParams, current: ReebCurrent, rot_mode: RotMode | str = RotMode.PERTURBED
) -> PerturbedValue:
    """F_b(b^B alpha) = B rot(b) + lk(alpha, b).

    Exact mode gives (degree, 0); perturbed mode gives (degree, B).

    Raises:
        RejectedInputError: for a non-admissible current
    """
    if not current.admissible:
        raise RejectedInputError(
            f"knot filtration is defined on admissible currents, got {current.render()}"
        )
    rot = rotation_number(params)
    if RotMode.parse(rot_mode) == RotMode.EXACT:
        rot = PerturbedValue(rot.base, 0)
    linking_with_binding = current.H * linking(params, Orbit.H, Orbit.B) + current.E * linking(
        params, Orbit.E, Orbit.B
    )
    return rot * current.B + linking_with_binding


# =============================================================================
# Graded complex
# =============================================================================

# Largest certified complex built so far, per q; grown geometrically on demand.
_COMPLEXES: dict[int, tuple[GradedGenerator, ...]] = {}
_COMPLEXES_LOCK = threading.Lock()


def certified_degree_bound(params: FibrationParams, max_k: int) -> int:
    """N_{max_k}(2,q) + 2q: one full degree band past the last needed generator."""
    last = staircase_sequence(2, params.q, max_k + 1)[max_k]
    return int(last.value.base) + 2 * params.q


def _build_complex(q: int, max_k: int) -> tuple[GradedGenerator, ...]:
    params = FibrationParams(q)
    bound = certified_degree_bound(params, max_k)
    currents = enumerate_generators(params, bound)

    generators = []
    offending = []
    for position, current in enumerate(currents):
        grading = ech_index(params, current)
        if grading != 2 * position:
            offending.append(grading)
        generators.append(
            GradedGenerator(
                grading=grading,
                current=current,
                degree=degree(params, current),
                action=action(params, current),
                filtration=knot_filtration(params, current, RotMode.PERTURBED),
            )
        )

    if offending:
        raise VerificationError(
            f"gradings up to degree {bound} for q={q} have gaps or duplicates",
            offending=offending[:20],
        )
    if len(generators) <= max_k:
        raise VerificationError(
            f"degree bound {bound} produced only {len(generators)} generators for q={q}",
            offending=[2 * max_k],
        )
    logger.debug(f"Graded complex for q={q}: gradings 0..{2 * max_k} certified at degree {bound}")
    return tuple(generators[: max_k + 1])


def _certified_complex(q: int, max_k: int) -> tuple[GradedGenerator, ...]:
    """A certified complex for q covering at least gradings 0..2*max_k."""
    with _COMPLEXES_LOCK:
        cached = _COMPLEXES.get(q, ())
    if len(cached) > max_k:
        return cached
    built = _build_complex(q, max(max_k, 2 * len(cached)))
    with _COMPLEXES_LOCK:
        if len(built) > len(_COMPLEXES.get(q, ())):
            _COMPLEXES[q] = built
    return built


def graded_complex(params: FibrationParams, max_k: int) -> list[GradedGenerator]:
    """Generators of gradings 0, 2, ..., 2*max_k, in order.

    Raises:
        RejectedInputError: if max_k is negative
        VerificationError: if the enumeration shows a gap or duplicate grading
    """
    if max_k < 0:
        raise RejectedInputError(f"max_k must be nonnegative, got {max_k}")
    return list(_certified_complex(params.q, max_k)[: max_k + 1])


def graded_generator(params: FibrationParams, k: int) -> GradedGenerator:
    """The generator in grading 2k, without copying the complex."""
    if k < 0:
        raise RejectedInputError(f"k must be nonnegative, got {k}")
    return _certified_complex(params.q, k)[k]


def ech_spectrum(params: FibrationParams, count: int) -> list[SpectrumEntry]:
    """c_0, ..., c_{count-1}: the action of the generator in grading 2k."""
    if count < 1:
        raise RejectedInputError(f"count must be at least 1, got {count}")
    return [
        SpectrumEntry(k=generator.k, c_k=generator.action, witness=generator)
        for generator in graded_complex(params, count - 1)
    ]


# =============================================================================
# Filtered ranks
# =============================================================================


def knot_thresholds(
    params: FibrationParams, count: int, rot_mode: RotMode | str = RotMode.PERTURBED
) -> list[PerturbedValue]:
    """Least K with nonzero knot-filtered ECH in gradings 0, 2, ..., 2(count-1)."""
    if count < 1:
        raise RejectedInputError(f"count must be at least 1, got {count}")
    return [g.filtration_for(rot_mode) for g in graded_complex(params, count - 1)]


def knot_threshold(
    params: FibrationParams, k: int, rot_mode: RotMode | str = RotMode.PERTURBED
) -> PerturbedValue:
    """Filtration value of the grading-2k generator."""
    return graded_generator(params, k).filtration_for(rot_mode)


def knot_filtered_group(
    params: FibrationParams,
    grading: int,
    K: PerturbedLike,
    rot_mode: RotMode | str = RotMode.PERTURBED,
) -> int:
    """Rank of knot-filtered ECH in the given grading at filtration level K."""
    if grading < 0 or grading % 2:
        return 0
    threshold = knot_threshold(params, grading // 2, rot_mode)
    return 1 if PerturbedValue.coerce(K) >= threshold else 0


def action_filtered_group(params: FibrationParams, grading: int, L: Fraction | int) -> int:
    """Rank of ECH below action L in the given grading (generator action < L)."""
    if grading < 0 or grading % 2:
        return 0
    generator = graded_generator(params, grading // 2)
    return 1 if generator.action < Fraction(L) else 0
