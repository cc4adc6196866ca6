"""Trivializations, the offset ledger and the monodromy table.

Provides:
  - Trivialization: the five trivialization classes
  - Cover: an orbit cover (b, e, h, e^q, h^2) over which trivializations are compared
  - TrivOffsetLedger: seeded offsets closed under antisymmetry and composition
  - get_ledger / triv_offset: cached ledger per q and offset lookup
  - cover_for: the cover a trivialization uses for a given orbit iterate
  - Monodromy / MonodromyTable / monodromy_table: rotation data of b, e and h
  - monodromy_angle / rotation_number: angles in a chosen trivialization
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from loguru import logger

from torus_ech.core.exact import PerturbedValue
from torus_ech.core.orbits import FibrationParams, Orbit
from torus_ech.errors import LedgerInconsistencyError, TrivializationDomainError


class Trivialization(str, Enum):
    """Homotopy classes of framings used along the orbits."""

    ORB = "orb"  # orbibundle, every orbit and iterate
    PAGE = "page"  # Seifert surface of the binding
    CONSTANT = "constant"  # constant trivialization over S3
    SURFACE_E = "surface-e"  # over e^q and b
    SURFACE_H = "surface-h"  # over h^2 and b

    @classmethod
    def parse(cls, value: "str | Trivialization") -> "Trivialization":
        if isinstance(value, Trivialization):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            names = ", ".join(member.value for member in cls)
            raise TrivializationDomainError(f"unknown trivialization {value!r}, expected {names}")


@dataclass(frozen=True)
class Cover:
    """The iterate orbit^period used as base cover by some trivialization."""

    orbit: Orbit
    period: int = 1

    def label(self) -> str:
        return self.orbit.value if self.period == 1 else f"{self.orbit.value}^{self.period}"


def cover_domains(params: FibrationParams) -> dict[Cover, frozenset[Trivialization]]:
    """Trivializations defined over each cover."""
    q = params.q
    return {
        Cover(Orbit.B, 1): frozenset(Trivialization),
        Cover(Orbit.E, 1): frozenset({Trivialization.ORB}),
        Cover(Orbit.E, q): frozenset({Trivialization.ORB, Trivialization.SURFACE_E}),
        Cover(Orbit.H, 1): frozenset({Trivialization.ORB}),
        Cover(Orbit.H, 2): frozenset({Trivialization.ORB, Trivialization.SURFACE_H}),
    }


def cover_for(params: FibrationParams, orbit: Orbit | str, k: int, triv: Trivialization) -> Cover:
    """Base cover over which `triv` frames the iterate orbit^k.

    Raises:
        TrivializationDomainError: if `triv` is not defined over orbit^k
    """
    orbit = Orbit.parse(orbit)
    triv = Trivialization.parse(triv)
    if orbit == Orbit.B:
        return Cover(Orbit.B, 1)
    if triv == Trivialization.ORB:
        return Cover(orbit, 1)
    if orbit == Orbit.E and triv == Trivialization.SURFACE_E and k % params.q == 0:
        return Cover(Orbit.E, params.q)
    if orbit == Orbit.H and triv == Trivialization.SURFACE_H and k % 2 == 0:
        return Cover(Orbit.H, 2)
    raise TrivializationDomainError(
        f"trivialization {triv.value} is not defined over {orbit.value}^{k} (q={params.q})"
    )


# =============================================================================
# Offset ledger
# =============================================================================


SeedOffset = tuple[Cover, Trivialization, Trivialization, int]


def _seed_offsets(params: FibrationParams) -> list[SeedOffset]:
    """Seeded values tau_from(x) - tau_to(x)."""
    q = params.q
    b = Cover(Orbit.B, 1)
    return [
        (b, Trivialization.CONSTANT, Trivialization.PAGE, 2 * q),
        (b, Trivialization.CONSTANT, Trivialization.ORB, 2 + q),
        (b, Trivialization.ORB, Trivialization.PAGE, q - 2),
        (b, Trivialization.SURFACE_E, Trivialization.CONSTANT, 0),
        (b, Trivialization.SURFACE_H, Trivialization.CONSTANT, 0),
        (Cover(Orbit.E, q), Trivialization.SURFACE_E, Trivialization.ORB, 2 + q),
        (Cover(Orbit.H, 2), Trivialization.SURFACE_H, Trivialization.ORB, 2 + q),
    ]


@dataclass
class TrivOffsetLedger:
    """Offsets tau_A(x) - tau_B(x), keyed by (cover, A, B).

    Attributes:
        q: the fibration parameter the ledger was built for
        seeds: the seeded triples as given
        offsets: closure of the seeds under antisymmetry and composition
    """

    q: int
    seeds: list[SeedOffset] = field(default_factory=list)
    offsets: dict[tuple[Cover, Trivialization, Trivialization], int] = field(default_factory=dict)

    @classmethod
    def build(cls, params: FibrationParams) -> "TrivOffsetLedger":
        """Close the seeded offsets; every cover's trivializations form one connected graph.

        Raises:
            LedgerInconsistencyError: if two paths between the same pair disagree
        """
        seeds = _seed_offsets(params)
        graph: dict[Cover, dict[Trivialization, list[tuple[Trivialization, int]]]] = {
            cover: {triv: [] for triv in domain} for cover, domain in cover_domains(params).items()
        }
        for cover, source, target, value in seeds:
            edges = graph.setdefault(cover, {})
            edges.setdefault(source, []).append((target, value))
            edges.setdefault(target, []).append((source, -value))

        offsets: dict[tuple[Cover, Trivialization, Trivialization], int] = {}
        for cover, edges in graph.items():
            for start in edges:
                # potential[t] = tau_start - tau_t
                potential = {start: 0}
                queue = deque([start])
                while queue:
                    node = queue.popleft()
                    for neighbour, value in edges[node]:
                        candidate = potential[node] + value
                        if neighbour not in potential:
                            potential[neighbour] = candidate
                            queue.append(neighbour)
                        elif potential[neighbour] != candidate:
                            raise LedgerInconsistencyError(
                                f"ledger for {cover.label()} disagrees between {start.value} and "
                                f"{neighbour.value}: {potential[neighbour]} vs {candidate}"
                            )
                for target, value in potential.items():
                    offsets[(cover, start, target)] = value

        logger.debug(f"Built trivialization ledger for q={params.q}: {len(offsets)} offsets")
        return cls(q=params.q, seeds=seeds, offsets=offsets)

    def offset(self, cover: Cover, source: Trivialization, target: Trivialization) -> int:
        """tau_source(cover) - tau_target(cover).

        Raises:
            TrivializationDomainError: if either trivialization is undefined over the cover
        """
        source = Trivialization.parse(source)
        target = Trivialization.parse(target)
        key = (cover, source, target)
        if key not in self.offsets:
            raise TrivializationDomainError(
                f"no offset between {source.value} and {target.value} over {cover.label()}"
            )
        return self.offsets[key]

    def stored_triples(self) -> list[tuple[Cover, Trivialization, Trivialization]]:
        return sorted(self.offsets, key=lambda key: (key[0].orbit.value, key[0].period,
                                                     key[1].value, key[2].value))


@lru_cache(maxsize=64)
def _ledger(q: int) -> TrivOffsetLedger:
    return TrivOffsetLedger.build(FibrationParams(q))


def get_ledger(params: FibrationParams) -> TrivOffsetLedger:
    """Ledger for q, built once and then read-only."""
    return _ledger(params.q)


def triv_offset(
    params: FibrationParams,
    orbit_or_cover: Cover | Orbit | str,
    source: Trivialization | str,
    target: Trivialization | str,
) -> int:
    """Offset tau_source(x) - tau_target(x) from the closed ledger.

    Args:
        params: fibration parameters
        orbit_or_cover: a Cover, an orbit (its simple cover) or a label such as "e^q" or "h^2"
        source: trivialization subtracted from
        target: trivialization subtracted

    Raises:
        TrivializationDomainError: if the pair is not defined over the argument
    """
    cover = parse_cover(params, orbit_or_cover)
    return get_ledger(params).offset(cover, Trivialization.parse(source),
                                     Trivialization.parse(target))


def parse_cover(params: FibrationParams, value: Cover | Orbit | str) -> Cover:
    """Accept a Cover, an Orbit, or a label "b", "e", "h", "e^q", "e^<q>", "h^2"."""
    if isinstance(value, Cover):
        return value
    if isinstance(value, Orbit):
        return Cover(value, 1)
    text = value.strip().lower()
    if "^" not in text:
        return Cover(Orbit.parse(text), 1)
    name, _, power = text.partition("^")
    if power == "q":
        period = params.q
    elif power.isdigit():
        period = int(power)
    else:
        raise TrivializationDomainError(f"malformed cover label {value!r}")
    cover = Cover(Orbit.parse(name), period)
    if cover not in cover_domains(params):
        raise TrivializationDomainError(f"no trivializations are recorded over {value!r}")
    return cover


# =============================================================================
# Monodromy
# =============================================================================


class OrbitType(str, Enum):
    ELLIPTIC = "elliptic"
    NEGATIVE_HYPERBOLIC = "negative-hyperbolic"


@dataclass(frozen=True)
class Monodromy:
    """Rotation data of one orbit in the orbibundle trivialization.

    Attributes:
        orbit_type: elliptic or negative hyperbolic
        angle: monodromy angle; for the hyperbolic orbit an odd integer
    """

    orbit_type: OrbitType
    angle: PerturbedValue


@dataclass(frozen=True)
class MonodromyTable:
    """Monodromy of b, e, h in the orbibundle trivialization, fixed per q."""

    q: int
    entries: dict[Orbit, Monodromy]

    def __getitem__(self, orbit: Orbit | str) -> Monodromy:
        return self.entries[Orbit.parse(orbit)]


@lru_cache(maxsize=64)
def _monodromy_table(q: int) -> MonodromyTable:
    # δ coefficients are normalized to ±1; only their signs enter any floor
    return MonodromyTable(
        q=q,
        entries={
            Orbit.B: Monodromy(OrbitType.ELLIPTIC, PerturbedValue(Fraction(2 + q), 1)),
            Orbit.E: Monodromy(OrbitType.ELLIPTIC, PerturbedValue(Fraction(2 + q, q), -1)),
            Orbit.H: Monodromy(OrbitType.NEGATIVE_HYPERBOLIC, PerturbedValue(Fraction(2 + q))),
        },
    )


def monodromy_table(params: FibrationParams) -> MonodromyTable:
    return _monodromy_table(params.q)


def monodromy_angle(
    params: FibrationParams, orbit: Orbit | str, triv: Trivialization | str = Trivialization.ORB
) -> PerturbedValue:
    """Monodromy angle of a simple orbit in `triv`.

    Changing the framing by tau_orb - tau shifts the angle by that integer. Only b carries
    trivializations other than Orb on its simple cover.

    Raises:
        TrivializationDomainError: if `triv` is not defined over the simple orbit
    """
    orbit = Orbit.parse(orbit)
    triv = Trivialization.parse(triv)
    angle = monodromy_table(params)[orbit].angle
    if triv == Trivialization.ORB:
        return angle
    if orbit != Orbit.B:
        raise TrivializationDomainError(
            f"monodromy of the simple orbit {orbit.value} is only tabulated in orb"
        )
    return angle + triv_offset(params, Cover(Orbit.B, 1), Trivialization.ORB, triv)


def rotation_number(params: FibrationParams) -> PerturbedValue:
    """rot(b): angle of b in the page framing, 2q + δ."""
    return monodromy_angle(params, Orbit.B, Trivialization.PAGE)
