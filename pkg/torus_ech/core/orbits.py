"""Reeb currents of the T(2,q) fibration.

The three embedded orbits are the binding b, the negative hyperbolic fiber h and the
elliptic fiber e. A current is the multiplicity triple (B, H, E).

Provides:
  - FibrationParams: odd q >= 3 (p is fixed to 2)
  - Orbit: the orbits b, h, e
  - ReebCurrent: multiplicities with admissibility, rendering and parsing
  - degree / action / relative_degree: degree 2qB + qH + 2E and action degree/(2q)
  - linking: linking numbers between distinct orbits
  - lattice_point / from_lattice_point: currents <-> (m, n) with 2m + qn = degree
  - generators_of_degree / enumerate_generators: admissible currents in grading order
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from loguru import logger

from torus_ech.errors import RejectedInputError

EMPTY_SYMBOL = "∅"


@dataclass(frozen=True)
class FibrationParams:
    """Parameters of the T(2,q) torus-knot fibration of S3.

    Attributes:
        q: odd integer >= 3
    """

    q: int

    def __post_init__(self):
        if isinstance(self.q, bool) or not isinstance(self.q, int):
            raise RejectedInputError(f"q must be an integer, got {self.q!r}")
        if self.q < 3 or self.q % 2 == 0:
            raise RejectedInputError(f"q must be odd and at least 3, got {self.q}")

    @property
    def p(self) -> int:
        return 2


class Orbit(str, Enum):
    """Embedded Reeb orbits below the action cutoff."""

    B = "b"  # binding, elliptic
    H = "h"  # exceptional fiber of multiplicity 2, negative hyperbolic
    E = "e"  # exceptional fiber of multiplicity q, elliptic

    @classmethod
    def parse(cls, value: "str | Orbit") -> "Orbit":
        if isinstance(value, Orbit):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise RejectedInputError(f"unknown orbit {value!r}, expected one of b, h, e")


# Rendering order in generator names
ORBIT_ORDER = (Orbit.B, Orbit.H, Orbit.E)


@dataclass(frozen=True)
class ReebCurrent:
    """The current b^B h^H e^E.

    Attributes:
        B: multiplicity of the binding b
        H: multiplicity of h
        E: multiplicity of e
    """

    B: int = 0
    H: int = 0
    E: int = 0

    def __post_init__(self):
        for name in ("B", "H", "E"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise RejectedInputError(f"multiplicity {name} must be a nonnegative integer")

    @property
    def admissible(self) -> bool:
        """h is hyperbolic, so admissible currents carry it at most once."""
        return self.H <= 1

    @property
    def is_empty(self) -> bool:
        return self.B == 0 and self.H == 0 and self.E == 0

    def multiplicity(self, orbit: Orbit) -> int:
        return {Orbit.B: self.B, Orbit.H: self.H, Orbit.E: self.E}[Orbit.parse(orbit)]

    def powers(self) -> dict[str, int | None]:
        """Multiplicities keyed by orbit name, zero powers as None."""
        return {orbit.value: (self.multiplicity(orbit) or None) for orbit in ORBIT_ORDER}

    def render(self) -> str:
        """Generator name with zero powers omitted, e.g. "b", "he^9", "b^2e^3", "∅"."""
        if self.is_empty:
            return EMPTY_SYMBOL
        parts = []
        for orbit in ORBIT_ORDER:
            power = self.multiplicity(orbit)
            if power == 1:
                parts.append(orbit.value)
            elif power > 1:
                parts.append(f"{orbit.value}^{power}")
        return "".join(parts)

    @classmethod
    def parse(cls, text: str) -> "ReebCurrent":
        """Parse a "B,H,E" triple.

        Raises:
            RejectedInputError: if the text is not three nonnegative integers
        """
        pieces = [piece.strip() for piece in (text or "").split(",")]
        if len(pieces) != 3 or not all(piece.isdigit() for piece in pieces):
            raise RejectedInputError(f"expected B,H,E as three nonnegative integers, got {text!r}")
        B, H, E = (int(piece) for piece in pieces)
        return cls(B, H, E)

    def __str__(self):
        return self.render()


EMPTY_CURRENT = ReebCurrent(0, 0, 0)


# =============================================================================
# Degree, action, linking
# =============================================================================


def degree(params: FibrationParams, current: ReebCurrent) -> int:
    """Degree 2qB + qH + 2E; its parity is the parity of H."""
    q = params.q
    return 2 * q * current.B + q * current.H + 2 * current.E


def action(params: FibrationParams, current: ReebCurrent) -> Fraction:
    """Unperturbed action degree/(2q) = B + H/2 + E/q."""
    return Fraction(degree(params, current), 2 * params.q)


def relative_degree(params: FibrationParams, alpha: ReebCurrent, beta: ReebCurrent) -> int:
    """Degree of the pair (alpha, beta): d(alpha) - d(beta)."""
    return degree(params, alpha) - degree(params, beta)


def linking(params: FibrationParams, orbit_x: Orbit | str, orbit_y: Orbit | str) -> int:
    """Linking number of two distinct embedded orbits.

    Raises:
        RejectedInputError: if both orbits are the same (self-linking lives in the index engine)
    """
    x, y = Orbit.parse(orbit_x), Orbit.parse(orbit_y)
    if x == y:
        raise RejectedInputError(f"linking needs distinct orbits, got {x.value} twice")
    pair = frozenset((x, y))
    if pair == frozenset((Orbit.E, Orbit.H)):
        return 1
    if pair == frozenset((Orbit.B, Orbit.E)):
        return 2
    return params.q  # (b, h)


# =============================================================================
# Lattice bijection and enumeration
# =============================================================================


def lattice_point(current: ReebCurrent) -> tuple[int, int]:
    """Lattice point (m, n) = (E, 2B + H); satisfies 2m + qn = degree."""
    return (current.E, 2 * current.B + current.H)


def from_lattice_point(m: int, n: int) -> ReebCurrent:
    """Admissible current whose lattice point is (m, n)."""
    if m < 0 or n < 0:
        raise RejectedInputError(f"lattice point must be nonnegative, got ({m}, {n})")
    return ReebCurrent(B=n // 2, H=n % 2, E=m)


def generators_of_degree(params: FibrationParams, d: int) -> list[ReebCurrent]:
    """Admissible currents of degree d, B ascending (ascending ECH index)."""
    if d < 0:
        return []
    q = params.q
    H = d % 2
    rest = d - q * H
    if rest < 0:
        return []
    return [ReebCurrent(B, H, (rest - 2 * q * B) // 2) for B in range(rest // (2 * q) + 1)]


@lru_cache(maxsize=64)
def _enumerate(q: int, max_degree: int) -> tuple[ReebCurrent, ...]:
    params = FibrationParams(q)
    currents: list[ReebCurrent] = []
    for d in range(max_degree + 1):
        currents.extend(generators_of_degree(params, d))
    return tuple(currents)


def enumerate_generators(params: FibrationParams, max_degree: int) -> list[ReebCurrent]:
    """All admissible currents of degree <= max_degree, sorted by (degree, B).

    This is ascending ECH-index order.

    Raises:
        RejectedInputError: if max_degree is negative
    """
    if max_degree < 0:
        raise RejectedInputError(f"max_degree must be nonnegative, got {max_degree}")
    currents = list(_enumerate(params.q, max_degree))
    logger.debug(f"T(2,{params.q}): {len(currents)} generators up to degree {max_degree}")
    return currents


def generator_count_bound(params: FibrationParams, max_degree: int) -> int:
    """Number of lattice points (m, n) with 2m + qn <= max_degree."""
    q = params.q
    return sum((max_degree - q * n) // 2 + 1 for n in range(max_degree // q + 1))
