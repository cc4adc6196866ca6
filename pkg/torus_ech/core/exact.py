"""Exact arithmetic for torus-ech.

Rationals are fractions.Fraction throughout; there is no floating point anywhere in the
package. A single formal infinitesimal δ > 0 models every "sufficiently small positive
irrational" perturbation.

Provides:
  - PerturbedValue: rational plus an integer multiple of δ, ordered lexicographically
  - perturbed_floor: floor of r + cδ
  - parse_perturbed / format_perturbed: the "r+cδ" text form
  - StaircaseEntry / Staircase: the sequence N(a,b) with lattice witnesses
  - staircase_sequence / build_staircase: heap merge producing N_0..N_{count-1}
  - repeat_count: #{j <= k : N_j = N_k}
"""

import heapq
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

from loguru import logger

from torus_ech.errors import RangeError, RejectedInputError

Rational = Fraction

DELTA = "δ"
MINUS = "−"

_PERTURBED_PATTERN = re.compile(
    r"^\s*(?P<base>[+\-−]?\d+(?:/\d+)?)"
    r"\s*(?:(?P<sign>[+\-−])\s*(?P<coef>\d*)\s*\*?\s*(?:δ|delta|d))?\s*$"
)


# =============================================================================
# Perturbed values
# =============================================================================


@total_ordering
@dataclass(frozen=True, eq=False)
class PerturbedValue:
    """An exact rational r plus c·δ for a formal infinitesimal δ > 0.

    Attributes:
        base: the rational part r
        delta: the integer coefficient c of δ
    """

    base: Fraction
    delta: int = 0

    def __post_init__(self):
        if isinstance(self.delta, bool) or not isinstance(self.delta, int):
            raise RejectedInputError(f"δ coefficient must be an integer, got {self.delta!r}")
        if isinstance(self.base, float):
            raise RejectedInputError("floating point values are not accepted")
        object.__setattr__(self, "base", Fraction(self.base))

    @classmethod
    def coerce(cls, value: "PerturbedLike") -> "PerturbedValue":
        """Lift an int or Fraction to a δ-free PerturbedValue."""
        if isinstance(value, PerturbedValue):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls(Fraction(value), 0)
        raise RejectedInputError(f"cannot interpret {value!r} as a perturbed value")

    @property
    def is_exact(self) -> bool:
        """True when the δ coefficient is zero."""
        return self.delta == 0

    def _key(self) -> tuple[Fraction, int]:
        return (self.base, self.delta)

    def __eq__(self, other):
        if not isinstance(other, (PerturbedValue, int, Fraction)):
            return NotImplemented
        return self._key() == PerturbedValue.coerce(other)._key()

    def __lt__(self, other):
        if not isinstance(other, (PerturbedValue, int, Fraction)):
            return NotImplemented
        return self._key() < PerturbedValue.coerce(other)._key()

    def __hash__(self):
        # equal to a plain number when δ-free, so hash like one
        if self.delta == 0:
            return hash(self.base)
        return hash(self._key())

    def __add__(self, other):
        if not isinstance(other, (PerturbedValue, int, Fraction)):
            return NotImplemented
        other = PerturbedValue.coerce(other)
        return PerturbedValue(self.base + other.base, self.delta + other.delta)

    __radd__ = __add__

    def __neg__(self):
        return PerturbedValue(-self.base, -self.delta)

    def __sub__(self, other):
        if not isinstance(other, (PerturbedValue, int, Fraction)):
            return NotImplemented
        return self + (-PerturbedValue.coerce(other))

    def __rsub__(self, other):
        return PerturbedValue.coerce(other) - self

    def __mul__(self, scale):
        # integer scaling only: δ stays an integer multiple
        if isinstance(scale, bool) or not isinstance(scale, int):
            return NotImplemented
        return PerturbedValue(self.base * scale, self.delta * scale)

    __rmul__ = __mul__

    def __truediv__(self, divisor):
        if isinstance(divisor, bool) or not isinstance(divisor, (int, Fraction)):
            return NotImplemented
        if divisor == 0:
            raise ZeroDivisionError("division of a perturbed value by zero")
        delta = Fraction(self.delta) / divisor
        if delta.denominator != 1:
            raise RejectedInputError(f"{self} / {divisor} leaves a fractional δ coefficient")
        return PerturbedValue(self.base / divisor, int(delta))

    def __str__(self):
        return format_perturbed(self)


PerturbedLike = Union[PerturbedValue, int, Fraction]

ZERO = PerturbedValue(Fraction(0), 0)


def perturbed_floor(x: PerturbedLike) -> int:
    """Floor of r + cδ for infinitesimal δ > 0.

    Equals floor(r) unless r is an integer and c < 0, in which case it is r - 1.
    """
    x = PerturbedValue.coerce(x)
    floor = math.floor(x.base)
    if x.base.denominator == 1 and x.delta < 0:
        return floor - 1
    return floor


def format_rational(value: Fraction | int) -> str:
    """Render a rational as "num/den", or "n" when integral."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_perturbed(value: PerturbedLike) -> str:
    """Render as "r", "r+δ", "r+cδ", "r−δ" or "r−cδ"."""
    value = PerturbedValue.coerce(value)
    base = format_rational(value.base)
    if value.delta == 0:
        return base
    sign = "+" if value.delta > 0 else MINUS
    magnitude = abs(value.delta)
    coefficient = "" if magnitude == 1 else str(magnitude)
    return f"{base}{sign}{coefficient}{DELTA}"


def parse_perturbed(text: str) -> PerturbedValue:
    """Parse "r", "r+δ", "r-2δ", "3/2+d" and similar into a PerturbedValue.

    Raises:
        RejectedInputError: if the text is not a perturbed value
    """
    match = _PERTURBED_PATTERN.match(text or "")
    if not match:
        raise RejectedInputError(f"not a perturbed value: {text!r}")

    base = Fraction(match.group("base").replace(MINUS, "-"))
    delta = 0
    if match.group("sign"):
        coefficient = int(match.group("coef")) if match.group("coef") else 1
        delta = -coefficient if match.group("sign") in ("-", MINUS) else coefficient
    return PerturbedValue(base, delta)


# =============================================================================
# Staircase N(a, b)
# =============================================================================


@dataclass(frozen=True)
class StaircaseEntry:
    """One lattice value a·m + b·n with its witness (m, n)."""

    value: PerturbedValue
    m: int
    n: int

    @property
    def witness(self) -> tuple[int, int]:
        return (self.m, self.n)


@dataclass(frozen=True)
class Staircase:
    """The first entries of N(a, b) in nondecreasing order, one per lattice point.

    Attributes:
        a: first step, > 0
        b: second step, > 0
        entries: StaircaseEntry list, entry 0 is always (0, (0, 0))
    """

    a: PerturbedValue
    b: PerturbedValue
    entries: tuple[StaircaseEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, k: int) -> StaircaseEntry:
        if not 0 <= k < len(self.entries):
            raise RangeError(f"staircase has {len(self.entries)} entries, asked for index {k}")
        return self.entries[k]

    def values(self) -> list[PerturbedValue]:
        return [entry.value for entry in self.entries]


def _check_step(name: str, step: PerturbedValue):
    if step <= ZERO:
        raise RejectedInputError(f"staircase step {name} must be positive, got {step}")


def staircase_sequence(a: PerturbedLike, b: PerturbedLike, count: int) -> list[StaircaseEntry]:
    """First `count` entries of N(a, b) with lattice witnesses.

    Ties between distinct lattice points are ordered lexicographically on (m, n).

    Args:
        a: positive step for m
        b: positive step for n
        count: number of entries to produce

    Returns:
        list of StaircaseEntry, nondecreasing in value

    Raises:
        RejectedInputError: if a or b is not positive or count is negative
    """
    a = PerturbedValue.coerce(a)
    b = PerturbedValue.coerce(b)
    _check_step("a", a)
    _check_step("b", b)
    if count < 0:
        raise RejectedInputError(f"count must be nonnegative, got {count}")

    # Each lattice point (m, n) is pushed exactly once: from (m-1, n), or from (0, n-1) if m = 0.
    heap: list[tuple[PerturbedValue, int, int]] = [(ZERO, 0, 0)]
    entries: list[StaircaseEntry] = []
    while len(entries) < count:
        value, m, n = heapq.heappop(heap)
        entries.append(StaircaseEntry(value, m, n))
        heapq.heappush(heap, (value + a, m + 1, n))
        if m == 0:
            heapq.heappush(heap, (value + b, 0, n + 1))

    logger.debug(f"Staircase N({a}, {b}): generated {len(entries)} entries")
    return entries


def build_staircase(a: PerturbedLike, b: PerturbedLike, count: int) -> Staircase:
    """Staircase value for the first `count` entries of N(a, b)."""
    entries = staircase_sequence(a, b, count)
    return Staircase(PerturbedValue.coerce(a), PerturbedValue.coerce(b), tuple(entries))


def repeat_count(stair: Staircase, k: int) -> int:
    """Number of indices j <= k with N_j = N_k.

    Raises:
        RangeError: if k is beyond the generated length
    """
    if k < 0:
        raise RangeError(f"index must be nonnegative, got {k}")
    target = stair[k].value
    count = 1
    j = k - 1
    while j >= 0 and stair.entries[j].value == target:
        count += 1
        j -= 1
    return count
