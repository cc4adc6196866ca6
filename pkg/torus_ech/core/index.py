"""ECH index and its components for T(2,q).

All values are integers; the only rational intermediate (the elliptic total CZ closed form)
is evaluated with Fraction and checked integral.

Provides:
  - EuclideanSplit: E = q*m + r with 0 <= r < q
  - cz / cz_via_monodromy / cz_via_ledger: Conley-Zehnder indices of iterates
  - total_cz / total_cz_direct: CZ^I summed over iterates
  - ChernClass / relative_chern: relative first Chern numbers
  - q_pairing / q_pairing_binding / derive_cover_self_pairing: relative intersection pairing
  - IndexComponents / ech_index_components / ech_index: the ECH index
  - binding_index: index of b^B evaluated in a chosen trivialization
  - self_linking: self-linking number of the transverse T(2,q)
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from loguru import logger

from torus_ech.core.exact import perturbed_floor
from torus_ech.core.orbits import FibrationParams, Orbit, ReebCurrent
from torus_ech.core.trivializations import (
    Cover,
    OrbitType,
    Trivialization,
    cover_for,
    monodromy_angle,
    monodromy_table,
    triv_offset,
)
from torus_ech.errors import RejectedInputError, TrivializationDomainError, UnderivableError


@dataclass(frozen=True)
class EuclideanSplit:
    """E = q*m + r with 0 <= r <= q - 1."""

    m: int
    r: int

    @classmethod
    def of(cls, params: FibrationParams, E: int) -> "EuclideanSplit":
        if E < 0:
            raise RejectedInputError(f"multiplicity must be nonnegative, got {E}")
        m, r = divmod(E, params.q)
        return cls(m, r)


def _ceil_div(numerator: int, denominator: int) -> int:
    return -(-numerator // denominator)


# =============================================================================
# Conley-Zehnder indices
# =============================================================================


def cz(params: FibrationParams, orbit: Orbit | str, k: int, triv: Trivialization | str) -> int:
    """Conley-Zehnder index of orbit^k in the given trivialization (closed forms).

    Args:
        params: fibration parameters
        orbit: b, h or e
        k: iterate, >= 1
        triv: trivialization; must be defined over orbit^k

    Raises:
        RejectedInputError: if k < 1
        TrivializationDomainError: if triv is not defined over orbit^k
    """
    if k < 1:
        raise RejectedInputError(f"iterate must be positive, got {k}")
    orbit = Orbit.parse(orbit)
    triv = Trivialization.parse(triv)
    cover_for(params, orbit, k, triv)
    q = params.q

    if triv == Trivialization.ORB:
        if orbit == Orbit.B:
            return 2 * (2 + q) * k + 1
        if orbit == Orbit.H:
            return (2 + q) * k
        split = EuclideanSplit.of(params, k)
        return 2 * (q + 2) * split.m + 2 * split.r + 2 * _ceil_div(2 * split.r, q) - 1

    if orbit == Orbit.B:
        if triv == Trivialization.PAGE:
            return 4 * q * k + 1
        # constant, and both surface trivializations, agree with the constant one on b
        return 1
    if orbit == Orbit.E:
        return -1
    return 0


def cz_via_monodromy(
    params: FibrationParams,
    orbit: Orbit | str,
    k: int,
    triv: Trivialization | str = Trivialization.ORB,
) -> int:
    """Conley-Zehnder index from the monodromy table.

    Elliptic: 2*floor(k*theta) + 1 with the perturbed floor. Hyperbolic: k*n.
    Trivializations other than Orb are accepted for b only.
    """
    if k < 1:
        raise RejectedInputError(f"iterate must be positive, got {k}")
    orbit = Orbit.parse(orbit)
    triv = Trivialization.parse(triv)
    monodromy = monodromy_table(params)[orbit]
    if monodromy.orbit_type == OrbitType.NEGATIVE_HYPERBOLIC:
        if triv != Trivialization.ORB:
            raise TrivializationDomainError("hyperbolic monodromy is only tabulated in orb")
        return k * monodromy.angle.base.numerator
    angle = monodromy_angle(params, orbit, triv)
    return 2 * perturbed_floor(angle * k) + 1


def cz_via_ledger(
    params: FibrationParams, orbit: Orbit | str, k: int, triv: Trivialization | str
) -> int:
    """CZ_orb transported to `triv` through the ledger.

    CZ_tau(x^k) - CZ_orb(x^k) = 2 (k/p) (tau_orb(x^p) - tau(x^p)) over the base cover x^p.
    """
    orbit = Orbit.parse(orbit)
    triv = Trivialization.parse(triv)
    cover = cover_for(params, orbit, k, triv)
    base = cz(params, orbit, k, Trivialization.ORB)
    shift = triv_offset(params, cover, Trivialization.ORB, triv)
    return base + 2 * (k // cover.period) * shift


def _total_cz_elliptic_fiber(params: FibrationParams, E: int) -> int:
    q = params.q
    split = EuclideanSplit.of(params, E)
    m, r = split.m, split.r
    total = (
        Fraction(q + 2, q) * E * E
        + (q + 1) * m
        - Fraction(2, q) * r * r
        + 2 * r
        + (2 * r // q) * (2 * r - q + 1)
    )
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral CZ total {total} for e^{E}, q={q}")
    return total.numerator


def total_cz(
    params: FibrationParams,
    current: ReebCurrent,
    triv: Trivialization | str = Trivialization.ORB,
) -> int:
    """CZ^I of the current: the sum of CZ over iterates 1..multiplicity of each orbit.

    Orb accepts any current. Other trivializations accept pure binding currents only.

    Raises:
        TrivializationDomainError: for a mixed current outside Orb
    """
    triv = Trivialization.parse(triv)
    q = params.q
    B, H, E = current.B, current.H, current.E

    if triv != Trivialization.ORB:
        if H or E:
            raise TrivializationDomainError(
                f"CZ^I in {triv.value} is only available for pure binding currents, "
                f"got {current.render()}"
            )
        if triv == Trivialization.PAGE:
            return 2 * q * B * (B + 1) + B
        return B

    binding_part = (q + 2) * B * B + (q + 3) * B
    hyperbolic_part = (2 + q) * H * (H + 1) // 2
    return binding_part + hyperbolic_part + _total_cz_elliptic_fiber(params, E)


def total_cz_direct(
    params: FibrationParams,
    current: ReebCurrent,
    triv: Trivialization | str = Trivialization.ORB,
) -> int:
    """Direct iterate sum of cz; the oracle for total_cz."""
    return sum(
        cz(params, orbit, k, triv)
        for orbit in (Orbit.B, Orbit.H, Orbit.E)
        for k in range(1, current.multiplicity(orbit) + 1)
    )


# =============================================================================
# Relative first Chern numbers
# =============================================================================


class ChernClass(str, Enum):
    """Relative classes bounded by the orbits or their covers."""

    Z_B = "Z_b"
    Z_E = "Z_e"
    Z_H = "Z_h"
    Z_EQ = "Z_e^q"
    Z_H2 = "Z_h^2"
    SIGMA = "[Σ]"  # the page; equal to Z_b

    @classmethod
    def parse(cls, value: "str | ChernClass") -> "ChernClass":
        if isinstance(value, ChernClass):
            return value
        aliases = {"sigma": cls.SIGMA, "[sigma]": cls.SIGMA, "σ": cls.SIGMA, "[σ]": cls.SIGMA}
        text = value.strip()
        if text.lower() in aliases:
            return aliases[text.lower()]
        for member in cls:
            if member.value.lower() == text.lower():
                return member
        raise RejectedInputError(f"unknown class {value!r}")

    def boundary_cover(self, params: FibrationParams) -> Cover:
        return {
            ChernClass.Z_B: Cover(Orbit.B, 1),
            ChernClass.SIGMA: Cover(Orbit.B, 1),
            ChernClass.Z_E: Cover(Orbit.E, 1),
            ChernClass.Z_H: Cover(Orbit.H, 1),
            ChernClass.Z_EQ: Cover(Orbit.E, params.q),
            ChernClass.Z_H2: Cover(Orbit.H, 2),
        }[self]


def relative_chern(
    params: FibrationParams, cls: ChernClass | str, triv: Trivialization | str
) -> int:
    """Relative first Chern number c_tau(cls).

    c_orb vanishes on every listed class; other values follow from
    c_tau(Z) - c_tau'(Z) = m (tau(x) - tau'(x)) with the boundary multiplicity m = 1.

    Raises:
        UnderivableError: if the ledger has no offset for the class boundary in `triv`
    """
    cls = ChernClass.parse(cls)
    triv = Trivialization.parse(triv)
    if triv == Trivialization.ORB:
        return 0
    cover = cls.boundary_cover(params)
    try:
        return triv_offset(params, cover, triv, Trivialization.ORB)
    except TrivializationDomainError as e:
        raise UnderivableError(f"c_{triv.value}({cls.value}) is not derivable: {e}")


def self_linking(params: FibrationParams) -> int:
    """sl = -c_page([Σ]) = q - 2 = pq - p - q."""
    return -relative_chern(params, ChernClass.SIGMA, Trivialization.PAGE)


# =============================================================================
# Relative intersection pairing
# =============================================================================


_CLASS_CURRENTS = {
    ChernClass.Z_B: ReebCurrent(1, 0, 0),
    ChernClass.SIGMA: ReebCurrent(1, 0, 0),
    ChernClass.Z_H: ReebCurrent(0, 1, 0),
    ChernClass.Z_E: ReebCurrent(0, 0, 1),
}


def _pairing_table(params: FibrationParams) -> dict[tuple[Orbit, Orbit], int]:
    q = params.q
    table = {
        (Orbit.B, Orbit.B): q - 2,
        (Orbit.H, Orbit.H): -1,
        (Orbit.E, Orbit.E): -1,
        (Orbit.E, Orbit.H): 1,
        (Orbit.E, Orbit.B): 2,
        (Orbit.H, Orbit.B): q,
    }
    for (x, y), value in list(table.items()):
        table[(y, x)] = value
    return table


def _as_current(value: "ChernClass | str | ReebCurrent") -> ReebCurrent:
    if isinstance(value, ReebCurrent):
        return value
    cls = ChernClass.parse(value)
    if cls not in _CLASS_CURRENTS:
        raise RejectedInputError(f"Q_orb is tabulated on Z_b, Z_h, Z_e only, got {cls.value}")
    return _CLASS_CURRENTS[cls]


def q_pairing(
    params: FibrationParams,
    first: "ChernClass | str | ReebCurrent",
    second: "ChernClass | str | ReebCurrent | None" = None,
) -> int:
    """Q_orb, bilinear in the multiplicities; `second` defaults to `first`.

    Q_orb(B Z_b + H Z_h + E Z_e) = B^2(q-2) - H^2 - E^2 + 2BHq + 4BE + 2HE.
    """
    alpha = _as_current(first)
    beta = alpha if second is None else _as_current(second)
    table = _pairing_table(params)
    orbits = (Orbit.B, Orbit.H, Orbit.E)
    return sum(
        alpha.multiplicity(x) * beta.multiplicity(y) * table[(x, y)]
        for x in orbits
        for y in orbits
    )


def q_pairing_binding(params: FibrationParams, triv: Trivialization | str) -> int:
    """Q_tau(Z_b) from Q_page(Z_b) = 0 and Q_tau - Q_tau' = tau(b) - tau'(b)."""
    triv = Trivialization.parse(triv)
    return triv_offset(params, Cover(Orbit.B, 1), triv, Trivialization.PAGE)


@dataclass(frozen=True)
class CoverPairingChain:
    """Derivation of Q_orb(Z_x) through the cover x^p and its surface trivialization.

    Attributes:
        orbit: e or h
        period: q for e, 2 for h
        surface_value: Q_surface(Z_{x^p})
        offset: tau_orb(x^p) - tau_surface(x^p)
        multiple_value: Q_orb(p Z_x) = surface_value + p * offset
        simple_value: Q_orb(Z_x) = multiple_value / p^2
    """

    orbit: Orbit
    period: int
    surface_value: int
    offset: int
    multiple_value: int
    simple_value: Fraction


def derive_cover_self_pairing(params: FibrationParams, orbit: Orbit | str) -> CoverPairingChain:
    """Derive Q_orb(Z_e) or Q_orb(Z_h) from the surface trivialization over the cover."""
    orbit = Orbit.parse(orbit)
    if orbit == Orbit.E:
        period, surface = params.q, Trivialization.SURFACE_E
    elif orbit == Orbit.H:
        period, surface = 2, Trivialization.SURFACE_H
    else:
        raise RejectedInputError("cover derivation applies to e and h only")

    # the fiber surface contributes nothing; the page contributes Q_surface(Z_b)
    surface_value = q_pairing_binding(params, surface)
    offset = triv_offset(params, Cover(orbit, period), Trivialization.ORB, surface)
    multiple_value = surface_value + period * offset
    chain = CoverPairingChain(
        orbit=orbit,
        period=period,
        surface_value=surface_value,
        offset=offset,
        multiple_value=multiple_value,
        simple_value=Fraction(multiple_value, period * period),
    )
    logger.debug(f"Q_orb({period}Z_{orbit.value}) = {multiple_value} for q={params.q}")
    return chain


# =============================================================================
# ECH index
# =============================================================================


@dataclass(frozen=True)
class IndexComponents:
    """c + Q + CZ^I in the orbibundle trivialization."""

    chern: int
    pairing: int
    cz_total: int

    @property
    def total(self) -> int:
        return self.chern + self.pairing + self.cz_total

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.chern, self.pairing, self.cz_total)


def ech_index_components(params: FibrationParams, current: ReebCurrent) -> IndexComponents:
    """Components of the ECH index in the orbibundle trivialization."""
    return IndexComponents(
        chern=0,
        pairing=q_pairing(params, current),
        cz_total=total_cz(params, current),
    )


def ech_index(params: FibrationParams, current: ReebCurrent) -> int:
    """Closed-form ECH index of b^B h^H e^E relative to the empty current.

    Admissible currents give a nonnegative even integer. The formula evaluates for any H;
    for H >= 2 it no longer matches the component sum.
    """
    q = params.q
    B, H, E = current.B, current.H, current.E
    if not current.admissible:
        logger.debug(f"Evaluating the index on non-admissible {current.render()} (q={q})")
    split = EuclideanSplit.of(params, E)
    m, r = split.m, split.r
    return (
        2 * E * H
        - H * H
        + (q + 2) * H
        + 2 * q * B * B
        + (q + 3) * B
        + 4 * E * B
        + 2 * q * H * B
        # (2/q)(E^2 - r^2) stays integral: E^2 - r^2 = q m (q m + 2 r)
        + 2 * m * (q * m + 2 * r)
        + (q + 1) * m
        + 2 * r
        + (2 * r // q) * (2 * r - q + 1)
    )


def binding_index(params: FibrationParams, B: int, triv: Trivialization | str) -> int:
    """B c_tau(Z_b) + B^2 Q_tau(Z_b) + sum_{k<=B} CZ_tau(b^k); independent of tau."""
    triv = Trivialization.parse(triv)
    return (
        B * relative_chern(params, ChernClass.Z_B, triv)
        + B * B * q_pairing_binding(params, triv)
        + total_cz(params, ReebCurrent(B, 0, 0), triv)
    )
