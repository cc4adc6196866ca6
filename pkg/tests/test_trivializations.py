from fractions import Fraction

import pytest

from torus_ech.core import trivializations
from torus_ech.core.exact import PerturbedValue
from torus_ech.core.orbits import FibrationParams, Orbit
from torus_ech.core.trivializations import (
    Cover,
    OrbitType,
    Trivialization,
    TrivOffsetLedger,
    cover_for,
    get_ledger,
    monodromy_angle,
    monodromy_table,
    parse_cover,
    rotation_number,
    triv_offset,
)
from torus_ech.errors import LedgerInconsistencyError, TrivializationDomainError

ORB = Trivialization.ORB
PAGE = Trivialization.PAGE
CONSTANT = Trivialization.CONSTANT
SURFACE_E = Trivialization.SURFACE_E
SURFACE_H = Trivialization.SURFACE_H


def test_parse():
    assert Trivialization.parse("Page") == PAGE
    assert Trivialization.parse("surface-e") == SURFACE_E
    with pytest.raises(TrivializationDomainError):
        Trivialization.parse("seifert")


def test_seeded_offsets_over_binding(params):
    q = params.q
    assert triv_offset(params, "b", CONSTANT, PAGE) == 2 * q
    assert triv_offset(params, "b", CONSTANT, ORB) == 2 + q
    assert triv_offset(params, "b", ORB, PAGE) == q - 2


def test_closure_over_binding(params):
    q = params.q
    assert triv_offset(params, "b", PAGE, CONSTANT) == -2 * q
    assert triv_offset(params, "b", SURFACE_E, PAGE) == 2 * q
    assert triv_offset(params, "b", SURFACE_H, ORB) == 2 + q
    assert triv_offset(params, "b", SURFACE_E, SURFACE_H) == 0
    assert triv_offset(params, Orbit.B, PAGE, PAGE) == 0


def test_offsets_over_covers(params):
    q = params.q
    assert triv_offset(params, "e^q", SURFACE_E, ORB) == 2 + q
    assert triv_offset(params, f"e^{q}", ORB, SURFACE_E) == -(2 + q)
    assert triv_offset(params, "h^2", SURFACE_H, ORB) == 2 + q
    assert triv_offset(params, "e", ORB, ORB) == 0
    assert triv_offset(params, Cover(Orbit.H, 1), ORB, ORB) == 0


def test_offsets_outside_domain(q3):
    with pytest.raises(TrivializationDomainError):
        triv_offset(q3, "e", PAGE, ORB)
    with pytest.raises(TrivializationDomainError):
        triv_offset(q3, "h^2", SURFACE_E, ORB)
    with pytest.raises(TrivializationDomainError):
        triv_offset(q3, "e^4", ORB, ORB)


def test_ledger_is_cached_and_closed(params):
    ledger = get_ledger(params)
    assert ledger is get_ledger(FibrationParams(params.q))
    assert ledger.q == params.q
    # 25 ordered pairs over b, 1 each over e and h, 4 each over e^q and h^2
    assert len(ledger.stored_triples()) == 25 + 1 + 1 + 4 + 4


def test_inconsistent_seeds_are_rejected(monkeypatch, q3):
    b = Cover(Orbit.B, 1)

    def seeds(params):
        return [
            (b, CONSTANT, PAGE, 6),
            (b, CONSTANT, ORB, 5),
            (b, ORB, PAGE, 2),
        ]

    monkeypatch.setattr(trivializations, "_seed_offsets", seeds)
    with pytest.raises(LedgerInconsistencyError):
        TrivOffsetLedger.build(q3)


def test_cover_for(q3):
    assert cover_for(q3, "b", 5, PAGE) == Cover(Orbit.B, 1)
    assert cover_for(q3, "e", 2, ORB) == Cover(Orbit.E, 1)
    assert cover_for(q3, "e", 6, SURFACE_E) == Cover(Orbit.E, 3)
    assert cover_for(q3, "h", 4, SURFACE_H) == Cover(Orbit.H, 2)
    with pytest.raises(TrivializationDomainError):
        cover_for(q3, "e", 2, SURFACE_E)
    with pytest.raises(TrivializationDomainError):
        cover_for(q3, "h", 3, SURFACE_H)
    with pytest.raises(TrivializationDomainError):
        cover_for(q3, "h", 2, PAGE)


def test_parse_cover(q5):
    assert parse_cover(q5, "e^q") == Cover(Orbit.E, 5)
    assert parse_cover(q5, "h^2") == Cover(Orbit.H, 2)
    assert parse_cover(q5, "b") == Cover(Orbit.B, 1)
    assert Cover(Orbit.E, 5).label() == "e^5"
    with pytest.raises(TrivializationDomainError):
        parse_cover(q5, "e^x")


def test_monodromy_table(params):
    q = params.q
    table = monodromy_table(params)
    assert table["b"].angle == PerturbedValue(Fraction(2 + q), 1)
    assert table["e"].angle == PerturbedValue(Fraction(2 + q, q), -1)
    assert table["h"].orbit_type == OrbitType.NEGATIVE_HYPERBOLIC
    assert table["h"].angle.base.numerator % 2 == 1


def test_monodromy_angle_shifts_with_framing(params):
    q = params.q
    assert monodromy_angle(params, "b", PAGE) == PerturbedValue(Fraction(2 * q), 1)
    assert monodromy_angle(params, "b", CONSTANT) == PerturbedValue(Fraction(0), 1)
    assert rotation_number(params) == PerturbedValue(Fraction(2 * q), 1)
    with pytest.raises(TrivializationDomainError):
        monodromy_angle(params, "e", PAGE)
