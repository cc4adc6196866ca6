from fractions import Fraction

import pytest

from torus_ech.core.exact import (
    PerturbedValue,
    build_staircase,
    format_perturbed,
    parse_perturbed,
    perturbed_floor,
    repeat_count,
    staircase_sequence,
)
from torus_ech.errors import RangeError, RejectedInputError


def pv(base, delta=0) -> PerturbedValue:
    return PerturbedValue(Fraction(base), delta)


# =============================================================================
# PerturbedValue
# =============================================================================


def test_order_is_lexicographic():
    assert pv(1, 1) > pv(1)
    assert pv(1, -1) < 1
    assert pv(Fraction(3, 2), 5) < 2
    assert pv(2, -100) > pv(Fraction(3, 2), 100)
    assert sorted([pv(1, 1), pv(1), pv(1, -1)]) == [pv(1, -1), pv(1), pv(1, 1)]


def test_equality_with_plain_numbers():
    assert pv(3) == 3
    assert pv(Fraction(1, 3)) == Fraction(1, 3)
    assert pv(3, 1) != 3
    assert hash(pv(3)) == hash(3)
    assert hash(pv(Fraction(1, 3))) == hash(Fraction(1, 3))
    assert len({pv(3), 3, Fraction(3)}) == 1
    assert len({pv(3, 1), pv(3), 3}) == 2


def test_arithmetic():
    assert pv(1, 1) + pv(Fraction(1, 2), 2) == pv(Fraction(3, 2), 3)
    assert pv(5, 1) - 2 == pv(3, 1)
    assert 2 - pv(5, 1) == pv(-3, -1)
    assert pv(Fraction(3, 2), 1) * 4 == pv(6, 4)
    assert 3 * pv(1, -1) == pv(3, -3)
    assert -pv(2, 1) == pv(-2, -1)


def test_division_keeps_integral_delta():
    assert pv(6, 2) / 2 == pv(3, 1)
    assert pv(1) / 3 == pv(Fraction(1, 3))
    with pytest.raises(RejectedInputError):
        pv(6, 1) / 2
    with pytest.raises(ZeroDivisionError):
        pv(1) / 0


def test_rejects_floats_and_fractional_delta():
    with pytest.raises(RejectedInputError):
        PerturbedValue(0.5)
    with pytest.raises(RejectedInputError):
        PerturbedValue(Fraction(1), Fraction(1, 2))
    with pytest.raises(RejectedInputError):
        PerturbedValue.coerce("1")


@pytest.mark.parametrize(
    "value, expected",
    [
        (pv(2), 2),
        (pv(2, 1), 2),
        (pv(2, -1), 1),
        (pv(Fraction(5, 2), -1), 2),
        (pv(Fraction(-1, 2), 3), -1),
        (pv(0, -1), -1),
        (7, 7),
    ],
)
def test_perturbed_floor(value, expected):
    assert perturbed_floor(value) == expected


def _random_value(rng) -> PerturbedValue:
    # narrow ranges so sampled triples include ties
    return pv(Fraction(rng.randint(-8, 8), rng.randint(1, 3)), rng.randint(-2, 2))


def test_floor_is_shift_equivariant(rng):
    for _ in range(500):
        x = _random_value(rng)
        shift = rng.randint(-5, 5)
        assert perturbed_floor(x + pv(1)) == perturbed_floor(x) + 1
        assert perturbed_floor(x + shift) == perturbed_floor(x) + shift


def test_order_is_total(rng):
    for _ in range(2000):
        x, y, z = _random_value(rng), _random_value(rng), _random_value(rng)
        assert [x < y, x == y, x > y].count(True) == 1
        assert (x <= y) == (not x > y)
        if x <= y and y <= z:
            assert x <= z
        if x < y and y < z:
            assert x < z


@pytest.mark.parametrize(
    "value, text",
    [
        (pv(6), "6"),
        (pv(6, 1), "6+δ"),
        (pv(Fraction(3, 2), 2), "3/2+2δ"),
        (pv(3, -1), "3−δ"),
        (pv(Fraction(-1, 3), -4), "-1/3−4δ"),
    ],
)
def test_format_perturbed(value, text):
    assert format_perturbed(value) == text
    assert str(value) == text


@pytest.mark.parametrize(
    "text, expected",
    [
        ("6", pv(6)),
        ("6+δ", pv(6, 1)),
        ("6+d", pv(6, 1)),
        ("3/2 + 2delta", pv(Fraction(3, 2), 2)),
        ("3−δ", pv(3, -1)),
        ("3-2d", pv(3, -2)),
        ("−1/2", pv(Fraction(-1, 2))),
    ],
)
def test_parse_perturbed(text, expected):
    assert parse_perturbed(text) == expected


@pytest.mark.parametrize("text", ["", "six", "1.5", "1/2+x", "δ"])
def test_parse_perturbed_rejects(text):
    with pytest.raises(RejectedInputError):
        parse_perturbed(text)


# =============================================================================
# Staircase
# =============================================================================


def test_staircase_two_three():
    values = [entry.value for entry in staircase_sequence(2, 3, 19)]
    assert values == [0, 2, 3, 4, 5, 6, 6, 7, 8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 12]


def test_staircase_ties_break_lexicographically():
    entries = staircase_sequence(2, 3, 7)
    assert entries[5].witness == (0, 2)
    assert entries[6].witness == (3, 0)


def test_staircase_with_delta():
    stair = build_staircase(1, pv(1, 1), 3)
    assert stair[2].value == pv(1, 1)
    assert stair[2].witness == (0, 1)
    stair = build_staircase(2, pv(3, 1), 6)
    assert stair[5].value == 6
    assert stair[5].witness == (3, 0)


@pytest.mark.parametrize(
    "a, b",
    [
        (2, 3),
        (2, 31),
        (Fraction(1, 2), Fraction(1, 5)),
        (1, pv(Fraction(3, 2), 1)),
        (pv(2), pv(7, 1)),
        (3, 3),
    ],
)
def test_staircase_matches_brute_force(a, b, brute_staircase):
    count = 150
    entries = staircase_sequence(a, b, count)
    expected = brute_staircase(a, b, count)
    assert [(e.value, e.m, e.n) for e in entries] == expected


def test_staircase_random_steps(rng, brute_staircase):
    for _ in range(10):
        a = Fraction(rng.randint(1, 9), rng.randint(1, 4))
        b = pv(Fraction(rng.randint(1, 9), rng.randint(1, 4)), rng.choice([-1, 0, 1]))
        if b <= 0:
            continue
        entries = staircase_sequence(a, b, 80)
        assert [(e.value, e.m, e.n) for e in entries] == brute_staircase(a, b, 80)


def test_staircase_zero_count():
    assert staircase_sequence(2, 3, 0) == []


@pytest.mark.parametrize("a, b", [(0, 1), (1, -1), (pv(0, -1), 2), (pv(0), pv(0))])
def test_staircase_rejects_nonpositive_steps(a, b):
    with pytest.raises(RejectedInputError):
        staircase_sequence(a, b, 5)


def test_staircase_index_out_of_range():
    stair = build_staircase(2, 3, 4)
    assert len(stair) == 4
    with pytest.raises(RangeError):
        stair[4]
    with pytest.raises(RangeError):
        repeat_count(stair, 9)


@pytest.mark.parametrize("k, expected", [(0, 1), (5, 1), (6, 2), (16, 1), (17, 2), (18, 3)])
def test_repeat_count(k, expected):
    stair = build_staircase(2, 3, 19)
    assert repeat_count(stair, k) == expected
