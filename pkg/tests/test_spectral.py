from fractions import Fraction

import pytest

from torus_ech.core import spectral
from torus_ech.core.exact import PerturbedValue, build_staircase, repeat_count
from torus_ech.core.orbits import FibrationParams, ReebCurrent
from torus_ech.core.spectral import (
    RotMode,
    action_filtered_group,
    certified_degree_bound,
    ech_spectrum,
    graded_complex,
    graded_generator,
    knot_filtered_group,
    knot_filtration,
    knot_threshold,
    knot_thresholds,
)
from torus_ech.errors import RejectedInputError

from .conftest import ALL_Q


def pv(base, delta=0) -> PerturbedValue:
    return PerturbedValue(Fraction(base), delta)


def test_spectrum_first_entries(q3):
    entries = ech_spectrum(q3, 2)
    assert [(e.k, e.c_k, e.witness.current.render()) for e in entries] == [
        (0, 0, "∅"),
        (1, Fraction(1, 3), "e"),
    ]


def test_spectrum_binding_entry(q3):
    entry = ech_spectrum(q3, 7)[6]
    assert entry.c_k == 1
    assert entry.witness.current == ReebCurrent(1, 0, 0)


def test_spectrum_single_entry(q5):
    assert [(e.k, e.c_k) for e in ech_spectrum(q5, 1)] == [(0, 0)]
    with pytest.raises(RejectedInputError):
        ech_spectrum(q5, 0)


def test_graded_complex_is_gapless(params):
    generators = graded_complex(params, 300)
    assert [g.grading for g in generators] == list(range(0, 601, 2))
    assert all(g.action == Fraction(g.degree, 2 * params.q) for g in generators)


def test_graded_generator_matches_complex(q5):
    generators = graded_complex(q5, 50)
    assert [graded_generator(q5, k) for k in range(51)] == generators
    with pytest.raises(RejectedInputError):
        graded_generator(q5, -1)


def test_per_grading_lookups_reuse_a_growing_complex(monkeypatch, q7):
    monkeypatch.setattr(spectral, "_COMPLEXES", {})
    builds = []
    build = spectral._build_complex

    def counting_build(q, max_k):
        builds.append(max_k)
        return build(q, max_k)

    monkeypatch.setattr(spectral, "_build_complex", counting_build)
    thresholds = [knot_threshold(q7, k) for k in range(401)]
    ranks = [knot_filtered_group(q7, 2 * k, thresholds[k]) for k in range(401)]

    assert builds == sorted(builds)
    assert ranks == [1] * 401
    assert graded_complex(q7, 400)[-1].grading == 800
    assert len(builds) <= 10
    assert thresholds == knot_thresholds(q7, 401)


def test_certified_degree_bound(q3):
    assert certified_degree_bound(q3, 6) == 12
    assert certified_degree_bound(q3, 0) == 6


def test_spectrum_matches_staircase(params):
    count = 400
    stair = build_staircase(2, params.q, count)
    for k, entry in enumerate(ech_spectrum(params, count)):
        assert 2 * params.q * entry.c_k == stair[k].value
        assert entry.witness.degree == stair[k].value


def test_knot_filtration_values(q5):
    current = ReebCurrent(0, 1, 9)
    assert knot_filtration(q5, current) == 23
    assert knot_filtration(q5, ReebCurrent(2, 0, 1)) == pv(22, 2)
    assert knot_filtration(q5, ReebCurrent(2, 0, 1), RotMode.EXACT) == 22
    with pytest.raises(RejectedInputError):
        knot_filtration(q5, ReebCurrent(0, 2, 0))


def test_knot_threshold_examples(q3):
    assert knot_threshold(q3, 6, RotMode.EXACT) == 6
    assert knot_threshold(q3, 6, "perturbed") == pv(6, 1)
    assert knot_filtered_group(q3, 12, 6, RotMode.EXACT) == 1
    assert knot_filtered_group(q3, 12, 6, RotMode.PERTURBED) == 0
    assert knot_filtered_group(q3, 12, pv(6, 1)) == 1
    assert knot_filtered_group(q3, 7, 100) == 0
    assert knot_filtered_group(q3, -2, 100) == 0


def test_knot_thresholds_against_repeats(params):
    count = 300
    stair = build_staircase(2, params.q, count)
    exact = knot_thresholds(params, count, RotMode.EXACT)
    perturbed = knot_thresholds(params, count, RotMode.PERTURBED)
    generators = graded_complex(params, count - 1)
    for k in range(count):
        value = stair[k].value.base
        assert exact[k] == pv(value)
        assert perturbed[k] == pv(value, repeat_count(stair, k) - 1)
        assert perturbed[k] == pv(value, generators[k].current.B)


def test_knot_rank_is_monotone_and_stabilizes(q5):
    levels = [pv(Fraction(n, 2), delta) for n in range(0, 60) for delta in (-1, 0, 1)]
    for grading in range(0, 40, 2):
        ranks = [knot_filtered_group(q5, grading, K) for K in levels]
        assert ranks == sorted(ranks)
        assert ranks[-1] == 1


def test_rot_mode_parse():
    assert RotMode.parse(" Exact ") == RotMode.EXACT
    with pytest.raises(RejectedInputError):
        RotMode.parse("irrational")


def test_action_filtered_group(q3):
    assert action_filtered_group(q3, 12, 1) == 0
    assert action_filtered_group(q3, 12, Fraction(11, 10)) == 1
    assert action_filtered_group(q3, 0, Fraction(1, 100)) == 1
    assert action_filtered_group(q3, 3, 100) == 0


@pytest.mark.slow
@pytest.mark.parametrize("q", ALL_Q)
def test_spectrum_and_thresholds_at_scale(q):
    params = FibrationParams(q)
    spectrum_count, threshold_count = 5001, 2001
    stair = build_staircase(2, q, spectrum_count)
    for k, entry in enumerate(ech_spectrum(params, spectrum_count)):
        assert 2 * q * entry.c_k == stair[k].value
        assert entry.witness.degree == stair[k].value
    perturbed = knot_thresholds(params, threshold_count)
    for k in range(threshold_count):
        assert perturbed[k] == pv(stair[k].value.base, repeat_count(stair, k) - 1)


@pytest.mark.slow
@pytest.mark.parametrize("q", ALL_Q)
def test_knot_filtered_ranks_at_scale(q):
    params = FibrationParams(q)
    stair = build_staircase(2, q, 2001)
    just_below = PerturbedValue(Fraction(0), 1)
    for grading in range(0, 4002):
        if grading % 2:
            assert knot_filtered_group(params, grading, 10**9) == 0
            continue
        k = grading // 2
        threshold = pv(stair[k].value.base, repeat_count(stair, k) - 1)
        assert knot_filtered_group(params, grading, threshold) == 1
        assert knot_filtered_group(params, grading, threshold - just_below) == 0
