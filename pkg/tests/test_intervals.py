import math

import numpy as np
import pytest

from bounds import AlphabetPair, ConfidenceQuery, delta_I, epsilon_for_confidence
from dist_core import CountTable, UnitTag, mutual_information, to_distribution
from errors import DomainError
from intervals import (
    Interval,
    IntervalMethod,
    entropy_bounds,
    interval,
    interval_thm2,
    interval_thm4,
    sample_size_thm3,
)

EXAMPLE_ONE = CountTable([[44950, 5058], [4868, 45124]])
EXAMPLE_TWO = CountTable([[7996, 2023], [18012, 71969]])
BINARY = AlphabetPair(2, 2)


def _random_counts(rng, low=1000, high=100_000):
    mx, my = (int(size) for size in rng.integers(2, 4, size=2))
    n = int(rng.integers(low, high))
    probs = rng.dirichlet(np.ones(mx * my))
    return CountTable(rng.multinomial(n, probs).reshape(mx, my))


@pytest.mark.parametrize(
    ("counts", "lower", "upper"),
    [(EXAMPLE_ONE, 0.38170, 0.68504), (EXAMPLE_TWO, -0.04743, 0.25591)],
    ids=["example-1", "example-2"],
)
def test_thm2_table_values(counts, lower, upper):
    result = interval_thm2(counts, 0.05)
    assert result.unit is UnitTag.BITS
    assert result.method is IntervalMethod.THM2
    assert result.lower == pytest.approx(lower, abs=5e-5)
    assert result.upper == pytest.approx(upper, abs=5e-5)
    assert result.width == pytest.approx(0.30334, abs=5e-5)


@pytest.mark.parametrize(
    ("counts", "lower", "upper"),
    [(EXAMPLE_ONE, 0.51645, 0.55091), (EXAMPLE_TWO, 0.05269, 0.15721)],
    ids=["example-1", "example-2"],
)
def test_thm4_table_values(counts, lower, upper):
    result = interval_thm4(counts, 0.05)
    assert result.method is IntervalMethod.THM4
    assert result.lower == pytest.approx(lower, abs=2e-4)
    assert result.upper == pytest.approx(upper, abs=2e-4)


def test_thm2_width_does_not_depend_on_data():
    rng = np.random.default_rng(3)
    expected = 2 * delta_I(
        epsilon_for_confidence(ConfidenceQuery(alpha=0.05, n=100_000, alphabet=BINARY)), BINARY
    )
    for _ in range(20):
        counts = CountTable(rng.multinomial(100_000, rng.dirichlet(np.ones(4))).reshape(2, 2))
        result = interval_thm2(counts, 0.05, unit=UnitTag.NATS)
        assert result.width == pytest.approx(expected, rel=1e-12)


def test_thm2_is_centered_on_the_plug_in_estimate():
    result = interval_thm2(EXAMPLE_ONE, 0.05, unit="nats")
    estimate = mutual_information(to_distribution(EXAMPLE_ONE))
    assert (result.lower + result.upper) / 2 == pytest.approx(estimate, abs=1e-12)
    assert result.contains(estimate)


def test_thm4_is_nested_in_thm2():
    rng = np.random.default_rng(19)
    for _ in range(100):
        counts = _random_counts(rng)
        wide = interval_thm2(counts, 0.05, unit=UnitTag.NATS)
        narrow = interval_thm4(counts, 0.05, unit=UnitTag.NATS)
        assert wide.lower - 1e-9 <= narrow.lower <= narrow.upper <= wide.upper + 1e-9


def test_thm4_contains_the_plug_in_estimate():
    rng = np.random.default_rng(29)
    for _ in range(50):
        counts = _random_counts(rng, low=50, high=5000)
        result = interval_thm4(counts, 0.05, unit=UnitTag.NATS)
        estimate = mutual_information(to_distribution(counts))
        assert result.lower - 1e-12 <= estimate <= result.upper + 1e-12


def test_entropy_bounds_follow_table_orientation():
    counts = CountTable([[50, 7, 13], [9, 30, 21]])
    direct = entropy_bounds(counts, 0.05)
    flipped = entropy_bounds(counts.transposed(), 0.05)

    assert direct.joint_min.argopt.shape == (2, 3)
    assert flipped.joint_min.argopt.shape == (3, 2)
    assert flipped.joint_max.argopt == pytest.approx(direct.joint_max.argopt.T, abs=1e-12)
    assert flipped.joint_min.argopt == pytest.approx(direct.joint_min.argopt.T, abs=1e-12)
    assert flipped.x_max.argopt == pytest.approx(direct.y_max.argopt, abs=1e-12)
    assert flipped.y_min.argopt == pytest.approx(direct.x_min.argopt, abs=1e-12)
    assert flipped.epsilon == direct.epsilon
    assert flipped.i_min == pytest.approx(direct.i_min, abs=1e-12)
    assert flipped.i_max == pytest.approx(direct.i_max, abs=1e-12)


@pytest.mark.parametrize("method", list(IntervalMethod))
def test_intervals_are_invariant_under_transposition(method):
    rng = np.random.default_rng(37)
    for _ in range(20):
        counts = _random_counts(rng, low=100, high=10_000)
        direct = interval(counts, 0.05, method)
        flipped = interval(counts.transposed(), 0.05, method)
        assert flipped.lower == pytest.approx(direct.lower, abs=1e-12)
        assert flipped.upper == pytest.approx(direct.upper, abs=1e-12)


def test_clamp_restricts_to_feasible_range():
    raw = interval_thm2(EXAMPLE_TWO, 0.05)
    clamped = interval_thm2(EXAMPLE_TWO, 0.05, clamp=True)
    assert raw.lower < 0.0
    assert clamped.lower == 0.0
    assert clamped.upper == raw.upper


def test_tiny_sample_gives_vacuous_half_width():
    single = CountTable([[1, 0], [0, 0]])
    result = interval_thm2(single, 0.05, unit=UnitTag.NATS)
    assert result.epsilon_used >= 2.0
    assert result.lower == pytest.approx(-math.log(2))
    assert result.upper == pytest.approx(math.log(2))

    clamped = interval_thm2(single, 0.05, unit=UnitTag.BITS, clamp=True)
    assert (clamped.lower, clamped.upper) == (0.0, pytest.approx(1.0))

    thm4 = interval_thm4(single, 0.05, unit=UnitTag.NATS, clamp=True)
    assert thm4.lower == 0.0
    assert thm4.upper == pytest.approx(math.log(2))


def test_interval_dispatch_and_units():
    bits = interval(EXAMPLE_ONE, 0.05, "thm4")
    nats = interval(EXAMPLE_ONE, 0.05, IntervalMethod.THM4, unit="nats")
    assert nats.lower == pytest.approx(bits.lower * math.log(2), rel=1e-12)
    assert nats.upper == pytest.approx(bits.upper * math.log(2), rel=1e-12)
    converted = bits.to_unit(UnitTag.NATS)
    assert converted.lower == pytest.approx(nats.lower, rel=1e-12)
    assert converted.unit is UnitTag.NATS
    assert bits.to_unit("bits") is bits


def test_interval_value_object_validation():
    with pytest.raises(ValueError):
        Interval(0.5, 0.4, UnitTag.BITS, IntervalMethod.THM2, epsilon_used=0.1, alpha=0.05)
    with pytest.raises(ValueError):
        Interval(0.1, 0.4, UnitTag.BITS, IntervalMethod.THM2, epsilon_used=0.0, alpha=0.05)


def test_interval_rejects_bad_alpha():
    with pytest.raises(DomainError):
        interval_thm2(EXAMPLE_ONE, 0.0)
    with pytest.raises(DomainError):
        interval_thm4(EXAMPLE_ONE, 1.5)


def test_sample_size_round_trip():
    epsilon = epsilon_for_confidence(ConfidenceQuery(alpha=0.05, n=100_000, alphabet=BINARY))
    gamma = delta_I(epsilon, BINARY) + 1e-9
    plan = sample_size_thm3(gamma, 0.05, BINARY)
    assert plan.n_required == 100_000
    assert plan.epsilon_solved == pytest.approx(epsilon, rel=1e-6)

    counts = CountTable([[25_000, 25_000], [25_000, 25_000]])
    half_width = interval_thm2(counts, 0.05, unit=UnitTag.NATS).width / 2
    assert half_width <= gamma + 1e-9


def test_sample_size_for_rounded_gamma_in_bits():
    plan = sample_size_thm3(0.151676 * math.log(2), 0.05, BINARY)
    assert abs(plan.n_required - 100_000) <= 50


def test_sample_size_monotonicity():
    by_gamma = [sample_size_thm3(g, 0.05, BINARY).n_required for g in (0.05, 0.1, 0.2, 0.4)]
    by_alpha = [sample_size_thm3(0.1, a, BINARY).n_required for a in (0.001, 0.01, 0.05, 0.2)]
    assert by_gamma == sorted(by_gamma, reverse=True)
    assert by_alpha == sorted(by_alpha, reverse=True)
    assert len(set(by_gamma)) == 4


def test_sample_size_domain_errors():
    with pytest.raises(DomainError, match="log"):
        sample_size_thm3(math.log(2), 0.05, BINARY)
    with pytest.raises(DomainError):
        sample_size_thm3(0.0, 0.05, BINARY)
    with pytest.raises(DomainError):
        sample_size_thm3(0.1, 0.0, BINARY)
    assert sample_size_thm3(0.1, 0.05, AlphabetPair(3, 4)).n_required >= 1
