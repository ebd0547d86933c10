import numpy as np
import pytest

from models.probability import ProbSpace, RandomVariable
from services.space import (
    center,
    constant,
    convex_order_leq,
    distribution_of,
    empirical_from_samples,
    expectation,
    increasing_convex_order_leq,
    is_constant,
    left_quantile,
    make_space,
    mirrored_uniform_pair,
    mix,
    permute,
    quantile_integral,
    refine,
    same_distribution,
    stop_loss,
    uniform_space,
)
from utils.errors import (
    EmptySample,
    InvalidParameter,
    InvalidProbability,
    LengthMismatch,
    NonFiniteValue,
    NonPositiveWeight,
    SpaceMismatch,
    WeightSumMismatch,
)

# --- Test ProbSpace / RandomVariable construction ---

def test_uniform_space_weights():
    """
    GIVEN an atom count
    WHEN a uniform space is built
    THEN check every atom carries the same weight
    """
    space = uniform_space(4)

    assert space.n == 4
    assert space.is_uniform
    assert space.probs.tolist() == [0.25, 0.25, 0.25, 0.25]
    assert space.min_prob == 0.25


@pytest.mark.parametrize('probs, error', [
    ([0.5, 0.6], WeightSumMismatch),
    ([1.0, 0.0], NonPositiveWeight),
    ([], EmptySample),
    ([float('nan'), 1.0], NonFiniteValue),
])
def test_invalid_space_rejected(probs, error):
    """
    GIVEN weights that do not form a probability vector
    WHEN a ProbSpace is built
    THEN check the matching input-format error is raised with exit code 3
    """
    with pytest.raises(error) as excinfo:
        ProbSpace(probs)
    assert excinfo.value.exit_code == 3


def test_random_variable_validation(fair):
    """
    GIVEN a two-atom space
    WHEN a variable with the wrong length or a NaN value is built
    THEN check LengthMismatch and NonFiniteValue are raised
    """
    with pytest.raises(LengthMismatch):
        RandomVariable(fair, [1.0, 2.0, 3.0])
    with pytest.raises(NonFiniteValue):
        RandomVariable(fair, [float('nan'), 1.0])


def test_values_are_read_only(coin):
    """
    GIVEN a random variable
    WHEN its values are written to
    THEN check the write is refused
    """
    with pytest.raises(ValueError):
        coin.values[0] = 5.0


def test_empirical_from_samples():
    """
    GIVEN a sample of observations
    WHEN an empirical space is built
    THEN check there is one equal-weight atom per observation, and an empty sample is rejected
    """
    space, X = empirical_from_samples([3.0, 1.0, 2.0])

    assert space.n == 3
    assert X.values.tolist() == [3.0, 1.0, 2.0]
    with pytest.raises(EmptySample):
        empirical_from_samples([])

# --- Test expectations and quantiles ---

def test_expectation_and_constants(fair, coin_up):
    """
    GIVEN a constant and a fair-coin variable
    WHEN expectations and centered values are computed
    THEN check the constant's mean is exact and its centered values are exactly zero
    """
    c = constant(uniform_space(3), 0.1)

    assert expectation(coin_up) == 1.0
    assert expectation(c) == 0.1
    assert np.all(center(c).values == 0.0)
    assert is_constant(c)
    assert not is_constant(coin_up)


def test_left_quantile_at_ties():
    """
    GIVEN X = (0, 0, 1) on three equal atoms
    WHEN left quantiles are taken at and just past the cumulative breakpoint 2/3
    THEN check the left-continuous inverse picks the lower value at the breakpoint
    """
    X = RandomVariable(uniform_space(3), [0.0, 0.0, 1.0])

    assert left_quantile(X, 2.0 / 3.0) == 0.0
    assert left_quantile(X, 0.7) == 1.0
    assert left_quantile(X, 1.0) == 1.0
    with pytest.raises(InvalidProbability):
        left_quantile(X, 0.0)


def test_distribution_merges_equal_values():
    """
    GIVEN X = (0, 0, 1) on three equal atoms
    WHEN its law is computed
    THEN check equal values are merged and the cumulative ends at exactly 1
    """
    dist = distribution_of(RandomVariable(uniform_space(3), [0.0, 0.0, 1.0]))

    assert dist.values.tolist() == [0.0, 1.0]
    assert dist.probs == pytest.approx([2.0 / 3.0, 1.0 / 3.0])
    assert dist.cumulative[-1] == 1.0


def test_quantile_integral(coin):
    """
    GIVEN the fair coin X = (-1, 1)
    WHEN the quantile function is integrated over (0, 0.25] and (0.25, 1]
    THEN check the integrals are -0.25 and 0.25
    """
    assert quantile_integral(coin, 0.0, 0.25) == pytest.approx(-0.25)
    assert quantile_integral(coin, 0.25, 1.0) == pytest.approx(0.25)


def test_same_distribution_under_permutation_and_refinement():
    """
    GIVEN a variable on equal atoms
    WHEN its atoms are permuted or split
    THEN check the law is unchanged
    """
    X = RandomVariable(uniform_space(4), [3.0, -1.0, 0.5, 2.0])

    assert same_distribution(X, permute(X, [2, 0, 3, 1]))
    assert same_distribution(X, refine(X, 3))
    assert not same_distribution(X, RandomVariable(X.space, [3.0, -1.0, 0.5, 2.5]))


def test_same_distribution_merges_points_within_tolerance(fair):
    """
    GIVEN X = (0.1 + 0.2, 0.3) and Y = (0.3, 0.3) on the fair coin space
    WHEN their laws are compared
    THEN check the atoms one rounding apart count as one support point, while a 1e-6 gap does not
    """
    X = RandomVariable(fair, [0.1 + 0.2, 0.3])
    Y = RandomVariable(fair, [0.3, 0.3])

    assert same_distribution(X, Y)
    assert same_distribution(Y, X)
    assert not same_distribution(RandomVariable(fair, [0.3 + 1e-6, 0.3]), Y)

# --- Test stop-loss transforms and orders ---

def test_stop_loss(coin_up):
    """
    GIVEN Y = (0, 2) fair
    WHEN the stop-loss transform is evaluated at 0, 1 and 2
    THEN check the values E[(Y - k)^+] are 1, 0.5 and 0
    """
    assert stop_loss(coin_up, [0.0, 1.0, 2.0]).tolist() == pytest.approx([1.0, 0.5, 0.0])


def test_convex_order(coin):
    """
    GIVEN the fair coin and its mean as a constant
    WHEN the convex order is checked both ways
    THEN check the constant precedes the coin but not conversely
    """
    mean = constant(coin.space, 0.0)

    assert convex_order_leq(mean, coin)
    assert not convex_order_leq(coin, mean)
    assert increasing_convex_order_leq(coin, constant(coin.space, 5.0))


def test_mirrored_uniform_pair():
    """
    GIVEN the mirrored uniform pair on 10 atoms
    WHEN their midpoint is formed
    THEN check both share a law and the midpoint only takes the values -1 and 1
    """
    X, Y = mirrored_uniform_pair(10)
    Z = mix(X, Y, 0.5)

    assert same_distribution(X, Y)
    assert np.allclose(np.abs(Z.values), 1.0)
    assert convex_order_leq(Z, X)

# --- Test pointwise algebra ---

def test_mix_requires_shared_space(coin):
    """
    GIVEN variables on different spaces
    WHEN they are mixed, or mixed with a weight outside [0, 1]
    THEN check SpaceMismatch and InvalidParameter are raised with exit code 2
    """
    other = RandomVariable(uniform_space(3), [0.0, 1.0, 2.0])

    with pytest.raises(SpaceMismatch) as excinfo:
        mix(coin, other, 0.5)
    assert excinfo.value.exit_code == 2
    with pytest.raises(InvalidParameter):
        mix(coin, coin, 1.5)


def test_make_space_keeps_weights():
    """
    GIVEN non-uniform weights
    WHEN a space is made from them
    THEN check the weights are kept and the space is not uniform
    """
    space = make_space([0.25, 0.75])

    assert space.probs.tolist() == [0.25, 0.75]
    assert not space.is_uniform
    assert space == make_space([0.25, 0.75])
