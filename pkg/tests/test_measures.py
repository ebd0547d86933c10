import math

import numpy as np
import pytest

from models.acceptance import AcceptanceSet
from models.functional import BenchmarkCurve, DeviationFunctional
from models.probability import RandomVariable
from services import catalog, measures
from services.axioms import generate_variables
from services.space import center, constant, left_quantiles, uniform_space
from utils.errors import (
    ContractViolation,
    InvalidParameter,
    InvalidProbability,
    NonFiniteValue,
    NotStarShapedSet,
    UnknownName,
)

# --- Test moment and range deviations ---

def test_standard_deviations_on_fair_coin(coin, coin_up):
    """
    GIVEN X = (-1, 1) and Y = (0, 2) on the fair space
    WHEN the moment deviations are evaluated
    THEN check SD = 1 for both and the semideviations split the variance evenly
    """
    assert measures.sd(coin) == 1.0
    assert measures.sd(coin_up) == 1.0
    assert measures.sd_minus(coin_up) == pytest.approx(math.sqrt(0.5))
    assert measures.sd_plus(coin_up) == pytest.approx(math.sqrt(0.5))


def test_ranges(coin_up):
    """
    GIVEN Y = (0, 2) fair
    WHEN the ranges are evaluated
    THEN check FR = 2 and LR = UR = 1
    """
    assert measures.full_range(coin_up) == 2.0
    assert measures.lower_range(coin_up) == 1.0
    assert measures.upper_range(coin_up) == 1.0


def test_loss_deviation_reproduces_lower_semideviation(coin_up):
    """
    GIVEN rho = -E and p = 2
    WHEN the loss deviation of Y = (0, 2) is evaluated
    THEN check it equals the lower semideviation sqrt(1/2)
    """
    value = measures.loss_deviation(measures.mean_risk(), 2.0, coin_up)

    assert value == pytest.approx(measures.sd_minus(coin_up))
    with pytest.raises(InvalidParameter):
        measures.loss_deviation(measures.mean_risk(), 0.5, coin_up)

# --- Test quantile-based measures ---

def test_quantile_measures_on_fair_coin(coin):
    """
    GIVEN X = (-1, 1) fair and alpha = 0.25
    WHEN VaR, ES, IQD and IED are evaluated
    THEN check VaR = ES = 1, IQD = 2 and IED (upper-tail mean minus lower-tail mean) = 2
    """
    assert measures.var_alpha(coin, 0.25) == 1.0
    assert measures.es_alpha(coin, 0.25) == pytest.approx(1.0)
    assert measures.upper_es_alpha(coin, 0.25) == pytest.approx(-1.0)
    assert measures.iqd(coin, 0.25) == 2.0
    assert measures.ied(coin, 0.25) == pytest.approx(2.0)


def test_level_ranges_are_enforced(coin):
    """
    GIVEN the fair coin
    WHEN IQD is asked for alpha = 0.5 or VaR for alpha = 1
    THEN check InvalidProbability is raised
    """
    with pytest.raises(InvalidProbability):
        measures.iqd(coin, 0.5)
    with pytest.raises(InvalidProbability):
        measures.var_alpha(coin, 1.0)


def test_es_grid_matches_pointwise():
    """
    GIVEN a grid of levels
    WHEN ES is evaluated on the whole grid at once
    THEN check it matches the one-level evaluator
    """
    grid = [0.1, 0.25, 0.5, 0.75, 0.9]
    X = RandomVariable(uniform_space(4), [3.0, -1.0, 0.5, 2.0])

    assert measures.es_alpha_grid(X, grid) == pytest.approx([measures.es_alpha(X, a) for a in grid])


@pytest.mark.parametrize('alpha', [0.1, 0.25, 0.4])
def test_dominance_inequalities(audit_config, alpha):
    """
    GIVEN seeded variables and a level alpha
    WHEN IED is compared with IQD and ES with VaR
    THEN check IED >= IQD and ES >= VaR on every variable
    """
    for X in generate_variables(audit_config, 500, 'dominance'):
        assert measures.ied(X, alpha) >= measures.iqd(X, alpha) - 1e-10
        assert measures.es_alpha(X, alpha) >= measures.var_alpha(X, alpha) - 1e-10


def test_lvard_maximizes_over_step_starts():
    """
    GIVEN X = (-4, 0, 0, 0, 4, 4, 4, 4, 4, 4) on ten equal atoms and the curve alpha(u) = 0.1 below 1, 0.5 from 1
    WHEN the LVaR deviation is evaluated
    THEN check the first step wins: -F^{-1}(0.1) of X - E[X] is 6
    """
    X = RandomVariable(uniform_space(10), [-4.0, 0.0, 0.0, 0.0] + [4.0] * 6)
    curve = BenchmarkCurve([[0.0, 0.1], [1.0, 0.5]], name='steps')

    assert measures.lvar_d(X, curve) == pytest.approx(6.0)
    assert measures.lvard_functional(curve).name == 'lvard@steps'


@pytest.mark.parametrize('breakpoints', [
    [[0.0, 0.1], [1.0, 0.5]],
    [[0.0, 0.05], [0.5, 0.2], [2.0, 0.6]],
])
def test_lvard_matches_dense_grid_search(audit_config, breakpoints):
    """
    GIVEN a step benchmark curve and seeded variables
    WHEN LVaRD is compared with a grid search over u in [0, 5] with step 1e-4
    THEN check the grid never beats it and trails it by at most one grid step
    """
    curve = BenchmarkCurve(breakpoints)
    us = np.arange(0.0, 5.0, 1e-4)
    alphas = curve.alphas[np.searchsorted(curve.us, us, side='right') - 1]

    for X in generate_variables(audit_config, 20, 'lvard-grid'):
        grid_best = float(np.max(-left_quantiles(center(X), alphas) - us))
        value = measures.lvar_d(X, curve)
        assert grid_best <= value + 1e-9
        assert value - grid_best <= 1e-4 + 1e-9


def test_benchmark_curve_validation():
    """
    GIVEN malformed breakpoints
    WHEN a benchmark curve is built
    THEN check a curve not starting at 0 or with decreasing levels is rejected
    """
    with pytest.raises(InvalidParameter):
        BenchmarkCurve([[0.5, 0.1]])
    with pytest.raises(InvalidParameter):
        BenchmarkCurve([[0.0, 0.5], [1.0, 0.1]])
    assert BenchmarkCurve.constant(0.2).alpha_at(10.0) == 0.2

# --- Test functional wrappers and combinators ---

def test_chi_constants(coin):
    """
    GIVEN the characteristic functional of constants
    WHEN it is evaluated on a constant and on the fair coin
    THEN check it returns 0 and +inf
    """
    chi = measures.chi_constants()

    assert chi(constant(coin.space, 3.0)) == 0.0
    assert chi(coin) == math.inf


def test_value_contract(coin):
    """
    GIVEN functionals returning NaN, a clearly negative value and rounding noise below zero
    WHEN they are evaluated
    THEN check NaN and negatives are rejected and the noise is folded to 0
    """
    with pytest.raises(NonFiniteValue) as excinfo:
        DeviationFunctional('nan', lambda X: float('nan'))(coin)
    assert excinfo.value.exit_code == 3
    with pytest.raises(ContractViolation):
        DeviationFunctional('negative', lambda X: -1.0)(coin)
    assert DeviationFunctional('noise', lambda X: -1e-15)(coin) == 0.0


def test_min_family_picks_lowest_index_on_ties(coin):
    """
    GIVEN the family {FR, 2 SD}
    WHEN the pointwise minimum is taken on the fair coin (a tie at 2) and on (0, 0, 1)
    THEN check the tie goes to FR and (0, 0, 1) is attained by 2 SD
    """
    family = [measures.full_range_functional(), measures.scale_functional(measures.sd_functional(), 2.0)]
    X = RandomVariable(uniform_space(3), [0.0, 0.0, 1.0])

    assert measures.min_family(family, coin) == (2.0, 0)
    value, index = measures.min_family(family, X)
    assert index == 1
    assert value == pytest.approx(2.0 * math.sqrt(2.0) / 3.0)


def test_composite_combinators(coin):
    """
    GIVEN IQD and SD
    WHEN they are added, scaled and squared
    THEN check the values and that the declared profiles drop what the combinator breaks
    """
    iqd = measures.iqd_functional(0.4)
    sd = measures.sd_functional()
    composite = measures.add(measures.square(iqd), sd)

    assert composite(coin) == 5.0
    assert measures.scale_functional(sd, 3.0)(coin) == 3.0
    assert not composite.profile.positively_homogeneous
    assert composite.profile.star_shaped
    with pytest.raises(InvalidParameter):
        measures.scale_functional(sd, 0.0)


def test_regularized_range(coin_up):
    """
    GIVEN f = ess sup
    WHEN the regularized range min(UD_f, LD_f) is evaluated on Y = (0, 2)
    THEN check it equals the smaller of sup((Y - EY)^+) = 1 and sup((Y - EY)^-) = 1
    """
    assert measures.regularized_range(measures.sup_functional())(coin_up) == 1.0

# --- Test Minkowski gauge ---

def test_minkowski_gauge_of_sd_sublevel_set(audit_config):
    """
    GIVEN the sublevel set {SD <= 1}
    WHEN its Minkowski gauge is evaluated on seeded variables
    THEN check the gauge reproduces SD within 1e-8
    """
    A = measures.sublevel_set(measures.sd_functional())
    checked = 0
    for X in generate_variables(audit_config, 100, 'gauge'):
        value = measures.sd(X)
        if 0.01 < value < 1e3:
            assert measures.minkowski(A, X) == pytest.approx(value, abs=1e-8)
            checked += 1
    assert checked > 0


def test_minkowski_gauge_of_constant_is_zero(fair):
    """
    GIVEN a constant variable
    WHEN its gauge with respect to {SD <= 1} is evaluated
    THEN check it is 0
    """
    A = measures.sublevel_set(measures.sd_functional())

    assert measures.minkowski(A, constant(fair, 2.0)) == 0.0


def test_minkowski_rejects_set_that_is_not_star_shaped(coin):
    """
    GIVEN the set {SD <= 0.01} united with {1 <= SD <= 10}, which is not star-shaped
    WHEN the gauge of the fair coin is searched
    THEN check the membership scan notices it and raises NotStarShapedSet
    """
    A = AcceptanceSet('gapped', lambda X: measures.sd(X) <= 0.01 or 1.0 <= measures.sd(X) <= 10.0)

    with pytest.raises(NotStarShapedSet):
        measures.minkowski(A, coin)

# --- Test catalog ids ---

def test_catalog_resolution():
    """
    GIVEN catalog ids
    WHEN they are resolved
    THEN check names round-trip and bad ids map to usage errors
    """
    assert catalog.resolve_deviation('iqd@0.4').name == 'iqd@0.4'
    assert catalog.resolve_deviation('sd').name == 'sd'
    assert catalog.resolve_risk('es@0.1').name == 'es@0.1'
    with pytest.raises(UnknownName):
        catalog.resolve_deviation('nope')
    with pytest.raises(InvalidParameter):
        catalog.resolve_deviation('iqd@abc')
    with pytest.raises(InvalidProbability):
        catalog.resolve_deviation('iqd@0.7')
    with pytest.raises(UnknownName):
        catalog.resolve_deviation('lvard@missing')


def test_lvard_resolves_workspace_curve():
    """
    GIVEN a curve map
    WHEN lvard@<curve> is resolved
    THEN check the functional uses that curve
    """
    curve = BenchmarkCurve([[0.0, 0.1], [1.0, 0.5]], name='steps')
    D = catalog.resolve_deviation('lvard@steps', {'steps': curve})
    X = RandomVariable(uniform_space(10), [-4.0, 0.0, 0.0, 0.0] + [4.0] * 6)

    assert D(X) == pytest.approx(6.0)

# --- Test regular-based and wrapped deviations ---

def test_regular_based_deviations(coin_up):
    """
    GIVEN f = -ess inf and f = ess sup
    WHEN the regular-based deviations f(X - E[X]) and the one-sided forms are evaluated on Y = (0, 2)
    THEN check they reproduce the lower and upper ranges
    """
    worst, sup = measures.worst_risk(), measures.sup_functional()

    assert measures.regular_based(worst, coin_up) == measures.lower_range(coin_up)
    assert measures.regular_based(sup, coin_up) == measures.upper_range(coin_up)
    assert measures.ld_f(sup, coin_up) == 1.0
    assert measures.ud_f(sup, coin_up) == 1.0
    assert measures.regular_based_functional(sup)(coin_up) == 1.0


def test_wrapped_loss_and_gauge_deviations(coin, coin_up):
    """
    GIVEN the loss deviation of -E at p = 2 and the gauge of {SD <= 1} as functionals
    WHEN they are evaluated
    THEN check they match the lower semideviation and SD
    """
    loss = measures.loss_deviation_functional(measures.mean_risk(), 2.0)
    gauge = measures.minkowski_functional(measures.sublevel_set(measures.sd_functional()))

    assert loss(coin_up) == pytest.approx(math.sqrt(0.5))
    assert gauge(coin) == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(InvalidParameter):
        measures.loss_deviation_functional(measures.mean_risk(), 0.5)
