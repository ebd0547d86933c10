import pytest

from models.report import PASS
from services import measures
from services.axioms import AuditConfig, check_non_negativity, check_star_shapedness, generate_variables
from services.envelopes import acceptance_of, deviation_of, is_star_shaped_set


@pytest.fixture(scope='module')
def min_of_convex():
    """min(FR, 2 SD, IED + SD at 0.25): each member is convex and vanishes at 0."""
    family = [
        measures.full_range_functional(),
        measures.scale_functional(measures.sd_functional(), 2.0),
        measures.add(measures.ied_functional(0.25), measures.sd_functional()),
    ]
    return measures.min_functional('min3', family)

# --- Test minima of convex deviations ---

def test_min_of_convex_is_star_shaped(min_of_convex):
    """
    GIVEN the pointwise minimum of three convex deviations
    WHEN star-shapedness and non-negativity are audited on 200 variables
    THEN check every star form and non-negativity pass with no violations
    """
    config = AuditConfig(seed=0, n_variables=200)

    for result in check_star_shapedness(min_of_convex, config):
        assert result.status == PASS
        assert result.violations == 0
    assert check_non_negativity(min_of_convex, config).status == PASS


def test_min_of_convex_acceptance_round_trip(audit_config, min_of_convex):
    """
    GIVEN the acceptance set of the minimum
    WHEN the deviation is rebuilt from the set
    THEN check it matches within 1e-8 and the set is star-shaped
    """
    A = acceptance_of(min_of_convex)

    for X in generate_variables(audit_config, 100, 'min-round-trip'):
        assert deviation_of(A, X) == pytest.approx(min_of_convex(X), abs=1e-8)
    assert is_star_shaped_set(A, audit_config).status == PASS

# --- Test infimum over a countable family ---

def test_prefix_minima_drain_to_zero(audit_config, coin):
    """
    GIVEN D_k = SD / k for k = 1 .. K
    WHEN the minimum over growing prefixes is taken at the fair coin
    THEN check every finite prefix stays a proper deviation while the value falls below 1e-3 at K = 10^4
    """
    family = [measures.scale_functional(measures.sd_functional(), 1.0 / k) for k in range(1, 10_001)]

    values = [measures.min_family(family[:K], coin)[0] for K in (1, 10, 100, 1_000, 10_000)]

    assert values == sorted(values, reverse=True)
    assert values[-1] < 1e-3
    assert values[-1] > 0
    prefix = measures.min_functional('min10', family[:10])
    assert check_non_negativity(prefix, audit_config).status == PASS
