import math

import pytest

from models.functional import DeviationFunctional
from models.probability import RandomVariable
from models.report import FAIL, NOT_APPLICABLE, PASS
from services import measures
from services.axioms import (
    CONVEXITY,
    LOWER_RANGE_DOMINANCE,
    MONOTONICITY,
    NON_NEGATIVITY,
    POSITIVE_HOMOGENEITY,
    STAR_GE,
    STAR_LE,
    STAR_RATIO,
    STAR_SHAPED,
    AuditConfig,
    audit_deviation,
    check_convex_order_consistency,
    check_convexity,
    check_law_invariance,
    check_non_negativity,
    check_risk_axioms,
    check_star_shapedness,
    check_subadditivity,
    check_translation_insensitivity,
    classify,
    generate_variables,
)
from services.space import expectation, same_distribution, uniform_space
from utils.errors import InvalidParameter

# --- Test AuditConfig ---

def test_audit_config_validation():
    """
    GIVEN lambda grids without 1 or with a negative value
    WHEN an AuditConfig is built
    THEN check InvalidParameter is raised
    """
    with pytest.raises(InvalidParameter):
        AuditConfig(lambda_grid=(0.5, 2.0))
    with pytest.raises(InvalidParameter):
        AuditConfig(lambda_grid=(-1.0, 0.5, 1.0, 2.0))
    with pytest.raises(InvalidParameter):
        AuditConfig(n_variables=0)


def test_audit_config_from_app_config(app):
    """
    GIVEN the testing application config
    WHEN an AuditConfig is derived from it with an explicit seed
    THEN check corpus sizes come from the config and the seed override wins
    """
    config = AuditConfig.from_app_config(app.config, seed=42, n_pairs=5)

    assert config.seed == 42
    assert config.n_variables == app.config['AUDIT_N_VARIABLES']
    assert config.n_pairs == 5


def test_generated_corpus_is_seeded(audit_config):
    """
    GIVEN one seed and one corpus name
    WHEN variables are generated twice
    THEN check the corpora are identical and every variable is non-constant
    """
    first = generate_variables(audit_config, 20, 'corpus')
    second = generate_variables(audit_config, 20, 'corpus')

    assert [X.values.tolist() for X in first] == [X.values.tolist() for X in second]
    assert all(measures.full_range(X) > 0 for X in first)

# --- Test individual checks ---

def test_iqd_fails_non_negativity_on_tied_quantiles():
    """
    GIVEN X = (0, 0, 1) on three equal atoms
    WHEN IQD at 0.4 is checked for non-negativity
    THEN check the check fails: both quantiles sit on the repeated 0
    """
    X = RandomVariable(uniform_space(3), [0.0, 0.0, 1.0])
    result = check_non_negativity(measures.iqd_functional(0.4), AuditConfig(), variables=[X])

    assert result.status == FAIL
    assert result.witnesses[0].rhs == 0.0


def test_ied_stays_positive_where_iqd_vanishes():
    """
    GIVEN X = (0, 0, 1) on three equal atoms, where IQD at 0.4 is 0
    WHEN IED at 0.4 is evaluated and checked for non-negativity
    THEN check it equals the upper-tail mean 5/6 and the check passes, matching its declared profile
    """
    X = RandomVariable(uniform_space(3), [0.0, 0.0, 1.0])
    D = measures.ied_functional(0.4)

    assert D(X) == pytest.approx(5.0 / 6.0)
    assert D.profile.non_negative
    assert check_non_negativity(D, AuditConfig(), variables=[X]).status == PASS


def test_iqd_fails_subadditivity_with_replayable_witness():
    """
    GIVEN the pair X = (0, 0, 0, 1, 1), Y = (1, 0, 0, 0, 0) on five equal atoms
    WHEN IQD at 0.4 is checked for subadditivity
    THEN check IQD(X + Y) = 1 > IQD(X) + IQD(Y) = 0 and the witness replays
    """
    five = uniform_space(5)
    X = RandomVariable(five, [0.0, 0.0, 0.0, 1.0, 1.0])
    Y = RandomVariable(five, [1.0, 0.0, 0.0, 0.0, 0.0])
    D = measures.iqd_functional(0.4)

    result = check_subadditivity(D, AuditConfig(), pairs=[(X, Y)])

    assert result.status == FAIL
    witness = result.witnesses[0]
    assert (witness.lhs, witness.rhs, witness.margin) == (1.0, 0.0, 1.0)
    replay = check_subadditivity(D, AuditConfig(), pairs=[(witness.inputs['X'], witness.inputs['Y'])])
    assert replay.witnesses[0].margin == witness.margin


def test_composite_fails_convexity(audit_config):
    """
    GIVEN D = IQD^2 + SD at 0.4
    WHEN convexity is checked on the default pair corpus
    THEN check it fails with a witness whose left side exceeds the right side
    """
    result = check_convexity(measures.composite_iqd_sq_plus_sd(0.4), audit_config)

    assert result.status == FAIL
    assert result.witnesses[0].lhs > result.witnesses[0].rhs


def test_star_shapedness_forms_agree(audit_config):
    """
    GIVEN a star-shaped functional and one that is not star-shaped
    WHEN star-shapedness is checked form by form
    THEN check the three forms reach the same status as the aggregate over the same pairs
    """
    not_star = DeviationFunctional('min(1,fr)', lambda X: min(1.0, measures.full_range(X)))

    for D, status in ((measures.composite_iqd_sq_plus_sd(0.4), PASS), (not_star, FAIL)):
        results = check_star_shapedness(D, audit_config)
        assert [r.axiom for r in results] == [STAR_GE, STAR_LE, STAR_RATIO, STAR_SHAPED]
        assert [r.status for r in results] == [status] * 4
        assert len({r.checked for r in results}) == 1


def test_star_shapedness_forms_split_at_tolerance_edge(fair):
    """
    GIVEN D with D(l X) = l / 100 for l in {0.5, 1} and D(100 X) = 1 - 1e-8, on the grid {0.5, 1, 100}
    WHEN star-shapedness is checked with tolerance 1e-9
    THEN check only the scale-up form sees the 1e-8 shortfall, and the aggregate fails with its witnesses
    """
    X = RandomVariable(fair, [0.0, 1.0])
    table = {0.5: 0.005, 1.0: 0.01, 100.0: 1.0 - 1e-8}
    D = DeviationFunctional('edge', lambda Y: table[float(Y.values.max())])
    config = AuditConfig(lambda_grid=(0.5, 1.0, 100.0), tolerance=1e-9)

    up, down, ratio, aggregate = check_star_shapedness(D, config, variables=[X])

    assert (up.status, up.violations) == (FAIL, 2)
    assert down.status == PASS
    assert ratio.status == PASS
    assert aggregate.status == FAIL
    assert aggregate.witnesses == up.witnesses
    assert up.witnesses[0].margin == pytest.approx(1e-8)


def test_empty_corpus_is_not_applicable():
    """
    GIVEN an explicit empty pair corpus
    WHEN subadditivity is checked
    THEN check the result is not-applicable rather than a pass
    """
    assert check_subadditivity(measures.sd_functional(), AuditConfig(), pairs=[]).status == NOT_APPLICABLE

# --- Test negative examples ---

def test_absolute_mean_fails_translation_insensitivity(coin):
    """
    GIVEN D(X) = |E[X]| and the fair coin X = (-1, 1)
    WHEN translation insensitivity is checked
    THEN check every shift is a violation and the first witness moves D from 0 to 10
    """
    D = DeviationFunctional('abs_mean', lambda X: abs(expectation(X)))
    config = AuditConfig()

    result = check_translation_insensitivity(D, config, variables=[coin])

    assert result.status == FAIL
    assert result.violations == len(config.shift_grid)
    witness = result.witnesses[0]
    assert witness.inputs['c'] == -10.0
    assert (witness.lhs, witness.rhs) == (10.0, 0.0)


def test_first_atom_functional_fails_law_invariance(audit_config):
    """
    GIVEN D(X) = |X(atom 0) - E[X]|, which looks at one atom only
    WHEN law invariance is checked on the seeded corpus
    THEN check it fails with a witness whose copy has the same law but a different value
    """
    D = DeviationFunctional('atom0', lambda X: abs(float(X.values[0]) - expectation(X)))

    result = check_law_invariance(D, audit_config)

    assert result.status == FAIL
    witness = result.witnesses[0]
    assert same_distribution(witness.inputs['X'], witness.inputs['X_copy'])
    assert D(witness.inputs['X_copy']) != pytest.approx(D(witness.inputs['X']))


def test_iqd_plus_sd_fails_convex_order_consistency(counterexample):
    """
    GIVEN D = IQD + SD at 0.4 and the midpoint Z of the mirrored uniform pair, which precedes X in convex order
    WHEN convex-order consistency is checked on (Z, X)
    THEN check it fails with D(Z) = 3 above D(X) = 4/5 + sqrt(4/3)
    """
    D = measures.add(measures.iqd_functional(0.4), measures.sd_functional())

    result = check_convex_order_consistency(D, AuditConfig(), pairs=[(counterexample.Z, counterexample.X)])

    assert result.status == FAIL
    witness = result.witnesses[0]
    assert witness.lhs == pytest.approx(3.0, abs=1e-9)
    assert witness.rhs == pytest.approx(0.8 + math.sqrt(4.0 / 3.0), abs=0.01)
    assert witness.margin > 1.0

# --- Test full audits and classification ---

def test_audit_sd_is_generalized(audit_config):
    """
    GIVEN the standard deviation
    WHEN the full audit runs
    THEN check it is classified as a generalized deviation and fails lower range dominance
    """
    report = audit_deviation(measures.sd_functional(), audit_config)

    assert report.classification == 'generalized'
    assert 'Star-Shaped' in report.labels
    assert 'Law Invariant' in report.labels
    assert not report.passed(LOWER_RANGE_DOMINANCE)
    assert report.declared_mismatches == []


def test_audit_composite_is_star_shaped_only(audit_config):
    """
    GIVEN D = IQD^2 + SD at 0.4
    WHEN the full audit runs
    THEN check it is Star-Shaped but neither Convex nor positively homogeneous
    """
    report = audit_deviation(measures.composite_iqd_sq_plus_sd(0.4), audit_config)

    assert report.classification == 'Star-Shaped'
    assert 'Convex' not in report.labels
    assert report.result(CONVEXITY).status == FAIL
    assert report.result(POSITIVE_HOMOGENEITY).status == FAIL
    assert report.result(CONVEXITY).witnesses


def test_audit_full_range_fails_lower_range_dominance(audit_config):
    """
    GIVEN the full range
    WHEN the full audit runs
    THEN check lower range dominance fails (FR(0, 2) = 2 > LR(0, 2) = 1)
    """
    report = audit_deviation(measures.full_range_functional(), audit_config)

    assert report.result(LOWER_RANGE_DOMINANCE).status == FAIL
    assert report.classification == 'generalized'


def test_convexity_and_non_negativity_imply_star_shapedness():
    """
    GIVEN convex, non-convex and non-proper catalog deviations
    WHEN each is audited
    THEN check none passes convexity and non-negativity while failing star-shapedness
    """
    config = AuditConfig(seed=0, n_variables=30, n_pairs=30)
    functionals = [
        measures.sd_functional(),
        measures.sd_minus_functional(),
        measures.full_range_functional(),
        measures.es_deviation(0.1),
        measures.ied_functional(0.25),
        measures.iqd_functional(0.4),
        measures.composite_iqd_sq_plus_sd(0.4),
    ]
    antecedents = 0

    for D in functionals:
        report = audit_deviation(D, config)
        if report.passed(CONVEXITY) and report.passed(NON_NEGATIVITY):
            antecedents += 1
            assert report.passed(STAR_SHAPED), D.name

    assert antecedents >= 4


def test_audit_is_deterministic(audit_config):
    """
    GIVEN one seed
    WHEN the same audit runs twice
    THEN check the reports are identical
    """
    D = measures.iqd_functional(0.3)

    assert audit_deviation(D, audit_config).to_dict() == audit_deviation(D, audit_config).to_dict()


def test_classify_requires_properness():
    """
    GIVEN passed checks without non-negativity
    WHEN labels are derived
    THEN check neither proper, Convex nor Star-Shaped is claimed
    """
    labels = classify({'translation_insensitivity', 'convexity', 'star_shaped', 'law_invariance'})

    assert labels == ['Law Invariant']


def test_risk_audit_of_expected_shortfall(audit_config):
    """
    GIVEN the ES risk functional at 0.1
    WHEN the risk audit runs
    THEN check it is monetary, star-shaped and positively homogeneous
    """
    report = check_risk_axioms(measures.es_risk(0.1), audit_config)

    assert report.result(MONOTONICITY).status == PASS
    assert report.labels == ['monetary', 'Star-Shaped', 'positively homogeneous']
    assert report.classification == 'Star-Shaped'
