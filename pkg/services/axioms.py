"""
Seeded property audits for deviation and risk functionals.

Each check_* function runs one axiom over a corpus of random variables (or
pairs) and returns a CheckResult. A failing check carries witnesses: the
inputs, both sides of the violated inequality and the margin lhs - rhs.
Checks take an optional explicit corpus; passing a witness's inputs back in
replays the violation.

A passing check means "no violation found on the corpus", nothing stronger.

Random corpora come from per-check sub-seeds, derived from the config seed and
a fixed fragment name, so results do not depend on the order checks run in.
"""

import zlib
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from models.probability import ProbSpace, RandomVariable
from models.report import FAIL, NOT_APPLICABLE, PASS, AuditReport, CheckResult
from services.measures import full_range, lower_range
from services.space import (
    add,
    constant,
    convex_order_leq,
    expectation,
    is_constant,
    mirrored_uniform_pair,
    mix,
    permute,
    refine,
    scale,
    shift,
    uniform_space,
)
from utils.errors import InvalidParameter
from utils.log import get_logger
from utils.numeric import close, leq, margin, times

DEFAULT_LAMBDA_GRID = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0, 1.5, 2.0, 5.0, 10.0)
DEFAULT_SHIFT_GRID = (-10.0, -1.0, -0.1, 0.1, 1.0, 10.0)
# Generated variables flatter than this are treated as near-constant and skipped.
MIN_GENERATED_RANGE = 1e-6
PERMUTATIONS_PER_VARIABLE = 3

NON_NEGATIVITY = 'non_negativity'
TRANSLATION_INSENSITIVITY = 'translation_insensitivity'
CONVEXITY = 'convexity'
POSITIVE_HOMOGENEITY = 'positive_homogeneity'
STAR_GE = 'star_shaped_scale_up'
STAR_LE = 'star_shaped_scale_down'
STAR_RATIO = 'star_shaped_ratio'
STAR_SHAPED = 'star_shaped'
LOWER_RANGE_DOMINANCE = 'lower_range_dominance'
LAW_INVARIANCE = 'law_invariance'
CONVEX_ORDER_CONSISTENCY = 'convex_order_consistency'
SUBADDITIVITY = 'subadditivity'

MONOTONICITY = 'monotonicity'
TRANSLATION_INVARIANCE = 'translation_invariance'
NORMALIZATION = 'normalization'

# Declared deviation profile flag -> the check that verifies it.
DEVIATION_FLAGS = {
    'non_negative': NON_NEGATIVITY,
    'translation_insensitive': TRANSLATION_INSENSITIVITY,
    'convex': CONVEXITY,
    'positively_homogeneous': POSITIVE_HOMOGENEITY,
    'star_shaped': STAR_SHAPED,
    'lower_range_dominated': LOWER_RANGE_DOMINANCE,
    'law_invariant': LAW_INVARIANCE,
}

RISK_FLAGS = {
    'monotone': MONOTONICITY,
    'translation_invariant': TRANSLATION_INVARIANCE,
    'normalized': NORMALIZATION,
    'star_shaped': STAR_SHAPED,
    'positively_homogeneous': POSITIVE_HOMOGENEITY,
}


@dataclass(frozen=True)
class AuditConfig:
    seed: int = 0
    n_variables: int = 200
    n_pairs: int = 200
    lambda_grid: tuple = DEFAULT_LAMBDA_GRID
    shift_grid: tuple = DEFAULT_SHIFT_GRID
    atom_counts: tuple = (2, 3, 5, 8)
    value_range: tuple = (-10.0, 10.0)
    lattice_levels: int = 20
    tolerance: float = 1e-9
    curated: bool = True

    def __post_init__(self):
        grid = tuple(float(v) for v in self.lambda_grid)
        if any(v < 0 for v in grid):
            raise InvalidParameter('lambda_grid values must be >= 0.')
        if 1.0 not in grid or not any(0 < v < 1 for v in grid) or not any(v > 1 for v in grid):
            raise InvalidParameter('lambda_grid must contain 1 and points in both (0, 1) and (1, inf).')
        if self.n_variables < 1 or self.n_pairs < 1:
            raise InvalidParameter('Audit corpus sizes must be >= 1.')
        if not self.atom_counts or any(int(n) < 1 for n in self.atom_counts):
            raise InvalidParameter('atom_counts must be a non-empty list of sizes >= 1.')
        lo, hi = self.value_range
        if not lo < hi:
            raise InvalidParameter('value_range must be an interval lo < hi.')
        if self.lattice_levels < 1:
            raise InvalidParameter('lattice_levels must be >= 1.')
        if not self.tolerance > 0:
            raise InvalidParameter('tolerance must be > 0.')
        object.__setattr__(self, 'lambda_grid', grid)
        object.__setattr__(self, 'shift_grid', tuple(float(c) for c in self.shift_grid))
        object.__setattr__(self, 'atom_counts', tuple(int(n) for n in self.atom_counts))

    @classmethod
    def from_app_config(cls, app_config, seed=None, **overrides):
        """Build from Flask config keys (AUDIT_*), with explicit overrides winning."""
        params = {
            'seed': app_config.get('DEFAULT_SEED', 0) if seed is None else seed,
            'n_variables': app_config.get('AUDIT_N_VARIABLES', 200),
            'n_pairs': app_config.get('AUDIT_N_PAIRS', 200),
            'tolerance': app_config.get('AUDIT_TOLERANCE', 1e-9),
        }
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**params)

    @property
    def positive_lambdas(self):
        return sorted(v for v in self.lambda_grid if v > 0)

    @property
    def unit_lambdas(self):
        return sorted(v for v in self.lambda_grid if 0 <= v <= 1)

    def to_dict(self):
        return {
            'seed': self.seed,
            'n_variables': self.n_variables,
            'n_pairs': self.n_pairs,
            'lambda_grid': list(self.lambda_grid),
            'shift_grid': list(self.shift_grid),
            'atom_counts': list(self.atom_counts),
            'value_range': list(self.value_range),
            'lattice_levels': self.lattice_levels,
            'tolerance': self.tolerance,
            'curated': self.curated,
        }


# --- Corpus generation ---

def sub_rng(config, fragment):
    return np.random.default_rng([config.seed, zlib.crc32(fragment.encode('utf-8'))])


def _space(rng, n, equal_weights):
    if equal_weights:
        return uniform_space(n)
    weights = rng.integers(1, 4, size=n).astype(float)
    return ProbSpace(weights / weights.sum())


def _lattice(rng, config, n):
    lo, hi = config.value_range
    k = rng.integers(0, config.lattice_levels + 1, size=n)
    return lo + (hi - lo) * k / config.lattice_levels


def generate_variables(config, count, fragment, equal_weights=False):
    """`count` non-constant lattice-valued variables; near-constant draws are skipped."""
    rng = sub_rng(config, fragment)
    out = []
    while len(out) < count:
        n = int(rng.choice(config.atom_counts))
        space = _space(rng, n, equal_weights)
        X = RandomVariable(space, _lattice(rng, config, n))
        if full_range(X) >= MIN_GENERATED_RANGE:
            out.append(X)
        elif max(config.atom_counts) == 1:
            raise InvalidParameter('atom_counts of 1 cannot produce non-constant variables.')
    return out


def generate_pairs(config, count, fragment):
    """Pairs (X, Y) on a shared space."""
    rng = sub_rng(config, fragment)
    pairs = []
    for _ in range(count):
        n = int(rng.choice(config.atom_counts))
        space = _space(rng, n, False)
        pairs.append((RandomVariable(space, _lattice(rng, config, n)),
                      RandomVariable(space, _lattice(rng, config, n))))
    return pairs


def generate_ordered_pairs(config, count, fragment):
    """Pairs (X, X + P) with P >= 0 atom-wise."""
    rng = sub_rng(config, fragment)
    lo, hi = config.value_range
    pairs = []
    for _ in range(count):
        n = int(rng.choice(config.atom_counts))
        space = _space(rng, n, False)
        X = RandomVariable(space, _lattice(rng, config, n))
        bump = (hi - lo) * rng.integers(0, config.lattice_levels + 1, size=n) / config.lattice_levels
        bump[rng.random(n) < 0.3] = 0.0
        pairs.append((X, RandomVariable(space, X.values + bump)))
    return pairs


def generate_contraction_pairs(config, count, fragment):
    """
    Pairs (Z, X) with Z below X in convex order: either two atoms of an
    equal-weight X pulled toward their midpoint, or X scaled toward its mean.
    Only pairs confirmed by convex_order_leq are kept.
    """
    rng = sub_rng(config, fragment)
    pairs = []
    attempts = 0
    while len(pairs) < count and attempts < 20 * count:
        attempts += 1
        n = int(rng.choice(config.atom_counts))
        if n >= 2 and rng.random() < 0.5:
            X = RandomVariable(uniform_space(n), _lattice(rng, config, n))
            i, j = rng.choice(n, size=2, replace=False)
            t = float(rng.choice([0.25, 0.5, 1.0]))
            mid = 0.5 * (X.values[i] + X.values[j])
            z = X.values.copy()
            z[i] += t * (mid - z[i])
            z[j] += t * (mid - z[j])
            Z = RandomVariable(X.space, z)
        else:
            X = RandomVariable(_space(rng, n, False), _lattice(rng, config, n))
            s = float(rng.choice([0.0, 0.25, 0.5, 0.9]))
            m = expectation(X)
            Z = RandomVariable(X.space, m + s * (X.values - m))
        if convex_order_leq(Z, X):
            pairs.append((Z, X))
    return pairs


def constant_corpus(config):
    out = []
    for n in config.atom_counts:
        for c in (0.0,) + config.shift_grid:
            out.append(constant(uniform_space(n), c))
    return out


def curated_variables():
    """Hand-picked variables hitting quantile ties and the mirrored-uniform triple."""
    X, Y = mirrored_uniform_pair(100)
    return [
        RandomVariable(uniform_space(3), [0.0, 0.0, 1.0]),
        RandomVariable(uniform_space(2), [0.0, 2.0]),
        X, Y, mix(X, Y, 0.5),
    ]


def curated_pairs():
    X, Y = mirrored_uniform_pair(100)
    five = uniform_space(5)
    return [
        (X, Y),
        (RandomVariable(five, [0.0, 0.0, 0.0, 1.0, 1.0]), RandomVariable(five, [1.0, 0.0, 0.0, 0.0, 0.0])),
    ]


def curated_order_pairs():
    X, Y = mirrored_uniform_pair(100)
    return [(mix(X, Y, 0.5), X)]


def variable_corpus(config, fragment, variables=None, equal_weights=False):
    if variables is not None:
        return list(variables)
    pool = curated_variables() if config.curated else []
    return pool + generate_variables(config, config.n_variables, fragment, equal_weights)


def pair_corpus(config, fragment, pairs=None):
    if pairs is not None:
        return list(pairs)
    pool = curated_pairs() if config.curated else []
    return pool + generate_pairs(config, config.n_pairs, fragment)


def _finish(result):
    if result.checked == 0:
        result.status = NOT_APPLICABLE
    elif result.violations:
        first = result.witnesses[0]
        get_logger(__name__).warning('%s failed %d/%d cases; first margin %.6g',
                                     result.axiom, result.violations, result.checked, first.margin)
    return result


# --- Deviation checks ---

def check_non_negativity(D, config, variables=None):
    """D(c) = 0 on constants and D(X) > tol on non-constants."""
    tol = config.tolerance
    if variables is None:
        variables = constant_corpus(config) + variable_corpus(config, 'non-negativity')
    result = CheckResult(NON_NEGATIVITY)
    for X in variables:
        value = D(X)
        if is_constant(X):
            result.record(leq(value, 0.0, tol), {'X': X}, value, 0.0, margin(value, 0.0))
        else:
            result.record(value > tol, {'X': X}, tol, value, margin(tol, value))
    return _finish(result)


def check_translation_insensitivity(D, config, variables=None):
    tol = config.tolerance
    result = CheckResult(TRANSLATION_INSENSITIVITY)
    for X in variable_corpus(config, 'translation', variables):
        base = D(X)
        for c in config.shift_grid:
            moved = D(shift(X, c))
            result.record(close(moved, base, tol), {'X': X, 'c': c}, moved, base, abs(margin(moved, base)))
    return _finish(result)


def check_convexity(D, config, pairs=None):
    tol = config.tolerance
    result = CheckResult(CONVEXITY)
    for X, Y in pair_corpus(config, 'convexity', pairs):
        dx, dy = D(X), D(Y)
        for lam in config.unit_lambdas:
            lhs = D(mix(X, Y, lam))
            rhs = times(lam, dx) + times(1.0 - lam, dy)
            result.record(leq(lhs, rhs, tol), {'X': X, 'Y': Y, 'lambda': lam}, lhs, rhs, margin(lhs, rhs))
    return _finish(result)


def check_positive_homogeneity(D, config, variables=None):
    tol = config.tolerance
    result = CheckResult(POSITIVE_HOMOGENEITY)
    for X in variable_corpus(config, 'homogeneity', variables):
        base = D(X)
        for lam in config.lambda_grid:
            lhs = D(scale(X, lam))
            rhs = times(lam, base)
            result.record(close(lhs, rhs, tol), {'X': X, 'lambda': lam}, lhs, rhs, abs(margin(lhs, rhs)))
    return _finish(result)


def check_star_shapedness(D, config, variables=None):
    """
    Star-shapedness in three equivalent forms, each with its own inequality
    and its own result, plus an aggregate.

    All three forms are read off the same evaluations a = D(l1 X), b = D(l2 X)
    for every pair l1 < l2 of positive grid scalars:
      scale-up    D(mu Y) >= mu D(Y)    with Y = l1 X, mu = l2 / l1 >= 1
      scale-down  D(nu W) <= nu D(W)    with W = l2 X, nu = l1 / l2 <= 1
      ratio       D(l1 X) / l1 <= D(l2 X) / l2
    Slack is relative to each side, so near a tolerance edge the forms can
    disagree. The aggregate fails as soon as one form fails.
    """
    tol = config.tolerance
    up, down, ratio = CheckResult(STAR_GE), CheckResult(STAR_LE), CheckResult(STAR_RATIO)
    lambdas = config.positive_lambdas
    for X in variable_corpus(config, 'star', variables):
        values = {lam: D(scale(X, lam)) for lam in lambdas}
        for l1, l2 in combinations(lambdas, 2):
            a, b = values[l1], values[l2]
            inputs = {'X': X, 'lambda_1': l1, 'lambda_2': l2}
            scaled_up = times(l2 / l1, a)
            up.record(leq(scaled_up, b, tol), inputs, scaled_up, b, margin(scaled_up, b))
            scaled_down = times(l1 / l2, b)
            down.record(leq(a, scaled_down, tol), inputs, a, scaled_down, margin(a, scaled_down))
            ra, rb = a / l1, b / l2
            ratio.record(leq(ra, rb, tol), inputs, ra, rb, margin(ra, rb))
    forms = [_finish(up), _finish(down), _finish(ratio)]
    statuses = {form.status for form in forms}
    if len(statuses) > 1:
        get_logger(__name__).warning('Star-shapedness forms of %s disagree: %s', D.name,
                                     {form.axiom: form.status for form in forms})
    aggregate = CheckResult(STAR_SHAPED, checked=ratio.checked)
    failing = [form for form in (ratio, up, down) if form.status == FAIL]
    if failing:
        aggregate.status = FAIL
        aggregate.violations = max(form.violations for form in failing)
        aggregate.witnesses = list(failing[0].witnesses)
    return forms + [_finish(aggregate)]


def check_lower_range_dominance(D, config, variables=None):
    tol = config.tolerance
    result = CheckResult(LOWER_RANGE_DOMINANCE)
    for X in variable_corpus(config, 'lower-range', variables):
        lhs, rhs = D(X), lower_range(X)
        result.record(leq(lhs, rhs, tol), {'X': X}, lhs, rhs, margin(lhs, rhs))
    return _finish(result)


def check_law_invariance(D, config, variables=None):
    """Compare D(X) with D on random atom permutations (equal-weight spaces) and on a refined copy."""
    tol = config.tolerance
    rng = sub_rng(config, 'law-permutations')
    result = CheckResult(LAW_INVARIANCE)
    for X in variable_corpus(config, 'law', variables, equal_weights=True):
        base = D(X)
        copies = [refine(X, 2)]
        if X.space.is_uniform and X.space.n > 1:
            copies = [permute(X, rng.permutation(X.space.n)) for _ in range(PERMUTATIONS_PER_VARIABLE)] + copies
        for copy in copies:
            other = D(copy)
            result.record(close(other, base, tol), {'X': X, 'X_copy': copy}, other, base, abs(margin(other, base)))
    return _finish(result)


def check_convex_order_consistency(D, config, pairs=None):
    """D(Z) <= D(X) whenever Z precedes X in convex order; pairs out of order are skipped."""
    tol = config.tolerance
    if pairs is None:
        pairs = (curated_order_pairs() if config.curated else []) + \
            generate_contraction_pairs(config, config.n_pairs, 'convex-order')
    result = CheckResult(CONVEX_ORDER_CONSISTENCY)
    for Z, X in pairs:
        if not convex_order_leq(Z, X):
            continue
        lhs, rhs = D(Z), D(X)
        result.record(leq(lhs, rhs, tol), {'X': Z, 'Y': X}, lhs, rhs, margin(lhs, rhs))
    return _finish(result)


def check_subadditivity(D, config, pairs=None):
    tol = config.tolerance
    result = CheckResult(SUBADDITIVITY)
    for X, Y in pair_corpus(config, 'subadditivity', pairs):
        lhs = D(add(X, Y))
        rhs = D(X) + D(Y)
        result.record(leq(lhs, rhs, tol), {'X': X, 'Y': Y}, lhs, rhs, margin(lhs, rhs))
    return _finish(result)


# --- Risk checks ---

def check_monotonicity(rho, config, pairs=None):
    """X <= Y atom-wise implies rho(X) >= rho(Y)."""
    tol = config.tolerance
    if pairs is None:
        pairs = generate_ordered_pairs(config, config.n_pairs, 'monotonicity')
    result = CheckResult(MONOTONICITY)
    for X, Y in pairs:
        lhs, rhs = rho(Y), rho(X)
        result.record(leq(lhs, rhs, tol), {'X': X, 'Y': Y}, lhs, rhs, margin(lhs, rhs))
    return _finish(result)


def check_translation_invariance(rho, config, variables=None):
    tol = config.tolerance
    result = CheckResult(TRANSLATION_INVARIANCE)
    for X in variable_corpus(config, 'risk-translation', variables):
        base = rho(X)
        for c in config.shift_grid:
            lhs, rhs = rho(shift(X, c)), base - c
            result.record(close(lhs, rhs, tol), {'X': X, 'c': c}, lhs, rhs, abs(margin(lhs, rhs)))
    return _finish(result)


def check_normalization(rho, config):
    tol = config.tolerance
    result = CheckResult(NORMALIZATION)
    for n in config.atom_counts:
        zero = constant(uniform_space(n), 0.0)
        value = rho(zero)
        result.record(close(value, 0.0, tol), {'X': zero}, value, 0.0, abs(value))
    return _finish(result)


def check_risk_axioms(rho, config):
    log = get_logger(__name__)
    log.info('Auditing risk functional %s (seed %s)', rho.name, config.seed)
    results = [
        check_monotonicity(rho, config),
        check_translation_invariance(rho, config),
        check_normalization(rho, config),
        *check_star_shapedness(rho, config),
        check_positive_homogeneity(rho, config),
    ]
    report = AuditReport(rho.name, 'risk', config.seed, results)
    passed = {r.axiom for r in results if r.status == PASS}
    labels = []
    if {MONOTONICITY, TRANSLATION_INVARIANCE} <= passed:
        labels.append('monetary')
        if {NORMALIZATION, STAR_SHAPED} <= passed:
            labels.append('Star-Shaped')
        if POSITIVE_HOMOGENEITY in passed:
            labels.append('positively homogeneous')
    report.labels = labels
    report.classification = 'Star-Shaped' if 'Star-Shaped' in labels else (labels[0] if labels else 'none')
    report.declared_mismatches = _mismatches(rho.profile.to_dict(), RISK_FLAGS, report)
    log.info('Audit of %s finished: %s', rho.name, report.status_counts())
    return report


# --- Full deviation audit ---

def classify(passed):
    """Classification labels from the set of passed check names."""
    labels = []
    proper = {NON_NEGATIVITY, TRANSLATION_INSENSITIVITY} <= passed
    if proper:
        labels.append('proper')
        if CONVEXITY in passed:
            labels.append('Convex')
            if POSITIVE_HOMOGENEITY in passed:
                labels.append('generalized')
        if STAR_SHAPED in passed:
            labels.append('Star-Shaped')
    if LOWER_RANGE_DOMINANCE in passed:
        labels.append('Lower Range Dominated')
    if LAW_INVARIANCE in passed:
        labels.append('Law Invariant')
    if CONVEX_ORDER_CONSISTENCY in passed:
        labels.append('convex-order consistent')
    if SUBADDITIVITY in passed:
        labels.append('sub-additive')
    return labels


def _headline(labels):
    for label in ('generalized', 'Convex', 'Star-Shaped', 'proper'):
        if label in labels:
            return label
    return 'none'


def _mismatches(profile, flags, report):
    out = []
    for flag, axiom in flags.items():
        status = report.result(axiom).status
        if status == NOT_APPLICABLE:
            continue
        declared = profile.get(flag, False)
        if declared and status == FAIL:
            out.append(f'{flag}: declared, but the audit found violations')
        elif not declared and status == PASS:
            out.append(f'{flag}: not declared, but no violation was found')
    return out


def audit_deviation(D, config):
    log = get_logger(__name__)
    log.info('Auditing deviation %s (seed %s)', D.name, config.seed)
    results = [
        check_non_negativity(D, config),
        check_translation_insensitivity(D, config),
        check_convexity(D, config),
        check_positive_homogeneity(D, config),
        *check_star_shapedness(D, config),
        check_lower_range_dominance(D, config),
        check_law_invariance(D, config),
        check_convex_order_consistency(D, config),
        check_subadditivity(D, config),
    ]
    report = AuditReport(D.name, 'deviation', config.seed, results)
    report.labels = classify({r.axiom for r in results if r.status == PASS})
    report.classification = _headline(report.labels)
    report.declared_mismatches = _mismatches(D.profile.to_dict(), DEVIATION_FLAGS, report)
    log.info('Audit of %s finished: %s', D.name, report.status_counts())
    return report
