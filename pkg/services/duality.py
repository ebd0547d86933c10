"""
Risk <-> deviation transforms, VaR/ES dual representations over finite
G-families, and the mirrored-uniform counterexample.
"""

import math

import numpy as np

from models.functional import DeviationFunctional, DeviationProfile, RiskFunctional, RiskProfile
from models.gcurve import GCurve, GFamily
from models.report import CheckResult, CounterexampleBundle
from services import measures
from services.axioms import variable_corpus
from services.space import (
    center,
    convex_order_leq,
    distribution_of,
    ess_inf,
    expectation,
    is_constant,
    mirrored_uniform_pair,
    mix,
    same_distribution,
)
from utils.errors import ContractViolation, GridTooCoarse, InvalidCounterexampleSize, InvalidParameter
from utils.log import get_logger
from utils.numeric import leq, margin

CONTRACT_TOL = 1e-12
GRID_TOL = 1e-12
ADMISSIBLE_TOL = 1e-12
PRINTED_DZ = 2.0 + math.sqrt(2.0 / 3.0)


# --- Transforms ---

def deviation_from_risk(rho):
    """X -> rho(X - E[X]). Raises ContractViolation where rho fails rho(X) > -E[X]."""

    def evaluate(X):
        value = rho(center(X))
        if value < -CONTRACT_TOL:
            raise ContractViolation(f'{rho.name}(X - E[X]) = {value!r} < 0.')
        if value <= CONTRACT_TOL and not is_constant(X):
            raise ContractViolation(f'{rho.name}(X - E[X]) = {value!r} vanishes on a non-constant X.')
        return max(value, 0.0)

    p = rho.profile
    return DeviationFunctional(
        f'dev[{rho.name}]',
        evaluate,
        DeviationProfile(non_negative=True, translation_insensitive=True,
                         positively_homogeneous=p.positively_homogeneous, star_shaped=p.star_shaped),
    )


def risk_from_deviation(D):
    """X -> -E[X] + D(X)."""
    p = D.profile
    return RiskFunctional(
        f'risk[{D.name}]',
        lambda X: -expectation(X) + D(X),
        RiskProfile(
            monotone=p.lower_range_dominated and p.star_shaped,
            translation_invariant=p.translation_insensitive,
            normalized=p.non_negative,
            star_shaped=p.star_shaped,
            positively_homogeneous=p.positively_homogeneous,
        ),
    )


def check_limitedness(mu, D, config, variables=None):
    """mu(X) + D(X) <= -ess inf X."""
    tol = config.tolerance
    result = CheckResult('limitedness')
    for X in variable_corpus(config, 'limitedness', variables):
        lhs, rhs = mu(X) + D(X), -ess_inf(X)
        result.record(leq(lhs, rhs, tol), {'X': X}, lhs, rhs, margin(lhs, rhs))
    return result


# --- Dual representations ---

def _check_grid(G, X):
    p_min = X.space.min_prob
    if G.alpha_grid[0] > p_min + GRID_TOL:
        raise GridTooCoarse(
            f'alpha grid starts at {G.alpha_grid[0]:.6g}, above the smallest atom probability {p_min:.6g}.',
            min_atom_prob=p_min,
        )


def _inf_sup(G, profile):
    # one row per curve: sup over the grid, then the lowest-index minimum
    sups = np.max(profile[None, :] - G.matrix, axis=1)
    return float(sups[int(np.argmin(sups))])


def dual_var_eval(G, X):
    """inf over g in G of sup over the grid of VaR^a(X - E[X]) - g(a)."""
    _check_grid(G, X)
    return _inf_sup(G, measures.var_alpha_grid(center(X), G.alpha_grid))


def dual_es_eval(G, X):
    """inf over g in G of sup over the grid of ES^a(X - E[X]) - g(a)."""
    _check_grid(G, X)
    return _inf_sup(G, measures.es_alpha_grid(center(X), G.alpha_grid))


def dual_functional(G, kind='es'):
    """A dual evaluator as a DeviationFunctional, floored at 0."""
    evaluators = {'var': dual_var_eval, 'es': dual_es_eval}
    if kind not in evaluators:
        raise InvalidParameter(f'Dual kind must be "var" or "es", got {kind!r}.')
    evaluate = evaluators[kind]
    return DeviationFunctional(
        f'dual-{kind}[{G.name or "G"}]',
        lambda X: max(evaluate(G, X), 0.0),
        DeviationProfile(translation_insensitive=True, star_shaped=G.star_closed, law_invariant=True),
    )


def default_alpha_grid(n_max):
    """k / (2 n_max) for k = 1 .. 2 n_max - 1."""
    if n_max < 1:
        raise InvalidParameter('n_max must be >= 1.')
    return np.arange(1, 2 * n_max) / (2.0 * n_max)


def covering_alpha_grid(variables):
    """Cumulative breakpoints of every variable, their midpoints and half the smallest atom mass."""
    points = []
    p_min = 1.0
    for X in variables:
        cumulative = distribution_of(X).cumulative[:-1]
        points.append(cumulative)
        p_min = min(p_min, X.space.min_prob)
    breaks = np.unique(np.concatenate(points + [np.array([0.5 * p_min])]))
    edges = np.concatenate(([0.0], breaks, [1.0]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    grid = np.unique(np.concatenate((breaks, mids)))
    return grid[(grid > 0.0) & (grid < 1.0)]


def random_gfamily(seed, alpha_grid, count, height=1.0, name=None):
    """
    `count` seeded curves, each non-negative, non-increasing and ending at 0.
    Non-negative curves dominate their own [0, 1] multiples, so the family is star-closed.
    """
    rng = np.random.default_rng(seed)
    grid = np.asarray(alpha_grid, dtype=float)
    curves = []
    for _ in range(count):
        draws = np.sort(rng.uniform(0.0, height, size=grid.size))[::-1]
        curves.append(GCurve(grid, draws - draws[-1]))
    return GFamily(curves, star_closed=True, name=name)


def zero_gfamily(alpha_grid, name=None):
    return GFamily([GCurve(alpha_grid, np.zeros(len(alpha_grid)))], star_closed=True, name=name)


def g_from_acceptance(Y, D, alpha_grid):
    """
    The curve a -> ES^a(Y) when Y is acceptable (-E[Y] + D(Y) <= 0), else None.
    GCurve validation rejects curves whose right end is negative.
    """
    if -expectation(Y) + D(Y) > ADMISSIBLE_TOL:
        return None
    return GCurve(alpha_grid, measures.es_alpha_grid(Y, alpha_grid))


# --- Counterexample ---

def build_counterexample(n, alpha=0.4):
    """
    X uniform on an n-point midpoint grid of [-2, 2], Y its mirror and
    Z = (X + Y) / 2 = +-1. With D = IQD^alpha + SD, X and Y share a law,
    Z precedes X in convex order, yet D(Z) > D(X).
    """
    if n < 10 or n % 2:
        raise InvalidCounterexampleSize(f'n = {n} must be an even integer >= 10.')
    D = measures.add(measures.iqd_functional(alpha), measures.sd_functional())
    X, Y = mirrored_uniform_pair(n)
    Z = mix(X, Y, 0.5)
    dX, dY, dZ = D(X), D(Y), D(Z)
    bundle = CounterexampleBundle(
        n=n,
        alpha=alpha,
        X=X, Y=Y, Z=Z,
        dX=dX, dY=dY, dZ=dZ,
        convex_order_ok=convex_order_leq(Z, X),
        same_dist_ok=same_distribution(X, Y),
        inequality_ok=dZ > dX,
        continuum_dx=4.0 * (1.0 - 2.0 * alpha) + math.sqrt(4.0 / 3.0),
        two_point_dz=2.0 + 1.0,
    )
    log = get_logger(__name__)
    log.info('Counterexample n=%d alpha=%g: D(X)=%.12g D(Y)=%.12g D(Z)=%.12g', n, alpha, dX, dY, dZ)
    log.info('D(Z) of the two-point Z = +-1 is %.12g; printed constant 2 + sqrt(2/3) = %.12g differs',
             bundle.two_point_dz, PRINTED_DZ)
    return bundle
