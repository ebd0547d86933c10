"""
Deviation, variability and risk measures on finite probability spaces, and
the combinators used to build composite functionals.

Plain functions take a RandomVariable and return a float. The builders at the
bottom wrap them as DeviationFunctional / RiskFunctional objects with their
declared axiom profiles; services/catalog.py resolves string ids to them.
"""

import math

import numpy as np

from models.acceptance import AcceptanceSet, SetFlags
from models.functional import DeviationFunctional, DeviationProfile, RiskFunctional, RiskProfile
from services.space import (
    center,
    distribution_of,
    ess_inf,
    ess_sup,
    expectation,
    is_constant,
    left_quantiles,
    negative_part,
    positive_part,
    quantile_integral,
    scale,
)
from utils.errors import InvalidParameter, InvalidProbability, NotStarShapedSet
from utils.log import get_logger
from utils.numeric import INF, times

DEFAULT_M_MAX = 1e6
GAUGE_TOL = 1e-9
# Coarse scan used to detect a non-monotone gauge predicate before bisecting.
GAUGE_PROBES = 64
GAUGE_FLOOR = 1e-12


def _check_open_unit(alpha):
    if not 0.0 < alpha < 1.0:
        raise InvalidProbability(f'alpha = {alpha!r} must lie in (0, 1).')


def _check_half(alpha):
    if not 0.0 < alpha < 0.5:
        raise InvalidProbability(f'alpha = {alpha!r} must lie in (0, 0.5).')


def _weighted_norm(v, probs, p):
    if p == INF:
        return float(np.max(v))
    return float(np.dot(probs, v ** p) ** (1.0 / p))


# --- Moment-based deviations ---

def sd(X):
    c = center(X).values
    return float(math.sqrt(np.dot(X.probs, c * c)))


def sd_minus(X):
    c = np.minimum(center(X).values, 0.0)
    return float(math.sqrt(np.dot(X.probs, c * c)))


def sd_plus(X):
    c = np.maximum(center(X).values, 0.0)
    return float(math.sqrt(np.dot(X.probs, c * c)))


# --- Ranges ---

def full_range(X):
    return ess_sup(X) - ess_inf(X)


def lower_range(X):
    return expectation(X) - ess_inf(X)


def upper_range(X):
    return ess_sup(X) - expectation(X)


# --- Quantile-based measures ---

def var_alpha(X, alpha):
    """VaR^alpha(X) = -F_X^{-1}(alpha)."""
    _check_open_unit(alpha)
    return float(-left_quantiles(X, [alpha])[0])


def es_alpha(X, alpha):
    """ES^alpha(X): average of VaR^s over s in (0, alpha], exact over the law's breakpoints."""
    _check_open_unit(alpha)
    return -quantile_integral(X, 0.0, alpha) / alpha


def upper_es_alpha(X, alpha):
    """Average of VaR^s over the upper tail s in (1 - alpha, 1]."""
    _check_open_unit(alpha)
    return -quantile_integral(X, 1.0 - alpha, 1.0) / alpha


def var_alpha_grid(X, grid):
    return -left_quantiles(X, grid)


def es_alpha_grid(X, grid):
    """ES at every level of `grid` in one pass over the law's breakpoints."""
    grid = np.asarray(grid, dtype=float)
    dist = distribution_of(X)
    upper = dist.cumulative
    lower = np.concatenate(([0.0], upper[:-1]))
    widths = np.clip(np.minimum(upper[None, :], grid[:, None]) - lower[None, :], 0.0, None)
    return -(widths @ dist.values) / grid


def iqd(X, alpha):
    _check_half(alpha)
    q_lo, q_hi = left_quantiles(X, [alpha, 1.0 - alpha])
    return float(q_hi - q_lo)


def ied(X, alpha):
    """
    Inter-ES difference: mean of the upper alpha-tail minus mean of the lower
    alpha-tail. Dominates iqd at the same level.
    """
    _check_half(alpha)
    dist = distribution_of(X)
    return es_alpha(dist, alpha) - upper_es_alpha(dist, alpha)


def lvar_d(X, curve):
    """
    sup over u >= 0 of -F^{-1}_{X - E[X]}(alpha(u)) - u.

    alpha(.) is constant on each step, where the objective decreases in u,
    so the supremum is the maximum over the step starts.
    """
    levels = left_quantiles(center(X), curve.alphas)
    return float(np.max(-levels - curve.us))


# --- Deviations induced by a risk-type functional ---

def regular_based(f, X):
    return f(center(X))


def ld_f(f, X):
    return f(negative_part(center(X)))


def ud_f(f, X):
    return f(positive_part(center(X)))


def loss_deviation(rho, p, X):
    """|| (X + rho(X))^- ||_p for a cash-invariant risk functional rho, p in [1, inf]."""
    if not (p == INF or 1.0 <= p < INF):
        raise InvalidParameter(f'p = {p!r} must lie in [1, inf].')
    shortfall = np.maximum(-(X.values + rho(X)), 0.0)
    return _weighted_norm(shortfall, X.probs, p)


# --- Minkowski gauge ---

def minkowski(A, X, m_max=DEFAULT_M_MAX):
    """
    inf{m > 0 : X / m in A} for a star-shaped set A, searched on (0, m_max].

    A coarse geometric scan checks the membership predicate is monotone in m
    (false below the gauge, true above it); bisection then refines the first
    switch to GAUGE_TOL. Returns inf when X / m_max is still outside A.
    """
    if m_max <= 0:
        raise InvalidParameter('The gauge search ceiling must be > 0.')

    def member(m):
        return A.contains(scale(X, 1.0 / m))

    grid = np.geomspace(min(GAUGE_FLOOR, m_max), m_max, GAUGE_PROBES)
    flags = [member(m) for m in grid]
    if not flags[-1]:
        return INF
    first = flags.index(True)
    if not all(flags[first:]):
        raise NotStarShapedSet(f'Gauge predicate of {A.description} is not monotone in m.')
    if first == 0:
        return 0.0
    lo, hi = float(grid[first - 1]), float(grid[first])
    while hi - lo > GAUGE_TOL:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if member(mid):
            hi = mid
        else:
            lo = mid
    get_logger(__name__).debug('Minkowski gauge of %s converged to %.12g', A.description, hi)
    return hi


def sublevel_set(D, level=1.0):
    """{X : D(X) <= level}; star-shaped whenever D is a star-shaped deviation."""
    return AcceptanceSet(
        f'{{{D.name} <= {level:g}}}',
        lambda X: D(X) <= level,
        SetFlags(star_shaped=D.profile.star_shaped, convex=D.profile.convex),
    )


# --- Functional builders ---

def _moment(name, fn, lower_range_dominated=False):
    return DeviationFunctional(name, fn, DeviationProfile(
        non_negative=True, translation_insensitive=True, convex=True,
        positively_homogeneous=True, star_shaped=True,
        lower_range_dominated=lower_range_dominated, law_invariant=True,
    ))


def sd_functional():
    return _moment('sd', sd)


def sd_minus_functional():
    return _moment('sd_minus', sd_minus, lower_range_dominated=True)


def sd_plus_functional():
    return _moment('sd_plus', sd_plus)


def full_range_functional():
    return _moment('fr', full_range)


def lower_range_functional():
    return _moment('lr', lower_range, lower_range_dominated=True)


def upper_range_functional():
    return _moment('ur', upper_range)


def var_deviation(alpha):
    """VaR^alpha of the centered variable, floored at 0."""
    _check_open_unit(alpha)
    return DeviationFunctional(
        f'var@{alpha:g}',
        lambda X: max(var_alpha(center(X), alpha), 0.0),
        DeviationProfile(translation_insensitive=True, positively_homogeneous=True, star_shaped=True,
                         lower_range_dominated=True, law_invariant=True),
    )


def es_deviation(alpha):
    _check_open_unit(alpha)
    return DeviationFunctional(
        f'es@{alpha:g}',
        lambda X: es_alpha(center(X), alpha),
        DeviationProfile(non_negative=True, translation_insensitive=True, convex=True,
                         positively_homogeneous=True, star_shaped=True,
                         lower_range_dominated=True, law_invariant=True),
    )


def iqd_functional(alpha):
    _check_half(alpha)
    return DeviationFunctional(
        f'iqd@{alpha:g}',
        lambda X: iqd(X, alpha),
        DeviationProfile(translation_insensitive=True, positively_homogeneous=True,
                         star_shaped=True, law_invariant=True),
    )


def ied_functional(alpha):
    """
    IED read as upper-tail mean minus lower-tail mean. Both tails hold at least
    alpha of the mass, so the difference is >= IQD >= 0 and vanishes only on
    constants. Unlike IQD, which can be 0 on a non-constant variable with tied
    quantiles, this reading is non-negative in the strict sense and is declared so.
    """
    _check_half(alpha)
    return DeviationFunctional(
        f'ied@{alpha:g}',
        lambda X: ied(X, alpha),
        DeviationProfile(non_negative=True, translation_insensitive=True, convex=True,
                         positively_homogeneous=True, star_shaped=True, law_invariant=True),
    )


def lvard_functional(curve):
    return DeviationFunctional(
        f'lvard@{curve.name}' if curve.name else 'lvard',
        lambda X: max(lvar_d(X, curve), 0.0),
        DeviationProfile(translation_insensitive=True, star_shaped=True,
                         lower_range_dominated=True, law_invariant=True),
    )


def composite_iqd_sq_plus_sd(alpha):
    """(IQD^alpha)^2 + SD: star-shaped, proper, neither convex nor positively homogeneous."""
    _check_half(alpha)
    return DeviationFunctional(
        f'iqd2+sd@{alpha:g}',
        lambda X: iqd(X, alpha) ** 2 + sd(X),
        DeviationProfile(non_negative=True, translation_insensitive=True, star_shaped=True,
                         law_invariant=True),
    )


def chi_constants():
    """0 on constants, +inf elsewhere."""
    return DeviationFunctional(
        'chi_const',
        lambda X: 0.0 if is_constant(X) else INF,
        DeviationProfile(non_negative=True, translation_insensitive=True, convex=True,
                         positively_homogeneous=True, star_shaped=True, law_invariant=True),
    )


def regular_based_functional(f):
    return DeviationFunctional(
        f'reg[{f.name}]',
        lambda X: regular_based(f, X),
        DeviationProfile(translation_insensitive=True, star_shaped=f.profile.star_shaped,
                         positively_homogeneous=f.profile.positively_homogeneous, law_invariant=True),
    )


def regularized_range(f):
    """min(UD_f, LD_f)."""
    return DeviationFunctional(
        f'minrange[{f.name}]',
        lambda X: min(ud_f(f, X), ld_f(f, X)),
        DeviationProfile(translation_insensitive=True, star_shaped=f.profile.star_shaped,
                         positively_homogeneous=f.profile.positively_homogeneous),
    )


def loss_deviation_functional(rho, p):
    if not (p == INF or 1.0 <= p < INF):
        raise InvalidParameter(f'p = {p!r} must lie in [1, inf].')
    return DeviationFunctional(
        f'loss[{rho.name},{p:g}]',
        lambda X: loss_deviation(rho, p, X),
        DeviationProfile(translation_insensitive=rho.profile.translation_invariant,
                         positively_homogeneous=rho.profile.positively_homogeneous,
                         star_shaped=rho.profile.star_shaped),
    )


def minkowski_functional(A, m_max=DEFAULT_M_MAX):
    return DeviationFunctional(
        f'md[{A.description}]',
        lambda X: minkowski(A, X, m_max),
        DeviationProfile(positively_homogeneous=True, star_shaped=True),
    )


# --- Combinators ---

def add(D1, D2):
    """Pointwise sum. Both summands are taken to vanish on constants."""
    a, b = D1.profile, D2.profile
    return DeviationFunctional(
        f'{D1.name}+{D2.name}',
        lambda X: D1(X) + D2(X),
        DeviationProfile(
            non_negative=a.non_negative or b.non_negative,
            translation_insensitive=a.translation_insensitive and b.translation_insensitive,
            convex=a.convex and b.convex,
            positively_homogeneous=a.positively_homogeneous and b.positively_homogeneous,
            star_shaped=a.star_shaped and b.star_shaped,
            law_invariant=a.law_invariant and b.law_invariant,
        ),
    )


def scale_functional(D, t):
    if not t > 0:
        raise InvalidParameter(f'Scale factor {t!r} must be > 0.')
    p = D.profile
    return DeviationFunctional(
        f'{t:g}*{D.name}',
        lambda X: times(t, D(X)),
        DeviationProfile(
            non_negative=p.non_negative,
            translation_insensitive=p.translation_insensitive,
            convex=p.convex,
            positively_homogeneous=p.positively_homogeneous,
            star_shaped=p.star_shaped,
            lower_range_dominated=p.lower_range_dominated and t <= 1,
            law_invariant=p.law_invariant,
        ),
    )


def square(D):
    p = D.profile
    return DeviationFunctional(
        f'({D.name})^2',
        lambda X: D(X) ** 2,
        DeviationProfile(non_negative=p.non_negative, translation_insensitive=p.translation_insensitive,
                         star_shaped=p.star_shaped, law_invariant=p.law_invariant),
    )


def min_family(family, X):
    """
    Pointwise minimum over a finite family of evaluable functionals.
    Returns (value, index); the lowest index wins ties.
    """
    if not family:
        raise InvalidParameter('min_family needs a non-empty family.')
    values = np.array([f(X) for f in family], dtype=float)
    index = int(np.argmin(values))
    return float(values[index]), index


def min_functional(name, family):
    family = list(family)
    if not family:
        raise InvalidParameter('min_functional needs a non-empty family.')
    profiles = [f.profile for f in family]
    return DeviationFunctional(
        name,
        lambda X: min_family(family, X)[0],
        DeviationProfile(
            non_negative=all(p.non_negative for p in profiles),
            translation_insensitive=all(p.translation_insensitive for p in profiles),
            positively_homogeneous=all(p.positively_homogeneous for p in profiles),
            star_shaped=all(p.star_shaped for p in profiles),
            lower_range_dominated=any(p.lower_range_dominated for p in profiles),
            law_invariant=all(p.law_invariant for p in profiles),
        ),
    )


# --- Risk functionals ---

_COHERENT = RiskProfile(monotone=True, translation_invariant=True, normalized=True,
                        star_shaped=True, positively_homogeneous=True)


def mean_risk():
    """rho(X) = -E[X]."""
    return RiskFunctional('mean', lambda X: -expectation(X), _COHERENT)


def worst_risk():
    """rho(X) = -ess inf X."""
    return RiskFunctional('worst', lambda X: -ess_inf(X), _COHERENT)


def sup_functional():
    """f(X) = ess sup X; increasing rather than decreasing, used to build UR-type deviations."""
    return RiskFunctional('sup', ess_sup, RiskProfile(normalized=True, star_shaped=True,
                                                     positively_homogeneous=True))


def var_risk(alpha):
    _check_open_unit(alpha)
    return RiskFunctional(f'var@{alpha:g}', lambda X: var_alpha(X, alpha), _COHERENT)


def es_risk(alpha):
    _check_open_unit(alpha)
    return RiskFunctional(f'es@{alpha:g}', lambda X: es_alpha(X, alpha), _COHERENT)
