"""
Finite probability spaces and the random-variable algebra used by every
other service: expectations, laws, left quantiles, stop-loss transforms and
the (increasing) convex order.
"""

import numpy as np

from models.probability import Distribution, ProbSpace, RandomVariable
from utils.errors import EmptySample, InvalidProbability, InvalidParameter, SpaceMismatch

ALGEBRA_TOL = 1e-12
ORDER_TOL = 1e-10
QUANTILE_TOL = 1e-12


def make_space(probs):
    return ProbSpace(probs)


def uniform_space(n):
    if n < 1:
        raise EmptySample('A uniform space needs at least one atom.')
    return ProbSpace(np.full(n, 1.0 / n))


def constant(space, c):
    return RandomVariable(space, np.full(space.n, float(c)))


def empirical_from_samples(samples):
    """Equal-weight space with one atom per sample."""
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise EmptySample('Cannot build an empirical space from an empty sample.')
    space = uniform_space(samples.size)
    return space, RandomVariable(space, samples)


def mirrored_uniform_pair(n):
    """
    X uniform on the midpoints of an n-cell grid over [-2, 2] and its mirror
    Y = (2 - X) on {X > 0}, -(X + 2) on {X < 0}; both are uniform on the same
    grid. Midpoints keep every atom away from 0.
    """
    space = uniform_space(n)
    i = np.arange(1, n + 1, dtype=float)
    x = -2.0 + 4.0 * (i - 0.5) / n
    y = np.where(x > 0, 2.0 - x, -(x + 2.0))
    return RandomVariable(space, x), RandomVariable(space, y)


# --- Moments and bounds ---

def expectation(X):
    # Accumulated around the minimum so a constant has an exact mean.
    base = X.values.min()
    return float(base + np.dot(X.probs, X.values - base))


def ess_inf(X):
    return float(X.values.min())


def ess_sup(X):
    return float(X.values.max())


def is_constant(X, tol=ALGEBRA_TOL):
    spread = float(np.ptp(X.values))
    return spread <= tol * max(1.0, float(np.abs(X.values).max()))


# --- Laws and quantiles ---

def distribution_of(X):
    values, inverse = np.unique(X.values, return_inverse=True)
    probs = np.bincount(inverse.ravel(), weights=X.probs, minlength=values.size)
    return Distribution(values, probs / probs.sum())


def _check_level(p):
    if not 0.0 < p <= 1.0:
        raise InvalidProbability(f'Probability level {p!r} is outside (0, 1].')


def left_quantiles(X, levels):
    """Vectorized F_X^{-1}(p) = inf{x : F_X(x) >= p}."""
    dist = X if isinstance(X, Distribution) else distribution_of(X)
    levels = np.asarray(levels, dtype=float)
    idx = np.searchsorted(dist.cumulative, levels - QUANTILE_TOL, side='left')
    return dist.values[np.minimum(idx, dist.values.size - 1)]


def left_quantile(X, p):
    _check_level(p)
    return float(left_quantiles(X, [p])[0])


def quantile_integral(X, lo, hi):
    """
    Exact integral of the left quantile function over (lo, hi], computed over
    the cumulative breakpoints of the law.
    """
    dist = X if isinstance(X, Distribution) else distribution_of(X)
    upper = dist.cumulative
    lower = np.concatenate(([0.0], upper[:-1]))
    widths = np.clip(np.minimum(upper, hi) - np.maximum(lower, lo), 0.0, None)
    return float(np.dot(widths, dist.values))


def _merged_law(X, tol):
    """Law of X with sorted support points closer than `tol` merged, masses summed."""
    dist = distribution_of(X)
    starts = np.flatnonzero(np.concatenate(([True], np.diff(dist.values) > tol)))
    return dist.values[starts], np.add.reduceat(dist.probs, starts)


def same_distribution(X, Y, tol=ALGEBRA_TOL):
    a_values, a_probs = _merged_law(X, tol)
    b_values, b_probs = _merged_law(Y, tol)
    if a_values.size != b_values.size:
        return False
    return bool(np.allclose(a_values, b_values, rtol=0.0, atol=tol)
                and np.allclose(a_probs, b_probs, rtol=0.0, atol=tol))


# --- Stop-loss transform and stochastic orders ---

def stop_loss(X, thresholds):
    """k -> E[(X - k)^+] for every k in `thresholds`."""
    dist = distribution_of(X)
    thresholds = np.asarray(thresholds, dtype=float)
    tail_prob = np.concatenate((np.cumsum(dist.probs[::-1])[::-1], [0.0]))
    tail_mass = np.concatenate((np.cumsum((dist.probs * dist.values)[::-1])[::-1], [0.0]))
    idx = np.searchsorted(dist.values, thresholds, side='right')
    return tail_mass[idx] - thresholds * tail_prob[idx]


def _support_union(X, Y):
    return np.union1d(X.values, Y.values)


def increasing_convex_order_leq(X, Y, tol=ORDER_TOL):
    """X precedes Y in increasing convex order (stop-loss criterion)."""
    k = _support_union(X, Y)
    return bool(np.all(stop_loss(X, k) <= stop_loss(Y, k) + tol))


def convex_order_leq(X, Y, tol=ORDER_TOL):
    """X precedes Y in convex order: equal means and dominated stop-loss transforms."""
    if abs(expectation(X) - expectation(Y)) > tol:
        return False
    return increasing_convex_order_leq(X, Y, tol)


# --- Pointwise algebra ---

def _require_same_space(X, Y):
    if X.space != Y.space:
        raise SpaceMismatch('Both random variables must live on the same probability space.')


def scale(X, lam):
    return RandomVariable(X.space, lam * X.values)


def shift(X, c):
    return RandomVariable(X.space, X.values + c)


def add(X, Y):
    _require_same_space(X, Y)
    return RandomVariable(X.space, X.values + Y.values)


def mix(X, Y, lam):
    if not 0.0 <= lam <= 1.0:
        raise InvalidParameter(f'Mixing weight {lam!r} is outside [0, 1].')
    _require_same_space(X, Y)
    return RandomVariable(X.space, lam * X.values + (1.0 - lam) * Y.values)


def center(X):
    return RandomVariable(X.space, X.values - expectation(X))


def negative_part(X):
    return RandomVariable(X.space, np.maximum(-X.values, 0.0))


def positive_part(X):
    return RandomVariable(X.space, np.maximum(X.values, 0.0))


def permute(X, order):
    """The variable with atom values rearranged; only law-preserving on uniform spaces."""
    return RandomVariable(X.space, X.values[np.asarray(order)])


def refine(X, factor=2):
    """Split every atom into `factor` equal atoms; the law is unchanged."""
    probs = np.repeat(X.probs / factor, factor)
    return RandomVariable(ProbSpace(probs / probs.sum()), np.repeat(X.values, factor))
