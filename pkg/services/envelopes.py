"""
Acceptance sets of deviation measures and the convex ray envelopes whose
minimum represents a star-shaped deviation.

A ray envelope anchored at Y with value d = D(Y) is finite only near the ray
through center(Y):
  star      t * d when center(X) = t * center(Y), t in [0, 1]
  cone      t * d when center(X) = t * center(Y), t >= 0
  halfline  d     when center(X) = center(Y)
  lrd       min over lam in [0, 1] of ess sup(lam * Z - X) + E[X], Z = center(Y) + d
The first three are +inf off their locus; lrd is finite everywhere.
"""

import numpy as np

from models.acceptance import AcceptanceSet, RayEnvelope, SetFlags
from models.report import NOT_APPLICABLE, CheckResult
from services.axioms import generate_variables
from services.measures import chi_constants, full_range
from services.space import center, constant, ess_inf, expectation, is_constant, mix, scale, shift, uniform_space
from utils.errors import BracketTooSmall, InvalidParameter, NotUpwardClosed
from utils.log import get_logger
from utils.numeric import INF, leq, margin, times

ACCEPT_TOL = 1e-12
RAY_TOL = 1e-10
BISECTION_TOL = 1e-9
DEFAULT_BRACKET = 1e6
BRACKET_PROBES = 65


# --- Acceptance sets ---

def acceptance_of(D):
    """{X : D(X) <= E[X]}."""
    return AcceptanceSet(
        f'A[{D.name}]',
        lambda X: D(X) <= expectation(X) + ACCEPT_TOL,
        SetFlags(star_shaped=D.profile.star_shaped, convex=D.profile.convex),
    )


def deviation_of(A, X, m_lo=-DEFAULT_BRACKET, m_hi=DEFAULT_BRACKET):
    """
    inf{m : X + m in A} + E[X], for sets whose membership is upward-closed in m.

    Returns inf when X + m_hi is still outside A. A coarse linear scan of the
    bracket checks upward closure before bisecting to BISECTION_TOL.
    """
    if not m_lo < m_hi:
        raise InvalidParameter(f'Bracket [{m_lo}, {m_hi}] is empty.')

    def member(m):
        return A.contains(shift(X, m))

    if member(m_lo):
        raise BracketTooSmall(f'X + {m_lo:g} is already in {A.description}; widen the lower bracket.')
    if not member(m_hi):
        return INF
    grid = np.linspace(m_lo, m_hi, BRACKET_PROBES)
    flags = [False] + [member(m) for m in grid[1:-1]] + [True]
    first = flags.index(True)
    if not all(flags[first:]):
        raise NotUpwardClosed(f'Membership of X + m in {A.description} is not upward-closed in m.')
    lo, hi = float(grid[first - 1]), float(grid[first])
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if member(mid):
            hi = mid
        else:
            lo = mid
    get_logger(__name__).debug('Acceptance boundary of %s at m = %.12g', A.description, hi)
    return hi + expectation(X)


def _member_candidates(X):
    """Shifted and rescaled copies of X probing both sides of typical acceptance boundaries."""
    fr = full_range(X)
    base = shift(X, -ess_inf(X))
    out = [X] + [shift(base, k * fr) for k in (0.0, 1.0, 5.0)]
    if fr > 0:
        out += [scale(center(X), t / fr) for t in (0.5, 1.5, 3.0)]
    return out


def is_star_shaped_set(A, config, pool=None):
    """Every sampled member X of A keeps lam * X in A for lam in the grid's [0, 1] part."""
    if pool is None:
        pool = generate_variables(config, config.n_variables, 'star-set')
    result = CheckResult('star_shaped_set')
    for seed_variable in pool:
        for X in _member_candidates(seed_variable):
            if not A.contains(X):
                continue
            for lam in config.unit_lambdas:
                ok = A.contains(scale(X, lam))
                result.record(ok, {'X': X, 'lambda': lam}, 0.0 if ok else 1.0, 0.0, 0.0 if ok else 1.0)
    if result.checked == 0:
        result.status = NOT_APPLICABLE
    return result


# --- Ray envelopes ---

def ray_coefficient(X, Y):
    """
    Least-squares t with center(X) ~ t * center(Y), or None when the residual
    exceeds RAY_TOL relative to the size of center(X) (X is off the ray).
    """
    cx = center(X).values
    cy = center(Y).values
    denom = float(np.dot(Y.probs, cy * cy))
    t = float(np.dot(Y.probs, cx * cy)) / denom
    residual = float(np.max(np.abs(cx - t * cy)))
    if residual > RAY_TOL * max(1.0, float(np.max(np.abs(cx)))):
        return None
    return t


def _trivial_envelope(Y, dY, variant):
    chi = chi_constants()
    return RayEnvelope(Y, dY, variant, chi)


def ray_envelope(Y, dY, variant='star'):
    if variant == 'lrd':
        return ray_envelope_lrd(Y, dY)
    if variant not in ('star', 'cone', 'halfline'):
        raise InvalidParameter(f'Unknown envelope variant {variant!r}.')
    if is_constant(Y):
        return _trivial_envelope(Y, dY, variant)

    def evaluate(X):
        if X.space != Y.space:
            return INF
        t = ray_coefficient(X, Y)
        if t is None:
            return INF
        if variant == 'halfline':
            return dY if abs(t - 1.0) <= RAY_TOL else INF
        if t < -RAY_TOL:
            return INF
        t = max(t, 0.0)
        if variant == 'star':
            if t > 1.0 + RAY_TOL:
                return INF
            t = min(t, 1.0)
        return times(t, dY)

    return RayEnvelope(Y, dY, variant, evaluate)


def _min_upper_envelope(slopes, intercepts):
    """min over lam in [0, 1] of max_i (slopes_i * lam + intercepts_i)."""
    order = np.lexsort((intercepts, slopes))
    hull = []
    for i in order:
        a, b = float(slopes[i]), float(intercepts[i])
        if hull and hull[-1][0] == a:
            hull.pop()
        while len(hull) >= 2:
            (a1, b1), (a2, b2) = hull[-2], hull[-1]
            # the middle line never reaches the top once the outer two cross before it does
            if (b1 - b2) * (a - a2) >= (b2 - b) * (a2 - a1):
                hull.pop()
            else:
                break
        hull.append((a, b))
    candidates = [0.0, 1.0]
    for (a1, b1), (a2, b2) in zip(hull, hull[1:]):
        x = (b1 - b2) / (a2 - a1)
        if 0.0 < x < 1.0:
            candidates.append(x)
    lam = np.array(candidates)
    values = np.max(np.outer(lam, slopes) + intercepts, axis=1)
    return float(np.min(values))


def ray_envelope_lrd(Y, dY):
    if not np.isfinite(dY):
        return _trivial_envelope(Y, dY, 'lrd')
    z = center(Y).values + dY

    def evaluate(X):
        if X.space != Y.space:
            return INF
        return _min_upper_envelope(z, -X.values) + expectation(X)

    return RayEnvelope(Y, dY, 'lrd', evaluate)


def envelope_family(D, anchors, variant='star'):
    return [ray_envelope(Y, D(Y), variant) for Y in anchors]


def ray_locus(env, config):
    """Finite-value points of an envelope: scaled anchors shifted by the shift grid."""
    if env.variant == 'halfline':
        lambdas = [1.0]
    elif env.variant == 'cone':
        lambdas = sorted(config.lambda_grid)
    else:
        lambdas = config.unit_lambdas
    points = []
    for lam in lambdas:
        ray_point = scale(env.anchor, lam)
        points.append(ray_point)
        points.extend(shift(ray_point, c) for c in config.shift_grid)
    return points


def verify_domination(D, env, config, points=None):
    """env(X) >= D(X) - tol on the envelope's locus."""
    tol = config.tolerance
    result = CheckResult('domination')
    for X in points if points is not None else ray_locus(env, config):
        lhs, rhs = D(X), env(X)
        result.record(leq(lhs, rhs, tol), {'X': X}, lhs, rhs, margin(lhs, rhs))
    return result


def check_envelope_convexity(env, config):
    tol = config.tolerance
    points = ray_locus(env, config)
    result = CheckResult('envelope_convexity')
    for i, X in enumerate(points):
        for Y in points[i + 1::3]:
            ex, ey = env(X), env(Y)
            for lam in config.unit_lambdas:
                lhs = env(mix(X, Y, lam))
                rhs = times(lam, ex) + times(1.0 - lam, ey)
                result.record(leq(lhs, rhs, tol), {'X': X, 'Y': Y, 'lambda': lam}, lhs, rhs, margin(lhs, rhs))
    return result


def union_pool(config, count=None):
    """Generated variables moved across the acceptance boundary, plus constants c >= 0."""
    pool = []
    for X in generate_variables(config, count or config.n_variables, 'acceptance-union'):
        base = shift(X, -ess_inf(X))
        fr = full_range(X)
        pool.extend(shift(base, k * fr) for k in (0.0, 0.25, 0.5, 1.0))
    space = uniform_space(2)
    pool.extend(constant(space, c) for c in (0.0, 1.0, 10.0))
    return pool


def acceptance_union_identity(D, family, config, pool=None):
    """
    On every pooled X with finite values: X is accepted by D iff it is
    accepted by some family member iff -E[X] + D(X) <= 0.
    """
    A = acceptance_of(D)
    members = [acceptance_of(Di) for Di in family]
    result = CheckResult('acceptance_union')
    for X in pool if pool is not None else union_pool(config):
        values = [Di(X) for Di in family]
        dx = D(X)
        if not (np.isfinite(dx) and all(np.isfinite(values))):
            continue
        in_d = A.contains(X)
        in_union = any(M.contains(X) for M in members)
        risk = -expectation(X) + dx
        in_risk = risk <= ACCEPT_TOL
        ok = in_d == in_union == in_risk
        result.record(ok, {'X': X}, risk, 0.0, 0.0 if ok else abs(risk))
    if result.checked == 0:
        result.status = NOT_APPLICABLE
    return result
