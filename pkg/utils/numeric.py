"""
Tolerance-aware comparisons on the extended half-line.

Deviation values may be +inf. The conventions used everywhere:
inf <= inf holds, x < inf for finite x, t * inf = inf for t > 0 and 0 * inf = 0.
Slack is relative for large magnitudes: tol * max(1, |a|, |b|).
"""

import math

INF = math.inf


def slack(tol, *values):
    scale = 1.0
    for v in values:
        if math.isfinite(v):
            scale = max(scale, abs(v))
    return tol * scale


def times(t, value):
    """t * value with 0 * inf = 0."""
    if t == 0:
        return 0.0
    return t * value


def leq(a, b, tol):
    """a <= b up to slack."""
    if b == INF:
        return True
    if a == INF:
        return False
    return a <= b + slack(tol, a, b)


def close(a, b, tol):
    if a == INF or b == INF:
        return a == b
    return abs(a - b) <= slack(tol, a, b)


def margin(a, b):
    """a - b with inf - inf = 0, used to report how badly a <= b failed."""
    if a == b:
        return 0.0
    return a - b
