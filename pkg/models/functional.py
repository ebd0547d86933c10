import math
from dataclasses import asdict, dataclass

import numpy as np

from utils.errors import ContractViolation, InvalidParameter, NonFiniteValue

# Rounding noise below zero is folded back to 0; anything further down is a defect.
NEGATIVE_SLACK = 1e-12


@dataclass(frozen=True)
class DeviationProfile:
    """Axiom flags a deviation functional declares. The audit verifies them."""
    non_negative: bool = False
    translation_insensitive: bool = False
    convex: bool = False
    positively_homogeneous: bool = False
    star_shaped: bool = False
    lower_range_dominated: bool = False
    law_invariant: bool = False

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class RiskProfile:
    monotone: bool = False
    translation_invariant: bool = False
    normalized: bool = False
    star_shaped: bool = False
    positively_homogeneous: bool = False

    def to_dict(self):
        return asdict(self)


class DeviationFunctional:
    """
    A named map from RandomVariable to [0, +inf] with a declared axiom profile.

    `fn` does the actual evaluation. The wrapper enforces the value contract:
    NaN is rejected and the result is never negative.
    """

    def __init__(self, name, fn, profile=None, description=None):
        self.name = name
        self._fn = fn
        self.profile = profile or DeviationProfile()
        self.description = description or name

    def __call__(self, X):
        value = float(self._fn(X))
        if math.isnan(value):
            raise NonFiniteValue(f'{self.name} evaluated to NaN.')
        if value < 0.0:
            if value < -NEGATIVE_SLACK:
                raise ContractViolation(f'{self.name} evaluated to {value!r} < 0.')
            return 0.0
        return value

    def __repr__(self):
        return f'<DeviationFunctional {self.name}>'

    def to_dict(self):
        return {'name': self.name, 'kind': 'deviation', 'profile': self.profile.to_dict()}


class RiskFunctional:
    """A named map from RandomVariable to the reals with a declared risk profile."""

    def __init__(self, name, fn, profile=None, description=None):
        self.name = name
        self._fn = fn
        self.profile = profile or RiskProfile()
        self.description = description or name

    def __call__(self, X):
        value = float(self._fn(X))
        if not math.isfinite(value):
            raise NonFiniteValue(f'{self.name} evaluated to {value!r}; risk values must be finite.')
        return value

    def __repr__(self):
        return f'<RiskFunctional {self.name}>'

    def to_dict(self):
        return {'name': self.name, 'kind': 'risk', 'profile': self.profile.to_dict()}


class BenchmarkCurve:
    """
    Right-continuous, non-decreasing step function u -> alpha(u) on [0, inf).

    `breakpoints` is a list of (u, alpha) pairs with strictly increasing u,
    starting at u = 0; alpha(u) is the level of the last breakpoint at or
    before u, so the final level holds for every u past the last breakpoint.
    """

    def __init__(self, breakpoints, name=None):
        points = [(float(u), float(a)) for u, a in breakpoints]
        if not points:
            raise InvalidParameter('A benchmark curve needs at least one breakpoint.')
        us = np.array([u for u, _ in points])
        alphas = np.array([a for _, a in points])
        if not (np.all(np.isfinite(us)) and np.all(np.isfinite(alphas))):
            raise NonFiniteValue('Benchmark curve breakpoints must be finite.')
        if us[0] != 0.0:
            raise InvalidParameter('The first benchmark breakpoint must be at u = 0.')
        if np.any(np.diff(us) <= 0):
            raise InvalidParameter('Benchmark breakpoints must have strictly increasing u.')
        if np.any(alphas <= 0) or np.any(alphas > 1):
            raise InvalidParameter('Benchmark levels must lie in (0, 1].')
        if np.any(np.diff(alphas) < 0):
            raise InvalidParameter('Benchmark levels must be non-decreasing in u.')
        us.setflags(write=False)
        alphas.setflags(write=False)
        self.name = name
        self.us = us
        self.alphas = alphas

    @classmethod
    def constant(cls, alpha, name=None):
        return cls([(0.0, alpha)], name=name)

    def alpha_at(self, u):
        if u < 0:
            raise InvalidParameter('The benchmark curve is defined for u >= 0 only.')
        idx = int(np.searchsorted(self.us, u, side='right')) - 1
        return float(self.alphas[idx])

    def __repr__(self):
        return f'<BenchmarkCurve {self.name or ""} steps={self.us.size}>'

    def to_dict(self):
        return {'name': self.name,
                'breakpoints': [[u, a] for u, a in zip(self.us.tolist(), self.alphas.tolist())]}
