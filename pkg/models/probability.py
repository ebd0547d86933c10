import numpy as np

from utils.errors import (
    EmptySample,
    LengthMismatch,
    NonFiniteValue,
    NonPositiveWeight,
    WeightSumMismatch,
)

WEIGHT_SUM_TOL = 1e-12


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


class ProbSpace:
    """
    A finite probability space: atoms 0..n-1 with strictly positive weights
    summing to one. Instances are immutable and compare by their weights.
    """
    __slots__ = ('probs',)

    def __init__(self, probs):
        probs = _frozen(probs)
        if probs.ndim != 1 or probs.size == 0:
            raise EmptySample('A probability space needs at least one atom.')
        if not np.all(np.isfinite(probs)):
            raise NonFiniteValue('Probability weights must be finite.')
        if np.any(probs <= 0):
            bad = int(np.argmax(probs <= 0))
            raise NonPositiveWeight(f'Weight of atom {bad} is {probs[bad]!r}; every weight must be > 0.')
        total = float(probs.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise WeightSumMismatch(f'Weights sum to {total!r}, expected 1 within {WEIGHT_SUM_TOL}.')
        object.__setattr__(self, 'probs', probs)

    def __setattr__(self, name, value):
        raise AttributeError('ProbSpace is immutable')

    @property
    def n(self):
        return self.probs.size

    @property
    def min_prob(self):
        return float(self.probs.min())

    @property
    def is_uniform(self):
        return bool(np.all(self.probs == self.probs[0]))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ProbSpace):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.probs, other.probs))

    def __hash__(self):
        return hash(self.probs.tobytes())

    def __repr__(self):
        return f'<ProbSpace n={self.n}>'

    def to_dict(self):
        return {'probs': self.probs.tolist()}


class RandomVariable:
    """
    A real value on every atom of a ProbSpace. Values are finite and read-only.
    """
    __slots__ = ('space', 'values')

    def __init__(self, space, values):
        values = _frozen(values)
        if values.ndim != 1 or values.size != space.n:
            raise LengthMismatch(f'Expected {space.n} values, got {values.size}.')
        if not np.all(np.isfinite(values)):
            raise NonFiniteValue('Random variable values must be finite.')
        object.__setattr__(self, 'space', space)
        object.__setattr__(self, 'values', values)

    def __setattr__(self, name, value):
        raise AttributeError('RandomVariable is immutable')

    @property
    def probs(self):
        return self.space.probs

    def __repr__(self):
        return f'<RandomVariable n={self.space.n} values={np.array2string(self.values, threshold=6)}>'

    def to_dict(self):
        return {'probs': self.space.probs.tolist(), 'values': self.values.tolist()}


class Distribution:
    """
    The law of a random variable: strictly increasing support points with
    their probabilities. `cumulative` is F_X at each support point, with the
    last entry pinned to exactly 1.
    """
    __slots__ = ('values', 'probs', 'cumulative')

    def __init__(self, values, probs):
        values = _frozen(values)
        probs = _frozen(probs)
        if values.size != probs.size or values.size == 0:
            raise LengthMismatch('Distribution needs matching, non-empty values and probabilities.')
        if np.any(np.diff(values) <= 0):
            raise ValueError('Distribution values must be strictly increasing.')
        if np.any(probs <= 0):
            raise NonPositiveWeight('Distribution probabilities must be > 0.')
        if abs(float(probs.sum()) - 1.0) > WEIGHT_SUM_TOL:
            raise WeightSumMismatch('Distribution probabilities must sum to 1.')
        cumulative = np.cumsum(probs)
        cumulative[-1] = 1.0
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'probs', probs)
        object.__setattr__(self, 'cumulative', _frozen(cumulative))

    def __setattr__(self, name, value):
        raise AttributeError('Distribution is immutable')

    @property
    def points(self):
        return list(zip(self.values.tolist(), self.probs.tolist()))

    def __repr__(self):
        return f'<Distribution points={len(self.values)}>'

    def to_dict(self):
        return {'points': [[v, p] for v, p in self.points]}
