import math
from dataclasses import asdict, dataclass

from utils.errors import InvalidParameter

RAY_VARIANTS = ('star', 'cone', 'lrd', 'halfline')


@dataclass(frozen=True)
class SetFlags:
    star_shaped: bool = False
    convex: bool = False
    cone: bool = False
    monotone: bool = False

    def __post_init__(self):
        # A cone through 0 is closed under [0, 1] scaling.
        if self.cone and not self.star_shaped:
            raise InvalidParameter('A cone must also be flagged star-shaped.')

    def to_dict(self):
        return asdict(self)


class AcceptanceSet:
    """A deterministic membership predicate over random variables with declared structure."""

    def __init__(self, description, contains, flags=None):
        self.description = description
        self._contains = contains
        self.flags = flags or SetFlags()

    def contains(self, X):
        return bool(self._contains(X))

    __contains__ = contains

    def __repr__(self):
        return f'<AcceptanceSet {self.description}>'

    def to_dict(self):
        return {'description': self.description, 'flags': self.flags.to_dict()}


class RayEnvelope:
    """
    A convex deviation built around one anchor Y with known value D(Y).

    Finite only on a thin locus around the ray through the centered anchor;
    `fn` is the closed-form evaluator for the chosen variant.
    """

    def __init__(self, anchor, anchor_value, variant, fn):
        if variant not in RAY_VARIANTS:
            raise InvalidParameter(f'Unknown envelope variant {variant!r}; expected one of {RAY_VARIANTS}.')
        anchor_value = float(anchor_value)
        if math.isnan(anchor_value) or anchor_value < 0:
            raise InvalidParameter(f'Envelope anchor value must be >= 0, got {anchor_value!r}.')
        self.anchor = anchor
        self.anchor_value = anchor_value
        self.variant = variant
        self._fn = fn

    @property
    def name(self):
        return f'{self.variant}-envelope'

    def __call__(self, X):
        return float(self._fn(X))

    def __repr__(self):
        return f'<RayEnvelope {self.variant} D(Y)={self.anchor_value}>'

    def to_dict(self):
        return {
            'anchor_values': self.anchor.values.tolist(),
            'anchor_probs': self.anchor.probs.tolist(),
            'anchor_value': self.anchor_value,
            'variant': self.variant,
        }
