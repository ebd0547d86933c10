import numpy as np

from utils.errors import InvalidParameter, InvariantViolation, NonFiniteValue

CURVE_TOL = 1e-12
STAR_PROBES = (0.25, 0.5, 0.75)


class GCurve:
    """
    A non-increasing function sampled on a strictly increasing grid in (0, 1).
    The last sample stands in for the right limit at 1 and must be >= 0.
    """
    __slots__ = ('alpha_grid', 'values')

    def __init__(self, alpha_grid, values):
        grid = np.array(alpha_grid, dtype=float)
        values = np.array(values, dtype=float)
        if grid.ndim != 1 or grid.size == 0 or grid.size != values.size:
            raise InvalidParameter('A G-curve needs a non-empty grid and one value per grid point.')
        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
            raise NonFiniteValue('G-curve grid and values must be finite.')
        if np.any(grid <= 0) or np.any(grid >= 1) or np.any(np.diff(grid) <= 0):
            raise InvalidParameter('The alpha grid must be strictly increasing inside (0, 1).')
        if np.any(np.diff(values) > CURVE_TOL):
            raise InvariantViolation('G-curve values must be non-increasing along the grid.')
        if values[-1] < -CURVE_TOL:
            raise InvariantViolation(f'G-curve ends at {values[-1]!r}; the right limit at 1 must be >= 0.')
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, 'alpha_grid', grid)
        object.__setattr__(self, 'values', values)

    def __setattr__(self, name, value):
        raise AttributeError('GCurve is immutable')

    def to_dict(self):
        return {'alpha_grid': self.alpha_grid.tolist(), 'values': self.values.tolist()}


def is_star_closed(curves, probes=STAR_PROBES):
    """Finite surrogate: every lam * g (lam in probes) sits below some member."""
    matrix = np.vstack([c.values for c in curves])
    for g in matrix:
        for lam in probes:
            if not np.any(np.all(matrix >= lam * g - CURVE_TOL, axis=1)):
                return False
    return True


class GFamily:
    """A finite list of G-curves sharing one alpha grid."""

    def __init__(self, curves, star_closed=False, name=None):
        curves = list(curves)
        if not curves:
            raise InvalidParameter('A G-family needs at least one curve.')
        grid = curves[0].alpha_grid
        if any(not np.array_equal(c.alpha_grid, grid) for c in curves[1:]):
            raise InvalidParameter('All curves of a G-family must share one alpha grid.')
        if star_closed and not is_star_closed(curves):
            raise InvariantViolation('G-family flagged star-closed is not closed under scaling by 1/4, 1/2, 3/4.')
        self.curves = curves
        self.star_closed = bool(star_closed)
        self.name = name

    @classmethod
    def from_matrix(cls, alpha_grid, matrix, star_closed=False, name=None):
        return cls([GCurve(alpha_grid, row) for row in np.atleast_2d(matrix)], star_closed, name)

    @property
    def alpha_grid(self):
        return self.curves[0].alpha_grid

    @property
    def matrix(self):
        return np.vstack([c.values for c in self.curves])

    def __len__(self):
        return len(self.curves)

    def __repr__(self):
        return f'<GFamily {self.name or ""} curves={len(self.curves)} grid={self.alpha_grid.size}>'

    def to_dict(self):
        return {
            'name': self.name,
            'alpha_grid': self.alpha_grid.tolist(),
            'curves': self.matrix.tolist(),
            'star_closed': self.star_closed,
        }
