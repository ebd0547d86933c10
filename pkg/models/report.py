"""
Result records produced by the audit engine, the envelope checks and the
counterexample builder. They carry live objects (random variables, scalars)
so witnesses can be replayed; `to_dict` gives the plain form that
services/reports.py renders.
"""

from dataclasses import dataclass, field

from models.probability import RandomVariable

PASS = 'pass'
FAIL = 'fail'
NOT_APPLICABLE = 'not-applicable'

MAX_WITNESSES = 5


def _plain(value):
    if isinstance(value, RandomVariable):
        return value.to_dict()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    return value


@dataclass
class Witness:
    """Inputs of one violated inequality with its two sides and the margin lhs - rhs."""
    inputs: dict
    lhs: float
    rhs: float
    margin: float

    def to_dict(self):
        return {
            'inputs': {k: _plain(v) for k, v in self.inputs.items()},
            'lhs': self.lhs,
            'rhs': self.rhs,
            'margin': self.margin,
        }


@dataclass
class CheckResult:
    axiom: str
    status: str = PASS
    checked: int = 0
    witnesses: list = field(default_factory=list)
    violations: int = 0

    @property
    def passed(self):
        return self.status == PASS

    def record(self, ok, inputs, lhs, rhs, margin):
        self.checked += 1
        if ok:
            return
        self.status = FAIL
        self.violations += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(Witness(inputs, lhs, rhs, margin))

    def to_dict(self):
        return {
            'axiom': self.axiom,
            'status': self.status,
            'checked': self.checked,
            'violations': self.violations,
            'witnesses': [w.to_dict() for w in self.witnesses],
        }


@dataclass
class AuditReport:
    functional: str
    kind: str
    seed: int
    results: list = field(default_factory=list)
    labels: list = field(default_factory=list)
    classification: str = 'none'
    declared_mismatches: list = field(default_factory=list)

    def result(self, axiom):
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    def passed(self, axiom):
        return self.result(axiom).passed

    @property
    def failures(self):
        return [r.axiom for r in self.results if r.status == FAIL]

    def status_counts(self):
        counts = {PASS: 0, FAIL: 0, NOT_APPLICABLE: 0}
        for r in self.results:
            counts[r.status] += 1
        return counts

    def to_dict(self):
        return {
            'functional': self.functional,
            'kind': self.kind,
            'seed': self.seed,
            'classification': self.classification,
            'labels': list(self.labels),
            'declared_mismatches': list(self.declared_mismatches),
            'results': [r.to_dict() for r in self.results],
        }


@dataclass
class CounterexampleBundle:
    n: int
    alpha: float
    X: RandomVariable
    Y: RandomVariable
    Z: RandomVariable
    dX: float
    dY: float
    dZ: float
    convex_order_ok: bool
    same_dist_ok: bool
    inequality_ok: bool
    continuum_dx: float
    two_point_dz: float

    def to_dict(self, include_variables=False):
        data = {
            'n': self.n,
            'alpha': self.alpha,
            'dX': self.dX,
            'dY': self.dY,
            'dZ': self.dZ,
            'convex_order_ok': self.convex_order_ok,
            'same_dist_ok': self.same_dist_ok,
            'inequality_ok': self.inequality_ok,
            'continuum_dx': self.continuum_dx,
            'two_point_dz': self.two_point_dz,
        }
        if include_variables:
            data.update(X=self.X.to_dict(), Y=self.Y.to_dict(), Z=self.Z.to_dict())
        return data
