# Makes the 'models' directory a package and exposes the core value types.
from .probability import Distribution, ProbSpace, RandomVariable
from .functional import BenchmarkCurve, DeviationFunctional, DeviationProfile, RiskFunctional, RiskProfile
