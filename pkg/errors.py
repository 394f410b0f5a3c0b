'''Exceptions raised by ``motilt``.

Everything derives from :class:`MotiltError`, so callers that only care about
"something in the toolkit went wrong" can catch one type. Errors describing a
bad value also derive from :exc:`ValueError`, and failed lookups from
:exc:`LookupError`.

'''

__all__ = (
    'MotiltError',
    'NegativeWeight',
    'WeightsDoNotSumToOne',
    'BeyondSupport',
    'ZeroCdf',
    'HorizonExceeded',
    'InvalidParameter',
    'InvalidTilt',
    'EmptyWindow',
    'HypothesisNotSatisfied',
    'ClaimNotSearchable',
    'UnknownCase',
    'FixtureMismatch',
    'Exhausted',
    'DistributionSpecError',
)


class MotiltError(Exception):
    '''Base class for all toolkit errors.'''
    pass


class NegativeWeight(MotiltError, ValueError):
    '''A probability mass function was given a negative weight.'''
    pass


class WeightsDoNotSumToOne(MotiltError, ValueError):
    '''Probability mass function weights do not sum to exactly 1.'''
    pass


class BeyondSupport(MotiltError, ValueError):
    '''Hazard requested at an index where ``F̄(k-1) = 0``.'''
    pass


class ZeroCdf(MotiltError, ValueError):
    '''Reversed hazard or odds requested at an index where ``F(k) = 0``.'''
    pass


class HorizonExceeded(MotiltError, ValueError):
    '''Parametric survival requested past the curve's horizon.'''
    pass


class InvalidParameter(MotiltError, ValueError):
    '''Parametric family parameter outside its admissible range.'''
    pass


class InvalidTilt(MotiltError, ValueError):
    '''Tilt parameter is not positive, or not exact where exactness is
    required.'''
    pass


class EmptyWindow(MotiltError, ValueError):
    '''Index window contains no indices.'''
    pass


class HypothesisNotSatisfied(MotiltError, ValueError):
    '''Baseline passed to a preservation check lacks the claim's input
    property.'''
    pass


class ClaimNotSearchable(MotiltError, ValueError):
    '''Counterexample search requested for a cell already proven
    preserved.'''
    pass


class UnknownCase(MotiltError, LookupError):
    '''No registered counterexample has the requested identifier.'''
    pass


class FixtureMismatch(MotiltError):
    '''A recomputed counterexample value disagrees with its pinned value.'''

    def __init__(self, case_id: str, mismatches: list[str]):
        super().__init__(f"{case_id}: " + "; ".join(mismatches))
        self.case_id: str = case_id
        self.mismatches: list[str] = mismatches


class Exhausted(MotiltError):
    '''Search budget consumed without finding a violation.

    This is evidence of preservation, never a proof of it.

    '''

    def __init__(self, claim, trials: int, reason: str):
        super().__init__(f"{claim}: no violation in {trials} trials ({reason})")
        self.claim = claim
        self.trials: int = trials
        self.reason: str = reason


class DistributionSpecError(MotiltError, ValueError):
    '''Distribution interchange document could not be parsed.

    The message names the source (usually a file name) and the path of the
    offending field, e.g. ``ilr.json: weights[2]: ...``.

    '''

    def __init__(self, source: str, field: str, msg: str):
        super().__init__(f"{source}: {field}: {msg}")
        self.source: str = source
        self.field: str = field
