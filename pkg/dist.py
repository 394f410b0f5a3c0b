'''Exact and parametric discrete distributions on ℕ = {1, 2, ...}.

Two representations live here:

* :class:`FinitePMF`, an exact probability mass function on ``{1, ..., n}``
  whose weights are :class:`~fractions.Fraction` values. Every derived
  quantity (survival, cdf, hazard, reversed hazard, odds) is exact.
* :class:`ParametricSurvival`, one of four closed-form infinite-support
  families, evaluated in floating point up to a finite horizon.

Both follow the same conventions: ``F̄(k) = P{X > k}`` with ``F̄(0) = 1``,
hazard ``r(k) = f(k)/F̄(k-1)`` and reversed hazard ``r̃(k) = f(k)/F(k)``.

Parametric curves are evaluated in log space. Values such as ``c^k/k!``
underflow a double long before the default horizon of 200, so
:meth:`SurvivalCurve.log_survival` and :meth:`SurvivalCurve.log_step` are
the primitives and everything else is derived from them.

'''

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
import enum
from fractions import Fraction
from functools import cached_property
import logging
import math

import numpy as np
from scipy.special import gammaln

from .errors import (
    BeyondSupport,
    HorizonExceeded,
    InvalidParameter,
    NegativeWeight,
    WeightsDoNotSumToOne,
    ZeroCdf,
)


__all__ = (
    'ExactFraction',
    'Prob',
    'parse_fraction',
    'format_fraction',
    'FinitePMF',
    'make_pmf',
    'survival',
    'hazard_at',
    'reversed_hazard_at',
    'odds_at',
    'Family',
    'FamilyParams',
    'SurvivalCurve',
    'ParametricSurvival',
    'family_survival',
    'log_cdf_from_log_survival',
    'DEFAULT_HORIZON',
)


_log = logging.getLogger(__name__)


ExactFraction = Fraction
'''Arbitrary-precision rational; carrier for all finite-support values.'''

Prob = Fraction | float
'''Probability-like value: exact on the finite path, real on the parametric
path.'''

FamilyParams = Mapping[str, float]
'''Named real parameters of a parametric family.'''


DEFAULT_HORIZON: int = 200


def parse_fraction(value) -> Fraction:
    '''Interpret ``value`` as an exact rational.

    Accepts :class:`~fractions.Fraction`, :class:`int`, and strings such as
    ``"7/20"``, ``"3"`` or ``"0.35"``. Floats are rejected because they are
    not exact.

    '''
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError(f"Cannot interpret {value!r} as an exact fraction")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Cannot parse {value!r} as a fraction") from e
    raise TypeError(f"Cannot interpret {value!r} as an exact fraction")


def format_fraction(value: Fraction) -> str:
    '''Render ``value`` as ``"p/q"`` (or ``"p"`` for integers).'''
    return str(Fraction(value))


def _exact_weights(weights: Iterable) -> tuple[Fraction, ...]:
    result = tuple(parse_fraction(w) for w in weights)
    for i, w in enumerate(result, start=1):
        if w < 0:
            raise NegativeWeight(f"f({i}) = {w} is negative")
    total = sum(result, Fraction(0))
    if total != 1:
        raise WeightsDoNotSumToOne(f"weights sum to {total}, not 1")
    return result


@dataclass(frozen=True)
class FinitePMF:
    '''Exact probability mass function on ``{1, ..., n}``.

    Leading and internal zero weights are allowed; the trailing weight must
    be positive so that ``n`` is the true end of the support. Use
    :func:`make_pmf` to build one from weights that may carry trailing
    zeros.

    '''

    weights: tuple[Fraction, ...]
    '''``weights[i-1]`` is ``f(i)``.'''

    def __post_init__(self):
        if not self.weights:
            raise InvalidParameter("a pmf needs at least one weight")
        object.__setattr__(self, 'weights', _exact_weights(self.weights))
        if self.weights[-1] == 0:
            raise InvalidParameter(
                "trailing weight is zero; use make_pmf() to trim it"
            )

    @property
    def n(self) -> int:
        '''Support end.'''
        return len(self.weights)

    @property
    def start(self) -> int:
        '''Smallest ``k`` with ``f(k) > 0``, i.e. where the cdf becomes
        positive.'''
        return next(k for k, w in enumerate(self.weights, start=1) if w > 0)

    @property
    def contiguous(self) -> bool:
        '''Whether there are no zero weights between :attr:`start` and
        :attr:`n`.'''
        return all(w > 0 for w in self.weights[self.start - 1:])

    @cached_property
    def survivals(self) -> tuple[Fraction, ...]:
        '''``(F̄(0), F̄(1), ..., F̄(n))``.'''
        tail = [Fraction(0)]
        for w in reversed(self.weights):
            tail.append(tail[-1] + w)
        return tuple(reversed(tail))

    def pmf(self, k: int) -> Fraction:
        '''``f(k)``; zero outside ``{1, ..., n}``.'''
        if 1 <= k <= self.n:
            return self.weights[k - 1]
        return Fraction(0)

    def survival(self, k: int) -> Fraction:
        '''``F̄(k) = P{X > k}``.'''
        if k < 0:
            raise ValueError(f"survival index must be >= 0, got {k}")
        if k >= self.n:
            return Fraction(0)
        return self.survivals[k]

    def cdf(self, k: int) -> Fraction:
        '''``F(k) = P{X <= k}``.'''
        return 1 - self.survival(k)

    def hazard(self, k: int) -> Fraction:
        '''``r(k) = f(k)/F̄(k-1)``.'''
        if k < 1:
            raise ValueError(f"hazard index must be >= 1, got {k}")
        at_risk = self.survival(k - 1)
        if at_risk == 0:
            raise BeyondSupport(f"F̄({k - 1}) = 0, hazard undefined at {k}")
        return self.pmf(k) / at_risk

    def reversed_hazard(self, k: int) -> Fraction:
        '''``r̃(k) = f(k)/F(k)``.

        Past the support end ``F(k) = 1`` and ``f(k) = 0``, so the reversed
        hazard is ``0`` there, not undefined.

        '''
        if k < 1:
            raise ValueError(f"reversed hazard index must be >= 1, got {k}")
        below = self.cdf(k)
        if below == 0:
            raise ZeroCdf(f"F({k}) = 0, reversed hazard undefined")
        return self.pmf(k) / below

    def odds(self, k: int) -> Fraction:
        '''Odds of survival ``θ(k) = F̄(k)/F(k)``.'''
        below = self.cdf(k)
        if below == 0:
            raise ZeroCdf(f"F({k}) = 0, odds undefined")
        return self.survival(k) / below

    def __str__(self) -> str:
        return "[" + ", ".join(format_fraction(w) for w in self.weights) + "]"


def make_pmf(weights: Iterable) -> FinitePMF:
    '''Validate ``weights`` and build a :class:`FinitePMF`.

    Trailing zero weights are trimmed. Raises :exc:`NegativeWeight` or
    :exc:`WeightsDoNotSumToOne` (compared exactly).

    '''
    exact = list(_exact_weights(weights))
    if not exact:
        raise InvalidParameter("a pmf needs at least one weight")
    while exact[-1] == 0:
        exact.pop()
    return FinitePMF(tuple(exact))


def survival(d: FinitePMF, k: int) -> Fraction:
    '''``F̄(k)`` of ``d``; ``1`` at ``k = 0`` and ``0`` from ``k = n`` on.'''
    return d.survival(k)


def hazard_at(d: FinitePMF, k: int) -> Fraction:
    '''``f(k)/F̄(k-1)``; raises :exc:`BeyondSupport` when ``F̄(k-1) = 0``.'''
    return d.hazard(k)


def reversed_hazard_at(d: FinitePMF, k: int) -> Fraction:
    '''``f(k)/F(k)``; raises :exc:`ZeroCdf` when ``F(k) = 0``.'''
    return d.reversed_hazard(k)


def odds_at(d: FinitePMF, k: int) -> Fraction:
    '''``F̄(k)/F(k)``; raises :exc:`ZeroCdf` when ``F(k) = 0``.'''
    return d.odds(k)


def _log_or_neg_inf(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def log_cdf_from_log_survival(log_survival: float) -> float:
    '''``log(1 - exp(log_survival))`` without losing the small-survival
    tail.'''
    survival = math.exp(log_survival)
    if survival < 0.5:
        return math.log1p(-survival)
    return _log_or_neg_inf(-math.expm1(log_survival))


class SurvivalCurve(ABC):
    '''Real-valued survival curve on ``{0, ..., horizon}``.

    Subclasses supply :meth:`log_survival` and :meth:`log_step`; the other
    accessors are derived from those two.

    '''

    @property
    @abstractmethod
    def horizon(self) -> int:
        pass

    @abstractmethod
    def _log_survival(self, k: int) -> float:
        pass

    @abstractmethod
    def _log_step(self, k: int) -> float:
        pass

    def _check_index(self, k: int, lowest: int = 0) -> None:
        if k < lowest:
            raise ValueError(f"index must be >= {lowest}, got {k}")
        if k > self.horizon:
            raise HorizonExceeded(f"index {k} > horizon {self.horizon}")

    def log_survival(self, k: int) -> float:
        '''``log F̄(k)``.'''
        self._check_index(k)
        if k == 0:
            return 0.0
        return float(self._log_survival(k))

    def log_step(self, k: int) -> float:
        '''``log F̄(k) - log F̄(k-1)``, evaluated without cancellation.'''
        self._check_index(k, lowest=1)
        return float(self._log_step(k))

    def survival(self, k: int) -> float:
        '''``F̄(k)``.'''
        return math.exp(self.log_survival(k))

    def cdf(self, k: int) -> float:
        '''``F(k) = 1 - F̄(k)``.'''
        return -math.expm1(self.log_survival(k))

    def log_cdf(self, k: int) -> float:
        '''``log F(k)``; ``-inf`` at ``k = 0``.'''
        return log_cdf_from_log_survival(self.log_survival(k))

    def hazard(self, k: int) -> float:
        '''``r(k) = 1 - F̄(k)/F̄(k-1)``.'''
        return -math.expm1(self.log_step(k))

    def pmf(self, k: int) -> float:
        '''``f(k) = F̄(k-1) r(k)``.'''
        return self.survival(k - 1) * self.hazard(k)

    def log_pmf(self, k: int) -> float:
        return self.log_survival(k - 1) + _log_or_neg_inf(self.hazard(k))

    def reversed_hazard(self, k: int) -> float:
        below = self.cdf(k)
        if below == 0:
            raise ZeroCdf(f"F({k}) = 0, reversed hazard undefined")
        return self.pmf(k) / below


class Family(enum.Enum):
    '''Closed-form infinite-support families.'''

    SALVIA_BOLLINGER = 'salvia_bollinger'
    '''``F̄(k) = c^k / k!`` with ``0 < c <= 1``.'''

    TYPE_I_DISCRETE_WEIBULL = 'type_i_discrete_weibull'
    '''``F̄(k) = q^(k^β)`` with ``0 < q < 1``, ``β > 0``.'''

    DISCRETE_S = 'discrete_s'
    '''``F̄(k) = Π_{i<=k} (1 - p + p a^i)`` with ``0 < p <= 1``,
    ``0 < a < 1``.'''

    DISCRETE_PARETO = 'discrete_pareto'
    '''``F̄(k) = (d/(k+d))^c`` with ``c, d > 0``.'''

    @property
    def param_names(self) -> tuple[str, ...]:
        return _PARAM_NAMES[self]


_PARAM_NAMES: dict[Family, tuple[str, ...]] = {
    Family.SALVIA_BOLLINGER: ('c',),
    Family.TYPE_I_DISCRETE_WEIBULL: ('q', 'beta'),
    Family.DISCRETE_S: ('p', 'a'),
    Family.DISCRETE_PARETO: ('c', 'd'),
}


def _check_params(family: Family, params: Mapping[str, float]) -> None:
    expected = set(family.param_names)
    if set(params) != expected:
        raise InvalidParameter(
            f"{family.value} takes parameters {sorted(expected)}, "
            f"got {sorted(params)}"
        )
    for name, value in params.items():
        if not math.isfinite(value):
            raise InvalidParameter(f"{family.value}: {name}={value} is not finite")

    match family:
        case Family.SALVIA_BOLLINGER:
            ok = 0 < params['c'] <= 1
        case Family.TYPE_I_DISCRETE_WEIBULL:
            ok = 0 < params['q'] < 1 and params['beta'] > 0
        case Family.DISCRETE_S:
            ok = 0 < params['p'] <= 1 and 0 < params['a'] < 1
        case Family.DISCRETE_PARETO:
            ok = params['c'] > 0 and params['d'] > 0
    if not ok:
        raise InvalidParameter(f"{family.value}: parameters {dict(params)} out of range")


@dataclass(frozen=True)
class ParametricSurvival(SurvivalCurve):
    '''One of the :class:`Family` closed forms, evaluated up to a horizon.'''

    family: Family
    params: FamilyParams
    _horizon: int = field(default=DEFAULT_HORIZON)

    def __post_init__(self):
        family = Family(self.family)
        params = {name: float(value) for name, value in self.params.items()}
        _check_params(family, params)
        if int(self._horizon) < 1:
            raise InvalidParameter(f"horizon must be positive, got {self._horizon}")
        object.__setattr__(self, 'family', family)
        object.__setattr__(self, 'params', params)
        object.__setattr__(self, '_horizon', int(self._horizon))

    @classmethod
    def of(cls, family: Family | str, horizon: int = DEFAULT_HORIZON, **params) -> ParametricSurvival:
        '''Convenience constructor, e.g. ``ParametricSurvival.of('discrete_pareto', c=3, d=2)``.'''
        return cls(Family(family), params, horizon)

    @property
    def horizon(self) -> int:
        return self._horizon

    def __hash__(self):
        return hash((self.family, tuple(sorted(self.params.items())), self._horizon))

    def _log_survival(self, k: int) -> float:
        p = self.params
        match self.family:
            case Family.SALVIA_BOLLINGER:
                return k * math.log(p['c']) - gammaln(k + 1)
            case Family.TYPE_I_DISCRETE_WEIBULL:
                return k ** p['beta'] * math.log(p['q'])
            case Family.DISCRETE_S:
                if p['p'] == 1:
                    return math.log(p['a']) * k * (k + 1) / 2
                i = np.arange(1, k + 1)
                return np.log1p(-p['p'] * (1 - p['a'] ** i)).sum()
            case Family.DISCRETE_PARETO:
                return p['c'] * (math.log(p['d']) - math.log(k + p['d']))

    def _log_step(self, k: int) -> float:
        p = self.params
        match self.family:
            case Family.SALVIA_BOLLINGER:
                return math.log(p['c']) - math.log(k)
            case Family.TYPE_I_DISCRETE_WEIBULL:
                return (k ** p['beta'] - (k - 1) ** p['beta']) * math.log(p['q'])
            case Family.DISCRETE_S:
                # log1p(-1 + a^k) rounds to log(0) once a^k drops below eps
                if p['p'] == 1:
                    return k * math.log(p['a'])
                return math.log1p(-p['p'] * (1 - p['a'] ** k))
            case Family.DISCRETE_PARETO:
                return -p['c'] * math.log1p(1 / (k - 1 + p['d']))

    def __str__(self) -> str:
        args = ", ".join(f"{name}={value:g}" for name, value in self.params.items())
        return f"{self.family.value}({args})"


def family_survival(s: SurvivalCurve, k: int) -> float:
    '''``F̄(k)`` of a parametric curve; raises :exc:`HorizonExceeded` past
    its horizon.'''
    return s.survival(k)


import unittest


F = Fraction


def _random_pmf(rng: np.random.Generator, n: int, denominator: int = 20) -> FinitePMF:
    raw = [int(w) for w in rng.integers(0, denominator + 1, size=n)]
    raw[-1] = max(raw[-1], 1)
    total = sum(raw)
    return FinitePMF(tuple(F(w, total) for w in raw))


ILR_FIXTURE = ['0', '1/10', '1/4', '7/20', '3/10']
DLR_FIXTURE = ['9/25', '13/50', '21/100', '17/100']


class TestMakePmf(unittest.TestCase):
    def test_counterexample_weights(self):
        d = make_pmf(ILR_FIXTURE)
        self.assertEqual(d.n, 5)
        self.assertEqual(d.weights, (F(0), F(1, 10), F(1, 4), F(7, 20), F(3, 10)))
        self.assertEqual(d.start, 2)

    def test_point_mass(self):
        d = make_pmf([1])
        self.assertEqual(d.n, 1)
        self.assertEqual(d.survival(0), 1)
        self.assertEqual(d.survival(1), 0)

    def test_weights_not_summing_to_one(self):
        with self.assertRaises(WeightsDoNotSumToOne):
            make_pmf([F(1, 2), F(1, 3)])

    def test_negative_weight(self):
        with self.assertRaises(NegativeWeight):
            make_pmf([F(3, 2), F(-1, 2)])

    def test_trailing_zeros_trimmed(self):
        d = make_pmf(['1/2', '1/2', '0', '0'])
        self.assertEqual(d.n, 2)

    def test_direct_construction_rejects_trailing_zero(self):
        with self.assertRaises(InvalidParameter):
            FinitePMF((F(1), F(0)))

    def test_float_weights_rejected(self):
        with self.assertRaises(TypeError):
            make_pmf([0.5, 0.5])

    def test_decimal_strings_are_exact(self):
        d = make_pmf(['0.36', '0.26', '0.21', '0.17'])
        self.assertEqual(d, make_pmf(DLR_FIXTURE))


class TestSurvival(unittest.TestCase):
    def test_partial_sums(self):
        self.assertEqual(survival(make_pmf(ILR_FIXTURE), 2), F(9, 10))
        self.assertEqual(survival(make_pmf(DLR_FIXTURE), 1), F(16, 25))

    def test_boundaries(self):
        d = make_pmf(DLR_FIXTURE)
        self.assertEqual(survival(d, 0), 1)
        self.assertEqual(survival(d, 4), 0)
        self.assertEqual(survival(d, 10), 0)

    def test_random_invariants(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            d = _random_pmf(rng, int(rng.integers(1, 8)))
            self.assertEqual(d.survival(0), 1)
            self.assertEqual(d.survival(d.n), 0)
            for k in range(1, d.n + 1):
                self.assertLessEqual(d.survival(k), d.survival(k - 1))
                self.assertEqual(d.pmf(k), d.survival(k - 1) - d.survival(k))
            self.assertEqual(d.hazard(d.n), 1)


class TestHazard(unittest.TestCase):
    def test_ratio(self):
        self.assertEqual(hazard_at(make_pmf(DLR_FIXTURE), 2), F(13, 32))

    def test_point_mass(self):
        self.assertEqual(hazard_at(make_pmf([1]), 1), 1)

    def test_beyond_support(self):
        with self.assertRaises(BeyondSupport):
            hazard_at(make_pmf(DLR_FIXTURE), 5)


class TestReversedHazardAndOdds(unittest.TestCase):
    def test_reversed_hazard(self):
        self.assertEqual(reversed_hazard_at(make_pmf(DLR_FIXTURE), 4), F(17, 100))
        self.assertEqual(reversed_hazard_at(make_pmf([1]), 1), 1)

    def test_reversed_hazard_zero_cdf(self):
        with self.assertRaises(ZeroCdf):
            reversed_hazard_at(make_pmf(ILR_FIXTURE), 1)

    def test_reversed_hazard_past_support_is_zero(self):
        self.assertEqual(reversed_hazard_at(make_pmf(DLR_FIXTURE), 6), 0)

    def test_odds(self):
        d = make_pmf(DLR_FIXTURE)
        self.assertEqual(odds_at(d, 1), F(16, 9))
        self.assertEqual(odds_at(d, d.n), 0)
        with self.assertRaises(ZeroCdf):
            odds_at(make_pmf(ILR_FIXTURE), 1)


class TestParametricSurvival(unittest.TestCase):
    def test_salvia_bollinger(self):
        s = ParametricSurvival.of('salvia_bollinger', c=0.8)
        self.assertAlmostEqual(family_survival(s, 2), 0.32, places=12)

    def test_pareto(self):
        s = ParametricSurvival.of('discrete_pareto', c=3, d=2)
        self.assertAlmostEqual(family_survival(s, 1), 8 / 27, places=12)

    def test_weibull_and_s_distribution(self):
        w = ParametricSurvival.of('type_i_discrete_weibull', q=0.5, beta=0.8)
        self.assertAlmostEqual(w.survival(3), 0.5 ** (3 ** 0.8), places=12)
        s = ParametricSurvival.of('discrete_s', p=0.3, a=0.6)
        self.assertAlmostEqual(s.survival(2), 0.88 * 0.808, places=12)

    def test_zero_index_is_one(self):
        for s in _all_families():
            self.assertEqual(family_survival(s, 0), 1.0)

    def test_horizon_exceeded(self):
        s = ParametricSurvival.of('discrete_pareto', horizon=10, c=3, d=2)
        with self.assertRaises(HorizonExceeded):
            family_survival(s, 11)

    def test_parameter_ranges(self):
        with self.assertRaises(InvalidParameter):
            ParametricSurvival.of('salvia_bollinger', c=1.5)
        with self.assertRaises(InvalidParameter):
            ParametricSurvival.of('type_i_discrete_weibull', q=1.0, beta=0.8)
        with self.assertRaises(InvalidParameter):
            ParametricSurvival.of('discrete_s', p=0.5, a=1.0)
        with self.assertRaises(InvalidParameter):
            ParametricSurvival.of('discrete_pareto', c=3)

    def test_strictly_decreasing_in_log_space(self):
        for s in _all_families():
            previous = s.log_survival(0)
            for k in range(1, s.horizon + 1):
                current = s.log_survival(k)
                self.assertLess(current, previous, f"{s} at {k}")
                self.assertLess(s.log_step(k), 0.0)
                previous = current
            self.assertLessEqual(s.survival(s.horizon), 1.0)

    def test_log_step_matches_differences(self):
        for s in _all_families():
            for k in range(1, 30):
                self.assertAlmostEqual(
                    s.log_step(k),
                    s.log_survival(k) - s.log_survival(k - 1),
                    places=9,
                )

    def test_salvia_bollinger_pmf_identity(self):
        for c in (0.3, 0.8, 1.0):
            s = ParametricSurvival.of('salvia_bollinger', c=c)
            for k in range(1, 21):
                closed = (k - c) * c ** (k - 1) / math.factorial(k)
                self.assertLess(abs(s.pmf(k) - closed), 1e-12)
                self.assertLess(abs(s.survival(k - 1) - s.survival(k) - closed), 1e-12)

    def test_salvia_bollinger_hazard(self):
        s = ParametricSurvival.of('salvia_bollinger', c=0.8)
        for k in range(1, 10):
            self.assertAlmostEqual(s.hazard(k), 1 - 0.8 / k, places=12)


def _all_families() -> list[ParametricSurvival]:
    return [
        ParametricSurvival.of('salvia_bollinger', c=0.8),
        ParametricSurvival.of('type_i_discrete_weibull', q=0.5, beta=0.8),
        ParametricSurvival.of('type_i_discrete_weibull', q=0.3, beta=1.7),
        ParametricSurvival.of('discrete_s', p=0.3, a=0.6),
        ParametricSurvival.of('discrete_s', p=1.0, a=0.6),
        ParametricSurvival.of('discrete_pareto', c=3, d=2),
    ]
