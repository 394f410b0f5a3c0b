'''The proportional-odds tilt.

Given a baseline ``X`` with survival ``F̄`` and a tilt parameter ``α > 0``
(``ᾱ = 1 - α``), the tilted variable ``Y`` has

* survival ``Ḡ(k) = αF̄(k) / (1 - ᾱF̄(k))``
* cdf ``G(k) = F(k) / (1 - ᾱF̄(k))``
* pmf ``g(k) = αf(k) / ((1 - ᾱF̄(k-1))(1 - ᾱF̄(k)))``
* hazard ``r_Y(k) = r_X(k) / (1 - ᾱF̄(k))``
* reversed hazard ``r̃_Y(k) = α r̃_X(k) / (1 - ᾱF̄(k-1))``

so that the odds of survival are scaled: ``θ_Y = α θ_X``. ``α = 1`` is the
identity and tilts compose multiplicatively.

Finite baselines are tilted exactly (``α`` must then be rational); curves
are tilted lazily by :class:`TiltedSurvival`.

'''

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging
import math

from .dist import FinitePMF, Prob, SurvivalCurve, format_fraction, parse_fraction
from .errors import InvalidParameter, InvalidTilt


__all__ = (
    'TiltParameter',
    'TiltedSurvival',
    'tilt',
    'tilt_survival_at',
    'tilt_distribution_at',
    'tilt_pmf',
    'tilt_hazard_at',
    'tilt_reversed_hazard_at',
)


_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TiltParameter:
    '''Tilt parameter ``α``.

    Exact (:class:`~fractions.Fraction`) on the finite path, a float on the
    parametric path. :attr:`alpha_bar` is always derived from :attr:`alpha`.

    '''

    alpha: Fraction | float

    def __post_init__(self):
        alpha = self.alpha
        if isinstance(alpha, int) and not isinstance(alpha, bool):
            alpha = Fraction(alpha)
        if not isinstance(alpha, (Fraction, float)):
            raise InvalidTilt(f"tilt parameter must be a number, got {alpha!r}")
        if not (math.isfinite(alpha) and alpha > 0):
            raise InvalidTilt(f"tilt parameter must be positive and finite, got {alpha}")
        object.__setattr__(self, 'alpha', alpha)

    @classmethod
    def convert_from(cls, value) -> TiltParameter:
        '''Build from a :class:`TiltParameter`, a number, or a string such as
        ``"1/5"`` or ``"0.2"`` (strings are parsed exactly).'''
        if isinstance(value, cls):
            return value
        if isinstance(value, float):
            return cls(value)
        try:
            return cls(parse_fraction(value))
        except (TypeError, ValueError) as e:
            raise InvalidTilt(f"cannot interpret {value!r} as a tilt parameter") from e

    @property
    def alpha_bar(self) -> Fraction | float:
        return 1 - self.alpha

    @property
    def exact(self) -> bool:
        return isinstance(self.alpha, Fraction)

    @property
    def is_identity(self) -> bool:
        return self.alpha == 1

    def as_float(self) -> TiltParameter:
        return self if not self.exact else TiltParameter(float(self.alpha))

    def inverse(self) -> TiltParameter:
        return TiltParameter(1 / self.alpha)

    def __mul__(self, other: TiltParameter) -> TiltParameter:
        return TiltParameter(self.alpha * TiltParameter.convert_from(other).alpha)

    def __str__(self) -> str:
        if self.exact:
            return format_fraction(self.alpha)
        return f"{self.alpha:g}"


def _check_probability(value: Prob, name: str) -> None:
    if not 0 <= value <= 1:
        raise InvalidParameter(f"{name} must lie in [0, 1], got {value}")


def _denominator(survival: Prob, alpha: TiltParameter) -> Prob:
    '''``1 - ᾱF̄``, written as ``(1 - F̄) + αF̄``.'''
    denom = (1 - survival) + alpha.alpha * survival
    assert denom > 0 and (not alpha.exact or not isinstance(survival, Fraction)
                          or denom >= min(alpha.alpha, 1)), \
        f"tilt denominator {denom} below min(α, 1) for F̄={survival}, α={alpha}"
    return denom


def tilt_survival_at(Fbar_k: Prob, alpha) -> Prob:
    '''``Ḡ = αF̄ / (1 - ᾱF̄)``. Exact when both inputs are exact.'''
    alpha = TiltParameter.convert_from(alpha)
    _check_probability(Fbar_k, 'survival')
    return alpha.alpha * Fbar_k / _denominator(Fbar_k, alpha)


def tilt_distribution_at(F_k: Prob, alpha) -> Prob:
    '''``G = F / (1 - ᾱ(1 - F))``. Exact when both inputs are exact.'''
    alpha = TiltParameter.convert_from(alpha)
    _check_probability(F_k, 'cdf')
    return F_k / _denominator(1 - F_k, alpha)


def tilt_pmf(d: FinitePMF, alpha) -> FinitePMF:
    '''Exact pmf of the tilted variable, on the same support as ``d``.'''
    alpha = TiltParameter.convert_from(alpha)
    if not alpha.exact:
        raise InvalidTilt(f"exact tilt needs a rational α, got {alpha}")
    if alpha.is_identity:
        return d
    denoms = [_denominator(s, alpha) for s in d.survivals]
    return FinitePMF(tuple(
        alpha.alpha * f / (denoms[k - 1] * denoms[k])
        for k, f in enumerate(d.weights, start=1)
    ))


def tilt_hazard_at(d: FinitePMF | SurvivalCurve, alpha, k: int) -> Prob:
    '''``r_Y(k) = r_X(k) / (1 - ᾱF̄(k))``; propagates
    :exc:`~.errors.BeyondSupport`.'''
    alpha = TiltParameter.convert_from(alpha)
    if isinstance(d, SurvivalCurve):
        return TiltedSurvival(d, alpha).hazard(k)
    return d.hazard(k) / _denominator(d.survival(k), alpha)


def tilt_reversed_hazard_at(d: FinitePMF | SurvivalCurve, alpha, k: int) -> Prob:
    '''``r̃_Y(k) = α r̃_X(k) / (1 - ᾱF̄(k-1))``; propagates
    :exc:`~.errors.ZeroCdf`.'''
    alpha = TiltParameter.convert_from(alpha)
    if isinstance(d, SurvivalCurve):
        return TiltedSurvival(d, alpha).reversed_hazard(k)
    return alpha.alpha * d.reversed_hazard(k) / _denominator(d.survival(k - 1), alpha)


@dataclass(frozen=True)
class TiltedSurvival(SurvivalCurve):
    '''Lazily evaluated tilt of a survival curve, over the base's horizon.

    Tilting a :class:`TiltedSurvival` again folds the two parameters
    together, so ``base`` is never itself a :class:`TiltedSurvival`.

    '''

    base: SurvivalCurve
    alpha: TiltParameter

    def __post_init__(self):
        base, alpha = self.base, TiltParameter.convert_from(self.alpha)
        if isinstance(base, TiltedSurvival):
            alpha = base.alpha * alpha
            base = base.base
        object.__setattr__(self, 'base', base)
        object.__setattr__(self, 'alpha', alpha.as_float())

    @property
    def horizon(self) -> int:
        return self.base.horizon

    def _log_denominator(self, k: int) -> float:
        '''``log(1 - ᾱF̄(k))``.'''
        return math.log1p(-self.alpha.alpha_bar * math.exp(self.base.log_survival(k)))

    def _log_survival(self, k: int) -> float:
        return (math.log(self.alpha.alpha) + self.base.log_survival(k)
                - self._log_denominator(k))

    def _log_step(self, k: int) -> float:
        return (self.base.log_step(k) + self._log_denominator(k - 1)
                - self._log_denominator(k))

    def hazard(self, k: int) -> float:
        return self.base.hazard(k) / math.exp(self._log_denominator(k))

    def __str__(self) -> str:
        return f"{self.base} tilted by α={self.alpha}"


def tilt(d: FinitePMF | SurvivalCurve, alpha) -> FinitePMF | SurvivalCurve:
    '''Tilt either representation: exactly for a :class:`FinitePMF`, lazily
    for a curve. A composite tilt equal to the identity returns the
    untilted base.'''
    alpha = TiltParameter.convert_from(alpha)
    if isinstance(d, FinitePMF):
        return tilt_pmf(d, alpha)
    tilted = TiltedSurvival(d, alpha)
    if math.isclose(tilted.alpha.alpha, 1.0, rel_tol=0, abs_tol=1e-15):
        return tilted.base
    _log.debug(f"tilted {tilted.base} by α={tilted.alpha}")
    return tilted


import unittest

import numpy as np

from .dist import ParametricSurvival, make_pmf


F = Fraction


def _random_pmf(rng: np.random.Generator, max_n: int = 6, denominator: int = 20) -> FinitePMF:
    n = int(rng.integers(1, max_n + 1))
    raw = [int(w) for w in rng.integers(0, denominator + 1, size=n)]
    raw[-1] = max(raw[-1], 1)
    total = sum(raw)
    return FinitePMF(tuple(F(w, total) for w in raw))


def _random_alpha(rng: np.random.Generator) -> TiltParameter:
    return TiltParameter(F(int(rng.integers(1, 13)), int(rng.integers(1, 13))))


class TestTiltParameter(unittest.TestCase):
    def test_convert_from(self):
        self.assertEqual(TiltParameter.convert_from('1/5').alpha, F(1, 5))
        self.assertEqual(TiltParameter.convert_from('0.2').alpha, F(1, 5))
        self.assertEqual(TiltParameter.convert_from(5).alpha, F(5))
        self.assertFalse(TiltParameter.convert_from(0.2).exact)

    def test_alpha_bar_is_derived(self):
        a = TiltParameter(F(4))
        self.assertEqual(a.alpha_bar, -3)
        self.assertEqual((a * TiltParameter(F(1, 2))).alpha_bar, -1)

    def test_must_be_positive(self):
        for bad in (0, -1, '0', 'abc', float('inf')):
            with self.assertRaises(InvalidTilt):
                TiltParameter.convert_from(bad)


class TestTiltSurvivalAt(unittest.TestCase):
    def test_values(self):
        self.assertEqual(tilt_survival_at(F(1, 2), F(1, 5)), F(1, 6))
        self.assertEqual(tilt_survival_at(F(1, 2), 5), F(5, 6))

    def test_identity_and_fixed_points(self):
        for s in (F(0), F(1, 3), F(7, 9), F(1)):
            self.assertEqual(tilt_survival_at(s, 1), s)
        for a in ('1/7', '3', '12'):
            self.assertEqual(tilt_survival_at(F(0), a), 0)
            self.assertEqual(tilt_survival_at(F(1), a), 1)

    def test_rejects_non_probability(self):
        with self.assertRaises(InvalidParameter):
            tilt_survival_at(F(3, 2), 2)


class TestTiltDistributionAt(unittest.TestCase):
    def test_values(self):
        self.assertEqual(tilt_distribution_at(F(5, 24), 4), F(5, 81))
        self.assertEqual(tilt_distribution_at(F(2, 5), 4), F(1, 7))
        self.assertEqual(tilt_distribution_at(F(1), '2/9'), 1)


class TestTiltPmf(unittest.TestCase):
    def test_ilr_fixture_alpha_5(self):
        g = tilt_pmf(make_pmf(['0', '1/10', '1/4', '7/20', '3/10']), 5)
        self.assertEqual(g.weights, (0, F(1, 46), F(125, 1656), F(175, 792), F(15, 22)))

    def test_ilr_fixture_alpha_02(self):
        g = tilt_pmf(make_pmf(['0', '0.3', '0.34', '0.26', '0.1']), '0.2')
        self.assertEqual(g.weights, (0, F(15, 22), F(425, 1958), F(325, 4094), F(1, 46)))

    def test_dlr_fixtures(self):
        g = tilt_pmf(make_pmf(['9/25', '13/50', '21/100', '17/100']), 2)
        self.assertEqual(g.weights, (F(9, 41), F(650, 2829), F(700, 2691), F(34, 117)))
        g = tilt_pmf(make_pmf(['0.26', '0.18', '0.24', '0.32']), '0.4')
        self.assertEqual(g.weights, (F(65, 139), F(2250, 11537), F(1500, 8383), F(16, 101)))

    def test_drhr_fixture_cdf(self):
        d = make_pmf(['0', '4/25', '6/25', '4/15', '1/3'])
        self.assertEqual(
            [tilt_distribution_at(d.cdf(k), 4) for k in range(1, 6)],
            [0, F(1, 22), F(1, 7), F(1, 3), 1],
        )
        self.assertEqual([tilt_pmf(d, 4).cdf(k) for k in range(1, 6)],
                         [0, F(1, 22), F(1, 7), F(1, 3), 1])

    def test_identity(self):
        d = make_pmf(['1/3', '0', '2/3'])
        self.assertEqual(tilt_pmf(d, 1), d)

    def test_float_alpha_rejected(self):
        with self.assertRaises(InvalidTilt):
            tilt_pmf(make_pmf([1]), 0.5)


class TestTiltedHazards(unittest.TestCase):
    def test_exact_hazard(self):
        d = make_pmf(['9/25', '13/50', '21/100', '17/100'])
        self.assertEqual(tilt_hazard_at(d, 2, 2), tilt_pmf(d, 2).hazard(2))

    def test_reversed_hazard_at_first_point(self):
        d = make_pmf(['9/25', '13/50', '21/100', '17/100'])
        self.assertEqual(tilt_reversed_hazard_at(d, 2, 1), 1)
        self.assertEqual(tilt_pmf(d, 2).reversed_hazard(1), 1)

    def test_reversed_hazard_zero_cdf(self):
        from .errors import ZeroCdf
        with self.assertRaises(ZeroCdf):
            tilt_reversed_hazard_at(make_pmf(['0', '1/10', '1/4', '7/20', '3/10']), 5, 1)

    def test_salvia_bollinger_fixture(self):
        s = ParametricSurvival.of('salvia_bollinger', c=0.8)
        for k, printed in ((2, 0.8064516), (3, 0.7870635), (4, 0.8110739)):
            self.assertLess(abs(tilt_hazard_at(s, '0.2', k) - printed), 5e-7)

    def test_weibull_fixture(self):
        s = ParametricSurvival.of('type_i_discrete_weibull', q=0.5, beta=0.8)
        for k, printed in ((7, 0.2759209), (10, 0.2834942), (13, 0.2793229)):
            self.assertLess(abs(tilt_hazard_at(s, 5, k) - printed), 5e-7)

    def test_identity_on_curves(self):
        s = ParametricSurvival.of('discrete_pareto', c=3, d=2)
        for k in range(1, 20):
            self.assertAlmostEqual(tilt_hazard_at(s, 1, k), s.hazard(k), places=14)


class TestTiltedSurvival(unittest.TestCase):
    def setUp(self):
        self.base = ParametricSurvival.of('discrete_s', p=0.3, a=0.6)

    def test_matches_pointwise_tilt(self):
        y = TiltedSurvival(self.base, '0.2')
        for k in range(0, 40):
            self.assertAlmostEqual(y.survival(k), tilt_survival_at(self.base.survival(k), '0.2'), places=12)
            self.assertAlmostEqual(y.cdf(k), tilt_distribution_at(self.base.cdf(k), '0.2'), places=12)

    def test_hazard_forms_agree(self):
        y = TiltedSurvival(self.base, 6)
        for k in range(1, 60):
            self.assertAlmostEqual(y.hazard(k), -math.expm1(y.log_step(k)), places=12)

    def test_composition_folds(self):
        y = TiltedSurvival(TiltedSurvival(self.base, 4), '1/2')
        self.assertIs(y.base, self.base)
        self.assertAlmostEqual(y.alpha.alpha, 2.0)
        self.assertIs(tilt(tilt(self.base, '2/3'), '3/2'), self.base)

    def test_horizon_inherited(self):
        s = ParametricSurvival.of('discrete_pareto', horizon=30, c=3, d=2)
        self.assertEqual(TiltedSurvival(s, 6).horizon, 30)

    def test_deep_tail_stays_finite(self):
        s = ParametricSurvival.of('salvia_bollinger', c=0.8)
        y = TiltedSurvival(s, 5)
        self.assertTrue(math.isfinite(y.log_survival(200)))
        self.assertLess(y.log_survival(200), y.log_survival(199))


class TestAlgebraicInvariants(unittest.TestCase):
    CASES = 10_000

    def test_composition(self):
        rng = np.random.default_rng(2024)
        for _ in range(self.CASES):
            d = _random_pmf(rng)
            a, b = _random_alpha(rng), _random_alpha(rng)
            self.assertEqual(tilt_pmf(tilt_pmf(d, a), b), tilt_pmf(d, a * b))

    def test_pointwise_identities(self):
        rng = np.random.default_rng(2025)
        for _ in range(self.CASES):
            d = _random_pmf(rng)
            a = _random_alpha(rng)
            g = tilt_pmf(d, a)

            self.assertEqual(tilt_pmf(d, 1), d)
            self.assertEqual(sum(g.weights), 1)
            for k in range(0, d.n + 1):
                s = d.survival(k)
                tilted = tilt_survival_at(s, a)
                self.assertEqual(g.survival(k), tilted)
                self.assertEqual(tilt_distribution_at(1 - s, a) + tilted, 1)
            for k in range(1, d.n + 1):
                self.assertEqual(
                    g.pmf(k),
                    tilt_survival_at(d.survival(k - 1), a) - tilt_survival_at(d.survival(k), a),
                )

    def test_hazard_shift_and_ratio(self):
        rng = np.random.default_rng(2026)
        for _ in range(self.CASES):
            d = _random_pmf(rng)
            a = _random_alpha(rng)
            g = tilt_pmf(d, a)
            ratios = []
            for k in range(1, d.n + 1):
                r_x = d.hazard(k)
                r_y = tilt_hazard_at(d, a, k)
                self.assertEqual(r_y, g.hazard(k))
                if a.alpha >= 1:
                    self.assertLessEqual(r_y, r_x)
                if a.alpha <= 1:
                    self.assertGreaterEqual(r_y, r_x)
                ratio = 1 / (1 - a.alpha_bar * d.survival(k))
                self.assertEqual(r_y, r_x * ratio)
                ratios.append(ratio)
                if d.cdf(k) > 0:
                    self.assertEqual(tilt_reversed_hazard_at(d, a, k), g.reversed_hazard(k))
            steps = list(zip(ratios, ratios[1:]))
            if a.alpha > 1:
                self.assertTrue(all(x <= y for x, y in steps))
            elif a.alpha < 1:
                self.assertTrue(all(x >= y for x, y in steps))
