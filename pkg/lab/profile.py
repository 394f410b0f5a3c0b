'''Hazard ratio of a tilt over a window.'''

from __future__ import annotations

from dataclasses import dataclass
import logging
import math
import operator

from ..ageing import Window
from ..dist import FinitePMF, Prob, SurvivalCurve
from ..tilt import TiltParameter


__all__ = ('HazardRatioProfile', 'hazard_ratio_profile')


_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HazardRatioProfile:
    alpha: TiltParameter
    points: tuple[tuple[int, Prob], ...]
    '''``(k, r_Y(k) / r_X(k))`` over the window.'''

    monotone: bool
    '''Whether the ratio moves the way the tilt says it should:
    nondecreasing for ``α > 1``, nonincreasing for ``α < 1``, constant for
    ``α = 1``.'''

    @property
    def direction(self) -> str:
        if self.alpha.is_identity:
            return 'constant'
        return 'nondecreasing' if self.alpha.alpha > 1 else 'nonincreasing'

    @property
    def gap(self) -> float:
        '''Distance of the last ratio from 1.'''
        return abs(float(self.points[-1][1]) - 1.0)

    def __str__(self) -> str:
        ratios = ', '.join(f"{k}: {float(r):.7g}" for k, r in self.points)
        state = self.direction if self.monotone else f"not {self.direction}"
        return f"α={self.alpha}: {state} [{ratios}], gap {self.gap:.3g}"


def _ratio(d: FinitePMF | SurvivalCurve, alpha: TiltParameter, k: int) -> Prob:
    if isinstance(d, FinitePMF):
        if alpha.exact:
            return 1 / (1 - alpha.alpha_bar * d.survival(k))
        return 1.0 / (1.0 - alpha.alpha_bar * float(d.survival(k)))
    return 1.0 / (1.0 - float(alpha.alpha_bar) * math.exp(d.log_survival(k)))


def hazard_ratio_profile(d: FinitePMF | SurvivalCurve, alpha, window) -> HazardRatioProfile:
    '''``r_Y(k)/r_X(k) = 1/(1 - ᾱF̄(k))`` for ``k`` in ``window``.

    The baseline hazard is evaluated at every index, so an index where it is
    undefined raises the same error :meth:`hazard` would.

    '''
    alpha = TiltParameter.convert_from(alpha)
    window = Window.convert_from(window)
    points = []
    for k in range(window.lo, window.hi + 1):
        d.hazard(k)
        points.append((k, _ratio(d, alpha, k)))

    if alpha.is_identity:
        relation = operator.eq
    elif alpha.alpha > 1:
        relation = operator.le
    else:
        relation = operator.ge
    ratios = [r for _, r in points]
    monotone = all(relation(a, b) for a, b in zip(ratios, ratios[1:]))
    if not monotone:
        _log.warning(f"hazard ratio at α={alpha} is not monotone on {window}")
    return HazardRatioProfile(alpha, tuple(points), monotone)


import unittest
from fractions import Fraction

import numpy as np

from ..dist import ParametricSurvival, make_pmf
from ..errors import BeyondSupport
from ..tilt import tilt


class TestHazardRatioProfile(unittest.TestCase):
    def test_identity(self):
        p = hazard_ratio_profile(make_pmf(['1/4', '1/4', '1/2']), 1, '1..3')
        self.assertEqual([r for _, r in p.points], [1, 1, 1])
        self.assertTrue(p.monotone)
        self.assertEqual(p.direction, 'constant')
        self.assertEqual(p.gap, 0)

    def test_pareto_increases_towards_one(self):
        x = ParametricSurvival.of('discrete_pareto', c=3, d=2)
        p = hazard_ratio_profile(x, 6, '1..10')
        ratios = [r for _, r in p.points]
        self.assertTrue(p.monotone)
        self.assertTrue(all(a < b < 1 for a, b in zip(ratios, ratios[1:])))
        y = tilt(x, 6)
        for k, r in p.points:
            self.assertAlmostEqual(y.hazard(k) / x.hazard(k), r, places=12)
        self.assertAlmostEqual(p.gap, 1 - ratios[-1])

    def test_exact_on_finite_pmf(self):
        d = make_pmf(['9/25', '13/50', '21/100', '17/100'])
        p = hazard_ratio_profile(d, 2, '1..4')
        y = tilt(d, 2)
        for k, r in p.points:
            self.assertIsInstance(r, Fraction)
            self.assertEqual(r, y.hazard(k) / d.hazard(k))

    def test_float_alpha_on_finite_pmf(self):
        d = make_pmf(['9/25', '13/50', '21/100', '17/100'])
        approx = hazard_ratio_profile(d, 0.2, '1..3')
        exact = hazard_ratio_profile(d, '1/5', '1..3')
        self.assertTrue(approx.monotone)
        for (k, r), (j, s) in zip(approx.points, exact.points):
            self.assertEqual(k, j)
            self.assertIsInstance(r, float)
            self.assertAlmostEqual(r, float(s), places=12)

    def test_random_pmfs(self):
        rng = np.random.default_rng(21)
        for _ in range(500):
            n = int(rng.integers(2, 7))
            raw = [int(w) for w in rng.integers(1, 21, size=n)]
            d = make_pmf([Fraction(w, sum(raw)) for w in raw])
            self.assertTrue(hazard_ratio_profile(d, 5, (1, n - 1)).monotone)
            self.assertTrue(hazard_ratio_profile(d, '1/5', (1, n - 1)).monotone)

    def test_hazard_errors_propagate(self):
        with self.assertRaises(BeyondSupport):
            hazard_ratio_profile(make_pmf(['1/2', '1/2']), 5, '1..3')
