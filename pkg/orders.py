'''Stochastic orders between two finite pmfs.

``check_order(rel, d1, d2)`` decides ``X1 <=_rel X2``:

* ST: ``F̄1(k) <= F̄2(k)`` for every ``k``.
* HR: ``r1(k) >= r2(k)`` for ``k <= min(n1, n2)``. Since ``r2(n2) = 1``,
  the scan itself rejects ``n1 > n2``.
* RHR: ``r̃1(k) <= r̃2(k)`` for ``k`` from the first index where both cdfs
  are positive up to ``max(n1, n2)``. Past a support end ``r̃ = 0``. At the
  later of the two starts the starting variable has ``r̃ = 1``, so the scan
  rejects ``start(d1) > start(d2)``.
* LR: ``f1(k) f2(j) <= f1(j) f2(k)`` for ``j < k``; no division, so zero
  masses are fine.

Alternative forms through survival and cdf ratios are provided for HR and
RHR; they agree with the pointwise forms on every input.

'''

from __future__ import annotations

import enum
import logging
from typing import Callable

from .ageing import Verdict
from .dist import FinitePMF


__all__ = (
    'OrderRelation',
    'check_order',
    'hr_by_survival_ratio',
    'rhr_by_cdf_ratio',
)


_log = logging.getLogger(__name__)


class OrderRelation(enum.Enum):
    ST = 'ST'
    HR = 'HR'
    RHR = 'RHR'
    LR = 'LR'

    @classmethod
    def convert_from(cls, value) -> OrderRelation:
        if isinstance(value, cls):
            return value
        return cls[str(value).strip().upper()]

    def __str__(self) -> str:
        return self.value


def _scan(tag: OrderRelation, indices, terms: Callable) -> Verdict:
    for idx in indices:
        lhs, rhs = terms(idx)
        if not lhs <= rhs:
            return Verdict(tag, False, idx, lhs, rhs)
    return Verdict(tag, True)


def _usual(d1: FinitePMF, d2: FinitePMF) -> Verdict:
    return _scan(OrderRelation.ST, range(1, max(d1.n, d2.n)),
                 lambda k: (d1.survival(k), d2.survival(k)))


def _hazard_rate(d1: FinitePMF, d2: FinitePMF) -> Verdict:
    # compared as r2(k) <= r1(k); lhs/rhs keep the r1, r2 order
    verdict = _scan(OrderRelation.HR, range(1, min(d1.n, d2.n) + 1),
                    lambda k: (d2.hazard(k), d1.hazard(k)))
    if verdict.holds:
        return verdict
    return Verdict(OrderRelation.HR, False, verdict.witness, verdict.rhs, verdict.lhs)


def _reversed_hazard_rate(d1: FinitePMF, d2: FinitePMF) -> Verdict:
    first = max(d1.start, d2.start)
    return _scan(OrderRelation.RHR, range(first, max(d1.n, d2.n) + 1),
                 lambda k: (d1.reversed_hazard(k), d2.reversed_hazard(k)))


def _pairs(end: int):
    for j in range(1, end + 1):
        for k in range(j + 1, end + 1):
            yield (j, k)


def _likelihood_ratio(d1: FinitePMF, d2: FinitePMF) -> Verdict:
    return _scan(OrderRelation.LR, _pairs(max(d1.n, d2.n)),
                 lambda jk: (d1.pmf(jk[1]) * d2.pmf(jk[0]), d1.pmf(jk[0]) * d2.pmf(jk[1])))


_CHECKERS = {
    OrderRelation.ST: _usual,
    OrderRelation.HR: _hazard_rate,
    OrderRelation.RHR: _reversed_hazard_rate,
    OrderRelation.LR: _likelihood_ratio,
}


def check_order(relation, d1: FinitePMF, d2: FinitePMF) -> Verdict:
    '''Decide ``d1 <= d2`` in ``relation``; the witness is the first
    failing index (or the lexicographically smallest pair for LR).'''
    relation = OrderRelation.convert_from(relation)
    verdict = _CHECKERS[relation](d1, d2)
    _log.debug(f"{d1} <=_{relation} {d2}: {verdict}")
    return verdict


def hr_by_survival_ratio(d1: FinitePMF, d2: FinitePMF) -> Verdict:
    '''HR as ``F̄2(k)/F̄1(k)`` nondecreasing, cross-multiplied:
    ``F̄2(k-1) F̄1(k) <= F̄2(k) F̄1(k-1)`` for ``k = 1..n1``.'''
    S1, S2 = d1.survival, d2.survival
    return _scan(OrderRelation.HR, range(1, d1.n + 1),
                 lambda k: (S2(k - 1) * S1(k), S2(k) * S1(k - 1)))


def rhr_by_cdf_ratio(d1: FinitePMF, d2: FinitePMF) -> Verdict:
    '''RHR as ``F2(k)/F1(k)`` nondecreasing, cross-multiplied:
    ``F2(k-1) F1(k) <= F2(k) F1(k-1)`` for ``k = 2..max(n1, n2)``.'''
    F1, F2 = d1.cdf, d2.cdf
    return _scan(OrderRelation.RHR, range(2, max(d1.n, d2.n) + 1),
                 lambda k: (F2(k - 1) * F1(k), F2(k) * F1(k - 1)))


import unittest
from fractions import Fraction

import numpy as np

from .dist import make_pmf
from .tilt import TiltParameter, tilt_pmf


F = Fraction


def _random_pmf(rng: np.random.Generator, max_n: int = 6, denominator: int = 8) -> FinitePMF:
    n = int(rng.integers(1, max_n + 1))
    raw = [int(w) for w in rng.integers(0, denominator + 1, size=n)]
    raw[-1] = max(raw[-1], 1)
    total = sum(raw)
    return FinitePMF(tuple(F(w, total) for w in raw))


def _random_pair(rng: np.random.Generator) -> tuple[FinitePMF, FinitePMF]:
    d1 = _random_pmf(rng)
    match int(rng.integers(0, 3)):
        case 0:
            return d1, _random_pmf(rng)
        case 1:
            return d1, tilt_pmf(d1, TiltParameter(F(int(rng.integers(2, 9)), int(rng.integers(1, 3)))))
        case _:
            return d1, d1


HR_X1 = make_pmf(['0', '1/2', '1/10', '2/5'])
HR_X2 = make_pmf(['0', '3/8', '3/40', '11/20'])
LR_X1 = make_pmf(['0', '3/10', '2/5', '1/5', '1/10'])
LR_X2 = make_pmf(['0', '1/5', '3/10', '1/5', '3/10'])


class TestFixtures(unittest.TestCase):
    def test_hr_pair(self):
        self.assertEqual([HR_X1.survival(k) for k in range(1, 5)], [1, F(1, 2), F(2, 5), 0])
        self.assertEqual([HR_X2.survival(k) for k in range(1, 5)], [1, F(5, 8), F(11, 20), 0])
        self.assertTrue(check_order('hr', HR_X1, HR_X2).holds)

    def test_hr_pair_after_tilt(self):
        y1, y2 = tilt_pmf(HR_X1, '1/5'), tilt_pmf(HR_X2, '1/5')
        self.assertEqual([y1.survival(k) for k in (2, 3)], [F(1, 6), F(2, 17)])
        self.assertEqual([y2.survival(k) for k in (2, 3)], [F(1, 4), F(11, 56)])
        # these printed survivals still satisfy the order
        self.assertTrue(check_order('hr', y1, y2).holds)
        self.assertTrue(hr_by_survival_ratio(y1, y2).holds)

    def test_lr_pair_alpha_5(self):
        self.assertTrue(check_order('lr', LR_X1, LR_X2).holds)
        v = check_order('lr', tilt_pmf(LR_X1, 5), tilt_pmf(LR_X2, 5))
        self.assertEqual((v.holds, v.witness), (False, (2, 3)))
        self.assertEqual((v.lhs, v.rhs), (F(50, 209) * F(1, 21), F(3, 38) * F(5, 42)))

    def test_lr_pair_alpha_02(self):
        x1 = make_pmf(['0', '0.3', '0.3', '0.2', '0.2'])
        x2 = make_pmf(['0', '0.2', '0.3', '0.24', '0.26'])
        self.assertTrue(check_order('lr', x1, x2).holds)
        v = check_order('lr', tilt_pmf(x1, '0.2'), tilt_pmf(x2, '0.2'))
        self.assertEqual((v.holds, v.witness), (False, (3, 5)))

    def test_rhr_pair_alpha_4(self):
        x1 = make_pmf(['0', '5/24', '7/24', '1/4', '1/4'])
        x2 = make_pmf(['0', '1/6', '1/4', '1/4', '1/3'])
        self.assertTrue(check_order('rhr', x1, x2).holds)
        v = check_order('rhr', tilt_pmf(x1, 4), tilt_pmf(x2, 4))
        self.assertEqual((v.holds, v.witness, v.lhs, v.rhs), (False, 3, F(56, 81), F(24, 35)))

    def test_cdf_ratio_direction(self):
        # F2/F1 = 1/2, 2/3, 1 rises, so d1 <=rhr d2 and not the reverse
        d1 = make_pmf(['1/2', '1/4', '1/4'])
        d2 = make_pmf(['1/4', '1/4', '1/2'])
        self.assertTrue(rhr_by_cdf_ratio(d1, d2).holds)
        self.assertTrue(check_order('rhr', d1, d2).holds)
        self.assertFalse(rhr_by_cdf_ratio(d2, d1).holds)

    def test_st_reflexive(self):
        self.assertTrue(check_order('st', LR_X1, LR_X1).holds)


class TestSupportConventions(unittest.TestCase):
    def test_hr_rejects_longer_first_support(self):
        short, long = make_pmf(['1/2', '1/2']), make_pmf(['1/2', '1/4', '1/4'])
        self.assertTrue(check_order('hr', short, long).holds)
        v = check_order('hr', long, short)
        self.assertEqual((v.holds, v.witness, v.lhs, v.rhs), (False, 2, F(1, 2), 1))

    def test_rhr_rejects_later_first_start(self):
        early, late = make_pmf(['1/2', '1/2']), make_pmf(['0', '1/2', '1/2'])
        self.assertTrue(check_order('rhr', early, late).holds)
        v = check_order('rhr', late, early)
        self.assertEqual((v.holds, v.witness, v.lhs, v.rhs), (False, 2, 1, F(1, 2)))

    def test_rhr_past_support_end_is_zero(self):
        v = check_order('rhr', make_pmf(['1/3', '1/3', '1/3']), make_pmf(['1/2', '1/2']))
        self.assertEqual((v.holds, v.witness, v.rhs), (False, 3, 0))


class TestRandomPairs(unittest.TestCase):
    PAIRS = 10_000

    def test_alternative_forms_agree(self):
        rng = np.random.default_rng(41)
        for _ in range(self.PAIRS):
            d1, d2 = _random_pair(rng)
            self.assertEqual(check_order('hr', d1, d2).holds,
                             hr_by_survival_ratio(d1, d2).holds, f"{d1} {d2}")
            self.assertEqual(check_order('rhr', d1, d2).holds,
                             rhr_by_cdf_ratio(d1, d2).holds, f"{d1} {d2}")

    def test_implication_chain(self):
        rng = np.random.default_rng(42)
        lr_seen = 0
        for _ in range(self.PAIRS):
            d1, d2 = _random_pair(rng)
            v = {rel: check_order(rel, d1, d2).holds for rel in OrderRelation}
            if v[OrderRelation.LR]:
                lr_seen += 1
                self.assertTrue(v[OrderRelation.HR] and v[OrderRelation.RHR], f"{d1} {d2}")
            if v[OrderRelation.HR] or v[OrderRelation.RHR]:
                self.assertTrue(v[OrderRelation.ST], f"{d1} {d2}")
        self.assertGreater(lr_seen, 1000)

    def test_reflexive_and_antisymmetric(self):
        rng = np.random.default_rng(43)
        for _ in range(2000):
            d1, d2 = _random_pair(rng)
            for rel in OrderRelation:
                self.assertTrue(check_order(rel, d1, d1).holds)
                if check_order(rel, d1, d2).holds and check_order(rel, d2, d1).holds:
                    self.assertEqual(d1, d2, f"{rel}: {d1} {d2}")

    def test_witness_soundness(self):
        rng = np.random.default_rng(44)
        for _ in range(2000):
            d1, d2 = _random_pair(rng)
            for rel in OrderRelation:
                v = check_order(rel, d1, d2)
                if v.holds:
                    continue
                if rel is OrderRelation.HR:
                    self.assertLess(v.lhs, v.rhs)
                    self.assertEqual((v.lhs, v.rhs), (d1.hazard(v.witness), d2.hazard(v.witness)))
                elif rel is OrderRelation.LR:
                    j, k = v.witness
                    self.assertGreater(v.lhs, v.rhs)
                    self.assertEqual(v.lhs, d1.pmf(k) * d2.pmf(j))
                else:
                    self.assertGreater(v.lhs, v.rhs)
