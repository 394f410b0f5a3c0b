'''Membership of a distribution in the discrete ageing classes.

Each class is a non-strict inequality between two terms at an index ``k``
(or a pair ``(j, k)`` for NBU/NWU):

====== ==================================== ==========
class  inequality                           indices
====== ==================================== ==========
ILR    ``f(k+2) f(k) <= f(k+1)^2``          ``k, k+2`` in window
DLR    ``f(k+2) f(k) >= f(k+1)^2``          ``k, k+2`` in window
IFR    ``r(k) <= r(k+1)``                   ``k, k+1`` in window
DFR    ``r(k) >= r(k+1)``                   ``k, k+1`` in window
IFRA   ``F̄(k)^(k+1) >= F̄(k+1)^k``           ``k, k+1`` in window
DFRA   ``F̄(k)^(k+1) <= F̄(k+1)^k``           ``k, k+1`` in window
NBU    ``F̄(j+k) <= F̄(j) F̄(k)``              ``j <= k``, ``j+k`` in window
NWU    ``F̄(j+k) >= F̄(j) F̄(k)``              ``j <= k``, ``j+k`` in window
DRHR   ``F(k+1)^2 >= F(k) F(k+2)``          ``k, k+2`` in window
NBAFR  ``F̄(k) <= F̄(1)^k``                   ``k`` in window
====== ==================================== ==========

IFRA/DFRA compare ``F̄(k)^(1/k)`` with ``F̄(k+1)^(1/(k+1))``; both sides are
raised to the power ``k(k+1)`` so exact inputs never need a root.

For a :class:`~.dist.FinitePMF` every term is an exact
:class:`~fractions.Fraction` and the verdict is exact. For a
:class:`~.dist.SurvivalCurve` the same inequalities are evaluated on
logarithms with a relative slack of ``1e-12``; reported ``lhs``/``rhs`` are
then exponentiated back.

'''

from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass
import enum
from fractions import Fraction
import logging
import math
import operator
from typing import NamedTuple

from .dist import FinitePMF, Prob, SurvivalCurve, format_fraction, log_cdf_from_log_survival
from .errors import EmptyWindow


__all__ = (
    'AgeingProperty',
    'Verdict',
    'Window',
    'check_ageing',
    'classify_all',
    'evaluate_at',
    'ifr_by_survival_ratio',
    'implication_chain_breaks',
    'LOG_SLACK',
)


_log = logging.getLogger(__name__)


LOG_SLACK: float = 1e-12


class AgeingProperty(enum.Enum):
    ILR = 'ILR'
    DLR = 'DLR'
    IFR = 'IFR'
    DFR = 'DFR'
    IFRA = 'IFRA'
    DFRA = 'DFRA'
    NBU = 'NBU'
    NWU = 'NWU'
    DRHR = 'DRHR'
    NBAFR = 'NBAFR'

    @classmethod
    def convert_from(cls, value) -> AgeingProperty:
        if isinstance(value, cls):
            return value
        return cls[str(value).strip().upper()]

    def __str__(self) -> str:
        return self.value


Witness = int | tuple[int, int]


@dataclass(frozen=True)
class Verdict:
    '''Outcome of one class or order check.

    ``witness`` is set exactly when the property fails; ``lhs`` and ``rhs``
    are the two compared terms at the witness.

    '''

    tag: enum.Enum
    holds: bool
    witness: Witness | None = None
    lhs: Prob | None = None
    rhs: Prob | None = None

    def __post_init__(self):
        if self.holds == (self.witness is not None):
            raise ValueError(
                f"{self.tag}: a witness is required exactly when the verdict fails"
            )

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            'tag': str(self.tag),
            'holds': self.holds,
            'witness': list(self.witness) if isinstance(self.witness, tuple) else self.witness,
            'lhs': _jsonable(self.lhs),
            'rhs': _jsonable(self.rhs),
        }

    def __str__(self) -> str:
        if self.holds:
            return f"{self.tag}: holds"
        return (f"{self.tag}: fails at {self.witness} "
                f"(lhs={_readable(self.lhs)}, rhs={_readable(self.rhs)})")


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_fraction(value)
    return value


def _readable(value) -> str:
    if isinstance(value, Fraction):
        return format_fraction(value)
    return f"{value:.7g}"


class Window(NamedTuple):
    '''Inclusive index range ``lo..hi``.'''

    lo: int
    hi: int

    @classmethod
    def convert_from(cls, value) -> Window:
        '''Accepts a :class:`Window`, a pair, or a string ``"A..B"``.'''
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            lo, sep, hi = value.partition('..')
            if not sep:
                raise ValueError(f"window must look like A..B, got {value!r}")
            return cls(int(lo), int(hi))
        lo, hi = value
        return cls(int(lo), int(hi))

    def __str__(self) -> str:
        return f"{self.lo}..{self.hi}"


def _resolve_window(d: FinitePMF | SurvivalCurve, window) -> Window:
    end = d.n if isinstance(d, FinitePMF) else d.horizon
    if window is None:
        return Window(1, end)
    window = Window.convert_from(window)
    if isinstance(d, FinitePMF):
        window = Window(max(window.lo, 1), min(window.hi, end))
    if window.lo < 1 or window.lo > window.hi:
        raise EmptyWindow(f"window {window} holds no indices")
    return window


class _ExactTerms:
    '''Exact terms of a finite pmf.'''

    def __init__(self, d: FinitePMF):
        self.S = d.survival
        self.F = d.cdf
        self.f = d.pmf
        self.r = d.hazard

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def pow(a, e: int):
        return a ** e

    @staticmethod
    def holds(relation, lhs, rhs) -> bool:
        return relation(lhs, rhs)

    @staticmethod
    def report(value):
        return value


class _LogTerms:
    '''Logarithms of the terms of a survival curve, tabulated up to ``hi``.'''

    def __init__(self, curve: SurvivalCurve, hi: int):
        self._ls = [curve.log_survival(k) for k in range(hi + 1)]
        self._lr = [-math.inf] + [_log(curve.hazard(k)) for k in range(1, hi + 1)]

    def S(self, k: int) -> float:
        return self._ls[k]

    def F(self, k: int) -> float:
        return log_cdf_from_log_survival(self._ls[k])

    def f(self, k: int) -> float:
        return self._ls[k - 1] + self._lr[k]

    def r(self, k: int) -> float:
        return self._lr[k]

    @staticmethod
    def mul(a: float, b: float) -> float:
        return a + b

    @staticmethod
    def pow(a: float, e: int) -> float:
        return a * e

    @staticmethod
    def holds(relation, lhs: float, rhs: float) -> bool:
        if relation(lhs, rhs):
            return True
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            return False
        slack = LOG_SLACK * max(1.0, abs(lhs), abs(rhs))
        if relation is operator.le:
            return lhs <= rhs + slack
        return lhs + slack >= rhs

    @staticmethod
    def report(value: float) -> float:
        return math.exp(value)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


@dataclass(frozen=True)
class _Rule:
    relation: Callable
    indices: Callable[[Window], Iterator[Witness]]
    terms: Callable


def _triples(w: Window):
    return iter(range(w.lo, w.hi - 1))


def _adjacent(w: Window):
    return iter(range(w.lo, w.hi))


def _pairs(w: Window):
    for j in range(1, w.hi // 2 + 1):
        for k in range(max(j, w.lo - j), w.hi - j + 1):
            yield (j, k)


def _singles(w: Window):
    return iter(range(w.lo, w.hi + 1))


def _log_concavity(t, k):
    return t.mul(t.f(k + 2), t.f(k)), t.pow(t.f(k + 1), 2)


def _hazard_step(t, k):
    return t.r(k), t.r(k + 1)


def _root_step(t, k):
    return t.pow(t.S(k), k + 1), t.pow(t.S(k + 1), k)


def _used(t, jk):
    j, k = jk
    return t.S(j + k), t.mul(t.S(j), t.S(k))


def _cdf_concavity(t, k):
    return t.pow(t.F(k + 1), 2), t.mul(t.F(k), t.F(k + 2))


def _failure_rate_average(t, k):
    return t.S(k), t.pow(t.S(1), k)


_RULES: dict[AgeingProperty, _Rule] = {
    AgeingProperty.ILR: _Rule(operator.le, _triples, _log_concavity),
    AgeingProperty.DLR: _Rule(operator.ge, _triples, _log_concavity),
    AgeingProperty.IFR: _Rule(operator.le, _adjacent, _hazard_step),
    AgeingProperty.DFR: _Rule(operator.ge, _adjacent, _hazard_step),
    AgeingProperty.IFRA: _Rule(operator.ge, _adjacent, _root_step),
    AgeingProperty.DFRA: _Rule(operator.le, _adjacent, _root_step),
    AgeingProperty.NBU: _Rule(operator.le, _pairs, _used),
    AgeingProperty.NWU: _Rule(operator.ge, _pairs, _used),
    AgeingProperty.DRHR: _Rule(operator.ge, _triples, _cdf_concavity),
    AgeingProperty.NBAFR: _Rule(operator.le, _singles, _failure_rate_average),
}


def _terms_for(d: FinitePMF | SurvivalCurve, hi: int):
    if isinstance(d, FinitePMF):
        return _ExactTerms(d)
    return _LogTerms(d, hi)


def _check(prop: AgeingProperty, terms, window: Window) -> Verdict:
    rule = _RULES[prop]
    for idx in rule.indices(window):
        lhs, rhs = rule.terms(terms, idx)
        if not terms.holds(rule.relation, lhs, rhs):
            return Verdict(prop, False, idx, terms.report(lhs), terms.report(rhs))
    return Verdict(prop, True)


def check_ageing(property, d: FinitePMF | SurvivalCurve, window=None) -> Verdict:
    '''Decide whether ``d`` belongs to ageing class ``property`` over
    ``window``.

    ``window`` defaults to ``1..n`` for a finite pmf (and is clipped to it)
    or to ``1..horizon`` for a curve. The witness is the first failing
    index, or the lexicographically smallest failing pair for NBU/NWU.

    '''
    prop = AgeingProperty.convert_from(property)
    window = _resolve_window(d, window)
    return _check(prop, _terms_for(d, window.hi), window)


def evaluate_at(property, d: FinitePMF | SurvivalCurve, witness: Witness) -> tuple[Prob, Prob]:
    '''The two terms of ``property``'s inequality at ``witness``, reported
    the way :func:`check_ageing` reports them.'''
    prop = AgeingProperty.convert_from(property)
    highest = sum(witness) if isinstance(witness, tuple) else witness + 2
    if not isinstance(d, FinitePMF):
        highest = min(highest, d.horizon)
    terms = _terms_for(d, highest)
    lhs, rhs = _RULES[prop].terms(terms, witness)
    return terms.report(lhs), terms.report(rhs)


def ifr_by_survival_ratio(d: FinitePMF, decreasing: bool = True) -> bool:
    '''IFR (or DFR with ``decreasing=False``) via the ratio
    ``F̄(k+1)/F̄(k)`` over indices with ``F̄(k) > 0``.'''
    ratios = [d.survival(k + 1) / d.survival(k) for k in range(d.n)]
    relation = operator.ge if decreasing else operator.le
    return all(relation(a, b) for a, b in zip(ratios, ratios[1:]))


_CHAIN = (
    AgeingProperty.ILR,
    AgeingProperty.IFR,
    AgeingProperty.IFRA,
    AgeingProperty.NBU,
    AgeingProperty.NBAFR,
)


def implication_chain_breaks(verdicts: dict[AgeingProperty, Verdict]) -> list[str]:
    '''Links of ``ILR ⇒ IFR ⇒ IFRA ⇒ NBU ⇒ NBAFR`` contradicted by
    ``verdicts``.'''
    return [
        f"{a} holds but {b} fails"
        for a, b in zip(_CHAIN, _CHAIN[1:])
        if verdicts[a].holds and not verdicts[b].holds
    ]


def classify_all(d: FinitePMF | SurvivalCurve, window=None) -> dict[AgeingProperty, Verdict]:
    '''One :class:`Verdict` per class.

    For a finite pmf with contiguous support checked over its full support,
    the classical implication chain is cross-checked and any break is
    logged as a warning.

    '''
    resolved = _resolve_window(d, window)
    terms = _terms_for(d, resolved.hi)
    verdicts = {prop: _check(prop, terms, resolved) for prop in AgeingProperty}

    if (isinstance(d, FinitePMF) and d.contiguous
            and resolved == Window(1, d.n)):
        for msg in implication_chain_breaks(verdicts):
            _log.warning(f"implication chain broken for {d}: {msg}")
    return verdicts


import unittest

import numpy as np

from .dist import ParametricSurvival, make_pmf
from .tilt import tilt


F = Fraction


def _random_pmf(rng: np.random.Generator, max_n: int = 7, denominator: int = 20,
                positive: bool = False) -> FinitePMF:
    n = int(rng.integers(1, max_n + 1))
    raw = [int(w) for w in rng.integers(1 if positive else 0, denominator + 1, size=n)]
    raw[-1] = max(raw[-1], 1)
    total = sum(raw)
    return FinitePMF(tuple(F(w, total) for w in raw))


ILR_X = make_pmf(['0', '1/10', '1/4', '7/20', '3/10'])
DLR_X = make_pmf(['9/25', '13/50', '21/100', '17/100'])
DRHR_X = make_pmf(['0', '4/25', '6/25', '4/15', '1/3'])


class TestWindow(unittest.TestCase):
    def test_convert_from(self):
        self.assertEqual(Window.convert_from('2..4'), Window(2, 4))
        self.assertEqual(Window.convert_from((1, 8)), Window(1, 8))
        self.assertEqual(str(Window(7, 13)), '7..13')
        with self.assertRaises(ValueError):
            Window.convert_from('2-4')

    def test_empty_window(self):
        with self.assertRaises(EmptyWindow):
            check_ageing('IFR', DLR_X, Window(3, 2))
        with self.assertRaises(EmptyWindow):
            check_ageing('IFR', DLR_X, Window(6, 9))

    def test_finite_window_is_clipped(self):
        self.assertEqual(check_ageing('DLR', DLR_X, Window(0, 40)), check_ageing('DLR', DLR_X))


class TestVerdict(unittest.TestCase):
    def test_witness_iff_failure(self):
        with self.assertRaises(ValueError):
            Verdict(AgeingProperty.IFR, True, 3)
        with self.assertRaises(ValueError):
            Verdict(AgeingProperty.IFR, False)

    def test_to_dict(self):
        v = Verdict(AgeingProperty.NBU, False, (2, 3), F(1, 6), F(1, 8))
        self.assertEqual(v.to_dict(), {
            'tag': 'NBU', 'holds': False, 'witness': [2, 3], 'lhs': '1/6', 'rhs': '1/8',
        })


class TestFiniteFixtures(unittest.TestCase):
    def test_ilr_baseline_and_tilt(self):
        self.assertTrue(check_ageing('ILR', ILR_X).holds)
        g = tilt(ILR_X, 5)
        ilr = check_ageing('ILR', g)
        self.assertEqual((ilr.holds, ilr.witness), (False, 3))
        self.assertEqual((ilr.lhs, ilr.rhs), (F(15, 22) * F(125, 1656), F(175, 792) ** 2))
        dlr = check_ageing('DLR', g)
        self.assertEqual((dlr.holds, dlr.witness), (False, 1))

    def test_dlr_baseline(self):
        self.assertTrue(check_ageing('DLR', DLR_X).holds)

    def test_drhr_fixture(self):
        self.assertTrue(check_ageing('DRHR', DRHR_X).holds)
        v = check_ageing('DRHR', tilt(DRHR_X, 4))
        self.assertEqual((v.holds, v.witness, v.lhs, v.rhs), (False, 3, F(1, 9), F(1, 7)))

    def test_nbafr_fixture(self):
        x = make_pmf(['1/5', '12/65', '3/26', '1/2'])
        self.assertTrue(check_ageing('NBAFR', x).holds)
        v = check_ageing('NBAFR', tilt(x, '2/5'))
        self.assertEqual((v.holds, v.witness, v.lhs, v.rhs), (False, 2, F(16, 41), F(64, 169)))

    def test_point_mass(self):
        point = make_pmf([1])
        verdicts = classify_all(point)
        for prop in (AgeingProperty.ILR, AgeingProperty.DLR, AgeingProperty.IFR,
                     AgeingProperty.DFR, AgeingProperty.IFRA, AgeingProperty.DFRA,
                     AgeingProperty.DRHR):
            self.assertTrue(verdicts[prop].holds, prop)

    def test_classify_all_on_ilr_fixture(self):
        verdicts = classify_all(ILR_X)
        self.assertTrue(verdicts[AgeingProperty.ILR].holds)
        self.assertEqual(implication_chain_breaks(verdicts), [])
        self.assertEqual(list(verdicts), list(AgeingProperty))


class TestParametricFixtures(unittest.TestCase):
    def test_salvia_bollinger_ifr(self):
        y = tilt(ParametricSurvival.of('salvia_bollinger', c=0.8), '1/5')
        ifr = check_ageing('IFR', y, '2..4')
        self.assertEqual((ifr.holds, ifr.witness), (False, 2))
        self.assertLess(abs(ifr.lhs - 0.8064516), 5e-7)
        self.assertLess(abs(ifr.rhs - 0.7870635), 5e-7)
        self.assertFalse(check_ageing('DFR', y, '2..4').holds)

    def test_weibull_dfr_and_nwu(self):
        x = ParametricSurvival.of('type_i_discrete_weibull', q=0.5, beta=0.8)
        self.assertTrue(check_ageing('DFR', x, '1..40').holds)
        self.assertTrue(check_ageing('NWU', x, '1..40').holds)
        y = tilt(x, 5)
        self.assertFalse(check_ageing('DFR', y, '7..13').holds)
        self.assertFalse(check_ageing('NWU', y, '1..5').holds)
        lhs, rhs = evaluate_at('NWU', y, (2, 3))
        self.assertLess(abs(lhs - 0.3062174), 5e-7)
        self.assertLess(abs(rhs - 0.3657684), 5e-7)

    def test_s_distribution_nbu(self):
        x = ParametricSurvival.of('discrete_s', p=0.3, a=0.6)
        self.assertTrue(check_ageing('NBU', x, '1..40').holds)
        y = tilt(x, '1/5')
        self.assertFalse(check_ageing('NBU', y, '1..5').holds)
        lhs, rhs = evaluate_at('NBU', y, (2, 3))
        self.assertLess(abs(lhs - 0.075737), 5e-7)
        self.assertLess(abs(rhs - 0.063494), 5e-7)

    def test_pareto_ifra_and_dfra(self):
        y = tilt(ParametricSurvival.of('discrete_pareto', c=3, d=2), 6)
        roots = [y.survival(k) ** (1 / k) for k in (1, 4, 8)]
        for got, printed in zip(roots, (0.7164179, 0.658037, 0.68081)):
            self.assertLess(abs(got - printed), 1e-5)
        self.assertFalse(check_ageing('IFRA', y, '1..8').holds)
        self.assertFalse(check_ageing('DFRA', y, '1..8').holds)

    def test_full_horizon_runs_in_log_space(self):
        x = ParametricSurvival.of('salvia_bollinger', c=0.8)
        verdicts = classify_all(x)
        self.assertTrue(verdicts[AgeingProperty.IFR].holds)
        self.assertTrue(verdicts[AgeingProperty.NBU].holds)
        self.assertTrue(verdicts[AgeingProperty.ILR].holds)


class TestRandomised(unittest.TestCase):
    def test_witness_soundness(self):
        rng = np.random.default_rng(31)
        for _ in range(1000):
            d = _random_pmf(rng)
            for prop, v in classify_all(d).items():
                if v.holds:
                    continue
                lhs, rhs = evaluate_at(prop, d, v.witness)
                self.assertEqual((lhs, rhs), (v.lhs, v.rhs))
                self.assertFalse(_RULES[prop].relation(lhs, rhs))

    def test_implication_chain(self):
        rng = np.random.default_rng(32)
        for _ in range(2000):
            d = _random_pmf(rng, positive=True)
            self.assertEqual(implication_chain_breaks(classify_all(d)), [], str(d))

    def test_dfr_on_full_support_only_for_point_mass(self):
        rng = np.random.default_rng(33)
        for _ in range(500):
            d = _random_pmf(rng)
            self.assertEqual(check_ageing('DFR', d).holds, d.n == 1, str(d))

    def test_ifr_ratio_form_agrees(self):
        rng = np.random.default_rng(34)
        for _ in range(2000):
            d = _random_pmf(rng)
            self.assertEqual(ifr_by_survival_ratio(d), check_ageing('IFR', d).holds, str(d))
            self.assertEqual(ifr_by_survival_ratio(d, decreasing=False),
                             check_ageing('DFR', d).holds, str(d))

    def test_root_free_deciders_match_floating_roots(self):
        rng = np.random.default_rng(35)
        compared = 0
        for _ in range(10_000):
            d = _random_pmf(rng, positive=True)
            terms = _ExactTerms(d)
            for k in range(1, d.n):
                a = float(d.survival(k)) ** (1 / k)
                b = float(d.survival(k + 1)) ** (1 / (k + 1))
                if abs(a - b) > 1e-9:
                    lhs, rhs = _root_step(terms, k)
                    self.assertEqual(lhs >= rhs, a >= b, f"{d} at {k}")
                    compared += 1
            root = float(d.survival(1))
            for k in range(1, d.n + 1):
                a = float(d.survival(k)) ** (1 / k)
                if abs(a - root) > 1e-9:
                    lhs, rhs = _failure_rate_average(terms, k)
                    self.assertEqual(lhs <= rhs, a <= root, f"{d} at {k}")
        self.assertGreater(compared, 1000)
