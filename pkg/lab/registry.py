'''Published counterexamples, pinned.

Each :class:`Case` is a baseline (or a pair), a tilt, the table cell it
speaks to, and every value printed for it, pinned either exactly or as a
decimal string. :func:`reproduce_case` recomputes the case from scratch and
fails loudly if anything moved.

One case, ``hr-alpha02``, reproduces every printed survival value, yet the
tilted pair is still hazard-rate ordered; it is kept with
``expect_violation=False``.

'''

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
import logging

from ..ageing import AgeingProperty, Window
from ..dist import Family, ParametricSurvival, Prob, format_fraction, make_pmf
from ..errors import FixtureMismatch, UnknownCase
from ..orders import OrderRelation
from ..tilt import TiltParameter, tilt
from .certificates import (
    AgeingInstance,
    ConfirmedPreserved,
    Instance,
    OrderInstance,
    PreservationCertificate,
    check_preservation,
)
from .claims import AlphaRegime, PreservationClaim, find_claim


__all__ = (
    'Pin',
    'Case',
    'CaseResult',
    'CASES',
    'get_case',
    'reproduce_case',
    'reproduce_all',
    'pool_for',
    'decimal_tolerance',
)


_log = logging.getLogger(__name__)


def decimal_tolerance(printed: str) -> float:
    '''Half a unit in the seventh decimal, or one unit in the last printed
    digit if that is coarser.'''
    exponent = Decimal(printed).as_tuple().exponent
    return max(5e-7, 10.0 ** exponent)


@dataclass(frozen=True)
class Pin:
    '''One printed value. ``compute`` receives the baseline and the tilted
    result (pairs for order cases).'''

    label: str
    compute: Callable
    printed: Fraction | str

    def mismatch(self, x, y) -> str | None:
        got = self.compute(x, y)
        if isinstance(self.printed, Fraction):
            if got != self.printed:
                return f"{self.label} = {_show(got)}, printed {format_fraction(self.printed)}"
            return None
        if not abs(float(got) - float(self.printed)) < decimal_tolerance(self.printed):
            return f"{self.label} = {float(got):.7g}, printed {self.printed}"
        return None


def _show(value: Prob) -> str:
    if isinstance(value, Fraction):
        return format_fraction(value)
    return f"{value:.7g}"


@dataclass(frozen=True)
class Case:
    id: str
    claim: PreservationClaim
    instance: Instance
    alpha: TiltParameter
    pins: tuple[Pin, ...]
    summary: str
    expect_violation: bool = True

    def tilted(self):
        if isinstance(self.instance, OrderInstance):
            return tilt(self.instance.first, self.alpha), tilt(self.instance.second, self.alpha)
        return tilt(self.instance.baseline, self.alpha)

    def baseline(self):
        if isinstance(self.instance, OrderInstance):
            return self.instance.first, self.instance.second
        return self.instance.baseline


F = Fraction


def _pmf_pins(name: str, which: int | None, values) -> list[Pin]:
    '''Pins on ``g(k)`` for ``k = 1, 2, ...``; ``which`` picks a member of a
    pair.'''
    def getter(k):
        if which is None:
            return lambda x, y: y.pmf(k)
        return lambda x, y: y[which].pmf(k)
    return [Pin(f"{name}({k})", getter(k), F(v)) for k, v in enumerate(values, start=1)]


def _at(attr: str, k: int, which: int | None = None, tilted: bool = True):
    def compute(x, y):
        d = y if tilted else x
        if which is not None:
            d = d[which]
        return getattr(d, attr)(k)
    return compute


def _root(k: int):
    return lambda x, y: y.survival(k) ** (1 / k)


def _ageing(id: str, subject: AgeingProperty, regime: AlphaRegime, baseline, alpha,
            pins, summary: str, window: str | None = None) -> Case:
    return Case(
        id=id,
        claim=find_claim(subject, regime),
        instance=AgeingInstance(baseline, None if window is None else Window.convert_from(window)),
        alpha=TiltParameter.convert_from(alpha),
        pins=tuple(pins),
        summary=summary,
    )


def _order(id: str, subject: OrderRelation, regime: AlphaRegime, first, second, alpha,
           pins, summary: str, expect_violation: bool = True) -> Case:
    return Case(
        id=id,
        claim=find_claim(subject, regime),
        instance=OrderInstance(first, second),
        alpha=TiltParameter.convert_from(alpha),
        pins=tuple(pins),
        summary=summary,
        expect_violation=expect_violation,
    )


_BELOW, _ABOVE = AlphaRegime.BELOW_ONE, AlphaRegime.ABOVE_ONE

_SALVIA = ParametricSurvival.of(Family.SALVIA_BOLLINGER, c=0.8)
_WEIBULL = ParametricSurvival.of(Family.TYPE_I_DISCRETE_WEIBULL, q=0.5, beta=0.8)
_S_NBU = ParametricSurvival.of(Family.DISCRETE_S, p=0.3, a=0.6)
_S_IFRA = ParametricSurvival.of(Family.DISCRETE_S, p=0.5, a=0.6)
_PARETO = ParametricSurvival.of(Family.DISCRETE_PARETO, c=3, d=2)

_HR_X1 = make_pmf(['0', '1/2', '1/10', '2/5'])
_HR_X2 = make_pmf(['0', '3/8', '3/40', '11/20'])
_RHR_X1 = make_pmf(['0', '5/24', '7/24', '1/4', '1/4'])
_RHR_X2 = make_pmf(['0', '1/6', '1/4', '1/4', '1/3'])
_LR5_X1 = make_pmf(['0', '0.3', '0.4', '0.2', '0.1'])
_LR5_X2 = make_pmf(['0', '0.2', '0.3', '0.2', '0.3'])
_LR02_X1 = make_pmf(['0', '0.3', '0.3', '0.2', '0.2'])
_LR02_X2 = make_pmf(['0', '0.2', '0.3', '0.24', '0.26'])


CASES: tuple[Case, ...] = (
    _ageing(
        'ilr-alpha5', AgeingProperty.ILR, _ABOVE,
        make_pmf(['0', '0.1', '0.25', '0.35', '0.3']), 5,
        _pmf_pins('g', None, ['0', '1/46', '125/1656', '175/792', '15/22']),
        "log-concave pmf on 2..5 becomes neither log-concave nor log-convex",
    ),
    _ageing(
        'ilr-alpha02', AgeingProperty.ILR, _BELOW,
        make_pmf(['0', '0.3', '0.34', '0.26', '0.1']), '1/5',
        _pmf_pins('g', None, ['0', '15/22', '425/1958', '325/4094', '1/46']),
        "log-concave pmf loses log-concavity under a small tilt",
    ),
    _ageing(
        'dlr-alpha2', AgeingProperty.DLR, _ABOVE,
        make_pmf(['0.36', '0.26', '0.21', '0.17']), 2,
        _pmf_pins('g', None, ['9/41', '650/2829', '700/2691', '34/117']),
        "log-convex pmf loses log-convexity under a large tilt",
    ),
    _ageing(
        'dlr-alpha04', AgeingProperty.DLR, _BELOW,
        make_pmf(['0.26', '0.18', '0.24', '0.32']), '2/5',
        _pmf_pins('g', None, ['65/139', '2250/11537', '1500/8383', '16/101']),
        "log-convex pmf loses log-convexity under a small tilt",
    ),
    _ageing(
        'ifr-salvia-alpha02', AgeingProperty.IFR, _BELOW, _SALVIA, '1/5',
        [Pin(f"r_Y({k})", _at('hazard', k), v)
         for k, v in ((2, '0.8064516'), (3, '0.7870635'), (4, '0.8110739'))],
        "increasing hazard of a Salvia-Bollinger curve dips after a small tilt",
        window='2..4',
    ),
    _ageing(
        'dfr-weibull-alpha5', AgeingProperty.DFR, _ABOVE, _WEIBULL, 5,
        [Pin(f"r_Y({k})", _at('hazard', k), v)
         for k, v in ((7, '0.2759209'), (10, '0.2834942'), (13, '0.2793229'))],
        "decreasing hazard of a discrete Weibull curve rises then falls after a large tilt",
        window='7..13',
    ),
    _ageing(
        'nbu-sdist-alpha02', AgeingProperty.NBU, _BELOW, _S_NBU, '1/5',
        [Pin("Ḡ(5)", _at('survival', 5), '0.075737'),
         Pin("Ḡ(2)Ḡ(3)", lambda x, y: y.survival(2) * y.survival(3), '0.063494')],
        "new-better-than-used S-distribution fails at (2, 3) after a small tilt",
        window='1..5',
    ),
    _ageing(
        'nwu-weibull-alpha5', AgeingProperty.NWU, _ABOVE, _WEIBULL, 5,
        [Pin("Ḡ(5)", _at('survival', 5), '0.3062174'),
         Pin("Ḡ(2)Ḡ(3)", lambda x, y: y.survival(2) * y.survival(3), '0.3657684')],
        "new-worse-than-used Weibull curve fails from (1, 1) on after a large tilt",
        window='1..5',
    ),
    _ageing(
        'ifra-sdist-alpha02', AgeingProperty.IFRA, _BELOW, _S_IFRA, '1/5',
        [Pin(f"Ḡ({k})^(1/{k})", _root(k), v)
         for k, v in ((1, '0.44444'), (2, '0.438901'), (4, '0.457806'))],
        "geometric-average survival of an S-distribution stops decreasing after a small tilt",
        window='1..4',
    ),
    _ageing(
        'dfra-pareto-alpha6', AgeingProperty.DFRA, _ABOVE, _PARETO, 6,
        [Pin(f"Ḡ({k})^(1/{k})", _root(k), v)
         for k, v in ((1, '0.7164179'), (4, '0.658037'), (8, '0.68081'))],
        "discrete Pareto curve is neither DFRA nor IFRA after a large tilt",
        window='1..8',
    ),
    _ageing(
        'drhr-alpha4', AgeingProperty.DRHR, _ABOVE,
        make_pmf(['0', '4/25', '6/25', '4/15', '1/3']), 4,
        [Pin(f"F({k})", _at('cdf', k, tilted=False), F(v))
         for k, v in ((2, '4/25'), (3, '2/5'), (4, '2/3'))]
        + [Pin(f"G({k})", _at('cdf', k), F(v))
           for k, v in ((1, '0'), (2, '1/22'), (3, '1/7'), (4, '1/3'), (5, '1'))],
        "log-concave cdf loses log-concavity under a large tilt",
    ),
    _ageing(
        'nbafr-alpha04', AgeingProperty.NBAFR, _BELOW,
        make_pmf(['1/5', '12/65', '3/26', '1/2']), '2/5',
        [Pin(f"F̄({k})", _at('survival', k, tilted=False), F(v))
         for k, v in ((1, '4/5'), (2, '8/13'), (3, '1/2'), (4, '0'))]
        + [Pin(f"Ḡ({k})", _at('survival', k), F(v))
           for k, v in ((1, '8/13'), (2, '16/41'), (3, '2/7'), (4, '0'))],
        "survival drops below the first-step geometric bound after a small tilt",
    ),
    _order(
        'hr-alpha02', OrderRelation.HR, _BELOW, _HR_X1, _HR_X2, '1/5',
        [Pin(f"F̄{i + 1}({k})", _at('survival', k, i, tilted=False), F(v))
         for i, values in enumerate((('1/2', '2/5'), ('5/8', '11/20')))
         for k, v in zip((2, 3), values)]
        + [Pin(f"Ḡ{i + 1}({k})", _at('survival', k, i), F(v))
           for i, values in enumerate((('1/6', '2/17'), ('1/4', '11/56')))
           for k, v in zip((2, 3), values)],
        "printed survivals reproduce, but the tilted pair stays hazard-rate ordered",
        expect_violation=False,
    ),
    _order(
        'rhr-alpha4', OrderRelation.RHR, _ABOVE, _RHR_X1, _RHR_X2, 4,
        [Pin(f"G{i + 1}({k})", _at('cdf', k, i), F(v))
         for i, values in enumerate((('5/81', '1/5', '3/7'), ('1/21', '5/33', '1/3')))
         for k, v in zip((2, 3, 4), values)],
        "reversed-hazard order breaks at 3 after a large tilt",
    ),
    _order(
        'lr-alpha5', OrderRelation.LR, _ABOVE, _LR5_X1, _LR5_X2, 5,
        _pmf_pins('g1', 0, ['0', '3/38', '50/209', '25/77', '5/14'])
        + _pmf_pins('g2', 1, ['0', '1/21', '5/42', '5/33', '15/22']),
        "likelihood-ratio order breaks at (2, 3) after a large tilt",
    ),
    _order(
        'lr-alpha02', OrderRelation.LR, _BELOW, _LR02_X1, _LR02_X2, '1/5',
        _pmf_pins('g1', 0, ['0', '15/22', '75/374', '25/357', '1/21'])
        + _pmf_pins('g2', 1, ['0', '5/9', '5/18', '10/99', '13/198']),
        "likelihood-ratio order breaks at (3, 5) after a small tilt",
    ),
)


_BY_ID = {case.id: case for case in CASES}


def get_case(case_id: str) -> Case:
    try:
        return _BY_ID[case_id]
    except KeyError:
        raise UnknownCase(f"no case {case_id!r}; known: {', '.join(_BY_ID)}") from None


def reproduce_case(case_id: str) -> PreservationCertificate | ConfirmedPreserved:
    '''Recompute a case and compare every pinned value.

    Returns the certificate (or, for a case not expected to violate its
    claim, the confirmation). Raises :exc:`~..errors.UnknownCase` or
    :exc:`~..errors.FixtureMismatch`.

    '''
    case = get_case(case_id)
    outcome = check_preservation(case.claim, case.instance, case.alpha, source='published')

    x, y = case.baseline(), case.tilted()
    mismatches = [m for pin in case.pins if (m := pin.mismatch(x, y)) is not None]
    violated = isinstance(outcome, PreservationCertificate)
    if violated != case.expect_violation:
        mismatches.append(f"expected {'a' if case.expect_violation else 'no'} violation, got {outcome.after}")
    if mismatches:
        raise FixtureMismatch(case.id, mismatches)

    _log.debug(f"{case.id}: {len(case.pins)} values reproduced")
    return outcome


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    outcome: PreservationCertificate | ConfirmedPreserved | None = None
    error: FixtureMismatch | None = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return self.error is None


def reproduce_all() -> list[CaseResult]:
    results = []
    for case in CASES:
        try:
            results.append(CaseResult(case.id, reproduce_case(case.id)))
        except FixtureMismatch as e:
            _log.error(str(e))
            results.append(CaseResult(case.id, error=e))
    return results


def pool_for(claim: PreservationClaim) -> tuple[tuple[Instance, TiltParameter], ...]:
    '''Registered instances and tilts addressing ``claim``'s cell.'''
    return tuple(
        (case.instance, case.alpha)
        for case in CASES
        if (case.claim.subject, case.claim.regime) == (claim.subject, claim.regime)
    )


import unittest

from ..ageing import evaluate_at
from .claims import parse_claim


class TestRegistry(unittest.TestCase):
    def test_every_case_reproduces(self):
        results = reproduce_all()
        self.assertEqual(len(results), 16)
        for result in results:
            self.assertTrue(result.passed, str(result.error))

    def test_certificates_replay(self):
        for case in CASES:
            outcome = reproduce_case(case.id)
            self.assertEqual(isinstance(outcome, PreservationCertificate), case.expect_violation, case.id)
            if case.expect_violation:
                self.assertTrue(outcome.replay(), case.id)
                self.assertEqual(outcome.source, 'published')

    def test_witnesses(self):
        self.assertEqual(reproduce_case('ilr-alpha5').after.witness, 3)
        self.assertEqual(reproduce_case('lr-alpha5').after.witness, (2, 3))
        self.assertEqual(reproduce_case('lr-alpha02').after.witness, (3, 5))
        rhr = reproduce_case('rhr-alpha4').after
        self.assertEqual((rhr.witness, rhr.lhs, rhr.rhs), (3, F(56, 81), F(24, 35)))
        nwu = reproduce_case('nwu-weibull-alpha5').after
        self.assertEqual(nwu.witness, (1, 1))
        self.assertLess(nwu.lhs, nwu.rhs)

    def test_published_nwu_pair_also_fails(self):
        y = get_case('nwu-weibull-alpha5').tilted()
        lhs, rhs = evaluate_at('NWU', y, (2, 3))
        self.assertAlmostEqual(lhs, 0.3062174, places=6)
        self.assertAlmostEqual(rhs, 0.3657684, places=6)
        self.assertLess(lhs, rhs)

    def test_unknown_case(self):
        with self.assertRaises(UnknownCase):
            reproduce_case('ifr-alpha9')
        with self.assertRaises(LookupError):
            get_case('')

    def test_tampered_pin_is_reported(self):
        case = get_case('dlr-alpha04')
        pin = Pin('g(2)', case.pins[1].compute, F(2250, 11538))
        self.assertIsNotNone(pin.mismatch(case.baseline(), case.tilted()))
        decimal = Pin('r', lambda x, y: 0.7870641, '0.7870635')
        self.assertIsNotNone(decimal.mismatch(None, None))

    def test_decimal_tolerance(self):
        self.assertEqual(decimal_tolerance('0.7870635'), 5e-7)
        self.assertAlmostEqual(decimal_tolerance('0.68081'), 1e-5)
        self.assertAlmostEqual(decimal_tolerance('0.438901'), 1e-6)

    def test_pool(self):
        self.assertEqual(len(pool_for(parse_claim('LR>1'))), 1)
        self.assertEqual(len(pool_for(parse_claim('IFR>1'))), 0)
        instance, alpha = pool_for(parse_claim('DRHR>1'))[0]
        self.assertEqual(alpha.alpha, 4)
