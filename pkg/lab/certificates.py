'''Checking one preservation claim on one instance, and the replayable
record of a violation.'''

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import json
import logging

from ..ageing import AgeingProperty, Verdict, Window, check_ageing
from ..dist import FinitePMF, SurvivalCurve, format_fraction, parse_fraction
from ..errors import HypothesisNotSatisfied, InvalidTilt
from ..interchange import dump_distribution, load_distribution
from ..orders import OrderRelation, check_order
from ..tilt import TiltParameter, tilt
from .claims import Expectation, PreservationClaim, parse_claim


__all__ = (
    'AgeingInstance',
    'OrderInstance',
    'Instance',
    'PreservationCertificate',
    'ConfirmedPreserved',
    'check_preservation',
)


_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AgeingInstance:
    baseline: FinitePMF | SurvivalCurve
    window: Window | None = None

    def describe(self) -> str:
        if self.window is None:
            return str(self.baseline)
        return f"{self.baseline} on {self.window}"


@dataclass(frozen=True)
class OrderInstance:
    first: FinitePMF
    second: FinitePMF

    def describe(self) -> str:
        return f"{self.first} vs {self.second}"


Instance = AgeingInstance | OrderInstance


def _verdicts(claim: PreservationClaim, instance: Instance, alpha: TiltParameter) -> tuple[Verdict, Verdict]:
    if claim.is_order:
        before = check_order(claim.subject, instance.first, instance.second)
        if not before.holds:
            raise HypothesisNotSatisfied(f"{instance.describe()} is not {claim.subject}-ordered: {before}")
        after = check_order(claim.subject, tilt(instance.first, alpha), tilt(instance.second, alpha))
    else:
        before = check_ageing(claim.subject, instance.baseline, instance.window)
        if not before.holds:
            raise HypothesisNotSatisfied(f"{instance.describe()} is not {claim.subject}: {before}")
        after = check_ageing(claim.subject, tilt(instance.baseline, alpha), instance.window)
    return before, after


@dataclass(frozen=True)
class ConfirmedPreserved:
    '''The claim held on this instance.'''

    claim: PreservationClaim
    instance: Instance
    alpha: TiltParameter
    before: Verdict
    after: Verdict

    def __str__(self) -> str:
        return f"{self.claim} preserved at α={self.alpha} on {self.instance.describe()}"


@dataclass(frozen=True)
class PreservationCertificate:
    '''An instance that has the claim's property before the tilt and loses it
    after.

    :meth:`to_dict` gives the JSON form; every exact value in it is a
    ``"p/q"`` string, so :meth:`from_dict` restores an equal certificate.

    '''

    claim: PreservationClaim
    instance: Instance
    alpha: TiltParameter
    before: Verdict
    after: Verdict
    seed: int | None = None
    '''Seed of the search that found it, if any.'''

    source: str = 'manual'
    '''Where the instance came from: ``search``, ``published`` or ``manual``.'''

    def replay(self) -> bool:
        '''Recompute both verdicts from scratch and compare them with the
        stored ones.'''
        try:
            before, after = _verdicts(self.claim, self.instance, self.alpha)
        except HypothesisNotSatisfied:
            _log.warning(f"replay of {self.claim}: baseline no longer satisfies the hypothesis")
            return False
        return (before, after) == (self.before, self.after)

    def to_dict(self) -> dict:
        result = {
            'claim': str(self.claim),
            'expected': self.claim.expected.value,
            'alpha': format_fraction(self.alpha.alpha) if self.alpha.exact else self.alpha.alpha,
        }
        if isinstance(self.instance, OrderInstance):
            result['pair'] = [dump_distribution(self.instance.first), dump_distribution(self.instance.second)]
        else:
            result['baseline'] = dump_distribution(self.instance.baseline)
            result['window'] = None if self.instance.window is None else str(self.instance.window)
        result['before'] = self.before.to_dict()
        result['after'] = self.after.to_dict()
        result['seed'] = self.seed
        result['source'] = self.source
        return result

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, doc: dict) -> PreservationCertificate:
        claim = parse_claim(doc['claim']).with_expected(Expectation(doc['expected']))
        if 'pair' in doc:
            first, second = (load_distribution(d, source='certificate') for d in doc['pair'])
            instance = OrderInstance(first, second)
        else:
            window = doc.get('window')
            instance = AgeingInstance(
                load_distribution(doc['baseline'], source='certificate'),
                None if window is None else Window.convert_from(window),
            )
        tag_type = OrderRelation if claim.is_order else AgeingProperty
        return cls(
            claim=claim,
            instance=instance,
            alpha=TiltParameter.convert_from(doc['alpha']),
            before=_verdict_from_dict(tag_type, doc['before']),
            after=_verdict_from_dict(tag_type, doc['after']),
            seed=doc.get('seed'),
            source=doc.get('source', 'manual'),
        )

    def __str__(self) -> str:
        return (f"{self.claim} violated at α={self.alpha} on {self.instance.describe()}: "
                f"before {self.before}; after {self.after}")


def _value_from_json(value):
    if isinstance(value, str):
        return parse_fraction(value)
    return value


def _verdict_from_dict(tag_type, doc: dict) -> Verdict:
    witness = doc['witness']
    return Verdict(
        tag=tag_type.convert_from(doc['tag']),
        holds=doc['holds'],
        witness=tuple(witness) if isinstance(witness, list) else witness,
        lhs=_value_from_json(doc['lhs']),
        rhs=_value_from_json(doc['rhs']),
    )


def check_preservation(
        claim: PreservationClaim,
        instance: Instance,
        alpha,
        seed: int | None = None,
        source: str = 'manual',
) -> PreservationCertificate | ConfirmedPreserved:
    '''Tilt ``instance`` by ``alpha`` and check whether ``claim``'s property
    survives.

    Raises :exc:`~..errors.HypothesisNotSatisfied` if the instance does not
    have the property to begin with, and :exc:`~..errors.InvalidTilt` if
    ``alpha`` is outside the claim's regime.

    '''
    alpha = TiltParameter.convert_from(alpha)
    if not claim.regime.admits(alpha):
        raise InvalidTilt(f"α={alpha} is outside the regime of {claim}")

    before, after = _verdicts(claim, instance, alpha)
    if after.holds:
        return ConfirmedPreserved(claim, instance, alpha, before, after)
    _log.debug(f"{claim} violated at α={alpha} on {instance.describe()}")
    return PreservationCertificate(claim, instance, alpha, before, after, seed, source)


import unittest

from ..dist import ParametricSurvival, make_pmf
from .claims import parse_claim as _claim


F = Fraction


class TestCheckPreservation(unittest.TestCase):
    ILR_X = make_pmf(['0', '1/10', '1/4', '7/20', '3/10'])

    def test_confirmed(self):
        outcome = check_preservation(_claim('IFR>1'), AgeingInstance(self.ILR_X), 3)
        self.assertIsInstance(outcome, ConfirmedPreserved)
        self.assertTrue(outcome.after.holds)

    def test_certificate(self):
        cert = check_preservation(_claim('ILR>1'), AgeingInstance(self.ILR_X), 5)
        self.assertIsInstance(cert, PreservationCertificate)
        self.assertEqual(cert.after.witness, 3)
        self.assertTrue(cert.replay())

    def test_parametric_certificate(self):
        x = ParametricSurvival.of('salvia_bollinger', c=0.8)
        cert = check_preservation(_claim('IFR<1'), AgeingInstance(x, Window(2, 4)), '1/5')
        self.assertIsInstance(cert, PreservationCertificate)
        self.assertLess(abs(cert.after.rhs - 0.7870635), 5e-7)
        self.assertTrue(cert.replay())

    def test_hypothesis_required(self):
        with self.assertRaises(HypothesisNotSatisfied):
            check_preservation(_claim('DLR>1'), AgeingInstance(self.ILR_X), 5)

    def test_regime_enforced(self):
        with self.assertRaises(InvalidTilt):
            check_preservation(_claim('IFR>1'), AgeingInstance(self.ILR_X), '1/2')

    def test_st_any_pair(self):
        d1, d2 = make_pmf(['1/2', '1/2']), make_pmf(['1/4', '1/4', '1/2'])
        for alpha in ('1/5', '4/5'):
            outcome = check_preservation(_claim('ST<1'), OrderInstance(d1, d2), alpha)
            self.assertIsInstance(outcome, ConfirmedPreserved)


class TestCertificateJson(unittest.TestCase):
    def test_pair_round_trip(self):
        x1 = make_pmf(['0', '5/24', '7/24', '1/4', '1/4'])
        x2 = make_pmf(['0', '1/6', '1/4', '1/4', '1/3'])
        cert = check_preservation(_claim('RHR>1'), OrderInstance(x1, x2), 4, seed=9, source='published')
        doc = json.loads(cert.to_json())
        self.assertEqual(doc['alpha'], '4')
        self.assertEqual(doc['after'], {'tag': 'RHR', 'holds': False, 'witness': 3,
                                        'lhs': '56/81', 'rhs': '24/35'})
        self.assertEqual(doc['pair'][0]['weights'], ['0', '5/24', '7/24', '1/4', '1/4'])
        self.assertEqual(PreservationCertificate.from_dict(doc), cert)

    def test_curve_round_trip(self):
        x = ParametricSurvival.of('type_i_discrete_weibull', q=0.5, beta=0.8)
        cert = check_preservation(_claim('NWU>1'), AgeingInstance(x, Window(1, 5)), 5)
        doc = json.loads(cert.to_json())
        self.assertEqual(doc['window'], '1..5')
        back = PreservationCertificate.from_dict(doc)
        self.assertEqual(back, cert)
        self.assertTrue(back.replay())
