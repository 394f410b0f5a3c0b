'''Preservation claims: one per cell of the two preservation tables.'''

from __future__ import annotations

from dataclasses import dataclass
import enum
import logging

from ..ageing import AgeingProperty
from ..orders import OrderRelation
from ..tilt import TiltParameter


__all__ = (
    'AlphaRegime',
    'Expectation',
    'PreservationClaim',
    'Subject',
    'TABLE_CLAIMS',
    'parse_claim',
    'find_claim',
)


_log = logging.getLogger(__name__)


Subject = AgeingProperty | OrderRelation


class AlphaRegime(enum.Enum):
    BELOW_ONE = '<1'
    ABOVE_ONE = '>1'

    def admits(self, alpha) -> bool:
        '''Whether ``alpha`` belongs to this regime; the identity tilt belongs
        to both.'''
        a = TiltParameter.convert_from(alpha).alpha
        return a <= 1 if self is AlphaRegime.BELOW_ONE else a >= 1

    def __str__(self) -> str:
        return self.value


class Expectation(enum.Enum):
    PRESERVED = 'preserved'
    NOT_PRESERVED = 'not preserved'
    UNSTATED = 'unstated'

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PreservationClaim:
    '''"If ``X`` has ``subject`` then so does its tilt, for ``α`` in
    ``regime``", together with what is expected of that statement.

    For an order the statement is about a pair: ``X1 <= X2`` implies
    ``Y1 <= Y2``.

    '''

    subject: Subject
    regime: AlphaRegime
    expected: Expectation

    @property
    def is_order(self) -> bool:
        return isinstance(self.subject, OrderRelation)

    @property
    def table(self) -> str:
        return 'orders' if self.is_order else 'ageing'

    @property
    def key(self) -> int:
        '''Stable index of the claim's cell, used to derive random
        streams.'''
        return next(
            i for i, c in enumerate(TABLE_CLAIMS)
            if (c.subject, c.regime) == (self.subject, self.regime)
        )

    @property
    def searchable(self) -> bool:
        return self.expected is not Expectation.PRESERVED

    def with_expected(self, expected: Expectation) -> PreservationClaim:
        return PreservationClaim(self.subject, self.regime, Expectation(expected))

    def __str__(self) -> str:
        return f"{self.subject}{self.regime}"


def _cells(subject: Subject, below: Expectation, above: Expectation) -> list[PreservationClaim]:
    return [
        PreservationClaim(subject, AlphaRegime.BELOW_ONE, below),
        PreservationClaim(subject, AlphaRegime.ABOVE_ONE, above),
    ]


_P, _N, _U = Expectation.PRESERVED, Expectation.NOT_PRESERVED, Expectation.UNSTATED

TABLE_CLAIMS: tuple[PreservationClaim, ...] = tuple(
    _cells(AgeingProperty.ILR, _N, _N)
    + _cells(AgeingProperty.DLR, _N, _N)
    + _cells(AgeingProperty.IFR, _N, _P)
    + _cells(AgeingProperty.DFR, _P, _N)
    + _cells(AgeingProperty.NBU, _N, _P)
    + _cells(AgeingProperty.NWU, _P, _N)
    + _cells(AgeingProperty.IFRA, _N, _P)
    + _cells(AgeingProperty.DFRA, _P, _N)
    + _cells(AgeingProperty.DRHR, _P, _N)
    + _cells(AgeingProperty.NBAFR, _N, _U)
    + _cells(OrderRelation.ST, _P, _P)
    + _cells(OrderRelation.HR, _N, _P)
    + _cells(OrderRelation.RHR, _P, _N)
    + _cells(OrderRelation.LR, _N, _N)
)
'''Every cell of the ageing-class table followed by every cell of the
stochastic-order table, row by row.'''


def _subject(text: str) -> Subject:
    try:
        return AgeingProperty.convert_from(text)
    except KeyError:
        pass
    try:
        return OrderRelation.convert_from(text)
    except KeyError:
        raise ValueError(f"unknown property or order {text!r}") from None


def find_claim(subject, regime) -> PreservationClaim:
    '''The table claim for ``subject`` in ``regime``.'''
    if isinstance(subject, str):
        subject = _subject(subject)
    regime = AlphaRegime(regime)
    for claim in TABLE_CLAIMS:
        if (claim.subject, claim.regime) == (subject, regime):
            return claim
    raise ValueError(f"no table cell for {subject}{regime}")


def parse_claim(text: str) -> PreservationClaim:
    '''Parse ``"IFR<1"``, ``"lr>1"`` and the like. ``α`` and spaces are
    ignored, and ``<=1``/``>=1`` are read as ``<1``/``>1``.'''
    cleaned = text.replace('α', '').replace(' ', '').replace('=', '')
    for regime in AlphaRegime:
        if cleaned.endswith(regime.value):
            return find_claim(_subject(cleaned[:-len(regime.value)]), regime)
    raise ValueError(f"claim {text!r} must look like TAG<1 or TAG>1")


import unittest


class TestClaims(unittest.TestCase):
    def test_table_shape(self):
        self.assertEqual(len(TABLE_CLAIMS), 28)
        self.assertEqual(sum(not c.is_order for c in TABLE_CLAIMS), 20)
        self.assertEqual(
            [str(c) for c in TABLE_CLAIMS if c.expected is Expectation.UNSTATED],
            ['NBAFR>1'],
        )
        self.assertEqual(sum(c.expected is Expectation.NOT_PRESERVED for c in TABLE_CLAIMS), 16)
        self.assertEqual(len({(c.subject, c.regime) for c in TABLE_CLAIMS}), 28)

    def test_known_cells(self):
        self.assertEqual(parse_claim('IFR>1').expected, Expectation.PRESERVED)
        self.assertEqual(parse_claim('ifr<1').expected, Expectation.NOT_PRESERVED)
        self.assertEqual(parse_claim('ST<1').expected, Expectation.PRESERVED)
        self.assertEqual(parse_claim('HR α>=1').expected, Expectation.PRESERVED)
        self.assertEqual(parse_claim('RHR>1').expected, Expectation.NOT_PRESERVED)

    def test_parse_errors(self):
        for bad in ('IFR', 'XYZ<1', 'IFR<2'):
            with self.assertRaises(ValueError):
                parse_claim(bad)

    def test_regime_admits(self):
        self.assertTrue(AlphaRegime.BELOW_ONE.admits('1/5'))
        self.assertFalse(AlphaRegime.BELOW_ONE.admits(2))
        self.assertTrue(AlphaRegime.ABOVE_ONE.admits(1))

    def test_keys_are_stable(self):
        for i, claim in enumerate(TABLE_CLAIMS):
            self.assertEqual(claim.key, i)
            self.assertEqual(claim.with_expected(Expectation.PRESERVED).key, i)
