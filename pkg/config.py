'''Search configuration.

Configuration objects are frozen :obj:`~dataclasses.dataclass` es. Each field
may carry a ``cast`` in its metadata, applied to every value the field
receives (defaults included), so string values from the command line or the
environment can be passed straight to :meth:`SearchBudget.updated`.

.. code-block:: python

    budget = SearchBudget().updated(**parse_overrides("max_support=5,seed=7"))

'''

from __future__ import annotations

from collections.abc import Iterable, Iterator
import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
import logging
import os

from .dist import parse_fraction


__all__ = (
    'SearchBudget',
    'parse_overrides',
    'parse_alphas',
    'default_seed',
    'SEED_ENV',
)


_log = logging.getLogger(__name__)


SEED_ENV: str = 'MO_SEED'
'''Environment variable holding the default seed.'''


def default_seed() -> int:
    '''Seed from :data:`SEED_ENV`, or ``1``.'''
    value = os.environ.get(SEED_ENV)
    if value is None:
        return 1
    try:
        return int(value)
    except ValueError as e:
        raise ValueError(f"{SEED_ENV}={value!r} is not an integer") from e


def parse_alphas(value) -> tuple[Fraction, ...]:
    '''Tilt candidates from an iterable or a ``:``-separated string such as
    ``"1/5:2:4"``.'''
    if isinstance(value, str):
        value = [item for item in value.split(':') if item.strip()]
    return tuple(parse_fraction(item) for item in value)


def _typed(default=dataclasses.MISSING, cast=None, **kwargs):
    return field(default=default, metadata={'cast': cast}, **kwargs)


@dataclass(frozen=True)
class SearchBudget:
    '''Limits and seed of a counterexample search or a preservation table.'''

    max_support: int = _typed(6, int)
    '''Largest support end of a randomly drawn pmf.'''

    max_denominator: int = _typed(20, int)
    '''Largest integer weight before normalisation.'''

    alpha_candidates: tuple[Fraction, ...] = _typed(
        (Fraction(1, 5), Fraction(2, 5), Fraction(4, 5),
         Fraction(2), Fraction(4), Fraction(6)),
        parse_alphas,
    )
    '''Tilt parameters tried; each claim uses those in its regime.'''

    trial_limit: int = _typed(20_000, int)
    '''Random baselines drawn before giving up.'''

    time_limit: float = _typed(60.0, float)
    '''Seconds before giving up.'''

    seed: int = _typed(cast=int, default_factory=default_seed)

    exhaustive_total: int = _typed(8, int)
    '''Largest common denominator enumerated exhaustively for one pmf.'''

    exhaustive_pair_total: int = _typed(4, int)
    '''Largest common denominator enumerated exhaustively for each pmf of a
    pair.'''

    parametric_horizon: int = _typed(40, int)
    '''Largest window end for parametric baselines.'''

    def __post_init__(self):
        for f in dataclasses.fields(self):
            cast = f.metadata.get('cast')
            if cast is not None:
                object.__setattr__(self, f.name, cast(getattr(self, f.name)))

        for name in self.keys():
            if name in ('seed', 'alpha_candidates'):
                continue
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if not self.alpha_candidates or any(a <= 0 for a in self.alpha_candidates):
            raise ValueError(f"alpha_candidates must be positive, got {self.alpha_candidates}")

    def updated(self, **kwargs) -> SearchBudget:
        '''Copy with some fields replaced; unknown names raise
        :exc:`AttributeError`.'''
        for name in kwargs:
            if name not in self.keys():
                raise AttributeError(
                    f"{type(self).__name__!r} object has no config field {name!r}"
                )
        return dataclasses.replace(self, **kwargs)

    def to_dict(self) -> dict:
        '''JSON-ready mapping of the fields.'''
        result = dataclasses.asdict(self)
        result['alpha_candidates'] = [str(a) for a in self.alpha_candidates]
        return result

    @classmethod
    def keys(cls) -> tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(cls))

    @classmethod
    def defaults(cls) -> Iterator[tuple[str, object]]:
        '''Name-default pairs; the seed default reflects the environment.'''
        for f in dataclasses.fields(cls):
            if f.default_factory is not dataclasses.MISSING:
                yield f.name, f.default_factory()
            else:
                yield f.name, f.default


def parse_overrides(text: str | Iterable[str]) -> dict[str, str]:
    '''Split ``"k=v,k=v"`` (or several such strings) into a dict.'''
    if isinstance(text, str):
        text = [text]
    result = {}
    for chunk in text:
        for item in chunk.split(','):
            if not item.strip():
                continue
            name, sep, value = item.partition('=')
            if not sep:
                raise ValueError(f"budget override {item!r} is not of the form key=value")
            result[name.strip()] = value.strip()
    return result


import unittest
from unittest import mock


class TestSearchBudget(unittest.TestCase):
    def test_defaults(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            budget = SearchBudget()
        self.assertEqual(budget.max_support, 6)
        self.assertEqual(budget.seed, 1)
        self.assertEqual(budget.alpha_candidates[0], Fraction(1, 5))
        self.assertEqual(dict(SearchBudget.defaults())['trial_limit'], 20_000)

    def test_seed_from_environment(self):
        with mock.patch.dict(os.environ, {SEED_ENV: '99'}):
            self.assertEqual(SearchBudget().seed, 99)

    def test_updated_casts_strings(self):
        budget = SearchBudget(seed=3).updated(**parse_overrides("max_support=5, time_limit=2.5"))
        self.assertEqual(budget.max_support, 5)
        self.assertEqual(budget.time_limit, 2.5)
        self.assertEqual(budget.seed, 3)
        budget = budget.updated(alpha_candidates='2:5')
        self.assertEqual(budget.alpha_candidates, (Fraction(2), Fraction(5)))

    def test_unknown_and_invalid_fields(self):
        with self.assertRaises(AttributeError):
            SearchBudget(seed=1).updated(colour='blue')
        with self.assertRaises(ValueError):
            SearchBudget(seed=1).updated(trial_limit='0')
        with self.assertRaises(ValueError):
            SearchBudget(seed=1, alpha_candidates=())

    def test_to_dict(self):
        d = SearchBudget(seed=5).to_dict()
        self.assertEqual(d['seed'], 5)
        self.assertEqual(d['alpha_candidates'], ['1/5', '2/5', '4/5', '2', '4', '6'])
        self.assertEqual(tuple(d), SearchBudget.keys())

    def test_parse_overrides(self):
        self.assertEqual(parse_overrides(['a=1', 'b=x,c=2']), {'a': '1', 'b': 'x', 'c': '2'})
        with self.assertRaises(ValueError):
            parse_overrides('a')
