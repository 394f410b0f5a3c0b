'''JSON interchange format for distributions.

A finite pmf::

    {"support_start": 1, "weights": ["0", "1/10", "1/4", "7/20", "3/10"]}

``support_start`` (default 1) is where the first listed weight sits; earlier
indices get weight zero. Weights are exact ``"p/q"`` strings (integers and
decimal strings such as ``"0.35"`` are read exactly as well).

A parametric curve, optionally tilted::

    {"family": "discrete_pareto", "params": {"c": 3, "d": 2}, "horizon": 200,
     "alpha": "6"}

Every parse error is a :exc:`~.errors.DistributionSpecError` naming the
source and the offending field.

'''

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
import json
import logging
from pathlib import Path

from .dist import (
    DEFAULT_HORIZON,
    Family,
    FinitePMF,
    ParametricSurvival,
    SurvivalCurve,
    format_fraction,
    make_pmf,
    parse_fraction,
)
from .errors import DistributionSpecError, InvalidTilt, MotiltError
from .tilt import TiltParameter, TiltedSurvival, tilt


__all__ = (
    'Distribution',
    'load_distribution',
    'dump_distribution',
    'read_distribution',
    'write_distribution',
)


_log = logging.getLogger(__name__)


Distribution = FinitePMF | SurvivalCurve


_PARAM_ALIASES = {'β': 'beta'}


def _load_finite(doc: Mapping, source: str) -> FinitePMF:
    start = doc.get('support_start', 1)
    if isinstance(start, bool) or not isinstance(start, int) or start < 1:
        raise DistributionSpecError(source, 'support_start', f"must be an integer >= 1, got {start!r}")

    weights = doc['weights']
    if not isinstance(weights, list) or not weights:
        raise DistributionSpecError(source, 'weights', "must be a non-empty list")
    parsed = []
    for i, w in enumerate(weights):
        try:
            parsed.append(parse_fraction(w))
        except (TypeError, ValueError) as e:
            raise DistributionSpecError(source, f"weights[{i}]", str(e)) from e

    try:
        return make_pmf([Fraction(0)] * (start - 1) + parsed)
    except MotiltError as e:
        raise DistributionSpecError(source, 'weights', str(e)) from e


def _load_parametric(doc: Mapping, source: str) -> SurvivalCurve:
    try:
        family = Family(doc['family'])
    except ValueError as e:
        known = ", ".join(f.value for f in Family)
        raise DistributionSpecError(source, 'family', f"unknown family {doc['family']!r} (known: {known})") from e

    params = doc.get('params', {})
    if not isinstance(params, Mapping):
        raise DistributionSpecError(source, 'params', "must be an object")
    values = {}
    for name, value in params.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DistributionSpecError(source, f"params.{name}", f"must be a number, got {value!r}")
        values[_PARAM_ALIASES.get(name, name)] = float(value)

    horizon = doc.get('horizon', DEFAULT_HORIZON)
    if isinstance(horizon, bool) or not isinstance(horizon, int):
        raise DistributionSpecError(source, 'horizon', f"must be an integer, got {horizon!r}")

    try:
        curve = ParametricSurvival(family, values, horizon)
    except MotiltError as e:
        raise DistributionSpecError(source, 'params', str(e)) from e

    if 'alpha' in doc:
        try:
            return tilt(curve, TiltParameter.convert_from(doc['alpha']))
        except InvalidTilt as e:
            raise DistributionSpecError(source, 'alpha', str(e)) from e
    return curve


def load_distribution(doc, source: str = '<input>') -> Distribution:
    '''Build a distribution from a parsed interchange document.'''
    if not isinstance(doc, Mapping):
        raise DistributionSpecError(source, '$', "expected a JSON object")
    if 'weights' in doc:
        return _load_finite(doc, source)
    if 'family' in doc:
        return _load_parametric(doc, source)
    raise DistributionSpecError(source, '$', "needs either 'weights' or 'family'")


def _alpha_text(alpha: TiltParameter) -> str:
    if alpha.exact:
        return format_fraction(alpha.alpha)
    return repr(alpha.alpha)


def dump_distribution(d: Distribution) -> dict:
    '''Interchange document for ``d``; finite pmfs always start at 1.'''
    if isinstance(d, FinitePMF):
        return {'support_start': 1, 'weights': [format_fraction(w) for w in d.weights]}

    doc = {}
    if isinstance(d, TiltedSurvival):
        doc['alpha'] = _alpha_text(d.alpha)
        d = d.base
    if not isinstance(d, ParametricSurvival):
        raise TypeError(f"cannot serialise {type(d).__name__}")
    return {
        'family': d.family.value,
        'params': dict(d.params),
        'horizon': d.horizon,
        **doc,
    }


def read_distribution(path) -> Distribution:
    '''Read an interchange file; JSON errors become
    :exc:`~.errors.DistributionSpecError`.'''
    path = Path(path)
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as e:
        raise DistributionSpecError(str(path), '$', e.strerror or str(e)) from e
    except json.JSONDecodeError as e:
        raise DistributionSpecError(str(path), f"line {e.lineno} column {e.colno}", e.msg) from e
    return load_distribution(doc, source=str(path))


def write_distribution(d: Distribution, path) -> None:
    path = Path(path)
    with open(path, 'w') as f:
        json.dump(dump_distribution(d), f, indent=2)
        f.write('\n')
    _log.info(f"wrote {path.absolute()}")


import unittest
import tempfile

from .dist import make_pmf as _make_pmf


class TestInterchange(unittest.TestCase):
    def test_finite(self):
        d = load_distribution({'support_start': 1, 'weights': ['0', '1/10', '1/4', '7/20', '3/10']})
        self.assertEqual(d, _make_pmf(['0', '1/10', '1/4', '7/20', '3/10']))
        self.assertEqual(dump_distribution(d)['weights'], ['0', '1/10', '1/4', '7/20', '3/10'])

    def test_support_start(self):
        d = load_distribution({'support_start': 2, 'weights': ['1/10', '1/4', '7/20', '3/10']})
        self.assertEqual(d.weights[0], 0)
        self.assertEqual(d.n, 5)

    def test_parametric(self):
        d = load_distribution({'family': 'discrete_pareto', 'params': {'c': 3, 'd': 2}, 'horizon': 50})
        self.assertEqual(d, ParametricSurvival.of('discrete_pareto', horizon=50, c=3, d=2))
        self.assertEqual(load_distribution(dump_distribution(d)), d)

    def test_weibull_beta_alias(self):
        d = load_distribution({'family': 'type_i_discrete_weibull', 'params': {'q': 0.5, 'β': 0.8}})
        self.assertEqual(d.params, {'q': 0.5, 'beta': 0.8})

    def test_tilted_parametric_composes(self):
        doc = {'family': 'discrete_s', 'params': {'p': 0.3, 'a': 0.6}, 'alpha': '1/5'}
        y = load_distribution(doc)
        self.assertIsInstance(y, TiltedSurvival)
        self.assertEqual(dump_distribution(y)['alpha'], '0.2')
        back = tilt(y, 5)
        self.assertNotIn('alpha', dump_distribution(back))

    def test_errors_name_the_field(self):
        cases = [
            ({'weights': ['1/2', 'x']}, 'weights[1]'),
            ({'weights': ['1/2', '1/3']}, 'weights'),
            ({'weights': []}, 'weights'),
            ({'support_start': 0, 'weights': ['1']}, 'support_start'),
            ({'family': 'cauchy'}, 'family'),
            ({'family': 'discrete_pareto', 'params': {'c': 'big', 'd': 2}}, 'params.c'),
            ({'family': 'discrete_pareto', 'params': {'c': -1, 'd': 2}}, 'params'),
            ({'family': 'discrete_pareto', 'params': {'c': 1, 'd': 2}, 'alpha': '-2'}, 'alpha'),
            ([1, 2], '$'),
        ]
        for doc, field in cases:
            with self.subTest(field=field):
                with self.assertRaises(DistributionSpecError) as cm:
                    load_distribution(doc, source='d.json')
                self.assertEqual(cm.exception.field, field)
                self.assertTrue(str(cm.exception).startswith(f"d.json: {field}: "))

    def test_file_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'd.json'
            d = _make_pmf(['9/25', '13/50', '21/100', '17/100'])
            write_distribution(d, path)
            self.assertEqual(read_distribution(path), d)

            path.write_text('{"weights": [')
            with self.assertRaises(DistributionSpecError):
                read_distribution(path)
