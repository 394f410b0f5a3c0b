'''Random and exhaustive baselines.

All randomness comes from a :class:`numpy.random.Generator` passed in by the
caller; all finite weights are exact fractions.

Constructive generators build a pmf that has a property by construction rather
than by rejection:

* ILR/DLR: monotone ratios ``f(k+1)/f(k)``.
* IFR: sorted hazards, with ``r(n) = 1``.
* DRHR: sorted ratios ``F(k-1)/F(k)``.
* ST pairs: the second survival is the pointwise maximum of two.
* HR/RHR pairs: hazards (reversed hazards) of the first variable pushed
  towards 1 from those of the second, keeping some ties.
* LR pairs: the second pmf is the first reweighted by a nondecreasing
  sequence.

'''

from __future__ import annotations

from collections.abc import Iterator
from fractions import Fraction
import itertools
import logging

import numpy as np

from ..ageing import AgeingProperty, Window
from ..dist import Family, FinitePMF, ParametricSurvival, make_pmf


__all__ = (
    'random_pmf',
    'ilr_pmf',
    'dlr_pmf',
    'ifr_pmf',
    'drhr_pmf',
    'pmf_from_survivals',
    'random_curve',
    'st_pair',
    'hr_pair',
    'rhr_pair',
    'lr_pair',
    'exhaustive_pmfs',
    'PARAMETRIC_GRID',
    'CURVE_ONLY',
)


_log = logging.getLogger(__name__)


CURVE_ONLY: frozenset[AgeingProperty] = frozenset({
    AgeingProperty.DFR, AgeingProperty.DFRA, AgeingProperty.NWU,
})
'''Properties no finite pmf with ``n >= 2`` has over its full support.'''


def _int(rng: np.random.Generator, lo: int, hi: int) -> int:
    '''Uniform integer in ``lo..hi`` inclusive.'''
    return int(rng.integers(lo, hi + 1))


def _normalise(raw: list) -> FinitePMF:
    total = sum(raw)
    return make_pmf([Fraction(w) / total for w in raw])


def random_pmf(rng: np.random.Generator, max_support: int, max_denominator: int,
               zeros: bool = False) -> FinitePMF:
    '''``n`` uniform in ``2..max_support``, integer weights in
    ``1..max_denominator`` (``0..`` with ``zeros``), normalised exactly.'''
    n = _int(rng, 2, max(2, max_support))
    raw = [_int(rng, 0 if zeros else 1, max_denominator) for _ in range(n)]
    raw[-1] = max(raw[-1], 1)
    return _normalise(raw)


def _ratio(rng: np.random.Generator, max_denominator: int) -> Fraction:
    return Fraction(_int(rng, 1, max_denominator), _int(rng, 1, max_denominator))


def _from_ratios(ratios: list[Fraction]) -> FinitePMF:
    raw = [Fraction(1)]
    for rho in ratios:
        raw.append(raw[-1] * rho)
    return _normalise(raw)


def ilr_pmf(rng: np.random.Generator, max_support: int, max_denominator: int) -> FinitePMF:
    n = _int(rng, 2, max(2, max_support))
    ratios = sorted((_ratio(rng, max_denominator) for _ in range(n - 1)), reverse=True)
    return _from_ratios(ratios)


def dlr_pmf(rng: np.random.Generator, max_support: int, max_denominator: int) -> FinitePMF:
    n = _int(rng, 2, max(2, max_support))
    ratios = sorted(_ratio(rng, max_denominator) for _ in range(n - 1))
    return _from_ratios(ratios)


def _pmf_from_hazards(hazards: list[Fraction]) -> FinitePMF:
    weights, at_risk = [], Fraction(1)
    for r in hazards:
        weights.append(at_risk * r)
        at_risk -= weights[-1]
    return make_pmf(weights)


def ifr_pmf(rng: np.random.Generator, max_support: int, max_denominator: int) -> FinitePMF:
    n = _int(rng, 2, max(2, max_support))
    hazards = sorted(Fraction(_int(rng, 0, max_denominator - 1), max_denominator) for _ in range(n - 1))
    return _pmf_from_hazards(hazards + [Fraction(1)])


def _pmf_from_cdf_ratios(ratios: list[Fraction]) -> FinitePMF:
    '''``ratios[i]`` is ``F(k-1)/F(k)`` for ``k = i+2``; ``F(n) = 1``.'''
    cdf = [Fraction(1)]
    for q in reversed(ratios):
        cdf.append(cdf[-1] * q)
    cdf = [Fraction(0)] + cdf[::-1]
    return make_pmf([b - a for a, b in zip(cdf, cdf[1:])])


def drhr_pmf(rng: np.random.Generator, max_support: int, max_denominator: int) -> FinitePMF:
    n = _int(rng, 2, max(2, max_support))
    denominator = max(2, max_denominator)
    ratios = sorted(Fraction(_int(rng, 1, denominator - 1), denominator) for _ in range(n - 1))
    return _pmf_from_cdf_ratios(ratios)


def pmf_from_survivals(survivals: list[Fraction]) -> FinitePMF:
    '''pmf with ``F̄(k) = survivals[k]``; ``survivals[0]`` must be 1.'''
    return make_pmf([a - b for a, b in zip(survivals, survivals[1:])] + [survivals[-1]])


def _survivals(d: FinitePMF, length: int) -> list[Fraction]:
    return [d.survival(k) for k in range(length)]


def st_pair(rng: np.random.Generator, max_support: int, max_denominator: int) -> tuple[FinitePMF, FinitePMF]:
    d1 = random_pmf(rng, max_support, max_denominator, zeros=True)
    other = random_pmf(rng, max_support, max_denominator, zeros=True)
    length = max(d1.n, other.n) + 1
    upper = [max(a, b) for a, b in zip(_survivals(d1, length), _survivals(other, length))]
    return d1, pmf_from_survivals(upper)


def _push_up(rng: np.random.Generator, values: list[Fraction]) -> list[Fraction]:
    '''Each value moved a random fraction of the way to 1, or kept as a
    tie.'''
    result = []
    for v in values:
        if rng.random() < 0.5:
            result.append(v)
        else:
            result.append(v + Fraction(_int(rng, 0, 4), 4) * (1 - v))
    return result


def hr_pair(rng: np.random.Generator, max_support: int, max_denominator: int) -> tuple[FinitePMF, FinitePMF]:
    '''``X1 <=_hr X2``: ``r1 >= r2`` pointwise and ``n1 <= n2``.'''
    n2 = _int(rng, 2, max(2, max_support))
    r2 = [Fraction(_int(rng, 0, max_denominator - 1), max_denominator) for _ in range(n2 - 1)]
    n1 = _int(rng, 1, n2)
    r1 = _push_up(rng, r2[:n1 - 1])
    return _pmf_from_hazards(r1 + [Fraction(1)]), _pmf_from_hazards(r2 + [Fraction(1)])


def rhr_pair(rng: np.random.Generator, max_support: int, max_denominator: int) -> tuple[FinitePMF, FinitePMF]:
    '''``X1 <=_rhr X2``: ``F1(k-1)/F1(k) >= F2(k-1)/F2(k)`` on a common
    grid.'''
    n = _int(rng, 2, max(2, max_support))
    q2 = [Fraction(_int(rng, 0, max_denominator - 1), max_denominator) for _ in range(n - 1)]
    q1 = _push_up(rng, q2)
    return _pmf_from_cdf_ratios(q1), _pmf_from_cdf_ratios(q2)


def lr_pair(rng: np.random.Generator, max_support: int, max_denominator: int) -> tuple[FinitePMF, FinitePMF]:
    '''``X1 <=_lr X2``: ``f2`` proportional to ``f1`` times a nondecreasing
    sequence.'''
    d1 = random_pmf(rng, max_support, max_denominator, zeros=True)
    while True:
        weights = sorted(_int(rng, 0, max_denominator) for _ in range(d1.n))
        raw = [w * f for w, f in zip(weights, d1.weights)]
        if sum(raw) > 0:
            return d1, _normalise(raw)


_RANDOM_PARAMS = {
    Family.SALVIA_BOLLINGER: lambda rng: {'c': rng.uniform(0.05, 1.0)},
    Family.TYPE_I_DISCRETE_WEIBULL: lambda rng: {'q': rng.uniform(0.05, 0.95), 'beta': rng.uniform(0.2, 2.5)},
    Family.DISCRETE_S: lambda rng: {'p': rng.uniform(0.05, 1.0), 'a': rng.uniform(0.05, 0.95)},
    Family.DISCRETE_PARETO: lambda rng: {'c': rng.uniform(0.2, 5.0), 'd': rng.uniform(0.2, 5.0)},
}


def random_curve(rng: np.random.Generator, max_horizon: int,
                 families=tuple(Family)) -> tuple[ParametricSurvival, Window]:
    '''A curve from ``families`` with rounded random parameters, and a
    random window of at least four indices inside ``1..max_horizon``.'''
    family = families[_int(rng, 0, len(families) - 1)]
    params = {name: round(float(v), 3) for name, v in _RANDOM_PARAMS[family](rng).items()}
    hi = _int(rng, min(5, max_horizon), max_horizon)
    lo = _int(rng, 1, max(1, min(5, hi - 3)))
    return ParametricSurvival(family, params, hi), Window(lo, hi)


PARAMETRIC_GRID: tuple[tuple[Family, dict], ...] = tuple(
    [(Family.TYPE_I_DISCRETE_WEIBULL, {'q': q, 'beta': b}) for q in (0.3, 0.5, 0.7) for b in (0.5, 0.8)]
    + [(Family.DISCRETE_PARETO, {'c': c, 'd': d}) for c in (1.0, 3.0) for d in (1.0, 2.0)]
    + [(Family.SALVIA_BOLLINGER, {'c': c}) for c in (0.5, 0.8)]
    + [(Family.DISCRETE_S, {'p': p, 'a': 0.6}) for p in (0.3, 0.5)]
)
'''Deterministic curves tried before random ones.'''


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    '''Nonnegative ``parts``-tuples summing to ``total`` with a positive
    last entry, in lexicographic order.'''
    for cuts in itertools.combinations_with_replacement(range(total + 1), parts - 1):
        values = (cuts[0],) + tuple(b - a for a, b in zip(cuts, cuts[1:])) if cuts else ()
        last = total - sum(values)
        if last > 0:
            yield values + (last,)


def exhaustive_pmfs(max_support: int, max_total: int) -> Iterator[FinitePMF]:
    '''Every pmf on at most ``max_support`` points whose weights are
    multiples of ``1/T`` for some ``T <= max_total``, each once, ordered by
    ``T``, then support size, then weights.'''
    seen = set()
    for total in range(1, max_total + 1):
        for parts in range(1, max_support + 1):
            for raw in _compositions(total, parts):
                d = FinitePMF(tuple(Fraction(w, total) for w in raw))
                if d not in seen:
                    seen.add(d)
                    yield d


import unittest

from ..ageing import check_ageing, classify_all
from ..orders import check_order


class TestGenerators(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(5)

    def test_constructive_pmfs_have_their_property(self):
        makers = {
            AgeingProperty.ILR: ilr_pmf,
            AgeingProperty.DLR: dlr_pmf,
            AgeingProperty.IFR: ifr_pmf,
            AgeingProperty.DRHR: drhr_pmf,
        }
        for prop, maker in makers.items():
            for _ in range(300):
                d = maker(self.rng, 6, 20)
                self.assertTrue(check_ageing(prop, d).holds, f"{prop}: {d}")

    def test_constructive_pairs_are_ordered(self):
        makers = {'st': st_pair, 'hr': hr_pair, 'rhr': rhr_pair, 'lr': lr_pair}
        for rel, maker in makers.items():
            for _ in range(300):
                d1, d2 = maker(self.rng, 6, 8)
                self.assertTrue(check_order(rel, d1, d2).holds, f"{rel}: {d1} {d2}")

    def test_random_pmf(self):
        for _ in range(200):
            d = random_pmf(self.rng, 5, 20)
            self.assertTrue(2 <= d.n <= 5)
            self.assertTrue(all(w > 0 for w in d.weights))

    def test_random_curve_window(self):
        for _ in range(200):
            curve, window = random_curve(self.rng, 40)
            self.assertTrue(1 <= window.lo < window.hi <= curve.horizon <= 40)
            classify_all(curve, window)

    def test_compositions(self):
        self.assertEqual(list(_compositions(2, 2)), [(0, 2), (1, 1)])
        self.assertEqual(list(_compositions(3, 1)), [(3,)])
        self.assertEqual(len(list(_compositions(4, 6))), 56)

    def test_exhaustive_pmfs(self):
        F = Fraction
        pmfs = list(exhaustive_pmfs(3, 2))
        self.assertEqual([d.weights for d in pmfs], [
            (F(1),), (F(0), F(1)), (F(0), F(0), F(1)),
            (F(1, 2), F(1, 2)), (F(0), F(1, 2), F(1, 2)), (F(1, 2), F(0), F(1, 2)),
        ])
        self.assertIn(make_pmf(['1/2', '1/4', '1/4']), set(exhaustive_pmfs(3, 4)))
