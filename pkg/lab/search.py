'''Counterexample search for one preservation claim.

The search runs in phases and stops at the first violation:

1. the pool of known instances, if one is given;
2. every small finite pmf (or pair of pmfs) in enumeration order;
3. a fixed grid of parametric curves (ageing claims only);
4. seeded random instances until the budget runs out.

Phase 2 gets at most half of the trial limit. It is skipped for DFR, DFRA
and NWU, which no finite pmf satisfies over its whole support; random
instances for those come from the parametric families on random windows.

Given the same budget, the same claim always yields the same certificate,
unless the time limit cuts the search short.

'''

from __future__ import annotations

from collections.abc import Iterable, Iterator
import itertools
import logging

import numpy as np

from ..ageing import AgeingProperty, Window, check_ageing
from ..config import SearchBudget
from ..dist import Family, ParametricSurvival
from ..errors import ClaimNotSearchable, Exhausted, HypothesisNotSatisfied
from ..orders import OrderRelation, check_order
from ..tilt import TiltParameter
from ..timer import BudgetTimer
from . import generators as gen
from .certificates import (
    AgeingInstance,
    Instance,
    OrderInstance,
    PreservationCertificate,
    check_preservation,
)
from .claims import PreservationClaim


__all__ = (
    'search_counterexample',
    'draw_instance',
    'hypothesis_instance',
    'satisfies',
    'claim_stream',
    'regime_alphas',
)


_log = logging.getLogger(__name__)


GRID_HORIZON = 30

REJECTION_PROBE = 100
'''Draws after which a rejection sampler with acceptance below 1% gives way
to its constructive fallback.'''

CURVE_REDRAWS = 1000


def regime_alphas(claim: PreservationClaim, budget: SearchBudget) -> tuple[TiltParameter, ...]:
    return tuple(
        TiltParameter.convert_from(a) for a in budget.alpha_candidates if claim.regime.admits(a)
    )


def claim_stream(claim: PreservationClaim, budget: SearchBudget, *extra: int) -> np.random.Generator:
    '''Random stream owned by ``claim`` under ``budget.seed``.'''
    return np.random.default_rng(np.random.SeedSequence([budget.seed, claim.key, *extra]))


class _RejectionSampler:
    '''Random pmfs filtered by a property, falling back to IFR pmfs (which
    are IFRA, NBU and NBAFR) when almost nothing gets through.'''

    def __init__(self, prop: AgeingProperty):
        self.prop = prop
        self.draws = 0
        self.accepted = 0

    @property
    def constructive(self) -> bool:
        return self.draws >= REJECTION_PROBE and self.accepted * 100 < self.draws

    def draw(self, rng: np.random.Generator, budget: SearchBudget):
        if self.constructive:
            return gen.ifr_pmf(rng, budget.max_support, budget.max_denominator)
        d = gen.random_pmf(rng, budget.max_support, budget.max_denominator)
        self.draws += 1
        if check_ageing(self.prop, d).holds:
            self.accepted += 1
        elif self.constructive:
            _log.debug(f"{self.prop}: acceptance {self.accepted}/{self.draws}, switching to constructive draws")
        return d


_CONSTRUCTIVE = {
    AgeingProperty.ILR: gen.ilr_pmf,
    AgeingProperty.DLR: gen.dlr_pmf,
    AgeingProperty.IFR: gen.ifr_pmf,
    AgeingProperty.DRHR: gen.drhr_pmf,
}

_PAIRS = {
    OrderRelation.ST: gen.st_pair,
    OrderRelation.HR: gen.hr_pair,
    OrderRelation.RHR: gen.rhr_pair,
    OrderRelation.LR: gen.lr_pair,
}


def _curve_instance(prop: AgeingProperty, rng: np.random.Generator, budget: SearchBudget) -> AgeingInstance:
    for _ in range(CURVE_REDRAWS):
        curve, window = gen.random_curve(rng, budget.parametric_horizon)
        if check_ageing(prop, curve, window).holds:
            return AgeingInstance(curve, window)
    _log.debug(f"{prop}: no random curve accepted, using a discrete Pareto curve")
    curve = ParametricSurvival(Family.DISCRETE_PARETO, {'c': 1.0, 'd': 1.0}, budget.parametric_horizon)
    return AgeingInstance(curve, Window(1, budget.parametric_horizon))


def draw_instance(subject, rng: np.random.Generator, budget: SearchBudget,
                  sampler: _RejectionSampler | None = None) -> Instance:
    '''One random instance aimed at ``subject``.

    Constructive draws always satisfy the hypothesis; rejection draws (for
    IFRA, NBU and NBAFR) may not, and the caller is expected to check.

    '''
    if isinstance(subject, OrderRelation):
        return OrderInstance(*_PAIRS[subject](rng, budget.max_support, budget.max_denominator))
    if subject in gen.CURVE_ONLY:
        return _curve_instance(subject, rng, budget)
    if subject in _CONSTRUCTIVE:
        return AgeingInstance(_CONSTRUCTIVE[subject](rng, budget.max_support, budget.max_denominator))
    sampler = sampler or _RejectionSampler(subject)
    return AgeingInstance(sampler.draw(rng, budget))


def satisfies(subject, instance: Instance) -> bool:
    if isinstance(instance, OrderInstance):
        return check_order(subject, instance.first, instance.second).holds
    return check_ageing(subject, instance.baseline, instance.window).holds


def hypothesis_instance(subject, rng: np.random.Generator, budget: SearchBudget) -> Instance:
    '''A random instance that has ``subject``, redrawing as needed.'''
    sampler = None if isinstance(subject, OrderRelation) else _RejectionSampler(subject)
    while True:
        instance = draw_instance(subject, rng, budget, sampler)
        if satisfies(subject, instance):
            return instance


class _Search:
    def __init__(self, claim: PreservationClaim, budget: SearchBudget, timer: BudgetTimer):
        self.claim = claim
        self.budget = budget
        self.timer = timer
        self.alphas = regime_alphas(claim, budget)
        self.trials = 0

    @property
    def spent(self) -> bool:
        return self.trials >= self.budget.trial_limit or self.timer.expired()

    def attempt(self, instance: Instance, alphas: Iterable[TiltParameter],
                source: str = 'search') -> PreservationCertificate | None:
        self.trials += 1
        for alpha in alphas:
            try:
                outcome = check_preservation(self.claim, instance, alpha, self.budget.seed, source)
            except HypothesisNotSatisfied:
                return None
            if isinstance(outcome, PreservationCertificate):
                return outcome
        return None

    def run(self, phase: str, instances: Iterator[Instance]) -> PreservationCertificate | None:
        _log.debug(f"{self.claim}: {phase} phase from trial {self.trials}")
        for instance in instances:
            if self.spent:
                return None
            if (cert := self.attempt(instance, self.alphas)) is not None:
                return cert
        return None

    def exhaustive(self) -> Iterator[Instance]:
        b = self.budget
        if self.claim.is_order:
            pmfs = list(gen.exhaustive_pmfs(b.max_support, b.exhaustive_pair_total))
            for first in pmfs:
                for second in pmfs:
                    yield OrderInstance(first, second)
        elif self.claim.subject not in gen.CURVE_ONLY:
            for d in gen.exhaustive_pmfs(b.max_support, b.exhaustive_total):
                yield AgeingInstance(d)

    def grid(self) -> Iterator[Instance]:
        if self.claim.is_order:
            return
        horizon = min(GRID_HORIZON, self.budget.parametric_horizon)
        for family, params in gen.PARAMETRIC_GRID:
            yield AgeingInstance(ParametricSurvival(family, params, horizon), Window(1, horizon))

    def random(self) -> Iterator[Instance]:
        rng = claim_stream(self.claim, self.budget)
        sampler = None if self.claim.is_order else _RejectionSampler(self.claim.subject)
        while True:
            yield draw_instance(self.claim.subject, rng, self.budget, sampler)


def search_counterexample(
        claim: PreservationClaim,
        budget: SearchBudget,
        pool: Iterable[tuple[Instance, TiltParameter]] = (),
        timer: BudgetTimer | None = None,
) -> PreservationCertificate:
    '''First certificate violating ``claim`` within ``budget``.

    ``pool`` holds ``(instance, α)`` pairs tried before anything else;
    certificates found there are labelled with source ``published``. Raises
    :exc:`~..errors.ClaimNotSearchable` for a cell expected to be
    preserved, and :exc:`~..errors.Exhausted` when the budget runs out.

    '''
    if not claim.searchable:
        raise ClaimNotSearchable(f"{claim} is a preserved cell; there is nothing to search for")
    timer = timer or BudgetTimer(budget.time_limit)
    search = _Search(claim, budget, timer)
    if not search.alphas:
        raise Exhausted(claim, 0, "no α candidate in the claim's regime")

    for instance, alpha in pool:
        if (cert := search.attempt(instance, [alpha], source='published')) is not None:
            _log.info(f"{claim}: pooled instance violates the claim")
            return cert

    for phase, instances in (('exhaustive', itertools.islice(search.exhaustive(), budget.trial_limit // 2)),
                             ('grid', search.grid()),
                             ('random', search.random())):
        cert = search.run(phase, instances)
        if cert is not None:
            _log.info(f"{claim}: violation found in the {phase} phase after {search.trials} trials")
            return cert
        if search.spent:
            break

    reason = 'time limit' if timer.limit is not None and timer.elapsed >= timer.limit else 'trial limit'
    raise Exhausted(claim, search.trials, reason)


import unittest
from fractions import Fraction

from .claims import parse_claim
from .registry import pool_for


class TestSearch(unittest.TestCase):
    BUDGET = SearchBudget(seed=7, trial_limit=3000, time_limit=120.0)

    def test_not_searchable(self):
        with self.assertRaises(ClaimNotSearchable):
            search_counterexample(parse_claim('IFR>1'), self.BUDGET)

    def test_ilr_above_one(self):
        budget = self.BUDGET.updated(max_support=5, alpha_candidates=['2', '5'])
        cert = search_counterexample(parse_claim('ILR>1'), budget)
        self.assertEqual(cert.source, 'search')
        self.assertEqual(cert.seed, 7)
        self.assertTrue(cert.before.holds)
        self.assertFalse(cert.after.holds)
        self.assertTrue(cert.replay())

    def test_pool_first(self):
        claim = parse_claim('LR<1')
        cert = search_counterexample(claim, self.BUDGET, pool=pool_for(claim))
        self.assertEqual(cert.source, 'published')
        self.assertEqual(cert.after.witness, (3, 5))
        self.assertEqual(cert.instance.first.weights[1], Fraction(3, 10))

    def test_curve_only_claims(self):
        for text in ('DFR>1', 'NWU>1', 'DFRA>1'):
            cert = search_counterexample(parse_claim(text), self.BUDGET)
            self.assertIsInstance(cert.instance.baseline, ParametricSurvival, text)
            self.assertTrue(cert.replay(), text)

    def test_order_claims(self):
        for text in ('HR<1', 'RHR>1', 'LR>1'):
            cert = search_counterexample(parse_claim(text), self.BUDGET)
            self.assertTrue(cert.before.holds, text)
            self.assertFalse(cert.after.holds, text)

    def test_deterministic(self):
        claim = parse_claim('IFRA<1')
        budget = self.BUDGET.updated(exhaustive_total=1)
        self.assertEqual(search_counterexample(claim, budget), search_counterexample(claim, budget))

    def test_exhausted(self):
        budget = self.BUDGET.updated(trial_limit=5, exhaustive_total=1)
        with self.assertRaises(Exhausted) as cm:
            search_counterexample(parse_claim('NBAFR>1'), budget)
        self.assertEqual(cm.exception.trials, 5)
        self.assertEqual(cm.exception.reason, 'trial limit')

    def test_no_alpha_in_regime(self):
        budget = self.BUDGET.updated(alpha_candidates='2:4')
        with self.assertRaises(Exhausted):
            search_counterexample(parse_claim('IFR<1'), budget)

    def test_draw_instance_satisfies_constructive_hypotheses(self):
        rng = np.random.default_rng(3)
        for subject in (AgeingProperty.ILR, AgeingProperty.DRHR, AgeingProperty.DFR):
            for _ in range(20):
                instance = draw_instance(subject, rng, self.BUDGET)
                self.assertTrue(check_ageing(subject, instance.baseline, instance.window).holds)
        for rel in OrderRelation:
            for _ in range(20):
                instance = draw_instance(rel, rng, self.BUDGET)
                self.assertTrue(check_order(rel, instance.first, instance.second).holds)
