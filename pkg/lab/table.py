'''Both preservation tables, recomputed.

For a cell expected to be preserved, ``trials`` random instances having the
property are tilted by each regime's candidates in turn and must all keep
it. For any other cell the counterexample search is run; if it runs out,
the published instances for the cell are tried before the cell is
reported as empirically preserved.

Cells are independent. Each draws from its own stream seeded by the budget
seed and the cell, so the report is the same whatever the number of
workers.

'''

from __future__ import annotations

from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import json
import logging

from ..config import SearchBudget
from ..datawriter import CellWriter
from ..errors import Exhausted
from .certificates import ConfirmedPreserved, PreservationCertificate, check_preservation
from .claims import Expectation, PreservationClaim, TABLE_CLAIMS
from .registry import pool_for
from .search import claim_stream, hypothesis_instance, regime_alphas, search_counterexample


__all__ = (
    'CellResult',
    'TableReport',
    'preservation_table',
)


_log = logging.getLogger(__name__)


PRESERVED = 'preserved'
NOT_PRESERVED = 'not preserved'


@dataclass(frozen=True)
class CellResult:
    claim: PreservationClaim
    outcome: str
    '''``preserved`` or ``not preserved``, as observed.'''

    source: str
    '''``trials`` for a cell checked on random instances, ``search`` or
    ``published`` for the origin of a certificate, ``exhausted`` when nothing
    was found.'''

    trials: int | None = None
    passes: int | None = None
    certificate: PreservationCertificate | None = None

    @property
    def expected_text(self) -> str:
        return str(self.claim.expected)

    @property
    def agrees(self) -> bool | None:
        '''Whether the outcome matches the table; ``None`` for an unstated
        cell.'''
        if self.claim.expected is Expectation.UNSTATED:
            return None
        return self.outcome == str(self.claim.expected)

    def row(self) -> dict:
        return {
            'table': self.claim.table,
            'subject': str(self.claim.subject),
            'regime': str(self.claim.regime),
            'expected': self.expected_text,
            'outcome': self.outcome,
            'source': self.source,
            'trials': '' if self.trials is None else self.trials,
            'passes': '' if self.passes is None else self.passes,
            'certificate': '' if self.certificate is None
            else json.dumps(self.certificate.to_dict(), separators=(',', ':')),
        }

    def to_dict(self) -> dict:
        result = self.row()
        result['trials'] = self.trials
        result['passes'] = self.passes
        result['agrees'] = self.agrees
        result['certificate'] = None if self.certificate is None else self.certificate.to_dict()
        return result


_COLUMNS = ('table', 'subject', 'regime', 'expected', 'outcome', 'source', 'trials', 'passes')


@dataclass(frozen=True)
class TableReport:
    cells: tuple[CellResult, ...]
    trials: int
    seed: int

    @property
    def agrees(self) -> bool:
        return all(cell.agrees is not False for cell in self.cells)

    @property
    def disagreements(self) -> list[CellResult]:
        return [cell for cell in self.cells if cell.agrees is False]

    def to_dict(self) -> dict:
        return {
            'seed': self.seed,
            'trials': self.trials,
            'agrees': self.agrees,
            'cells': [cell.to_dict() for cell in self.cells],
        }

    def to_text(self) -> str:
        rows = [dict(zip(_COLUMNS, _COLUMNS))] + [cell.row() for cell in self.cells]
        widths = {col: max(len(str(r[col])) for r in rows) for col in _COLUMNS}
        lines = [
            '  '.join(str(r[col]).ljust(widths[col]) for col in _COLUMNS).rstrip()
            for r in rows
        ]
        for cell in self.cells:
            if cell.certificate is not None:
                cert = cell.certificate
                lines.append(f"{cell.claim}: α={cert.alpha}, {cert.instance.describe()}, after: {cert.after}")
        stated = [cell for cell in self.cells if cell.agrees is not None]
        lines.append(
            f"{sum(cell.agrees for cell in stated)}/{len(stated)} stated cells agree "
            f"(seed {self.seed}, {self.trials} trials)"
        )
        return '\n'.join(lines)


def _preserved_cell(claim: PreservationClaim, budget: SearchBudget, trials: int) -> CellResult:
    alphas = regime_alphas(claim, budget)
    if not alphas:
        raise ValueError(f"{claim}: no α candidate in the claim's regime")

    passes, first_violation = 0, None
    for trial in range(trials):
        rng = claim_stream(claim, budget, trial)
        instance = hypothesis_instance(claim.subject, rng, budget)
        outcome = check_preservation(claim, instance, alphas[trial % len(alphas)], budget.seed, 'search')
        if isinstance(outcome, ConfirmedPreserved):
            passes += 1
        elif first_violation is None:
            _log.warning(f"{claim}: trial {trial} violates a cell expected to be preserved")
            first_violation = outcome

    return CellResult(
        claim,
        PRESERVED if first_violation is None else NOT_PRESERVED,
        'trials',
        trials=trials,
        passes=passes,
        certificate=first_violation,
    )


def _searched_cell(claim: PreservationClaim, budget: SearchBudget) -> CellResult:
    try:
        cert = search_counterexample(claim, budget)
        return CellResult(claim, NOT_PRESERVED, cert.source, certificate=cert)
    except Exhausted as e:
        _log.info(f"{claim}: {e}")
        exhausted = e

    for instance, alpha in pool_for(claim):
        outcome = check_preservation(claim, instance, alpha, budget.seed, 'published')
        if isinstance(outcome, PreservationCertificate):
            return CellResult(claim, NOT_PRESERVED, 'published', trials=exhausted.trials, certificate=outcome)
    return CellResult(claim, PRESERVED, 'exhausted', trials=exhausted.trials)


def _cell(claim: PreservationClaim, budget: SearchBudget, trials: int) -> CellResult:
    if claim.expected is Expectation.PRESERVED:
        result = _preserved_cell(claim, budget, trials)
    else:
        result = _searched_cell(claim, budget)
    _log.info(f"{claim}: {result.outcome} ({result.source})")
    return result


def preservation_table(
        budget: SearchBudget,
        trials: int,
        claims: Iterable[PreservationClaim] | None = None,
        workers: int = 1,
        writer: CellWriter | None = None,
) -> TableReport:
    '''Recompute every cell of ``claims`` (both tables by default).

    With a ``writer``, each finished cell is also written as a CSV row, and
    cells the writer already holds are skipped.

    '''
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    claims = list(TABLE_CLAIMS if claims is None else claims)
    if writer is not None:
        pending = []
        for claim in claims:
            key = {'table': claim.table, 'subject': str(claim.subject), 'regime': str(claim.regime)}
            if writer.done(key):
                _log.info(f"{claim}: already in {writer.path}, skipping")
            else:
                pending.append(claim)
        claims = pending

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        cells = tuple(pool.map(lambda claim: _cell(claim, budget, trials), claims))

    if writer is not None:
        for cell in cells:
            writer.write(cell.row())
    return TableReport(cells, trials, budget.seed)


import unittest
import csv
import tempfile
from pathlib import Path

import numpy as np

from ..orders import OrderRelation, check_order
from ..tilt import tilt
from .claims import parse_claim
from .generators import random_pmf


class TestTable(unittest.TestCase):
    BUDGET = SearchBudget(seed=3, trial_limit=2000, time_limit=120.0)

    def test_small_table(self):
        claims = [parse_claim(t) for t in ('IFR>1', 'ILR>1', 'HR<1', 'RHR<1', 'DFR<1')]
        report = preservation_table(self.BUDGET, 20, claims)
        self.assertTrue(report.agrees, report.to_text())
        self.assertEqual([c.outcome for c in report.cells],
                         ['preserved', 'not preserved', 'not preserved', 'preserved', 'preserved'])
        self.assertEqual(report.cells[0].passes, 20)
        for cell in report.cells:
            if cell.certificate is not None:
                self.assertTrue(cell.certificate.replay())

    def test_single_trial(self):
        report = preservation_table(self.BUDGET, 1, [parse_claim('ST>1')])
        self.assertEqual((report.cells[0].trials, report.cells[0].passes), (1, 1))

    def test_workers_do_not_change_the_report(self):
        claims = [parse_claim(t) for t in ('NBU>1', 'LR>1', 'DRHR>1', 'ST<1')]
        one = preservation_table(self.BUDGET, 10, claims, workers=1)
        three = preservation_table(self.BUDGET, 10, claims, workers=3)
        self.assertEqual(one.to_text(), three.to_text())
        self.assertEqual(json.dumps(one.to_dict()), json.dumps(three.to_dict()))

    def test_falsified_claim_is_flagged(self):
        claim = parse_claim('IFR<1').with_expected(Expectation.PRESERVED)
        report = preservation_table(self.BUDGET, 200, [claim])
        cell = report.cells[0]
        self.assertFalse(report.agrees)
        self.assertEqual(cell.outcome, 'not preserved')
        self.assertLess(cell.passes, 200)
        self.assertTrue(cell.certificate.replay())

    def test_unstated_cell(self):
        budget = self.BUDGET.updated(trial_limit=50, exhaustive_total=3)
        report = preservation_table(budget, 1, [parse_claim('NBAFR>1')])
        cell = report.cells[0]
        self.assertIsNone(cell.agrees)
        self.assertEqual(cell.expected_text, 'unstated')
        self.assertTrue(report.agrees)

    def test_published_fallback(self):
        budget = self.BUDGET.updated(alpha_candidates="2:4:6")
        report = preservation_table(budget, 1, [parse_claim("LR<1")])
        cell = report.cells[0]
        self.assertEqual((cell.outcome, cell.source), ('not preserved', 'published'))

    def test_csv_resume(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'table.csv'
            claims = [parse_claim('ST<1'), parse_claim('ST>1')]
            preservation_table(self.BUDGET, 3, claims[:1], writer=CellWriter(path))
            report = preservation_table(self.BUDGET, 3, claims, writer=CellWriter(path, exist_ok=True))
            self.assertEqual([str(c.claim) for c in report.cells], ['ST>1'])
            with open(path, newline='') as f:
                rows = list(csv.DictReader(f))
            self.assertEqual([(r['subject'], r['regime'], r['passes']) for r in rows],
                             [('ST', '<1', '3'), ('ST', '>1', '3')])

    def test_every_searched_cell_agrees_on_default_budget(self):
        claims = [c for c in TABLE_CLAIMS if c.expected is not Expectation.PRESERVED]
        report = preservation_table(SearchBudget(seed=1), 1, claims)
        self.assertEqual(len(report.cells), len(claims))
        self.assertTrue(report.agrees, report.to_text())
        for cell in report.cells:
            with self.subTest(claim=str(cell.claim)):
                if cell.claim.expected is Expectation.NOT_PRESERVED:
                    self.assertEqual(cell.outcome, 'not preserved')
                    self.assertTrue(cell.certificate.replay())

    def test_trials_must_be_positive(self):
        with self.assertRaises(ValueError):
            preservation_table(self.BUDGET, 0)


class TestPreservationTheorems(unittest.TestCase):
    '''Every preserved cell, on a thousand random instances each.'''

    TRIALS = 1000
    BUDGET = SearchBudget(seed=11)

    def test_preserved_cells(self):
        for claim in TABLE_CLAIMS:
            if claim.expected is not Expectation.PRESERVED:
                continue
            with self.subTest(claim=str(claim)):
                cell = _preserved_cell(claim, self.BUDGET, self.TRIALS)
                self.assertEqual(cell.passes, self.TRIALS,
                                 None if cell.certificate is None else str(cell.certificate))

    def test_usual_order_converse(self):
        rng = np.random.default_rng(12)
        for _ in range(self.TRIALS):
            d1, d2 = random_pmf(rng, 6, 8, zeros=True), random_pmf(rng, 6, 8, zeros=True)
            before = check_order(OrderRelation.ST, d1, d2).holds
            for alpha in ('1/5', '6'):
                after = check_order(OrderRelation.ST, tilt(d1, alpha), tilt(d2, alpha)).holds
                self.assertEqual(before, after, f"{d1} {d2} α={alpha}")
