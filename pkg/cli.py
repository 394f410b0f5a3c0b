'''Command-line front end.

::

    python -m motilt classify --dist ilr.json
    python -m motilt tilt --dist ilr.json --alpha 5 --out tilted.json
    python -m motilt order --rel lr --d1 x1.json --d2 x2.json --alpha 1/5
    python -m motilt reproduce --all
    python -m motilt search --claim 'HR<1' --seed 7 --budget trial_limit=5000
    python -m motilt table --trials 1000 --seed 1 --workers 4 --csv table.csv

Every subcommand takes ``--json`` for machine output. Exit status is 0 on
success, 1 when a verdict goes the wrong way (a reproduced value
mismatches, a search runs out, a table cell disagrees) and 2 for a usage or
input error.

'''

from __future__ import annotations

import argparse
from collections.abc import Sequence
import json
import logging
import sys

from .ageing import Window, classify_all
from .config import SearchBudget, parse_overrides
from .datawriter import CellWriter
from .dist import FinitePMF
from .errors import DistributionSpecError, Exhausted, FixtureMismatch, MotiltError
from .interchange import dump_distribution, read_distribution, write_distribution
from .lab import (
    CASES,
    PreservationCertificate,
    parse_claim,
    preservation_table,
    reproduce_all,
    reproduce_case,
    search_counterexample,
)
from .orders import OrderRelation, check_order
from .tilt import TiltParameter, tilt


__all__ = ('build_parser', 'run', 'main')


_log = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2


def _dump(doc) -> None:
    print(json.dumps(doc, indent=2))


def _budget(args: argparse.Namespace) -> SearchBudget:
    overrides = parse_overrides(args.budget)
    if args.seed is not None:
        overrides['seed'] = args.seed
    try:
        return SearchBudget().updated(**overrides)
    except AttributeError as e:
        raise ValueError(f"unknown budget key ({', '.join(SearchBudget.keys())} are known)") from e


def _finite(path: str) -> FinitePMF:
    d = read_distribution(path)
    if not isinstance(d, FinitePMF):
        raise DistributionSpecError(path, '$', "order checks need a finite pmf ('weights')")
    return d


def _classify(args: argparse.Namespace) -> int:
    d = read_distribution(args.dist)
    verdicts = classify_all(d, args.window)
    if args.json:
        _dump({str(prop): verdict.to_dict() for prop, verdict in verdicts.items()})
    else:
        for verdict in verdicts.values():
            print(verdict)
    return EXIT_OK


def _tilt(args: argparse.Namespace) -> int:
    d = read_distribution(args.dist)
    y = tilt(d, TiltParameter.convert_from(args.alpha))
    if args.out:
        write_distribution(y, args.out)
    else:
        _dump(dump_distribution(y))
    return EXIT_OK


def _order(args: argparse.Namespace) -> int:
    relation = OrderRelation.convert_from(args.rel)
    d1, d2 = _finite(args.d1), _finite(args.d2)
    before = check_order(relation, d1, d2)
    after = None
    if args.alpha is not None:
        alpha = TiltParameter.convert_from(args.alpha)
        after = check_order(relation, tilt(d1, alpha), tilt(d2, alpha))

    if args.json:
        doc = {'relation': str(relation), 'before': before.to_dict()}
        if after is not None:
            doc['alpha'] = str(alpha)
            doc['after'] = after.to_dict()
        _dump(doc)
    else:
        print(f"before: {before}")
        if after is not None:
            print(f"after α={alpha}: {after}")
    return EXIT_OK


def _case_doc(case_id: str, outcome, error: FixtureMismatch | None) -> dict:
    doc = {'case': case_id, 'passed': error is None}
    if error is not None:
        doc['mismatches'] = error.mismatches
    elif isinstance(outcome, PreservationCertificate):
        doc['certificate'] = outcome.to_dict()
    else:
        doc['after'] = outcome.after.to_dict()
    return doc


def _case_line(case_id: str, outcome, error: FixtureMismatch | None) -> str:
    if error is not None:
        return f"{case_id}: FAIL {'; '.join(error.mismatches)}"
    return f"{case_id}: pass ({outcome.after})"


def _reproduce(args: argparse.Namespace) -> int:
    if args.all:
        results = [(r.case_id, r.outcome, r.error) for r in reproduce_all()]
    else:
        try:
            results = [(args.case, reproduce_case(args.case), None)]
        except FixtureMismatch as e:
            results = [(args.case, None, e)]

    passed = sum(error is None for _, _, error in results)
    if args.json:
        _dump({
            'passed': passed,
            'total': len(results),
            'cases': [_case_doc(*r) for r in results],
        })
    else:
        for r in results:
            print(_case_line(*r))
        if args.all:
            print(f"{passed}/{len(results)} cases pass")
    return EXIT_OK if passed == len(results) else EXIT_VERDICT


def _search(args: argparse.Namespace) -> int:
    claim = parse_claim(args.claim)
    budget = _budget(args)
    try:
        cert = search_counterexample(claim, budget)
    except Exhausted as e:
        if args.json:
            _dump({'claim': str(claim), 'exhausted': True, 'trials': e.trials, 'reason': e.reason})
        else:
            print(f"exhausted: {e}")
        return EXIT_VERDICT
    print(cert.to_json())
    return EXIT_OK


def _table(args: argparse.Namespace) -> int:
    budget = _budget(args)
    writer = None if args.csv is None else CellWriter(args.csv, exist_ok=True)
    report = preservation_table(budget, args.trials, workers=args.workers, writer=writer)
    if args.json:
        _dump(report.to_dict())
    else:
        print(report.to_text())
    return EXIT_OK if report.agrees else EXIT_VERDICT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help="machine-readable output")
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help="log progress to stderr (twice for debug output)")

    parser = argparse.ArgumentParser(
        prog='motilt',
        description="Proportional-odds tilts of discrete lifetime distributions.",
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('classify', parents=[common], help="ageing class verdicts")
    p.add_argument('--dist', required=True, help="distribution file")
    p.add_argument('--window', type=Window.convert_from, help="index range A..B")
    p.set_defaults(handler=_classify)

    p = sub.add_parser('tilt', parents=[common], help="tilt a distribution")
    p.add_argument('--dist', required=True, help="distribution file")
    p.add_argument('--alpha', required=True, help="tilt parameter, e.g. 5 or 1/5")
    p.add_argument('--out', help="write the tilted distribution here instead of stdout")
    p.set_defaults(handler=_tilt)

    p = sub.add_parser('order', parents=[common], help="stochastic order between two pmfs")
    p.add_argument('--rel', required=True, type=str.lower, choices=[str(r).lower() for r in OrderRelation])
    p.add_argument('--d1', required=True, help="first distribution file")
    p.add_argument('--d2', required=True, help="second distribution file")
    p.add_argument('--alpha', help="also check after tilting both by this")
    p.set_defaults(handler=_order)

    p = sub.add_parser('reproduce', parents=[common], help="recompute the registered counterexamples")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument('--case', choices=[case.id for case in CASES], metavar='ID')
    which.add_argument('--all', action='store_true')
    p.set_defaults(handler=_reproduce)

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument('--seed', type=int, help="defaults to $MO_SEED, else 1")
    budget.add_argument('--budget', action='append', default=[], metavar='KEY=VALUE,...',
                        help=f"override search limits ({', '.join(SearchBudget.keys())})")

    p = sub.add_parser('search', parents=[common, budget], help="look for a counterexample to one cell")
    p.add_argument('--claim', required=True, help="table cell, e.g. 'IFR<1'")
    p.set_defaults(handler=_search)

    p = sub.add_parser('table', parents=[common, budget], help="recompute both preservation tables")
    p.add_argument('--trials', type=int, default=1000, help="random instances per preserved cell")
    p.add_argument('--workers', type=int, default=1)
    p.add_argument('--csv', help="append finished cells here and skip cells already in it")
    p.set_defaults(handler=_table)

    return parser


_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def run(argv: Sequence[str] | None = None) -> int:
    '''Parse ``argv`` and run one subcommand; returns the exit status.'''
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=_LEVELS[min(args.verbose, len(_LEVELS) - 1)],
        format='%(levelname)s %(name)s: %(message)s',
    )
    try:
        return args.handler(args)
    except (MotiltError, ValueError, LookupError) as e:
        _log.debug(f"{args.command} failed", exc_info=True)
        print(f"motilt {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


import unittest
import contextlib
import io
import os
import tempfile
from pathlib import Path

from .dist import make_pmf


class TestCli(unittest.TestCase):
    ILR = {'support_start': 1, 'weights': ['0', '1/10', '1/4', '7/20', '3/10']}

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def file(self, name: str, doc) -> str:
        path = self.tmp / name
        path.write_text(json.dumps(doc))
        return str(path)

    def call(self, *argv) -> tuple[int, str, str]:
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = run(list(argv))
        return code, out.getvalue(), err.getvalue()

    def test_tilt(self):
        code, out, _ = self.call('tilt', '--dist', self.file('ilr.json', self.ILR), '--alpha', '5')
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)['weights'], ['0', '1/46', '125/1656', '175/792', '15/22'])

    def test_tilt_identity_echoes_input(self):
        code, out, _ = self.call('tilt', '--dist', self.file('ilr.json', self.ILR), '--alpha', '1')
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out), self.ILR)

    def test_tilt_and_back(self):
        there, back = str(self.tmp / 'there.json'), str(self.tmp / 'back.json')
        src = self.file('dlr.json', {'weights': ['9/25', '13/50', '21/100', '17/100']})
        self.assertEqual(self.call('tilt', '--dist', src, '--alpha', '2/7', '--out', there)[0], 0)
        self.assertEqual(self.call('tilt', '--dist', there, '--alpha', '7/2', '--out', back)[0], 0)
        self.assertEqual(read_distribution(back), make_pmf(['9/25', '13/50', '21/100', '17/100']))

    def test_tilt_parametric(self):
        src = self.file('p.json', {'family': 'discrete_pareto', 'params': {'c': 3, 'd': 2}, 'horizon': 50})
        code, out, _ = self.call('tilt', '--dist', src, '--alpha', '6')
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)['alpha'], '6.0')

    def test_classify(self):
        src = self.file('ilr.json', self.ILR)
        code, out, _ = self.call('classify', '--dist', src)
        self.assertEqual(code, 0)
        self.assertIn('ILR: holds', out.splitlines())

        code, out, _ = self.call('classify', '--dist', src, '--json')
        self.assertTrue(json.loads(out)['ILR']['holds'])

    def test_classify_window(self):
        src = self.file('w.json', {'family': 'type_i_discrete_weibull', 'params': {'q': 0.5, 'beta': 0.8}})
        code, out, _ = self.call('classify', '--dist', src, '--window', '1..20', '--json')
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(out)['DFR']['holds'])

    def test_order(self):
        d1 = self.file('x1.json', {'weights': ['1/2', '1/4', '1/4']})
        d2 = self.file('x2.json', {'weights': ['1/4', '1/4', '1/2']})
        code, out, _ = self.call('order', '--rel', 'st', '--d1', d1, '--d2', d2, '--alpha', '1/5', '--json')
        self.assertEqual(code, 0)
        doc = json.loads(out)
        self.assertEqual((doc['relation'], doc['alpha']), ('ST', '1/5'))
        self.assertTrue(doc['before']['holds'])
        self.assertTrue(doc['after']['holds'])

        code, out, _ = self.call('order', '--rel', 'ST', '--d1', d2, '--d2', d1)
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('before: ST: fails at 1'))

    def test_order_needs_finite_pmfs(self):
        d1 = self.file('x1.json', {'weights': ['1']})
        d2 = self.file('p.json', {'family': 'discrete_pareto', 'params': {'c': 3, 'd': 2}})
        code, _, err = self.call('order', '--rel', 'hr', '--d1', d1, '--d2', d2)
        self.assertEqual(code, 2)
        self.assertIn('p.json', err)

    def test_reproduce_all(self):
        code, out, _ = self.call('reproduce', '--all')
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[-1], f"{len(CASES)}/{len(CASES)} cases pass")

    def test_reproduce_one(self):
        code, out, _ = self.call('reproduce', '--case', 'dlr-alpha2', '--json')
        self.assertEqual(code, 0)
        doc = json.loads(out)
        self.assertEqual((doc['passed'], doc['total']), (1, 1))
        self.assertEqual(doc['cases'][0]['certificate']['claim'], 'DLR>1')

    def test_search(self):
        code, out, _ = self.call('search', '--claim', 'ILR>1', '--seed', '7', '--budget', 'trial_limit=3000')
        self.assertEqual(code, 0)
        cert = PreservationCertificate.from_dict(json.loads(out))
        self.assertTrue(cert.replay())

    def test_search_is_deterministic(self):
        argv = ('search', '--claim', 'HR<1', '--seed', '5', '--budget', 'trial_limit=3000')
        self.assertEqual(self.call(*argv), self.call(*argv))

    def test_search_exhausted(self):
        argv = ('search', '--claim', 'NBAFR>1', '--seed', '1',
                '--budget', 'trial_limit=5,exhaustive_total=1', '--json')
        code, out, _ = self.call(*argv)
        self.assertEqual(code, 1)
        self.assertTrue(json.loads(out)['exhausted'])

    def test_search_preserved_cell_is_a_usage_error(self):
        code, _, err = self.call('search', '--claim', 'IFR>1')
        self.assertEqual(code, 2)
        self.assertIn('preserved', err)

    def test_table(self):
        csv_path = str(self.tmp / 'table.csv')
        code, out, _ = self.call('table', '--trials', '5', '--seed', '1', '--csv', csv_path)
        self.assertEqual(code, 0, out)
        self.assertEqual(out.splitlines()[-1], '27/27 stated cells agree (seed 1, 5 trials)')
        self.assertTrue(os.path.exists(csv_path))

    def test_bad_input_exits_2(self):
        bad = self.file('bad.json', {'weights': ['1/2', '1/3']})
        code, _, err = self.call('tilt', '--dist', bad, '--alpha', '2')
        self.assertEqual(code, 2)
        self.assertIn('bad.json: weights', err)

        code, _, err = self.call('tilt', '--dist', self.file('ok.json', self.ILR), '--alpha', '-1')
        self.assertEqual(code, 2)

        code, _, _ = self.call('search', '--claim', 'HR<1', '--budget', 'nonsense=3')
        self.assertEqual(code, 2)

    def test_usage_errors_exit_2(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as cm:
                run(['reproduce'])
        self.assertEqual(cm.exception.code, 2)
