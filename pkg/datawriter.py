'''CSV record of preservation-table cells.'''

from __future__ import annotations

from collections.abc import Iterable, Mapping
import csv
import logging
from pathlib import Path


__all__ = ('CellWriter',)


_log = logging.getLogger(__name__)


class CellWriter:
    '''Append-only CSV file with one row per table cell.

    ``ivars`` identify a cell and ``dvars`` hold its outcome. An existing
    file is only reused with ``exist_ok``, in which case the cells it
    already holds are collected into :attr:`completed` so a run can resume.

    '''

    def __init__(
            self,
            path,
            ivars: Iterable[str] = ('table', 'subject', 'regime'),
            dvars: Iterable[str] = ('expected', 'outcome', 'source', 'trials', 'passes', 'certificate'),
            exist_ok: bool = False,
    ):
        self.path = Path(path)
        self.ivars = tuple(ivars)
        self.dvars = tuple(dvars)
        _log.debug(f"path={self.path.absolute()} ivars={self.ivars} dvars={self.dvars}")

        if self.path.is_dir():
            raise FileExistsError(f"{self.path.absolute()} is a directory")

        elif self.path.is_file():
            if not exist_ok:
                raise FileExistsError(f"{self.path.absolute()} exists")
            _log.info(f"appending to {self.path.absolute()}")
            with open(self.path, 'r', newline='') as f:
                self.completed = {
                    tuple(row[var] for var in self.ivars)
                    for row in csv.DictReader(f)
                }

        else:
            _log.info(f"creating {self.path.absolute()}")
            with open(self.path, 'w', newline='') as f:
                csv.DictWriter(f, self.ivars + self.dvars).writeheader()
            self.completed = set()

    def key(self, rowdict: Mapping) -> tuple[str, ...]:
        return tuple(str(rowdict[var]) for var in self.ivars)

    def done(self, rowdict: Mapping) -> bool:
        '''Whether the cell identified by ``rowdict`` is already written.'''
        return self.key(rowdict) in self.completed

    def write(self, rowdict: Mapping) -> None:
        with open(self.path, 'a', newline='') as f:
            csv.DictWriter(f, self.ivars + self.dvars).writerow(
                {var: rowdict[var] for var in self.ivars + self.dvars}
            )
        self.completed.add(self.key(rowdict))


import unittest
import tempfile


class TestCellWriter(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.path = Path(self._tmp.name) / 'table.csv'

    def tearDown(self):
        self._tmp.cleanup()

    def _row(self, subject, outcome):
        return {'table': 'ageing', 'subject': subject, 'regime': '<1',
                'expected': 'preserved', 'outcome': outcome, 'source': 'search',
                'trials': 3, 'passes': 3, 'certificate': ''}

    def test_write_and_resume(self):
        writer = CellWriter(self.path)
        writer.write(self._row('DFR', 'preserved'))
        self.assertTrue(writer.done(self._row('DFR', 'anything')))

        with self.assertRaises(FileExistsError):
            CellWriter(self.path)

        resumed = CellWriter(self.path, exist_ok=True)
        self.assertEqual(resumed.completed, {('ageing', 'DFR', '<1')})
        resumed.write(self._row('NWU', 'preserved'))
        with open(self.path, newline='') as f:
            rows = list(csv.DictReader(f))
        self.assertEqual([r['subject'] for r in rows], ['DFR', 'NWU'])
        self.assertEqual(rows[0]['trials'], '3')

    def test_directory_rejected(self):
        with self.assertRaises(FileExistsError):
            CellWriter(self._tmp.name)
