'''Wall-clock budgets.'''

from __future__ import annotations

from contextlib import contextmanager
import logging
import time


__all__ = ('BudgetTimer',)


_log = logging.getLogger(__name__)


class BudgetTimer:
    '''Clock started at construction, with an optional limit in seconds.'''

    def __init__(self, limit: float | None = None, timefn=time.monotonic):
        self.timefn = timefn
        '''Function used to read the clock.'''

        self.limit = limit
        '''Seconds after which :meth:`expired` is true; ``None`` never
        expires.'''

        self.start = timefn()

        self.times: list[float] = []
        '''Measured time of each :meth:`time` context, in order of when each
        context ended.'''

    @property
    def elapsed(self) -> float:
        return self.timefn() - self.start

    def expired(self) -> bool:
        if self.limit is None:
            return False
        if self.elapsed >= self.limit:
            _log.warning(f"time budget of {self.limit:g}s used up")
            return True
        return False

    @contextmanager
    def time(self):
        '''Measure the managed context and append its duration to
        :attr:`times`.'''
        start = self.timefn()
        try:
            yield
        finally:
            self.times.append(self.timefn() - start)


import unittest


class _FakeClock:
    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now


class TestBudgetTimer(unittest.TestCase):
    def setUp(self):
        self.clock = _FakeClock()

    def test_expiry(self):
        timer = BudgetTimer(limit=5, timefn=self.clock)
        self.assertFalse(timer.expired())
        self.clock.now = 5.0
        with self.assertLogs(__name__, 'WARNING'):
            self.assertTrue(timer.expired())
        self.assertEqual(timer.elapsed, 5.0)

    def test_no_limit(self):
        timer = BudgetTimer(timefn=self.clock)
        self.clock.now = 1e9
        self.assertFalse(timer.expired())

    def test_time_context(self):
        timer = BudgetTimer(timefn=self.clock)
        with timer.time():
            self.clock.now += 2.0
        with self.assertRaises(RuntimeError):
            with timer.time():
                self.clock.now += 1.0
                raise RuntimeError
        self.assertEqual(timer.times, [2.0, 1.0])
