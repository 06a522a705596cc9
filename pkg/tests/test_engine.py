# -*- coding: utf-8 -*-
#
# raindings
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#

from tests.helpers import *

import io

from raindings import engine
from raindings.extra import Progress


def _square(x):
    return x * x


def _seeded(name):
    return float(misc.rng(setup.get_config('seed'), name).uniform())


def _fail(x):
    if x == 2:
        raise DataError("task %d failed" % x)
    return x


class _Recorder(object):
    def __init__(self):
        self.calls = []

    def on_start(self, command):
        self.calls.append(('start', command))

    def on_task(self, name, index, total):
        self.calls.append(('task', name, index, total))

    def on_exit(self, command):
        self.calls.append(('exit', command))


class EngineTestCase(RaindingsTestCase):

    def test_map_order(self):
        tasks = [(i,) for i in range(10)]
        self.assertEqual(engine.map_tasks('sq', _square, tasks),
                         [i * i for i in range(10)])
        config(jobs=3)
        self.assertEqual(engine.map_tasks('sq', _square, tasks),
                         [i * i for i in range(10)])

    def test_workers_see_settings(self):
        config(jobs=2, seed=17)
        tasks = [('a',), ('b',), ('c',)]
        parallel = engine.map_tasks('seeded', _seeded, tasks)
        config(jobs=1)
        self.assertEqual(parallel, engine.map_tasks('seeded', _seeded, tasks))

    def test_error(self):
        for jobs in (1, 2):
            config(jobs=jobs)
            with self.assertRaises(DataError):
                engine.map_tasks('fail', _fail, [(i,) for i in range(4)])

    def test_active(self):
        self.assertFalse(engine.active())

        def main():
            self.assertTrue(engine.active())
            return 42

        self.assertEqual(engine.Engine('test').run(main), 42)
        self.assertFalse(engine.active())

    def test_hooks(self):
        rec = _Recorder()
        hook(rec)

        def main(n):
            return engine.map_tasks('sq', _square, [(i,) for i in range(n)])

        engine.Engine('fit').run(main, 3)
        self.assertEqual(rec.calls, [
            ('start', 'fit'),
            ('task', 'sq', 0, 3),
            ('task', 'sq', 1, 3),
            ('task', 'sq', 2, 3),
            ('exit', 'fit'),
        ])

    def test_exit_hook_on_error(self):
        rec = _Recorder()
        hook(rec)

        def main():
            raise DataError("boom")

        with self.assertRaises(DataError):
            engine.Engine('fit').run(main)
        self.assertEqual(rec.calls[-1], ('exit', 'fit'))

    def test_progress(self):
        out = io.StringIO()
        hook(Progress(out, every=2))

        def main():
            return engine.map_tasks('grid', _square,
                                    [(i,) for i in range(5)])

        engine.Engine('decompose').run(main)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[0], 'decompose: started')
        self.assertIn('grid: 2/5', lines)
        self.assertIn('grid: 5/5', lines)
        self.assertNotIn('grid: 1/5', lines)
        self.assertTrue(lines[-1].startswith('decompose: finished in'))
