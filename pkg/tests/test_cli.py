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

import contextlib
import io
import json
import logging

import pandas as pd

from raindings import cli


PIPELINE = ('fit', 'select', 'returns', 'reliability', 'decompose', 'sweep',
            'report')


class CliTestCase(RaindingsTestCase):

    def setUp(self):
        RaindingsTestCase.setUp(self)
        logger = logging.getLogger('raindings')
        root = logging.getLogger()
        self.addCleanup(setattr, logger, 'handlers', list(logger.handlers))
        self.addCleanup(setattr, logger, 'propagate', logger.propagate)
        self.addCleanup(root.setLevel, root.level)

        self.dir = self.make_tempdir()
        self.assertEqual(self.main('sample', self.dir), 0)
        self.config = os.path.join(self.dir, 'config.json')
        with open(self.config, encoding='utf-8') as f:
            data = json.load(f)
        data['mcmc'] = {'n_iterations': 2500, 'burn_in': 500}
        data['max_reliability_samples'] = 500
        with open(self.config, 'w', encoding='utf-8') as f:
            json.dump(data, f)

    def main(self, *argv):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            status = cli.main(list(argv))
        self.stdout = out.getvalue()
        return status

    def run_pipeline(self, out, *options):
        for command in PIPELINE:
            status = self.main(command, '-c', self.config, '-o', out, '-q',
                               *options)
            self.assertEqual(status, 0, command)
            # settings from the command line are pinned per invocation
            setup.reset()

    def read(self, out, name):
        with open(os.path.join(out, name), 'rb') as f:
            return f.read()

    def test_sample(self):
        for name in ('maxima.csv', 'covariates/mdr.csv',
                     'covariates/noise.csv', 'climate/model_9.csv'):
            self.assertTrue(os.path.isfile(os.path.join(self.dir, name)),
                            name)
        self.assertIn('config.json', self.stdout)

    def test_pipeline(self):
        out = os.path.join(self.dir, 'run1')
        self.run_pipeline(out)

        for name in ('ensembles/mdr.csv', 'ensembles/mdr.json',
                     'ensembles/stationary.csv', 'selection.csv',
                     'selection.json', 'returns.csv', 'returns.json',
                     'reliability.csv', 'grid.csv', 'decomposition.csv',
                     'sweep.csv', 'sweep.json', 'returns.svg', 'sweep.svg',
                     'shares.svg', 'report.txt'):
            self.assertTrue(os.path.isfile(os.path.join(out, name)), name)

        ens = pd.read_csv(os.path.join(out, 'ensembles', 'mdr.csv'))
        self.assertEqual(len(ens), 2000)
        self.assertEqual(list(ens.columns),
                         ['mu0', 'a_mu', 'sigma', 'xi', 'log_post'])
        self.assertTrue((ens['sigma'] > 0).all())

        selection = json.loads(self.read(out, 'selection.json'))
        self.assertIn(selection['selected'], ['mdr', 'noise', 'stationary'])
        self.assertEqual(selection['run']['seed'], 0)

        grid = pd.read_csv(os.path.join(out, 'grid.csv'))
        self.assertEqual(len(grid), 108)
        self.assertTrue(((grid['reliability'] >= 0) &
                         (grid['reliability'] <= 1)).all())

        shares = pd.read_csv(os.path.join(out, 'decomposition.csv'))
        self.assertAlmostEqual(shares['share'].sum(), 1.0, delta=1e-9)

        sweep = pd.read_csv(os.path.join(out, 'sweep.csv'))
        self.assertEqual(list(sweep.columns), ['sf', 'cost_factor',
                                               'worst_reliability',
                                               'mean_reliability'])
        self.assertEqual(len(sweep), 16)
        self.assertTrue((sweep['worst_reliability'].diff().dropna()
                         >= 0).all())

        report = self.read(out, 'report.txt').decode('utf-8')
        self.assertIn('selected model: %s' % selection['selected'], report)
        self.assertIn('baseline diameter', report)

    def test_deterministic(self):
        a = os.path.join(self.dir, 'serial')
        b = os.path.join(self.dir, 'parallel')
        self.run_pipeline(a)
        self.run_pipeline(b, '-j', '2')
        for name in ('ensembles/mdr.csv', 'selection.csv', 'returns.csv',
                     'grid.csv', 'decomposition.csv', 'sweep.csv',
                     'report.txt'):
            self.assertEqual(self.read(a, name), self.read(b, name), name)
        self.assertEqual(json.loads(self.read(a, 'sweep.json'))['run'],
                         json.loads(self.read(b, 'sweep.json'))['run'])

    def test_all_orders(self):
        out = os.path.join(self.dir, 'orders')
        for command in ('fit', 'select'):
            self.assertEqual(self.main(command, '-c', self.config, '-o', out,
                                       '-q', '--covariates',
                                       'mdr,stationary'), 0)
        self.assertEqual(self.main('decompose', '-c', self.config, '-o', out,
                                   '-q', '--covariates', 'mdr,stationary',
                                   '--all-orders'), 0)
        shares = pd.read_csv(os.path.join(out, 'decomposition.csv'))
        self.assertEqual(len(shares), 18)
        self.assertEqual(len(shares['order'].unique()), 6)
        for _, rows in shares.groupby('order'):
            self.assertAlmostEqual(rows['share'].sum(), 1.0, delta=1e-9)
        self.assertFalse(os.path.isfile(os.path.join(out, 'ensembles',
                                                     'noise.csv')))

    def test_errors(self):
        out = os.path.join(self.dir, 'failing')
        self.assertEqual(self.main('select', '-c', self.config, '-o', out,
                                   '-q'), 1)
        self.assertEqual(self.main('report', '-c', self.config, '-o', out,
                                   '-q'), 1)
        self.assertEqual(self.main('fit', '-q', '-c',
                                   os.path.join(self.dir, 'missing.json')), 1)
        setup.reset()
        self.assertEqual(self.main('fit', '-c', self.config, '-q',
                                   '--covariates', 'nao'), 1)
        setup.reset()
        self.assertEqual(self.main('fit', '-c', self.config, '-q',
                                   '--seed', '-1'), 1)
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                cli.main(['explode'])
