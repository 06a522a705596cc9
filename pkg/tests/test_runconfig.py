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

import json

from raindings import synthetic
from raindings.runconfig import RunConfig


class RunConfigTestCase(RaindingsTestCase):

    def setUp(self):
        RaindingsTestCase.setUp(self)
        self.dir = self.make_tempdir()
        self.path = synthetic.write_sample_project(self.dir)
        with open(self.path, encoding='utf-8') as f:
            self.data = json.load(f)

    def make(self, **changes):
        return RunConfig(dict(self.data, **changes), self.dir)

    def test_load(self):
        rc = RunConfig.load(self.path)
        self.assertEqual(rc.station, 'sample')
        self.assertEqual(rc.candidates, ['mdr', 'noise', 'stationary'])
        self.assertEqual(sorted(rc.covariates), ['mdr', 'noise'])
        self.assertTrue(os.path.isabs(rc.maxima))
        self.assertEqual(len(rc.climate), 9)
        self.assertEqual(rc.climate[0][0], 'model_1')
        self.assertEqual(rc.fit_window, (1951, 2018))
        self.assertEqual(rc.runoff_options, [0.5, 0.7, 0.8, 0.9])
        self.assertEqual(rc.lifetimes, [25, 50, 75])
        self.assertEqual(rc.stage_order, [constants.CLIMATE,
                                          constants.RUNOFF,
                                          constants.LIFETIME])
        self.assertEqual(len(rc.sf_grid), 16)
        self.assertEqual(rc.sf_grid[-1], 2.5)
        self.assertEqual(rc.robustness, constants.WORST_CASE)
        self.assertIsNone(rc.design_intensity)
        self.assertEqual(rc.out, os.path.join(self.dir, 'out'))

    def test_defaults(self):
        data = {'maxima': 'maxima.csv', 'pipe': {'slope': 0.02}}
        rc = RunConfig(data, self.dir)
        self.assertEqual(rc.candidates, [constants.STATIONARY])
        self.assertEqual(rc.station, 'maxima')
        self.assertEqual(rc.runoff_c, 0.9)
        self.assertEqual(rc.manning_n, constants.DEFAULT_MANNING_N)
        self.assertEqual(rc.standard_periods, [100, 500])
        self.assertEqual(rc.return_periods,
                         list(constants.DEFAULT_RETURN_PERIODS))
        self.assertEqual(rc.climate, [])

    def test_errors(self):
        cases = [
            dict(colour='red'),
            dict(pipe={'slope': 0.01, 'width': 2}),
            dict(daily='maxima.csv'),
            dict(maxima='nonexistent.csv'),
            dict(candidates=['nao']),
            dict(candidates=['mdr', 'mdr']),
            dict(candidates=[]),
            dict(pipe={'runoff_c': 0.9}),
            dict(pipe={'slope': 0.01, 'runoff_c': 1.5}),
            dict(fit_window=[2018, 1951]),
            dict(scenarios={'stage_order': ['climate', 'runoff']}),
            dict(scenarios={'lifetimes': [25, 50, 25]}),
            dict(scenarios={'runoff_options': [0.5, 0.5]}),
            dict(design={'cost_table': {'1.2': 1.4, '2.0': 3.0}}),
            dict(design={'sf_min': 0.2}),
            dict(design={'sf_min': 2.0, 'sf_max': 1.0}),
            dict(design={'robustness': 'median'}),
            dict(design={'cost_table': {'1.0': 1.0, '2.0': 0.5}}),
            dict(prior={'shape': {'sd': 1.0}}),
            dict(prior={'sigma': {'sd': 0.0}}),
        ]
        for changes in cases:
            with self.assertRaises(ConfigError, msg=repr(changes)):
                self.make(**changes)

    def test_load_errors(self):
        with self.assertRaises(ConfigError):
            RunConfig.load(os.path.join(self.dir, 'missing.json'))
        path = self.write_text(self.dir, 'broken.json', '{"maxima": ')
        with self.assertRaises(ConfigError):
            RunConfig.load(path)

    def test_apply(self):
        self.make(seed=5, mcmc={'n_iterations': 2000, 'burn_in': 500}).apply()
        self.assertEqual(setup.get_config('seed'), 5)
        self.assertEqual(setup.get_config('n_iterations'), 2000)
        self.assertEqual(setup.get_config('max_reliability_samples'), 1000)

        # command line settings win
        setup._config_impl(override=True, seed=9)
        self.make(seed=5).apply()
        self.assertEqual(setup.get_config('seed'), 9)

        with self.assertRaises(ConfigError):
            self.make(mcmc={'n_iterations': 100, 'burn_in': 500}).apply()

    def test_hash(self):
        a = self.make()
        a.apply()
        h = a.config_hash()
        self.assertEqual(len(h), 64)
        self.assertEqual(self.make(out='elsewhere', jobs=4).config_hash(), h)

        setup.config(seed=1)
        self.assertNotEqual(a.config_hash(), h)
        setup.config(seed=0)
        self.assertEqual(a.config_hash(), h)

        b = self.make(pipe={'slope': 0.02})
        self.assertNotEqual(b.config_hash(), h)
        self.assertEqual(a.meta(), {'seed': 0, 'config_hash': h})

    def test_mcmc_config(self):
        rc = self.make(mcmc={'n_iterations': 2000, 'burn_in': 500,
                             'proposal_scales': {'mu0': 0.2}})
        rc.apply()
        c = rc.mcmc_config('fit', 'mdr')
        self.assertEqual(c.n_iterations, 2000)
        self.assertEqual(c.burn_in, 500)
        self.assertEqual(c.stream, ('fit', 'mdr'))
