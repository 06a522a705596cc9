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

from raindings import artifacts, plotting, synthetic


class ArtifactsTestCase(RaindingsTestCase):

    def setUp(self):
        RaindingsTestCase.setUp(self)
        self.dir = self.make_tempdir()
        data = synthetic.stationary_dataset(60, GevParams(3.0, 0.0, 0.8, 0.1))
        self.ens = mh_sample(data, None, McmcConfig(n_iterations=1200,
                                                    burn_in=200))

    def test_ensemble(self):
        artifacts.write_ensemble(self.ens, self.dir, {'seed': 0})
        ens = artifacts.read_ensemble(self.dir, self.ens.model_id)
        self.assertEqual(ens.model_id, self.ens.model_id)
        self.assertTrue(np.array_equal(ens.values, self.ens.values))
        self.assertTrue(np.array_equal(ens.log_posteriors,
                                       self.ens.log_posteriors))
        self.assertEqual(ens.acceptance_rates, self.ens.acceptance_rates)
        self.assertEqual(ens.prior.to_dict(), self.ens.prior.to_dict())

        with open(os.path.join(self.dir, 'stationary.json')) as f:
            summary = json.load(f)
        self.assertEqual(summary['run'], {'seed': 0})
        self.assertEqual(summary['n_samples'], 1000)
        self.assertEqual(set(summary['return_levels']),
                         set(str(T) for T in constants.DEFAULT_RETURN_PERIODS))

    def test_missing(self):
        with self.assertRaises(DataError):
            artifacts.read_ensemble(self.dir, 'mdr')
        with self.assertRaises(DataError):
            artifacts.read_json(os.path.join(self.dir, 'nothing.json'))
        self.write_text(self.dir, 'broken.json', '[1, 2')
        with self.assertRaises(DataError):
            artifacts.read_json(os.path.join(self.dir, 'broken.json'))

    def test_columns(self):
        artifacts.write_ensemble(self.ens, self.dir)
        self.write_text(self.dir, 'stationary.csv', 'mu0,sigma\n1,2\n')
        with self.assertRaises(DataError):
            artifacts.read_ensemble(self.dir, 'stationary')

    def test_svg_deterministic(self):
        grid = ScenarioGrid([constants.CLIMATE, constants.RUNOFF],
                            [['a', 'b'], [0.5, 0.9]],
                            [[0.9, 0.7], [0.8, 0.4]])
        results = {'climate-runoff': stage_uncertainty(grid)}
        a = plotting.shares_chart(results, os.path.join(self.dir, 'a.svg'))
        b = plotting.shares_chart(results, os.path.join(self.dir, 'b.svg'))
        with open(a, 'rb') as fa, open(b, 'rb') as fb:
            self.assertEqual(fa.read(), fb.read())


class SyntheticTestCase(RaindingsTestCase):

    def test_deterministic(self):
        params = GevParams(3.0, 0.2, 0.8, 0.05)
        a, cov = synthetic.trend_dataset(50, params, seed=3)
        b, _ = synthetic.trend_dataset(50, params, seed=3)
        c, _ = synthetic.trend_dataset(50, params, seed=4)
        self.assertTrue(np.array_equal(a.x, b.x))
        self.assertFalse(np.array_equal(a.x, c.x))
        self.assertAlmostEqual(cov.values.mean(), 0.0, places=12)
        self.assertEqual(a.model_id, 'trend')

    def test_positive(self):
        data = synthetic.stationary_dataset(200, GevParams(0.5, 0, 1.0, -0.2))
        self.assertTrue(np.all(data.x > 0))
        self.assertTrue(data.is_stationary)

    def test_sample_project(self):
        d = self.make_tempdir()
        path = synthetic.write_sample_project(d, seed=1)
        with open(path) as f:
            config = json.load(f)
        self.assertEqual(config['seed'], 1)
        maxima = load_maxima_csv(os.path.join(d, 'maxima.csv'))
        self.assertEqual(maxima.years[0], synthetic.SAMPLE_HISTORY[0])
        self.assertEqual(maxima.years[-1], synthetic.SAMPLE_HISTORY[1])
