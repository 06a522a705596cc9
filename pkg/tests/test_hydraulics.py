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

import math

from raindings import gev
from raindings import hydraulics as hy


class FormulaTestCase(RaindingsTestCase):

    def setUp(self):
        RaindingsTestCase.setUp(self)
        self.pipe = PipeSpec(1.0, 0.01, 0.9)

    def test_peak_flow(self):
        self.assertAlmostEqual(hy.peak_flow(0.9, 100, 0.25), 6.255,
                               delta=1e-12)
        self.assertEqual(hy.peak_flow(0.9, 0, 0.25), 0.0)
        self.assertAlmostEqual(hy.peak_flow(0.5, 40, 2.0),
                               2 * hy.peak_flow(0.5, 20, 2.0), delta=1e-12)
        with self.assertRaises(ValueError):
            hy.peak_flow(1.5, 10, 1.0)
        with self.assertRaises(ValueError):
            hy.peak_flow(0.5, -1, 1.0)
        with self.assertRaises(ValueError):
            hy.peak_flow(0.5, 10, 0.0)

    def test_capacity(self):
        q = 0.31 / 0.013 * 0.1
        self.assertAlmostEqual(pipe_capacity(self.pipe) / q, 1.0,
                               delta=1e-12)
        self.assertAlmostEqual(pipe_capacity(self.pipe), 2.3846, delta=1e-4)
        half = self.pipe.with_diameter(0.5)
        self.assertAlmostEqual(pipe_capacity(half), 0.3754, delta=1e-4)
        self.assertAlmostEqual(pipe_capacity(half) / pipe_capacity(self.pipe),
                               0.5 ** (8.0 / 3.0), delta=1e-12)

    def test_required_diameter(self):
        q = pipe_capacity(self.pipe)
        self.assertAlmostEqual(hy.required_diameter(q, 0.013, 0.01), 1.0,
                               delta=1e-12)
        for target in (0.01, 0.7, 12.0):
            d = hy.required_diameter(target, 0.015, 0.02)
            p = PipeSpec(d, 0.02, 0.9, 0.015)
            self.assertAlmostEqual(pipe_capacity(p) / target, 1.0,
                                   delta=1e-9)
        self.assertLess(hy.required_diameter(1e-12, 0.013, 0.01), 1e-4)
        with self.assertRaises(ValueError):
            hy.required_diameter(0.0, 0.013, 0.01)

    def test_critical_intensity(self):
        expected = pipe_capacity(self.pipe) / (0.278 * 0.9 * 0.25)
        self.assertAlmostEqual(critical_intensity(self.pipe), expected,
                               delta=1e-12)
        self.assertAlmostEqual(critical_intensity(self.pipe), 38.12,
                               delta=0.01)
        self.assertGreater(critical_intensity(self.pipe.with_diameter(1.2)),
                           critical_intensity(self.pipe))
        self.assertAlmostEqual(
            hy.limit_state(self.pipe, critical_intensity(self.pipe)), 0.0,
            delta=1e-12)
        self.assertLess(hy.limit_state(self.pipe, 50.0), 0.0)

    def test_pipe_spec(self):
        self.assertEqual(self.pipe.manning_n, 0.013)
        self.assertEqual(self.pipe.area, 0.25)
        self.assertEqual(self.pipe.with_runoff(0.5).runoff_c, 0.5)
        with self.assertRaises(ValueError):
            PipeSpec(0.0, 0.01, 0.9)
        with self.assertRaises(ValueError):
            PipeSpec(1.0, 0.01, 0.0)
        with self.assertRaises(TypeError):
            PipeSpec('1', 0.01, 0.9)


class FailureProbabilityTestCase(RaindingsTestCase):

    def setUp(self):
        RaindingsTestCase.setUp(self)
        self.pipe = PipeSpec(1.0, 0.01, 0.9)

    def test_bounded_tail(self):
        # upper support bound 3 + 1 / 0.5 = 5, far below 38 mm/hr
        self.assertEqual(annual_failure_prob(GevParams(3, 0, 1, -0.5), 0.0,
                                             self.pipe), 0.0)

    def test_at_return_level(self):
        params = GevParams(3.0, 0.1, 0.8, 0.1)
        level = return_level(params, 1.5, 100)
        n = 0.013 * level / critical_intensity(self.pipe)
        # the same pipe with a roughness that puts I_crit at the level
        pipe = PipeSpec(1.0, 0.01, 0.9, n)
        self.assertAlmostEqual(critical_intensity(pipe), level, delta=1e-9)
        self.assertAlmostEqual(annual_failure_prob(params, 1.5, pipe), 0.01,
                               delta=1e-9)

    def test_monte_carlo(self):
        params = GevParams(20.0, 0.0, 6.0, 0.1)
        p = annual_failure_prob(params, 0.0, self.pipe)
        x = gev.gev_sample(params.at(0.0), 10 ** 6, misc.rng(0, 'mc'))
        freq = np.mean(x > critical_intensity(self.pipe))
        se = math.sqrt(p * (1 - p) / 10 ** 6)
        self.assertLess(abs(freq - p), 3 * se)


class LifetimeTestCase(RaindingsTestCase):

    def setUp(self):
        RaindingsTestCase.setUp(self)
        self.pipe = PipeSpec(0.8, 0.01, 0.9)
        rng = misc.rng(0, 'test', 'ensemble')
        rows = np.column_stack([3 + 0.2 * rng.standard_normal(500),
                                0.1 + 0.02 * rng.standard_normal(500),
                                0.8 + 0.05 * rng.uniform(size=500),
                                0.1 + 0.03 * rng.standard_normal(500)])
        self.ens = PosteriorEnsemble('mdr', rows, np.zeros(500))

    def test_single_year(self):
        life = LifetimeSpec(2020, 1, [0.7])
        r = lifetime_reliability(self.ens, life, self.pipe)
        expected = np.mean([1 - annual_failure_prob(p, 0.7, self.pipe)
                            for p in self.ens.samples])
        self.assertAlmostEqual(r.reliability, expected, delta=1e-12)
        self.assertAlmostEqual(r.failure_prob, 1 - r.reliability, delta=0)

    def test_mean_of_products(self):
        path = np.linspace(0, 2, 30)
        life = LifetimeSpec(2020, 30, path)
        r = lifetime_reliability(self.ens, life, self.pipe)
        per_sample = [np.prod([1 - annual_failure_prob(p, t, self.pipe)
                               for t in path]) for p in self.ens.samples[:50]]
        samples = hy.lifetime_reliability_samples(self.ens, life, self.pipe)
        self.assertAllClose(samples[:50], per_sample, rtol=1e-10)
        self.assertAlmostEqual(r.reliability, samples.mean(), delta=1e-12)
        self.assertEqual(r.per_year_exceedance.shape, (30,))
        q05, q95 = r.ensemble_spread
        self.assertLessEqual(q05, q95)

    def test_stationary_closed_form(self):
        params = GevParams(3.0, 0.0, 0.8, 0.1)
        ens = PosteriorEnsemble('stationary', [list(params)], [0.0])
        p = annual_failure_prob(params, 0.0, self.pipe)
        for years in (1, 25, 75):
            r = lifetime_reliability(ens, LifetimeSpec.constant(2020, years),
                                     self.pipe)
            self.assertAlmostEqual(r.reliability, (1 - p) ** years,
                                   delta=1e-12)

    def test_constant_path(self):
        life = LifetimeSpec.constant(2020, 40, 1.2)
        samples = hy.lifetime_reliability_samples(self.ens, life, self.pipe)
        for k in (0, 17, 333):
            p = annual_failure_prob(self.ens.samples[k], 1.2, self.pipe)
            self.assertAlmostEqual(samples[k], (1 - p) ** 40, delta=1e-12)

    def test_huge_capacity(self):
        life = LifetimeSpec.constant(2020, 50, 1.0)
        r = lifetime_reliability(self.ens, life,
                                 self.pipe.with_diameter(100.0))
        self.assertEqual(r.reliability, 1.0)

    def test_monotonicity(self):
        life = LifetimeSpec(2020, 30, np.linspace(0, 1, 30))
        r = lambda pipe, life=life: lifetime_reliability(
            self.ens, life, pipe).reliability
        base = r(self.pipe)
        self.assertGreaterEqual(r(self.pipe.with_diameter(0.9)), base)
        self.assertLessEqual(r(self.pipe.with_runoff(0.95)), base)
        self.assertLessEqual(r(PipeSpec(0.8, 0.01, 0.9, 0.015)), base)
        self.assertLessEqual(r(PipeSpec(0.8, 0.01, 0.9, 0.013, 0.3)), base)
        longer = LifetimeSpec(2020, 60, np.linspace(0, 2, 60))
        self.assertLessEqual(r(self.pipe, longer), base)
        self.assertBetween(base, 0.0, 1.0)

    def test_thinning(self):
        life = LifetimeSpec.constant(2020, 10, 0.5)
        full = lifetime_reliability(self.ens, life, self.pipe)
        config(max_reliability_samples=100)
        thin = lifetime_reliability(self.ens, life, self.pipe)
        samples = hy.lifetime_reliability_samples(self.ens.thinned(100),
                                                  life, self.pipe)
        self.assertAlmostEqual(thin.reliability, samples.mean(), delta=1e-12)
        self.assertAlmostEqual(thin.reliability, full.reliability, delta=0.05)

    def test_path_length(self):
        with self.assertRaises(ValueError):
            LifetimeSpec(2020, 3, [0.0, 0.1])

    def test_path_read_only(self):
        path = np.zeros(3)
        life = LifetimeSpec(2020, 3, path)
        path[0] = 5.0
        self.assertEqual(life.covariate_path[0], 0.0)
        with self.assertRaises(ValueError):
            life.covariate_path[0] = 1.0

    def test_from_covariate(self):
        cov = CovariateSeries('mdr', np.arange(2000, 2030),
                              np.linspace(-1, 1, 30))
        life = LifetimeSpec.from_covariate(cov, 2025, 10)
        self.assertAllClose(life.covariate_path[:5], cov.values[25:])
        self.assertAllClose(life.covariate_path[5:], np.full(5, 1.0))

    def test_to_dict(self):
        life = LifetimeSpec.constant(2020, 2)
        d = lifetime_reliability(self.ens, life, self.pipe).to_dict()
        self.assertEqual(d['pipe']['diameter'], 0.8)
        self.assertEqual(d['life']['years'], 2)
        self.assertAlmostEqual(d['reliability'] + d['failure_prob'], 1.0)
