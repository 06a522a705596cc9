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

from raindings import bayes_fit
from raindings import synthetic
from raindings.gev import GevAt, gev_pdf


def _ensemble(rows, log_posteriors, model_id='mdr'):
    return PosteriorEnsemble(model_id, rows, log_posteriors)


class LikelihoodTestCase(RaindingsTestCase):

    def test_single_point(self):
        m = AnnualMaximaSeries('s', [2000], [5.0])
        d = AlignedDataset.stationary(m)
        self.assertAlmostEqual(
            bayes_fit.log_likelihood(d, GevParams(5.0, 0.0, 1.0, 0.0)), -1.0,
            places=12)

    def test_invalid_scale(self):
        d = synthetic.stationary_dataset(20, GevParams(3, 0, 1, 0.1))
        self.assertEqual(
            bayes_fit.log_likelihood(d, GevParams(3, 0, -1, 0.1)), -np.inf)

    def test_outside_support(self):
        m = AnnualMaximaSeries('s', [2000, 2001], [1.0, 10.0])
        d = AlignedDataset.stationary(m)
        # upper bound 2 + 1 / 0.5 = 4 < 10
        self.assertEqual(
            bayes_fit.log_likelihood(d, GevParams(2, 0, 1, -0.5)), -np.inf)

    def test_product_of_densities(self):
        m = AnnualMaximaSeries('s', [2000, 2001, 2002], [2.5, 3.1, 4.7])
        c = CovariateSeries('mdr', [2000, 2001, 2002], [-0.5, 0.2, 1.3])
        d = align(m, c)
        p = GevParams(3.0, 0.1, 0.9, 0.15)
        expected = sum(math.log(gev_pdf(x, p.at(t)))
                       for x, t in zip(d.x, d.t))
        self.assertAlmostEqual(bayes_fit.log_likelihood(d, p), expected,
                               delta=1e-12)

    def test_log_prior(self):
        prior = PriorSpec()
        expected = -0.5 * math.log(2 * math.pi * 100) * 4 - 1.0 / 200
        self.assertAlmostEqual(
            bayes_fit.log_prior(GevParams(0, 0, 1, 0), prior), expected,
            places=12)
        self.assertEqual(bayes_fit.log_prior(GevParams(0, 0, 0, 0), prior),
                         -np.inf)

    def test_log_prior_custom(self):
        prior = PriorSpec({'mu0': 3.0}, {'mu0': 1.0})
        p = GevParams(4.0, 0, 1, 0)
        self.assertAlmostEqual(
            bayes_fit.log_prior(p, prior) - bayes_fit.log_prior(p, PriorSpec()),
            (-0.5 - 0.5 * math.log(2 * math.pi)) -
            (-0.5 * 16 / 100 - 0.5 * math.log(2 * math.pi * 100)),
            places=12)

    def test_prior_spec(self):
        with self.assertRaises(ValueError):
            PriorSpec(sds={'sigma': 0.0})
        with self.assertRaises(ValueError):
            PriorSpec(means={'shape': 0.0})
        p = PriorSpec.from_dict(PriorSpec({'xi': 0.1}).to_dict())
        self.assertAllClose(p.means, [0, 0, 0, 0.1])
        self.assertAllClose(p.sds, [10, 10, 10, 10])


class McmcConfigTestCase(RaindingsTestCase):

    def test_defaults(self):
        c = McmcConfig()
        self.assertEqual(c.n_iterations, 3000)
        self.assertEqual(c.burn_in, 1000)
        self.assertEqual(c.n_samples, 2000)
        self.assertEqual(c.seed, 0)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            McmcConfig(n_iterations=100, burn_in=100)
        with self.assertRaises(ValueError):
            McmcConfig(proposal_scales={'shape': 1.0})
        with self.assertRaises(ValueError):
            McmcConfig(proposal_scales={'xi': -1.0})

    def test_replace(self):
        c = McmcConfig(seed=3).replace(stream=('fit', 'mdr'))
        self.assertEqual(c.seed, 3)
        self.assertEqual(c.stream, ('fit', 'mdr'))


class SamplerTestCase(RaindingsTestCase):

    def test_gaussian_toy(self):
        # correlated bivariate normal with known moments
        mean = np.array([1.0, -2.0])
        cov = np.array([[1.0, 0.6], [0.6, 4.0]])
        prec = np.linalg.inv(cov)

        def log_density(theta):
            d = np.asarray(theta) - mean
            return -0.5 * float(d @ prec @ d)

        samples, lps, rates, scales = bayes_fit.metropolis_within_gibbs(
            log_density, [0.0, 0.0], [1.0, 1.0], 30000, 3000,
            misc.rng(0, 'test', 'toy'), adapt=True)

        self.assertEqual(samples.shape, (27000, 2))
        for j in range(2):
            ess = bayes_fit.effective_sample_size(samples[:, j])
            se = math.sqrt(cov[j, j] / ess)
            self.assertLess(abs(samples[:, j].mean() - mean[j]), 4 * se)
            self.assertAlmostEqual(samples[:, j].var() / cov[j, j], 1.0,
                                   delta=0.15)
            self.assertBetween(rates[j], 0.15, 0.6)

    def test_frozen_after_burn_in(self):
        def log_density(theta):
            return -0.5 * theta[0] ** 2

        # no burn-in: nothing to adapt
        _, _, _, scales = bayes_fit.metropolis_within_gibbs(
            log_density, [0.0], [1.0], 500, 0, misc.rng(0, 'a'), adapt=True)
        self.assertEqual(scales, [1.0])

        _, _, _, scales = bayes_fit.metropolis_within_gibbs(
            log_density, [0.0], [1.0], 600, 500, misc.rng(0, 'a'))
        self.assertEqual(scales, [1.0])

        _, _, _, scales = bayes_fit.metropolis_within_gibbs(
            log_density, [0.0], [1.0], 600, 500, misc.rng(0, 'a'),
            adapt=True)
        self.assertNotEqual(scales, [1.0])

    def test_bad_start(self):
        with self.assertRaises(InitializationError):
            bayes_fit.metropolis_within_gibbs(
                lambda theta: -np.inf, [0.0], [1.0], 10, 5, misc.rng(0))

    def test_deterministic(self):
        d, _ = synthetic.trend_dataset(40, GevParams(3.0, 0.1, 0.8, 0.05))
        a = mh_sample(d, None, McmcConfig(seed=5))
        b = mh_sample(d, None, McmcConfig(seed=5))
        self.assertTrue(np.array_equal(a.values, b.values))
        self.assertTrue(np.array_equal(a.log_posteriors, b.log_posteriors))
        c = mh_sample(d, None, McmcConfig(seed=6))
        self.assertFalse(np.array_equal(a.values, c.values))

    def test_streams_independent(self):
        d, _ = synthetic.trend_dataset(40, GevParams(3.0, 0.1, 0.8, 0.05))
        a = mh_sample(d, None, McmcConfig(stream=('fit', 'a')))
        b = mh_sample(d, None, McmcConfig(stream=('fit', 'b')))
        self.assertFalse(np.array_equal(a.values, b.values))

    def test_recovery_stationary(self):
        # full-length default chains
        setup.reset()
        truth = GevParams(10.0, 0.0, 2.0, 0.1)
        d = synthetic.stationary_dataset(500, truth, seed=1)
        ens = mh_sample(d, None, McmcConfig())

        self.assertEqual(len(ens), 40000)
        self.assertEqual(ens.n_params, 3)
        self.assertTrue(np.all(ens.column('a_mu') == 0.0))
        self.assertEqual(ens.acceptance_rates['a_mu'], 0.0)
        for name in ('mu0', 'sigma', 'xi'):
            col = ens.column(name)
            self.assertLess(abs(col.mean() - getattr(truth, name)),
                            3 * col.std(), name)

    def test_recovery_trend(self):
        setup.reset()
        truth = GevParams(3.0, 0.3, 0.5, 0.0)
        d, _ = synthetic.trend_dataset(200, truth, seed=2)
        ens = mh_sample(d, None, McmcConfig())
        self.assertEqual(len(ens), 40000)
        self.assertEqual(ens.n_params, 4)
        self.assertGreater(ens.column('a_mu').mean(), 0.0)
        for name in constants.PARAMETER_NAMES:
            col = ens.column(name)
            self.assertLess(abs(col.mean() - getattr(truth, name)),
                            3 * col.std(), name)

    def test_ensemble_invariants(self):
        d, _ = synthetic.trend_dataset(40, GevParams(3.0, 0.1, 0.8, 0.05))
        ens = mh_sample(d)
        self.assertTrue(np.all(ens.column('sigma') > 0))
        self.assertTrue(np.all(np.isfinite(ens.log_posteriors)))
        for rate in ens.acceptance_rates.values():
            self.assertBetween(rate, 0.0, 1.0)
        self.assertEqual(set(ens.diagnostics['ess']),
                         set(constants.PARAMETER_NAMES))
        # log posterior = log likelihood + log prior
        k = len(ens) // 2
        p = ens.samples[k]
        self.assertAlmostEqual(
            ens.log_posteriors[k],
            bayes_fit.log_likelihood(d, p) + bayes_fit.log_prior(p, ens.prior),
            places=8)
        with self.assertRaises(ValueError):
            ens.values[0, 0] = 1.0

    def test_degenerate_data(self):
        m = AnnualMaximaSeries('s', np.arange(2000, 2015), np.full(15, 2.0))
        ens = mh_sample(AlignedDataset.stationary(m))
        self.assertIn('degenerate_data', ens.diagnostics['flags'])
        self.assertTrue(np.all(ens.column('sigma') > 0))

    def test_short_record_warns(self):
        d = synthetic.stationary_dataset(8, GevParams(3, 0, 1, 0.1))
        with self.assertLogs('raindings', level='WARNING'):
            mh_sample(d)


class EnsembleTestCase(RaindingsTestCase):

    def test_map_single(self):
        ens = _ensemble([[3, 0.1, 1, 0.1]], [-2.0])
        self.assertEqual(map_estimate(ens), GevParams(3, 0.1, 1, 0.1))

    def test_map_argmax(self):
        ens = _ensemble([[3, 0, 1, 0], [4, 0, 1, 0], [5, 0, 1, 0]],
                        [-5.0, -3.0, -3.0])
        self.assertEqual(map_estimate(ens).mu0, 4.0)

    def test_return_levels_identical(self):
        ens = _ensemble([[3, 0.1, 1, 0.1]] * 5, [-1.0] * 5)
        s = ensemble_return_levels(ens, 0.5, 100)
        level = return_level(GevParams(3, 0.1, 1, 0.1), 0.5, 100)
        self.assertAlmostEqual(s.mean, level, places=12)
        self.assertAlmostEqual(s.q05, level, places=12)
        self.assertAlmostEqual(s.q95, level, places=12)

    def test_return_levels_summary(self):
        rng = misc.rng(0, 'test')
        rows = np.column_stack([3 + 0.1 * rng.standard_normal(200),
                                np.zeros(200),
                                1 + 0.05 * rng.uniform(size=200),
                                0.1 * rng.standard_normal(200)])
        ens = _ensemble(rows, np.zeros(200))
        s = ensemble_return_levels(ens, 0.0, 500)
        levels = [return_level(p, 0.0, 500) for p in ens.samples]
        self.assertAlmostEqual(s.mean, np.mean(levels), delta=1e-12)
        self.assertLessEqual(s.q05, s.q50)
        self.assertLessEqual(s.q50, s.q95)

    def test_map_below_mean_when_skewed(self):
        ens = mh_sample(synthetic.heavy_tail_dataset())
        best = map_estimate(ens)
        gaps = {}
        for T in (100, 500):
            levels = bayes_fit.ensemble_return_level_samples(ens, 0.0, T)
            centered = levels - levels.mean()
            skew = (centered ** 3).mean() / (centered ** 2).mean() ** 1.5
            self.assertGreater(skew, 0.0, T)
            gaps[T] = levels.mean() - return_level(best, 0.0, T)
            self.assertGreater(gaps[T], 0.0, T)
        self.assertGreater(gaps[500], gaps[100])

    def test_empty(self):
        ens = PosteriorEnsemble('mdr', np.empty((0, 4)), [])
        with self.assertRaises(RaindingsError):
            map_estimate(ens)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            _ensemble([[3, 0, -1, 0]], [-1.0])
        with self.assertRaises(ValueError):
            _ensemble([[3, 0, 1, 0]], [np.nan])
        with self.assertRaises(ValueError):
            _ensemble([[3, 0, 1, 0]], [-1.0, -2.0])

    def test_thinned(self):
        rows = [[3, 0, 1 + i, 0] for i in range(10)]
        ens = _ensemble(rows, np.arange(10.0))
        t = ens.thinned(4)
        self.assertEqual(len(t), 4)
        self.assertAllClose(t.column('sigma'), [1, 3, 6, 8])
        self.assertIs(ens.thinned(None), ens)
        self.assertIs(ens.thinned(20), ens)


class DiagnosticsTestCase(RaindingsTestCase):

    def test_ess_independent(self):
        x = misc.rng(0, 'ess').standard_normal(20000)
        self.assertBetween(bayes_fit.effective_sample_size(x), 16000, 24000)

    def test_ess_autocorrelated(self):
        rng = misc.rng(0, 'ar')
        e = rng.standard_normal(50000)
        x = np.empty(50000)
        x[0] = e[0]
        for i in range(1, 50000):
            x[i] = 0.9 * x[i - 1] + e[i]
        # (1 - phi) / (1 + phi) of the chain length
        self.assertBetween(bayes_fit.effective_sample_size(x) / 50000.0,
                           0.035, 0.075)

    def test_ess_constant(self):
        self.assertEqual(bayes_fit.effective_sample_size(np.ones(100)), 100.0)

    def test_geweke(self):
        x = misc.rng(0, 'geweke').standard_normal(10000)
        self.assertLess(abs(bayes_fit.geweke_z(x)), 4.0)
        drift = np.linspace(0, 10, 10000) + x
        self.assertGreater(abs(bayes_fit.geweke_z(drift)), 4.0)
