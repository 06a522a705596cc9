# -*- coding: utf-8 -*-
#
# raindings
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#

"""
Bayesian estimation of GEV parameters with a component-wise random-walk
Metropolis-Hastings sampler.
"""

import raindings.arguments as _arguments
import raindings.constants as _constants
import raindings.gev as _gev
import raindings.misc as _misc
import raindings.setup as _setup
import raindings.timeseries_io as _tio
import raindings.util as _util

import collections as _collections
import logging as _logging
import math as _math

import numpy as _np

_log = _logging.getLogger(__name__)


_NAMES = _constants.PARAMETER_NAMES

_nonnegative = _arguments.each(
    _util.integer, _arguments.condition(lambda x: x >= 0, 'x >= 0'))

# sampler tuning
ADAPT_TARGET = 0.3
MAX_INIT_ATTEMPTS = 1000
MIN_YEARS = 10


class PriorSpec(object):
    """
    PriorSpec(means=None, sds=None)

    Independent Gaussian priors on mu0, a_mu, sigma and xi. Unspecified
    parameters default to N(0, 100), i.e. mean 0 and standard deviation 10.
    The scale prior is truncated to sigma > 0.

    :param means: mapping from parameter name to prior mean.
    :param sds: mapping from parameter name to prior standard deviation.
    """
    @_arguments.accept(None,
        _arguments.nullable({str: _util.finite}),
        _arguments.nullable({str: _util.positive}))
    def __init__(self, means=None, sds=None):
        means = means or {}
        sds = sds or {}
        for k in list(means) + list(sds):
            if k not in _NAMES:
                raise ValueError("unknown parameter %r" % k)
        self.means = _np.array([means.get(k, 0.0) for k in _NAMES])
        self.sds = _np.array([sds.get(k, 10.0) for k in _NAMES])

    def __repr__(self):
        return 'PriorSpec(means=%r, sds=%r)' % (
            dict(zip(_NAMES, self.means.tolist())),
            dict(zip(_NAMES, self.sds.tolist())))

    def to_dict(self):
        return {'means': dict(zip(_NAMES, self.means.tolist())),
                'sds': dict(zip(_NAMES, self.sds.tolist()))}

    @classmethod
    def from_dict(cls, d):
        return cls(d.get('means'), d.get('sds'))


class McmcConfig(object):
    """
    McmcConfig(n_iterations=None, burn_in=None, seed=None,
               proposal_scales=None, adapt=None, stream=('chain', 0))

    Sampler settings. One iteration is one sweep over all free parameters.
    Unset values fall back to the global configuration (50000 iterations,
    10000 burn-in, adaptation on, seed 0).

    :param proposal_scales: random-walk standard deviation per parameter
        name; missing entries are derived from the data.
    :param stream: names of the random sub-stream of seed used by this
        chain, so that concurrent chains draw independent numbers.
    """
    @_arguments.accept(None,
        _arguments.nullable(_util.count),
        _arguments.nullable(_nonnegative),
        _arguments.nullable(_nonnegative),
        _arguments.nullable({str: _util.positive}),
        _arguments.nullable(bool),
        tuple)
    def __init__(self, n_iterations=None, burn_in=None, seed=None,
                 proposal_scales=None, adapt=None, stream=('chain', 0)):
        self.n_iterations = (n_iterations if n_iterations is not None
                             else _setup.get_config('n_iterations'))
        self.burn_in = (burn_in if burn_in is not None
                        else _setup.get_config('burn_in'))
        self.seed = seed if seed is not None else _setup.get_config('seed')
        self.adapt = adapt if adapt is not None else _setup.get_config('adapt')
        self.proposal_scales = dict(proposal_scales or {})
        self.stream = stream

        for k in self.proposal_scales:
            if k not in _NAMES:
                raise ValueError("unknown parameter %r" % k)
        if self.burn_in >= self.n_iterations:
            raise ValueError("burn_in (%d) must be smaller than n_iterations "
                             "(%d)" % (self.burn_in, self.n_iterations))

    @property
    def n_samples(self):
        return self.n_iterations - self.burn_in

    def replace(self, **kwargs):
        d = dict(n_iterations=self.n_iterations, burn_in=self.burn_in,
                 seed=self.seed, proposal_scales=self.proposal_scales,
                 adapt=self.adapt, stream=self.stream)
        d.update(kwargs)
        return McmcConfig(**d)

    def __repr__(self):
        return ('McmcConfig(n_iterations=%d, burn_in=%d, seed=%d, adapt=%r, '
                'stream=%r)' % (self.n_iterations, self.burn_in, self.seed,
                                self.adapt, self.stream))

    def to_dict(self):
        return {'n_iterations': self.n_iterations, 'burn_in': self.burn_in,
                'seed': self.seed, 'adapt': self.adapt,
                'proposal_scales': dict(self.proposal_scales),
                'stream': [str(s) for s in self.stream]}


ReturnLevelSummary = _collections.namedtuple('ReturnLevelSummary',
                                             'mean q05 q50 q95')


class PosteriorEnsemble(object):
    """
    PosteriorEnsemble(model_id, values, log_posteriors, log_likelihoods=None,
                      config=None, prior=None, acceptance_rates=None,
                      diagnostics=None, station_id='', data_key=None)

    The retained MCMC samples of one fit. Immutable after construction.

    :param values: array of shape (n, 4), columns mu0, a_mu, sigma, xi.
    :param log_posteriors: unnormalized log posterior of each sample.
    :param log_likelihoods: log likelihood of each sample, if known.
    :param data_key: :meth:`AlignedDataset.fingerprint` of the data the
        log likelihoods were computed on.
    """
    def __init__(self, model_id, values, log_posteriors, log_likelihoods=None,
                 config=None, prior=None, acceptance_rates=None,
                 diagnostics=None, station_id='', data_key=None):
        values = _np.array(values, dtype=float).reshape(-1, 4)
        log_posteriors = _np.array(log_posteriors, dtype=float).reshape(-1)
        if len(log_posteriors) != len(values):
            raise ValueError("one log posterior per sample required")
        if _np.any(values[:, 2] <= 0):
            raise ValueError("every sample must have a positive scale")
        if not _np.all(_np.isfinite(log_posteriors)):
            raise ValueError("log posteriors must be finite")
        if config is not None and len(values) != config.n_samples:
            raise ValueError("expected %d samples, got %d" %
                             (config.n_samples, len(values)))
        if log_likelihoods is not None:
            log_likelihoods = _np.array(log_likelihoods,
                                        dtype=float).reshape(-1)
            if len(log_likelihoods) != len(values):
                raise ValueError("one log likelihood per sample required")
            log_likelihoods.setflags(write=False)

        values.setflags(write=False)
        log_posteriors.setflags(write=False)
        self.model_id = model_id
        self.station_id = station_id
        self.values = values
        self.log_posteriors = log_posteriors
        self.log_likelihoods = log_likelihoods
        self.data_key = data_key if log_likelihoods is not None else None
        self.config = config
        self.prior = prior
        self.acceptance_rates = dict(acceptance_rates or {})
        self.diagnostics = dict(diagnostics or {})

    @property
    def is_stationary(self):
        return self.model_id == _constants.STATIONARY

    @property
    def n_params(self):
        return 3 if self.is_stationary else 4

    @property
    def samples(self):
        return [_gev.GevParams(*row) for row in self.values.tolist()]

    def column(self, name):
        return self.values[:, _NAMES.index(name)]

    def mean_params(self):
        return _gev.GevParams(*self.values.mean(axis=0).tolist())

    def thinned(self, max_samples):
        """
        Return an ensemble keeping at most max_samples samples at an even
        stride (first sample always kept). Deterministic.
        """
        n = len(self)
        if max_samples is None or n <= max_samples:
            return self
        idx = _np.floor(_np.arange(max_samples) * (n / max_samples))
        idx = idx.astype(int)
        ll = (self.log_likelihoods[idx]
              if self.log_likelihoods is not None else None)
        return PosteriorEnsemble(self.model_id, self.values[idx],
                                 self.log_posteriors[idx], ll, None,
                                 self.prior, self.acceptance_rates,
                                 self.diagnostics, self.station_id,
                                 self.data_key)

    def cached_log_likelihoods(self, data):
        """
        The stored log likelihoods if they were computed on data, else None.
        """
        if self.log_likelihoods is None or self.data_key is None:
            return None
        if self.data_key != data.fingerprint():
            return None
        return self.log_likelihoods

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return 'PosteriorEnsemble(%r, %d samples)' % (self.model_id, len(self))


def _loglik(x, t, mu0, a_mu, sigma, xi):
    """
    Log likelihood of data x at covariate values t. Scalar parameters;
    this is the sampler's inner loop, so it avoids masks and broadcasting.
    """
    if not sigma > 0:
        return -_math.inf
    z = (x - mu0 * (1.0 + a_mu * t)) / sigma
    n = len(x)
    if abs(xi) < _constants.GUMBEL_THRESHOLD:
        return -n * _math.log(sigma) - float(z.sum()) - float(
            _np.exp(-z).sum())
    tz = 1.0 + xi * z
    if tz.min() <= 0:
        return -_math.inf
    lt = _np.log(tz)
    return (-n * _math.log(sigma) - (1.0 + 1.0 / xi) * float(lt.sum())
            - float(_np.exp(-lt / xi).sum()))


def _logprior(theta, means, sds):
    if not theta[2] > 0:
        return -_math.inf
    r = 0.0
    for v, m, s in zip(theta, means, sds):
        d = (v - m) / s
        r -= 0.5 * d * d + _math.log(s) + 0.5 * _math.log(2 * _math.pi)
    return r


def _logprior_array(values, prior):
    """
    Log prior of each row of values (shape (n, 4)).
    """
    d = (values - prior.means) / prior.sds
    r = -0.5 * (d ** 2).sum(axis=1) - (_np.log(prior.sds).sum()
                                       + 2.0 * _math.log(2 * _math.pi))
    return _np.where(values[:, 2] > 0, r, -_np.inf)


class _LogPosterior(object):
    def __init__(self, data, prior):
        self.x = _np.ascontiguousarray(data.x, dtype=float)
        self.t = _np.ascontiguousarray(data.t, dtype=float)
        self.means = prior.means.tolist()
        self.sds = prior.sds.tolist()

    def __call__(self, theta):
        lp = _logprior(theta, self.means, self.sds)
        if lp == -_math.inf:
            return lp
        return lp + _loglik(self.x, self.t, *theta)


@_arguments.accept(_tio.AlignedDataset, None)
def log_likelihood(data, params):
    """
    log_likelihood(data, params)

    Sum of GEV log densities of the annual maxima at their covariate
    values. -inf if any observation lies outside the support or the scale
    is not positive.
    """
    theta = [float(v) for v in params]
    return _loglik(data.x, data.t, *theta)


@_arguments.accept(None, PriorSpec)
def log_prior(params, prior):
    """
    log_prior(params, prior)

    Sum of the independent Gaussian log prior densities; -inf for
    sigma <= 0.
    """
    return _logprior([float(v) for v in params], prior.means.tolist(),
                     prior.sds.tolist())


def metropolis_within_gibbs(log_density, start, scales, n_iterations,
                            burn_in, rng, adapt=False, free=None):
    """
    Component-wise Gaussian random-walk Metropolis sampler.

    Each iteration updates the free components one after another. During
    burn-in, if adapt is set, each component's step size follows a
    Robbins-Monro recursion toward the target acceptance rate; after
    burn-in the step sizes are frozen.

    :param log_density: function of a list of floats returning the log
        target density (-inf allowed).
    :param start: starting point with finite log density.
    :param scales: initial step size per component.
    :param free: indices of the components to update (default: all).
    :return: (samples, log_densities, acceptance_rates, final_scales) for
        the iterations after burn-in.
    """
    theta = [float(v) for v in start]
    k = len(theta)
    free = list(range(k)) if free is None else list(free)
    lp = log_density(theta)
    if not _math.isfinite(lp):
        raise _misc.InitializationError("start point has log density %r" % lp)

    log_scales = [_math.log(s) for s in scales]
    kept = n_iterations - burn_in
    samples = _np.empty((kept, k))
    log_densities = _np.empty(kept)
    accepted = [0] * k

    steps = rng.standard_normal((n_iterations, k))
    log_u = _np.log(rng.uniform(size=(n_iterations, k)))

    for i in range(n_iterations):
        step_row = steps[i].tolist()
        u_row = log_u[i].tolist()
        adapting = adapt and i < burn_in
        gain = 1.0 / (i + 1) ** 0.6

        for j in free:
            prop = list(theta)
            prop[j] += _math.exp(log_scales[j]) * step_row[j]
            lp_prop = log_density(prop)
            ok = lp_prop != -_math.inf and u_row[j] < lp_prop - lp
            if ok:
                theta, lp = prop, lp_prop
            if adapting:
                log_scales[j] += gain * ((1.0 if ok else 0.0) - ADAPT_TARGET)
            elif i >= burn_in and ok:
                accepted[j] += 1

        if i >= burn_in:
            samples[i - burn_in] = theta
            log_densities[i - burn_in] = lp

    rates = [accepted[j] / float(kept) if j in free else 0.0
             for j in range(k)]
    return samples, log_densities, rates, [_math.exp(s) for s in log_scales]


def _initial_point(data):
    """
    Method-of-moments Gumbel estimates: sigma from the standard deviation,
    mu0 from the mean, xi = a_mu = 0.
    """
    x = data.x
    sd = float(x.std(ddof=1)) if len(x) > 1 else 0.0
    sigma = sd * _math.sqrt(6.0) / _math.pi
    if not sigma > 0:
        sigma = max(1e-3 * abs(float(x.mean())), 1e-6)
    mu0 = float(x.mean()) - _constants.EULER_GAMMA * sigma
    return [mu0, 0.0, sigma, 0.0]


def _default_scales(start):
    sigma = start[2]
    return {'mu0': 0.1 * sigma, 'a_mu': 0.02, 'sigma': 0.1 * sigma,
            'xi': 0.05}


@_arguments.accept(_tio.AlignedDataset, _arguments.nullable(PriorSpec),
                   _arguments.nullable(McmcConfig))
def mh_sample(data, prior=None, config=None):
    """
    mh_sample(data, prior=None, config=None)

    Sample the posterior of the GEV parameters given data. For the
    stationary model (covariate named 'stationary') a_mu is held at 0.
    The result is fully determined by (data, prior, config).

    :raise InitializationError: if no starting point with finite posterior
        is found.
    """
    prior = prior if prior is not None else PriorSpec()
    config = config if config is not None else McmcConfig()

    if len(data) < MIN_YEARS:
        _log.warning("%r has only %d years; the fit will be poorly "
                     "constrained", data, len(data))

    logpost = _LogPosterior(data, prior)
    init_rng = _misc.rng(config.seed, 'init', *config.stream)
    chain_rng = _misc.rng(config.seed, *config.stream)

    start = _initial_point(data)
    scales_map = _default_scales(start)
    scales_map.update(config.proposal_scales)
    scales = [scales_map[k] for k in _NAMES]
    free = [0, 2, 3] if data.is_stationary else [0, 1, 2, 3]

    point = list(start)
    for attempt in range(MAX_INIT_ATTEMPTS):
        if _math.isfinite(logpost(point)):
            break
        point = list(start)
        for j in free:
            point[j] += scales[j] * (1 + attempt) * init_rng.standard_normal()
        point[2] = abs(point[2])
    else:
        raise _misc.InitializationError(
            "no starting point with finite posterior found for %r after %d "
            "attempts" % (data, MAX_INIT_ATTEMPTS))

    samples, lps, rates, final_scales = metropolis_within_gibbs(
        logpost, point, scales, config.n_iterations, config.burn_in,
        chain_rng, adapt=config.adapt, free=free)

    log_likelihoods = lps - _logprior_array(samples, prior)
    diagnostics = _diagnostics(data, samples, free)
    diagnostics['final_proposal_scales'] = dict(zip(_NAMES, final_scales))

    ens = PosteriorEnsemble(data.model_id, samples, lps, log_likelihoods,
                            config, prior, dict(zip(_NAMES, rates)),
                            diagnostics, data.maxima.station_id,
                            data.fingerprint())
    _log.debug("%r: acceptance %s", ens, ', '.join(
        '%s=%.2f' % (k, rates[_NAMES.index(k)]) for k in _NAMES))
    return ens


def effective_sample_size(x):
    """
    Effective sample size of a chain from its autocorrelation, summing
    autocorrelation pairs until the first negative pair.
    """
    x = _np.asarray(x, dtype=float)
    n = len(x)
    if n < 4:
        return float(n)
    xc = x - x.mean()
    if not _np.any(xc):
        return float(n)
    size = 1 << (2 * n - 1).bit_length()
    f = _np.fft.rfft(xc, n=size)
    acov = _np.fft.irfft(f * _np.conjugate(f), n=size)[:n]
    rho = acov / acov[0]

    tau = -1.0
    for k in range(0, n - 1, 2):
        pair = rho[k] + rho[k + 1]
        if pair < 0:
            break
        tau += 2.0 * pair
    return float(n / max(tau, 1e-12))


def geweke_z(x, first=0.1, last=0.5):
    """
    Geweke convergence z-score comparing the mean of the first and last
    parts of a chain.
    """
    x = _np.asarray(x, dtype=float)
    n = len(x)
    a = x[:max(int(first * n), 2)]
    b = x[n - max(int(last * n), 2):]
    va = a.var() / effective_sample_size(a) if len(a) > 1 else 0.0
    vb = b.var() / effective_sample_size(b) if len(b) > 1 else 0.0
    if va + vb == 0:
        return 0.0
    return float((a.mean() - b.mean()) / _math.sqrt(va + vb))


def _diagnostics(data, samples, free):
    d = {'ess': {}, 'geweke_z': {}}
    for j, name in enumerate(_NAMES):
        if j in free:
            d['ess'][name] = effective_sample_size(samples[:, j])
            d['geweke_z'][name] = geweke_z(samples[:, j])
        else:
            d['ess'][name] = None
            d['geweke_z'][name] = None

    flags = []
    if len(data) > 1 and float(data.x.std()) == 0.0:
        flags.append('degenerate_data')
    scale = max(abs(float(data.x.mean())), 1e-12)
    if float(_np.median(samples[:, 2])) < 1e-3 * scale:
        flags.append('sigma_near_zero')
    for name in _NAMES:
        z = d['geweke_z'][name]
        if z is not None and abs(z) > 3:
            flags.append('geweke_%s' % name)
        ess = d['ess'][name]
        if ess is not None and ess < 100:
            flags.append('low_ess_%s' % name)
    d['flags'] = flags
    if flags:
        _log.warning("%r: sampler diagnostics flagged %s", data,
                     ', '.join(flags))
    return d


def _nonempty(ens):
    if not isinstance(ens, PosteriorEnsemble):
        raise TypeError("expected PosteriorEnsemble")
    if len(ens) == 0:
        raise _misc.RaindingsError("posterior ensemble is empty")
    return ens


@_arguments.accept(_nonempty)
def map_estimate(ens):
    """
    map_estimate(ens)

    The retained sample with the highest log posterior (earliest on ties).
    """
    return _gev.GevParams(*ens.values[int(_np.argmax(ens.log_posteriors))]
                          .tolist())


def _return_levels(ens, t_cov, T):
    mu = ens.values[:, 0] * (1.0 + ens.values[:, 1] * t_cov)
    return _gev._quantile(1.0 - 1.0 / T, mu, ens.values[:, 2],
                          ens.values[:, 3])


@_arguments.accept(_nonempty, _util.finite, _util.return_period)
def ensemble_return_level_samples(ens, t_cov, T):
    """
    Return level of every sample, as an array.
    """
    return _return_levels(ens, t_cov, T)


@_arguments.accept(_nonempty, _util.finite, _util.return_period)
def ensemble_return_levels(ens, t_cov, T):
    """
    ensemble_return_levels(ens, t_cov, T)

    Summary (mean, 5%, 50% and 95% quantiles) of the T-year return levels
    of all samples at covariate value t_cov.
    """
    levels = _return_levels(ens, t_cov, T)
    q05, q50, q95 = _np.quantile(levels, [0.05, 0.5, 0.95])
    return ReturnLevelSummary(float(levels.mean()), float(q05), float(q50),
                              float(q95))
