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
Pipe hydraulics: rational-method peak flow, Manning full-pipe capacity,
the limit state and the annual and lifetime reliability of a pipe under a
(posterior) rainfall distribution.

Capacities assume full, non-pressurized gravity flow.
"""

import raindings.arguments as _arguments
import raindings.bayes_fit as _bayes_fit
import raindings.constants as _constants
import raindings.gev as _gev
import raindings.setup as _setup
import raindings.util as _util

import collections as _collections
import logging as _logging
import math as _math

import numpy as _np

_log = _logging.getLogger(__name__)


# posterior samples processed per block in lifetime_reliability
_BLOCK = 4096


class PipeSpec(_collections.namedtuple('PipeSpec',
        'diameter slope runoff_c manning_n area')):
    """
    PipeSpec(diameter, slope, runoff_c, manning_n=0.013, area=0.25)

    A circular pipe and its drainage area.

    :param diameter: pipe diameter D in m.
    :param slope: pipe slope S in m/m.
    :param runoff_c: runoff coefficient C of the drainage area, in (0, 1].
    :param manning_n: Manning's roughness coefficient.
    :param area: contributing drainage area A in km².
    """
    __slots__ = ()

    @_arguments.accept(None, _util.positive, _util.positive,
                       _util.runoff_coefficient, _util.positive,
                       _util.positive)
    def __new__(cls, diameter, slope, runoff_c,
                manning_n=_constants.DEFAULT_MANNING_N,
                area=_constants.DEFAULT_AREA):
        return super(PipeSpec, cls).__new__(cls, diameter, slope, runoff_c,
                                            manning_n, area)

    def with_diameter(self, diameter):
        return PipeSpec(diameter, self.slope, self.runoff_c, self.manning_n,
                        self.area)

    def with_runoff(self, runoff_c):
        return PipeSpec(self.diameter, self.slope, runoff_c, self.manning_n,
                        self.area)

    def to_dict(self):
        return dict(self._asdict())


class LifetimeSpec(object):
    """
    LifetimeSpec(start_year, years, covariate_path)

    The service life of a pipe: years of service starting with start_year
    and the standardized covariate value for each of them.
    """
    @_arguments.accept(None, _util.year, _util.count, _util.finite_array)
    def __init__(self, start_year, years, covariate_path):
        if len(covariate_path) != years:
            raise ValueError("covariate path has %d values for a %d-year "
                             "lifetime" % (len(covariate_path), years))
        covariate_path = covariate_path.copy()
        covariate_path.setflags(write=False)
        self.start_year = start_year
        self.years = years
        self.covariate_path = covariate_path

    @classmethod
    def constant(cls, start_year, years, value=0.0):
        """
        A lifetime with a fixed covariate value, e.g. for stationary models.
        """
        return cls(start_year, years, _np.full(years, float(value)))

    @classmethod
    def from_covariate(cls, covariate, start_year, years):
        """
        A lifetime whose covariate path is read from a (standardized)
        covariate series; see :meth:`CovariateSeries.path`.
        """
        return cls(start_year, years, covariate.path(start_year, years))

    def __repr__(self):
        return 'LifetimeSpec(%d, %d)' % (self.start_year, self.years)

    def to_dict(self):
        return {'start_year': self.start_year, 'years': self.years,
                'covariate_path': self.covariate_path.tolist()}


class ReliabilityResult(object):
    """
    Lifetime reliability of one pipe under one posterior ensemble.

    :ivar reliability: posterior mean lifetime reliability R.
    :ivar failure_prob: 1 - R.
    :ivar per_year_exceedance: posterior mean annual failure probability
        for each service year.
    :ivar ensemble_spread: (5%, 95%) quantiles of the per-sample lifetime
        reliabilities.
    """
    def __init__(self, reliability, per_year_exceedance, ensemble_spread,
                 pipe=None, life=None):
        self.reliability = float(min(max(reliability, 0.0), 1.0))
        self.failure_prob = 1.0 - self.reliability
        self.per_year_exceedance = _np.asarray(per_year_exceedance,
                                               dtype=float)
        self.ensemble_spread = tuple(float(q) for q in ensemble_spread)
        self.pipe = pipe
        self.life = life

    def __repr__(self):
        return 'ReliabilityResult(reliability=%.6f)' % self.reliability

    def to_dict(self):
        return {
            'reliability': self.reliability,
            'failure_prob': self.failure_prob,
            'per_year_exceedance': self.per_year_exceedance.tolist(),
            'ensemble_spread': {'q05': self.ensemble_spread[0],
                                'q95': self.ensemble_spread[1]},
            'pipe': self.pipe.to_dict() if self.pipe else None,
            'life': self.life.to_dict() if self.life else None,
        }


@_arguments.accept(_util.runoff_coefficient, _util.intensity, _util.positive)
def peak_flow(C, I, A):
    """
    peak_flow(C, I, A)

    Rational-method peak flow in m³/s for runoff coefficient C, rainfall
    intensity I in mm/hr and drainage area A in km².
    """
    return _constants.RATIONAL_FACTOR * C * I * A


@_arguments.accept(PipeSpec)
def pipe_capacity(spec):
    """
    pipe_capacity(spec)

    Manning full-pipe flow capacity in m³/s,
    (0.31 / n) * D^(8/3) * S^(1/2).
    """
    return (_constants.MANNING_FACTOR / spec.manning_n
            * spec.diameter ** (8.0 / 3.0) * _math.sqrt(spec.slope))


@_arguments.accept(_util.positive, _util.positive, _util.positive)
def required_diameter(target_flow, n, S):
    """
    required_diameter(target_flow, n, S)

    Smallest diameter whose full-pipe capacity equals target_flow.
    """
    return (target_flow * n
            / (_constants.MANNING_FACTOR * _math.sqrt(S))) ** (3.0 / 8.0)


def _critical_intensity(spec):
    return pipe_capacity(spec) / (_constants.RATIONAL_FACTOR * spec.runoff_c
                                  * spec.area)


@_arguments.accept(PipeSpec)
def critical_intensity(spec):
    """
    critical_intensity(spec)

    The annual maximum rainfall intensity (mm/hr) at which peak flow equals
    capacity. The pipe fails in a year iff this intensity is exceeded.
    """
    return _critical_intensity(spec)


@_arguments.accept(PipeSpec, _util.intensity)
def limit_state(spec, I):
    """
    limit_state(spec, I)

    Capacity minus load, G = Q_p - Q_y, for rainfall intensity I. Negative
    values mean failure.
    """
    return pipe_capacity(spec) - peak_flow(spec.runoff_c, I, spec.area)


@_arguments.accept(_gev.valid_params, _util.finite, PipeSpec)
def annual_failure_prob(params, t_cov, spec):
    """
    annual_failure_prob(params, t_cov, spec)

    Probability that the annual maximum intensity exceeds the critical
    intensity of spec, under the distribution for covariate value t_cov.
    """
    d = params.at(t_cov)
    return float(_gev._sf(_critical_intensity(spec), d.mu, d.sigma, d.xi))


def _exceedance(values, path, i_crit):
    """
    Annual failure probabilities of shape (samples, years).
    """
    mu = values[:, 0:1] * (1.0 + values[:, 1:2] * path[_np.newaxis, :])
    return _gev._sf(i_crit, mu, values[:, 2:3], values[:, 3:4])


def _lifetime(values, path, i_crit):
    """
    Per-sample lifetime reliabilities and the summed annual failure
    probabilities, computed block by block.
    """
    n = len(values)
    per_sample = _np.empty(n)
    p_sum = _np.zeros(len(path))
    for start in range(0, n, _BLOCK):
        p = _exceedance(values[start:start + _BLOCK], path, i_crit)
        with _np.errstate(divide='ignore'):
            per_sample[start:start + _BLOCK] = _np.exp(
                _np.log1p(-p).sum(axis=1))
        p_sum += p.sum(axis=0)
    return per_sample, p_sum


@_arguments.accept(_bayes_fit._nonempty, LifetimeSpec, PipeSpec)
def lifetime_reliability(ens, life, spec):
    """
    lifetime_reliability(ens, life, spec)

    Probability that the pipe never fails during its service life.
    For each posterior sample the annual survivals are multiplied over the
    lifetime (annual maxima are independent given the parameters and
    covariate path); the result is the mean over the ensemble.

    If the ``max_reliability_samples`` setting is given, the ensemble is
    thinned to at most that many samples first.
    """
    ens = ens.thinned(_setup.get_config('max_reliability_samples'))
    i_crit = _critical_intensity(spec)
    per_sample, p_sum = _lifetime(ens.values, life.covariate_path, i_crit)

    per_sample = _np.clip(per_sample, 0.0, 1.0)
    q05, q95 = _np.quantile(per_sample, [0.05, 0.95])
    return ReliabilityResult(float(per_sample.mean()), p_sum / len(ens),
                             (q05, q95), spec, life)


def lifetime_reliability_samples(ens, life, spec):
    """
    Per-sample lifetime reliabilities, as an array (not thinned).
    """
    per_sample, _ = _lifetime(ens.values, life.covariate_path,
                              _critical_intensity(spec))
    return _np.clip(per_sample, 0.0, 1.0)
