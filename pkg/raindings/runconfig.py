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
The declarative run configuration (a JSON file) of the command line tool.
See doc/config.rst for the schema.
"""

import raindings.bayes_fit as _bayes_fit
import raindings.constants as _constants
import raindings.design as _design
import raindings.misc as _misc
import raindings.setup as _setup
import raindings.util as _util

import copy as _copy
import json as _json
import logging as _logging
import os as _os

import numpy as _np

_log = _logging.getLogger(__name__)


_SECTIONS = {
    'station': None,
    'maxima': None,
    'daily': None,
    'covariates': None,
    'candidates': None,
    'fit_window': None,
    'climate': None,
    'bias_overlap': None,
    'prior': None,
    'mcmc': ('n_iterations', 'burn_in', 'adapt', 'proposal_scales'),
    'min_coverage': None,
    'max_reliability_samples': None,
    'pipe': ('manning_n', 'slope', 'area', 'runoff_c'),
    'design': ('intensity', 'return_period', 'standard_periods', 'sf_min',
               'sf_max', 'sf_step', 'robustness', 'cost_table', 'target'),
    'scenarios': ('runoff_options', 'lifetimes', 'start_year',
                  'stage_order'),
    'returns': ('periods', 'current_year'),
    'seed': None,
    'out': None,
    'jobs': None,
}

# settings that do not change any result, excluded from the config hash
_UNHASHED = ('out', 'jobs')


def _check(cond, message, *args):
    if not cond:
        raise _misc.ConfigError(message % args)


def _convert(what, f, value):
    try:
        return f(value)
    except (TypeError, ValueError) as ex:
        raise _misc.ConfigError("invalid %s: %s" % (what, ex))


class RunConfig(object):
    """
    RunConfig(data, base_dir='.')

    A validated run configuration. Relative paths are resolved against
    base_dir (the directory of the config file). Every referenced input
    file must exist.

    :raise ConfigError: naming the offending key or missing path.
    """
    def __init__(self, data, base_dir='.'):
        _check(isinstance(data, dict), "configuration must be a JSON object")
        for k, v in data.items():
            _check(k in _SECTIONS, "unknown configuration key %r", k)
            if _SECTIONS[k] is not None and v is not None:
                _check(isinstance(v, dict), "%r must be an object", k)
                for kk in v:
                    _check(kk in _SECTIONS[k], "unknown key %r in %r", kk, k)

        self.raw = _copy.deepcopy(data)
        self.base_dir = _os.path.abspath(base_dir)

        _check(('maxima' in data) != ('daily' in data),
               "exactly one of 'maxima' and 'daily' is required")
        self.maxima = self._path(data.get('maxima'))
        self.daily = self._path(data.get('daily'))
        self.station = data.get('station') or _os.path.splitext(
            _os.path.basename(self.maxima or self.daily))[0]

        covariates = data.get('covariates') or {}
        _check(isinstance(covariates, dict), "'covariates' must be an object")
        self.covariates = dict(
            (_convert('covariate name', _util.covariate_name, name),
             self._path(p)) for name, p in sorted(covariates.items()))
        _check(_constants.STATIONARY not in self.covariates,
               "%r is reserved for the stationary model",
               _constants.STATIONARY)

        candidates = data.get('candidates')
        if candidates is None:
            candidates = sorted(self.covariates) + [_constants.STATIONARY]
        for c in candidates:
            _check(c == _constants.STATIONARY or c in self.covariates,
                   "candidate %r has no covariate file", c)
        _check(len(set(candidates)) == len(candidates),
               "candidates must not repeat")
        _check(candidates, "at least one candidate model is required")
        self.candidates = list(candidates)

        self.fit_window = (_convert('fit_window', _util.year_range,
                                    data['fit_window'])
                           if data.get('fit_window') else None)

        climate = data.get('climate') or {}
        _check(isinstance(climate, dict), "'climate' must be an object")
        self.climate = [(str(name), self._path(p))
                        for name, p in sorted(climate.items())]
        self.bias_overlap = (_convert('bias_overlap', _util.year_range,
                                      data['bias_overlap'])
                             if data.get('bias_overlap') else None)

        self.prior = self._prior(data.get('prior') or {})

        mcmc = data.get('mcmc') or {}
        self.n_iterations = mcmc.get('n_iterations')
        self.burn_in = mcmc.get('burn_in')
        self.adapt = mcmc.get('adapt')
        self.proposal_scales = mcmc.get('proposal_scales') or {}
        self.min_coverage = data.get('min_coverage')
        self.max_reliability_samples = data.get('max_reliability_samples')

        pipe = data.get('pipe') or {}
        _check('slope' in pipe, "'pipe' requires a 'slope'")
        self.slope = _convert('pipe slope', _util.positive, pipe['slope'])
        self.runoff_c = _convert('pipe runoff_c', _util.runoff_coefficient,
                                 pipe.get('runoff_c', 0.9))
        self.manning_n = _convert('pipe manning_n', _util.positive,
                                  pipe.get('manning_n',
                                           _constants.DEFAULT_MANNING_N))
        self.area = _convert('pipe area', _util.positive,
                             pipe.get('area', _constants.DEFAULT_AREA))

        design = data.get('design') or {}
        self.design_intensity = (
            _convert('design intensity', _util.positive, design['intensity'])
            if design.get('intensity') is not None else None)
        self.design_return_period = _convert(
            'design return_period', _util.return_period,
            design.get('return_period', 100))
        self.standard_periods = [
            _convert('standard period', _util.return_period, p)
            for p in design.get('standard_periods', [100, 500])]
        self.sf_grid = self._sf_grid(design)
        self.robustness = _convert('robustness', _util.robustness,
                                   design.get('robustness', 'worst_case'))
        self.target = (_convert('design target', _util.probability,
                                design['target'])
                       if design.get('target') is not None else None)
        cost = design.get('cost_table')
        if cost is None:
            self.cost_table = _design.CostTable.placeholder()
        else:
            _check(isinstance(cost, dict), "'cost_table' must be an object")
            self.cost_table = _convert(
                'cost table', _design.CostTable,
                dict((float(k), v) for k, v in cost.items()))

        scenarios = data.get('scenarios') or {}
        self.runoff_options = [
            _convert('runoff option', _util.runoff_coefficient, c)
            for c in scenarios.get('runoff_options',
                                   _constants.DEFAULT_RUNOFF_OPTIONS)]
        self.lifetimes = [
            _convert('lifetime', _util.count, n)
            for n in scenarios.get('lifetimes', _constants.DEFAULT_LIFETIMES)]
        _check(len(set(self.runoff_options)) == len(self.runoff_options),
               "'runoff_options' must not repeat")
        _check(len(set(self.lifetimes)) == len(self.lifetimes),
               "'lifetimes' must not repeat")
        self.start_year = scenarios.get('start_year')
        if self.start_year is not None:
            self.start_year = _convert('start_year', _util.year,
                                       self.start_year)
        self.stage_order = [
            _convert('stage', _util.stage, s)
            for s in scenarios.get('stage_order',
                                   ['climate', 'runoff', 'lifetime'])]
        _check(sorted(self.stage_order) == sorted(
                   [_constants.CLIMATE, _constants.RUNOFF,
                    _constants.LIFETIME]),
               "'stage_order' must name climate, runoff and lifetime once")

        returns = data.get('returns') or {}
        self.return_periods = [
            _convert('return period', _util.return_period, p)
            for p in returns.get('periods',
                                 _constants.DEFAULT_RETURN_PERIODS)]
        self.current_year = returns.get('current_year')

        self.seed = data.get('seed')
        self.jobs = data.get('jobs')
        self.out = _os.path.join(self.base_dir, data.get('out', 'out'))

    def _path(self, p):
        if p is None:
            return None
        _check(isinstance(p, str), "paths must be strings, got %r", p)
        path = _os.path.normpath(_os.path.join(self.base_dir, p))
        _check(_os.path.isfile(path), "no such file: %s", path)
        return path

    def _prior(self, d):
        means, sds = {}, {}
        for name, v in d.items():
            _check(name in _constants.PARAMETER_NAMES,
                   "unknown prior parameter %r", name)
            _check(isinstance(v, dict), "prior for %r must be an object",
                   name)
            if 'mean' in v:
                means[name] = v['mean']
            if 'sd' in v:
                sds[name] = v['sd']
        return _convert('prior', lambda x: _bayes_fit.PriorSpec(*x),
                        (means, sds))

    def _sf_grid(self, design):
        lo = design.get('sf_min', 1.0)
        hi = design.get('sf_max', 2.5)
        step = design.get('sf_step', 0.1)
        _check(step > 0 and hi >= lo, "invalid safety factor range")
        n = int(_np.floor((hi - lo) / step + 1e-9)) + 1
        grid = [round(lo + i * step, 10) for i in range(n)]
        return _convert('safety factor grid', _design._sf_grid, grid)

    @classmethod
    def load(cls, path):
        """
        Read a configuration file.
        """
        if not _os.path.isfile(path):
            raise _misc.ConfigError("no such configuration file: %s" % path)
        with open(path, encoding='utf-8') as f:
            try:
                data = _json.load(f)
            except ValueError as ex:
                raise _misc.ConfigError("%s: invalid JSON: %s" % (path, ex))
        return cls(data, _os.path.dirname(_os.path.abspath(path)))

    def apply(self):
        """
        Pass the global settings of this configuration to
        :func:`raindings.setup.config`. Settings overridden on the command
        line are left alone.
        """
        settings = {
            'seed': self.seed, 'jobs': self.jobs,
            'n_iterations': self.n_iterations, 'burn_in': self.burn_in,
            'adapt': self.adapt, 'min_coverage': self.min_coverage,
            'max_reliability_samples': self.max_reliability_samples,
        }
        settings = dict((k, v) for k, v in settings.items()
                        if v is not None or k == 'max_reliability_samples')
        try:
            _setup.config(**settings)
        except (TypeError, ValueError) as ex:
            raise _misc.ConfigError(str(ex))

    def mcmc_config(self, *stream):
        """
        Sampler settings for the named chain, from the global settings.
        """
        return _bayes_fit.McmcConfig(proposal_scales=self.proposal_scales,
                                     stream=tuple(stream))

    def resolved(self):
        """
        The effective configuration: file contents with absolute paths and
        the current global settings.
        """
        d = _copy.deepcopy(self.raw)
        d['base_dir'] = self.base_dir
        for k in ('seed', 'n_iterations', 'burn_in', 'adapt', 'min_coverage',
                  'max_reliability_samples', 'jobs'):
            d[k] = _setup.get_config(k)
        d.pop('mcmc', None)
        d['proposal_scales'] = self.proposal_scales
        d['out'] = self.out
        return d

    def config_hash(self):
        d = self.resolved()
        for k in _UNHASHED + ('base_dir',):
            d.pop(k, None)
        return _misc.config_hash(d)

    def meta(self):
        """
        Run metadata stored in every JSON artifact.
        """
        return {'seed': _setup.get_config('seed'),
                'config_hash': self.config_hash()}
