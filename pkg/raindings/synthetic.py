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
Seeded synthetic rainfall and covariate series with known parameters, and
a complete sample project built from them.
"""

import raindings.artifacts as _artifacts
import raindings.gev as _gev
import raindings.misc as _misc
import raindings.timeseries_io as _tio

import os as _os

import numpy as _np
import pandas as _pd


def linear_covariate(years, name='trend', start=26.0, slope=0.02):
    """
    A covariate rising linearly with the year, in native units (e.g. a sea
    surface temperature in degrees C).
    """
    years = _np.asarray(years, dtype=int)
    return _tio.CovariateSeries(name, years,
                                start + slope * (years - years[0]))


def noise_covariate(years, seed=0, name='noise'):
    """
    A covariate of independent standard normal values, unrelated to any
    rainfall series.
    """
    years = _np.asarray(years, dtype=int)
    rng = _misc.rng(seed, 'synthetic', name)
    return _tio.CovariateSeries(name, years, rng.standard_normal(len(years)))


def gev_maxima(params, t_values, seed=0, stream='maxima', years=None,
               station_id='synthetic'):
    """
    One GEV draw per year, with the location driven by the standardized
    covariate values t_values. Values are floored at the intensity floor,
    since annual maxima must be positive.
    """
    params = _gev.valid_params(params)
    t = _np.asarray(t_values, dtype=float)
    rng = _misc.rng(seed, 'synthetic', stream)
    u = rng.uniform(size=len(t))
    u = _np.where(u <= 0.0, _np.nextafter(0.0, 1.0), u)
    mu = params.mu0 * (1.0 + params.a_mu * t)
    x = _gev._quantile(u, mu, params.sigma, params.xi)
    x = _np.maximum(x, _tio.INTENSITY_FLOOR)
    if years is None:
        years = _np.arange(2000 - len(t) + 1, 2001)
    return _tio.AnnualMaximaSeries(station_id, years, x)


def stationary_dataset(n_years, params, seed=0, first_year=1901):
    """
    Stationary dataset of n_years GEV draws.
    """
    years = _np.arange(first_year, first_year + n_years)
    maxima = gev_maxima(params, _np.zeros(n_years), seed, 'stationary',
                        years)
    return _tio.AlignedDataset.stationary(maxima)


HEAVY_TAIL_PARAMS = _gev.GevParams(3.0, 0.0, 1.0, 0.25)


def heavy_tail_dataset(n_years=40, seed=3):
    """
    Short stationary record with a heavy (Frechet-type) upper tail, whose
    posterior return levels are strongly right-skewed.
    """
    return stationary_dataset(n_years, HEAVY_TAIL_PARAMS, seed)


def trend_dataset(n_years, params, seed=0, first_year=1901, name='trend'):
    """
    Dataset whose annual maxima follow params with a linear covariate,
    standardized over the whole record.

    :return: (dataset, standardized covariate).
    """
    years = _np.arange(first_year, first_year + n_years)
    cov = _tio.standardize(linear_covariate(years, name),
                           (int(years[0]), int(years[-1])))
    maxima = gev_maxima(params, cov.values, seed, name, years)
    return _tio.align(maxima, cov), cov


# sample project layout
SAMPLE_HISTORY = (1951, 2018)
SAMPLE_LAST_YEAR = 2100
SAMPLE_OVERLAP = (1951, 2005)
SAMPLE_PARAMS = _gev.GevParams(3.0, 0.12, 0.8, 0.08)
SAMPLE_CLIMATE_MODELS = 9


def _yearly_frame(years, values):
    return _pd.DataFrame({'year': _np.asarray(years, dtype=int),
                          'value': _np.round(values, 6)},
                         columns=['year', 'value'])


def sample_config(n_iterations=6000, burn_in=2000):
    """
    Run configuration for the sample project, with short chains.
    """
    return {
        'station': 'sample',
        'maxima': 'maxima.csv',
        'covariates': {'mdr': 'covariates/mdr.csv',
                       'noise': 'covariates/noise.csv'},
        'candidates': ['mdr', 'noise', 'stationary'],
        'fit_window': list(SAMPLE_HISTORY),
        'climate': dict(('model_%d' % (i + 1),
                         'climate/model_%d.csv' % (i + 1))
                        for i in range(SAMPLE_CLIMATE_MODELS)),
        'bias_overlap': list(SAMPLE_OVERLAP),
        'mcmc': {'n_iterations': n_iterations, 'burn_in': burn_in},
        'max_reliability_samples': 1000,
        'pipe': {'slope': 0.01, 'runoff_c': 0.9, 'manning_n': 0.013,
                 'area': 0.25},
        'design': {'intensity': None, 'return_period': 100,
                   'standard_periods': [100, 500],
                   'sf_min': 1.0, 'sf_max': 2.5, 'sf_step': 0.1,
                   'robustness': 'worst_case'},
        'scenarios': {'runoff_options': [0.5, 0.7, 0.8, 0.9],
                      'lifetimes': [25, 50, 75], 'start_year': 2020},
        'returns': {'current_year': SAMPLE_HISTORY[1]},
        'seed': 0,
        'out': 'out',
        'jobs': 1,
    }


def write_sample_project(directory, seed=0):
    """
    Write a complete sample project (observed maxima, two candidate
    covariates, nine climate-model series and config.json) into directory.
    The rainfall follows SAMPLE_PARAMS driven by the ``mdr`` covariate.

    :return: path of the written config.json.
    """
    years = _np.arange(SAMPLE_HISTORY[0], SAMPLE_LAST_YEAR + 1)
    rng = _misc.rng(seed, 'synthetic', 'mdr')
    mdr_raw = linear_covariate(years, 'mdr', 26.0, 0.015)
    mdr_raw = _tio.CovariateSeries(
        'mdr', years, mdr_raw.values + 0.15 * rng.standard_normal(len(years)))
    noise = noise_covariate(years, seed)
    mdr = _tio.standardize(mdr_raw, SAMPLE_HISTORY)

    hist = (years >= SAMPLE_HISTORY[0]) & (years <= SAMPLE_HISTORY[1])
    observed = gev_maxima(SAMPLE_PARAMS, mdr.values[hist], seed, 'observed',
                          years[hist], 'sample')

    _artifacts.ensure_dir(_os.path.join(directory, 'covariates'))
    _artifacts.ensure_dir(_os.path.join(directory, 'climate'))
    _artifacts.write_frame(
        _yearly_frame(observed.years, observed.intensities),
        _os.path.join(directory, 'maxima.csv'))
    _artifacts.write_frame(
        _yearly_frame(years, mdr_raw.values),
        _os.path.join(directory, 'covariates', 'mdr.csv'))
    _artifacts.write_frame(
        _yearly_frame(years, noise.values),
        _os.path.join(directory, 'covariates', 'noise.csv'))

    # climate models: biased scale and location, differing trend strength
    for i in range(SAMPLE_CLIMATE_MODELS):
        bias = 0.8 + 0.05 * i
        p = _gev.GevParams(SAMPLE_PARAMS.mu0 * bias,
                           SAMPLE_PARAMS.a_mu * (0.5 + 0.15 * i),
                           SAMPLE_PARAMS.sigma * bias, SAMPLE_PARAMS.xi)
        series = gev_maxima(p, mdr.values, seed, 'model_%d' % (i + 1), years)
        _artifacts.write_frame(
            _yearly_frame(series.years, series.intensities),
            _os.path.join(directory, 'climate', 'model_%d.csv' % (i + 1)))

    config = sample_config()
    config['seed'] = seed
    return _artifacts.write_json(config,
                                 _os.path.join(directory, 'config.json'))
