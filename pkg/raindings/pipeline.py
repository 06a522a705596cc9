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
The analysis steps behind the command line subcommands. Each step reads
its inputs from the run configuration and from artifacts of earlier steps
in the output directory, and writes its own artifacts there.
"""

import raindings.artifacts as _artifacts
import raindings.bayes_fit as _bayes_fit
import raindings.constants as _constants
import raindings.design as _design
import raindings.engine as _engine
import raindings.gev as _gev
import raindings.hydraulics as _hydraulics
import raindings.misc as _misc
import raindings.model_selection as _model_selection
import raindings.plotting as _plotting
import raindings.timeseries_io as _tio
import raindings.uncertainty as _uncertainty

import collections as _collections
import logging as _logging
import os as _os

import numpy as _np
import pandas as _pd

_log = _logging.getLogger(__name__)


ENSEMBLE_DIR = 'ensembles'
CLIMATE_DIR = 'climate'


def _out(rc, *names):
    return _os.path.join(rc.out, *names)


def observed_maxima(rc):
    """
    The observed annual maxima, read directly or extracted from daily
    rainfall.
    """
    if rc.maxima:
        maxima = _tio.load_maxima_csv(rc.maxima, rc.station)
    else:
        maxima = _tio.annual_maxima(_tio.load_daily_csv(rc.daily, rc.station))
    if rc.fit_window:
        years = maxima.years
        maxima = maxima.restrict(years[(years >= rc.fit_window[0]) &
                                       (years <= rc.fit_window[1])])
        if len(maxima) == 0:
            raise _misc.DataError("no annual maxima within %d-%d" %
                                  rc.fit_window)
    return maxima


def _fit_window(rc, maxima):
    if rc.fit_window:
        return rc.fit_window
    return (int(maxima.years[0]), int(maxima.years[-1]))


def covariates(rc, maxima=None):
    """
    All candidate covariates, standardized over the fit window.
    """
    maxima = maxima if maxima is not None else observed_maxima(rc)
    window = _fit_window(rc, maxima)
    return _collections.OrderedDict(
        (name, _tio.standardize(_tio.load_covariate_csv(path, name), window))
        for name, path in sorted(rc.covariates.items()))


def datasets(rc):
    """
    One aligned dataset per candidate model.
    """
    maxima = observed_maxima(rc)
    covs = covariates(rc, maxima)
    result = _collections.OrderedDict()
    for model_id in rc.candidates:
        if model_id == _constants.STATIONARY:
            result[model_id] = _tio.AlignedDataset.stationary(maxima)
        else:
            result[model_id] = _tio.align(maxima, covs[model_id])
    return result


def _fit_one(data, prior, config):
    return _bayes_fit.mh_sample(data, prior, config)


def _fit_all(rc, items, stream):
    """
    Fit every (label, dataset) pair on the engine's workers.
    """
    tasks = [(data, rc.prior, rc.mcmc_config(stream, label))
             for label, data in items]
    return _engine.map_tasks(stream, _fit_one, tasks)


def fit(rc):
    """
    Fit every candidate model and write its ensemble.

    :return: mapping from model id to :class:`PosteriorEnsemble`.
    """
    data = datasets(rc)
    ensembles = _fit_all(rc, list(data.items()), 'fit')
    meta = rc.meta()
    result = _collections.OrderedDict()
    for ens in ensembles:
        _artifacts.write_ensemble(ens, _out(rc, ENSEMBLE_DIR), meta)
        result[ens.model_id] = ens
        _log.info("fitted %s: %d samples", ens.model_id, len(ens))
    return result


def _read_ensembles(rc, model_ids):
    found, missing = [], []
    for model_id in model_ids:
        if _os.path.isfile(_out(rc, ENSEMBLE_DIR, model_id + '.csv')):
            found.append(_artifacts.read_ensemble(_out(rc, ENSEMBLE_DIR),
                                                  model_id))
        else:
            missing.append(model_id)
    if missing:
        raise _misc.DataError("no fitted ensemble for %s in %s; run 'fit' "
                              "first" % (', '.join(missing),
                                         _out(rc, ENSEMBLE_DIR)))
    return _collections.OrderedDict((e.model_id, e) for e in found)


def select(rc):
    """
    Rank the fitted candidates and write the score table.

    :return: the ranked list of :class:`ModelScore`.
    """
    data = datasets(rc)
    ensembles = _read_ensembles(rc, rc.candidates)
    ranked = _model_selection.rank_models(list(ensembles.items()), data)
    frame = _pd.DataFrame([s.to_dict() for s in ranked],
                          columns=list(_model_selection.SCORE_FIELDS))
    _artifacts.write_frame(frame, _out(rc, 'selection.csv'))
    _artifacts.write_json({'ranking': [s.to_dict() for s in ranked],
                           'selected': ranked[0].model_id if ranked[0].ok
                           else None},
                          _out(rc, 'selection.json'), rc.meta())
    return ranked


def selected_model(rc):
    """
    The model chosen by :func:`select`, from its artifact.
    """
    d = _artifacts.read_json(_out(rc, 'selection.json'))
    if not d.get('selected'):
        raise _misc.ScoringError("no candidate model could be scored")
    return d['selected']


def _current_value(rc, model_id, covs, maxima):
    if model_id == _constants.STATIONARY:
        return 0.0
    year = rc.current_year or int(maxima.years[-1])
    return covs[model_id].value_at(year)


def returns(rc):
    """
    Return-level curves of the stationary and the selected model at the
    current covariate value, and the return period of the stationary
    100-year level under the selected model.
    """
    maxima = observed_maxima(rc)
    covs = covariates(rc, maxima)
    selected = selected_model(rc)
    model_ids = [_constants.STATIONARY]
    if selected != _constants.STATIONARY:
        model_ids.append(selected)
    ensembles = _read_ensembles(rc, model_ids)

    rows = []
    for model_id, ens in ensembles.items():
        t_cov = _current_value(rc, model_id, covs, maxima)
        m = _bayes_fit.map_estimate(ens)
        for T in rc.return_periods:
            s = _bayes_fit.ensemble_return_levels(ens, t_cov, T)
            at_map = _gev.return_level(m, t_cov, T)
            rows.append((model_id, T, at_map, s.mean, s.q05, s.q50, s.q95,
                         100.0 * (at_map - s.mean) / s.mean))
    frame = _pd.DataFrame(rows, columns=['model', 'period', 'map', 'mean',
                                         'q05', 'q50', 'q95',
                                         'map_bias_pct'])
    _artifacts.write_frame(frame, _out(rc, 'returns.csv'))

    summary = {'selected': selected, 'current_year': rc.current_year or
               int(maxima.years[-1])}
    stationary_100 = _bayes_fit.ensemble_return_levels(
        ensembles[_constants.STATIONARY], 0.0, 100).mean
    summary['stationary_100yr_level'] = stationary_100
    if selected != _constants.STATIONARY:
        ens = ensembles[selected]
        t_cov = _current_value(rc, selected, covs, maxima)
        p = _gev._sf(stationary_100, ens.values[:, 0] *
                     (1.0 + ens.values[:, 1] * t_cov),
                     ens.values[:, 2], ens.values[:, 3]).mean()
        summary['nonstationary_period_of_stationary_100yr'] = (
            float(1.0 / p) if p > 0 else None)
    _artifacts.write_json(summary, _out(rc, 'returns.json'), rc.meta())
    return frame, summary


def _climate_series(rc, observed):
    if not rc.climate:
        return []
    overlap = rc.bias_overlap or _fit_window(rc, observed)
    result = []
    for name, path in rc.climate:
        raw = _tio.load_maxima_csv(path, name)
        result.append((name, _tio.quantile_map_bias_correct(raw, observed,
                                                            overlap)))
    return result


def climate_ensembles(rc):
    """
    Posterior ensembles of the selected model for every climate option:
    each bias-corrected climate-model series is fitted against the
    selected covariate. Without climate options, the observed fit is the
    only option. Ensembles written earlier with the same configuration are
    reused.
    """
    selected = selected_model(rc)
    observed = observed_maxima(rc)
    series = _climate_series(rc, observed)
    if not series:
        return [('observed', _read_ensembles(rc, [selected])[selected])]

    meta = rc.meta()
    cached, pending = {}, []
    for name, s in series:
        summary = _out(rc, CLIMATE_DIR, name + '.json')
        if (_os.path.isfile(summary) and
                _artifacts.read_json(summary).get('run') == meta):
            cached[name] = _artifacts.read_ensemble(_out(rc, CLIMATE_DIR),
                                                    name)
        else:
            pending.append((name, s))

    if pending:
        if selected == _constants.STATIONARY:
            items = [(name, _tio.AlignedDataset.stationary(s))
                     for name, s in pending]
        else:
            cov = _tio.standardize(
                _tio.load_covariate_csv(rc.covariates[selected], selected),
                _fit_window(rc, observed))
            items = [(name, _tio.align(s, cov)) for name, s in pending]
        fitted = _fit_all(rc, items, 'climate')
        for (name, _), ens in zip(pending, fitted):
            ens = _bayes_fit.PosteriorEnsemble(
                name, ens.values, ens.log_posteriors, ens.log_likelihoods,
                ens.config, ens.prior, ens.acceptance_rates, ens.diagnostics,
                ens.station_id, ens.data_key)
            _artifacts.write_ensemble(ens, _out(rc, CLIMATE_DIR), meta)
            cached[name] = ens
    return [(name, cached[name]) for name, _ in series]


def lifetimes(rc):
    """
    One :class:`LifetimeSpec` per lifetime option, following the selected
    covariate from the start year.
    """
    selected = selected_model(rc)
    observed = observed_maxima(rc)
    start = rc.start_year or int(observed.years[-1]) + 1
    if selected == _constants.STATIONARY:
        return [_hydraulics.LifetimeSpec.constant(start, L)
                for L in rc.lifetimes]
    cov = covariates(rc, observed)[selected]
    return [_hydraulics.LifetimeSpec.from_covariate(cov, start, L)
            for L in rc.lifetimes]


def baseline(rc):
    """
    The design baseline. Without a configured design intensity, the
    stationary posterior-mean return level of the design return period is
    used.
    """
    intensity = rc.design_intensity
    if intensity is None:
        stationary = _read_ensembles(rc, [_constants.STATIONARY])
        intensity = _bayes_fit.ensemble_return_levels(
            stationary[_constants.STATIONARY], 0.0,
            rc.design_return_period).mean
        _log.info("design intensity: stationary %g-year level, %.3f mm/hr",
                  rc.design_return_period, intensity)
    return _design.DesignBaseline(intensity, rc.design_return_period,
                                  rc.runoff_c, rc.slope, rc.manning_n,
                                  rc.area)


def reliability(rc):
    """
    Lifetime reliability of the baseline pipe for every climate option and
    lifetime, at the configured runoff coefficient.
    """
    base = baseline(rc)
    pipe = base.pipe(1.0)
    rows, results = [], []
    for name, ens in climate_ensembles(rc):
        for life in lifetimes(rc):
            r = _hydraulics.lifetime_reliability(ens, life, pipe)
            rows.append((name, life.years, r.reliability, r.failure_prob,
                         r.ensemble_spread[0], r.ensemble_spread[1]))
            results.append(dict(r.to_dict(), climate=name))
    frame = _pd.DataFrame(rows, columns=['climate', 'lifetime',
                                         'reliability', 'failure_prob',
                                         'q05', 'q95'])
    _artifacts.write_frame(frame, _out(rc, 'reliability.csv'))
    _artifacts.write_json({'baseline': base.to_dict(), 'results': results},
                          _out(rc, 'reliability.json'), rc.meta())
    return frame


def _grid_inputs(rc, stage_order=None):
    return _design.GridInputs(climate_ensembles(rc), rc.runoff_options,
                              lifetimes(rc), stage_order or rc.stage_order)


def decompose(rc, all_orders=False):
    """
    Build the scenario grid of the baseline pipe and decompose its
    variance, in the configured stage order and optionally in every other
    order.
    """
    base = baseline(rc)
    inputs = _grid_inputs(rc)
    grid = _uncertainty.build_grid(inputs.ensembles, inputs.runoff_options,
                                   inputs.lifetime_options, base.pipe(1.0),
                                   inputs.stage_order)
    orders = ([list(inputs.stage_order)] if not all_orders else
              _uncertainty.stage_orders(inputs.stage_order))

    results = _collections.OrderedDict()
    rows = []
    for order in orders:
        label = '-'.join(str(s).lower() for s in order)
        r = _uncertainty.stage_uncertainty(_uncertainty.reorder(grid, order))
        results[label] = r
        for k, stage in enumerate(r.stages):
            rows.append((label, str(stage).lower(), r.cumulative[k + 1],
                         r.stage_uncertainty[k], r.shares[k]))

    _artifacts.write_frame(grid.to_frame(), _out(rc, 'grid.csv'))
    _artifacts.write_frame(
        _pd.DataFrame(rows, columns=['order', 'stage', 'cumulative',
                                     'stage_uncertainty', 'share']),
        _out(rc, 'decomposition.csv'))
    _artifacts.write_json({'grid': grid.to_dict(),
                           'decompositions': results},
                          _out(rc, 'decomposition.json'), rc.meta())
    return grid, results


def sweep(rc):
    """
    Sweep the safety factor over the scenario grid and find the minimal
    robust factors.
    """
    base = baseline(rc)
    inputs = _grid_inputs(rc)
    curve = _design.sweep(base, inputs, rc.sf_grid, rc.cost_table)

    minimal = _collections.OrderedDict()
    for T in rc.standard_periods:
        try:
            minimal[str(T)] = _design.min_sf_for_standard(curve, T,
                                                          rc.robustness)
        except _misc.DesignError as ex:
            _log.warning("%g-year standard: %s", T, ex)
            minimal[str(T)] = None
    target = None
    if rc.target is not None:
        target = {'target': rc.target,
                  'sf': _design.min_sf_for_target(curve, rc.target,
                                                  rc.robustness)}

    _artifacts.write_frame(curve.to_frame(), _out(rc, 'sweep.csv'))
    _artifacts.write_frame(curve.per_climate_frame(),
                           _out(rc, 'sweep_per_climate.csv'))
    _artifacts.write_json({'baseline': base.to_dict(),
                           'curve': curve.to_dict(),
                           'robustness': str(rc.robustness).lower(),
                           'min_sf': minimal, 'target': target,
                           'cost_table': rc.cost_table.to_dict(),
                           'lifetime_targets': dict(
                               ('%g/%d' % (T, L),
                                _design.lifetime_target(T, L))
                               for T in rc.standard_periods
                               for L in rc.lifetimes)},
                          _out(rc, 'sweep.json'), rc.meta())
    return curve, minimal


_REPORT_INPUTS = ('returns.csv', 'returns.json', 'selection.json',
                  'sweep.json', 'decomposition.json')


def report(rc):
    """
    Render charts and a text summary from existing artifacts.

    :raise DataError: listing every missing upstream artifact.
    """
    missing = [n for n in _REPORT_INPUTS if not _os.path.isfile(_out(rc, n))]
    if missing:
        raise _misc.DataError("missing artifacts in %s: %s" %
                              (rc.out, ', '.join(missing)))

    frame = _artifacts.read_frame(_out(rc, 'returns.csv'))
    curves = _collections.OrderedDict(
        (model_id, df) for model_id, df in frame.groupby('model', sort=False))
    _plotting.return_level_chart(curves, _out(rc, 'returns.svg'),
                                 'return levels, %s' % rc.station)

    sw = _artifacts.read_json(_out(rc, 'sweep.json'))
    curve = _CurveView(sw['curve'])
    targets = dict(('%s-yr / %d yr' % (T, L), _design.lifetime_target(
                        float(T), L))
                   for T in sw['min_sf'] for L in rc.lifetimes[:1])
    _plotting.safety_factor_chart(curve, _out(rc, 'sweep.svg'), targets)

    dec = _artifacts.read_json(_out(rc, 'decomposition.json'))
    results = _collections.OrderedDict(
        (label, _SharesView(d)) for label, d in
        sorted(dec['decompositions'].items()))
    _plotting.shares_chart(results, _out(rc, 'shares.svg'))

    sel = _artifacts.read_json(_out(rc, 'selection.json'))
    ret = _artifacts.read_json(_out(rc, 'returns.json'))
    lines = ['station: %s' % rc.station,
             'selected model: %s' % sel['selected'], '']
    for s in sel['ranking']:
        lines.append('  %-12s DIC %10.3f  AIC %10.3f%s' % (
            s['model_id'], s['dic'], s['aic'],
            ('  (%s)' % s['error']) if s['error'] else ''))
    lines.append('')
    lines.append('stationary 100-year level: %.3f mm/hr' %
                 ret['stationary_100yr_level'])
    if ret.get('nonstationary_period_of_stationary_100yr'):
        lines.append('its return period under %s: %.1f years' % (
            ret['selected'], ret['nonstationary_period_of_stationary_100yr']))
    lines.append('')
    lines.append('baseline diameter: %.4f m' %
                 sw['baseline']['baseline_diameter'])
    for T, sf in sw['min_sf'].items():
        lines.append('minimal %s safety factor for the %s-year standard: %s'
                     % (sw['robustness'].replace('_', '-'), T,
                        '%.2f' % sf if sf is not None else 'not reached'))
    lines.append('')
    for label, r in results.items():
        lines.append('shares (%s): %s' % (label, ', '.join(
            '%s %.1f%%' % (str(s).lower(), 100 * v)
            for s, v in zip(r.stages, r.shares))))

    text = '\n'.join(lines) + '\n'
    with open(_out(rc, 'report.txt'), 'w', encoding='utf-8') as f:
        f.write(text)
    return text


class _CurveView(object):
    """
    A SafetyFactorCurve as read back from JSON, for plotting.
    """
    def __init__(self, d):
        self.factors = _np.asarray(d['factors'])
        self.worst = _np.asarray(d['worst_reliability'])
        self.mean = _np.asarray(d['mean_reliability'])
        self.cost_factors = (_np.asarray(d['cost_factors'])
                             if d.get('cost_factors') is not None else None)
        self._per_climate = d['per_climate']

    def per_climate(self):
        return _collections.OrderedDict(
            (k, (_np.asarray(v['worst']), _np.asarray(v['mean'])))
            for k, v in sorted(self._per_climate.items()))


class _SharesView(object):
    def __init__(self, d):
        self.stages = list(d['stages'])
        self.shares = list(d['shares'])
