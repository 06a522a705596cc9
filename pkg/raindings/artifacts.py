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
Reading and writing result files. Tables are CSV, everything else JSON.
Output is byte-for-byte reproducible: floats are written with full
precision in a fixed format and JSON keys are sorted.
"""

import raindings.bayes_fit as _bayes_fit
import raindings.constants as _constants
import raindings.misc as _misc

import json as _json
import logging as _logging
import os as _os

import numpy as _np
import pandas as _pd

_log = _logging.getLogger(__name__)


ENSEMBLE_COLUMNS = list(_constants.PARAMETER_NAMES) + ['log_post']

FLOAT_FORMAT = '%.17g'


def ensure_dir(path):
    if not _os.path.isdir(path):
        _os.makedirs(path)
    return path


def write_frame(df, path):
    """
    Write a pandas DataFrame as CSV, without index.
    """
    ensure_dir(_os.path.dirname(path) or '.')
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT,
              lineterminator='\n', encoding='utf-8')
    _log.debug("wrote %s", path)
    return path


def read_frame(path):
    if not _os.path.isfile(path):
        raise _misc.DataError("missing artifact: %s" % path)
    return _pd.read_csv(path, encoding='utf-8')


def write_json(obj, path, meta=None):
    """
    Write obj as indented JSON with sorted keys. If meta is given (e.g. the
    seed and config hash), it is stored under the ``run`` key.
    """
    ensure_dir(_os.path.dirname(path) or '.')
    if meta is not None:
        obj = dict(obj, run=meta)
    with open(path, 'w', encoding='utf-8') as f:
        _json.dump(obj, f, sort_keys=True, indent=2,
                   default=_misc._json_default)
        f.write('\n')
    _log.debug("wrote %s", path)
    return path


def read_json(path):
    if not _os.path.isfile(path):
        raise _misc.DataError("missing artifact: %s" % path)
    with open(path, encoding='utf-8') as f:
        try:
            return _json.load(f)
        except ValueError as ex:
            raise _misc.DataError("%s: invalid JSON: %s" % (path, ex))


def ensemble_frame(ens):
    df = _pd.DataFrame(ens.values, columns=list(_constants.PARAMETER_NAMES))
    df['log_post'] = ens.log_posteriors
    return df


def ensemble_summary(ens, t_cov=0.0, periods=_constants.DEFAULT_RETURN_PERIODS):
    """
    JSON-ready summary of an ensemble: MAP, posterior means and quantiles,
    acceptance rates, diagnostics and return levels at t_cov.
    """
    quantiles = _np.quantile(ens.values, [0.05, 0.5, 0.95], axis=0)
    return {
        'model_id': ens.model_id,
        'station_id': ens.station_id,
        'n_samples': len(ens),
        'n_params': ens.n_params,
        'map': _bayes_fit.map_estimate(ens).to_dict(),
        'mean': ens.mean_params().to_dict(),
        'quantiles': dict(
            (name, {'q05': float(quantiles[0, j]),
                    'q50': float(quantiles[1, j]),
                    'q95': float(quantiles[2, j])})
            for j, name in enumerate(_constants.PARAMETER_NAMES)),
        'acceptance_rates': ens.acceptance_rates,
        'diagnostics': ens.diagnostics,
        'mcmc': ens.config.to_dict() if ens.config is not None else None,
        'prior': ens.prior.to_dict() if ens.prior is not None else None,
        'return_levels': dict(
            (str(T), _bayes_fit.ensemble_return_levels(ens, t_cov, T)._asdict())
            for T in periods),
    }


def write_ensemble(ens, directory, meta=None):
    """
    Write <model_id>.csv (samples) and <model_id>.json (summary) into
    directory.
    """
    base = _os.path.join(directory, ens.model_id)
    write_frame(ensemble_frame(ens), base + '.csv')
    write_json(ensemble_summary(ens), base + '.json', meta)
    return base + '.csv'


def read_ensemble(directory, model_id):
    """
    Read an ensemble written by :func:`write_ensemble`. Log likelihoods are
    not stored and are recomputed from data when needed.
    """
    base = _os.path.join(directory, model_id)
    df = read_frame(base + '.csv')
    if list(df.columns) != ENSEMBLE_COLUMNS:
        raise _misc.DataError("%s.csv: expected columns %s" %
                              (base, ','.join(ENSEMBLE_COLUMNS)))
    summary = read_json(base + '.json')
    prior = (_bayes_fit.PriorSpec.from_dict(summary['prior'])
             if summary.get('prior') else None)
    return _bayes_fit.PosteriorEnsemble(
        model_id, df[list(_constants.PARAMETER_NAMES)].to_numpy(dtype=float),
        df['log_post'].to_numpy(dtype=float), None, None, prior,
        summary.get('acceptance_rates'), summary.get('diagnostics'),
        summary.get('station_id', ''))
