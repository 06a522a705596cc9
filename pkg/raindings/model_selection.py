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
Information criteria for fitted models and ranking of candidate
covariates.
"""

import raindings.arguments as _arguments
import raindings.bayes_fit as _bayes_fit
import raindings.misc as _misc
import raindings.timeseries_io as _tio

import collections as _collections
import logging as _logging
import math as _math

import numpy as _np

_log = _logging.getLogger(__name__)


# candidates whose DIC lies within this distance of the best are ordered by AIC
DIC_TIE_WINDOW = 2.0

SCORE_FIELDS = ('model_id', 'aic', 'dic', 'n_params', 'l_max', 'd_bar',
                'p_d', 'error')


class ModelScore(_collections.namedtuple('ModelScore', SCORE_FIELDS)):
    """
    ModelScore(model_id, aic, dic, n_params, l_max, d_bar, p_d, error=None)

    Scores of one fitted model. If scoring failed, error holds the message
    and all numeric fields are NaN.
    """
    __slots__ = ()

    def __new__(cls, model_id, aic, dic, n_params, l_max, d_bar, p_d,
                error=None):
        return super(ModelScore, cls).__new__(cls, model_id, aic, dic,
                                              n_params, l_max, d_bar, p_d,
                                              error)

    @property
    def ok(self):
        return self.error is None

    @classmethod
    def failed(cls, model_id, n_params, error):
        nan = float('nan')
        return cls(model_id, nan, nan, n_params, nan, nan, nan, str(error))

    def to_dict(self):
        return dict(self._asdict())


def _check_ensemble(ens):
    if not isinstance(ens, _bayes_fit.PosteriorEnsemble):
        raise TypeError("expected PosteriorEnsemble")
    if len(ens) == 0:
        raise _misc.ScoringError("posterior ensemble is empty")
    return ens


def _log_likelihoods(ens, data):
    cached = ens.cached_log_likelihoods(data)
    if cached is not None:
        return _np.asarray(cached)
    return _np.array([_bayes_fit._loglik(data.x, data.t, *row)
                      for row in ens.values.tolist()])


@_arguments.accept(_tio.AlignedDataset, None)
def deviance(data, params):
    """
    deviance(data, params)

    -2 times the log likelihood; +inf if params give zero likelihood.
    """
    ll = _bayes_fit.log_likelihood(data, params)
    if ll == -_math.inf:
        return _math.inf
    return -2.0 * ll


@_arguments.accept(_check_ensemble, _tio.AlignedDataset)
def aic(ens, data):
    """
    aic(ens, data)

    Akaike information criterion, -2 L_max + 2 N_p, where L_max is the
    largest log likelihood among the ensemble samples and N_p is 3 for the
    stationary model and 4 otherwise.

    :raise ScoringError: if every sample has zero likelihood.
    """
    l_max = float(_np.max(_log_likelihoods(ens, data)))
    if l_max == -_math.inf:
        raise _misc.ScoringError("no sample of %r has a finite likelihood" %
                                 ens)
    return -2.0 * l_max + 2.0 * ens.n_params


def _dic_terms(ens, data):
    deviances = -2.0 * _log_likelihoods(ens, data)
    d_bar = float(_np.mean(deviances))
    d_at_mean = deviance(data, ens.mean_params())
    if d_at_mean == _math.inf:
        raise _misc.ScoringError(
            "posterior mean of %r lies outside the data support; DIC is "
            "undefined" % ens)
    p_d = d_bar - d_at_mean
    return d_bar, p_d


@_arguments.accept(_check_ensemble, _tio.AlignedDataset)
def dic(ens, data):
    """
    dic(ens, data)

    Deviance information criterion, P_D + D_bar, with D_bar the mean
    deviance over the ensemble and P_D = D_bar - D(posterior mean).

    :raise ScoringError: if the deviance at the posterior mean is infinite.
    """
    d_bar, p_d = _dic_terms(ens, data)
    return p_d + d_bar


def score(ens, data):
    """
    Compute the full :class:`ModelScore` of one ensemble.
    """
    _check_ensemble(ens)
    lls = _log_likelihoods(ens, data)
    l_max = float(_np.max(lls))
    if l_max == -_math.inf:
        raise _misc.ScoringError("no sample of %r has a finite likelihood" %
                                 ens)
    d_bar, p_d = _dic_terms(ens, data)
    return ModelScore(ens.model_id, -2.0 * l_max + 2.0 * ens.n_params,
                      p_d + d_bar, ens.n_params, l_max, d_bar, p_d)


def _order(scores):
    """
    Greedy ordering: repeatedly take the lowest DIC; among the remaining
    candidates within DIC_TIE_WINDOW of it, the lowest AIC goes first.
    Failed scores go last in input order.
    """
    remaining = [s for s in scores if s.ok]
    ordered = []
    while remaining:
        best = min(s.dic for s in remaining)
        close = [s for s in remaining if s.dic - best < DIC_TIE_WINDOW]
        pick = min(close, key=lambda s: (s.aic, s.dic))
        ordered.append(pick)
        remaining.remove(pick)
    return ordered + [s for s in scores if not s.ok]


def rank_models(candidates, data):
    """
    rank_models(candidates, data)

    Score every candidate and return the full table, best first. Primary
    order is DIC ascending; candidates whose DIC is within 2 of the best
    remaining one are ordered by AIC. A candidate whose scoring fails is
    kept in the table with its error message.

    :param candidates: sequence of (model_id, ensemble) pairs.
    :param data: mapping from model_id to its :class:`AlignedDataset`, or a
        single dataset used for all candidates.
    """
    candidates = list(candidates)
    if not candidates:
        raise _misc.ScoringError("no candidate models to rank")

    scores = []
    for model_id, ens in candidates:
        d = data[model_id] if isinstance(data, dict) else data
        try:
            scores.append(score(ens, d))
        except (_misc.RaindingsError, KeyError) as ex:
            _log.warning("scoring %s failed: %s", model_id, ex)
            scores.append(ModelScore.failed(model_id, ens.n_params, ex))

    ranked = _order(scores)
    if ranked and ranked[0].ok:
        _log.info("selected model: %s (DIC %.2f, AIC %.2f)", ranked[0].model_id,
                  ranked[0].dic, ranked[0].aic)
    return ranked
