# -*- coding: utf-8 -*-
#
# raindings
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#

from raindings.setup import config, hook
from raindings.constants import *
from raindings.misc import (RaindingsError, DataError, SupportError,
                            InitializationError, ScoringError,
                            DecompositionError, GridError, DesignError,
                            ConfigError)
from raindings.gev import (GevParams, return_level, return_period_of_level,
                           gev_cdf, gev_sf, gev_quantile)
from raindings.timeseries_io import (AnnualMaximaSeries, CovariateSeries,
                                     AlignedDataset, load_daily_csv,
                                     load_maxima_csv, load_covariate_csv,
                                     annual_maxima, align, standardize,
                                     quantile_map_bias_correct)
from raindings.bayes_fit import (PriorSpec, McmcConfig, PosteriorEnsemble,
                                 mh_sample, map_estimate,
                                 ensemble_return_levels)
from raindings.model_selection import ModelScore, rank_models
from raindings.hydraulics import (PipeSpec, LifetimeSpec, pipe_capacity,
                                  critical_intensity, annual_failure_prob,
                                  lifetime_reliability)
from raindings.uncertainty import (ScenarioGrid, DecompositionResult,
                                   build_grid, stage_uncertainty)
from raindings.design import (DesignBaseline, CostTable, GridInputs,
                              SafetyFactorCurve, sweep, min_sf_for_target,
                              min_sf_for_standard)


__version__ = '0.1.0'


import raindings.misc as _misc
__all__ = _misc.prune_globals(globals())
