# -*- coding: utf-8 -*-
#
# raindings
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#

from raindings.misc import NamedFlag as _NamedFlag


class _Robustness(_NamedFlag):
    pass


class _Stage(_NamedFlag):
    pass


# statistic used to collapse a scenario grid into one reliability
WORST_CASE = _Robustness(0, 'WORST_CASE')
MEAN = _Robustness(1, 'MEAN')

_ROBUSTNESS = {
    'worst_case': WORST_CASE,
    'mean': MEAN,
}

# deep-uncertainty stages, in their default order
CLIMATE = _Stage(0, 'CLIMATE')
RUNOFF = _Stage(1, 'RUNOFF')
LIFETIME = _Stage(2, 'LIFETIME')

_STAGES = {
    'climate': CLIMATE,
    'runoff': RUNOFF,
    'lifetime': LIFETIME,
}


# covariate names understood without further declaration
COVARIATE_NAMES = (
    'global_mean_temp',
    'local_temp',
    'mdr_sst',
    'nao',
    'pdo',
    'nino34',
    'soi',
    'atl_tc_count',
)

STATIONARY = 'stationary'

PARAMETER_NAMES = ('mu0', 'a_mu', 'sigma', 'xi')


# rational method: Q [m^3/s] = 0.278 C I [mm/hr] A [km^2]
RATIONAL_FACTOR = 0.278
# Manning's equation for a circular pipe flowing full, SI units
MANNING_FACTOR = 0.31

DEFAULT_MANNING_N = 0.013
DEFAULT_AREA = 0.25

# below this |xi| the Gumbel limit is used
GUMBEL_THRESHOLD = 1e-8

EULER_GAMMA = 0.5772156649015329

HOURS_PER_DAY = 24.0

DEFAULT_RETURN_PERIODS = (2, 5, 10, 25, 50, 100, 200, 500)

# not taken from any design table; editable placeholders
DEFAULT_RUNOFF_OPTIONS = (0.5, 0.7, 0.8, 0.9)
DEFAULT_LIFETIMES = (25, 50, 75)

# relative pipe cost by diameter ratio. placeholder values, replace with a
# real unit-cost table for actual design work
PLACEHOLDER_COST_TABLE = {
    0.5: 0.45,
    1.0: 1.0,
    1.5: 1.75,
    2.0: 2.7,
    2.5: 3.85,
    3.0: 5.2,
}
