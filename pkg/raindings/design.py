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
Safety-factor analysis of a pipe designed to a standard rainfall intensity.
"""

import raindings.arguments as _arguments
import raindings.constants as _constants
import raindings.hydraulics as _hydraulics
import raindings.misc as _misc
import raindings.uncertainty as _uncertainty
import raindings.util as _util

import collections as _collections
import logging as _logging
import math as _math

import numpy as _np
import pandas as _pd
from scipy.interpolate import interp1d as _interp1d

_log = _logging.getLogger(__name__)


SF_MIN = 0.5
SF_RESOLUTION = 0.01

DEFAULT_SF_GRID = tuple(round(1.0 + 0.1 * i, 10) for i in range(16))


@_arguments.accept(_util.positive, _util.runoff_coefficient, _util.positive,
                   _util.positive, _util.positive)
def baseline_diameter(design_intensity, runoff_c, slope,
                      manning_n=_constants.DEFAULT_MANNING_N,
                      area=_constants.DEFAULT_AREA):
    """
    baseline_diameter(design_intensity, runoff_c, slope, manning_n=0.013,
                      area=0.25)

    Diameter whose full-pipe capacity equals the rational-method peak flow
    of the design intensity.
    """
    q = _hydraulics.peak_flow(runoff_c, design_intensity, area)
    return _hydraulics.required_diameter(q, manning_n, slope)


class DesignBaseline(object):
    """
    DesignBaseline(design_intensity, design_return_period, runoff_c, slope,
                   manning_n=0.013, area=0.25)

    A pipe sized to a design-standard intensity (e.g. the 100-year daily
    intensity of a design atlas).

    :ivar baseline_diameter: the resulting design diameter in m.
    """
    @_arguments.accept(None, _util.positive, _util.return_period,
                       _util.runoff_coefficient, _util.positive,
                       _util.positive, _util.positive)
    def __init__(self, design_intensity, design_return_period, runoff_c,
                 slope, manning_n=_constants.DEFAULT_MANNING_N,
                 area=_constants.DEFAULT_AREA):
        self.design_intensity = design_intensity
        self.design_return_period = design_return_period
        self.runoff_c = runoff_c
        self.slope = slope
        self.manning_n = manning_n
        self.area = area
        self.baseline_diameter = baseline_diameter(
            design_intensity, runoff_c, slope, manning_n, area)

    def pipe(self, sf=1.0):
        """
        The pipe with the baseline diameter multiplied by sf.
        """
        return _hydraulics.PipeSpec(sf * self.baseline_diameter, self.slope,
                                    self.runoff_c, self.manning_n, self.area)

    def __repr__(self):
        return 'DesignBaseline(%g mm/hr, %g yr, D=%.4f m)' % (
            self.design_intensity, self.design_return_period,
            self.baseline_diameter)

    def to_dict(self):
        return {'design_intensity': self.design_intensity,
                'design_return_period': self.design_return_period,
                'runoff_c': self.runoff_c, 'slope': self.slope,
                'manning_n': self.manning_n, 'area': self.area,
                'baseline_diameter': self.baseline_diameter}


class CostTable(object):
    """
    CostTable(knots, strict=True)

    Relative pipe cost as a function of the diameter ratio (safety factor),
    interpolated linearly between knots.

    :param knots: mapping from safety factor to relative cost; at least two
        entries, costs nondecreasing.
    :param strict: require the knots to cover safety factor 1.0, with cost
        1.0 there.
    """
    @_arguments.accept(None, {_util.positive: _util.positive}, bool)
    def __init__(self, knots, strict=True):
        if len(knots) < 2:
            raise ValueError("cost table needs at least two knots")
        sf = _np.array(sorted(knots))
        cost = _np.array([knots[k] for k in sorted(knots)])
        if _np.any(_np.diff(cost) < 0):
            raise ValueError("costs must not decrease with the safety factor")
        self.sf = sf
        self.cost = cost
        self._interp = _interp1d(sf, cost, kind='linear',
                                 fill_value='extrapolate', assume_sorted=True)
        if strict and not sf[0] <= 1.0 <= sf[-1]:
            raise ValueError("cost table must cover safety factor 1.0 "
                             "(knots span %g-%g)" % (sf[0], sf[-1]))
        if strict and abs(self._cost(1.0) - 1.0) > 1e-12:
            raise ValueError("relative cost at safety factor 1.0 must be 1.0")

    def _cost(self, sf):
        return float(self._interp(sf))

    def scaled(self, factor):
        return CostTable(dict(zip(self.sf.tolist(),
                                  (self.cost * factor).tolist())),
                         strict=False)

    def to_dict(self):
        return dict((repr(float(s)), float(c))
                    for s, c in zip(self.sf, self.cost))

    @classmethod
    def placeholder(cls):
        """
        Illustrative cost table; replace it with local unit costs.
        """
        return cls(dict(_constants.PLACEHOLDER_COST_TABLE))


@_arguments.accept(_util.positive, CostTable)
def cost_factor(sf, table):
    """
    cost_factor(sf, table)

    Relative cost of a pipe with safety factor sf.

    :raise DesignError: if sf lies below the first knot. Above the last
        knot, the last segment is extrapolated and a warning is logged.
    """
    if sf < table.sf[0]:
        raise _misc.DesignError("safety factor %g is below the cost table "
                                "(starts at %g)" % (sf, table.sf[0]))
    if sf > table.sf[-1]:
        _log.warning("safety factor %g is beyond the cost table (ends at "
                     "%g); extrapolating", sf, table.sf[-1])
    return table._cost(sf)


@_arguments.accept(_util.return_period, _util.count)
def lifetime_target(standard_period, years):
    """
    lifetime_target(standard_period, years)

    Lifetime reliability of a pipe that fails with probability exactly
    1/standard_period in each of its years of service.
    """
    return (1.0 - 1.0 / standard_period) ** years


class GridInputs(_collections.namedtuple('GridInputs',
        'ensembles runoff_options lifetime_options stage_order')):
    """
    GridInputs(ensembles, runoff_options, lifetime_options,
               stage_order=(CLIMATE, RUNOFF, LIFETIME))

    The scenario options of a sweep; see :func:`uncertainty.build_grid`.
    """
    __slots__ = ()

    def __new__(cls, ensembles, runoff_options, lifetime_options,
                stage_order=_uncertainty.DEFAULT_STAGE_ORDER):
        return super(GridInputs, cls).__new__(
            cls, list(ensembles), list(runoff_options),
            list(lifetime_options), tuple(stage_order))


class _GridEvaluator(object):
    def __init__(self, baseline, inputs):
        self.baseline = baseline
        self.inputs = inputs

    def __call__(self, sf):
        try:
            return _uncertainty.build_grid(
                self.inputs.ensembles, self.inputs.runoff_options,
                self.inputs.lifetime_options, self.baseline.pipe(sf),
                self.inputs.stage_order)
        except _misc.GridError as ex:
            coords = dict(ex.coordinates or {}, sf=sf)
            raise _misc.GridError("safety factor %g: %s" % (sf, ex), coords)


def _grid_statistic(grid, robustness, period=None):
    """
    Worst-case or mean reliability of a grid. With period, each cell's
    lifetime reliability is first converted to the equivalent annual
    reliability, R ** (1 / lifetime).
    """
    values = grid.reliabilities
    if period is not None:
        axis = grid.stages.index(_constants.LIFETIME)
        years = _np.asarray(grid.options[axis], dtype=float)
        shape = [1] * values.ndim
        shape[axis] = -1
        values = values ** (1.0 / years.reshape(shape))
    if robustness == _constants.WORST_CASE:
        return float(values.min())
    return float(values.mean())


class SafetyFactorCurve(object):
    """
    SafetyFactorCurve(factors, grids, cost_factors=None, evaluator=None)

    Scenario reliabilities as a function of the safety factor.

    :param factors: ascending safety factors.
    :param grids: one populated :class:`ScenarioGrid` per factor.
    :param cost_factors: relative cost per factor, if a cost table was
        given.
    :param evaluator: function computing the grid for any safety factor,
        used to refine minimal factors between grid points.
    """
    def __init__(self, factors, grids, cost_factors=None, evaluator=None):
        factors = _np.asarray(factors, dtype=float)
        if len(factors) == 0 or len(grids) != len(factors):
            raise ValueError("one grid per safety factor required")
        if _np.any(_np.diff(factors) <= 0):
            raise ValueError("safety factors must be strictly ascending")
        self.factors = factors
        self.grids = list(grids)
        self.cost_factors = (_np.asarray(cost_factors, dtype=float)
                             if cost_factors is not None else None)
        self.evaluator = evaluator

        self.worst = _np.array([_grid_statistic(g, _constants.WORST_CASE)
                                for g in self.grids])
        self.mean = _np.array([_grid_statistic(g, _constants.MEAN)
                               for g in self.grids])

    def statistic(self, robustness=_constants.WORST_CASE, period=None):
        return _np.array([_grid_statistic(g, robustness, period)
                          for g in self.grids])

    def per_climate(self):
        """
        Mapping from climate option label to (worst, mean) arrays over the
        other stages' options.
        """
        g0 = self.grids[0]
        axis = g0.stages.index(_constants.CLIMATE)
        result = _collections.OrderedDict()
        for i, label in enumerate(g0.options[axis]):
            cells = [_np.take(g.reliabilities, i, axis=axis)
                     for g in self.grids]
            result[label] = (_np.array([c.min() for c in cells]),
                             _np.array([c.mean() for c in cells]))
        return result

    def to_frame(self):
        costs = (self.cost_factors if self.cost_factors is not None
                 else _np.full(len(self.factors), _np.nan))
        return _pd.DataFrame({'sf': self.factors, 'cost_factor': costs,
                              'worst_reliability': self.worst,
                              'mean_reliability': self.mean},
                             columns=['sf', 'cost_factor',
                                      'worst_reliability',
                                      'mean_reliability'])

    def per_climate_frame(self):
        rows = []
        for label, (worst, mean) in self.per_climate().items():
            for sf, w, m in zip(self.factors, worst, mean):
                rows.append((sf, label, w, m))
        return _pd.DataFrame(rows, columns=['sf', 'climate',
                                            'worst_reliability',
                                            'mean_reliability'])

    def to_dict(self):
        return {
            'factors': self.factors.tolist(),
            'cost_factors': (self.cost_factors.tolist()
                             if self.cost_factors is not None else None),
            'worst_reliability': self.worst.tolist(),
            'mean_reliability': self.mean.tolist(),
            'per_climate': dict((str(k), {'worst': w.tolist(),
                                          'mean': m.tolist()})
                                for k, (w, m) in self.per_climate().items()),
        }

    def __repr__(self):
        return 'SafetyFactorCurve(%g-%g, %d points)' % (
            self.factors[0], self.factors[-1], len(self.factors))


def _sf_grid(factors):
    factors = [_util.positive(f) for f in factors]
    if not factors:
        raise ValueError("empty safety factor grid")
    if any(b <= a for a, b in zip(factors, factors[1:])):
        raise ValueError("safety factors must be strictly ascending")
    if factors[0] < SF_MIN:
        raise ValueError("safety factors must be at least %g" % SF_MIN)
    return factors


@_arguments.accept(DesignBaseline, GridInputs, _sf_grid,
                   _arguments.nullable(CostTable))
def sweep(baseline, inputs, sf_grid=DEFAULT_SF_GRID, cost_table=None):
    """
    sweep(baseline, inputs, sf_grid=(1.0, 1.1, ..., 2.5), cost_table=None)

    Evaluate the full scenario grid for a pipe of diameter
    sf * baseline_diameter, for every sf in sf_grid.

    :raise GridError: with the safety factor and cell of a failing scenario.
    """
    evaluator = _GridEvaluator(baseline, inputs)
    grids = []
    for sf in sf_grid:
        grids.append(evaluator(sf))
        _log.debug("sf %.2f: worst %.6f", sf, grids[-1].reliabilities.min())
    costs = ([cost_factor(sf, cost_table) for sf in sf_grid]
             if cost_table is not None else None)
    return SafetyFactorCurve(sf_grid, grids, costs, evaluator)


def _min_sf(curve, stat, target):
    values = stat(None)
    meets = _np.nonzero(values >= target)[0]
    if not len(meets):
        raise _misc.DesignError(
            "target %.6g is not reached for safety factors up to %g (best "
            "%.6g); widen the sweep" % (target, curve.factors[-1],
                                        values.max()))
    i = int(meets[0])
    if i == 0 or curve.evaluator is None:
        return float(curve.factors[i])

    lo, hi = float(curve.factors[i - 1]), float(curve.factors[i])
    while hi - lo > SF_RESOLUTION:
        mid = 0.5 * (lo + hi)
        if stat(curve.evaluator(mid)) >= target:
            hi = mid
        else:
            lo = mid
    # report on the resolution grid, never above the feasible bracket end
    rounded = round(_math.ceil(hi / SF_RESOLUTION - 1e-9) * SF_RESOLUTION, 10)
    return min(rounded, float(curve.factors[i]))


@_arguments.accept(SafetyFactorCurve, _util.probability, _util.robustness)
def min_sf_for_target(curve, target, robustness=_constants.WORST_CASE):
    """
    min_sf_for_target(curve, target, robustness=WORST_CASE)

    Smallest safety factor whose worst-case (or mean) scenario reliability
    reaches target: the first grid factor that does, refined by bisection
    between it and the previous grid factor.

    :raise DesignError: if no factor of the curve reaches target.
    """
    def stat(grid):
        if grid is None:
            return curve.worst if robustness == _constants.WORST_CASE \
                else curve.mean
        return _grid_statistic(grid, robustness)
    return _min_sf(curve, stat, target)


@_arguments.accept(SafetyFactorCurve, _util.return_period, _util.robustness)
def min_sf_for_standard(curve, standard_period,
                        robustness=_constants.WORST_CASE):
    """
    min_sf_for_standard(curve, standard_period, robustness=WORST_CASE)

    Smallest safety factor for which every scenario (or the scenario mean)
    meets the T-year design standard over its own lifetime, i.e.
    R >= (1 - 1/T) ** lifetime.
    """
    def stat(grid):
        if grid is None:
            return curve.statistic(robustness, standard_period)
        return _grid_statistic(grid, robustness, standard_period)
    return _min_sf(curve, stat, 1.0 - 1.0 / standard_period)
