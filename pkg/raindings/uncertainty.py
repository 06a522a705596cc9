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
The deep-uncertainty scenario grid and its cumulative variance
decomposition.

The grid holds one reliability per combination of options of K ordered
stages. The cumulative uncertainty up to stage k is the variance over the
options of stages 1..k with the later stages held fixed, averaged over all
choices of the later stages. A stage's uncertainty is the increase of the
cumulative uncertainty it causes. The stage uncertainties add up to the
variance of the whole grid.
"""

import raindings.arguments as _arguments
import raindings.constants as _constants
import raindings.engine as _engine
import raindings.hydraulics as _hydraulics
import raindings.misc as _misc
import raindings.util as _util

import itertools as _itertools
import logging as _logging

import numpy as _np
import pandas as _pd

_log = _logging.getLogger(__name__)


DEFAULT_STAGE_ORDER = (_constants.CLIMATE, _constants.RUNOFF,
                       _constants.LIFETIME)

# relative tolerance for the monotonicity check of cumulative uncertainties
MONOTONICITY_TOLERANCE = 1e-10


def _name(stage):
    return str(stage).lower()


class ScenarioGrid(object):
    """
    ScenarioGrid(stages, options, reliabilities=None, spreads=None)

    Reliabilities of all combinations of stage options.

    :param stages: the K stage flags, in decomposition order.
    :param options: for each stage, the labels of its options.
    :param reliabilities: array whose shape is the option counts; NaN marks
        a cell that has not been computed. Defaults to all NaN.
    :param spreads: optional array of the same shape plus a trailing axis
        of length 2 holding the 5% and 95% per-sample reliabilities.
    """
    @_arguments.accept(None, [_util.stage], [[None]], None, None)
    def __init__(self, stages, options, reliabilities=None, spreads=None):
        if len(stages) != len(options):
            raise ValueError("one option list per stage required")
        if len(set(stages)) != len(stages):
            raise ValueError("stages must not repeat")
        if any(len(o) == 0 for o in options):
            raise ValueError("every stage needs at least one option")
        for s, o in zip(stages, options):
            if len(set(o)) != len(o):
                raise ValueError("options of stage %s must not repeat: %r" %
                                 (_name(s), o))

        shape = tuple(len(o) for o in options)
        if reliabilities is None:
            reliabilities = _np.full(shape, _np.nan)
        reliabilities = _np.array(reliabilities, dtype=float)
        if reliabilities.shape != shape:
            raise ValueError("reliabilities have shape %r, expected %r" %
                             (reliabilities.shape, shape))
        if spreads is not None:
            spreads = _np.array(spreads, dtype=float)
            if spreads.shape != shape + (2,):
                raise ValueError("spreads have shape %r, expected %r" %
                                 (spreads.shape, shape + (2,)))

        self.stages = tuple(stages)
        self.options = [list(o) for o in options]
        self.reliabilities = reliabilities
        self.spreads = spreads

    @property
    def shape(self):
        return self.reliabilities.shape

    @property
    def n_cells(self):
        return int(self.reliabilities.size)

    @property
    def populated(self):
        return bool(_np.all(_np.isfinite(self.reliabilities)))

    def cells(self):
        """
        Iterate over (index tuple, option labels, reliability) in
        row-major order.
        """
        for index in _np.ndindex(*self.shape):
            labels = tuple(o[i] for o, i in zip(self.options, index))
            yield index, labels, float(self.reliabilities[index])

    def coordinates(self, index):
        return dict((_name(s), self.options[k][i])
                    for k, (s, i) in enumerate(zip(self.stages, index)))

    def to_frame(self):
        """
        Long-form table with one column per stage (option label) and a
        ``reliability`` column.
        """
        rows = [labels + (r,) for _, labels, r in self.cells()]
        return _pd.DataFrame(rows, columns=[_name(s) for s in self.stages]
                                           + ['reliability'])

    def to_dict(self):
        return {
            'stages': [_name(s) for s in self.stages],
            'options': [[str(v) for v in o] for o in self.options],
            'reliabilities': self.reliabilities.tolist(),
            'spreads': (self.spreads.tolist() if self.spreads is not None
                        else None),
        }

    def __repr__(self):
        return 'ScenarioGrid(%s, %s)' % (
            ' x '.join(_name(s) for s in self.stages),
            'x'.join(str(n) for n in self.shape))


class DecompositionResult(object):
    """
    Per-stage attribution of the grid variance.

    :ivar stages: stage flags in decomposition order.
    :ivar cumulative: cumulative uncertainty after 0, 1, ..., K stages
        (the first entry is always 0).
    :ivar stage_uncertainty: increase of the cumulative uncertainty per
        stage.
    :ivar total: variance over all cells.
    :ivar shares: stage uncertainty divided by total (all 0 if the grid is
        constant, in which case ``degenerate`` is set).
    """
    def __init__(self, stages, cumulative, total):
        self.stages = tuple(stages)
        self.cumulative = _np.asarray(cumulative, dtype=float)
        self.stage_uncertainty = _np.diff(self.cumulative)
        self.total = float(total)
        self.degenerate = not self.total > 0
        if self.degenerate:
            self.shares = _np.zeros(len(self.stages))
        else:
            self.shares = self.stage_uncertainty / self.total

    def share(self, stage):
        return float(self.shares[self.stages.index(_util.stage(stage))])

    def to_dict(self):
        return {
            'stages': [_name(s) for s in self.stages],
            'cumulative': self.cumulative.tolist(),
            'stage_uncertainty': self.stage_uncertainty.tolist(),
            'total': self.total,
            'shares': self.shares.tolist(),
            'degenerate': self.degenerate,
        }

    def __repr__(self):
        return 'DecompositionResult(%s)' % ', '.join(
            '%s=%.3f' % (_name(s), v) for s, v in zip(self.stages, self.shares))


def _populated(grid):
    if not isinstance(grid, ScenarioGrid):
        raise TypeError("expected ScenarioGrid")
    if not grid.populated:
        missing = [grid.coordinates(i) for i in
                   zip(*_np.nonzero(~_np.isfinite(grid.reliabilities)))]
        raise _misc.DecompositionError(
            "%d unpopulated cell(s), first at %r" %
            (len(missing), missing[0]))
    return grid


@_arguments.accept(_util.finite_array)
def variance(values):
    """
    variance(values)

    Population variance (divisor n) of a non-empty sequence.
    """
    if len(values) == 0:
        raise ValueError("variance of an empty sequence")
    return float(_np.mean((values - values.mean()) ** 2))


def _stage_index(grid, k):
    k = _util.integer(k)
    if not 0 <= k <= len(grid.stages):
        raise ValueError("stage index %d out of range 0-%d" %
                         (k, len(grid.stages)))
    return k


def _cumulative_variances(values, k):
    """
    Variances over the first k axes, one per combination of the remaining
    axes.
    """
    head = int(_np.prod(values.shape[:k], dtype=int))
    flat = values.reshape(head, -1)
    return ((flat - flat.mean(axis=0)) ** 2).mean(axis=0)


@_arguments.accept(_populated, None, _arguments.sequenceof(_util.integer))
def conditional_cumulative(grid, k, fixed_tail):
    """
    conditional_cumulative(grid, k, fixed_tail)

    Variance of the reliabilities over all options of stages 1..k, with
    stages k+1..K fixed at the option indices in fixed_tail.
    """
    k = _stage_index(grid, k)
    tail = tuple(fixed_tail)
    if len(tail) != len(grid.stages) - k:
        raise ValueError("expected %d fixed option indices, got %d" %
                         (len(grid.stages) - k, len(tail)))
    for i, n in zip(tail, grid.shape[k:]):
        if not 0 <= i < n:
            raise ValueError("option index %d out of range 0-%d" % (i, n - 1))
    sub = grid.reliabilities[(Ellipsis,) + tail] if tail else \
        grid.reliabilities
    return variance(_np.ravel(sub))


@_arguments.accept(_populated, None)
def marginal_cumulative(grid, k):
    """
    marginal_cumulative(grid, k)

    The mean of :func:`conditional_cumulative` over all choices of the
    stages after k. 0 for k = 0, the grid variance for k = K.
    """
    k = _stage_index(grid, k)
    if k == 0:
        return 0.0
    return float(_cumulative_variances(grid.reliabilities, k).mean())


@_arguments.accept(_populated)
def stage_uncertainty(grid):
    """
    stage_uncertainty(grid)

    Decompose the grid variance into per-stage uncertainties.

    :raise DecompositionError: if the cumulative uncertainties are not
        monotone, which indicates a corrupt grid.
    """
    K = len(grid.stages)
    cumulative = [marginal_cumulative(grid, k) for k in range(K + 1)]
    total = variance(_np.ravel(grid.reliabilities))

    tol = MONOTONICITY_TOLERANCE * max(total, 1e-300)
    for k in range(K):
        if cumulative[k + 1] < cumulative[k] - tol:
            raise _misc.DecompositionError(
                "cumulative uncertainty decreases at stage %s (%g < %g)" %
                (grid.stages[k], cumulative[k + 1], cumulative[k]))

    result = DecompositionResult(grid.stages, cumulative, total)
    if result.degenerate:
        _log.warning("%r: reliability is the same in every scenario; "
                     "shares are reported as 0", grid)
    return result


@_arguments.accept(_populated, [_util.stage])
def reorder(grid, stages):
    """
    reorder(grid, stages)

    Return the grid with its stages (axes) permuted into the given order.
    """
    if sorted(stages) != sorted(grid.stages):
        raise ValueError("%r is not a permutation of %r" %
                         (stages, grid.stages))
    axes = [grid.stages.index(s) for s in stages]
    spreads = (_np.transpose(grid.spreads, axes + [len(axes)])
               if grid.spreads is not None else None)
    return ScenarioGrid(stages, [grid.options[a] for a in axes],
                        _np.transpose(grid.reliabilities, axes), spreads)


def stage_orders(stages=DEFAULT_STAGE_ORDER):
    """
    All orderings of the given stages, the given order first.
    """
    return [list(p) for p in _itertools.permutations(stages)]


def _climate_row(index, label, ens, runoff_options, lifetime_options, spec):
    """
    Reliabilities (and spreads) of all runoff and lifetime options for one
    climate ensemble.
    """
    rows = _np.empty((len(runoff_options), len(lifetime_options)))
    spreads = _np.empty(rows.shape + (2,))
    for j, C in enumerate(runoff_options):
        pipe = spec.with_runoff(C)
        for l, life in enumerate(lifetime_options):
            try:
                r = _hydraulics.lifetime_reliability(ens, life, pipe)
            except (ValueError, TypeError, ArithmeticError) as ex:
                coords = {'climate': label, 'runoff': C,
                          'lifetime': life.years}
                raise _misc.GridError("scenario %r failed: %s" % (coords, ex),
                                      coords)
            rows[j, l] = r.reliability
            spreads[j, l] = r.ensemble_spread
    return rows, spreads


def build_grid(ensembles, runoff_options, lifetime_options, spec,
               stage_order=DEFAULT_STAGE_ORDER):
    """
    build_grid(ensembles, runoff_options, lifetime_options, spec,
               stage_order=(CLIMATE, RUNOFF, LIFETIME))

    Compute the lifetime reliability of spec for every combination of
    climate ensemble, runoff coefficient and lifetime. Cells are computed
    on the engine's worker pool.

    :param ensembles: sequence of (label, PosteriorEnsemble) pairs, one per
        climate option.
    :param runoff_options: runoff coefficients replacing spec.runoff_c.
    :param lifetime_options: :class:`LifetimeSpec` objects.
    :param spec: the pipe; its runoff coefficient is ignored.
    :param stage_order: order of the grid's stages.
    :raise ValueError: if two options of one stage share a label, e.g. two
        lifetimes of the same length.
    :raise GridError: naming the coordinates of the first failing cell.
    """
    ensembles = list(ensembles)
    runoff_options = [_util.runoff_coefficient(c) for c in runoff_options]
    lifetime_options = list(lifetime_options)
    if not (ensembles and runoff_options and lifetime_options):
        raise ValueError("every stage needs at least one option")
    if not isinstance(spec, _hydraulics.PipeSpec):
        raise TypeError("expected PipeSpec")

    # lifetime options are labelled by their length in years
    options = [[label for label, _ in ensembles], runoff_options,
               [life.years for life in lifetime_options]]
    # reject duplicate options before any cell is computed
    ScenarioGrid(DEFAULT_STAGE_ORDER, options)

    tasks = [(i, label, ens, runoff_options, lifetime_options, spec)
             for i, (label, ens) in enumerate(ensembles)]
    rows = _engine.map_tasks('grid', _climate_row, tasks)

    grid = ScenarioGrid(
        DEFAULT_STAGE_ORDER, options,
        _np.stack([r for r, _ in rows]),
        _np.stack([s for _, s in rows]))
    stage_order = [_util.stage(s) for s in stage_order]
    if tuple(stage_order) != DEFAULT_STAGE_ORDER:
        grid = reorder(grid, stage_order)
    return grid
