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
SVG charts of return levels, safety-factor curves and uncertainty shares.
"""

import raindings.artifacts as _artifacts

import logging as _logging
import os as _os

import matplotlib as _mpl
_mpl.use('agg')
import matplotlib.pyplot as _plt

_log = _logging.getLogger(__name__)


_mpl.rcParams['svg.hashsalt'] = 'raindings'
_mpl.rcParams['font.size'] = 9
_mpl.rcParams['axes.labelsize'] = 9
_mpl.rcParams['legend.fontsize'] = 8


def _save(fig, path):
    _artifacts.ensure_dir(_os.path.dirname(path) or '.')
    # no timestamp, so that identical figures give identical files
    fig.savefig(path, format='svg', metadata={'Date': None})
    _plt.close(fig)
    _log.debug("wrote %s", path)
    return path


def return_level_chart(curves, path, title=None):
    """
    Plot return level against return period.

    :param curves: mapping from label to a DataFrame with columns
        ``period``, ``mean``, ``q05``, ``q95`` and ``map``.
    """
    fig, ax = _plt.subplots(figsize=(6, 4))
    for label, df in curves.items():
        line, = ax.plot(df['period'], df['mean'], label='%s (mean)' % label)
        ax.fill_between(df['period'], df['q05'], df['q95'],
                        color=line.get_color(), alpha=0.2, linewidth=0)
        ax.plot(df['period'], df['map'], linestyle='--',
                color=line.get_color(), label='%s (MAP)' % label)
    ax.set_xscale('log')
    ax.set_xlabel('return period [years]')
    ax.set_ylabel('24-hour intensity [mm/hr]')
    if title:
        ax.set_title(title)
    ax.legend(loc='upper left')
    ax.grid(True, which='both', alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)


def safety_factor_chart(curve, path, targets=None):
    """
    Plot worst-case and mean lifetime reliability against the safety
    factor, one thin line per climate option, and relative cost on the top
    axis.

    :param targets: optional mapping from label to a reliability drawn as a
        horizontal line.
    """
    fig, ax = _plt.subplots(figsize=(6, 4))
    for label, (_, mean) in curve.per_climate().items():
        ax.plot(curve.factors, mean, color='0.7', linewidth=0.6)
    ax.plot(curve.factors, curve.mean, color='C0', label='mean')
    ax.plot(curve.factors, curve.worst, color='C3', label='worst case')
    for label, value in (targets or {}).items():
        ax.axhline(value, color='k', linestyle=':', linewidth=0.8)
        ax.annotate(label, (curve.factors[0], value), fontsize=7,
                    va='bottom')
    ax.set_xlabel('safety factor')
    ax.set_ylabel('lifetime hydraulic reliability')
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc='lower right')
    ax.grid(True, alpha=0.3)

    if curve.cost_factors is not None:
        top = ax.twiny()
        top.set_xlim(ax.get_xlim())
        ticks = curve.factors[::max(1, len(curve.factors) // 6)]
        top.set_xticks(ticks)
        costs = dict(zip(curve.factors, curve.cost_factors))
        top.set_xticklabels(['%.2f' % costs[t] for t in ticks])
        top.set_xlabel('cost factor')
    fig.tight_layout()
    return _save(fig, path)


def shares_chart(results, path):
    """
    Stacked bars of the stage shares, one bar per decomposition (e.g. per
    stage order).

    :param results: mapping from label to :class:`DecompositionResult`.
    """
    fig, ax = _plt.subplots(figsize=(6, 3))
    labels = list(results)
    stages = sorted(set(s for r in results.values() for s in r.stages))
    bottoms = [0.0] * len(labels)
    for stage in stages:
        heights = [float(r.shares[r.stages.index(stage)])
                   for r in results.values()]
        ax.bar(labels, heights, bottom=bottoms, label=str(stage).lower())
        bottoms = [b + h for b, h in zip(bottoms, heights)]
    ax.set_ylabel('share of total variance')
    ax.set_ylim(0, 1)
    ax.legend(loc='upper right')
    fig.tight_layout()
    return _save(fig, path)
