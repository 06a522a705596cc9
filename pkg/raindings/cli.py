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
The ``raindings`` command line tool.
"""

import raindings
import raindings.engine as _engine
import raindings.misc as _misc
import raindings.pipeline as _pipeline
import raindings.runconfig as _runconfig
import raindings.setup as _setup
import raindings.synthetic as _synthetic
import raindings.extra.progress as _progress

import argparse as _argparse
import logging as _logging
import os as _os
import sys as _sys

_log = _logging.getLogger(__name__)


COMMANDS = ('fit', 'select', 'returns', 'reliability', 'decompose', 'sweep',
            'report', 'sample')


def _cmd_fit(rc, options):
    ensembles = _pipeline.fit(rc)
    for model_id, ens in ensembles.items():
        rates = ', '.join('%s %.2f' % (k, v)
                          for k, v in sorted(ens.acceptance_rates.items()))
        print("%-12s %d samples  acceptance: %s" % (model_id, len(ens),
                                                    rates))


def _cmd_select(rc, options):
    ranked = _pipeline.select(rc)
    for s in ranked:
        if s.ok:
            print("%-12s DIC %10.3f  AIC %10.3f  p_D %6.2f" % (
                s.model_id, s.dic, s.aic, s.p_d))
        else:
            print("%-12s failed: %s" % (s.model_id, s.error))
    if ranked[0].ok:
        print("selected: %s" % ranked[0].model_id)
    else:
        raise _misc.ScoringError("no candidate model could be scored")


def _cmd_returns(rc, options):
    frame, summary = _pipeline.returns(rc)
    print(frame.to_string(index=False, float_format='%.3f'))
    if 'nonstationary_period_of_stationary_100yr' in summary:
        print("stationary 100-year level %.3f mm/hr has a return period of "
              "%s years under %s" % (
                  summary['stationary_100yr_level'],
                  '%.1f' % summary['nonstationary_period_of_stationary_100yr']
                  if summary['nonstationary_period_of_stationary_100yr']
                  else 'infinite', summary['selected']))


def _cmd_reliability(rc, options):
    frame = _pipeline.reliability(rc)
    print(frame.to_string(index=False, float_format='%.6f'))


def _cmd_decompose(rc, options):
    grid, results = _pipeline.decompose(rc, options.all_orders)
    print("%r" % grid)
    for label, r in results.items():
        print("%s: total variance %.3g%s" % (
            label, r.total, ' (degenerate)' if r.degenerate else ''))
        for s, u, share in zip(r.stages, r.stage_uncertainty, r.shares):
            print("  %-9s %.3g  %5.1f%%" % (str(s).lower(), u, 100 * share))


def _cmd_sweep(rc, options):
    curve, minimal = _pipeline.sweep(rc)
    print(curve.to_frame().to_string(index=False, float_format='%.4f'))
    for T, sf in minimal.items():
        print("minimal safety factor for the %s-year standard: %s" %
              (T, '%.2f' % sf if sf is not None else 'not reached'))


def _cmd_report(rc, options):
    _sys.stdout.write(_pipeline.report(rc))


_COMMANDS = {
    'fit': _cmd_fit,
    'select': _cmd_select,
    'returns': _cmd_returns,
    'reliability': _cmd_reliability,
    'decompose': _cmd_decompose,
    'sweep': _cmd_sweep,
    'report': _cmd_report,
}


def _parser():
    parser = _argparse.ArgumentParser(
        prog='raindings',
        description='nonstationary rainfall extremes and stormwater pipe '
                    'reliability under deep uncertainty')
    parser.add_argument('--version', action='version',
                        version='raindings %s' % raindings.__version__)
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('directory', nargs='?',
                        help="target directory ('sample' only)")
    parser.add_argument('-c', '--config', default='config.json',
                        help='run configuration file (default: %(default)s)')
    parser.add_argument('-s', '--seed', type=int,
                        help='root random seed')
    parser.add_argument('-o', '--out',
                        help='output directory')
    parser.add_argument('-j', '--jobs', type=int,
                        help='number of worker processes')
    parser.add_argument('--covariates',
                        help="comma-separated candidate models ('fit')")
    parser.add_argument('--all-orders', action='store_true',
                        help="decompose in every stage order ('decompose')")
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='debug output')
    parser.add_argument('-q', '--quiet', action='store_true',
                        help='warnings and errors only')
    parser.add_argument('-p', '--progress', action='store_true',
                        help='report task progress on stderr')
    return parser


def _setup_logging(options):
    handler = _logging.StreamHandler(_sys.stderr)
    handler.setFormatter(_logging.Formatter('%(levelname)s: %(message)s'))
    logger = _logging.getLogger('raindings')
    logger.handlers[:] = [handler]
    logger.propagate = False
    # the package logger defers to the root level unless silent
    _logging.getLogger().setLevel(_logging.DEBUG if options.verbose
                                  else _logging.INFO)
    if options.quiet:
        _setup._config_impl(override=True, silent=True)
    if options.progress:
        _setup.hook(_progress.Progress())


def _overrides(options):
    d = {}
    if options.seed is not None:
        d['seed'] = options.seed
    if options.jobs is not None:
        d['jobs'] = options.jobs
    return d


def _run(options):
    if options.command == 'sample':
        directory = options.directory or 'raindings-sample'
        path = _synthetic.write_sample_project(
            directory, options.seed if options.seed is not None else 0)
        print("wrote sample project to %s" % path)
        return

    overrides = _overrides(options)
    if overrides:
        try:
            # validate first, then pin against the configuration file
            _setup.config(**overrides)
            _setup._config_impl(override=True, **overrides)
        except (TypeError, ValueError) as ex:
            raise _misc.ConfigError(str(ex))

    rc = _runconfig.RunConfig.load(options.config)
    if options.covariates:
        candidates = [c.strip() for c in options.covariates.split(',')
                      if c.strip()]
        rc = _runconfig.RunConfig(dict(rc.raw, candidates=candidates),
                                  rc.base_dir)
    if options.out:
        rc.out = _os.path.abspath(options.out)
    rc.apply()

    _log.debug("seed %d, config hash %s", _setup.get_config('seed'),
               rc.config_hash())
    _engine.Engine(options.command).run(_COMMANDS[options.command], rc,
                                        options)


def main(argv=None):
    """
    Entry point of the command line tool. Returns the exit status: 0 if
    every requested artifact was produced, 1 otherwise.
    """
    options = _parser().parse_args(argv)
    _setup_logging(options)
    try:
        _run(options)
    except (_misc.RaindingsError, OSError) as ex:
        _log.error("%s", ex)
        return 1
    return 0


if __name__ == '__main__':
    _sys.exit(main())
