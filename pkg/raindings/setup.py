# -*- coding: utf-8 -*-
#
# raindings
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#

import raindings.arguments as _arguments
import raindings.util as _util

import logging as _logging


_DEFAULT_CONFIG = {
    'silent':                   False,
    'jobs':                     1,
    'seed':                     0,
    'n_iterations':             50000,
    'burn_in':                  10000,
    'adapt':                    True,
    'min_coverage':             0.9,
    'max_reliability_samples':  None,
}


def reset():
    global _config, _config_overridden, _hooks
    _config = _DEFAULT_CONFIG.copy()
    _config_overridden = []
    _hooks = []
    _config_updated()


_nonnegative = _arguments.each(
    _util.integer, _arguments.condition(lambda x: x >= 0, 'x >= 0'))


@_arguments.accept(kwargs = {
    'silent':                   bool,
    'jobs':                     _util.count,
    'seed':                     _nonnegative,
    'n_iterations':             _util.count,
    'burn_in':                  _nonnegative,
    'adapt':                    bool,
    'min_coverage':             _util.fraction,
    'max_reliability_samples':  _arguments.nullable(_util.count),
})
def config(**kwargs):
    """
    config(**kwargs)

    Change global settings. Settings given on the command line take
    precedence over later calls.

    :param \\*\\*kwargs: any of ``silent``, ``jobs``, ``seed``,
        ``n_iterations``, ``burn_in``, ``adapt``, ``min_coverage``,
        ``max_reliability_samples``.
    """
    _config_impl(**kwargs)


def _config_impl(override=False, **kwargs):
    new = _config.copy()
    for k, v in kwargs.items():
        if override or k not in _config_overridden:
            new[k] = v
    if new['burn_in'] >= new['n_iterations']:
        raise ValueError("burn_in (%d) must be smaller than n_iterations (%d)"
                         % (new['burn_in'], new['n_iterations']))
    _config.update(new)
    if override:
        _config_overridden.extend(kwargs.keys())
    _config_updated()


def _config_updated():
    level = _logging.WARNING if _config['silent'] else _logging.NOTSET
    _logging.getLogger('raindings').setLevel(level)


def get_config(var):
    return _config[var]


def hook(*args):
    """
    hook(*args)

    Register hook objects. The engine calls their ``on_start(command)``,
    ``on_task(name, index, total)`` and ``on_exit(command)`` methods, if
    present.

    :param \\*args: an arbitrary number of hook objects.
    """
    _hooks.extend(args)

def get_hooks():
    return _hooks


reset()
