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
Schedules independent work items (MCMC chains, scenario cells, safety
factor points) onto a pool of worker processes, and calls the registered
hooks.

Results are always returned in task order, so every output is the same no
matter how many workers were used.
"""

import raindings.setup as _setup

import concurrent.futures as _futures
import logging as _logging
import weakref as _weakref

_log = _logging.getLogger(__name__)


_TheEngine = None


def _call(settings, func, args):
    # runs in the worker process, which starts with default settings
    _setup._config_impl(**settings)
    return func(*args)


class Engine(object):
    """
    Engine(command='', jobs=None)

    :param command: name passed to the ``on_start`` and ``on_exit`` hooks.
    :param jobs: number of worker processes; defaults to the ``jobs``
        setting. With one job, everything runs in the calling process.
    """
    def __init__(self, command='', jobs=None):
        self.command = command
        self.jobs = jobs if jobs is not None else _setup.get_config('jobs')
        self._pool = None

    def run(self, main, *args):
        """
        Call main(*args) between the on_start and on_exit hooks, with this
        engine as the current one.
        """
        global _TheEngine
        previous = _TheEngine
        _TheEngine = _weakref.ref(self)
        self._call_hooks('on_start', self.command)
        try:
            return main(*args)
        finally:
            self._call_hooks('on_exit', self.command)
            self.shutdown()
            _TheEngine = previous

    def map(self, name, func, tasks):
        """
        Return [func(*args) for args in tasks], computed on the worker pool.
        The ``on_task`` hook is called once per finished task, in task order.
        The first exception raised by any task is re-raised.
        """
        tasks = [tuple(t) for t in tasks]
        total = len(tasks)
        _log.debug("%s: %d task(s) on %d worker(s)", name, total, self.jobs)

        if self.jobs == 1 or total <= 1:
            results = []
            for index, args in enumerate(tasks):
                results.append(func(*args))
                self._call_hooks('on_task', name, index, total)
            return results

        settings = dict(_setup._config)
        pool = self._get_pool()
        futures = [pool.submit(_call, settings, func, args) for args in tasks]
        results = []
        try:
            for index, f in enumerate(futures):
                results.append(f.result())
                self._call_hooks('on_task', name, index, total)
        except BaseException:
            for f in futures:
                f.cancel()
            raise
        return results

    def _get_pool(self):
        if self._pool is None:
            self._pool = _futures.ProcessPoolExecutor(max_workers=self.jobs)
        return self._pool

    def shutdown(self):
        if self._pool is not None:
            self._pool.shutdown(wait=True, cancel_futures=True)
            self._pool = None

    def _call_hooks(self, name, *args):
        for hook in _setup.get_hooks():
            if hasattr(hook, name):
                f = getattr(hook, name)
                f(*args)


def active():
    """
    Return ``True`` if an engine is running (inside :meth:`Engine.run`).
    """
    return _TheEngine is not None and _TheEngine() is not None


def map_tasks(name, func, tasks):
    """
    map_tasks(name, func, tasks)

    Run func over tasks on the current engine; see :meth:`Engine.map`.
    func must be a module-level function so that it can be sent to worker
    processes.
    """
    if active():
        return _TheEngine().map(name, func, tasks)
    e = Engine()
    try:
        return e.map(name, func, tasks)
    finally:
        e.shutdown()
