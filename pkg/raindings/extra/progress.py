# -*- coding: utf-8 -*-
#
# raindings
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#

import sys as _sys
import time as _time


class Progress(object):
    """
    Reports the progress of long-running commands (MCMC chains, scenario
    grids, safety factor sweeps) on stderr.

    Register it with :func:`raindings.hook()`.

    :param stream:
        file object to write to, defaults to ``sys.stderr``.

    :param every:
        report only every n-th finished task, plus the last one.
    """
    def __init__(self, stream=None, every=1):
        self.stream = stream
        self.every = max(1, int(every))
        self._started = None

    def _write(self, text):
        stream = self.stream if self.stream is not None else _sys.stderr
        stream.write(text + '\n')
        stream.flush()

    def on_start(self, command):
        self._started = _time.time()
        if command:
            self._write("%s: started" % command)

    def on_task(self, name, index, total):
        done = index + 1
        if done % self.every == 0 or done == total:
            self._write("%s: %d/%d" % (name, done, total))

    def on_exit(self, command):
        if command and self._started is not None:
            self._write("%s: finished in %.1fs" %
                        (command, _time.time() - self._started))
        self._started = None
