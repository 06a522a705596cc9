# -*- coding: utf-8 -*-
#
# raindings
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#

import inspect
import functools
import itertools
import hashlib
import json
import zlib

import numpy as np


class RaindingsError(ValueError):
    """
    Base class for all errors raised by raindings for invalid data or
    unachievable requests.
    """


class DataError(RaindingsError):
    pass


class SupportError(RaindingsError):
    pass


class InitializationError(RaindingsError):
    pass


class ScoringError(RaindingsError):
    pass


class DecompositionError(RaindingsError):
    pass


class GridError(RaindingsError):
    def __init__(self, message, coordinates=None):
        RaindingsError.__init__(self, message)
        self.coordinates = coordinates

    def __reduce__(self):
        # keep the coordinates when passed back from a worker process
        return (GridError, (self.args[0], self.coordinates))


class DesignError(RaindingsError):
    pass


class ConfigError(RaindingsError):
    pass


def flatten(arg):
    """
    Flatten nested sequences into a single list.
    """
    if issequence(arg):
        return list(itertools.chain(*(flatten(i) for i in arg)))
    else:
        return [arg]


def issequence(seq, accept_string=False):
    """
    Return whether seq is of a sequence type. By default, strings and
    mappings are not considered sequences.
    """
    if not accept_string and isinstance(seq, str):
        return False
    if isinstance(seq, dict):
        return False

    try:
        iter(seq)
        return True
    except TypeError:
        return False


def issequenceof(seq, t):
    """
    Return whether seq is a sequence with elements of type t.
    """
    return issequence(seq) and all(isinstance(v, t) for v in seq)


_argspec_cache = {}

def getargspec(f):
    """
    Wrapper around inspect.getfullargspec() that returns sensible results
    for functools.partial objects.
    Results are cached, since the argument constraints look them up on
    every decorated definition.
    """
    if f in _argspec_cache:
        return _argspec_cache[f]
    if isinstance(f, functools.partial):
        spec = inspect.getfullargspec(f.func)
        r = (spec.args[len(f.args):], spec.varargs, spec.varkw,
             spec.defaults)
    else:
        spec = inspect.getfullargspec(f)
        r = (spec.args, spec.varargs, spec.varkw, spec.defaults)
    _argspec_cache[f] = r
    return r


class NamedFlag(int):
    """
    An integer type where each value has a name attached to it.
    """
    def __new__(cls, value, name):
        return int.__new__(cls, value)
    def __init__(self, value, name):
        self.name = name
    def __getnewargs__(self):
        return (int(self), self.name)
    def __repr__(self):
        return self.name
    def __str__(self):
        return self.name


def prune_globals(g):
    return [n for (n, m) in g.items()
        if not inspect.ismodule(m)
        and not n.startswith('_')
    ]


def seed_sequence(root, *names):
    """
    Return a numpy SeedSequence for the named sub-stream of the given root
    seed. Names may be strings or integers; the same (root, names) always
    yields the same stream, no matter which process asks for it.
    """
    key = tuple(n if isinstance(n, int) else zlib.crc32(str(n).encode('utf-8'))
                for n in names)
    return np.random.SeedSequence(entropy=int(root), spawn_key=key)


def rng(root, *names):
    """
    Return a numpy Generator for the named sub-stream of the given root seed.
    """
    return np.random.default_rng(seed_sequence(root, *names))


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(',', ':'),
                      default=_json_default)


def config_hash(obj):
    """
    SHA-256 of the canonical JSON encoding of obj.
    """
    return hashlib.sha256(canonical_json(obj).encode('utf-8')).hexdigest()


def array_digest(*arrays):
    """
    SHA-256 over the float64 contents and shapes of the given arrays.
    """
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(a, dtype=np.float64)
        h.update(repr(a.shape).encode('ascii'))
        h.update(a.tobytes())
    return h.hexdigest()


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, 'to_dict'):
        return obj.to_dict()
    raise TypeError("object of type %s is not JSON serializable" %
                    type(obj).__name__)


def scalar_or_array(x):
    """
    Convert a zero-dimensional result back to a Python float.
    """
    x = np.asarray(x)
    if x.ndim == 0:
        return float(x)
    return x
