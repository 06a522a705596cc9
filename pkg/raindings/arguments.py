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
Argument checking for the public operations of raindings.

Each argument of a decorated function is passed through a constraint,
which either returns the (possibly converted) value or raises TypeError or
ValueError. Constraints are written as:

- ``None``: anything goes;
- a class: the value must be an instance (a bool is never accepted as an
  int or float);
- ``[c]``: a sequence whose items all satisfy c, converted to a list;
- ``{k: v}``: a dict whose keys satisfy k and whose values satisfy v;
- any other callable, typically one of the checkers in
  :mod:`raindings.util`: called with the value, its result replaces it;
- one of the constraint classes below.
"""

import raindings.misc as _misc

import inspect as _inspect

import decorator as _decorator


class accept(object):
    """
    accept(*constraints, kwargs={})

    Decorator checking the arguments of a function, one constraint per
    positional parameter. kwargs maps names of arbitrary keyword arguments
    (as taken by ``**kwargs``) to their constraints.

    Errors raised by a constraint are re-raised with the function and
    parameter name prepended, except for :class:`RaindingsError`, which
    already describes the problem in domain terms.
    """
    def __init__(self, *constraints, **options):
        self.constraints = [_compile(c) for c in constraints]
        self.named = dict((k, _compile(c))
                          for k, c in options.get('kwargs', {}).items())

    def __call__(self, f):
        self.params = _misc.getargspec(f)[0]
        assert len(self.constraints) == len(self.params), \
            "%s() has %d parameters but %d constraints" % (
                f.__name__, len(self.params), len(self.constraints))
        return _decorator.decorator(self._checked, f)

    def _constraint(self, f, name):
        if name in self.params:
            return self.constraints[self.params.index(name)]
        if name in self.named:
            return self.named[name]
        raise TypeError("%s() got an unexpected keyword argument '%s'" %
                        (f.__name__, name))

    def _checked(self, f, *args, **kwargs):
        args = [_check(c, value, f.__name__, name)
                for c, name, value in zip(self.constraints, self.params,
                                          args)]
        kwargs = dict((name, _check(self._constraint(f, name), value,
                                    f.__name__, name))
                      for name, value in kwargs.items())
        return f(*args, **kwargs)


def _check(constraint, value, func_name, param):
    try:
        return constraint(value)
    except (TypeError, ValueError) as ex:
        if isinstance(ex, _misc.RaindingsError):
            raise
        kind = 'type' if isinstance(ex, TypeError) else 'value'
        raise type(ex)("invalid %s for parameter '%s' of function %s():\n%s"
                       % (kind, param, func_name, ex))


def _compile(c):
    if isinstance(c, _Constraint):
        return c
    if c is None:
        return _Anything()
    if _inspect.isclass(c):
        return _InstanceOf(c)
    if isinstance(c, list):
        assert len(c) == 1, "list constraints take exactly one item"
        return sequenceof(c[0])
    if isinstance(c, dict):
        assert len(c) == 1, "dict constraints take exactly one item"
        (k, v), = c.items()
        return mappingof(k, v)
    assert callable(c), "invalid constraint %r" % (c,)
    return _Converter(c)


class _Constraint(object):
    def __call__(self, value):
        raise NotImplementedError


class _Anything(_Constraint):
    def __call__(self, value):
        return value

    def __repr__(self):
        return 'any'


class _InstanceOf(_Constraint):
    def __init__(self, cls):
        self.cls = cls

    def __call__(self, value):
        if isinstance(value, bool) and self.cls is not bool:
            raise TypeError("expected %s, got bool" % self.cls.__name__)
        if not isinstance(value, self.cls):
            raise TypeError("expected %s, got %s" %
                            (self.cls.__name__, type(value).__name__))
        return value

    def __repr__(self):
        return self.cls.__name__


class _Converter(_Constraint):
    def __init__(self, function):
        self.function = function

    def __call__(self, value):
        return self.function(value)

    def __repr__(self):
        return getattr(self.function, '__name__', repr(self.function))


class nullable(_Constraint):
    """
    None, or a value satisfying the given constraint.
    """
    def __init__(self, what):
        self.what = _compile(what)

    def __call__(self, value):
        return None if value is None else self.what(value)

    def __repr__(self):
        return 'nullable(%r)' % self.what


class sequenceof(_Constraint):
    """
    A sequence (not a string) whose items all satisfy the given constraint.
    The result is a list.
    """
    def __init__(self, what):
        self.what = _compile(what)

    def __call__(self, value):
        if not _misc.issequence(value):
            raise TypeError("expected a sequence, got %s" %
                            type(value).__name__)
        result = []
        for n, item in enumerate(value):
            try:
                result.append(self.what(item))
            except (TypeError, ValueError) as ex:
                raise type(ex)("item %d: %s" % (n, ex))
        return result

    def __repr__(self):
        return '[%r]' % self.what


class mappingof(_Constraint):
    """
    A dict whose keys and values satisfy the given constraints.
    """
    def __init__(self, keys, values):
        self.keys = _compile(keys)
        self.values = _compile(values)

    def __call__(self, value):
        if not isinstance(value, dict):
            raise TypeError("expected a dict, got %s" % type(value).__name__)
        result = {}
        for k, v in value.items():
            try:
                k = self.keys(k)
            except (TypeError, ValueError) as ex:
                raise type(ex)("key %r: %s" % (k, ex))
            try:
                result[k] = self.values(v)
            except (TypeError, ValueError) as ex:
                raise type(ex)("value for %r: %s" % (k, ex))
        return result

    def __repr__(self):
        return '{%r: %r}' % (self.keys, self.values)


class each(_Constraint):
    """
    Applies all given constraints in turn, each to the result of the
    previous one.
    """
    def __init__(self, *steps):
        self.steps = [_compile(c) for c in steps]

    def __call__(self, value):
        for step in self.steps:
            value = step(value)
        return value

    def __repr__(self):
        return 'each(%s)' % ', '.join(repr(c) for c in self.steps)


class condition(_Constraint):
    """
    Accepts a value for which predicate returns true.
    """
    def __init__(self, predicate, description=None):
        self.predicate = predicate
        self.description = description

    def __call__(self, value):
        if not self.predicate(value):
            raise ValueError("%r does not satisfy %s" % (value, self))
        return value

    def __repr__(self):
        return self.description or 'condition'
