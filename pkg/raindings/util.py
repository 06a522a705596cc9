# -*- coding: utf-8 -*-
#
# raindings
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#

import raindings.constants as _constants

import math as _math
import numbers as _numbers

import numpy as _np


def real(value):
    """
    Convert any real number (including numpy scalars) to a float.
    Booleans are rejected.
    """
    if isinstance(value, bool) or not isinstance(value, _numbers.Real):
        raise TypeError("expected a real number, got %s" %
                        type(value).__name__)
    return float(value)


def finite(value):
    value = real(value)
    if not _math.isfinite(value):
        raise ValueError("value %r is not finite" % value)
    return value


def positive(value):
    value = finite(value)
    if not value > 0:
        raise ValueError("value %r must be positive" % value)
    return value


def integer(value):
    if isinstance(value, bool) or not isinstance(value, _numbers.Integral):
        raise TypeError("expected an integer, got %s" % type(value).__name__)
    return int(value)


def count(value):
    value = integer(value)
    if value < 1:
        raise ValueError("count %d must be at least 1" % value)
    return value


def year(value):
    value = integer(value)
    if not (0 < value < 10000):
        raise ValueError("year %d is out of range" % value)
    return value


def probability(value):
    """
    A probability in the open interval (0, 1).
    """
    value = finite(value)
    if not (0.0 < value < 1.0):
        raise ValueError("probability %r must lie in (0, 1)" % value)
    return value


def fraction(value):
    """
    A fraction in the half-open interval (0, 1].
    """
    value = finite(value)
    if not (0.0 < value <= 1.0):
        raise ValueError("fraction %r must lie in (0, 1]" % value)
    return value


def runoff_coefficient(value):
    try:
        return fraction(value)
    except ValueError:
        raise ValueError("runoff coefficient %r must lie in (0, 1]" % value)


def return_period(value):
    value = finite(value)
    if not value > 1.0:
        raise ValueError("return period %r must exceed one year" % value)
    return value


def intensity(value):
    value = finite(value)
    if value < 0:
        raise ValueError("rainfall intensity %r must not be negative" % value)
    return value


def year_range(value):
    if not isinstance(value, (tuple, list)) or len(value) != 2:
        raise TypeError("year range must be a (first, last) pair")
    first, last = year(value[0]), year(value[1])
    if first > last:
        raise ValueError("year range %d-%d is reversed" % (first, last))
    return (first, last)


def covariate_name(name):
    if not isinstance(name, str):
        raise TypeError("covariate name must be a string")
    if not name or not name.replace('_', '').isalnum():
        raise ValueError("invalid covariate name %r" % name)
    return name


def robustness(value):
    """
    Accept a robustness flag or its lower-case name.
    """
    if isinstance(value, _constants._Robustness):
        return value
    if isinstance(value, str) and value.lower() in _constants._ROBUSTNESS:
        return _constants._ROBUSTNESS[value.lower()]
    raise ValueError("invalid robustness statistic %r" % (value,))


def stage(value):
    if isinstance(value, _constants._Stage):
        return value
    if isinstance(value, str) and value.lower() in _constants._STAGES:
        return _constants._STAGES[value.lower()]
    raise ValueError("invalid stage %r" % (value,))


def float_array(values):
    """
    Convert a sequence of numbers to a one-dimensional float array.
    """
    try:
        a = _np.asarray(values, dtype=float)
    except (TypeError, ValueError):
        raise TypeError("expected a sequence of numbers")
    if a.ndim != 1:
        raise ValueError("expected a one-dimensional sequence")
    return a


def finite_array(values):
    a = float_array(values)
    if not _np.all(_np.isfinite(a)):
        raise ValueError("sequence contains non-finite values")
    return a


def increasing_years(values):
    try:
        a = _np.asarray(values)
    except (TypeError, ValueError):
        raise TypeError("expected a sequence of years")
    if a.ndim != 1 or (a.size and not _np.issubdtype(a.dtype, _np.integer)):
        raise TypeError("years must be a one-dimensional integer sequence")
    a = a.astype(int)
    if _np.any(_np.diff(a) <= 0):
        raise ValueError("years must be strictly increasing")
    return a


def numeric(value):
    """
    A real scalar (returned as float) or an array of reals (returned as a
    float array).
    """
    if _np.ndim(value) == 0:
        return real(value.item() if isinstance(value, _np.ndarray)
                    else value)
    try:
        return _np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise TypeError("expected a number or an array of numbers")
