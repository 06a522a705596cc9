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
Loading, validation and preprocessing of rainfall and covariate series.
"""

import raindings.arguments as _arguments
import raindings.constants as _constants
import raindings.misc as _misc
import raindings.setup as _setup
import raindings.util as _util

import collections as _collections
import logging as _logging
import os as _os

import numpy as _np
import pandas as _pd
from scipy.interpolate import interp1d as _interp1d

_log = _logging.getLogger(__name__)


DEFAULT_MISSING = ('', 'NA', 'NaN', 'nan', 'M', '-9999')

# quantile mapping needs this many common years in the overlap window
MIN_OVERLAP_YEARS = 20

# corrected intensities are clipped to this floor (mm/hr)
INTENSITY_FLOOR = 1e-3


class DailySeries(object):
    """
    DailySeries(station_id, dates, values, missing_marker=DEFAULT_MISSING)

    Daily rainfall depths (mm/day) of one station. Missing days are stored
    as NaN.

    :param dates: strictly increasing calendar dates (anything
        ``numpy.datetime64`` understands).
    :param values: rainfall depths; NaN flags a missing day.
    :param missing_marker: the strings that were read as missing values.
    """
    @_arguments.accept(None, str, None, _util.float_array,
                       _arguments.sequenceof(str))
    def __init__(self, station_id, dates, values,
                 missing_marker=DEFAULT_MISSING):
        dates = _np.asarray(dates, dtype='datetime64[D]')
        if dates.ndim != 1 or len(dates) != len(values):
            raise ValueError("dates and values must have the same length")
        if _np.any(_np.diff(dates) <= _np.timedelta64(0, 'D')):
            raise ValueError("dates must be strictly increasing")
        if _np.any(_np.isinf(values)):
            raise ValueError("rainfall values must be finite or missing")
        if _np.any(values[~_np.isnan(values)] < 0):
            raise ValueError("rainfall values must not be negative")

        self.station_id = station_id
        self.dates = dates
        self.values = values
        self.missing_marker = tuple(missing_marker)

    def __len__(self):
        return len(self.dates)

    def __repr__(self):
        return 'DailySeries(%r, %d days)' % (self.station_id, len(self))

    def to_dict(self):
        return {
            'station_id': self.station_id,
            'dates': [str(d) for d in self.dates],
            'values': [None if _np.isnan(v) else float(v)
                       for v in self.values],
            'missing_marker': list(self.missing_marker),
        }

    @classmethod
    def from_dict(cls, d):
        values = [_np.nan if v is None else v for v in d['values']]
        return cls(d['station_id'], d['dates'], values,
                   d.get('missing_marker', DEFAULT_MISSING))


class AnnualMaximaSeries(object):
    """
    AnnualMaximaSeries(station_id, years, intensities, dropped_years=())

    Annual maximum 24-hour average rainfall intensity (mm/hr), one value
    per year.
    """
    units = 'mm/hr'

    @_arguments.accept(None, str, _util.increasing_years, _util.float_array,
                       _arguments.sequenceof(_util.year))
    def __init__(self, station_id, years, intensities, dropped_years=()):
        if len(years) != len(intensities):
            raise ValueError("years and intensities must have the same "
                             "length")
        if not _np.all(_np.isfinite(intensities) & (intensities > 0)):
            raise ValueError("annual maxima must be positive and finite")

        self.station_id = station_id
        self.years = years
        self.intensities = intensities
        self.dropped_years = tuple(dropped_years)

    def __len__(self):
        return len(self.years)

    def __repr__(self):
        return 'AnnualMaximaSeries(%r, %s)' % (self.station_id,
                                               _year_span(self.years))

    def restrict(self, years):
        """
        Return the series restricted to the given years, in order.
        """
        mask = _np.isin(self.years, years)
        return AnnualMaximaSeries(self.station_id, self.years[mask],
                                  self.intensities[mask])

    def to_dict(self):
        return {
            'station_id': self.station_id,
            'units': self.units,
            'years': [int(y) for y in self.years],
            'intensities': [float(v) for v in self.intensities],
            'dropped_years': list(self.dropped_years),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d['station_id'], d['years'], d['intensities'],
                   d.get('dropped_years', ()))


Scaling = _collections.namedtuple('Scaling', 'mean sd window')


class CovariateSeries(object):
    """
    CovariateSeries(name, years, values, scaling=None)

    A yearly physical-driver series (historical record and projection in
    one vector). If scaling is given, the values are standardized with
    those constants, and the sample mean and standard deviation over the
    scaling window are 0 and 1.
    """
    @_arguments.accept(None, _util.covariate_name, _util.increasing_years,
                       _util.finite_array, _arguments.nullable(tuple))
    def __init__(self, name, years, values, scaling=None):
        if len(years) != len(values):
            raise ValueError("years and values must have the same length")
        if scaling is not None:
            scaling = Scaling(*scaling)

        self.name = name
        self.years = years
        self.values = values
        self.scaling = scaling

    @property
    def standardized(self):
        return self.scaling is not None

    def __len__(self):
        return len(self.years)

    def __repr__(self):
        return 'CovariateSeries(%r, %s%s)' % (
            self.name, _year_span(self.years),
            ', standardized' if self.standardized else '')

    def restrict(self, years):
        mask = _np.isin(self.years, years)
        return CovariateSeries(self.name, self.years[mask], self.values[mask],
                               self.scaling)

    def value_at(self, year):
        idx = _np.searchsorted(self.years, year)
        if idx >= len(self.years) or self.years[idx] != year:
            raise _misc.DataError("covariate %r has no value for %d" %
                                  (self.name, year))
        return float(self.values[idx])

    def path(self, start_year, years):
        """
        Return the covariate values for years start_year, ...,
        start_year + years - 1. If the series ends earlier, its last value
        is held constant and a warning is logged.
        """
        wanted = _np.arange(start_year, start_year + years)
        if start_year < self.years[0] or start_year > self.years[-1]:
            raise _misc.DataError(
                "covariate %r does not cover start year %d" %
                (self.name, start_year))
        idx = _np.searchsorted(self.years, wanted)
        short = idx >= len(self.years)
        idx[short] = len(self.years) - 1
        if _np.any(self.years[idx[~short]] != wanted[~short]):
            raise _misc.DataError("covariate %r has gaps within %d-%d" %
                                  (self.name, wanted[0], wanted[-1]))
        if short.any():
            _log.warning("covariate %r ends in %d; holding its last value "
                         "for %d more years", self.name, self.years[-1],
                         int(short.sum()))
        return self.values[idx].copy()

    def to_dict(self):
        d = {
            'name': self.name,
            'years': [int(y) for y in self.years],
            'values': [float(v) for v in self.values],
            'standardized': self.standardized,
        }
        if self.scaling is not None:
            d['scaling'] = {'mean': self.scaling.mean, 'sd': self.scaling.sd,
                            'window': list(self.scaling.window)}
        return d

    @classmethod
    def from_dict(cls, d):
        scaling = None
        if d.get('scaling'):
            s = d['scaling']
            scaling = (s['mean'], s['sd'], tuple(s['window']))
        return cls(d['name'], d['years'], d['values'], scaling)


class AlignedDataset(object):
    """
    AlignedDataset(maxima, covariate)

    Annual maxima and a covariate restricted to a common, identical year
    vector.
    """
    @_arguments.accept(None, AnnualMaximaSeries, CovariateSeries)
    def __init__(self, maxima, covariate):
        if len(maxima) == 0:
            raise _misc.DataError("aligned dataset is empty")
        if not _np.array_equal(maxima.years, covariate.years):
            raise ValueError("maxima and covariate years differ")
        self.maxima = maxima
        self.covariate = covariate

    @classmethod
    def stationary(cls, maxima):
        """
        Dataset for the stationary model: a zero covariate named
        'stationary'.
        """
        zero = CovariateSeries(_constants.STATIONARY, maxima.years,
                               _np.zeros(len(maxima)))
        return cls(maxima, zero)

    @property
    def is_stationary(self):
        return self.covariate.name == _constants.STATIONARY

    @property
    def model_id(self):
        return self.covariate.name

    @property
    def years(self):
        return self.maxima.years

    @property
    def x(self):
        return self.maxima.intensities

    @property
    def t(self):
        return self.covariate.values

    def fingerprint(self):
        """
        Digest of the intensities and covariate values; equal for datasets
        that give equal likelihoods.
        """
        return _misc.array_digest(self.x, self.t)

    def __len__(self):
        return len(self.maxima)

    def __repr__(self):
        return 'AlignedDataset(%r, %r, %s)' % (
            self.maxima.station_id, self.model_id, _year_span(self.years))

    def to_dict(self):
        return {'maxima': self.maxima.to_dict(),
                'covariate': self.covariate.to_dict()}

    @classmethod
    def from_dict(cls, d):
        return cls(AnnualMaximaSeries.from_dict(d['maxima']),
                   CovariateSeries.from_dict(d['covariate']))


def _year_span(years):
    if len(years) == 0:
        return 'no years'
    return '%d-%d' % (years[0], years[-1])


def _window_mask(years, window):
    return (years >= window[0]) & (years <= window[1])


def _read_csv(path, columns):
    if not _os.path.isfile(path):
        raise _misc.DataError("no such file: %s" % path)
    try:
        df = _pd.read_csv(path, dtype=str, keep_default_na=False,
                          skipinitialspace=True, encoding='utf-8')
    except _pd.errors.ParserError as ex:
        raise _misc.DataError("%s: malformed CSV: %s" % (path, ex))
    except _pd.errors.EmptyDataError:
        raise _misc.DataError("%s: file is empty" % path)
    if list(df.columns) != list(columns):
        raise _misc.DataError("%s: expected header '%s', got '%s'" %
                              (path, ','.join(columns), ','.join(df.columns)))
    return df


def _line(n):
    # header is line 1
    return n + 2


def _first(mask):
    """
    Index of the first offending row, as a zero- or one-element list.
    """
    return _np.flatnonzero(mask)[:1].tolist()


@_arguments.accept(str, _arguments.nullable(str), _arguments.sequenceof(str))
def load_daily_csv(path, station_id=None, missing_marker=DEFAULT_MISSING):
    """
    load_daily_csv(path, station_id=None, missing_marker=DEFAULT_MISSING)

    Read a two-column ``date,value_mm`` CSV with ISO-8601 dates.

    :param station_id: defaults to the file name without extension.
    :param missing_marker: strings read as missing values.
    :raise DataError: on malformed rows (with line number), duplicate
        dates or negative rainfall.
    """
    df = _read_csv(path, ['date', 'value_mm'])
    markers = set(missing_marker)

    dates = _pd.to_datetime(df['date'], format='%Y-%m-%d', errors='coerce')
    for n in _first(dates.isna().to_numpy()):
        raise _misc.DataError("%s: malformed date %r on line %d" %
                              (path, df['date'].iloc[n], _line(n)))

    raw = df['value_mm']
    missing = raw.isin(markers).to_numpy()
    values = _pd.to_numeric(raw.where(~missing), errors='coerce').to_numpy(
        dtype=float)
    for n in _first(~_np.isfinite(values) & ~missing):
        raise _misc.DataError("%s: malformed value %r on line %d" %
                              (path, raw.iloc[n], _line(n)))
    for n in _first(values < 0):
        raise _misc.DataError("%s: negative rainfall %g on line %d" %
                              (path, values[n], _line(n)))

    days = dates.to_numpy().astype('datetime64[D]')
    order = _np.argsort(days, kind='stable')
    days, values = days[order], values[order]
    dup = _np.flatnonzero(_np.diff(days) == _np.timedelta64(0, 'D'))
    if len(dup):
        raise _misc.DataError("%s: duplicate date %s on line %d" %
                              (path, days[dup[0]], _line(order[dup[0] + 1])))

    if station_id is None:
        station_id = _os.path.splitext(_os.path.basename(path))[0]
    return DailySeries(station_id, days, values, list(missing_marker))


def _load_yearly(path):
    df = _read_csv(path, ['year', 'value'])
    years = _pd.to_numeric(df['year'], errors='coerce')
    values = _pd.to_numeric(df['value'], errors='coerce')
    years = years.to_numpy(dtype=float)
    values = values.to_numpy(dtype=float)
    for n in _first(~(_np.isfinite(years) & _np.isfinite(values))):
        raise _misc.DataError("%s: malformed row on line %d" %
                              (path, _line(n)))
    if _np.any(years != _np.round(years)):
        raise _misc.DataError("%s: non-integer year" % path)
    years = years.astype(int)
    order = _np.argsort(years, kind='stable')
    years, values = years[order], values[order]
    dup = _np.flatnonzero(_np.diff(years) == 0)
    if len(dup):
        raise _misc.DataError("%s: duplicate year %d" %
                              (path, years[dup[0]]))
    return years, values


@_arguments.accept(str, _arguments.nullable(str))
def load_maxima_csv(path, station_id=None):
    """
    Read a pre-extracted ``year,value`` series of annual maxima (mm/hr).
    """
    years, values = _load_yearly(path)
    if _np.any(values <= 0):
        raise _misc.DataError("%s: annual maxima must be positive" % path)
    if station_id is None:
        station_id = _os.path.splitext(_os.path.basename(path))[0]
    return AnnualMaximaSeries(station_id, years, values)


@_arguments.accept(str, _arguments.nullable(_util.covariate_name))
def load_covariate_csv(path, name=None):
    """
    Read a ``year,value`` covariate series in native units.
    """
    years, values = _load_yearly(path)
    if name is None:
        name = _os.path.splitext(_os.path.basename(path))[0]
    return CovariateSeries(name, years, values)


@_arguments.accept(DailySeries, _arguments.nullable(_util.fraction))
def annual_maxima(series, min_coverage=None):
    """
    annual_maxima(series, min_coverage=None)

    Extract the annual maximum 24-hour average intensity (daily depth / 24)
    of each calendar year. Years with fewer than min_coverage times the
    number of days in that year present are dropped; so are years without
    any rain.

    :param min_coverage: defaults to the global ``min_coverage`` setting.
    :raise DataError: if no year qualifies.
    """
    if min_coverage is None:
        min_coverage = _setup.get_config('min_coverage')

    df = _pd.DataFrame({'date': _pd.to_datetime(series.dates),
                        'value': series.values})
    grouped = df.groupby(df['date'].dt.year)['value']
    present = grouped.count()
    maxima = grouped.max()

    years, intensities, dropped = [], [], []
    for year in present.index:
        expected = 366 if _is_leap(year) else 365
        ok = present[year] >= min_coverage * expected
        if ok and maxima[year] > 0:
            years.append(int(year))
            intensities.append(maxima[year] / _constants.HOURS_PER_DAY)
        else:
            dropped.append(int(year))

    if dropped:
        _log.warning("%s: dropped %d year(s) below %.0f%% coverage or "
                     "without rain: %s", series.station_id, len(dropped),
                     100 * min_coverage, ', '.join(map(str, dropped)))
    if not years:
        raise _misc.DataError("%s: no year meets the coverage threshold" %
                              series.station_id)
    return AnnualMaximaSeries(series.station_id, years, intensities, dropped)


def _is_leap(year):
    return year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)


@_arguments.accept(AnnualMaximaSeries, CovariateSeries)
def align(maxima, covariate):
    """
    align(maxima, covariate)

    Restrict both series to their common years.

    :raise DataError: if the year ranges do not intersect.
    """
    if len(maxima) == 0 or len(covariate) == 0:
        raise _misc.DataError("cannot align empty series")
    common = _np.intersect1d(maxima.years, covariate.years)
    if len(common) == 0:
        raise _misc.DataError("%r and %r have no years in common" %
                              (maxima, covariate))
    return AlignedDataset(maxima.restrict(common), covariate.restrict(common))


@_arguments.accept(CovariateSeries, _util.year_range)
def standardize(covariate, window):
    """
    standardize(covariate, window)

    z-score the whole covariate series with the mean and sample standard
    deviation of its values within window (first, last year, inclusive).
    The constants are kept in the result's ``scaling``.
    """
    if covariate.standardized:
        raise ValueError("covariate %r is already standardized" %
                         covariate.name)
    w = _window_mask(covariate.years, window)
    if w.sum() < 2:
        raise _misc.DataError("covariate %r has fewer than two values in "
                              "%d-%d" % ((covariate.name,) + window))
    mean = float(covariate.values[w].mean())
    sd = float(covariate.values[w].std(ddof=1))
    if sd == 0:
        raise _misc.DataError("covariate %r is constant over %d-%d" %
                              ((covariate.name,) + window))
    result = apply_standardization(covariate, Scaling(mean, sd, window))
    check = result.values[w]
    if abs(check.mean()) > 1e-9 or abs(check.std(ddof=1) - 1.0) > 1e-9:
        raise _misc.DataError("covariate %r could not be standardized "
                              "accurately over %d-%d" %
                              ((covariate.name,) + window))
    return result


@_arguments.accept(CovariateSeries, tuple)
def apply_standardization(covariate, scaling):
    """
    Transform a raw covariate series with previously computed scaling
    constants, e.g. a projection standardized like the historical record.
    """
    scaling = Scaling(*scaling)
    values = (covariate.values - scaling.mean) / scaling.sd
    return CovariateSeries(covariate.name, covariate.years, values, scaling)


@_arguments.accept(AnnualMaximaSeries, AnnualMaximaSeries, _util.year_range)
def quantile_map_bias_correct(model_series, obs_series, overlap):
    """
    quantile_map_bias_correct(model_series, obs_series, overlap)

    Empirical quantile mapping. Over the common years of both series inside
    overlap, the sorted model values are paired with the sorted observed
    values; every model value (all years) is then mapped through the
    piecewise linear curve joining these pairs, extrapolated linearly
    beyond the outermost pairs. Tied model values map to the mean of their
    observed partners. Non-positive results are clipped to a small floor
    and reported.

    :raise DataError: if fewer than 20 common years fall inside overlap.
    """
    common = _np.intersect1d(model_series.years, obs_series.years)
    common = common[(common >= overlap[0]) & (common <= overlap[1])]
    if len(common) < MIN_OVERLAP_YEARS:
        raise _misc.DataError(
            "overlap %d-%d has %d common years, at least %d required" %
            (overlap[0], overlap[1], len(common), MIN_OVERLAP_YEARS))

    m = _np.sort(model_series.restrict(common).intensities)
    o = _np.sort(obs_series.restrict(common).intensities)

    # collapse ties so the transfer curve is a function
    xs, inverse = _np.unique(m, return_inverse=True)
    ys = _np.bincount(inverse, weights=o) / _np.bincount(inverse)

    if len(xs) == 1:
        corrected = model_series.intensities + (ys[0] - xs[0])
    else:
        transfer = _interp1d(xs, ys, kind='linear', fill_value='extrapolate',
                             assume_sorted=True)
        corrected = transfer(model_series.intensities)

    low = corrected <= 0
    if low.any():
        _log.warning("%s: %d bias-corrected value(s) not positive, clipped "
                     "to %g mm/hr in %s", model_series.station_id,
                     int(low.sum()), INTENSITY_FLOOR,
                     ', '.join(str(y) for y in model_series.years[low]))
        corrected = _np.where(low, INTENSITY_FLOOR, corrected)

    return AnnualMaximaSeries(model_series.station_id, model_series.years,
                              corrected)
