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
Generalized extreme value distribution with a covariate-dependent location
parameter, mu = mu0 * (1 + a_mu * T).

All functions return density 0 and CDF 0 or 1 outside the support instead
of raising, so the sampler can treat such parameters as having zero
likelihood. The internal functions prefixed with an underscore broadcast
over numpy arrays and are used directly by the sampler and the reliability
code.
"""

import raindings.arguments as _arguments
import raindings.constants as _constants
import raindings.misc as _misc
import raindings.util as _util

import collections as _collections
import math as _math

import numpy as _np


class GevParams(_collections.namedtuple('GevParams',
                                        _constants.PARAMETER_NAMES)):
    """
    GevParams(mu0, a_mu, sigma, xi)

    One parameter vector of the (possibly nonstationary) GEV model.
    The stationary model is the special case ``a_mu == 0``.

    Construction does not validate, since the sampler evaluates proposals
    with a non-positive scale. Use :meth:`is_valid` or pass the parameters
    to a public function, which checks them.
    """
    __slots__ = ()

    def is_valid(self):
        return (all(_math.isfinite(v) for v in self) and self.sigma > 0)

    def at(self, t_cov):
        """
        Return the :class:`GevAt` distribution for covariate value t_cov.
        """
        return GevAt(_effective_location(self.mu0, self.a_mu, t_cov),
                     self.sigma, self.xi)

    def to_dict(self):
        return dict(self._asdict())


class GevAt(_collections.namedtuple('GevAt', 'mu sigma xi')):
    """
    GevAt(mu, sigma, xi)

    A GEV distribution with a fixed location.
    """
    __slots__ = ()

    def to_dict(self):
        return dict(self._asdict())


def valid_params(value):
    """
    Constraint: a valid :class:`GevParams` (any 4-sequence is converted).
    """
    if not isinstance(value, GevParams):
        if not _misc.issequence(value) or len(value) != 4:
            raise TypeError("expected GevParams")
        value = GevParams(*(_util.real(v) for v in value))
    if not value.is_valid():
        raise ValueError("invalid GEV parameters %r (scale must be positive "
                         "and all values finite)" % (value,))
    return value


def valid_distribution(value):
    """
    Constraint: a valid :class:`GevAt`.
    """
    if not isinstance(value, GevAt):
        if not _misc.issequence(value) or len(value) != 3:
            raise TypeError("expected GevAt")
        value = GevAt(*(_util.real(v) for v in value))
    if not (all(_math.isfinite(v) for v in value) and value.sigma > 0):
        raise ValueError("invalid GEV distribution %r" % (value,))
    return value


def _effective_location(mu0, a_mu, t_cov):
    return mu0 * (1.0 + a_mu * t_cov)


def _reduced(x, mu, sigma, xi):
    """
    Return (z, t, gumbel, xi) with z = (x - mu) / sigma, t = 1 + xi * z, a
    mask selecting the Gumbel branch and xi, broadcast to a common shape.
    """
    x, mu, sigma, xi = _np.broadcast_arrays(
        _np.asarray(x, dtype=float), _np.asarray(mu, dtype=float),
        _np.asarray(sigma, dtype=float), _np.asarray(xi, dtype=float))
    z = (x - mu) / sigma
    gumbel = _np.abs(xi) < _constants.GUMBEL_THRESHOLD
    t = 1.0 + xi * z
    return z, t, gumbel, xi


def _logpdf(x, mu, sigma, xi):
    z, t, gumbel, xi = _reduced(x, mu, sigma, xi)
    sigma = _np.broadcast_to(_np.asarray(sigma, dtype=float), z.shape)
    out = _np.full(z.shape, -_np.inf)

    with _np.errstate(all='ignore'):
        g = gumbel
        out[g] = -_np.log(sigma[g]) - z[g] - _np.exp(-z[g])

        inside = ~gumbel & (t > 0)
        lt = _np.log(t[inside])
        xi_in = xi[inside]
        out[inside] = (-_np.log(sigma[inside]) - (1.0 + 1.0 / xi_in) * lt
                       - _np.exp(-lt / xi_in))
    return out


def _pdf(x, mu, sigma, xi):
    return _np.exp(_logpdf(x, mu, sigma, xi))


def _cdf(x, mu, sigma, xi):
    z, t, gumbel, xi = _reduced(x, mu, sigma, xi)
    out = _np.empty(z.shape)

    with _np.errstate(all='ignore'):
        g = gumbel
        out[g] = _np.exp(-_np.exp(-z[g]))

        inside = ~gumbel & (t > 0)
        out[inside] = _np.exp(-t[inside] ** (-1.0 / xi[inside]))

        outside = ~gumbel & (t <= 0)
        # below the lower bound for xi > 0, above the upper bound for xi < 0
        out[outside] = _np.where(xi[outside] > 0, 0.0, 1.0)
    return out


def _sf(x, mu, sigma, xi):
    """
    Survival function 1 - F(x), accurate for small exceedance
    probabilities.
    """
    z, t, gumbel, xi = _reduced(x, mu, sigma, xi)
    out = _np.empty(z.shape)

    with _np.errstate(all='ignore'):
        g = gumbel
        out[g] = -_np.expm1(-_np.exp(-z[g]))

        inside = ~gumbel & (t > 0)
        out[inside] = -_np.expm1(-t[inside] ** (-1.0 / xi[inside]))

        outside = ~gumbel & (t <= 0)
        out[outside] = _np.where(xi[outside] > 0, 1.0, 0.0)
    return out


def _quantile(p, mu, sigma, xi):
    p, mu, sigma, xi = _np.broadcast_arrays(
        _np.asarray(p, dtype=float), _np.asarray(mu, dtype=float),
        _np.asarray(sigma, dtype=float), _np.asarray(xi, dtype=float))
    y = -_np.log(p)
    gumbel = _np.abs(xi) < _constants.GUMBEL_THRESHOLD
    out = _np.empty(p.shape)

    with _np.errstate(all='ignore'):
        g = gumbel
        out[g] = mu[g] - sigma[g] * _np.log(y[g])

        ng = ~gumbel
        out[ng] = mu[ng] - (sigma[ng] / xi[ng]) * (1.0 - y[ng] ** (-xi[ng]))
    return out


def _support(d):
    """
    Return the (lower, upper) support bounds of a GevAt.
    """
    if abs(d.xi) < _constants.GUMBEL_THRESHOLD:
        return (-_np.inf, _np.inf)
    bound = d.mu - d.sigma / d.xi
    if d.xi > 0:
        return (bound, _np.inf)
    return (-_np.inf, bound)


@_arguments.accept(valid_params, _util.finite)
def effective_location(params, t_cov):
    """
    Location parameter for covariate value t_cov, mu0 * (1 + a_mu * t_cov).
    """
    return _effective_location(params.mu0, params.a_mu, t_cov)


@_arguments.accept(_util.numeric, valid_distribution)
def gev_pdf(x, d):
    """
    gev_pdf(x, d)

    Probability density of distribution d at x (scalar or array).
    Zero outside the support.
    """
    return _misc.scalar_or_array(_pdf(x, d.mu, d.sigma, d.xi))


@_arguments.accept(_util.numeric, valid_distribution)
def gev_logpdf(x, d):
    return _misc.scalar_or_array(_logpdf(x, d.mu, d.sigma, d.xi))


@_arguments.accept(_util.numeric, valid_distribution)
def gev_cdf(x, d):
    """
    gev_cdf(x, d)

    Cumulative distribution of d at x. 0 below the lower bound (xi > 0),
    1 above the upper bound (xi < 0).
    """
    return _misc.scalar_or_array(_cdf(x, d.mu, d.sigma, d.xi))


@_arguments.accept(_util.numeric, valid_distribution)
def gev_sf(x, d):
    """
    Exceedance probability 1 - gev_cdf(x, d).
    """
    return _misc.scalar_or_array(_sf(x, d.mu, d.sigma, d.xi))


def _probabilities(p):
    p = _util.numeric(p)
    a = _np.asarray(p)
    if not _np.all((a > 0) & (a < 1)):
        raise ValueError("probabilities must lie in (0, 1)")
    return p


@_arguments.accept(_probabilities, valid_distribution)
def gev_quantile(p, d):
    """
    gev_quantile(p, d)

    Inverse of :func:`gev_cdf` for 0 < p < 1.
    """
    return _misc.scalar_or_array(_quantile(p, d.mu, d.sigma, d.xi))


@_arguments.accept(valid_distribution)
def gev_support(d):
    """
    Return the (lower, upper) support bounds of d; infinite bounds are
    returned as +/-inf.
    """
    return tuple(float(b) for b in _support(d))


@_arguments.accept(valid_params, _util.finite, _util.return_period)
def return_level(params, t_cov, T):
    """
    return_level(params, t_cov, T)

    Intensity with annual exceedance probability 1/T under the
    distribution for covariate value t_cov (the effective return level).
    """
    d = params.at(t_cov)
    return float(_quantile(1.0 - 1.0 / T, d.mu, d.sigma, d.xi))


@_arguments.accept(_util.finite, valid_params, _util.finite)
def return_period_of_level(z, params, t_cov):
    """
    return_period_of_level(z, params, t_cov)

    Return period, in years, of intensity z under the distribution for
    covariate value t_cov. Below the lower support bound the period is 1.

    :raise SupportError: if z is at or above the upper support bound, where
        the return period is infinite.
    """
    d = params.at(t_cov)
    sf = float(_sf(z, d.mu, d.sigma, d.xi))
    if sf <= 0.0:
        raise _misc.SupportError(
            "intensity %g is not exceeded under %r: infinite return period"
            % (z, d))
    return 1.0 / sf


def _sample(d, size, rng):
    u = rng.uniform(size=size)
    # uniform() may return exactly 0
    u = _np.where(u <= 0.0, _np.nextafter(0.0, 1.0), u)
    return _quantile(u, d.mu, d.sigma, d.xi)


@_arguments.accept(valid_distribution, _util.count, None)
def gev_sample(d, size, rng):
    """
    gev_sample(d, size, rng)

    Draw size values from d using the numpy Generator rng (inverse
    transform sampling).
    """
    return _sample(d, size, rng)
