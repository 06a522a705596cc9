#!/usr/bin/env python3
# -*- coding: utf-8 -*-

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup

from subprocess import getstatusoutput


version = '0.1.0'

status, output = getstatusoutput('git rev-parse --short HEAD')
if not status:
    version = '%s+r%s' % (version, output)


setup(
    name = 'raindings',
    version = version,
    description = 'nonstationary rainfall extremes and stormwater pipe '
                  'reliability under deep uncertainty',
    license = 'GPL',
    python_requires = '>=3.9',
    install_requires = [
        'decorator',
        'numpy>=1.17',
        'scipy',
        'pandas>=1.5',
        'matplotlib',
    ],
    packages = [
        'raindings',
        'raindings.extra',
    ],
    scripts = [
        'scripts/raindings',
    ],
    test_suite = 'tests',
)
