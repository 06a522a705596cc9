# -*- coding: utf-8 -*-
#
# raindings
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#

import unittest

import os
import shutil
import tempfile

import numpy as np

from raindings import *
from raindings import setup, misc, constants


class RaindingsTestCase(unittest.TestCase):
    def setUp(self):
        setup.reset()
        # short chains unless a test asks for more
        setup.config(n_iterations=3000, burn_in=1000)

    def make_tempdir(self):
        """
        Create a temporary directory that is removed after the test.
        """
        d = tempfile.mkdtemp(prefix='raindings-test-')
        self.addCleanup(shutil.rmtree, d, True)
        return d

    def write_text(self, directory, name, text):
        path = os.path.join(directory, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path

    def assertAllClose(self, actual, expected, rtol=1e-7, atol=0.0):
        """
        Element-wise comparison of arrays or scalars.
        """
        actual = np.asarray(actual, dtype=float)
        expected = np.asarray(expected, dtype=float)
        self.assertEqual(actual.shape, expected.shape)
        self.assertTrue(np.allclose(actual, expected, rtol=rtol, atol=atol,
                                    equal_nan=True),
                        "\nactual=%r\nexpected=%r" % (actual, expected))

    def assertBetween(self, value, lo, hi):
        self.assertGreaterEqual(value, lo)
        self.assertLessEqual(value, hi)
