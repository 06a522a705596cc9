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

import numpy as np

from raindings import arguments
from raindings import misc
from raindings import util


class ArgumentsTestCase(unittest.TestCase):

    def test_simple(self):
        @arguments.accept(int)
        def foo(a): pass

        foo(123)

        with self.assertRaises(TypeError):
            foo()
        with self.assertRaises(TypeError):
            foo(123.456)

        @arguments.accept(str, float)
        def bar(a, b): pass

        bar('blah', 123.456)

        with self.assertRaises(TypeError):
            bar('blah', 123)

    def test_bool_is_not_int(self):
        @arguments.accept(int)
        def foo(a): pass

        with self.assertRaises(TypeError):
            foo(True)

    def test_any(self):
        @arguments.accept(None, int)
        def foo(a, b):
            return a

        self.assertEqual(foo('anything', 1), 'anything')

    def test_transform(self):
        @arguments.accept(util.positive)
        def foo(a):
            return a

        r = foo(3)
        self.assertIsInstance(r, float)
        self.assertEqual(r, 3.0)
        self.assertEqual(foo(np.float64(2.5)), 2.5)

        with self.assertRaises(ValueError):
            foo(-1.0)
        with self.assertRaises(TypeError):
            foo('3')

    def test_error_message(self):
        @arguments.accept(util.positive)
        def foo(diameter): pass

        with self.assertRaises(ValueError) as cm:
            foo(0.0)
        self.assertIn("'diameter'", str(cm.exception))
        self.assertIn('foo()', str(cm.exception))

    def test_domain_errors_pass_through(self):
        def fail(x):
            raise misc.DataError("bad data")

        @arguments.accept(fail)
        def foo(a): pass

        with self.assertRaises(misc.DataError) as cm:
            foo(1)
        self.assertEqual(str(cm.exception), "bad data")

    def test_kwargs(self):
        @arguments.accept(kwargs={'a': int, 'b': str})
        def foo(**kwargs): pass

        foo()
        foo(a=123, b='blah')

        with self.assertRaises(TypeError):
            foo(a='blah')
        with self.assertRaises(TypeError):
            foo(c=123)

    def test_keyword_bound_positional(self):
        @arguments.accept(util.positive, util.count)
        def foo(a, b):
            return a, b

        self.assertEqual(foo(1, b=2), (1.0, 2))
        with self.assertRaises(ValueError):
            foo(1, b=0)

    def test_nullable(self):
        @arguments.accept(arguments.nullable(int))
        def foo(a): pass

        foo(None)
        foo(42)

        with self.assertRaises(TypeError):
            foo(123.456)

    def test_sequenceof(self):
        @arguments.accept([util.finite])
        def foo(a):
            self.assertIsInstance(a, list)
            self.assertTrue(misc.issequenceof(a, float))

        foo([])
        foo((1, 2.5, np.float64(3)))

        with self.assertRaises(TypeError):
            foo(1.0)
        with self.assertRaises(TypeError):
            foo('abc')
        with self.assertRaises(ValueError):
            foo([1.0, float('nan')])

    def test_nested(self):
        @arguments.accept([[util.finite]])
        def foo(a):
            return a

        self.assertEqual(foo(((1, 2), [3])), [[1.0, 2.0], [3.0]])
        with self.assertRaises(TypeError) as cm:
            foo([[1.0], 2.0])
        self.assertIn("item 1", str(cm.exception))

    def test_mappingof(self):
        @arguments.accept({str: util.positive})
        def foo(a):
            return a

        self.assertEqual(foo({'sigma': 2}), {'sigma': 2.0})
        with self.assertRaises(TypeError):
            foo({1: 2.0})
        with self.assertRaises(ValueError):
            foo({'sigma': -2.0})
        with self.assertRaises(TypeError):
            foo([('sigma', 2.0)])

    def test_each_condition(self):
        @arguments.accept(arguments.each(
            util.integer, arguments.condition(lambda x: x % 2 == 0, "even")))
        def even(a): pass

        even(4)
        with self.assertRaises(ValueError) as cm:
            even(3)
        self.assertIn("does not satisfy even", str(cm.exception))
        with self.assertRaises(TypeError):
            even(4.0)

    def test_constraint_count(self):
        with self.assertRaises(AssertionError):
            @arguments.accept(int)
            def foo(a, b): pass
