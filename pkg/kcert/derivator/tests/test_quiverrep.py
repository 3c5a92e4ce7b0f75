import itertools
from collections import Counter

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from derivator.exceptions import OutOfRangeError, ShapeError
from derivator.meshcat import dn_predicate, hom_predicate, mesh_objects
from derivator.quiverrep import (
    IntervalModule, QuiverRep, assemble, decompose, delete_position, direct_sum, ext1, find_isomorphism, interval,
    interval_basis, interval_isomorphism, is_isomorphic, is_isomorphism, is_morphism, prepend_zero, quotient_by_first,
    random_rep, rep_hom, repeat_position, zero_rep,
)
from derivator.ringlin import Matrix, RingKind, make_ring
from derivator.tests.strategies import fields


class RepresentationTests(SimpleTestCase):
    def setUp(self):
        self.f2 = make_ring(RingKind.FIELD, 2)

    def test_shape_checked(self):
        with self.assertRaises(ShapeError):
            QuiverRep(self.f2, (1, 2), (Matrix(self.f2, [[1, 0]]),))

    def test_interval_range(self):
        with self.assertRaises(OutOfRangeError):
            interval(2, 1, 3, self.f2)

    def test_interval_dims(self):
        self.assertEqual(interval(1, 2, 3, self.f2).dims, (0, 1, 1, 0))


class HomTests(SimpleTestCase):
    def setUp(self):
        self.f2 = make_ring(RingKind.FIELD, 2)

    def test_examples(self):
        self.assertEqual(len(rep_hom(interval(1, 2, 2, self.f2), interval(0, 1, 2, self.f2))), 1)
        self.assertEqual(len(rep_hom(interval(0, 0, 1, self.f2), interval(1, 1, 1, self.f2))), 0)

    def test_identity_is_a_hom(self):
        x = direct_sum([interval(0, 1, 2, self.f2), interval(1, 2, 2, self.f2)])
        basis = rep_hom(x, x)
        self.assertEqual(len(basis), 3)
        for h in basis:
            for pos in range(1, x.n + 1):
                self.assertEqual(x.maps[pos - 1] @ h[pos - 1], h[pos] @ x.maps[pos - 1])

    def test_interval_hom_table(self):
        for n in range(4):
            for x, y in itertools.product(mesh_objects(n), repeat=2):
                dim = len(rep_hom(interval(*x, n, self.f2), interval(*y, n, self.f2)))
                self.assertEqual(dim, int(hom_predicate(x, y)), f'{x} -> {y} at n={n}')


class ExtTests(SimpleTestCase):
    def setUp(self):
        self.f3 = make_ring(RingKind.FIELD, 3)

    def test_examples(self):
        self.assertEqual(ext1(interval(0, 0, 1, self.f3), interval(1, 1, 1, self.f3)), 1)
        self.assertEqual(ext1(interval(0, 1, 1, self.f3), interval(0, 1, 1, self.f3)), 0)
        for y in mesh_objects(3):
            if y[0] == 0:
                self.assertEqual(ext1(interval(0, 3, 3, self.f3), interval(*y, 3, self.f3)), 0)

    def test_closed_form(self):
        for n in range(4):
            for x, y in itertools.product(mesh_objects(n), repeat=2):
                value = ext1(interval(*x, n, self.f3), interval(*y, n, self.f3))
                self.assertEqual(value, int(dn_predicate(x, y)), f'Ext({x}, {y}) at n={n}')


class DecomposeTests(SimpleTestCase):
    def setUp(self):
        self.f2 = make_ring(RingKind.FIELD, 2)

    def test_identity_arrow(self):
        rep = QuiverRep(self.f2, (1, 1), ([[1]],))
        self.assertEqual(decompose(rep), Counter({IntervalModule(0, 1): 1}))

    def test_zero_arrow(self):
        rep = QuiverRep(self.f2, (1, 1), ([[0]],))
        self.assertEqual(decompose(rep), Counter({IntervalModule(0, 0): 1, IntervalModule(1, 1): 1}))

    def test_constructed_sum(self):
        rep = direct_sum([interval(0, 1, 1, self.f2), interval(1, 1, 1, self.f2)])
        self.assertEqual(decompose(rep), Counter({IntervalModule(0, 1): 1, IntervalModule(1, 1): 1}))

    def test_empty_sum(self):
        self.assertEqual(decompose(zero_rep(2, self.f2)), Counter())
        self.assertEqual(assemble(Counter(), 2, self.f2), zero_rep(2, self.f2))

    @given(fields(), st.integers(0, 3), st.integers(0, 2 ** 16))
    @settings(max_examples=40, deadline=None)
    def test_reassembly(self, field, n, seed):
        rep = random_rep(n, field, np.random.default_rng(seed))
        counts = decompose(rep)
        rebuilt = assemble(counts, n, field)
        self.assertEqual(rebuilt.dims, rep.dims)
        self.assertTrue(is_isomorphic(rep, rebuilt))

    def test_explicit_isomorphism(self):
        rep = QuiverRep(self.f2, (2, 1), ([[1, 1]],))
        rebuilt = assemble(decompose(rep), 1, self.f2)
        h = find_isomorphism(rep, rebuilt)
        self.assertIsNotNone(h)
        self.assertTrue(is_isomorphism(h))

    @given(fields(), st.integers(0, 4), st.integers(0, 2 ** 16))
    @settings(max_examples=40, deadline=None)
    def test_interval_basis_gives_an_isomorphism(self, field, n, seed):
        rep = random_rep(n, field, np.random.default_rng(seed))
        rebuilt, h = interval_isomorphism(rep)
        self.assertEqual(rebuilt, assemble(decompose(rep), n, field))
        self.assertTrue(is_morphism(rebuilt, rep, h))
        self.assertTrue(is_isomorphism(h))

    def test_interval_basis_of_a_rank_one_map(self):
        rep = QuiverRep(self.f2, (2, 1), ([[1, 1]],))
        basis = interval_basis(rep)
        self.assertEqual(Counter({piece: len(vs) for piece, vs in basis.items()}), decompose(rep))
        self.assertEqual(set(basis), {IntervalModule(0, 0), IntervalModule(0, 1)})

    def test_non_isomorphic(self):
        first = interval(0, 1, 1, self.f2)
        second = direct_sum([interval(0, 0, 1, self.f2), interval(1, 1, 1, self.f2)])
        self.assertFalse(is_isomorphic(first, second))
        self.assertIsNone(find_isomorphism(first, second))


class SequenceOperatorTests(SimpleTestCase):
    def setUp(self):
        self.f2 = make_ring(RingKind.FIELD, 2)

    def test_delete_and_repeat(self):
        rep = interval(0, 1, 2, self.f2)
        self.assertEqual(delete_position(rep, 2), interval(0, 1, 1, self.f2))
        self.assertEqual(delete_position(rep, 1).dims, (1, 0))
        self.assertEqual(repeat_position(rep, 1), interval(0, 2, 3, self.f2))

    def test_prepend_zero(self):
        self.assertEqual(prepend_zero(interval(0, 0, 0, self.f2)), interval(1, 1, 1, self.f2))

    def test_quotient_by_first(self):
        quotient = quotient_by_first(interval(0, 1, 2, self.f2)).rep
        self.assertEqual(quotient.dims, (0, 0))
        quotient = quotient_by_first(interval(1, 2, 2, self.f2)).rep
        self.assertEqual(quotient, interval(0, 1, 1, self.f2))
