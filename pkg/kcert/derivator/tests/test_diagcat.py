import itertools

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from derivator.diagcat import (
    DiagMorphism, Diagram, cofibrant_replace, diagram_from_kinds, direct_sum, ho_hom, ho_isomorphism, htrivial,
    interval_diagram, is_contractible, is_ho_isomorphic, mtilde, mtilde_kinds, nu_lift, nu_tilde, phi_tilde,
    stable_dimensions, suspend, zero_diagram,
)
from derivator.exceptions import NotNaturalError, OutOfRangeError, ShapeError
from derivator.meshcat import dn_predicate, hom_predicate, mesh_objects
from derivator.modcat import FgModule, ModMorphism, free_module, residue_module
from derivator.ringlin import RingKind, make_ring

Z4 = make_ring(RingKind.ZP2, 2)
EPS2 = make_ring(RingKind.EPS, 2)
EPS3 = make_ring(RingKind.EPS, 3)


def q_map(ring):
    return ModMorphism.blocks(free_module(ring), residue_module(ring), rk=[[1]])


def alpha_map(ring):
    return ModMorphism.blocks(residue_module(ring), free_module(ring), kr=[[1]])


class DiagramTests(SimpleTestCase):
    def test_shape_checked(self):
        k, r = residue_module(Z4), free_module(Z4)
        with self.assertRaises(ShapeError):
            Diagram(Z4, (k, r), (q_map(Z4),))
        with self.assertRaises(ShapeError):
            Diagram(Z4, (k, r), ())

    def test_naturality_checked(self):
        x = mtilde(0, 0, 1, Z4).diagram
        k, r = x.objects
        with self.assertRaises(NotNaturalError):
            DiagMorphism(x, x, (ModMorphism.identity(k), ModMorphism.zero(r, r)))

    def test_direct_sum(self):
        total = direct_sum(interval_diagram(0, 1, 1, Z4), mtilde(0, 0, 1, Z4).diagram)
        self.assertEqual(total.objects, (FgModule(Z4, 0, 2), FgModule(Z4, 1, 1)))
        self.assertTrue(total.is_cofibrant())

    def test_cofibrancy(self):
        self.assertTrue(mtilde(0, 0, 1, Z4).diagram.is_cofibrant())
        self.assertFalse(interval_diagram(0, 0, 1, Z4).is_cofibrant())


class MtildeTests(SimpleTestCase):
    def test_displayed_shape(self):
        replacement = mtilde(0, 0, 1, Z4)
        k, r = residue_module(Z4), free_module(Z4)
        self.assertEqual(replacement.diagram.objects, (k, r))
        self.assertEqual(replacement.diagram.maps, (alpha_map(Z4),))
        self.assertEqual(replacement.weq.components[0], ModMorphism.identity(k))
        self.assertTrue(replacement.weq.components[1].is_zero())

    def test_last_column_is_its_own_replacement(self):
        for i in range(3):
            replacement = mtilde(i, 2, 2, EPS2)
            self.assertEqual(replacement.diagram, interval_diagram(i, 2, 2, EPS2))
            self.assertEqual(replacement.weq, DiagMorphism.identity(replacement.diagram))

    def test_kinds(self):
        self.assertEqual(mtilde_kinds(1, 1, 2), ['0', 'k', 'R'])
        self.assertEqual(mtilde(1, 1, 2, EPS2).diagram, diagram_from_kinds(EPS2, ['0', 'k', 'R']))

    def test_out_of_range(self):
        with self.assertRaises(OutOfRangeError):
            mtilde(2, 1, 2, Z4)


class ReplacementTests(SimpleTestCase):
    def test_cofibrant_fast_path(self):
        x = mtilde(0, 1, 2, Z4).diagram
        replacement = cofibrant_replace(x)
        self.assertEqual(replacement.diagram, x)
        self.assertEqual(replacement.weq, DiagMorphism.identity(x))

    def test_replacing_an_interval(self):
        replacement = cofibrant_replace(interval_diagram(0, 0, 1, Z4))
        self.assertTrue(replacement.diagram.is_cofibrant())
        self.assertEqual(replacement.diagram, mtilde(0, 0, 1, Z4).diagram)
        self.assertTrue(is_ho_isomorphic(replacement.diagram, mtilde(0, 0, 1, Z4).diagram))

    def test_zero_diagram(self):
        self.assertEqual(cofibrant_replace(zero_diagram(2, Z4)).diagram, zero_diagram(2, Z4))

    def test_hom_dimensions_do_not_depend_on_the_replacement(self):
        for ring, n in ((Z4, 1), (EPS3, 1), (EPS2, 2)):
            objects = mesh_objects(n)
            for x, y in itertools.product(objects, repeat=2):
                via_mtilde = ho_hom(mtilde(*x, n, ring).diagram, interval_diagram(*y, n, ring)).dimension
                generic = ho_hom(interval_diagram(*x, n, ring), interval_diagram(*y, n, ring)).dimension
                self.assertEqual(via_mtilde, generic, f'{ring}: {x} -> {y}')


class HomotopyTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(ho_hom(mtilde(1, 1, 1, Z4).diagram, interval_diagram(0, 1, 1, Z4)).dimension, 1)
        self.assertEqual(ho_hom(mtilde(0, 0, 1, Z4).diagram, interval_diagram(1, 1, 1, Z4)).dimension, 1)

    def test_dimension_table(self):
        for ring in (Z4, EPS3):
            for x, y in itertools.product(mesh_objects(1), repeat=2):
                space = ho_hom(mtilde(*x, 1, ring).diagram, mtilde(*y, 1, ring).diagram)
                self.assertEqual(space.dimension, int(hom_predicate(x, y)) + int(dn_predicate(x, y)))

    def test_vanishing_composite_is_null_homotopic(self):
        lift = nu_tilde((1, 1), (0, 0), 1, Z4)
        self.assertFalse(lift.is_zero())
        space = ho_hom(lift.source, lift.target)
        self.assertTrue(space.is_zero(lift))
        homotopy = space.null_homotopy(lift)
        self.assertIsNotNone(homotopy)
        self.assertEqual(space.eps @ homotopy, lift)

    def test_phi_is_not_null_homotopic(self):
        phi = phi_tilde(1, 1, Z4)
        space = ho_hom(phi.source, phi.target)
        self.assertFalse(space.is_zero(phi))
        self.assertIsNone(space.null_homotopy(phi))
        self.assertEqual(stable_dimensions(phi.source, phi.target), (0, 0))

    def test_homotopy_is_linear(self):
        x = mtilde(0, 1, 1, EPS3).diagram
        space = ho_hom(x, x)
        ident = DiagMorphism.identity(x)
        self.assertEqual(space.dimension, 1)
        coords = space.coordinates(ident.scale(2))
        self.assertNotEqual(coords, (0,))
        self.assertTrue(space.are_homotopic(space.combination(coords), ident.scale(2)))
        self.assertTrue(space.are_homotopic(ident.scale(4), ident))
        self.assertTrue(space.is_zero(ident.scale(3)))

    def test_homotopy_is_an_ideal(self):
        lift = nu_tilde((1, 1), (0, 0), 1, Z4)
        after = DiagMorphism.identity(lift.target).scale(3)
        before = nu_tilde((1, 1), (1, 1), 1, Z4)
        space = ho_hom(lift.source, lift.target)
        self.assertTrue(space.is_zero(after @ lift @ before))

    @given(st.integers(0, 3), st.integers(0, 3))
    @settings(max_examples=16, deadline=None)
    def test_scaled_null_maps_stay_null(self, left, right):
        lift = nu_tilde((1, 1), (0, 0), 1, Z4)
        source, target = lift.source, lift.target
        composite = DiagMorphism.identity(target).scale(left) @ lift @ DiagMorphism.identity(source).scale(right)
        self.assertTrue(ho_hom(source, target).is_zero(composite))

    def test_contractible(self):
        self.assertTrue(is_contractible(diagram_from_kinds(Z4, ['R', 'R'])))
        self.assertTrue(is_contractible(zero_diagram(1, Z4)))
        self.assertFalse(is_contractible(mtilde(0, 0, 1, Z4).diagram))


class LiftTests(SimpleTestCase):
    def test_steps(self):
        ne = nu_lift([(1, 1), (0, 1)], 1, Z4)
        self.assertTrue(ne.components[0].is_zero())
        self.assertEqual(ne.components[1], ModMorphism.identity(residue_module(Z4)))
        se = nu_lift([(0, 1), (0, 0)], 1, Z4)
        self.assertEqual(se.components, (ModMorphism.identity(residue_module(Z4)), alpha_map(Z4)))

    def test_empty_path(self):
        self.assertEqual(nu_lift([(0, 1)], 1, Z4), DiagMorphism.identity(mtilde(0, 1, 1, Z4).diagram))

    def test_non_monotone_path(self):
        with self.assertRaises(OutOfRangeError):
            nu_lift([(0, 0), (0, 1)], 1, Z4)
        with self.assertRaises(OutOfRangeError):
            nu_tilde((0, 0), (1, 1), 1, Z4)

    def test_phi_components(self):
        phi = phi_tilde(1, 1, Z4)
        self.assertTrue(phi.components[0].is_zero())
        self.assertEqual(phi.components[1], q_map(Z4))

    def test_phi_kills_the_vanishing_path_on_the_nose(self):
        for n in (1, 2):
            for i in range(1, n + 1):
                for i2 in range(1, i + 1):
                    composite = phi_tilde(i, n, EPS2) @ nu_tilde((i2, n), (0, i - 1), n, EPS2)
                    self.assertTrue(composite.is_zero(), f'i={i}, i2={i2}, n={n}')

    def test_phi_relation_in_ho(self):
        n = 2
        left = nu_tilde((2, 2), (1, 2), n, Z4) @ phi_tilde(2, n, Z4)
        right = phi_tilde(1, n, Z4) @ nu_tilde((0, 1), (0, 0), n, Z4)
        space = ho_hom(left.source, left.target)
        self.assertTrue(space.are_homotopic(left, right))
        self.assertFalse(space.is_zero(left))

    def test_out_of_range(self):
        with self.assertRaises(OutOfRangeError):
            phi_tilde(0, 1, Z4)

    def test_htrivial_is_null_homotopic(self):
        for ring in (Z4, EPS3):
            for n in (1, 2):
                for x, y in itertools.product(mesh_objects(n), repeat=2):
                    if not (y[0] <= x[0] and x[1] + 1 <= y[1]):
                        continue
                    h = htrivial(x, y, n, ring)
                    self.assertFalse(h.is_zero())
                    self.assertTrue(ho_hom(h.source, h.target).is_zero(h), f'{ring}: {x} -> {y} at n={n}')

    def test_htrivial_components(self):
        h = htrivial((0, 0), (0, 1), 1, Z4)
        self.assertTrue(h.components[0].is_zero())
        self.assertEqual(h.components[1], q_map(Z4))
        with self.assertRaises(OutOfRangeError):
            htrivial((0, 1), (0, 1), 1, Z4)


class SuspensionTests(SimpleTestCase):
    def test_suspension_of_k(self):
        single = diagram_from_kinds(Z4, ['k'])
        self.assertEqual(suspend(single).diagram, single)

    def test_suspension_of_zero(self):
        self.assertTrue(suspend(zero_diagram(1, Z4)).diagram.is_zero())

    def test_cone_is_contractible(self):
        for kinds in (['k', 'R'], ['0', 'k'], ['k', 'k']):
            x = diagram_from_kinds(EPS2, kinds)
            suspension = suspend(x)
            self.assertTrue(is_contractible(suspension.cone))
            self.assertTrue((suspension.projection @ suspension.inclusion).is_zero())

    def test_reordered_sums_are_isomorphic(self):
        a, b = mtilde(0, 0, 1, Z4).diagram, mtilde(1, 1, 1, Z4).diagram
        iso = ho_isomorphism(direct_sum(a, b), direct_sum(b, a))
        self.assertIsNotNone(iso)
