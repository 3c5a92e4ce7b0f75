import itertools

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from derivator.exceptions import CompositionError, NotMonomorphismError, RingError
from derivator.modcat import (
    FgModule, HomModule, ModMorphism, Presentation, cokernel, extend_along, free_cover, free_module, generating_monos,
    hom_space, include_residue, injective_embed, is_epi, is_mono, lift_along, residue_module, stable_hom,
    sum_of_morphisms, zero_module,
)
from derivator.ringlin import Matrix, RingKind, make_ring
from derivator.tests.strategies import composable_triples, local_rings, modules, morphisms, vectors


def alpha_map(ring):
    return ModMorphism.blocks(residue_module(ring), free_module(ring), kr=[[1]])


def q_map(ring):
    return ModMorphism.blocks(free_module(ring), residue_module(ring), rk=[[1]])


class ModuleTests(SimpleTestCase):
    def setUp(self):
        self.z4 = make_ring(RingKind.ZP2, 2)

    def test_modules_live_over_local_rings(self):
        with self.assertRaises(RingError):
            FgModule(make_ring(RingKind.FIELD, 2), 1, 0)

    def test_labels_and_lengths(self):
        m = FgModule(self.z4, 2, 1)
        self.assertEqual(str(m), 'R^2 + k')
        self.assertEqual(m.length, 5)
        self.assertEqual(len(list(m.elements())), 32)
        self.assertEqual(str(zero_module(self.z4)), '0')

    def test_include_residue(self):
        self.assertEqual(include_residue(2, self.z4), FgModule(self.z4, 0, 2))
        self.assertTrue(include_residue(0, self.z4).is_zero())


class HomTests(SimpleTestCase):
    def setUp(self):
        self.z4 = make_ring(RingKind.ZP2, 2)
        self.r, self.k = free_module(self.z4), residue_module(self.z4)

    def test_hom_sizes(self):
        self.assertEqual(hom_space(self.r, self.r).length, 2)
        self.assertEqual(hom_space(self.k, self.r).length, 1)
        self.assertEqual(hom_space(self.k, self.k).length, 1)

    def test_hom_from_k_to_r_hits_the_socle(self):
        images = {tuple(f.apply([1])) for f in hom_space(self.k, self.r).elements()}
        self.assertEqual(images, {(0,), (2,)})

    def test_q_after_alpha_is_zero(self):
        self.assertTrue((q_map(self.z4) @ alpha_map(self.z4)).is_zero())

    def test_alpha_after_q_is_multiplication_by_alpha(self):
        composite = alpha_map(self.z4) @ q_map(self.z4)
        self.assertEqual(composite.rr.tolist(), [[2]])
        self.assertEqual(composite, ModMorphism.identity(self.r).scale(2))

    def test_identity_is_neutral(self):
        f = alpha_map(self.z4)
        self.assertEqual(ModMorphism.identity(self.r) @ f, f)
        self.assertEqual(f @ ModMorphism.identity(self.k), f)

    def test_composition_checks_endpoints(self):
        with self.assertRaises(CompositionError):
            alpha_map(self.z4) @ alpha_map(self.z4)

    def test_hom_module_coordinates(self):
        hom = HomModule(FgModule(self.z4, 1, 1), FgModule(self.z4, 1, 1))
        f = hom.from_vector([3, 1, 1, 0])
        self.assertEqual(hom.to_vector(f).tolist(), [3, 1, 1, 0])
        self.assertEqual(len(hom.generators()), 4)

    @given(composable_triples())
    @settings(max_examples=60, deadline=None)
    def test_composition_is_associative(self, triple):
        f, g, h = triple
        self.assertEqual((h @ g) @ f, h @ (g @ f))

    @given(local_rings(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_blocks_agree_with_presentation_matrices(self, ring, data):
        m0, m1, m2 = (data.draw(modules(ring)) for _ in range(3))
        f, g = data.draw(morphisms(m0, m1)), data.draw(morphisms(m1, m2))
        v = data.draw(vectors(m0))
        self.assertEqual((g @ f).apply(v).tolist(), g.apply(f.apply(v)).tolist())

    @given(local_rings(), st.data())
    @settings(max_examples=40, deadline=None)
    def test_composite_lift_agrees_modulo_relations(self, ring, data):
        m0, m1, m2 = (data.draw(modules(ring)) for _ in range(3))
        f, g = data.draw(morphisms(m0, m1)), data.draw(morphisms(m1, m2))
        self.assertTrue(Presentation(m2).same((g @ f).lift(), g.lift() @ f.lift()))

    def test_presentation_sees_alpha_multiples_of_k(self):
        ring = make_ring(RingKind.ZP2, 2)
        k = residue_module(ring)
        presentation = Presentation(k)
        self.assertTrue(presentation.vanishes(Matrix(ring, [[2]])))
        self.assertFalse(presentation.vanishes(Matrix(ring, [[1]])))
        self.assertEqual(presentation.span_length(Matrix(ring, [[1]])), 1)


class MonoEpiTests(SimpleTestCase):
    def setUp(self):
        self.ring = make_ring(RingKind.EPS, 3)

    def test_alpha(self):
        self.assertTrue(is_mono(alpha_map(self.ring)))
        self.assertFalse(is_epi(alpha_map(self.ring)))

    def test_q(self):
        self.assertTrue(is_epi(q_map(self.ring)))
        self.assertFalse(is_mono(q_map(self.ring)))

    def test_identity(self):
        ident = ModMorphism.identity(free_module(self.ring))
        self.assertTrue(is_mono(ident) and is_epi(ident))

    def test_mono_by_enumeration(self):
        z4 = make_ring(RingKind.ZP2, 2)
        for f in hom_space(residue_module(z4), free_module(z4)).elements():
            injective = len({tuple(f.apply(v)) for v in residue_module(z4).elements()}) == 2
            self.assertEqual(is_mono(f), injective)


class CokernelTests(SimpleTestCase):
    def setUp(self):
        self.ring = make_ring(RingKind.ZP2, 2)
        self.monos = generating_monos(self.ring)

    def test_chosen_cofibers(self):
        k, r = residue_module(self.ring), free_module(self.ring)
        into_k = cokernel(self.monos['0->k'])
        self.assertEqual(into_k.module, k)
        self.assertEqual(into_k.projection, ModMorphism.identity(k))
        self.assertEqual(cokernel(self.monos['k->R']).projection, q_map(self.ring))
        self.assertTrue(cokernel(self.monos['R->R']).module.is_zero())
        self.assertTrue(cokernel(self.monos['k->k']).module.is_zero())
        self.assertEqual(cokernel(self.monos['0->R']).projection, ModMorphism.identity(r))

    def test_not_a_monomorphism(self):
        with self.assertRaises(NotMonomorphismError):
            cokernel(q_map(self.ring))

    def test_cokernel_of_sum(self):
        f = sum_of_morphisms(self.monos['k->R'], self.monos['0->k'], self.monos['R->R'])
        quotient = cokernel(f)
        self.assertEqual(quotient.module, FgModule(self.ring, 0, 2))
        self.assertTrue((quotient.projection @ f).is_zero())
        self.assertTrue(is_epi(quotient.projection))

    def test_universal_property(self):
        f = self.monos['k->R']
        quotient = cokernel(f)
        for h in hom_space(f.target, residue_module(self.ring)).elements():
            if (h @ f).is_zero():
                s = extend_along(quotient.projection, h)
                self.assertIsNotNone(s)
                self.assertEqual(s @ quotient.projection, h)


class CoverTests(SimpleTestCase):
    def setUp(self):
        self.ring = make_ring(RingKind.EPS, 2)

    def test_cover_of_k(self):
        cover, eps = free_cover(residue_module(self.ring))
        self.assertEqual(cover, free_module(self.ring))
        self.assertEqual(eps, q_map(self.ring))
        hull, iota = injective_embed(residue_module(self.ring))
        self.assertEqual(hull, free_module(self.ring))
        self.assertEqual(iota, alpha_map(self.ring))

    def test_cover_of_free_module(self):
        r = free_module(self.ring)
        self.assertEqual(free_cover(r), (r, ModMorphism.identity(r)))

    def test_cover_of_mixed_module(self):
        m = FgModule(self.ring, 1, 1)
        cover, eps = free_cover(m)
        self.assertEqual(cover, free_module(self.ring, 2))
        self.assertTrue(is_epi(eps))
        self.assertTrue(is_mono(injective_embed(m)[1]))

    def test_maps_from_projectives_lift(self):
        m = FgModule(self.ring, 1, 1)
        cover, eps = free_cover(m)
        source = free_module(self.ring, 1)
        for h in hom_space(source, m).elements():
            s = lift_along(eps, h)
            self.assertEqual(eps @ s, h)


class StableTests(SimpleTestCase):
    def test_examples(self):
        z4 = make_ring(RingKind.ZP2, 2)
        k, r = residue_module(z4), free_module(z4)
        self.assertEqual(stable_hom(k, k).dimension, 1)
        self.assertEqual(stable_hom(r, k).dimension, 0)
        self.assertEqual(stable_hom(FgModule(z4, 1, 1), k).dimension, 1)
        self.assertEqual(stable_hom(k, residue_module(z4, 2)).dimension, 2)

    def test_equivalence_with_vector_spaces(self):
        for kind, p in itertools.product((RingKind.EPS, RingKind.ZP2), (2, 3)):
            ring = make_ring(kind, p)
            shapes = [FgModule(ring, a, b) for a in range(3) for b in range(3 - a)]
            for m, n in itertools.product(shapes, repeat=2):
                self.assertEqual(stable_hom(m, n).dimension, m.residue_rank * n.residue_rank, f'{ring}: {m}, {n}')

    def test_maps_through_free_modules_are_stably_zero(self):
        ring = make_ring(RingKind.ZP2, 3)
        k = residue_module(ring)
        space = stable_hom(k, k)
        self.assertTrue(space.is_zero(q_map(ring) @ alpha_map(ring)))
        self.assertFalse(space.is_zero(ModMorphism.identity(k)))
        self.assertEqual(space.coordinates(ModMorphism.identity(k).scale(2)), (2,))

    def test_residue_maps_are_full(self):
        ring = make_ring(RingKind.EPS, 2)
        source, target = residue_module(ring, 1), residue_module(ring, 2)
        space = stable_hom(source, target)
        images = set()
        for entries in itertools.product(range(2), repeat=2):
            f = ModMorphism.blocks(source, target, kk=Matrix(ring.residue_field, [[entries[0]], [entries[1]]]))
            images.add(space.coordinates(f))
        self.assertEqual(len(images), 4)
