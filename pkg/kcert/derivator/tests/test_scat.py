from django.test import SimpleTestCase

from derivator import scat
from derivator.certificates import Status
from derivator.diagcat import CACHE_SIZE, DiagMorphism, diagram_from_kinds, ho_hom, interval_diagram, mtilde
from derivator.exceptions import NotMonomorphismError
from derivator.meshcat import ZERO, face_object
from derivator.modcat import generating_monos
from derivator.ringlin import RingKind, make_ring

Z4 = make_ring(RingKind.ZP2, 2)
EPS2 = make_ring(RingKind.EPS, 2)
F2 = make_ring(RingKind.FIELD, 2)
EPS3 = make_ring(RingKind.EPS, 3)
Z9 = make_ring(RingKind.ZP2, 3)
F3 = make_ring(RingKind.FIELD, 3)
RINGS = (EPS2, Z4, EPS3, Z9)


class SOperatorTests(SimpleTestCase):
    def test_quotient_by_first(self):
        image = scat.s_face(mtilde(0, 0, 1, Z4).diagram, 0)
        self.assertEqual(image, diagram_from_kinds(Z4, ['k']))
        image = scat.s_face(mtilde(0, 0, 2, Z4).diagram, 0)
        self.assertEqual(image, mtilde(0, 1, 1, Z4).diagram)

    def test_deletion(self):
        x = mtilde(0, 0, 1, Z4).diagram
        self.assertEqual(scat.s_face(x, 2), diagram_from_kinds(Z4, ['k']))
        self.assertEqual(scat.s_face(x, 1), diagram_from_kinds(Z4, ['R']))
        self.assertEqual(scat.s_face(mtilde(0, 1, 2, EPS2).diagram, 2), diagram_from_kinds(EPS2, ['k', 'R']))

    def test_level_zero(self):
        self.assertIsNone(scat.s_face(diagram_from_kinds(Z4, ['k']), 0))
        self.assertIsNone(scat.s_face(diagram_from_kinds(Z4, ['k']), 1))

    def test_degeneracies(self):
        x = mtilde(0, 0, 1, Z4).diagram
        self.assertEqual(scat.s_degeneracy(x, 0), diagram_from_kinds(Z4, ['0', 'k', 'R']))
        self.assertEqual(scat.s_degeneracy(x, 1), diagram_from_kinds(Z4, ['k', 'k', 'R']))
        self.assertEqual(scat.s_degeneracy(x, 2), diagram_from_kinds(Z4, ['k', 'R', 'R']))

    def test_operators_on_morphisms(self):
        x = mtilde(0, 0, 2, Z4).diagram
        ident = DiagMorphism.identity(x)
        for t in range(3):
            image = scat.s_face_morphism(ident, t)
            self.assertEqual(image, DiagMorphism.identity(scat.s_face(x, t)))
        self.assertEqual(scat.s_degeneracy_morphism(ident, 0), DiagMorphism.identity(scat.s_degeneracy(x, 0)))

    def test_s_objects_are_cofibrant(self):
        with self.assertRaises(NotMonomorphismError):
            scat.SObject(interval_diagram(0, 0, 1, Z4))
        obj = scat.SObject(mtilde(0, 0, 1, Z4).diagram)
        self.assertEqual(obj.level, 2)
        self.assertEqual(obj.cofiber(0, 1).module, diagram_from_kinds(Z4, ['k']).objects[0])
        self.assertIsNone(scat.s_faces_degeneracies(scat.SObject(diagram_from_kinds(Z4, ['k'])), 'd', 0))

    def test_identify_interval(self):
        self.assertEqual(scat.identify_interval(mtilde(1, 1, 2, Z4).diagram, 2, Z4), (1, 1))
        self.assertIs(scat.identify_interval(None, 1, Z4), ZERO)
        self.assertIsNone(scat.identify_interval(interval_diagram(0, 0, 1, Z4), 1, Z4))

    def test_d0_oracle_follows_the_adopted_formula(self):
        for ring in (Z4, EPS2):
            for n in (1, 2):
                expected = {j: face_object(n, 0, (0, j)) for j in range(n + 1)}
                self.assertEqual(scat.d0_oracle(ring, n), expected)
        self.assertEqual(scat.d0_oracle(Z4, 2), {0: (0, 1), 1: (1, 1), 2: ZERO})

    def test_caches_are_bounded_and_cleared(self):
        self.assertEqual(ho_hom.cache_info().maxsize, CACHE_SIZE)
        ho_hom(mtilde(0, 0, 1, Z4).diagram, mtilde(0, 0, 1, Z4).diagram)
        scat.SObject(mtilde(0, 0, 1, Z4).diagram).cofiber(0, 1)
        scat.clear_caches()
        self.assertEqual(ho_hom.cache_info().currsize, 0)
        self.assertEqual(scat._cofiber.cache_info().currsize, 0)


class ComparisonTests(SimpleTestCase):
    def test_iso1(self):
        for ring in (Z4, EPS2):
            certificate = scat.verify_iso1(ring, 1)
            self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)
            self.assertEqual(certificate.tables['ho_dimensions'], [[1, 0, 1], [1, 1, 0], [0, 1, 1]])

    def test_iso2(self):
        certificate = scat.verify_iso2(Z4, 1)
        self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)
        self.assertTrue(any('displayed d_0 is not well defined' in note for note in certificate.notes))

    def test_independence(self):
        certificate = scat.independence_check(2, 1, cap=2)
        self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)
        self.assertEqual(certificate.ring, 'both')

    def test_iso1_over_every_ring(self):
        for ring in RINGS:
            for n in (1, 2):
                with self.subTest(ring=str(ring), n=n):
                    certificate = scat.verify_iso1(ring, n)
                    self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)
                    self.assertTrue(any(line.startswith('q on the R positions') for line in certificate.evidence))

    def test_iso2_at_level_two(self):
        for ring in RINGS:
            with self.subTest(ring=str(ring)):
                certificate = scat.verify_iso2(ring, 2)
                self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)

    def test_independence_at_level_two(self):
        for p in (2, 3):
            with self.subTest(p=p):
                certificate = scat.independence_check(p, 2, cap=2)
                self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)


class RemarkTests(SimpleTestCase):
    def test_flagged_but_consistent(self):
        for ring in (Z4, EPS2):
            certificate = scat.verify_remark(ring)
            self.assertEqual(certificate.status, Status.FLAGGED, certificate.witnesses)
            self.assertTrue(certificate.passed)
            self.assertIn('isomorphic to Z: False', certificate.notes[0])


class K0Tests(SimpleTestCase):
    def test_sequence_rows(self):
        monos = generating_monos(Z4)
        self.assertEqual(scat._sequence_row(monos['k->R']), (1, -2))
        self.assertEqual(scat._sequence_row(monos['0->k']), (0, 0))

    def test_presentation(self):
        presentation = scat.KPresentation(('R', 'k'), ((1, 0), (1, -2)))
        self.assertEqual(presentation.describe(), 'Z/2')
        self.assertEqual(presentation.invariants, (0, (2,)))

    def test_both_sides(self):
        self.assertEqual(scat.k0_waldhausen(Z4, 2).describe(), 'Z/2')
        self.assertIn((-2,), scat.k0_derivator(F2, 2).relations)
        self.assertEqual(scat.k0_derivator(F2, 2).invariants, (0, (2,)))

    def test_check_is_flagged(self):
        certificate = scat.k0_check(EPS2, 2)
        self.assertEqual(certificate.status, Status.FLAGGED, certificate.witnesses)
        self.assertIn('Z/2', certificate.notes[0])

    def test_stable_over_caps(self):
        for ring in RINGS:
            for cap in (2, 3, 4):
                with self.subTest(ring=str(ring), cap=cap):
                    self.assertEqual(scat.k0_waldhausen(ring, cap).describe(), 'Z/2')
                    certificate = scat.k0_check(ring, cap)
                    self.assertEqual(certificate.status, Status.FLAGGED, certificate.witnesses)


class QuiverSideTests(SimpleTestCase):
    def test_hom_table(self):
        certificate = scat.hom_table_check(F2, 3)
        self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)
        self.assertEqual(len(certificate.tables['hom_dimensions']), 10)

    def test_ext_table(self):
        certificate = scat.ext_table_check(F3, 2)
        self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)
        self.assertEqual(certificate.tables['ext_dimensions'][0], [0, 0, 0, 1, 1, 0])

    def test_b_family(self):
        certificate = scat.b_family_check(F2, 2)
        self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)

    def test_decompose(self):
        certificate = scat.decompose_roundtrip(F2, 2, count=10, seed=1)
        self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)

    def test_decompose_at_desk_scale(self):
        for field in (F2, F3):
            for n in range(5):
                with self.subTest(field=str(field), n=n):
                    certificate = scat.decompose_roundtrip(field, n, count=200, seed=n)
                    self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)

    def test_simplicial_up_to_level_five(self):
        for field in (F2, F3):
            with self.subTest(field=str(field)):
                certificate = scat.check_simplicial(field, 5, morphism_level=5)
                self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)

    def test_simplicial(self):
        certificate = scat.check_simplicial(F2, 3)
        self.assertEqual(certificate.status, Status.PASS, certificate.witnesses)
        self.assertEqual(certificate.n, 3)
