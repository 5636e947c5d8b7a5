from django.test import SimpleTestCase, override_settings

from khovanskii.catalog import bott_samelson_parameterization, del_pezzo, duffing_parameterization, pluecker_chart
from khovanskii.exceptions import RegularityError
from khovanskii.hilbert import (COMPLETE_INTERSECTION, OVERDETERMINED, UNDERDETERMINED, certified_hilbert_data,
                                grassmannian_closed_forms, grassmannian_hilbert_data, hilbert_data, hilbert_function,
                                hilbert_numerator, hilbert_regularity, regularity_bound, variety_degree)

GR24_HF = [1, 6, 20, 50, 105, 196, 336]


class HilbertNumeratorTests(SimpleTestCase):

    def test_duffing(self):
        data = hilbert_numerator(duffing_parameterization(), 6)
        self.assertTrue(data.certified)
        self.assertEqual(data.numerator, (1, 2, 2))
        self.assertEqual(hilbert_regularity(data), 0)
        self.assertEqual(variety_degree(data), 5)

    def test_grassmannian_2_4(self):
        data = hilbert_numerator(pluecker_chart(2, 4), 7)
        self.assertEqual(list(data.hf[:7]), GR24_HF)
        self.assertEqual(data.numerator, (1, 1))
        self.assertEqual(data.hreg, -3)
        self.assertEqual(data.degree, 2)

    def test_bott_samelson(self):
        data = hilbert_numerator(bott_samelson_parameterization(), 7)
        self.assertEqual(data.numerator, (1, 4, 1))
        self.assertEqual(data.hreg, -1)
        self.assertEqual(data.degree, 6)

    def test_del_pezzo_hilbert_function(self):
        par = del_pezzo()
        for d in range(7):
            self.assertEqual(hilbert_function(par, d), (5 * d * d + 5 * d + 2) // 2)

    def test_dmax_too_small(self):
        with self.assertRaisesMessage(ValueError, 'Dmax too small'):
            hilbert_numerator(duffing_parameterization(), 3)

    def test_short_sequences_are_not_certified(self):
        data = hilbert_data([1, 5, 14, 28, 47], 2)
        self.assertFalse(data.certified)
        self.assertTrue(data.warnings)


class GrassmannianClosedFormTests(SimpleTestCase):

    def test_closed_form_matches_lattice_points(self):
        hp, hreg = grassmannian_closed_forms(2, 4)
        par = pluecker_chart(2, 4)
        self.assertEqual([hp(t) for t in range(7)], GR24_HF)
        self.assertEqual([hilbert_function(par, t) for t in range(7)], GR24_HF)
        self.assertEqual(hreg, -3)

    def test_regularity_index(self):
        for k, m in ((2, 4), (2, 5), (3, 6)):
            self.assertEqual(grassmannian_closed_forms(k, m)[1], -m + 1)
            self.assertEqual(grassmannian_hilbert_data(k, m).hreg, -m + 1)

    def test_degree_of_gr_3_6(self):
        data = grassmannian_hilbert_data(3, 6)
        self.assertTrue(data.certified)
        self.assertEqual(data.degree, 42)

    def test_bad_shape(self):
        with self.assertRaises(ValueError):
            grassmannian_closed_forms(3, 3)


class RegularityBoundTests(SimpleTestCase):

    def test_complete_intersection(self):
        bound = regularity_bound(0, (1, 1), 2)
        self.assertEqual((bound.value, bound.status), (2, COMPLETE_INTERSECTION))

    def test_other_shapes_have_no_bound(self):
        self.assertEqual(regularity_bound(0, (1, 1, 1), 2).status, OVERDETERMINED)
        self.assertEqual(regularity_bound(0, (1,), 2).status, UNDERDETERMINED)
        self.assertFalse(regularity_bound(0, (1,), 2).usable)


class CertifiedHilbertDataTests(SimpleTestCase):

    def test_enumerates_until_certified(self):
        data = certified_hilbert_data(duffing_parameterization())
        self.assertTrue(data.certified)
        self.assertEqual(data.numerator, (1, 2, 2))
        self.assertEqual(data.hreg, 0)

    @override_settings(KHOVANSKII={'HILBERT_MAX_POINTS': 1})
    def test_pluecker_charts_use_the_closed_forms(self):
        data = certified_hilbert_data(pluecker_chart(3, 6))
        self.assertEqual(data, grassmannian_hilbert_data(3, 6))
        self.assertEqual((data.hreg, data.degree), (-5, 42))
        self.assertEqual(certified_hilbert_data(pluecker_chart(2, 4)).numerator, (1, 1))

    @override_settings(KHOVANSKII={'HILBERT_MAX_POINTS': 10})
    def test_enumeration_is_bounded(self):
        with self.assertRaisesMessage(RegularityError, 'exceeds 10 points'):
            certified_hilbert_data(bott_samelson_parameterization())
