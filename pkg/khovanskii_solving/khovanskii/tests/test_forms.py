from django.test import SimpleTestCase

from khovanskii.catalog import duffing
from khovanskii.exceptions import SystemFileError
from khovanskii.forms import SystemFileForm
from khovanskii.systemfile import instance_to_json, system_to_json

DUFFING_DOCUMENT = {
    'field': 'QQ',
    'vars': ['t1', 't2'],
    'weight': [0, -1],
    'phi': ['1', 't1', 't2', 't1*(t1^2 + t2^2)', 't2*(t1^2 + t2^2)'],
    'equations': [
        {'degree': 1, 'poly': '1 + 3*t1 + 5*t2 + 7*t1^3 + 7*t1*t2^2'},
        {'degree': 1, 'coeffs': [{'alpha': [1, 0, 0, 0, 0], 'c': 11}, {'alpha': [0, 1, 0, 0, 0], 'c': '13'},
                                 {'alpha': [0, 0, 1, 0, 0], 'c': 17}, {'alpha': [0, 0, 0, 0, 1], 'c': '19'}]},
    ],
}


def document(**changes):
    data = dict(DUFFING_DOCUMENT)
    data.update(changes)
    return data


class SystemFileFormTests(SimpleTestCase):

    def test_valid_document_builds_the_duffing_system(self):
        form = SystemFileForm(data=document())
        self.assertTrue(form.is_valid(), form.errors)
        system = form.to_system()
        self.assertEqual(system.degrees, (1, 1))
        self.assertEqual([e.coeff_form for e in system.equations],
                         [e.coeff_form for e in duffing().system.equations])

    def test_prime_field(self):
        form = SystemFileForm(data=document(field={'Fp': 101}))
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['field'].modulus, 101)

    def test_weight_length_must_match(self):
        form = SystemFileForm(data=document(weight=[0, -1, 2]))
        self.assertFalse(form.is_valid())
        self.assertIn('weight', form.errors)

    def test_syntax_errors_are_reported(self):
        form = SystemFileForm(data=document(phi=['1', 't1', 't2 +']))
        self.assertFalse(form.is_valid())
        self.assertIn('position', form.non_field_errors()[0])

    def test_equation_needs_exactly_one_body(self):
        form = SystemFileForm(data=document(equations=[{'degree': 1}]))
        self.assertFalse(form.is_valid())
        self.assertIn('equations', form.errors)

    def test_equation_degree(self):
        form = SystemFileForm(data=document(equations=[{'degree': 0, 'poly': '1'}]))
        self.assertFalse(form.is_valid())

    def test_duplicate_variables(self):
        form = SystemFileForm(data=document(vars=['t1', 't1']))
        self.assertFalse(form.is_valid())
        self.assertIn('vars', form.errors)

    def test_exponent_length_mismatch(self):
        bad = {'degree': 1, 'coeffs': [{'alpha': [1, 0], 'c': 1}]}
        form = SystemFileForm(data=document(equations=[bad]))
        self.assertTrue(form.is_valid(), form.errors)
        with self.assertRaises(SystemFileError):
            form.to_system()

    def test_serialized_system_validates_again(self):
        data = instance_to_json(duffing())
        self.assertEqual(data['dreg'], 3)
        self.assertEqual(data['expected_count'], 5)
        form = SystemFileForm(data=data)
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(system_to_json(form.to_system()), system_to_json(duffing().system))
