import json
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from khovanskii.models import SolveRun

from .test_forms import DUFFING_DOCUMENT, document

FAILING_DOCUMENT = {
    'vars': ['t1', 't2'],
    'weight': [-3, -1],
    'phi': ['1', 't1', 't2', 't1*t2 + t2^3'],
    'equations': [],
}


def run(name, *args, stdin=None, **options):
    out = StringIO()
    if stdin is not None:
        options['stdin'] = StringIO(stdin if isinstance(stdin, str) else json.dumps(stdin))
    call_command(name, *args, stdout=out, stderr=StringIO(), **options)
    return out.getvalue()


class CatalogCommandTests(SimpleTestCase):

    def test_catalog_pipes_into_solve(self):
        document = run('khov_catalog', 'duffing')
        result = json.loads(run('khov_solve', '-', '--dreg', '3', '--seed', '1', stdin=document))
        self.assertEqual(result['delta'], 5)
        self.assertEqual(len(result['solutions']), 5)
        self.assertTrue(all(s['residual'] < 1e-8 for s in result['solutions']))
        self.assertTrue(all('/' in c for c in result['h']))

    def test_output_does_not_depend_on_threads(self):
        document = run('khov_catalog', 'duffing')
        single = run('khov_solve', '-', '--seed', '2', stdin=document)
        threaded = run('khov_solve', '-', '--seed', '2', '--threads', '3', stdin=document)
        self.assertEqual(single, threaded)

    def test_listing(self):
        self.assertIn('bottsamelson', run('khov_catalog', '--list'))

    def test_unknown_entry(self):
        with self.assertRaises(CommandError) as raised:
            run('khov_catalog', 'quartic')
        self.assertEqual(raised.exception.returncode, 1)


class PipelineCommandTests(SimpleTestCase):

    def test_hilbert_of_gr_2_4(self):
        document = run('khov_catalog', 'grassmannian:2,4')
        output = run('khov_hilbert', '-', '--dmax', '6', stdin=document)
        self.assertIn('HF: 1, 6, 20, 50, 105, 196, 336', output)

    def test_hilbert_of_duffing(self):
        output = run('khov_hilbert', '-', '--dmax', '6', stdin=DUFFING_DOCUMENT)
        self.assertIn('numerator: 1, 2, 2', output)
        self.assertIn('HReg: 0', output)
        self.assertIn('degree: 5', output)
        self.assertIn('certified: yes', output)

    def test_check_passes(self):
        output = run('khov_check', '-', '--dmax', '3', stdin=DUFFING_DOCUMENT)
        self.assertIn('d=3 |dA|=28 rank=28 pass', output)

    def test_check_defaults_to_one_past_the_file_degree(self):
        output = run('khov_check', '-', stdin=document(dreg=3))
        self.assertIn('d=4 |dA|=47 rank=47 pass', output)
        self.assertIn('through degree 4', output)

    def test_check_needs_a_degree(self):
        with self.assertRaises(CommandError) as raised:
            run('khov_check', '-', stdin=DUFFING_DOCUMENT)
        self.assertEqual(raised.exception.returncode, 1)

    def test_check_fails_with_exit_two(self):
        with self.assertRaises(CommandError) as raised:
            run('khov_check', '-', '--dmax', '3', stdin=FAILING_DOCUMENT)
        self.assertEqual(raised.exception.returncode, 2)

    def test_basis(self):
        output = run('khov_basis', '-', '-d', '1', stdin=DUFFING_DOCUMENT)
        self.assertIn('5 points in degree 1', output)
        self.assertIn('x3', output)

    def test_km_shape_and_csv(self):
        output = run('khov_km', '-', '-d', '3', stdin=DUFFING_DOCUMENT)
        self.assertIn('shape: 28 x 28', output)
        self.assertIn('nullity: 5', output)
        lines = run('khov_km', '-', '-d', '2', '--out', 'csv', stdin=DUFFING_DOCUMENT).splitlines()
        self.assertTrue(lines[0].startswith('i,gamma,'))
        self.assertEqual(len(lines), 11)
        self.assertEqual(len(lines[0].split(',')), 16)

    def test_count_only(self):
        result = json.loads(run('khov_solve', '-', '--dreg', '3', '--count-only',
                                stdin=dict(DUFFING_DOCUMENT, field={'Fp': 9716633})))
        self.assertEqual(result['delta'], 5)
        self.assertEqual(result['field'], 'Fp(9716633)')

    def test_schubert_count_over_a_prime_field(self):
        result = json.loads(run('khov_schubert', '--k', '3', '--m', '6', '--conditions', '2,4,6;2,4,6;2,4,6',
                                '--seed', '1', '--field', '9716633', '--dreg', '2'))
        self.assertEqual(result['raw_equations'], 39)
        self.assertEqual(result['equations'], 18)
        self.assertEqual(result['delta'], 2)


class ExitCodeTests(SimpleTestCase):

    def assert_exit(self, code, *args, **options):
        with self.assertRaises(CommandError) as raised:
            run(*args, **options)
        self.assertEqual(raised.exception.returncode, code)

    def test_parse_error(self):
        self.assert_exit(1, 'khov_solve', '-', stdin=dict(DUFFING_DOCUMENT, phi=['1', 't1 +']))

    def test_invalid_json(self):
        self.assert_exit(1, 'khov_solve', '-', stdin='{"vars": ')

    def test_missing_file(self):
        self.assert_exit(1, 'khov_solve', '/nonexistent/system.json')

    def test_no_equations_is_positive_dimensional(self):
        with self.assertRaises(CommandError) as raised:
            run('khov_solve', '-', stdin=dict(DUFFING_DOCUMENT, equations=[]))
        self.assertEqual(raised.exception.returncode, 2)
        self.assertIn('positive-dimensional', str(raised.exception))

    def test_eigenvalues_over_a_prime_field(self):
        self.assert_exit(3, 'khov_solve', '-', '--dreg', '3', stdin=dict(DUFFING_DOCUMENT, field={'Fp': 101}))


class SolveRunTests(TestCase):

    def test_saved_runs_are_listed(self):
        run('khov_solve', '-', '--dreg', '3', '--save', stdin=DUFFING_DOCUMENT)
        self.assertEqual(SolveRun.objects.count(), 1)
        saved = SolveRun.objects.get()
        self.assertEqual((saved.status, saved.delta, saved.dreg, saved.field), ('ok', 5, 3, 'QQ'))
        self.assertEqual(len(saved.result['solutions']), 5)
        self.assertIn('5 solutions at degree 3', run('khov_runs'))

    def test_failures_are_recorded(self):
        with self.assertRaises(CommandError):
            run('khov_solve', '-', '--save', stdin=dict(DUFFING_DOCUMENT, equations=[]))
        saved = SolveRun.objects.get()
        self.assertEqual(saved.status, 'failed')
        self.assertIn('positive-dimensional', saved.message)
        self.assertIn('failed', run('khov_runs', '--status', 'failed'))

    def test_empty_history(self):
        self.assertIn('No runs recorded.', run('khov_runs'))
