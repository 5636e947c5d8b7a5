import itertools
import os
import unittest

import numpy as np
from django.test import SimpleTestCase, override_settings

from khovanskii import linalg
from khovanskii.catalog import (bott_samelson, del_pezzo_system, duffing, duffing_parameterization, gr36_problem,
                                osculating_problem)
from khovanskii.exceptions import NotKhovanskiiError, RegularityError, ScanSizeError, UnsupportedFieldError
from khovanskii.hilbert import hilbert_function
from khovanskii.km import equation_from_form, km_matrix, structured_system
from khovanskii.poly import FieldSpec
from khovanskii.solver import (brute_force_affine, choose_dreg, extract_solutions, h_combination, image_point,
                               kernel_annihilates, kernel_basis, multiplication_matrices, normalize, residuals,
                               solve)

from .test_khov import failing_parameterization

SLOW = os.environ.get('KHOVANSKII_SLOW_TESTS') == '1'


class CommutingMatricesMixin:

    def assert_commuting(self, ms):
        field = ms.field
        for a, b in itertools.combinations(ms.mats, 2):
            self.assertEqual(linalg.matmul(a, b, field), linalg.matmul(b, a, field))
        self.assertEqual(h_combination(ms), linalg.identity(ms.delta, field))

    def assert_consistent(self, system, dreg, **options):
        """Checks the kernel at ``dreg`` against ``HF(dreg)`` and returns the solve there."""
        kernel = kernel_basis(km_matrix(system, dreg))
        self.assertEqual(kernel.rank + kernel.nullity, hilbert_function(system.par, dreg))
        solutions = solve(system, dreg=dreg, seed=1, **options)
        self.assertEqual(solutions.delta, kernel.nullity)
        self.assert_commuting(solutions.multiplication)
        return solutions


class MultiplicationMatrixTests(CommutingMatricesMixin, SimpleTestCase):

    def test_duffing_matrices_commute(self):
        system = duffing().system
        kernel = kernel_basis(km_matrix(system, 3))
        ms = multiplication_matrices(system, kernel, 2, seed=1)
        self.assertEqual(ms.delta, 5)
        self.assertEqual(len(ms.mats), 5)
        self.assert_commuting(ms)

    def test_kernel_degree_must_be_one_higher(self):
        system = duffing().system
        kernel = kernel_basis(km_matrix(system, 3))
        with self.assertRaises(ValueError):
            multiplication_matrices(system, kernel, 3)

    def test_del_pezzo_over_a_prime_field(self):
        for d in (1, 2):
            instance = del_pezzo_system(d, seed=1)
            solutions = solve(instance.system, dreg=instance.recommended_dreg, seed=1, count_only=True)
            self.assertEqual(solutions.delta, 5 * d * d)
            self.assert_commuting(solutions.multiplication)

    @unittest.skipUnless(SLOW, "set KHOVANSKII_SLOW_TESTS=1")
    def test_del_pezzo_degree_three(self):
        instance = del_pezzo_system(3, seed=1)
        solutions = solve(instance.system, dreg=instance.recommended_dreg, seed=1, count_only=True)
        self.assertEqual(solutions.delta, 45)


class SolveTests(CommutingMatricesMixin, SimpleTestCase):

    def test_duffing(self):
        solutions = solve(duffing().system, dreg=3, seed=1)
        self.assertEqual(solutions.delta, 5)
        self.assertEqual(solutions.dreg, 3)
        self.assertTrue(all(r < 1e-8 for r in solutions.residuals))
        self.assertLess(solutions.diagnostics['offdiag'], 1e-6)

    def test_duffing_chooses_its_own_degree(self):
        system = duffing().system
        self.assertEqual(choose_dreg(system), 3)
        self.assertEqual(solve(system, seed=1).delta, 5)

    def test_same_seed_same_answer(self):
        first = solve(duffing().system, dreg=3, seed=4)
        second = solve(duffing().system, dreg=3, seed=4)
        np.testing.assert_array_equal(first.coords, second.coords)

    def test_chart_residuals(self):
        solutions = solve(duffing().system, dreg=3, seed=1)
        self.assertTrue(all(r < 1e-6 for r in residuals(duffing().system, solutions.coords, chart=True)))

    def test_bott_samelson(self):
        solutions = self.assert_consistent(bott_samelson().system, 3)
        self.assertEqual(solutions.delta, 6)
        expected = np.array([1, -0.689522, 0.928435, -1.35986, 0.937652, -1.26254, -1.28671, 1.73254])
        distances = [np.max(np.abs(row - expected)) for row in solutions.normalized('first')]
        self.assertLess(min(distances), 1e-4)

    def test_adaptive_search_on_an_overdetermined_system(self):
        instance = gr36_problem(5, seed=1)
        solutions = solve(instance.system, adaptive=True, seed=1, count_only=True)
        self.assertEqual(solutions.delta, 3)
        self.assert_consistent(instance.system, solutions.dreg, count_only=True)

    def test_gr36_six_solutions(self):
        instance = gr36_problem(4, seed=1)
        solutions = self.assert_consistent(instance.system, 3, count_only=True)
        self.assertEqual(solutions.delta, 6)

    def test_no_equations(self):
        system = structured_system(duffing().par, [])
        with self.assertRaisesMessage(RegularityError, 'positive-dimensional'):
            solve(system)

    def test_too_few_equations(self):
        system = structured_system(duffing().par, duffing().system.equations[:1])
        with self.assertRaises(RegularityError):
            choose_dreg(system)

    def test_eigenvalues_need_the_rationals(self):
        instance = del_pezzo_system(1, seed=1)
        solutions = solve(instance.system, dreg=3, seed=1, count_only=True)
        with self.assertRaises(UnsupportedFieldError):
            extract_solutions(solutions.multiplication)

    def test_normalization(self):
        coords = np.array([[2, 4, 6], [0, 3, 9]], dtype=complex)
        np.testing.assert_allclose(normalize(coords), [[1, 2, 3], [0, 1, 3]])
        np.testing.assert_array_equal(normalize(coords, 'raw'), coords)


class FiniteFieldOracleTests(SimpleTestCase):

    def test_scanned_solutions_annihilate_the_kernel(self):
        field = FieldSpec.prime(101)
        instance = del_pezzo_system(1, seed=1, field=field)
        kernel = kernel_basis(km_matrix(instance.system, 3))
        self.assertEqual(kernel.nullity, 5)
        images = [image_point(instance.par, t) for t in brute_force_affine(instance.system)]
        images = [x for x in images if any(x)]
        self.assertLessEqual(len(images), 5)
        for x in images:
            self.assertTrue(kernel_annihilates(kernel, instance.par, x))

    def test_scan_needs_a_prime_field(self):
        with self.assertRaises(UnsupportedFieldError):
            brute_force_affine(duffing().system)

    def test_scan_size_is_capped(self):
        with self.assertRaises(ScanSizeError):
            brute_force_affine(del_pezzo_system(1, seed=1).system)
        with self.assertRaises(ScanSizeError):
            brute_force_affine(bott_samelson(FieldSpec.prime(9973)).system)


class ExtractionPropertyTests(SimpleTestCase):

    def test_coordinates_are_eigenvalues_of_each_matrix(self):
        solutions = solve(duffing().system, dreg=3, seed=1)
        for j, mat in enumerate(solutions.multiplication.mats):
            values = np.linalg.eigvals(np.array([[float(v) for v in row] for row in mat]))
            column = solutions.coords[:, j]
            scale = max(1.0, float(np.max(np.abs(column))))
            for value in values:
                self.assertLess(np.min(np.abs(column - value)) / scale, 1e-6)

    def test_residuals_of_exact_points(self):
        system = duffing().system
        coords = np.array([[1, 0, 0, 0, 0]], dtype=complex)
        self.assertGreater(residuals(system, coords)[0], 0)
        self.assertEqual(len(residuals(system, solve(system, dreg=3, seed=1).coords)), 5)


class ScanEdgeCaseTests(SimpleTestCase):

    def setUp(self):
        self.par = duffing_parameterization(FieldSpec.prime(7))

    def test_zero_system_keeps_every_point(self):
        system = structured_system(self.par, [equation_from_form(self.par, {}, 1)])
        self.assertEqual(len(brute_force_affine(system)), 49)

    @override_settings(KHOVANSKII={'BRUTE_FORCE_CHUNK': 10})
    def test_chunks_visit_points_in_order(self):
        system = structured_system(self.par, [equation_from_form(self.par, {}, 1)])
        self.assertEqual(brute_force_affine(system), list(itertools.product(range(7), repeat=2)))

    def test_unit_equation_has_no_points(self):
        system = structured_system(self.par, [equation_from_form(self.par, {(1, 0, 0, 0, 0): 1}, 1)])
        self.assertEqual(brute_force_affine(system), [])


class CatalogConsistencyTests(CommutingMatricesMixin, SimpleTestCase):

    def test_osculating_problem(self):
        solutions = self.assert_consistent(osculating_problem().system, 3)
        self.assertEqual(solutions.delta, 5)

    def test_random_duffing_over_a_prime_field(self):
        rng = np.random.default_rng(8)
        coeffs = [[int(c) for c in rng.integers(1, 9716633, size=4)] for _ in range(2)]
        instance = duffing(coeffs, field=FieldSpec.prime(9716633))
        solutions = self.assert_consistent(instance.system, 3, count_only=True)
        self.assertEqual(solutions.delta, 5)


class RegularityChoiceTests(SimpleTestCase):

    def test_square_grassmannian_system_uses_the_closed_forms(self):
        instance = gr36_problem(1, seed=1)
        self.assertEqual(instance.system.s, 9)
        with override_settings(KHOVANSKII={'HILBERT_MAX_POINTS': 1}):
            self.assertEqual(choose_dreg(instance.system), 5)

    @override_settings(KHOVANSKII={'HILBERT_MAX_POINTS': 10})
    def test_enumeration_budget(self):
        system = duffing().system
        with self.assertRaises(RegularityError):
            choose_dreg(system)
        self.assertEqual(choose_dreg(system, adaptive=True), 3)

    def test_solve_checks_the_basis_through_its_degree(self):
        par = failing_parameterization()
        equations = [equation_from_form(par, {(1, 0, 0, 0): 1, (0, 1, 0, 0): 2, (0, 0, 0, 1): 3}, 1),
                     equation_from_form(par, {(1, 0, 0, 0): 5, (0, 0, 1, 0): 7, (0, 0, 0, 1): 1}, 1)]
        with self.assertRaisesMessage(NotKhovanskiiError, 'up to degree 2'):
            solve(structured_system(par, equations), dreg=2)


class RandomStreamTests(SimpleTestCase):

    def test_eigen_weights_follow_the_h_draws(self):
        system = duffing().system
        kernel = kernel_basis(km_matrix(system, 3))
        rng = np.random.default_rng(5)
        ms = multiplication_matrices(system, kernel, 2, seed=5, rng=rng)
        expected = extract_solutions(ms, rng=rng)
        np.testing.assert_array_equal(solve(system, dreg=3, seed=5).coords, expected.coords)
