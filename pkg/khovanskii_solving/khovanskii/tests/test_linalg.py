from fractions import Fraction

from django.test import SimpleTestCase

from khovanskii import linalg
from khovanskii.poly import QQ, FieldSpec

F7 = FieldSpec.prime(7)
BIG = FieldSpec.prime(2305843009213693951)


def apply(rows, vector, field):
    return [sum(field.mul(field.coerce(a), b) for a, b in zip(row, vector)) for row in rows]


class KernelTests(SimpleTestCase):
    rows = [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 1]]

    def test_rational_kernel_annihilates_every_row(self):
        basis, rank = linalg.kernel(self.rows, 4, QQ)
        self.assertEqual(rank, 2)
        self.assertEqual(len(basis), 2)
        for vector in basis:
            self.assertEqual(apply(self.rows, vector, QQ), [0, 0, 0])

    def test_rational_rows_with_denominators(self):
        rows = [[Fraction(1, 2), Fraction(1, 3)], [3, 2]]
        basis, rank = linalg.kernel(rows, 2, QQ)
        self.assertEqual(rank, 1)
        self.assertEqual(apply(rows, basis[0], QQ), [0, 0])

    def test_prime_field_kernel(self):
        basis, rank = linalg.kernel(self.rows, 4, F7)
        self.assertEqual(rank, 2)
        for vector in basis:
            self.assertEqual([v % 7 for v in apply(self.rows, vector, F7)], [0, 0, 0])

    def test_large_prime_uses_object_arithmetic(self):
        basis, rank = linalg.kernel(self.rows, 4, BIG)
        self.assertEqual(rank, 2)
        for vector in basis:
            self.assertEqual([v % BIG.modulus for v in apply(self.rows, vector, BIG)], [0, 0, 0])

    def test_empty_matrix_has_full_kernel(self):
        basis, rank = linalg.kernel([], 3, QQ)
        self.assertEqual(rank, 0)
        self.assertEqual(len(basis), 3)


class SelectionTests(SimpleTestCase):

    def test_independent_rows_are_greedy(self):
        rows = [[1, 1, 0], [2, 2, 0], [0, 1, 1], [1, 2, 1]]
        self.assertEqual(linalg.independent_rows(rows, 3, QQ), [0, 2])
        self.assertEqual(linalg.independent_rows(rows, 3, F7), [0, 2])

    def test_independent_columns_are_greedy(self):
        rows = [[1, 2, 0], [0, 0, 1]]
        self.assertEqual(linalg.independent_columns(rows, 3, QQ), [0, 2])
        self.assertEqual(linalg.independent_columns(rows, 3, F7), [0, 2])

    def test_rank(self):
        self.assertEqual(linalg.rank([[1, 2], [2, 4]], 2, QQ), 1)
        self.assertEqual(linalg.rank([[1, 2], [3, 4]], 2, F7), 2)


class InverseTests(SimpleTestCase):

    def test_inverse_times_matrix_is_identity(self):
        for field in (QQ, F7):
            square = [[field.coerce(v) for v in row] for row in [[2, 1], [1, 1]]]
            product = linalg.matmul(linalg.inverse(square, field), square, field)
            self.assertEqual(product, linalg.identity(2, field))

    def test_singular_matrix(self):
        with self.assertRaises(ZeroDivisionError):
            linalg.inverse([[1, 2], [2, 4]], QQ)

    def test_clear_denominators_is_primitive(self):
        self.assertEqual(linalg.clear_denominators([Fraction(1, 2), Fraction(-1, 3), 0]), [3, -2, 0])
