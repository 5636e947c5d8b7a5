"""Exact dense linear algebra over the rationals and prime fields.

Prime fields go through vectorized numpy row reduction. Rational matrices are
cleared of denominators, screened for independent rows modulo a word-sized
prime and then reduced fraction-free (Bareiss); kernels found that way are
checked exactly against every input row.
"""
import logging
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

import numpy as np

from .conf import get_setting
from .poly import FieldSpec

logger = logging.getLogger(__name__)

INT64_SAFE_MODULUS = 2 ** 31


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def clear_denominators(row: Sequence) -> List[int]:
    """Scales a rational row to a primitive integer row with the same span."""
    den = 1
    for value in row:
        if value:
            den = _lcm(den, Fraction(value).denominator)
    ints = [int(Fraction(value) * den) for value in row]
    g = 0
    for value in ints:
        if value:
            g = gcd(g, value)
    if g > 1:
        ints = [value // g for value in ints]
    return ints


def as_array(rows: Sequence[Sequence[int]], ncols: int, p: int) -> np.ndarray:
    dtype = np.int64 if p < INT64_SAFE_MODULUS else object
    if not rows:
        return np.zeros((0, ncols), dtype=dtype)
    if dtype is object:
        array = np.array([[int(v) % p for v in row] for row in rows], dtype=object)
    else:
        array = np.array([[int(v) % p for v in row] for row in rows], dtype=np.int64)
    return array.reshape(len(rows), ncols)


def rref_mod_p(array: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form modulo ``p``; returns the nonzero rows and pivot columns."""
    a = array.copy() % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        below = np.nonzero(a[r:, c])[0]
        if below.size == 0:
            continue
        i = r + int(below[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        column = a[:, c].copy()
        column[r] = 0
        hits = np.nonzero(column)[0]
        if hits.size:
            a[hits] = (a[hits] - np.outer(column[hits], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def bareiss(rows: List[List[int]]) -> List[int]:
    """Fraction-free echelon form in place, skipping zero columns; returns pivot columns."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    previous = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r, nrows):
            if rows[i][c]:
                break
        else:
            continue
        if i != r:
            rows[r], rows[i] = rows[i], rows[r]
        pivot_row = rows[r]
        pivot = pivot_row[c]
        tail = [(j, pivot_row[j]) for j in range(c + 1, ncols)]
        for i in range(r + 1, nrows):
            row = rows[i]
            factor = row[c]
            if factor:
                for j, v in tail:
                    row[j] = (pivot * row[j] - factor * v) // previous
            else:
                for j, _ in tail:
                    if row[j]:
                        row[j] = pivot * row[j] // previous
            row[c] = 0
        previous = pivot
        pivots.append(c)
        r += 1
    del rows[r:]
    return pivots


def _integer_kernel(echelon: List[List[int]], pivots: List[int], ncols: int) -> List[List[Fraction]]:
    """Back substitution scaled by the last pivot, so every division is exact."""
    if not pivots:
        return [[Fraction(int(i == f)) for i in range(ncols)] for f in range(ncols)]
    scale = echelon[-1][pivots[-1]]
    pivot_set = set(pivots)
    basis = []
    for free in (c for c in range(ncols) if c not in pivot_set):
        x = {free: scale}
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = echelon[r]
            s = 0
            for j, v in x.items():
                if row[j]:
                    s += row[j] * v
            if s:
                q, rem = divmod(-s, row[c])
                assert rem == 0, "fraction-free back substitution left a remainder"
                x[c] = q
        vector = [Fraction(0)] * ncols
        for j, v in x.items():
            vector[j] = Fraction(v, scale)
        basis.append(vector)
    return basis


def _annihilates(rows: List[List[int]], basis: List[List[Fraction]]) -> bool:
    scaled = [clear_denominators(v) for v in basis]
    supports = [[j for j, v in enumerate(vec) if v] for vec in scaled]
    for row in rows:
        for vec, support in zip(scaled, supports):
            if sum(row[j] * vec[j] for j in support):
                return False
    return True


def _screen(rows: List[List[int]], ncols: int) -> List[int]:
    """Indices of the first rows independent modulo the screening prime."""
    p = get_setting('SCREENING_PRIME')
    _, pivots = rref_mod_p(as_array(rows, ncols, p).T, p)
    return pivots


def _rational_kernel(rows: Sequence[Sequence], ncols: int):
    int_rows = [r for r in (clear_denominators(row) for row in rows) if any(r)]
    if not int_rows:
        return _integer_kernel([], [], ncols), [], []
    selected = _screen(int_rows, ncols)
    echelon = [list(int_rows[i]) for i in selected]
    pivots = bareiss(echelon)
    basis = _integer_kernel(echelon, pivots, ncols)
    if len(pivots) != len(selected) or not _annihilates(int_rows, basis):
        logger.warning("modular screening missed rows; falling back to full fraction-free elimination")
        echelon = [list(r) for r in int_rows]
        pivots = bareiss(echelon)
        basis = _integer_kernel(echelon, pivots, ncols)
        selected = None
    return basis, pivots, selected


def kernel(rows: Sequence[Sequence], ncols: int, field: FieldSpec) -> Tuple[List[List], int]:
    """Right kernel basis (identity on free columns) and the rank of ``rows``."""
    if field.is_prime_field:
        p = field.modulus
        reduced, pivots = rref_mod_p(as_array(rows, ncols, p), p)
        pivot_set = set(pivots)
        basis = []
        for free in (c for c in range(ncols) if c not in pivot_set):
            vector = [0] * ncols
            vector[free] = 1
            for r, c in enumerate(pivots):
                vector[c] = int(-reduced[r, free]) % p
            basis.append(vector)
        return basis, len(pivots)
    basis, pivots, _ = _rational_kernel(rows, ncols)
    return basis, len(pivots)


def rank(rows: Sequence[Sequence], ncols: int, field: FieldSpec) -> int:
    if not rows:
        return 0
    if field.is_prime_field:
        return len(rref_mod_p(as_array(rows, ncols, field.modulus), field.modulus)[1])
    echelon = [r for r in (clear_denominators(row) for row in rows) if any(r)]
    return len(bareiss(echelon))


def independent_columns(rows: Sequence[Sequence], ncols: int, field: FieldSpec) -> List[int]:
    """Greedy left-to-right maximal set of independent columns."""
    if not rows:
        return []
    if field.is_prime_field:
        return rref_mod_p(as_array(rows, ncols, field.modulus), field.modulus)[1]
    echelon = [clear_denominators(row) for row in rows]
    return bareiss(echelon)


def independent_rows(rows: Sequence[Sequence], ncols: int, field: FieldSpec) -> List[int]:
    """Greedy top-to-bottom maximal set of independent rows."""
    if not rows:
        return []
    if field.is_prime_field:
        return rref_mod_p(as_array(rows, ncols, field.modulus).T, field.modulus)[1]
    int_rows = [clear_denominators(row) for row in rows]
    nonzero = [i for i, r in enumerate(int_rows) if any(r)]
    if not nonzero:
        return []
    _, _, selected = _rational_kernel([int_rows[i] for i in nonzero], ncols)
    if selected is None:
        transposed = [[int_rows[i][c] for i in nonzero] for c in range(ncols)]
        selected = bareiss(transposed)
    return [nonzero[i] for i in selected]


def inverse(square: Sequence[Sequence], field: FieldSpec) -> List[List]:
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` when singular."""
    n = len(square)
    a = [[field.coerce(v) for v in row] + [field.one if i == j else field.zero for j in range(n)]
         for i, row in enumerate(square)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c]), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        a[c], a[pivot] = a[pivot], a[c]
        inv = field.inv(a[c][c])
        a[c] = [field.mul(v, inv) for v in a[c]]
        for i in range(n):
            factor = a[i][c]
            if i != c and factor:
                pivot_row = a[c]
                a[i] = [field.sub(v, field.mul(factor, w)) for v, w in zip(a[i], pivot_row)]
    return [row[n:] for row in a]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], field: FieldSpec) -> List[List]:
    columns = list(zip(*b)) if b else []
    result = []
    for row in a:
        out = []
        for column in columns:
            total = field.zero
            for x, y in zip(row, column):
                if x and y:
                    total = field.add(total, field.mul(x, y))
            out.append(total)
        result.append(out)
    return result


def is_zero_matrix(a: Sequence[Sequence]) -> bool:
    return not any(any(row) for row in a)


def identity(n: int, field: FieldSpec) -> List[List]:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
